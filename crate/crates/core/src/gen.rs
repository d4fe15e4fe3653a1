// SPDX-License-Identifier: Apache-2.0

//! Seeded random AIGs for tests and synthetic corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::{Aig, Literal};

/// Random AIG with inputs `pi<k>` and outputs `po<k>`. Fanins are drawn
/// from all earlier signals with a bias toward recent nodes so the graph
/// gains depth. The last And node always drives `po0`, so the result has
/// at least one And when `num_ands > 0` and `num_pis >= 2`.
pub fn random_aig(num_pis: usize, num_ands: usize, num_pos: usize, seed: u64) -> Aig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Aig::new();
    let mut pool: Vec<Literal> = (0..num_pis).map(|i| g.add_input(format!("pi{i}"))).collect();
    let mut attempts = 0;
    while g.and_count() < num_ands && pool.len() >= 2 && attempts < 20 * num_ands.max(1) {
        attempts += 1;
        let pick = |rng: &mut ChaCha8Rng| {
            let n = pool.len();
            let i = if rng.gen_bool(0.5) {
                n - 1 - rng.gen_range(0..n.min(8))
            } else {
                rng.gen_range(0..n)
            };
            pool[i].xor(rng.gen_bool(0.5))
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let before = g.num_nodes();
        let r = g.add_and(a, b).expect("pool literals exist");
        if g.num_nodes() > before {
            pool.push(r);
        }
    }
    let candidates: Vec<Literal> = pool.iter().copied().skip(num_pis).collect();
    let drivers = if candidates.is_empty() { pool.clone() } else { candidates };
    for k in 0..num_pos {
        let d = if k == 0 || drivers.is_empty() {
            drivers.last().copied().unwrap_or(Literal::FALSE)
        } else {
            drivers[rng.gen_range(0..drivers.len())]
        };
        g.add_output(format!("po{k}"), d.xor(rng.gen_bool(0.3))).expect("driver exists");
    }
    g.cleanup()
}
