// SPDX-License-Identifier: Apache-2.0

//! Simulation-based combinational equivalence checking.
//!
//! Inputs and outputs of the two graphs are matched by name. Input variables
//! are numbered in sorted-name order so both argument orders enumerate the
//! same assignments.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::aig::Aig;
use crate::transforms::truth::var_word;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error("input sets differ: {0}")]
    InputMismatch(String),
    #[error("output sets differ: {0}")]
    OutputMismatch(String),
    #[error("{count} inputs exceed the exhaustive limit of {limit}")]
    TooManyInputs { count: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivMethod {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EquivReport {
    pub equivalent: bool,
    pub method: EquivMethod,
    pub patterns_checked: u64,
    /// Input values (by name, sorted) of the first distinguishing pattern.
    pub first_mismatch: Option<Vec<(String, bool)>>,
}

struct Pairing {
    names: Vec<String>,
    a_pos: Vec<usize>,
    b_pos: Vec<usize>,
    outputs: Vec<(usize, usize)>,
}

fn pair_up(a: &Aig, b: &Aig) -> Result<Pairing, EquivError> {
    let mut names: Vec<String> = a.input_names().map(str::to_string).collect();
    names.sort();
    let mut b_names: Vec<String> = b.input_names().map(str::to_string).collect();
    b_names.sort();
    if names != b_names {
        return Err(EquivError::InputMismatch(format!("{names:?} vs {b_names:?}")));
    }
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(EquivError::InputMismatch("duplicate input names".into()));
    }
    let index = |g: &Aig| -> HashMap<String, usize> {
        g.input_names().enumerate().map(|(i, n)| (n.to_string(), i)).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let a_pos = names.iter().map(|n| ia[n]).collect();
    let b_pos = names.iter().map(|n| ib[n]).collect();

    let b_out: HashMap<&str, usize> = b
        .primary_outputs()
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.as_str(), i))
        .collect();
    if b_out.len() != b.primary_outputs().len() || a.primary_outputs().len() != b_out.len() {
        return Err(EquivError::OutputMismatch(format!(
            "{} vs {} outputs",
            a.primary_outputs().len(),
            b.primary_outputs().len()
        )));
    }
    let mut outputs = Vec::new();
    for (i, (name, _)) in a.primary_outputs().iter().enumerate() {
        match b_out.get(name.as_str()) {
            Some(&j) => outputs.push((i, j)),
            None => return Err(EquivError::OutputMismatch(format!("`{name}` missing"))),
        }
    }
    Ok(Pairing {
        names,
        a_pos,
        b_pos,
        outputs,
    })
}

impl Pairing {
    /// Simulates one batch; returns the first differing bit, if any.
    fn compare(&self, a: &Aig, b: &Aig, words: &[u64], valid: u64) -> Option<u32> {
        let mut wa = vec![0u64; words.len()];
        let mut wb = vec![0u64; words.len()];
        for (v, &w) in words.iter().enumerate() {
            wa[self.a_pos[v]] = w;
            wb[self.b_pos[v]] = w;
        }
        let oa = a.simulate(&wa).expect("word count matches inputs");
        let ob = b.simulate(&wb).expect("word count matches inputs");
        let diff = self
            .outputs
            .iter()
            .fold(0u64, |acc, &(i, j)| acc | (oa[i] ^ ob[j]));
        let diff = diff & valid;
        (diff != 0).then(|| diff.trailing_zeros())
    }

    fn assignment(&self, words: &[u64], bit: u32) -> Vec<(String, bool)> {
        self.names
            .iter()
            .zip(words)
            .map(|(n, w)| (n.clone(), (w >> bit) & 1 == 1))
            .collect()
    }
}

/// Checks every output on all `2^inputs` assignments, 64 per word.
pub fn exhaustive_equiv(a: &Aig, b: &Aig, limit: usize) -> Result<EquivReport, EquivError> {
    let pairing = pair_up(a, b)?;
    let n = pairing.names.len();
    if n > limit {
        return Err(EquivError::TooManyInputs { count: n, limit });
    }
    let total: u64 = 1 << n;
    let batches = total.div_ceil(64);
    let valid = if total >= 64 { !0 } else { (1u64 << total) - 1 };
    let mut words = vec![0u64; n];
    for batch in 0..batches as usize {
        for (v, w) in words.iter_mut().enumerate() {
            *w = var_word(v, batch);
        }
        if let Some(bit) = pairing.compare(a, b, &words, valid) {
            return Ok(EquivReport {
                equivalent: false,
                method: EquivMethod::Exhaustive,
                patterns_checked: batch as u64 * 64 + bit as u64 + 1,
                first_mismatch: Some(pairing.assignment(&words, bit)),
            });
        }
    }
    Ok(EquivReport {
        equivalent: true,
        method: EquivMethod::Exhaustive,
        patterns_checked: total,
        first_mismatch: None,
    })
}

/// Random-pattern simulation with ChaCha8 seeded by `seed`; one random word
/// per input (sorted-name order) per round. A `true` result is only
/// probabilistic evidence of equivalence.
pub fn random_sim_equiv(a: &Aig, b: &Aig, num_words: usize, seed: u64) -> Result<EquivReport, EquivError> {
    let pairing = pair_up(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = vec![0u64; pairing.names.len()];
    for round in 0..num_words {
        for w in words.iter_mut() {
            *w = rng.next_u64();
        }
        if let Some(bit) = pairing.compare(a, b, &words, !0) {
            return Ok(EquivReport {
                equivalent: false,
                method: EquivMethod::Random,
                patterns_checked: round as u64 * 64 + bit as u64 + 1,
                first_mismatch: Some(pairing.assignment(&words, bit)),
            });
        }
    }
    Ok(EquivReport {
        equivalent: true,
        method: EquivMethod::Random,
        patterns_checked: num_words as u64 * 64,
        first_mismatch: None,
    })
}

/// Exhaustive up to `limit` inputs, otherwise `random_words` random rounds.
pub fn check_equiv(a: &Aig, b: &Aig, limit: usize, random_words: usize, seed: u64) -> Result<EquivReport, EquivError> {
    if a.primary_inputs().len() <= limit {
        exhaustive_equiv(a, b, limit)
    } else {
        random_sim_equiv(a, b, random_words, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::Literal;

    fn and_or(use_or: bool) -> Aig {
        let mut g = Aig::new();
        let x = g.add_input("x");
        let y = g.add_input("y");
        let f = if use_or { g.or(x, y).unwrap() } else { g.add_and(x, y).unwrap() };
        g.add_output("f", f).unwrap();
        g
    }

    #[test]
    fn double_negation_is_equivalent() {
        let a = and_or(false);
        let mut b = Aig::new();
        let x = b.add_input("x");
        let y = b.add_input("y");
        let f = b.add_and(x, y).unwrap();
        b.add_output("f", !!f).unwrap();
        let r = exhaustive_equiv(&a, &b, 16).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.patterns_checked, 4);
    }

    #[test]
    fn and_vs_or_first_mismatch() {
        let r = exhaustive_equiv(&and_or(false), &and_or(true), 16).unwrap();
        assert!(!r.equivalent);
        assert_eq!(
            r.first_mismatch.unwrap(),
            vec![("x".to_string(), true), ("y".to_string(), false)]
        );
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = and_or(false);
        let mut b = Aig::new();
        let y = b.add_input("y");
        let x = b.add_input("x");
        let f = b.add_and(y, x).unwrap();
        b.add_output("f", f).unwrap();
        assert!(exhaustive_equiv(&a, &b, 16).unwrap().equivalent);
        assert!(random_sim_equiv(&a, &b, 4, 7).unwrap().equivalent);
    }

    #[test]
    fn complement_detected_by_one_random_word() {
        let mut a = Aig::new();
        let x = a.add_input("x");
        a.add_output("o", x).unwrap();
        let mut b = Aig::new();
        let x = b.add_input("x");
        b.add_output("o", !x).unwrap();
        let r = random_sim_equiv(&a, &b, 1, 0).unwrap();
        assert!(!r.equivalent);
        assert_eq!(r.method, EquivMethod::Random);
    }

    #[test]
    fn interface_mismatches() {
        let a = and_or(false);
        let mut b = Aig::new();
        let x = b.add_input("x");
        let z = b.add_input("z");
        let f = b.add_and(x, z).unwrap();
        b.add_output("f", f).unwrap();
        assert!(matches!(exhaustive_equiv(&a, &b, 16), Err(EquivError::InputMismatch(_))));

        let mut c = Aig::new();
        let x = c.add_input("x");
        c.add_input("y");
        c.add_output("g", x).unwrap();
        assert!(matches!(exhaustive_equiv(&a, &c, 16), Err(EquivError::OutputMismatch(_))));
    }

    #[test]
    fn limit_enforced() {
        let mut g = Aig::new();
        let mut acc = Literal::TRUE;
        for i in 0..17 {
            let x = g.add_input(format!("i{i}"));
            acc = g.add_and(acc, x).unwrap();
        }
        g.add_output("o", acc).unwrap();
        assert_eq!(
            exhaustive_equiv(&g, &g, 16).unwrap_err(),
            EquivError::TooManyInputs { count: 17, limit: 16 }
        );
        assert!(random_sim_equiv(&g, &g, 10, 1).unwrap().equivalent);
    }

    #[test]
    fn random_is_deterministic() {
        let a = and_or(false);
        let b = and_or(true);
        assert_eq!(random_sim_equiv(&a, &b, 3, 42).unwrap(), random_sim_equiv(&a, &b, 3, 42).unwrap());
    }
}
