// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use crate::aig::{Aig, Literal};

use super::cuts::grow_cut;
use super::network::{Graft, Network};
use super::truth::TruthTable;
use super::{accept, check_range, TransformError, TransformOutcome};

pub const DEFAULT_MAX_WINDOW_INPUTS: usize = 8;
const MAX_DIVISORS: usize = 150;

/// Window of a root node: divisor nodes with their functions over the
/// window leaves. Divisors never lie in the root's cone or fanout.
struct Window {
    divisors: Vec<u32>,
    truths: Vec<TruthTable>,
    target: TruthTable,
    cone_size: usize,
}

fn build_window(net: &mut Network, root: u32, limit: usize) -> Window {
    let leaves = grow_cut(net, root, limit);
    let n = leaves.len();
    let mut truth: HashMap<u32, TruthTable> = HashMap::new();
    truth.insert(0, TruthTable::zero(n));
    for (i, &l) in leaves.iter().enumerate() {
        truth.insert(l, TruthTable::var(n, i));
    }
    // post-order of the cone between leaves and root
    let mut order = Vec::new();
    let mut stack = vec![(root, false)];
    while let Some((v, done)) = stack.pop() {
        if truth.contains_key(&v) {
            continue;
        }
        let (a, b) = net.fanins(v).expect("window interior is an and node");
        if done {
            let ta = truth[&a.node_index()].xor_with(a.is_complemented());
            let tb = truth[&b.node_index()].xor_with(b.is_complemented());
            truth.insert(v, ta.and(&tb));
            order.push(v);
        } else {
            stack.push((v, true));
            for f in [b.node_index(), a.node_index()] {
                if !truth.contains_key(&f) {
                    stack.push((f, false));
                }
            }
        }
    }
    let cone = net.mffc(root, &leaves);
    net.new_marks();
    for &c in &cone {
        net.mark(c);
    }
    let mut divisors: Vec<u32> = leaves.clone();
    divisors.extend(order.iter().copied().filter(|&v| !net.is_marked(v)));
    divisors.truncate(MAX_DIVISORS);
    let mut is_div: HashMap<u32, ()> = divisors.iter().map(|&d| (d, ())).collect();
    let mut i = 0;
    while i < divisors.len() && divisors.len() < MAX_DIVISORS {
        let d = divisors[i];
        i += 1;
        let mut fanouts = net.fanouts(d).to_vec();
        fanouts.sort_unstable();
        fanouts.dedup();
        for f in fanouts {
            if divisors.len() >= MAX_DIVISORS {
                break;
            }
            if is_div.contains_key(&f) || net.is_marked(f) || !net.is_and(f) {
                continue;
            }
            let (a, b) = net.fanins(f).expect("live and node");
            if !(is_div.contains_key(&a.node_index()) && is_div.contains_key(&b.node_index())) {
                continue;
            }
            let ta = truth[&a.node_index()].xor_with(a.is_complemented());
            let tb = truth[&b.node_index()].xor_with(b.is_complemented());
            truth.insert(f, ta.and(&tb));
            is_div.insert(f, ());
            divisors.push(f);
        }
    }
    let truths = divisors.iter().map(|d| truth[d].clone()).collect();
    Window {
        divisors,
        truths,
        target: truth[&root].clone(),
        cone_size: cone.len(),
    }
}

fn implies(a: &TruthTable, b: &TruthTable) -> bool {
    a.and_not(b).is_zero()
}

/// Best replacement of the window's root: a divisor literal (0-resub), or
/// else the first AND/OR of two divisor literals (1-resub).
fn find_resub(net: &Network, root: u32, w: &Window) -> Option<(isize, Graft)> {
    let target = &w.target;
    let not_target = target.not();
    for (d, t) in w.divisors.iter().zip(&w.truths) {
        for c in [false, true] {
            if t.xor_with(c) == *target {
                let graft = Graft {
                    leaves: vec![Literal::new(*d, c)],
                    ops: Vec::new(),
                    output: Graft::leaf(0, false),
                };
                return Some((w.cone_size as isize, graft));
            }
        }
    }
    // f = x & y needs f -> x and f -> y; f = x | y is !(!x & !y)
    for (goal, out_c) in [(target, false), (&not_target, true)] {
        let cands: Vec<(usize, bool)> = w
            .truths
            .iter()
            .enumerate()
            .flat_map(|(i, t)| [(i, false), (i, true)].into_iter().filter(move |&(_, c)| implies(goal, &t.xor_with(c))))
            .collect();
        for (x, &(i, ci)) in cands.iter().enumerate() {
            let ti = w.truths[i].xor_with(ci);
            for &(j, cj) in &cands[x + 1..] {
                if j == i {
                    continue;
                }
                if ti.and(&w.truths[j].xor_with(cj)) != *goal {
                    continue;
                }
                let mut graft = Graft {
                    leaves: vec![Literal::new(w.divisors[i], ci), Literal::new(w.divisors[j], cj)],
                    ..Default::default()
                };
                graft.output = graft.push(Graft::leaf(0, false), Graft::leaf(1, false)) ^ out_c as u32;
                let Some((added, _)) = net.estimate(&graft, root) else {
                    continue;
                };
                return Some((w.cone_size as isize - added as isize, graft));
            }
        }
    }
    None
}

/// Window-based resubstitution: each node is re-expressed with existing
/// divisor signals of its window (directly, or through one new AND/OR),
/// freeing the node's fanout-free cone.
pub fn resubstitute(aig: &Aig, zero_cost: bool, max_window_inputs: usize) -> Result<TransformOutcome, TransformError> {
    check_range("max_window_inputs", max_window_inputs, 2, 12)?;
    let mut net = Network::from_aig(aig);
    let original = net.len() as u32;
    let mut applied = 0;
    for node in 1..original {
        if !net.is_and(node) {
            continue;
        }
        let window = build_window(&mut net, node, max_window_inputs);
        let Some((gain, graft)) = find_resub(&net, node, &window) else {
            continue;
        };
        if accept(gain, zero_cost) {
            let lit = net.materialize(&graft);
            net.replace(node, lit);
            applied += 1;
        }
    }
    Ok(TransformOutcome::new(aig, net.to_aig(), applied))
}
