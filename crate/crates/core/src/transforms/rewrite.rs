// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashSet, VecDeque};

use crate::aig::{Aig, Literal};

use super::cuts::Cut;
use super::network::{Graft, Network};
use super::npn::NpnLibrary;
use super::{accept, TransformOutcome};

pub const CUT_SIZE: usize = 4;
pub const MAX_CUTS_PER_NODE: usize = 8;
const EXPLORE_LIMIT: usize = 128;

/// Four-feasible cuts of `root` by top-down leaf expansion. At most
/// [`MAX_CUTS_PER_NODE`] are kept, larger cuts first, then by leaf order.
/// The trivial cut `{root}` is excluded.
pub(crate) fn node_cuts(net: &Network, root: u32, k: usize, max_cuts: usize) -> Vec<Vec<u32>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut found = Vec::new();
    let mut queue = VecDeque::from([vec![root]]);
    while let Some(cut) = queue.pop_front() {
        for &leaf in &cut {
            let Some((a, b)) = net.fanins(leaf) else { continue };
            let mut next: Vec<u32> = cut.iter().copied().filter(|&l| l != leaf).collect();
            for f in [a.node_index(), b.node_index()] {
                if f != 0 && !next.contains(&f) {
                    next.push(f);
                }
            }
            if next.len() > k || next.is_empty() {
                continue;
            }
            next.sort_unstable();
            if seen.insert(next.clone()) {
                found.push(next.clone());
                if seen.len() >= EXPLORE_LIMIT {
                    queue.clear();
                    break;
                }
                queue.push_back(next);
            }
        }
    }
    found.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
    found.truncate(max_cuts);
    found
}

/// Cuts of `root` in `aig` with their truth tables, as used by [`rewrite`].
pub fn enumerate_cuts(aig: &Aig, root: u32) -> Vec<Cut> {
    let net = Network::from_aig(aig);
    if !net.is_and(root) {
        return Vec::new();
    }
    node_cuts(&net, root, CUT_SIZE, MAX_CUTS_PER_NODE)
        .into_iter()
        .map(|leaves| {
            let truth_table = net.cone_word(root, &leaves) as u16;
            Cut { leaves, truth_table }
        })
        .collect()
}

/// DAG-aware rewriting with 4-input cuts and the NPN template library.
///
/// For each node, every stored cut's function is looked up in `library`;
/// the gain of a candidate is the size of the node's cone freed by the
/// replacement minus the nodes the template actually adds after structural
/// reuse. The best candidate (first on ties) is committed if accepted.
pub fn rewrite(aig: &Aig, zero_cost: bool, library: &NpnLibrary) -> TransformOutcome {
    let mut net = Network::from_aig(aig);
    let original = net.len() as u32;
    let mut applied = 0;
    for node in 1..original {
        if !net.is_and(node) {
            continue;
        }
        let mut best: Option<(isize, Graft)> = None;
        for leaves in node_cuts(&net, node, CUT_SIZE, MAX_CUTS_PER_NODE) {
            let tt = net.cone_word(node, &leaves) as u16;
            let leaf_lits: Vec<Literal> = leaves.iter().map(|&l| Literal::new(l, false)).collect();
            let Some(graft) = library.graft_for(tt, &leaf_lits) else {
                continue;
            };
            let cone = net.mffc(node, &leaves);
            net.new_marks();
            for &n in &cone {
                net.mark(n);
            }
            let Some((added, _)) = net.estimate(&graft, node) else {
                continue;
            };
            let gain = cone.len() as isize - added as isize;
            if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, graft));
            }
        }
        if let Some((gain, graft)) = best {
            if accept(gain, zero_cost) {
                let lit = net.materialize(&graft);
                net.replace(node, lit);
                applied += 1;
            }
        }
    }
    TransformOutcome::new(aig, net.to_aig(), applied)
}
