// SPDX-License-Identifier: Apache-2.0

use super::network::Network;

/// A cut of some root node: sorted distinct leaves and the root function
/// over them (bit `m` of the table is the value under leaf assignment `m`,
/// leaf `i` being bit `i`). Tables of cuts with fewer than four leaves
/// repeat their pattern, so the function ignores the missing variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub leaves: Vec<u32>,
    pub truth_table: u16,
}

/// Greedy reconvergence-driven cut growth from `root`. Expands the leaf
/// whose expansion adds the fewest new leaves, preferring leaves inside the
/// root's fanout-free cone, until no expansion fits in `limit` leaves.
pub(crate) fn grow_cut(net: &mut Network, root: u32, limit: usize) -> Vec<u32> {
    let cone = net.mffc(root, &[]);
    net.new_marks();
    for &n in &cone {
        net.mark(n);
    }
    let (a, b) = net.fanins(root).expect("cut root is an and node");
    let mut cut = vec![a.node_index(), b.node_index()];
    cut.sort_unstable();
    cut.dedup();
    loop {
        let mut best: Option<((bool, isize, u32), usize)> = None;
        for (pos, &leaf) in cut.iter().enumerate() {
            let Some((a, b)) = net.fanins(leaf) else { continue };
            let fresh = [a.node_index(), b.node_index()]
                .iter()
                .filter(|f| **f != 0 && cut.binary_search(f).is_err())
                .count() as isize
                - if a.node_index() == b.node_index() && cut.binary_search(&a.node_index()).is_err() {
                    1
                } else {
                    0
                };
            if cut.len() as isize - 1 + fresh > limit as isize {
                continue;
            }
            let key = (!net.is_marked(leaf), fresh - 1, leaf);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, pos));
            }
        }
        let Some((_, pos)) = best else { break };
        let leaf = cut.remove(pos);
        let (a, b) = net.fanins(leaf).expect("expanded leaf is an and node");
        for f in [a.node_index(), b.node_index()] {
            if f != 0 {
                if let Err(at) = cut.binary_search(&f) {
                    cut.insert(at, f);
                }
            }
        }
    }
    cut
}
