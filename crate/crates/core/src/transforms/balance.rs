// SPDX-License-Identifier: Apache-2.0

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::aig::{Aig, AigNode, Literal};

use super::TransformOutcome;

/// Depth-oriented tree balancing.
///
/// Each multi-input AND ("supergate") is collected through uncomplemented
/// edges into single-fanout And nodes, then rebuilt by repeatedly joining
/// the two lowest-level operands (ties: lower node index). The rebuilt tree
/// is kept only if its root is no deeper than the original shape would be.
pub fn balance(aig: &Aig) -> TransformOutcome {
    let fanouts = aig.fanout_counts();
    let nodes = aig.nodes();
    // a node is absorbed when its only reference is a plain And fanin edge
    let mut absorbed = vec![false; nodes.len()];
    let mut plain_ref = vec![0u32; nodes.len()];
    for node in nodes {
        if let AigNode::And(a, b) = node {
            for f in [a, b] {
                if !f.is_complemented() {
                    plain_ref[f.node()] += 1;
                }
            }
        }
    }
    for (i, node) in nodes.iter().enumerate() {
        absorbed[i] = node.is_and() && fanouts[i] == 1 && plain_ref[i] == 1;
    }

    let mut out = Aig::new();
    let mut map = vec![Literal::FALSE; nodes.len()];
    let mut level: Vec<u32> = vec![0];
    let mut applied = 0;
    for (i, node) in nodes.iter().enumerate() {
        match node {
            AigNode::Constant0 => {}
            AigNode::PrimaryInput(name) => {
                map[i] = out.add_input(name.clone());
                level.push(0);
            }
            AigNode::And(..) if absorbed[i] => {}
            AigNode::And(..) => {
                let mut leaves = Vec::new();
                collect_supergate(aig, &absorbed, i, &mut leaves);
                let mapped: Vec<Literal> = leaves
                    .iter()
                    .map(|l| map[l.node()].xor(l.is_complemented()))
                    .collect();
                let original = shape_level(aig, &absorbed, &map, &level, i);
                if predicted_level(&level, &mapped) <= original {
                    let balanced = join_lowest(&mut out, &mut level, &mapped);
                    if lit_level(&level, balanced) < original {
                        applied += 1;
                    }
                    map[i] = balanced;
                } else {
                    map[i] = rebuild_shape(aig, &absorbed, &map, &mut out, &mut level, i);
                }
            }
        }
    }
    for (name, d) in aig.primary_outputs() {
        out.push_output_unchecked(name.clone(), map[d.node()].xor(d.is_complemented()));
    }
    TransformOutcome::new(aig, out.cleanup(), applied)
}

fn lit_level(levels: &[u32], l: Literal) -> u32 {
    levels.get(l.node()).copied().unwrap_or(0)
}

fn collect_supergate(aig: &Aig, absorbed: &[bool], root: usize, leaves: &mut Vec<Literal>) {
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        let (a, b) = aig.node(n).fanins().expect("supergate member is an and");
        // push in reverse so fanin0 is visited first
        for f in [b, a] {
            if !f.is_complemented() && absorbed[f.node()] {
                stack.push(f.node());
            } else {
                leaves.push(f);
            }
        }
    }
}

fn add_and_tracked(out: &mut Aig, levels: &mut Vec<u32>, a: Literal, b: Literal) -> Literal {
    let before = out.num_nodes();
    let r = out.and_unchecked(a, b);
    if out.num_nodes() > before {
        levels.push(1 + lit_level(levels, a).max(lit_level(levels, b)));
    }
    r
}

/// Operands after removing duplicates and constant-true; `Err` carries the
/// constant the whole conjunction collapses to.
fn simplify_operands(operands: &[Literal]) -> Result<Vec<Literal>, Literal> {
    let mut ops: Vec<Literal> = operands.to_vec();
    ops.sort_unstable();
    ops.dedup();
    if ops.windows(2).any(|w| w[0] == !w[1]) || ops.contains(&Literal::FALSE) {
        return Err(Literal::FALSE);
    }
    ops.retain(|&l| l != Literal::TRUE);
    if ops.is_empty() {
        return Err(Literal::TRUE);
    }
    Ok(ops)
}

/// Root level of the lowest-first join, ignoring structural reuse (which
/// can only keep or lower it).
fn predicted_level(levels: &[u32], operands: &[Literal]) -> u32 {
    let Ok(ops) = simplify_operands(operands) else { return 0 };
    let mut heap: BinaryHeap<Reverse<u32>> = ops.iter().map(|&l| Reverse(lit_level(levels, l))).collect();
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().expect("two entries");
        let Reverse(b) = heap.pop().expect("two entries");
        heap.push(Reverse(1 + a.max(b)));
    }
    heap.pop().map_or(0, |Reverse(l)| l)
}

fn join_lowest(out: &mut Aig, levels: &mut Vec<u32>, operands: &[Literal]) -> Literal {
    let ops = match simplify_operands(operands) {
        Ok(ops) => ops,
        Err(constant) => return constant,
    };
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = ops
        .iter()
        .map(|&l| Reverse((lit_level(levels, l), l.key())))
        .collect();
    while heap.len() > 1 {
        let Reverse((_, a)) = heap.pop().expect("two entries");
        let Reverse((_, b)) = heap.pop().expect("two entries");
        let r = add_and_tracked(out, levels, Literal::from_key(a), Literal::from_key(b));
        heap.push(Reverse((lit_level(levels, r), r.key())));
    }
    let Reverse((_, k)) = heap.pop().expect("one entry");
    Literal::from_key(k)
}

/// Level the supergate rooted at `n` would have if copied with its
/// original shape onto the already-mapped leaves.
fn shape_level(aig: &Aig, absorbed: &[bool], map: &[Literal], levels: &[u32], n: usize) -> u32 {
    let (a, b) = aig.node(n).fanins().expect("and node");
    let side = |f: Literal| {
        if !f.is_complemented() && absorbed[f.node()] {
            shape_level(aig, absorbed, map, levels, f.node())
        } else {
            lit_level(levels, map[f.node()])
        }
    };
    1 + side(a).max(side(b))
}

fn rebuild_shape(
    aig: &Aig,
    absorbed: &[bool],
    map: &[Literal],
    out: &mut Aig,
    levels: &mut Vec<u32>,
    n: usize,
) -> Literal {
    let (a, b) = aig.node(n).fanins().expect("and node");
    let side = |f: Literal, out: &mut Aig, levels: &mut Vec<u32>| {
        if !f.is_complemented() && absorbed[f.node()] {
            rebuild_shape(aig, absorbed, map, out, levels, f.node())
        } else {
            map[f.node()].xor(f.is_complemented())
        }
    };
    let x = side(a, out, levels);
    let y = side(b, out, levels);
    add_and_tracked(out, levels, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::exhaustive_equiv;

    fn chain(n: usize) -> Aig {
        let mut g = Aig::new();
        let pis: Vec<_> = (0..n).map(|i| g.add_input(format!("x{i}"))).collect();
        let mut acc = pis[0];
        for &p in &pis[1..] {
            acc = g.add_and(acc, p).unwrap();
        }
        g.add_output("y", acc).unwrap();
        g
    }

    /// Minimum depth over all binary AND trees with `n` leaves, by exhaustive
    /// enumeration of tree shapes.
    fn optimal_tree_depth(n: usize) -> usize {
        if n == 1 {
            return 0;
        }
        (1..n)
            .map(|k| 1 + optimal_tree_depth(k).max(optimal_tree_depth(n - k)))
            .min()
            .unwrap()
    }

    #[test]
    fn chain_of_eight_balances_to_depth_three() {
        assert_eq!(optimal_tree_depth(8), 3);
        let g = chain(8);
        let out = balance(&g);
        assert_eq!(out.depth_before, 7);
        assert_eq!(out.depth_after, optimal_tree_depth(8));
        assert_eq!(out.nodes_after, 7);
        assert!(exhaustive_equiv(&g, &out.result, 16).unwrap().equivalent);
    }

    #[test]
    fn balanced_tree_is_a_fixpoint() {
        let mut g = Aig::new();
        let p: Vec<_> = (0..4).map(|i| g.add_input(format!("x{i}"))).collect();
        let l = g.add_and(p[0], p[1]).unwrap();
        let r = g.add_and(p[2], p[3]).unwrap();
        let t = g.add_and(l, r).unwrap();
        g.add_output("y", t).unwrap();
        let out = balance(&g);
        assert_eq!(out.depth_after, 2);
        assert_eq!(out.applied_count, 0);
        assert_eq!(out.result, g);
    }

    #[test]
    fn single_and_unchanged() {
        let mut g = Aig::new();
        let a = g.add_input("a");
        let b = g.add_input("b");
        let f = g.add_and(a, !b).unwrap();
        g.add_output("f", !f).unwrap();
        let out = balance(&g);
        assert_eq!(out.result, g);
    }

    #[test]
    fn shared_and_complemented_edges_bound_supergates() {
        let mut g = Aig::new();
        let p: Vec<_> = (0..6).map(|i| g.add_input(format!("x{i}"))).collect();
        let s = g.add_and(p[0], p[1]).unwrap();
        let t1 = g.add_and(s, p[2]).unwrap();
        let t2 = g.add_and(t1, p[3]).unwrap();
        let u = g.add_and(!t2, p[4]).unwrap();
        let v = g.add_and(u, p[5]).unwrap();
        let w = g.add_and(s, p[5]).unwrap();
        g.add_output("v", v).unwrap();
        g.add_output("w", w).unwrap();
        let out = balance(&g);
        assert!(out.depth_after <= out.depth_before);
        assert!(out.nodes_after <= out.nodes_before);
        assert!(exhaustive_equiv(&g, &out.result, 16).unwrap().equivalent);
    }
}
