// SPDX-License-Identifier: Apache-2.0

use crate::aig::{Aig, Literal};

use super::cuts::grow_cut;
use super::network::{Graft, Network};
use super::truth::{isop, Cube, TruthTable};
use super::{accept, check_range, TransformError, TransformOutcome};

pub const DEFAULT_MAX_CONE_INPUTS: usize = 10;

/// Factored form of a sum of products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Expr {
    Const(bool),
    Lit(usize, bool),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

fn cube_expr(cube: Cube, num_vars: usize) -> Expr {
    let lits: Vec<Expr> = (0..num_vars)
        .filter(|&v| (cube.mask >> v) & 1 == 1)
        .map(|v| Expr::Lit(v, (cube.polarity >> v) & 1 == 1))
        .collect();
    match lits.len() {
        0 => Expr::Const(true),
        1 => lits.into_iter().next().unwrap(),
        _ => Expr::And(lits),
    }
}

/// Greedy algebraic factoring: repeatedly divide by the literal occurring in
/// the most cubes (ties: lowest variable, positive phase first).
pub(crate) fn factor(cubes: &[Cube], num_vars: usize) -> Expr {
    if cubes.is_empty() {
        return Expr::Const(false);
    }
    if cubes.contains(&Cube::TAUTOLOGY) {
        return Expr::Const(true);
    }
    if cubes.len() == 1 {
        return cube_expr(cubes[0], num_vars);
    }
    let mut best: Option<(usize, usize, bool)> = None;
    for v in 0..num_vars {
        for positive in [true, false] {
            let count = cubes.iter().filter(|c| c.has(v, positive)).count();
            if count >= 2 && best.is_none_or(|(c, _, _)| count > c) {
                best = Some((count, v, positive));
            }
        }
    }
    let Some((_, var, positive)) = best else {
        return Expr::Or(cubes.iter().map(|&c| cube_expr(c, num_vars)).collect());
    };
    let quotient: Vec<Cube> = cubes
        .iter()
        .filter(|c| c.has(var, positive))
        .map(|c| c.without(var))
        .collect();
    let remainder: Vec<Cube> = cubes.iter().copied().filter(|c| !c.has(var, positive)).collect();
    let lit = Expr::Lit(var, positive);
    let term = match factor(&quotient, num_vars) {
        Expr::Const(true) => lit,
        Expr::And(mut xs) => {
            xs.insert(0, lit);
            Expr::And(xs)
        }
        q => Expr::And(vec![lit, q]),
    };
    if remainder.is_empty() {
        return term;
    }
    match factor(&remainder, num_vars) {
        Expr::Or(mut xs) => {
            xs.insert(0, term);
            Expr::Or(xs)
        }
        r => Expr::Or(vec![term, r]),
    }
}

fn emit(expr: &Expr, graft: &mut Graft) -> u32 {
    match expr {
        Expr::Const(v) => Graft::FALSE | *v as u32,
        Expr::Lit(v, positive) => Graft::leaf(*v, !positive),
        Expr::And(xs) => {
            let refs: Vec<u32> = xs.iter().map(|x| emit(x, graft)).collect();
            join(graft, refs)
        }
        Expr::Or(xs) => {
            let refs: Vec<u32> = xs.iter().map(|x| emit(x, graft) ^ 1).collect();
            join(graft, refs) ^ 1
        }
    }
}

/// Balanced conjunction of operand references.
fn join(graft: &mut Graft, mut refs: Vec<u32>) -> u32 {
    while refs.len() > 1 {
        let mut next = Vec::with_capacity(refs.len().div_ceil(2));
        for pair in refs.chunks(2) {
            next.push(match *pair {
                [a, b] => graft.push(a, b),
                [a] => a,
                _ => unreachable!(),
            });
        }
        refs = next;
    }
    refs[0]
}

/// ISOP of the function or its complement (whichever has fewer literals),
/// factored, as a graft over `leaves`.
pub(crate) fn resynthesize(tt: &TruthTable, leaves: Vec<Literal>) -> Graft {
    let n = tt.num_vars();
    let (on, _) = isop(tt, tt);
    let neg = tt.not();
    let (off, _) = isop(&neg, &neg);
    let literals = |cs: &[Cube]| cs.iter().map(|c| c.literal_count() as usize).sum::<usize>();
    let (cubes, complement) = if literals(&off) < literals(&on) {
        (off, true)
    } else {
        (on, false)
    };
    let expr = factor(&cubes, n);
    let mut graft = Graft {
        leaves,
        ..Default::default()
    };
    graft.output = emit(&expr, &mut graft) ^ complement as u32;
    graft
}

/// Cone refactoring: each node's cone (grown to at most `max_cone_inputs`
/// leaves) is collapsed to a truth table, re-expressed as a factored
/// irredundant SOP, and replaced when that saves nodes.
pub fn refactor(aig: &Aig, zero_cost: bool, max_cone_inputs: usize) -> Result<TransformOutcome, TransformError> {
    check_range("max_cone_inputs", max_cone_inputs, 2, 12)?;
    let mut net = Network::from_aig(aig);
    let original = net.len() as u32;
    let mut applied = 0;
    for node in 1..original {
        if !net.is_and(node) {
            continue;
        }
        let leaves = grow_cut(&mut net, node, max_cone_inputs);
        let tt = net.cone_truth(node, &leaves);
        let graft = resynthesize(&tt, leaves.iter().map(|&l| Literal::new(l, false)).collect());
        let cone = net.mffc(node, &leaves);
        net.new_marks();
        for &n in &cone {
            net.mark(n);
        }
        let Some((added, _)) = net.estimate(&graft, node) else {
            continue;
        };
        let gain = cone.len() as isize - added as isize;
        if accept(gain, zero_cost) {
            let lit = net.materialize(&graft);
            net.replace(node, lit);
            applied += 1;
        }
    }
    Ok(TransformOutcome::new(aig, net.to_aig(), applied))
}
