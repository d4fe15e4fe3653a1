// SPDX-License-Identifier: Apache-2.0

//! Structurally hashed And-Inverter Graphs.
//!
//! Node 0 is always the constant-false node; constant true is its complement.
//! And nodes are numbered so that both fanins have a smaller index than the
//! node itself, which makes the node vector a topological order.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AigError {
    #[error("literal refers to node {index}, but the graph only has {len} nodes")]
    DanglingLiteral { index: u32, len: usize },
    #[error("simulation expects {expected} input words, got {got}")]
    InputWordCount { expected: usize, got: usize },
    #[error("duplicate primary output name `{0}`")]
    DuplicateOutput(String),
    #[error("duplicate primary input name `{0}`")]
    DuplicateInput(String),
}

/// A possibly complemented reference to a node.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal(u32);

impl Literal {
    pub const FALSE: Literal = Literal(0);
    pub const TRUE: Literal = Literal(1);

    pub fn new(node_index: u32, complemented: bool) -> Self {
        Literal(node_index << 1 | complemented as u32)
    }

    pub fn from_key(key: u32) -> Self {
        Literal(key)
    }

    /// `2 * node_index + complemented`; totally orders literals.
    pub fn key(self) -> u32 {
        self.0
    }

    pub fn node_index(self) -> u32 {
        self.0 >> 1
    }

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn complement(self) -> Self {
        Literal(self.0 ^ 1)
    }

    /// Complements the literal when `c` is set.
    pub fn xor(self, c: bool) -> Self {
        Literal(self.0 ^ c as u32)
    }

    pub fn regular(self) -> Self {
        Literal(self.0 & !1)
    }

    pub fn is_const(self) -> bool {
        self.0 <= 1
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        self.complement()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!{}", self.node_index())
        } else {
            write!(f, "{}", self.node_index())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AigNode {
    Constant0,
    PrimaryInput(String),
    And(Literal, Literal),
}

impl AigNode {
    pub fn is_and(&self) -> bool {
        matches!(self, AigNode::And(..))
    }

    pub fn fanins(&self) -> Option<(Literal, Literal)> {
        match *self {
            AigNode::And(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

/// Table-1 style structural statistics of a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct DesignStats {
    pub pi_count: usize,
    pub po_count: usize,
    pub and_count: usize,
    pub edge_count: usize,
    pub inverted_edge_count: usize,
    pub depth: usize,
}

/// Applies the constant and idempotence rules of two-input AND.
/// Returns `None` when a real node is required.
pub(crate) fn trivial_and(a: Literal, b: Literal) -> Option<Literal> {
    if a == b {
        Some(a)
    } else if a == !b || a == Literal::FALSE || b == Literal::FALSE {
        Some(Literal::FALSE)
    } else if a == Literal::TRUE {
        Some(b)
    } else if b == Literal::TRUE {
        Some(a)
    } else {
        None
    }
}

pub(crate) fn ordered(a: Literal, b: Literal) -> (Literal, Literal) {
    if a.key() <= b.key() {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aig {
    nodes: Vec<AigNode>,
    primary_inputs: Vec<u32>,
    primary_outputs: Vec<(String, Literal)>,
    strash: HashMap<(u32, u32), u32>,
}

impl Default for Aig {
    fn default() -> Self {
        Self::new()
    }
}

impl Aig {
    pub fn new() -> Self {
        Aig {
            nodes: vec![AigNode::Constant0],
            primary_inputs: Vec::new(),
            primary_outputs: Vec::new(),
            strash: HashMap::new(),
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Literal {
        let index = self.nodes.len() as u32;
        self.nodes.push(AigNode::PrimaryInput(name.into()));
        self.primary_inputs.push(index);
        Literal::new(index, false)
    }

    pub fn add_output(&mut self, name: impl Into<String>, driver: Literal) -> Result<(), AigError> {
        self.check(driver)?;
        self.primary_outputs.push((name.into(), driver));
        Ok(())
    }

    fn check(&self, lit: Literal) -> Result<(), AigError> {
        if lit.node() < self.nodes.len() {
            Ok(())
        } else {
            Err(AigError::DanglingLiteral {
                index: lit.node_index(),
                len: self.nodes.len(),
            })
        }
    }

    /// Returns a literal for `a & b`, reusing a structurally identical node
    /// when one exists.
    pub fn add_and(&mut self, a: Literal, b: Literal) -> Result<Literal, AigError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.and_unchecked(a, b))
    }

    pub(crate) fn and_unchecked(&mut self, a: Literal, b: Literal) -> Literal {
        if let Some(lit) = trivial_and(a, b) {
            return lit;
        }
        let (a, b) = ordered(a, b);
        if let Some(&idx) = self.strash.get(&(a.key(), b.key())) {
            return Literal::new(idx, false);
        }
        let idx = self.nodes.len() as u32;
        self.nodes.push(AigNode::And(a, b));
        self.strash.insert((a.key(), b.key()), idx);
        Literal::new(idx, false)
    }

    pub fn or(&mut self, a: Literal, b: Literal) -> Result<Literal, AigError> {
        Ok(!self.add_and(!a, !b)?)
    }

    pub fn xor(&mut self, a: Literal, b: Literal) -> Result<Literal, AigError> {
        let p = self.add_and(a, !b)?;
        let q = self.add_and(!a, b)?;
        Ok(!self.add_and(!p, !q)?)
    }

    /// Looks up an existing node for `a & b` without creating one.
    pub fn lookup_and(&self, a: Literal, b: Literal) -> Option<Literal> {
        if let Some(lit) = trivial_and(a, b) {
            return Some(lit);
        }
        let (a, b) = ordered(a, b);
        self.strash
            .get(&(a.key(), b.key()))
            .map(|&i| Literal::new(i, false))
    }

    pub fn nodes(&self) -> &[AigNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &AigNode {
        &self.nodes[index]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn primary_inputs(&self) -> &[u32] {
        &self.primary_inputs
    }

    pub fn primary_outputs(&self) -> &[(String, Literal)] {
        &self.primary_outputs
    }

    pub fn input_name(&self, position: usize) -> &str {
        match &self.nodes[self.primary_inputs[position] as usize] {
            AigNode::PrimaryInput(name) => name,
            _ => unreachable!("primary input list points at a non-input node"),
        }
    }

    pub fn input_names(&self) -> impl Iterator<Item = &str> + '_ {
        (0..self.primary_inputs.len()).map(move |i| self.input_name(i))
    }

    pub fn and_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_and()).count()
    }

    #[cfg(test)]
    pub(crate) fn strash_len(&self) -> usize {
        self.strash.len()
    }

    /// Per-node logic level; inputs and the constant sit at level 0.
    pub fn levels(&self) -> Vec<u32> {
        let mut level = vec![0u32; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let AigNode::And(a, b) = node {
                level[i] = 1 + level[a.node()].max(level[b.node()]);
            }
        }
        level
    }

    pub fn depth(&self) -> usize {
        let level = self.levels();
        self.primary_outputs
            .iter()
            .map(|(_, d)| level[d.node()] as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> DesignStats {
        let and_count = self.and_count();
        let po_count = self.primary_outputs.len();
        let mut inverted = 0;
        for node in &self.nodes {
            if let AigNode::And(a, b) = node {
                inverted += a.is_complemented() as usize + b.is_complemented() as usize;
            }
        }
        inverted += self
            .primary_outputs
            .iter()
            .filter(|(_, d)| d.is_complemented())
            .count();
        DesignStats {
            pi_count: self.primary_inputs.len(),
            po_count,
            and_count,
            edge_count: edge_count(and_count, po_count),
            inverted_edge_count: inverted,
            depth: self.depth(),
        }
    }

    /// Number of references to each node from And fanins and outputs.
    pub fn fanout_counts(&self) -> Vec<u32> {
        let mut refs = vec![0u32; self.nodes.len()];
        for node in &self.nodes {
            if let AigNode::And(a, b) = node {
                refs[a.node()] += 1;
                refs[b.node()] += 1;
            }
        }
        for (_, d) in &self.primary_outputs {
            refs[d.node()] += 1;
        }
        refs
    }

    /// Bit-parallel simulation: one word per primary input, one per output.
    pub fn simulate(&self, input_words: &[u64]) -> Result<Vec<u64>, AigError> {
        if input_words.len() != self.primary_inputs.len() {
            return Err(AigError::InputWordCount {
                expected: self.primary_inputs.len(),
                got: input_words.len(),
            });
        }
        let values = self.simulate_nodes(input_words);
        Ok(self
            .primary_outputs
            .iter()
            .map(|(_, d)| lit_value(&values, *d))
            .collect())
    }

    pub(crate) fn simulate_nodes(&self, input_words: &[u64]) -> Vec<u64> {
        let mut values = vec![0u64; self.nodes.len()];
        for (pos, &pi) in self.primary_inputs.iter().enumerate() {
            values[pi as usize] = input_words[pos];
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let AigNode::And(a, b) = node {
                values[i] = lit_value(&values, *a) & lit_value(&values, *b);
            }
        }
        values
    }

    /// Removes And nodes that no output depends on. Surviving nodes keep
    /// their relative order; all previously issued literals are invalidated.
    pub fn cleanup(&self) -> Aig {
        let mut live = vec![false; self.nodes.len()];
        for (_, d) in &self.primary_outputs {
            live[d.node()] = true;
        }
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            if let AigNode::And(a, b) = self.nodes[i] {
                live[a.node()] = true;
                live[b.node()] = true;
            }
        }
        let mut out = Aig::new();
        let mut map = vec![Literal::FALSE; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                AigNode::Constant0 => {}
                AigNode::PrimaryInput(name) => map[i] = out.add_input(name.clone()),
                AigNode::And(a, b) if live[i] => {
                    let fa = map[a.node()].xor(a.is_complemented());
                    let fb = map[b.node()].xor(b.is_complemented());
                    map[i] = out.and_unchecked(fa, fb);
                }
                AigNode::And(..) => {}
            }
        }
        for (name, d) in &self.primary_outputs {
            out.primary_outputs
                .push((name.clone(), map[d.node()].xor(d.is_complemented())));
        }
        out
    }

    pub(crate) fn push_output_unchecked(&mut self, name: String, driver: Literal) {
        self.primary_outputs.push((name, driver));
    }
}

pub(crate) fn lit_value(values: &[u64], lit: Literal) -> u64 {
    let v = values[lit.node()];
    if lit.is_complemented() {
        !v
    } else {
        v
    }
}

/// Each And contributes two fanin edges and each output one driver edge.
pub fn edge_count(and_count: usize, po_count: usize) -> usize {
    2 * and_count + po_count
}
