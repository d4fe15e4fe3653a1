// SPDX-License-Identifier: Apache-2.0

//! GraphML export of an AIG for learning pipelines.
//!
//! Node records, in order: the constant (only when an output uses it), then
//! every input and And node by index, then one record per output. Edges run
//! fanin to node; each And has two, each output one from its driver.
//! `edge_type` is the inversion bit of the edge and
//! `num_inverted_predecessors` counts inverted incoming edges.

use std::fmt::Write as _;

use crate::aig::{Aig, AigNode, Literal};

pub const NODE_TYPE_PI: u8 = 0;
pub const NODE_TYPE_PO: u8 = 1;
pub const NODE_TYPE_AND: u8 = 2;
pub const NODE_TYPE_CONST0: u8 = 3;

const HEADER: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <!-- node_type: 0=PI 1=PO 2=AND 3=CONST0; edge_type: 0=plain 1=inverted -->
  <key id="node_id" for="node" attr.name="node_id" attr.type="string"/>
  <key id="node_type" for="node" attr.name="node_type" attr.type="int"/>
  <key id="num_inverted_predecessors" for="node" attr.name="num_inverted_predecessors" attr.type="int"/>
  <key id="edge_type" for="edge" attr.name="edge_type" attr.type="int"/>
  <graph id="G" edgedefault="directed">
"#;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn node(out: &mut String, id: &str, name: &str, kind: u8, inverted: u32) {
    writeln!(
        out,
        "    <node id=\"{id}\"><data key=\"node_id\">{}</data><data key=\"node_type\">{kind}</data>\
         <data key=\"num_inverted_predecessors\">{inverted}</data></node>",
        escape(name)
    )
    .unwrap();
}

fn edge(out: &mut String, from: Literal, to: &str) {
    writeln!(
        out,
        "    <edge source=\"n{}\" target=\"{to}\"><data key=\"edge_type\">{}</data></edge>",
        from.node_index(),
        from.is_complemented() as u8
    )
    .unwrap();
}

pub fn write_graphml(aig: &Aig) -> String {
    let mut out = String::from(HEADER);
    if aig.primary_outputs().iter().any(|(_, d)| d.is_const()) {
        node(&mut out, "n0", "const0", NODE_TYPE_CONST0, 0);
    }
    for (i, n) in aig.nodes().iter().enumerate() {
        let id = format!("n{i}");
        match n {
            AigNode::Constant0 => {}
            AigNode::PrimaryInput(name) => node(&mut out, &id, name, NODE_TYPE_PI, 0),
            AigNode::And(a, b) => {
                let inv = a.is_complemented() as u32 + b.is_complemented() as u32;
                node(&mut out, &id, &id, NODE_TYPE_AND, inv);
            }
        }
    }
    for (k, (name, d)) in aig.primary_outputs().iter().enumerate() {
        node(&mut out, &format!("po{k}"), name, NODE_TYPE_PO, d.is_complemented() as u32);
    }
    for (i, n) in aig.nodes().iter().enumerate() {
        if let AigNode::And(a, b) = n {
            let id = format!("n{i}");
            edge(&mut out, *a, &id);
            edge(&mut out, *b, &id);
        }
    }
    for (k, (_, d)) in aig.primary_outputs().iter().enumerate() {
        edge(&mut out, *d, &format!("po{k}"));
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}
