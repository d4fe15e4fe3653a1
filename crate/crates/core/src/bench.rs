// SPDX-License-Identifier: Apache-2.0

//! BENCH netlist reading and writing.
//!
//! Accepted statements: `INPUT(x)`, `OUTPUT(x)` and `y = GATE(a, ...)` with
//! GATE one of AND, OR, NAND, NOR, NOT, BUFF/BUF, XOR, XNOR, CONST0, CONST1
//! (and DFF when sequential cutting is enabled). Gate names are
//! case-insensitive, `#` starts a comment, and signals may be used before
//! the line that defines them.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::aig::{Aig, AigNode, Literal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undefined signal `{name}`")]
    Undefined { line: usize, name: String },
    #[error("line {line}: `{name}` is defined more than once")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: unsupported gate `{gate}`")]
    UnsupportedGate { line: usize, gate: String },
    #[error("line {line}: gate {gate} cannot take {got} arguments")]
    Arity { line: usize, gate: String, got: usize },
    #[error("line {line}: combinational cycle through `{name}`")]
    Cycle { line: usize, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Nand,
    Nor,
    Not,
    Buf,
    Xor,
    Xnor,
    Const0,
    Const1,
    Dff,
}

impl GateKind {
    fn parse(name: &str) -> Option<GateKind> {
        Some(match name.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NAND" => GateKind::Nand,
            "NOR" => GateKind::Nor,
            "NOT" => GateKind::Not,
            "BUFF" | "BUF" => GateKind::Buf,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "CONST0" => GateKind::Const0,
            "CONST1" => GateKind::Const1,
            "DFF" => GateKind::Dff,
            _ => return None,
        })
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::Not | GateKind::Buf | GateKind::Dff => n == 1,
            GateKind::Const0 | GateKind::Const1 => n == 0,
            _ => n >= 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Input(String),
    Output(String),
    Gate {
        output: String,
        kind: GateKind,
        args: Vec<String>,
    },
    Comment(String),
}

/// Parsed netlist: statements in file order with their 1-based line numbers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BenchAst {
    pub statements: Vec<(usize, Statement)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BenchOptions {
    /// Cut flip-flops: each DFF output becomes a primary input and each DFF
    /// input a primary output named `<q>_next`.
    pub cut_sequential: bool,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || "(),=#".contains(c))
}

fn split_call(s: &str, line: usize) -> Result<(&str, Vec<&str>), BenchError> {
    let syntax = |msg: &str| BenchError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let open = s.find('(').ok_or_else(|| syntax("expected `(`"))?;
    let body = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax("expected `)` at end of statement"))?;
    let head = s[..open].trim();
    let args: Vec<&str> = if body.trim().is_empty() {
        Vec::new()
    } else {
        body.split(',').map(str::trim).collect()
    };
    if let Some(bad) = args.iter().find(|a| !valid_name(a)) {
        return Err(syntax(&format!("bad signal name `{bad}`")));
    }
    Ok((head, args))
}

pub fn parse_ast(text: &str) -> Result<BenchAst, BenchError> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (code, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        let code = code.trim();
        if code.is_empty() {
            if let Some(c) = comment {
                statements.push((line, Statement::Comment(c.to_string())));
            }
            continue;
        }
        let syntax = |msg: String| BenchError::Syntax { line, msg };
        if let Some((lhs, rhs)) = code.split_once('=') {
            let output = lhs.trim();
            if !valid_name(output) {
                return Err(syntax(format!("bad signal name `{output}`")));
            }
            let (gate, args) = split_call(rhs.trim(), line)?;
            let kind = GateKind::parse(gate).ok_or_else(|| BenchError::UnsupportedGate {
                line,
                gate: gate.to_string(),
            })?;
            if !kind.arity_ok(args.len()) {
                return Err(BenchError::Arity {
                    line,
                    gate: gate.to_string(),
                    got: args.len(),
                });
            }
            statements.push((
                line,
                Statement::Gate {
                    output: output.to_string(),
                    kind,
                    args: args.into_iter().map(String::from).collect(),
                },
            ));
        } else {
            let (head, args) = split_call(code, line)?;
            if args.len() != 1 {
                return Err(syntax(format!("{head} takes exactly one signal")));
            }
            let name = args[0].to_string();
            match head.to_ascii_uppercase().as_str() {
                "INPUT" => statements.push((line, Statement::Input(name))),
                "OUTPUT" => statements.push((line, Statement::Output(name))),
                _ => return Err(syntax(format!("unknown statement `{head}`"))),
            }
        }
    }
    Ok(BenchAst { statements })
}

pub fn parse_bench(text: &str) -> Result<Aig, BenchError> {
    parse_bench_with(text, &BenchOptions::default())
}

pub fn parse_bench_with(text: &str, options: &BenchOptions) -> Result<Aig, BenchError> {
    elaborate(&parse_ast(text)?, options)
}

#[derive(Clone, Copy)]
enum Def<'a> {
    Input,
    Gate(usize, GateKind, &'a [String]),
}

type Defs<'a> = HashMap<&'a str, (usize, Def<'a>)>;

fn define<'a>(defs: &mut Defs<'a>, name: &'a str, line: usize, def: Def<'a>) -> Result<(), BenchError> {
    if defs.insert(name, (line, def)).is_some() {
        return Err(BenchError::Duplicate {
            line,
            name: name.to_string(),
        });
    }
    Ok(())
}

/// Builds the AIG: inputs first (DFF outputs after declared inputs), then
/// gates in file order, then outputs. Unused logic is dropped.
pub fn elaborate(ast: &BenchAst, options: &BenchOptions) -> Result<Aig, BenchError> {
    let mut defs: Defs = HashMap::new();
    let mut inputs: Vec<&str> = Vec::new();
    let mut dffs: Vec<(usize, &str, &str)> = Vec::new();
    let mut outputs: Vec<(usize, &str)> = Vec::new();
    let mut gates: Vec<&str> = Vec::new();
    for (line, st) in &ast.statements {
        match st {
            Statement::Input(n) => {
                define(&mut defs, n, *line, Def::Input)?;
                inputs.push(n);
            }
            Statement::Output(n) => outputs.push((*line, n)),
            Statement::Gate { output, kind: GateKind::Dff, args } => {
                if !options.cut_sequential {
                    return Err(BenchError::UnsupportedGate {
                        line: *line,
                        gate: "DFF".to_string(),
                    });
                }
                define(&mut defs, output, *line, Def::Input)?;
                dffs.push((*line, output, &args[0]));
            }
            Statement::Gate { output, kind, args } => {
                define(&mut defs, output, *line, Def::Gate(*line, *kind, args))?;
                gates.push(output);
            }
            Statement::Comment(_) => {}
        }
    }

    let mut aig = Aig::new();
    let mut value: HashMap<&str, Literal> = HashMap::new();
    for &n in inputs.iter().chain(dffs.iter().map(|(_, q, _)| q)) {
        value.insert(n, aig.add_input(n));
    }
    for &g in &gates {
        resolve(g, 0, &defs, &mut value, &mut aig)?;
    }
    let mut po_names: HashSet<String> = HashSet::new();
    let mut po = |aig: &mut Aig, name: String, line: usize, driver: Literal| {
        if !po_names.insert(name.clone()) {
            return Err(BenchError::Duplicate { line, name });
        }
        aig.push_output_unchecked(name, driver);
        Ok(())
    };
    for &(line, n) in &outputs {
        let driver = resolve(n, line, &defs, &mut value, &mut aig)?;
        po(&mut aig, n.to_string(), line, driver)?;
    }
    for &(line, q, d) in &dffs {
        let driver = resolve(d, line, &defs, &mut value, &mut aig)?;
        po(&mut aig, format!("{q}_next"), line, driver)?;
    }
    Ok(aig.cleanup())
}

/// Literal of signal `name`, elaborating its fan-in cone depth-first.
fn resolve<'a>(
    name: &'a str,
    use_line: usize,
    defs: &Defs<'a>,
    value: &mut HashMap<&'a str, Literal>,
    aig: &mut Aig,
) -> Result<Literal, BenchError> {
    if let Some(&l) = value.get(name) {
        return Ok(l);
    }
    let undefined = |n: &str, line| BenchError::Undefined {
        line,
        name: n.to_string(),
    };
    let mut on_stack: HashSet<&str> = HashSet::new();
    let mut stack: Vec<(&str, usize)> = vec![(name, use_line)];
    while let Some(&(n, line)) = stack.last() {
        if value.contains_key(n) {
            stack.pop();
            continue;
        }
        let Some(&(_, Def::Gate(gline, kind, args))) = defs.get(n) else {
            return Err(undefined(n, line));
        };
        let pending: Vec<&str> = args
            .iter()
            .map(String::as_str)
            .filter(|a| !value.contains_key(a))
            .collect();
        if pending.is_empty() {
            let lits: Vec<Literal> = args.iter().map(|a| value[a.as_str()]).collect();
            let l = build_gate(aig, kind, &lits);
            value.insert(n, l);
            on_stack.remove(n);
            stack.pop();
            continue;
        }
        if !on_stack.insert(n) {
            return Err(BenchError::Cycle {
                line: gline,
                name: n.to_string(),
            });
        }
        for a in pending {
            if !defs.contains_key(a) {
                return Err(undefined(a, gline));
            }
            if on_stack.contains(a) {
                return Err(BenchError::Cycle {
                    line: gline,
                    name: a.to_string(),
                });
            }
            stack.push((a, gline));
        }
    }
    Ok(value[name])
}

/// Balanced tree over `ops`, pairing neighbours level by level.
fn tree(aig: &mut Aig, ops: &[Literal], join: impl Fn(&mut Aig, Literal, Literal) -> Literal) -> Literal {
    let mut level = ops.to_vec();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|c| if c.len() == 2 { join(aig, c[0], c[1]) } else { c[0] })
            .collect();
    }
    level[0]
}

fn xor2(aig: &mut Aig, a: Literal, b: Literal) -> Literal {
    let p = aig.and_unchecked(a, !b);
    let q = aig.and_unchecked(!a, b);
    !aig.and_unchecked(!p, !q)
}

fn build_gate(aig: &mut Aig, kind: GateKind, ops: &[Literal]) -> Literal {
    let and = |aig: &mut Aig, a, b| aig.and_unchecked(a, b);
    let or = |aig: &mut Aig, a: Literal, b: Literal| !aig.and_unchecked(!a, !b);
    match kind {
        GateKind::And => tree(aig, ops, and),
        GateKind::Nand => !tree(aig, ops, and),
        GateKind::Or => tree(aig, ops, or),
        GateKind::Nor => !tree(aig, ops, or),
        GateKind::Xor => tree(aig, ops, xor2),
        GateKind::Xnor => !tree(aig, ops, xor2),
        GateKind::Not => !ops[0],
        GateKind::Buf | GateKind::Dff => ops[0],
        GateKind::Const0 => Literal::FALSE,
        GateKind::Const1 => Literal::TRUE,
    }
}

/// Prefix for generated signal names that no input or output name starts
/// with, so `<prefix><k>` and `<prefix><k>_not` never clash.
fn fresh_prefix(aig: &Aig) -> String {
    let mut prefix = "n".to_string();
    let taken = |p: &str| {
        aig.input_names().any(|n| n.starts_with(p)) || aig.primary_outputs().iter().any(|(n, _)| n.starts_with(p))
    };
    while taken(&prefix) {
        prefix.push('_');
    }
    prefix
}

/// Deterministic BENCH text: inputs, outputs, then one AND line per node in
/// index order with NOT lines emitted just before a complement's first use,
/// and finally one BUFF/NOT line per output. Constant outputs are expressed
/// as `x AND NOT x` over the first input (`CONST0()` without inputs).
pub fn write_bench(aig: &Aig) -> String {
    let prefix = fresh_prefix(aig);
    let name = |i: usize| match aig.node(i) {
        AigNode::PrimaryInput(n) => n.clone(),
        _ => format!("{prefix}{i}"),
    };
    let mut out = String::new();
    for n in aig.input_names() {
        writeln!(out, "INPUT({n})").unwrap();
    }
    for (n, _) in aig.primary_outputs() {
        writeln!(out, "OUTPUT({n})").unwrap();
    }
    let mut negated = vec![false; aig.num_nodes()];
    let mut signal = |out: &mut String, l: Literal| -> String {
        let base = name(l.node());
        if !l.is_complemented() {
            return base;
        }
        let neg = format!("{prefix}{}_not", l.node());
        if !negated[l.node()] {
            negated[l.node()] = true;
            writeln!(out, "{neg} = NOT({base})").unwrap();
        }
        neg
    };
    if aig.primary_outputs().iter().any(|(_, d)| d.is_const()) {
        match aig.primary_inputs().first() {
            Some(&pi) => {
                let x = Literal::new(pi, false);
                let nx = signal(&mut out, !x);
                writeln!(out, "{} = AND({}, {nx})", name(0), name(x.node())).unwrap();
            }
            None => writeln!(out, "{} = CONST0()", name(0)).unwrap(),
        }
    }
    for (i, node) in aig.nodes().iter().enumerate() {
        if let AigNode::And(a, b) = node {
            let sa = signal(&mut out, *a);
            let sb = signal(&mut out, *b);
            writeln!(out, "{} = AND({sa}, {sb})", name(i)).unwrap();
        }
    }
    for (n, d) in aig.primary_outputs() {
        if !d.is_complemented() && name(d.node()) == *n {
            continue;
        }
        let gate = if d.is_complemented() { "NOT" } else { "BUFF" };
        writeln!(out, "{n} = {gate}({})", name(d.node())).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::exhaustive_equiv;

    fn eval_ops(kind: GateKind, bits: &[bool]) -> bool {
        let and = bits.iter().all(|&b| b);
        let or = bits.iter().any(|&b| b);
        let parity = bits.iter().filter(|&&b| b).count() % 2 == 1;
        match kind {
            GateKind::And => and,
            GateKind::Nand => !and,
            GateKind::Or => or,
            GateKind::Nor => !or,
            GateKind::Xor => parity,
            GateKind::Xnor => !parity,
            GateKind::Not => !bits[0],
            GateKind::Buf | GateKind::Dff => bits[0],
            GateKind::Const0 => false,
            GateKind::Const1 => true,
        }
    }

    #[test]
    fn gates_match_truth_tables_up_to_eight_inputs() {
        use GateKind::*;
        for (kind, name) in [(And, "AND"), (Or, "OR"), (Nand, "NAND"), (Nor, "NOR"), (Xor, "XOR"), (Xnor, "xnor")] {
            for k in 1..=8usize {
                let args: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                let mut text: String = args.iter().map(|a| format!("INPUT({a})\n")).collect();
                text += &format!("y = {name}({})\nOUTPUT(y)\n", args.join(", "));
                let g = parse_bench(&text).unwrap();
                for m in 0..(1u64 << k) {
                    let words: Vec<u64> = (0..k).map(|i| if (m >> i) & 1 == 1 { !0 } else { 0 }).collect();
                    let bits: Vec<bool> = (0..k).map(|i| (m >> i) & 1 == 1).collect();
                    let got = g.simulate(&words).unwrap()[0] & 1 == 1;
                    assert_eq!(got, eval_ops(kind, &bits), "{name}/{k} m={m}");
                }
            }
        }
        for (kind, name) in [(Not, "NOT"), (Buf, "BUFF"), (Buf, "buf")] {
            let g = parse_bench(&format!("INPUT(a)\ny = {name}(a)\nOUTPUT(y)\n")).unwrap();
            for m in 0..2u64 {
                let got = g.simulate(&[if m == 1 { !0 } else { 0 }]).unwrap()[0] & 1 == 1;
                assert_eq!(got, eval_ops(kind, &[m == 1]));
            }
        }
    }

    #[test]
    fn single_and() {
        let g = parse_bench("INPUT(a)\nINPUT(b)\nc = AND(a, b)\nOUTPUT(c)").unwrap();
        let s = g.stats();
        assert_eq!((s.and_count, s.depth, s.edge_count), (1, 1, 3));
    }

    #[test]
    fn inverter_only() {
        let g = parse_bench("INPUT(a)\nb = NOT(a)\nOUTPUT(b)").unwrap();
        let s = g.stats();
        assert_eq!((s.and_count, s.inverted_edge_count), (0, 1));
        assert!(g.primary_outputs()[0].1.is_complemented());
    }

    #[test]
    fn wide_and_is_balanced() {
        let g = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\ne = AND(a,b,c,d)\nOUTPUT(e)").unwrap();
        assert_eq!((g.and_count(), g.depth()), (3, 2));
    }

    #[test]
    fn forward_references_comments_and_case() {
        let text = "# header\nOUTPUT(y)  # out\ny = and(t, c)\nt = Or(a, b)\nINPUT(a)\ninput(b)\nINPUT(c)\n";
        let g = parse_bench(text).unwrap();
        assert_eq!(g.and_count(), 2);
        let ast = parse_ast(text).unwrap();
        assert!(matches!(ast.statements[0].1, Statement::Comment(ref c) if c == "header"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, q)\n"),
            Err(BenchError::Undefined { line: 3, name: "q".into() })
        );
        assert!(matches!(
            parse_bench("INPUT(a)\na = NOT(a)\n"),
            Err(BenchError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            parse_bench("INPUT(a)\ny = MUX(a, a)\n"),
            Err(BenchError::UnsupportedGate { line: 2, .. })
        ));
        assert!(matches!(parse_bench("INPUT(a\n"), Err(BenchError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_bench("INPUT(a)\nx = AND(a, y)\ny = AND(a, x)\nOUTPUT(x)\n"),
            Err(BenchError::Cycle { .. })
        ));
        assert!(matches!(
            parse_bench("INPUT(a)\nq = DFF(a)\nOUTPUT(q)\n"),
            Err(BenchError::UnsupportedGate { line: 2, .. })
        ));
    }

    #[test]
    fn flip_flops_are_cut() {
        let text = "INPUT(a)\nOUTPUT(y)\nq = DFF(d)\nd = AND(a, q)\ny = NOT(q)\n";
        let g = parse_bench_with(text, &BenchOptions { cut_sequential: true }).unwrap();
        assert_eq!(g.input_names().collect::<Vec<_>>(), vec!["a", "q"]);
        let pos: Vec<&str> = g.primary_outputs().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(pos, vec!["y", "q_next"]);
        assert_eq!(g.and_count(), 1);
    }

    #[test]
    fn writer_round_trip() {
        let text = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(f)\nOUTPUT(g)\nOUTPUT(a)\nOUTPUT(k)\n\
                    f = NAND(a, b, c)\ng = XOR(a, c)\nk = AND(a, z)\nz = NOT(a)\n";
        let g = parse_bench(text).unwrap();
        let written = write_bench(&g);
        assert!(written.lines().all(|l| {
            l.starts_with("INPUT(") || l.starts_with("OUTPUT(") || [" = AND(", " = NOT(", " = BUFF("].iter().any(|k| l.contains(k))
        }));
        let back = parse_bench(&written).unwrap();
        assert_eq!(back.stats(), g.stats());
        assert_eq!(back, g);
        assert!(exhaustive_equiv(&g, &back, 16).unwrap().equivalent);
        assert_eq!(write_bench(&back), written);
    }

    #[test]
    fn complemented_output_uses_not_line() {
        let g = parse_bench("INPUT(a)\nINPUT(b)\nc = NAND(a, b)\nOUTPUT(c)").unwrap();
        let w = write_bench(&g);
        assert!(w.contains("c = NOT(n3)"), "{w}");
    }

    #[test]
    fn generated_names_avoid_user_names() {
        let g = parse_bench("INPUT(n1)\nINPUT(n2)\nn5 = AND(n1, n2)\nOUTPUT(n5)").unwrap();
        let w = write_bench(&g);
        let back = parse_bench(&w).unwrap();
        assert!(exhaustive_equiv(&g, &back, 16).unwrap().equivalent);
    }

    #[test]
    fn constant_outputs() {
        let g = parse_bench("INPUT(a)\nz = CONST0()\no = CONST1()\nOUTPUT(z)\nOUTPUT(o)\n").unwrap();
        let w = write_bench(&g);
        assert!(!w.contains("CONST"));
        let back = parse_bench(&w).unwrap();
        assert_eq!(back, g);
        let h = parse_bench("z = CONST1()\nOUTPUT(z)\n").unwrap();
        assert_eq!(parse_bench(&write_bench(&h)).unwrap(), h);
    }
}
