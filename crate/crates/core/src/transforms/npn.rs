// SPDX-License-Identifier: Apache-2.0

//! NPN classification of 4-input functions and the replacement library used
//! by rewriting.
//!
//! A transform maps `f` to `g(x) = out_neg ^ f(y)` with
//! `y[i] = x[perm[i]] ^ neg[i]`. Every function is stored as the image of
//! its class representative (the numerically smallest member) under one
//! such transform, so a template for the representative can be wired onto
//! any member by permuting and complementing its leaves.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::aig::{Aig, AigNode, Literal};

use super::network::Graft;

/// Environment variable naming the library cache file.
pub const CACHE_ENV: &str = "AIGSYNTH_NPN_CACHE";
pub const DEFAULT_MAX_TEMPLATE_NODES: usize = 7;

const VAR_TT: [u16; 4] = [0xAAAA, 0xCCCC, 0xF0F0, 0xFF00];

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("library cache line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("library cache I/O: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NpnTransform {
    pub perm: [u8; 4],
    pub input_neg: u8,
    pub output_neg: bool,
}

impl NpnTransform {
    pub fn apply(&self, f: u16) -> u16 {
        let mut g = 0u16;
        for x in 0..16u16 {
            let mut y = 0;
            for i in 0..4 {
                let bit = (x >> self.perm[i]) & 1 ^ (self.input_neg as u16 >> i) & 1;
                y |= bit << i;
            }
            let v = (f >> y) & 1 ^ self.output_neg as u16;
            g |= v << x;
        }
        g
    }

    /// All 768 transforms: 24 permutations x 16 input phases x 2 output phases.
    pub fn all() -> Vec<NpnTransform> {
        let mut perms = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let p = [a, b, c, d];
                        if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        let mut all = Vec::with_capacity(768);
        for output_neg in [false, true] {
            for input_neg in 0..16u8 {
                for &perm in &perms {
                    all.push(NpnTransform {
                        perm,
                        input_neg,
                        output_neg,
                    });
                }
            }
        }
        all
    }
}

/// Class membership of all 65,536 four-input functions.
#[derive(Debug, Clone)]
pub struct NpnClasses {
    transforms: Vec<NpnTransform>,
    class_of: Vec<u16>,
    transform_of: Vec<u16>,
    reps: Vec<u16>,
    members: Vec<Vec<u16>>,
}

impl NpnClasses {
    pub fn compute() -> Self {
        let transforms = NpnTransform::all();
        let mut class_of = vec![u16::MAX; 1 << 16];
        let mut transform_of = vec![0u16; 1 << 16];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for tt in 0..=u16::MAX {
            if class_of[tt as usize] != u16::MAX {
                continue;
            }
            // ascending scan: the first unseen function is its orbit's minimum
            let id = reps.len() as u16;
            reps.push(tt);
            let mut orbit = Vec::new();
            for (ti, t) in transforms.iter().enumerate() {
                let g = t.apply(tt) as usize;
                if class_of[g] == u16::MAX {
                    class_of[g] = id;
                    transform_of[g] = ti as u16;
                    orbit.push(g as u16);
                }
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        NpnClasses {
            transforms,
            class_of,
            transform_of,
            reps,
            members,
        }
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, tt: u16) -> usize {
        self.class_of[tt as usize] as usize
    }

    pub fn representative(&self, class: usize) -> u16 {
        self.reps[class]
    }

    /// Returns the representative and a transform mapping it onto `tt`.
    pub fn canonicalize(&self, tt: u16) -> (u16, NpnTransform) {
        let c = self.class_of[tt as usize] as usize;
        (self.reps[c], self.transforms[self.transform_of[tt as usize] as usize])
    }

    pub fn members(&self, class: usize) -> &[u16] {
        &self.members[class]
    }
}

/// Operand encoding shared with [`Graft`]: 0 is constant false, 1..=4 the
/// leaves, 5.. earlier template nodes; the low bit complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub ops: Vec<(u32, u32)>,
    pub output: u32,
}

impl Template {
    pub fn node_count(&self) -> usize {
        self.ops.len()
    }

    pub fn evaluate(&self) -> u16 {
        let mut vals: Vec<u16> = vec![0, VAR_TT[0], VAR_TT[1], VAR_TT[2], VAR_TT[3]];
        let get = |vals: &[u16], r: u32| {
            let v = vals[(r >> 1) as usize];
            if r & 1 == 1 {
                !v
            } else {
                v
            }
        };
        for &(a, b) in &self.ops {
            let v = get(&vals, a) & get(&vals, b);
            vals.push(v);
        }
        get(&vals, self.output)
    }

    fn from_aig(aig: &Aig) -> Template {
        let mut map = vec![0u32; aig.num_nodes()];
        for (pos, &pi) in aig.primary_inputs().iter().enumerate() {
            map[pi as usize] = (pos as u32 + 1) << 1;
        }
        let enc = |map: &[u32], l: Literal| map[l.node()] | l.is_complemented() as u32;
        let mut ops = Vec::new();
        for (i, node) in aig.nodes().iter().enumerate() {
            if let AigNode::And(a, b) = node {
                ops.push((enc(&map, *a), enc(&map, *b)));
                map[i] = (4 + ops.len() as u32) << 1;
            }
        }
        let output = enc(&map, aig.primary_outputs()[0].1);
        Template { ops, output }
    }

    fn render_ref(r: u32) -> String {
        let idx = r >> 1;
        let base = match idx {
            0 => "0".to_string(),
            1..=4 => ((b'a' + idx as u8 - 1) as char).to_string(),
            _ => format!("#{}", idx - 5),
        };
        if r & 1 == 1 {
            format!("!{base}")
        } else {
            base
        }
    }

    fn parse_ref(s: &str) -> Option<u32> {
        let (compl, body) = match s.strip_prefix('!') {
            Some(rest) => (1, rest),
            None => (0, s),
        };
        let idx = match body {
            "0" => 0,
            "a" | "b" | "c" | "d" => (body.as_bytes()[0] - b'a') as u32 + 1,
            _ => body.strip_prefix('#')?.parse::<u32>().ok()? + 5,
        };
        Some(idx << 1 | compl)
    }
}

/// Best known structure per NPN class of 4-input functions.
#[derive(Debug, Clone)]
pub struct NpnLibrary {
    classes: NpnClasses,
    templates: Vec<Option<Template>>,
    max_template_nodes: usize,
}

impl NpnLibrary {
    /// Enumerates formulas bottom-up by AND count, keeping for each class the
    /// cheapest decomposition found, then rebuilds each class structure with
    /// structural hashing and keeps those within `max_template_nodes`.
    pub fn build(max_template_nodes: usize) -> Self {
        let classes = NpnClasses::compute();
        let n = classes.class_count();
        let mut cost: Vec<Option<u32>> = vec![None; n];
        let mut split: Vec<(u16, u16)> = vec![(0, 0); n];
        let mut by_cost: Vec<Vec<usize>> = Vec::new();
        let mut base = vec![classes.class_of(0)];
        let proj = classes.class_of(VAR_TT[0]);
        base.push(proj);
        for &c in &base {
            cost[c] = Some(0);
        }
        by_cost.push(base);
        let mut assigned = 2;
        let mut level = 1usize;
        while assigned < n && level <= 64 {
            let mut fresh = Vec::new();
            for i in 0..level {
                let j = level - 1 - i;
                for &cg in &by_cost[i] {
                    let rep = classes.representative(cg);
                    for g in [rep, !rep] {
                        for &ch in &by_cost[j] {
                            for &h in classes.members(ch) {
                                let f = classes.class_of(g & h);
                                if cost[f].is_none() {
                                    cost[f] = Some(level as u32);
                                    split[f] = (g, h);
                                    fresh.push(f);
                                }
                            }
                        }
                    }
                }
            }
            assigned += fresh.len();
            fresh.sort_unstable();
            by_cost.push(fresh);
            level += 1;
        }

        let templates = (0..n)
            .map(|c| {
                let mut aig = Aig::new();
                let leaves: Vec<Literal> = ["a", "b", "c", "d"].iter().map(|s| aig.add_input(*s)).collect();
                let leaves = [leaves[0], leaves[1], leaves[2], leaves[3]];
                let out = build_class(&classes, &cost, &split, c, leaves, &mut aig);
                aig.add_output("f", out).expect("literal from this graph");
                let t = Template::from_aig(&aig.cleanup());
                (t.node_count() <= max_template_nodes).then_some(t)
            })
            .collect();
        NpnLibrary {
            classes,
            templates,
            max_template_nodes,
        }
    }

    /// Process-wide library: loaded from the file named by `AIGSYNTH_NPN_CACHE`
    /// when present, otherwise built (and written there if the variable is set).
    pub fn shared() -> Arc<NpnLibrary> {
        static LIB: OnceLock<Arc<NpnLibrary>> = OnceLock::new();
        LIB.get_or_init(|| {
            let lib = match std::env::var_os(CACHE_ENV) {
                Some(path) => Self::load_or_build(Path::new(&path), DEFAULT_MAX_TEMPLATE_NODES)
                    .unwrap_or_else(|e| {
                        log::warn!("ignoring NPN cache: {e}");
                        Self::build(DEFAULT_MAX_TEMPLATE_NODES)
                    }),
                None => Self::build(DEFAULT_MAX_TEMPLATE_NODES),
            };
            Arc::new(lib)
        })
        .clone()
    }

    pub fn load_or_build(path: &Path, max_template_nodes: usize) -> Result<Self, LibraryError> {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let lib = Self::from_cache_str(&text)?;
            if lib.max_template_nodes == max_template_nodes {
                return Ok(lib);
            }
        }
        let lib = Self::build(max_template_nodes);
        std::fs::write(path, lib.to_cache_string())?;
        Ok(lib)
    }

    pub fn classes(&self) -> &NpnClasses {
        &self.classes
    }

    pub fn max_template_nodes(&self) -> usize {
        self.max_template_nodes
    }

    pub fn canonicalize(&self, tt: u16) -> (u16, NpnTransform) {
        self.classes.canonicalize(tt)
    }

    pub fn template(&self, rep: u16) -> Option<&Template> {
        self.templates[self.classes.class_of(rep)].as_ref()
    }

    /// `(representative, template)` for every class that has one.
    pub fn templates(&self) -> impl Iterator<Item = (u16, &Template)> + '_ {
        self.templates
            .iter()
            .enumerate()
            .filter_map(|(c, t)| t.as_ref().map(|t| (self.classes.representative(c), t)))
    }

    /// A graft realizing `tt` over `leaves` (missing leaves read as false),
    /// or `None` if the class has no template.
    pub(crate) fn graft_for(&self, tt: u16, leaves: &[Literal]) -> Option<Graft> {
        let (rep, t) = self.canonicalize(tt);
        let tpl = self.template(rep)?;
        let leaf = |i: usize| leaves.get(i).copied().unwrap_or(Literal::FALSE);
        let graft_leaves = (0..4)
            .map(|i| leaf(t.perm[i] as usize).xor((t.input_neg >> i) & 1 == 1))
            .collect();
        Some(Graft {
            leaves: graft_leaves,
            ops: tpl.ops.clone(),
            output: tpl.output ^ t.output_neg as u32,
        })
    }

    /// Text cache: a header, then one line per class with a template:
    /// `<rep hex>\t<nodes>\t<op>, <op>, ...\t<output>` where each op is
    /// `& x y` over leaves `a`-`d`, earlier ops `#k`, constant `0`, and `!`
    /// marks complement.
    pub fn to_cache_string(&self) -> String {
        let mut s = format!("# aigsynth npn library v1 max_nodes={}\n", self.max_template_nodes);
        for (rep, t) in self.templates() {
            let ops = if t.ops.is_empty() {
                "-".to_string()
            } else {
                t.ops
                    .iter()
                    .map(|&(a, b)| format!("& {} {}", Template::render_ref(a), Template::render_ref(b)))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            writeln!(s, "{rep:04x}\t{}\t{ops}\t{}", t.node_count(), Template::render_ref(t.output)).unwrap();
        }
        s
    }

    pub fn from_cache_str(text: &str) -> Result<Self, LibraryError> {
        let err = |line: usize, msg: &str| LibraryError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty cache"))?;
        let max_template_nodes = header
            .strip_prefix("# aigsynth npn library v1 max_nodes=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| err(1, "bad header"))?;
        let classes = NpnClasses::compute();
        let mut templates = vec![None; classes.class_count()];
        for (i, line) in lines {
            let ln = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(err(ln, "expected 4 tab-separated fields"));
            }
            let rep = u16::from_str_radix(fields[0], 16).map_err(|_| err(ln, "bad truth table"))?;
            let class = classes.class_of(rep);
            if classes.representative(class) != rep {
                return Err(err(ln, "not a class representative"));
            }
            let mut ops = Vec::new();
            if fields[2] != "-" {
                for op in fields[2].split(", ") {
                    let parts: Vec<&str> = op.split_whitespace().collect();
                    match parts.as_slice() {
                        ["&", a, b] => {
                            let a = Template::parse_ref(a).ok_or_else(|| err(ln, "bad operand"))?;
                            let b = Template::parse_ref(b).ok_or_else(|| err(ln, "bad operand"))?;
                            let limit = (5 + ops.len() as u32) << 1;
                            if a >= limit || b >= limit {
                                return Err(err(ln, "forward reference"));
                            }
                            ops.push((a, b));
                        }
                        _ => return Err(err(ln, "bad op")),
                    }
                }
            }
            let output = Template::parse_ref(fields[3]).ok_or_else(|| err(ln, "bad output"))?;
            if output >= (5 + ops.len() as u32) << 1 {
                return Err(err(ln, "output out of range"));
            }
            let count: usize = fields[1].parse().map_err(|_| err(ln, "bad node count"))?;
            let t = Template { ops, output };
            if t.node_count() != count || t.evaluate() != rep {
                return Err(err(ln, "template does not realize its class"));
            }
            templates[class] = Some(t);
        }
        Ok(NpnLibrary {
            classes,
            templates,
            max_template_nodes,
        })
    }
}

fn build_fn(
    classes: &NpnClasses,
    cost: &[Option<u32>],
    split: &[(u16, u16)],
    tt: u16,
    leaves: [Literal; 4],
    aig: &mut Aig,
) -> Literal {
    let (rep, t) = classes.canonicalize(tt);
    let mapped = std::array::from_fn(|i| leaves[t.perm[i] as usize].xor((t.input_neg >> i) & 1 == 1));
    let out = build_class(classes, cost, split, classes.class_of(rep), mapped, aig);
    out.xor(t.output_neg)
}

fn build_class(
    classes: &NpnClasses,
    cost: &[Option<u32>],
    split: &[(u16, u16)],
    class: usize,
    leaves: [Literal; 4],
    aig: &mut Aig,
) -> Literal {
    let rep = classes.representative(class);
    if cost[class] == Some(0) {
        if rep == 0 {
            return Literal::FALSE;
        }
        for (i, &v) in VAR_TT.iter().enumerate() {
            if rep == v {
                return leaves[i];
            }
            if rep == !v {
                return !leaves[i];
            }
        }
        unreachable!("zero-cost class is a constant or a projection");
    }
    // the split realizes a member m = T(rep); rep over L is m over the
    // leaves L' with L'[perm[i]] = L[i] ^ neg[i], output phase undone
    let (g, h) = split[class];
    let (_, t) = classes.canonicalize(g & h);
    let mut inner = [Literal::FALSE; 4];
    for i in 0..4 {
        inner[t.perm[i] as usize] = leaves[i].xor((t.input_neg >> i) & 1 == 1);
    }
    let a = build_fn(classes, cost, split, g, inner, aig);
    let b = build_fn(classes, cost, split, h, inner, aig);
    aig.and_unchecked(a, b).xor(t.output_neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_group_has_768_elements() {
        let all = NpnTransform::all();
        assert_eq!(all.len(), 768);
        let id = all[0];
        assert_eq!(id.perm, [0, 1, 2, 3]);
        assert_eq!(id.apply(0x1234), 0x1234);
    }

    #[test]
    fn canonical_transform_reproduces_function() {
        let c = NpnClasses::compute();
        for tt in (0..=u16::MAX).step_by(97) {
            let (rep, t) = c.canonicalize(tt);
            assert_eq!(t.apply(rep), tt);
            assert!(rep <= tt);
        }
    }

    #[test]
    fn small_classes() {
        let lib = NpnLibrary::build(DEFAULT_MAX_TEMPLATE_NODES);
        assert_eq!(lib.template(lib.canonicalize(0).0).unwrap().node_count(), 0);
        assert_eq!(lib.template(lib.canonicalize(0xAAAA & 0xCCCC).0).unwrap().node_count(), 1);
        assert_eq!(lib.template(lib.canonicalize(0xAAAA ^ 0xCCCC).0).unwrap().node_count(), 3);
        // a & (b | c)
        let f = 0xAAAA & (0xCCCC | 0xF0F0);
        assert_eq!(lib.template(lib.canonicalize(f).0).unwrap().node_count(), 2);
        for (rep, t) in lib.templates() {
            assert_eq!(t.evaluate(), rep);
        }
    }

    #[test]
    fn cache_round_trip() {
        let lib = NpnLibrary::build(5);
        let text = lib.to_cache_string();
        let back = NpnLibrary::from_cache_str(&text).unwrap();
        assert_eq!(back.to_cache_string(), text);
        assert!(NpnLibrary::from_cache_str("garbage").is_err());
        let broken = text.replacen("\t& ", "\t& !", 1);
        assert!(NpnLibrary::from_cache_str(&broken).is_err());
    }
}
