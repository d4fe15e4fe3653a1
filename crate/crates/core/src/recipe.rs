// SPDX-License-Identifier: Apache-2.0

//! Synthesis recipes over the seven-transform alphabet.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipeError {
    #[error("unknown transform `{0}`")]
    UnknownToken(String),
    #[error("empty recipe")]
    Empty,
    #[error("unknown transform code {0}")]
    UnknownCode(u8),
    #[error("recipes have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("recipe file line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error("k must be at least 1 and at most {available}, got {k}")]
    TopK { k: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformToken {
    B,
    Rw,
    Rwz,
    Rf,
    Rfz,
    Rs,
    Rsz,
}

impl TransformToken {
    pub const ALL: [TransformToken; 7] = [
        TransformToken::B,
        TransformToken::Rw,
        TransformToken::Rwz,
        TransformToken::Rf,
        TransformToken::Rfz,
        TransformToken::Rs,
        TransformToken::Rsz,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self, RecipeError> {
        Self::ALL
            .get(code as usize)
            .copied()
            .ok_or(RecipeError::UnknownCode(code))
    }

    pub fn surface(self) -> &'static str {
        match self {
            TransformToken::B => "b",
            TransformToken::Rw => "rw",
            TransformToken::Rwz => "rw -z",
            TransformToken::Rf => "rf",
            TransformToken::Rfz => "rf -z",
            TransformToken::Rs => "rs",
            TransformToken::Rsz => "rs -z",
        }
    }

    pub fn is_zero_cost(self) -> bool {
        matches!(self, TransformToken::Rwz | TransformToken::Rfz | TransformToken::Rsz)
    }
}

impl fmt::Display for TransformToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.surface())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Recipe {
    pub recipe_id: u32,
    pub tokens: Vec<TransformToken>,
}

/// Tokens of a `;`- or whitespace-separated list; `-z` binds to the
/// preceding command.
pub fn parse_recipe(text: &str) -> Result<Vec<TransformToken>, RecipeError> {
    let words: Vec<&str> = text
        .split(|c: char| c == ';' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .collect();
    let mut tokens = Vec::with_capacity(words.len());
    let mut i = 0;
    while i < words.len() {
        let zero = words.get(i + 1) == Some(&"-z");
        let token = match (words[i], zero) {
            ("b", false) => TransformToken::B,
            ("rw", false) => TransformToken::Rw,
            ("rw", true) => TransformToken::Rwz,
            ("rf", false) => TransformToken::Rf,
            ("rf", true) => TransformToken::Rfz,
            ("rs", false) => TransformToken::Rs,
            ("rs", true) => TransformToken::Rsz,
            (w, _) => return Err(RecipeError::UnknownToken(w.to_string())),
        };
        tokens.push(token);
        i += 1 + zero as usize;
    }
    if tokens.is_empty() {
        return Err(RecipeError::Empty);
    }
    Ok(tokens)
}

pub fn render_recipe(tokens: &[TransformToken]) -> String {
    tokens.iter().map(|t| t.surface()).collect::<Vec<_>>().join("; ")
}

pub fn encode_recipe(tokens: &[TransformToken]) -> Vec<u8> {
    tokens.iter().map(|t| t.code()).collect()
}

pub fn decode_recipe(codes: &[u8]) -> Result<Vec<TransformToken>, RecipeError> {
    codes.iter().map(|&c| TransformToken::from_code(c)).collect()
}

/// `k` recipes of `len` tokens drawn independently and uniformly, with ids
/// `0..k`.
pub fn sample_recipes(k: usize, len: usize, seed: u64) -> Vec<Recipe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|id| Recipe {
            recipe_id: id as u32,
            tokens: (0..len)
                .map(|_| TransformToken::ALL[rng.gen_range(0..TransformToken::ALL.len())])
                .collect(),
        })
        .collect()
}

/// Fraction of positions holding equal tokens.
pub fn recipe_similarity(a: &[TransformToken], b: &[TransformToken]) -> Result<f64, RecipeError> {
    if a.len() != b.len() {
        return Err(RecipeError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let same = a.iter().zip(b).filter(|(x, y)| x == y).count();
    Ok(same as f64 / a.len() as f64)
}

/// Overlap of the best-`k` recipe sets between designs. `rankings[i]` holds
/// `(recipe_id, final_nodes)` pairs of design `i`; each design's top set is
/// its `k` smallest by `(final_nodes, recipe_id)`. Entry `(i, j)` is
/// `|top_i ∩ top_j| / k`.
pub fn top_k_overlap(rankings: &[Vec<(u32, usize)>], k: usize) -> Result<Vec<Vec<f64>>, RecipeError> {
    let available = rankings.iter().map(Vec::len).min().unwrap_or(0);
    if k == 0 || k > available {
        return Err(RecipeError::TopK { k, available });
    }
    let tops: Vec<Vec<u32>> = rankings
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort_by_key(|&(id, nodes)| (nodes, id));
            let mut ids: Vec<u32> = r[..k].iter().map(|&(id, _)| id).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    Ok(tops
        .iter()
        .map(|a| {
            tops.iter()
                .map(|b| a.iter().filter(|id| b.binary_search(id).is_ok()).count() as f64 / k as f64)
                .collect()
        })
        .collect())
}

/// `k` for a fraction of `total` results, rounded to nearest.
pub fn k_from_fraction(total: usize, fraction: f64) -> usize {
    (total as f64 * fraction).round() as usize
}

/// One recipe per line: `id<TAB>b;rw;...`.
pub fn write_recipe_file(recipes: &[Recipe]) -> String {
    recipes
        .iter()
        .map(|r| {
            let body: Vec<&str> = r.tokens.iter().map(|t| t.surface()).collect();
            format!("{}\t{}\n", r.recipe_id, body.join(";"))
        })
        .collect()
}

pub fn parse_recipe_file(text: &str) -> Result<Vec<Recipe>, RecipeError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| RecipeError::File { line: i + 1, msg };
        let (id, body) = line.split_once('\t').ok_or_else(|| err("expected `id<TAB>recipe`".into()))?;
        let recipe_id = id.trim().parse().map_err(|_| err(format!("bad id `{id}`")))?;
        let tokens = parse_recipe(body).map_err(|e| err(e.to_string()))?;
        out.push(Recipe { recipe_id, tokens });
    }
    Ok(out)
}

/// Square matrix as CSV with the names as header row and first column.
pub fn matrix_csv(names: &[String], matrix: &[Vec<f64>]) -> String {
    let mut s = String::from("ip");
    for n in names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    for (n, row) in names.iter().zip(matrix) {
        s.push_str(n);
        for v in row {
            s.push_str(&format!(",{v:.4}"));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use TransformToken::*;

    #[test]
    fn parses_listing() {
        let t = parse_recipe("b; rw; rf; b; rw; rw -z; b; rf -z; rs; b").unwrap();
        assert_eq!(t, vec![B, Rw, Rf, B, Rw, Rwz, B, Rfz, Rs, B]);
        assert_eq!(parse_recipe("rs -z").unwrap(), vec![Rsz]);
        assert_eq!(parse_recipe("b rw\trs -z;rf").unwrap(), vec![B, Rw, Rsz, Rf]);
        assert_eq!(parse_recipe("frobnicate"), Err(RecipeError::UnknownToken("frobnicate".into())));
        assert_eq!(parse_recipe(" ; "), Err(RecipeError::Empty));
        assert!(parse_recipe("b -z").is_err());
    }

    #[test]
    fn render_round_trips() {
        for r in sample_recipes(50, 12, 3) {
            assert_eq!(parse_recipe(&render_recipe(&r.tokens)).unwrap(), r.tokens);
        }
    }

    #[test]
    fn codes_are_a_bijection() {
        for (i, t) in TransformToken::ALL.iter().enumerate() {
            assert_eq!(t.code() as usize, i);
            assert_eq!(TransformToken::from_code(t.code()).unwrap(), *t);
            assert_eq!(parse_recipe(t.surface()).unwrap(), vec![*t]);
        }
        assert_eq!(encode_recipe(&[B; 20]), vec![0; 20]);
        assert_eq!(encode_recipe(&[Rw, Rwz, Rf]), vec![1, 2, 3]);
        assert!(decode_recipe(&[7]).is_err());
    }

    #[test]
    fn sampling_shape_and_determinism() {
        let rs = sample_recipes(1500, 20, 11);
        assert_eq!(rs.len(), 1500);
        assert!(rs.iter().all(|r| r.tokens.len() == 20));
        assert!(rs.iter().enumerate().all(|(i, r)| r.recipe_id as usize == i));
        assert_eq!(rs, sample_recipes(1500, 20, 11));
        assert_eq!(sample_recipes(1, 1, 0)[0].tokens.len(), 1);
    }

    #[test]
    fn token_frequencies_are_uniform() {
        let rs = sample_recipes(70_000, 20, 5);
        let mut counts = [0usize; 7];
        for r in &rs {
            for t in &r.tokens {
                counts[t.code() as usize] += 1;
            }
        }
        let total = (70_000 * 20) as f64;
        for c in counts {
            assert!((c as f64 / total - 1.0 / 7.0).abs() < 0.01);
        }
    }

    #[test]
    fn similarity() {
        let a = vec![B; 20];
        let mut b = a.clone();
        assert_eq!(recipe_similarity(&a, &b).unwrap(), 1.0);
        b[3] = Rw;
        assert_eq!(recipe_similarity(&a, &b).unwrap(), 0.95);
        assert_eq!(recipe_similarity(&a, &[Rs; 20]).unwrap(), 0.0);
        assert!(recipe_similarity(&a, &[B]).is_err());
    }

    #[test]
    fn overlap_matrix() {
        let same = vec![(0, 5), (1, 3), (2, 9), (3, 1)];
        let m = top_k_overlap(&[same.clone(), same.clone()], 2).unwrap();
        assert_eq!(m, vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let other = vec![(0, 1), (1, 9), (2, 2), (3, 9)];
        let m = top_k_overlap(&[same.clone(), other], 2).unwrap();
        assert_eq!(m[0][1], 0.0);
        assert_eq!(m[1][0], 0.0);
        assert_eq!(m[1][1], 1.0);
        assert!(top_k_overlap(&[same], 5).is_err());
        assert_eq!(k_from_fraction(1500, 0.01), 15);
    }

    #[test]
    fn recipe_file_round_trip() {
        let rs = sample_recipes(5, 4, 9);
        let text = write_recipe_file(&rs);
        assert!(text.starts_with("0\t"));
        assert_eq!(parse_recipe_file(&text).unwrap(), rs);
        assert!(parse_recipe_file("x\tb").is_err());
    }
}
