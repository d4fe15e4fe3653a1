// SPDX-License-Identifier: Apache-2.0

//! Word-packed truth tables over up to 16 variables and the
//! Minato-Morreale irredundant sum-of-products.

/// Bit patterns of the first six variables inside one 64-bit word.
pub const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Truth table of a function over `num_vars` inputs. Tables with fewer than
/// six variables repeat their pattern across the whole word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    num_vars: usize,
    words: Vec<u64>,
}

fn word_count(num_vars: usize) -> usize {
    if num_vars <= 6 {
        1
    } else {
        1 << (num_vars - 6)
    }
}

/// Pattern word `w` of variable `var`.
pub fn var_word(var: usize, w: usize) -> u64 {
    if var < 6 {
        VAR_MASKS[var]
    } else if (w >> (var - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

impl TruthTable {
    pub fn zero(num_vars: usize) -> Self {
        TruthTable {
            num_vars,
            words: vec![0; word_count(num_vars)],
        }
    }

    pub fn one(num_vars: usize) -> Self {
        TruthTable {
            num_vars,
            words: vec![!0; word_count(num_vars)],
        }
    }

    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars);
        TruthTable {
            num_vars,
            words: (0..word_count(num_vars)).map(|w| var_word(var, w)).collect(),
        }
    }

    pub fn from_words(num_vars: usize, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), word_count(num_vars));
        TruthTable { num_vars, words }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bit(&self, minterm: usize) -> bool {
        (self.words[minterm >> 6] >> (minterm & 63)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.words.iter().all(|&w| w == !0)
    }

    pub fn not(&self) -> Self {
        TruthTable {
            num_vars: self.num_vars,
            words: self.words.iter().map(|w| !w).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        TruthTable {
            num_vars: self.num_vars,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn and_not(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn xor_with(&self, c: bool) -> Self {
        if c {
            self.not()
        } else {
            self.clone()
        }
    }

    /// Cofactor with `var` fixed to `value`, replicated over both halves so
    /// the result no longer depends on `var`.
    pub fn cofactor(&self, var: usize, value: bool) -> Self {
        let mut words = self.words.clone();
        if var < 6 {
            let shift = 1u32 << var;
            let mask = VAR_MASKS[var];
            for w in &mut words {
                *w = if value {
                    let hi = *w & mask;
                    hi | (hi >> shift)
                } else {
                    let lo = *w & !mask;
                    lo | (lo << shift)
                };
            }
        } else {
            let stride = 1usize << (var - 6);
            let mut base = 0;
            while base < words.len() {
                for i in 0..stride {
                    let v = if value {
                        words[base + stride + i]
                    } else {
                        words[base + i]
                    };
                    words[base + i] = v;
                    words[base + stride + i] = v;
                }
                base += 2 * stride;
            }
        }
        TruthTable {
            num_vars: self.num_vars,
            words,
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.cofactor(var, false) != self.cofactor(var, true)
    }
}

/// A product term: `mask` selects the variables present, `polarity` their
/// phase (bit set = positive literal).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Cube {
    pub mask: u32,
    pub polarity: u32,
}

impl Cube {
    pub const TAUTOLOGY: Cube = Cube {
        mask: 0,
        polarity: 0,
    };

    pub fn literal_count(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn has(&self, var: usize, positive: bool) -> bool {
        (self.mask >> var) & 1 == 1 && ((self.polarity >> var) & 1 == 1) == positive
    }

    pub fn with(self, var: usize, positive: bool) -> Cube {
        Cube {
            mask: self.mask | 1 << var,
            polarity: if positive {
                self.polarity | 1 << var
            } else {
                self.polarity & !(1 << var)
            },
        }
    }

    pub fn without(self, var: usize) -> Cube {
        Cube {
            mask: self.mask & !(1 << var),
            polarity: self.polarity & !(1 << var),
        }
    }

    pub fn truth(&self, num_vars: usize) -> TruthTable {
        let mut t = TruthTable::one(num_vars);
        for v in 0..num_vars {
            if (self.mask >> v) & 1 == 1 {
                let var = TruthTable::var(num_vars, v);
                t = if (self.polarity >> v) & 1 == 1 {
                    t.and(&var)
                } else {
                    t.and_not(&var)
                };
            }
        }
        t
    }
}

/// Irredundant sum-of-products of an incompletely specified function with
/// on-set `lower` and on-set-plus-don't-cares `upper` (`lower` implies
/// `upper`). Returns the cubes and the function they cover.
pub fn isop(lower: &TruthTable, upper: &TruthTable) -> (Vec<Cube>, TruthTable) {
    let n = lower.num_vars();
    isop_rec(lower, upper, n)
}

fn isop_rec(lower: &TruthTable, upper: &TruthTable, top: usize) -> (Vec<Cube>, TruthTable) {
    let n = lower.num_vars();
    if lower.is_zero() {
        return (Vec::new(), TruthTable::zero(n));
    }
    if upper.is_one() {
        return (vec![Cube::TAUTOLOGY], TruthTable::one(n));
    }
    let var = (0..top)
        .rev()
        .find(|&v| lower.depends_on(v) || upper.depends_on(v))
        .expect("non-constant bounds must depend on some variable");
    let l0 = lower.cofactor(var, false);
    let l1 = lower.cofactor(var, true);
    let u0 = upper.cofactor(var, false);
    let u1 = upper.cofactor(var, true);

    let (c0, r0) = isop_rec(&l0.and_not(&u1), &u0, var);
    let (c1, r1) = isop_rec(&l1.and_not(&u0), &u1, var);
    let rest_lower = l0.and_not(&r0).or(&l1.and_not(&r1));
    let (cs, rs) = isop_rec(&rest_lower, &u0.and(&u1), var);

    let x = TruthTable::var(n, var);
    let cover = r0.and_not(&x).or(&r1.and(&x)).or(&rs);
    let mut cubes = Vec::with_capacity(c0.len() + c1.len() + cs.len());
    cubes.extend(c0.into_iter().map(|c| c.with(var, false)));
    cubes.extend(c1.into_iter().map(|c| c.with(var, true)));
    cubes.extend(cs);
    (cubes, cover)
}

pub fn cover_truth(cubes: &[Cube], num_vars: usize) -> TruthTable {
    cubes
        .iter()
        .fold(TruthTable::zero(num_vars), |acc, c| acc.or(&c.truth(num_vars)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> TruthTable {
        let mut t = TruthTable::zero(n);
        let total = 1usize << n;
        for m in 0..word_count(n) * 64 {
            if f(m % total) {
                t.words[m >> 6] |= 1 << (m & 63);
            }
        }
        t
    }

    #[test]
    fn variables_match_minterm_bits() {
        for n in [3usize, 6, 8] {
            for v in 0..n {
                let t = TruthTable::var(n, v);
                for m in 0..(1 << n) {
                    assert_eq!(t.bit(m), (m >> v) & 1 == 1);
                }
            }
        }
    }

    #[test]
    fn cofactor_matches_pointwise_definition() {
        let n = 8;
        let f = from_fn(n, |m| (m * 37 + 11) % 7 < 3);
        for v in 0..n {
            for value in [false, true] {
                let c = f.cofactor(v, value);
                for m in 0..(1 << n) {
                    let fixed = if value { m | 1 << v } else { m & !(1 << v) };
                    assert_eq!(c.bit(m), f.bit(fixed));
                }
            }
        }
    }

    #[test]
    fn isop_covers_exactly() {
        for n in [1usize, 3, 5, 7, 9] {
            for seed in 0..20usize {
                let f = from_fn(n, |m| (m.wrapping_mul(2654435761) ^ (seed * 977)) % 5 < 2);
                let (cubes, cover) = isop(&f, &f);
                assert_eq!(cover, f);
                assert_eq!(cover_truth(&cubes, n), f);
                // irredundant: dropping any cube loses coverage
                for skip in 0..cubes.len() {
                    let rest: Vec<_> = cubes
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, c)| *c)
                        .collect();
                    assert_ne!(cover_truth(&rest, n), f);
                }
            }
        }
    }

    #[test]
    fn isop_constants() {
        let (c, _) = isop(&TruthTable::zero(4), &TruthTable::zero(4));
        assert!(c.is_empty());
        let (c, _) = isop(&TruthTable::one(4), &TruthTable::one(4));
        assert_eq!(c, vec![Cube::TAUTOLOGY]);
    }
}
