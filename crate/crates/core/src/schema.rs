//! Schemata over `{0, 1, *}`: classical matching, match probability against
//! quantum chromosomes, static schema fitness and bounded enumeration.

use std::fmt;
use std::str::FromStr;

use crate::chromosome::BinaryChromosome;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::qubit::QuantumChromosome;
use crate::spline::{SplineFitness, EXHAUSTIVE_BITS_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Any,
}

impl Symbol {
    pub fn is_fixed(self) -> bool {
        self != Symbol::Any
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Any => '*',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schema {
    symbols: Vec<Symbol>,
}

/// Parses a schema of exactly the text's length.
pub fn parse_schema(text: &str) -> Result<Schema> {
    text.parse()
}

impl FromStr for Schema {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Empty("schema"));
        }
        let symbols = text
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                '*' => Ok(Symbol::Any),
                _ => Err(Error::SchemaParse { ch, pos }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { symbols })
    }
}

impl Schema {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self { symbols }
    }

    pub fn wildcard(m: usize) -> Self {
        Self {
            symbols: vec![Symbol::Any; m],
        }
    }

    /// Parses `text` and right-pads it with `*` up to length `m`.
    pub fn parse_padded(text: &str, m: usize) -> Result<Self> {
        let s: Schema = text.parse()?;
        s.padded(m)
    }

    pub fn padded(mut self, m: usize) -> Result<Self> {
        if self.len() > m {
            return Err(Error::LengthMismatch {
                expected: m,
                actual: self.len(),
            });
        }
        self.symbols.resize(m, Symbol::Any);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn order(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_fixed()).count()
    }

    pub fn defining_length(&self) -> usize {
        let first = self.symbols.iter().position(|s| s.is_fixed());
        let last = self.symbols.iter().rposition(|s| s.is_fixed());
        match (first, last) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn matches(&self, c: &BinaryChromosome) -> Result<bool> {
        self.check_len(c.len())?;
        Ok(self.matches_unchecked(c))
    }

    pub(crate) fn matches_unchecked(&self, c: &BinaryChromosome) -> bool {
        self.symbols.iter().zip(c.bits()).all(|(s, &b)| match s {
            Symbol::Zero => !b,
            Symbol::One => b,
            Symbol::Any => true,
        })
    }

    /// Probability that an observation of `q` matches: the product over
    /// positions of `α²` (for `0`), `β²` (for `1`) or `1` (for `*`).
    pub fn match_probability(&self, q: &QuantumChromosome) -> Result<f64> {
        self.check_len(q.len())?;
        Ok(self
            .symbols
            .iter()
            .zip(q.genes())
            .map(|(s, g)| match s {
                Symbol::Zero => g.prob_zero(),
                Symbol::One => g.prob_one(),
                Symbol::Any => 1.0,
            })
            .product())
    }

    /// Big-endian mask of fixed positions and the value they are fixed to.
    fn fixed_mask(&self) -> (u64, u64) {
        let m = self.len();
        let mut mask = 0u64;
        let mut value = 0u64;
        for (i, s) in self.symbols.iter().enumerate() {
            let bit = 1u64 << (m - 1 - i);
            match s {
                Symbol::Zero => mask |= bit,
                Symbol::One => {
                    mask |= bit;
                    value |= bit;
                }
                Symbol::Any => {}
            }
        }
        (mask, value)
    }

    /// Every chromosome value matching the schema, in increasing order.
    ///
    /// Only valid for schema lengths up to 64.
    pub fn match_values(&self) -> impl Iterator<Item = u64> + '_ {
        let m = self.len();
        let (mask, value) = self.fixed_mask();
        let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let free = all & !mask;
        // (s - free) & free steps through the submasks of `free` in increasing order
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let s = next?;
            next = (s != free).then(|| s.wrapping_sub(free) & free);
            Some(value | s)
        })
    }

    /// Mean of `value(v)` over all chromosome values `v` matching the schema.
    pub fn mean_over_matches(&self, value: impl Fn(u64) -> f64) -> Result<f64> {
        let free = self.len() - self.order();
        if free > EXHAUSTIVE_BITS_CAP {
            return Err(Error::TooLarge {
                what: "schema match set (free positions)",
                size: free,
                cap: EXHAUSTIVE_BITS_CAP,
            });
        }
        let sum: CompensatedSum = self.match_values().map(value).collect();
        Ok(sum.value() / (1u64 << free) as f64)
    }

    /// Static schema fitness: mean landscape fitness over every matching chromosome.
    pub fn fitness(&self, f: &SplineFitness) -> Result<f64> {
        let m = self.len();
        self.mean_over_matches(|v| f.value_fitness(v, m))
    }

    /// Text with trailing wildcards elided down to half the schema length
    /// (never cutting a fixed symbol); `parse_padded` inverts it.
    pub fn compact(&self) -> String {
        let m = self.len();
        let last = self
            .symbols
            .iter()
            .rposition(|s| s.is_fixed())
            .map_or(0, |i| i + 1);
        let keep = last.max(m.div_ceil(2)).max(1).min(m);
        self.symbols[..keep].iter().map(|s| s.as_char()).collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

pub fn matches(c: &BinaryChromosome, s: &Schema) -> Result<bool> {
    s.matches(c)
}

pub fn match_probability(q: &QuantumChromosome, s: &Schema) -> Result<f64> {
    s.match_probability(q)
}

/// Static fitness of a schema of length `m` (the schema is padded with `*` when shorter).
pub fn schema_fitness(s: &Schema, f: &SplineFitness, m: usize) -> Result<f64> {
    s.clone().padded(m)?.fitness(f)
}

/// Number of schemata [`enumerate_schemata`] would return, without building them.
pub fn count_schemata(m: usize, max_order: usize, max_defining_length: usize) -> u128 {
    if max_order == 0 {
        return 0;
    }
    let binom = |n: usize, k: usize| -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    };
    let mut total = 0u128;
    for first in 0..m {
        for span in 0..=max_defining_length.min(m - 1 - first) {
            let ends = if span == 0 { 1 } else { 2 };
            let interior = span.saturating_sub(1);
            for k in 0..=interior {
                let order = ends + k;
                if order > max_order {
                    break;
                }
                total = total
                    .saturating_add(binom(interior, k).saturating_mul(1u128 << order.min(127)));
            }
        }
    }
    total
}

/// All schemata of length `m` with `1 ≤ order ≤ max_order` and
/// `defining_length ≤ max_defining_length`, each exactly once.
///
/// Ordered by first fixed position, then span, then interior pattern, then values.
pub fn enumerate_schemata(m: usize, max_order: usize, max_defining_length: usize) -> Vec<Schema> {
    let mut out = Vec::new();
    if max_order == 0 {
        return out;
    }
    for first in 0..m {
        for span in 0..=max_defining_length.min(m - 1 - first) {
            let last = first + span;
            // interior positions strictly between first and last
            let interior = span.saturating_sub(1);
            for inner in 0u64..(1u64 << interior) {
                let mut fixed = vec![first];
                fixed.extend(
                    (0..interior)
                        .filter(|j| (inner >> (interior - 1 - j)) & 1 == 1)
                        .map(|j| first + 1 + j),
                );
                if span > 0 {
                    fixed.push(last);
                }
                if fixed.len() > max_order {
                    continue;
                }
                let order = fixed.len();
                for values in 0u64..(1u64 << order) {
                    let mut symbols = vec![Symbol::Any; m];
                    for (k, &pos) in fixed.iter().enumerate() {
                        symbols[pos] = if (values >> (order - 1 - k)) & 1 == 1 {
                            Symbol::One
                        } else {
                            Symbol::Zero
                        };
                    }
                    out.push(Schema::new(symbols));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::QubitGene;
    use std::collections::HashSet;

    fn mixed_chromosome() -> QuantumChromosome {
        QuantumChromosome::new(vec![
            QubitGene::one(),
            QubitGene::zero(),
            QubitGene::new(0.5, 3f64.sqrt() / 2.0).unwrap(),
        ])
    }

    #[test]
    fn order_and_defining_length() {
        let s = parse_schema("10*").unwrap();
        assert_eq!((s.order(), s.defining_length()), (2, 1));
        let s = Schema::parse_padded("01001*****", 20).unwrap();
        assert_eq!((s.len(), s.order(), s.defining_length()), (20, 5, 4));
        let s = parse_schema("***").unwrap();
        assert_eq!((s.order(), s.defining_length()), (0, 0));
        let s = parse_schema("**1*").unwrap();
        assert_eq!((s.order(), s.defining_length()), (1, 0));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_schema("10x"),
            Err(Error::SchemaParse { ch: 'x', pos: 2 })
        ));
        assert!(parse_schema("").is_err());
        assert!(Schema::parse_padded("0101", 3).is_err());
    }

    #[test]
    fn classical_matching() {
        let s = parse_schema("10*").unwrap();
        assert!(s.matches(&"101".parse().unwrap()).unwrap());
        assert!(!s.matches(&"001".parse().unwrap()).unwrap());
        assert!(s.matches(&"10".parse().unwrap()).is_err());
        let any = Schema::wildcard(3);
        for v in 0..8 {
            assert!(any.matches(&BinaryChromosome::from_value(v, 3)).unwrap());
        }
    }

    #[test]
    fn mixed_chromosome_match_probabilities() {
        let q = mixed_chromosome();
        for (text, expected) in [
            ("***", 1.0),
            ("*0*", 1.0),
            ("10*", 1.0),
            ("**0", 0.25),
            ("1*1", 0.75),
        ] {
            let p = parse_schema(text).unwrap().match_probability(&q).unwrap();
            assert!((p - expected).abs() < 1e-12, "{text}: {p}");
        }
        assert!(parse_schema("1*").unwrap().match_probability(&q).is_err());
    }

    #[test]
    fn compact_rendering() {
        let s = Schema::parse_padded("01001", 20).unwrap();
        assert_eq!(s.compact(), "01001*****");
        assert_eq!(Schema::parse_padded(&s.compact(), 20).unwrap(), s);
        let s = Schema::parse_padded("*10011", 20).unwrap();
        assert_eq!(s.compact(), "*10011****");
        let s = Schema::parse_padded("***********1", 20).unwrap();
        assert_eq!(s.compact(), "***********1");
        assert_eq!(parse_schema("10*").unwrap().compact(), "10");
        assert_eq!(Schema::wildcard(3).compact(), "**");
    }

    #[test]
    fn match_values_enumerates_the_match_set() {
        let s = parse_schema("1*0*").unwrap();
        let got: Vec<u64> = s.match_values().collect();
        let want: Vec<u64> = (0..16)
            .filter(|&v| s.matches(&BinaryChromosome::from_value(v, 4)).unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn enumeration_counts() {
        for (m, o, d) in [(3, 1, 0), (3, 3, 2), (8, 3, 5), (20, 5, 4), (7, 0, 3)] {
            assert_eq!(
                count_schemata(m, o, d),
                enumerate_schemata(m, o, d).len() as u128
            );
        }
        assert_eq!(enumerate_schemata(3, 1, 0).len(), 6);
        assert_eq!(enumerate_schemata(3, 3, 2).len(), 26);
        assert!(enumerate_schemata(3, 0, 2).is_empty());
    }

    #[test]
    fn enumeration_agrees_with_brute_force_filter() {
        for m in 1..=6 {
            for max_order in 1..=4 {
                for max_dl in 0..=4 {
                    let got = enumerate_schemata(m, max_order, max_dl);
                    let set: HashSet<_> = got.iter().cloned().collect();
                    assert_eq!(set.len(), got.len(), "duplicates");
                    let mut want = HashSet::new();
                    for code in 0..3usize.pow(m as u32) {
                        let mut c = code;
                        let symbols = (0..m)
                            .map(|_| {
                                let s = [Symbol::Zero, Symbol::One, Symbol::Any][c % 3];
                                c /= 3;
                                s
                            })
                            .collect();
                        let s = Schema::new(symbols);
                        if (1..=max_order).contains(&s.order()) && s.defining_length() <= max_dl {
                            want.insert(s);
                        }
                    }
                    assert_eq!(set, want, "m={m} order<={max_order} dl<={max_dl}");
                }
            }
        }
    }

    #[test]
    fn reference_building_blocks_are_enumerated() {
        let all: HashSet<_> = enumerate_schemata(20, 5, 4).into_iter().collect();
        for text in ["01001", "01*01", "*10011", "010*1", "*10*11", "*100*1"] {
            assert!(
                all.contains(&Schema::parse_padded(text, 20).unwrap()),
                "{text}"
            );
        }
    }

    #[test]
    fn fitness_of_wildcard_is_the_landscape_mean() {
        let f = SplineFitness::reference();
        let via_schema = Schema::wildcard(12).fitness(&f).unwrap();
        let direct = f.mean_fitness_exhaustive(12).unwrap();
        assert!((via_schema - direct).abs() < 1e-12);
    }

    #[test]
    fn schema_fitness_cap() {
        let f = SplineFitness::reference();
        assert!(matches!(
            Schema::wildcard(25).fitness(&f),
            Err(Error::TooLarge { .. })
        ));
    }
}
