//! Defining sets `D1`, `D2`, `D3` and the codes they define.
//!
//! A defining set is an ordered list of pairs `(x, y)` with `x != 0`. The
//! code is the image of the labels `(a, b)` in GF(2^m)^2 under
//! `c(a, b)_j = Tr(a x_j^d y_j + b x_j)`.
//!
//! The distribution enumerates all `2^(2m)` codewords. Since the trace is
//! additive, `c(a, b) = c(a, 0) + c(0, b)`, so the `2^m` rows `c(a, 0)` and
//! the `2^m` rows `c(0, b)` are evaluated once and every codeword is one
//! XOR plus a popcount away.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Default cap on `2^(2m) * |D|` trace evaluations.
pub const DEFAULT_BUDGET: u128 = 1 << 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    D1,
    D2,
    D3,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::D1, Family::D2, Family::D3];

    /// Membership predicate for `(x, y)`.
    pub fn admits(self, f: &Field, d: u64, x: Elem, y: Elem) -> bool {
        if x.is_zero() {
            return false;
        }
        let xd = f.pow(x, d);
        let xd1 = f.mul(xd, x);
        match self {
            Family::D1 => f.trace(f.mul(xd1, y) + f.mul(xd, y) + x) == 0,
            Family::D2 => {
                let xd2 = f.mul(xd1, x);
                !y.is_zero() && f.trace(f.mul(xd2, y) + f.mul(xd1, y)) == 0
            }
            Family::D3 => f.trace(f.mul(xd1, y)) == 0 && f.trace(f.mul(xd, y)) == 1,
        }
    }

    /// Closed-form `|D|` at degree `m`. For `D1` the count depends on
    /// `Tr(1)`, i.e. on the parity of `m`.
    pub fn expected_len(self, m: u32) -> u64 {
        let p = |e: u32| 1u64 << e;
        match self {
            Family::D1 if m.is_multiple_of(2) => p(2 * m - 1),
            Family::D1 => p(m) * (p(m - 1) - 1),
            Family::D2 => p(2 * m - 1) - p(m) + 1,
            Family::D3 => p(m - 1) * (p(m - 1) - 1),
        }
    }

    /// Trace evaluations needed to enumerate every codeword at degree `m`.
    pub fn required_work(self, m: u32) -> u128 {
        let m = m.min(64);
        let n = if m <= 31 {
            self.expected_len(m) as u128
        } else {
            u128::MAX >> 64
        };
        (1u128 << (2 * m)).saturating_mul(n)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::D1 => "D1",
            Family::D2 => "D2",
            Family::D3 => "D3",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Family::D1),
            "d2" => Ok(Family::D2),
            "d3" => Ok(Family::D3),
            _ => Err(Error::Config(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DefiningSet<'f> {
    family: Family,
    field: &'f Field,
    d: u64,
    pairs: Vec<(Elem, Elem)>,
}

impl<'f> DefiningSet<'f> {
    /// Applies the family's membership predicate over all `(x, y)`; pairs
    /// come out ascending by `(x, y)` mask.
    pub fn new(family: Family, field: &'f Field, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroExponent);
        }
        let pairs = field
            .nonzero_elements()
            .flat_map(|x| field.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| family.admits(field, d, x, y))
            .collect();
        Ok(DefiningSet {
            family,
            field,
            d,
            pairs,
        })
    }

    /// A set with caller-chosen pairs, kept in the given order. Used for
    /// synthetic checks of the structural predicates.
    pub fn from_pairs(family: Family, field: &'f Field, d: u64, pairs: Vec<(Elem, Elem)>) -> Self {
        DefiningSet {
            family,
            field,
            d,
            pairs,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Column of the generator matrix for each pair: `(x^d y, x)`.
    pub fn columns(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let f = self.field;
        self.pairs
            .iter()
            .map(move |&(x, y)| (f.mul(f.pow(x, self.d), y), x))
    }

    /// `c(a, b)` evaluated straight from its definition.
    pub fn codeword(&self, a: Elem, b: Elem) -> Codeword {
        let f = self.field;
        let mut bits = BitVec::zeros(self.len());
        for (j, &(x, y)) in self.pairs.iter().enumerate() {
            let u = f.mul(f.pow(x, self.d), y);
            bits.set(j, f.trace(f.mul(a, u) + f.mul(b, x)) == 1);
        }
        Codeword { a, b, bits }
    }

    /// Number of pairs where `Tr(a x^d y + b x) = 0`.
    pub fn zero_count(&self, a: Elem, b: Elem) -> u64 {
        let f = self.field;
        self.pairs
            .iter()
            .filter(|&&(x, y)| {
                let u = f.mul(f.pow(x, self.d), y);
                f.trace(f.mul(a, u) + f.mul(b, x)) == 0
            })
            .count() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub a: Elem,
    pub b: Elem,
    pub bits: BitVec,
}

impl Codeword {
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Work limits and parallelism for codeword enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub budget: u128,
    /// `None` uses the global thread pool.
    pub workers: Option<usize>,
}

impl Default for Enumeration {
    fn default() -> Self {
        Enumeration {
            budget: DEFAULT_BUDGET,
            workers: None,
        }
    }
}

impl Enumeration {
    pub fn check(&self, task: &'static str, required: u128) -> Result<()> {
        if required > self.budget {
            Err(Error::BudgetExceeded {
                task,
                required,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn run<R: Send>(&self, job: impl FnOnce() -> R + Send) -> R {
        match self.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool")
                .install(job),
            None => job(),
        }
    }
}

/// Hamming weight of `c(a, b)` for every label, indexed by
/// `(a.mask() << m) | b.mask()`.
pub fn label_weights(set: &DefiningSet<'_>, opts: &Enumeration) -> Result<Vec<u32>> {
    let f = set.field();
    let m = f.degree();
    let q = f.order();
    let n = set.len();
    opts.check("codeword enumeration", (q as u128 * q as u128) * n as u128)?;

    let words = n.div_ceil(64);
    let columns: Vec<(Elem, Elem)> = set.columns().collect();
    let rows = |pick: fn(&(Elem, Elem)) -> Elem| -> Vec<u64> {
        let mut out = vec![0u64; q * words];
        out.par_chunks_mut(words.max(1))
            .zip(f.elements().collect::<Vec<_>>())
            .for_each(|(row, s)| {
                for (j, col) in columns.iter().enumerate() {
                    if f.trace(f.mul(s, pick(col))) == 1 {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
            });
        out
    };

    Ok(opts.run(|| {
        let rows_a = rows(|c| c.0);
        let rows_b = rows(|c| c.1);
        let mut weights = vec![0u32; q * q];
        weights
            .par_chunks_mut(q)
            .enumerate()
            .for_each(|(a, chunk)| {
                let ra = &rows_a[a * words..(a + 1) * words];
                for (b, w) in chunk.iter_mut().enumerate() {
                    let rb = &rows_b[b * words..(b + 1) * words];
                    *w = ra.iter().zip(rb).map(|(x, y)| (x ^ y).count_ones()).sum();
                }
            });
        debug_assert_eq!(weights.len(), 1 << (2 * m));
        weights
    }))
}

/// Frequencies of codeword weights over all `2^(2m)` labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub n: u64,
    pub k: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl WeightDistribution {
    /// Tallies per-label weights. `k` is the base-2 log of the number of
    /// distinct codewords: the label map is GF(2)-linear, so that number is
    /// `labels / #{labels of weight 0}`.
    pub fn from_label_weights(n: u64, weights: &[u32]) -> Self {
        let mut counts = BTreeMap::new();
        for &w in weights {
            *counts.entry(w).or_insert(0u64) += 1;
        }
        let kernel = counts.get(&0).copied().unwrap_or(0).max(1);
        let distinct = weights.len() as u64 / kernel;
        WeightDistribution {
            n,
            k: distinct.trailing_zeros(),
            counts,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Nonzero weights with nonzero frequency, ascending.
    pub fn nonzero_weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts
            .iter()
            .filter(|&(&w, &a)| w > 0 && a > 0)
            .map(|(&w, _)| w)
    }

    pub fn min_nonzero_weight(&self) -> Option<u32> {
        self.nonzero_weights().next()
    }

    pub fn max_nonzero_weight(&self) -> Option<u32> {
        self.nonzero_weights().last()
    }

    /// `[n,k,d]` with `d` the minimum nonzero weight (0 for the zero code).
    pub fn parameters(&self) -> String {
        format!(
            "[{},{},{}]",
            self.n,
            self.k,
            self.min_nonzero_weight().unwrap_or(0)
        )
    }
}

pub fn weight_distribution(
    set: &DefiningSet<'_>,
    opts: &Enumeration,
) -> Result<WeightDistribution> {
    let weights = label_weights(set, opts)?;
    Ok(WeightDistribution::from_label_weights(
        set.len() as u64,
        &weights,
    ))
}

/// Canonical enumerator text, e.g. `1+15z^4+32z^6+15z^8+z^12`.
pub fn weight_enumerator(w: &WeightDistribution) -> String {
    let terms: Vec<String> = w
        .counts
        .iter()
        .filter(|&(_, &a)| a > 0)
        .map(|(&weight, &a)| match (weight, a) {
            (0, a) => a.to_string(),
            (w, 1) => format!("z^{w}"),
            (w, a) => format!("{a}z^{w}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(m: u32) -> Field {
        Field::new(m).unwrap()
    }

    #[test]
    fn small_cardinalities() {
        let f = gf(3);
        assert_eq!(DefiningSet::new(Family::D1, &f, 1).unwrap().len(), 24);
        assert_eq!(DefiningSet::new(Family::D2, &f, 1).unwrap().len(), 25);
        assert_eq!(DefiningSet::new(Family::D3, &f, 1).unwrap().len(), 12);
        for m in 2..=8 {
            let f = gf(m);
            for fam in Family::ALL {
                for d in 1..=3 {
                    let set = DefiningSet::new(fam, &f, d).unwrap();
                    assert_eq!(set.len() as u64, fam.expected_len(m), "{fam} m={m} d={d}");
                }
            }
        }
        assert_eq!(
            DefiningSet::new(Family::D1, &f, 0).unwrap_err(),
            Error::ZeroExponent
        );
    }

    #[test]
    fn pairs_are_sorted_and_admitted() {
        let f = gf(4);
        for fam in Family::ALL {
            let set = DefiningSet::new(fam, &f, 2).unwrap();
            assert!(set.pairs().windows(2).all(|w| w[0] < w[1]));
            assert!(set.pairs().iter().all(|&(x, y)| fam.admits(&f, 2, x, y)));
            let admitted = f
                .elements()
                .flat_map(|x| f.elements().map(move |y| (x, y)))
                .filter(|&(x, y)| fam.admits(&f, 2, x, y))
                .count();
            assert_eq!(admitted, set.len());
        }
    }

    #[test]
    fn zero_label_is_zero_word() {
        let f = gf(3);
        for fam in Family::ALL {
            let set = DefiningSet::new(fam, &f, 1).unwrap();
            let c = set.codeword(Elem::ZERO, Elem::ZERO);
            assert_eq!(c.len(), set.len());
            assert_eq!(c.weight(), 0);
        }
    }

    #[test]
    fn d1_weight_for_a_zero() {
        let f = gf(3);
        let set = DefiningSet::new(Family::D1, &f, 1).unwrap();
        for b in f
            .nonzero_elements()
            .filter(|&b| f.trace(b + Elem::ONE) == 1)
        {
            assert_eq!(set.codeword(Elem::ZERO, b).weight(), 16);
        }
    }

    #[test]
    fn packed_enumeration_matches_definition() {
        for m in 2..=4 {
            let f = gf(m);
            for fam in Family::ALL {
                let set = DefiningSet::new(fam, &f, 3).unwrap();
                let weights = label_weights(&set, &Enumeration::default()).unwrap();
                for a in f.elements() {
                    for b in f.elements() {
                        let c = set.codeword(a, b);
                        let idx = ((a.mask() << m) | b.mask()) as usize;
                        assert_eq!(weights[idx], c.weight());
                        assert_eq!(c.weight() as u64, set.len() as u64 - set.zero_count(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn measured_dimension_matches_distinct_codewords() {
        for m in 2..=4 {
            let f = gf(m);
            for fam in Family::ALL {
                let set = DefiningSet::new(fam, &f, 1).unwrap();
                let distinct: HashSet<BitVec> = f
                    .elements()
                    .flat_map(|a| f.elements().map(move |b| (a, b)))
                    .map(|(a, b)| set.codeword(a, b).bits)
                    .collect();
                let wd = weight_distribution(&set, &Enumeration::default()).unwrap();
                assert_eq!(1u64 << wd.k, distinct.len() as u64, "{fam} m={m}");
            }
        }
        // A set whose columns only see `x` cannot separate labels by `a`.
        let f = gf(3);
        let pairs = f.nonzero_elements().map(|x| (x, Elem::ZERO)).collect();
        let set = DefiningSet::from_pairs(Family::D1, &f, 1, pairs);
        let wd = weight_distribution(&set, &Enumeration::default()).unwrap();
        assert_eq!(wd.k, 3);
        assert_eq!(wd.counts[&0], 8);
    }

    #[test]
    fn enumerator_text() {
        let f = gf(3);
        let set = DefiningSet::new(Family::D3, &f, 1).unwrap();
        let wd = weight_distribution(&set, &Enumeration::default()).unwrap();
        assert_eq!(weight_enumerator(&wd), "1+15z^4+32z^6+15z^8+z^12");
        assert_eq!(wd.parameters(), "[12,6,4]");

        let zero = WeightDistribution {
            n: 5,
            k: 0,
            counts: BTreeMap::from([(0, 1)]),
        };
        assert_eq!(weight_enumerator(&zero), "1");
        assert_eq!(zero.parameters(), "[5,0,0]");
    }

    #[test]
    fn budget_refusal_names_required_work() {
        let f = gf(4);
        let set = DefiningSet::new(Family::D3, &f, 1).unwrap();
        let opts = Enumeration {
            budget: 1000,
            workers: Some(1),
        };
        let err = weight_distribution(&set, &opts).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                task: "codeword enumeration",
                required: 256 * 56,
                budget: 1000
            }
        );
        assert!(Family::D2.required_work(20) > DEFAULT_BUDGET);
        assert_eq!(Family::D1.required_work(3), 64 * 24);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("d2".parse::<Family>().unwrap(), Family::D2);
        assert_eq!("D3".parse::<Family>().unwrap(), Family::D3);
        assert!("d4".parse::<Family>().is_err());
    }
}
