//! The seven additive-character double sums behind the weight formulas,
//! evaluated two ways: by brute-force enumeration of `(x, y)` and by the
//! closed-form case tables. Enumeration is the reference; the case tables
//! are what gets tested against it.
//!
//! Every sum runs over `x` in GF(2^m)* and `y` in GF(2^m) (S1, S3, S5, S6,
//! S7) or GF(2^m)* (S2, S4). With `u = x^d y` and the common term
//! `Tr(a u + b x)`, the extra exponent terms are
//!
//! | sum | extra terms                    | sign |
//! |-----|--------------------------------|------|
//! | S1  | none                           | +    |
//! | S2  | none                           | +    |
//! | S3  | `Tr(x^(d+1) y + x^d y + x)`    | +    |
//! | S4  | `Tr(x^(d+2) y + x^(d+1) y)`    | +    |
//! | S5  | `Tr(x^(d+1) y)`                | +    |
//! | S6  | `Tr(x^d y)`                    | -    |
//! | S7  | `Tr(x^(d+1) y) + Tr(x^d y)`    | -    |
//!
//! The sign column is the `(-1)^(-1)` factor carried by the `- 1` inside
//! the exponents of S6 and S7.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SumId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
}

impl SumId {
    pub const ALL: [SumId; 7] = [
        SumId::S1,
        SumId::S2,
        SumId::S3,
        SumId::S4,
        SumId::S5,
        SumId::S6,
        SumId::S7,
    ];

    /// Whether `y` ranges over the nonzero elements only.
    pub fn nonzero_y(self) -> bool {
        matches!(self, SumId::S2 | SumId::S4)
    }

    fn sign(self) -> i64 {
        match self {
            SumId::S6 | SumId::S7 => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for SumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize + 1;
        write!(f, "S{i}")
    }
}

impl FromStr for SumId {
    type Err = Error;

    fn from_str(s: &str) -> Result<SumId> {
        let idx = s
            .strip_prefix(['s', 'S'])
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|n| (1..=7).contains(n))
            .ok_or_else(|| Error::Config(format!("unknown sum id `{s}` (expected s1..s7)")))?;
        Ok(SumId::ALL[idx - 1])
    }
}

/// The set of values a closed form admits. A singleton everywhere except
/// the two-valued S4 branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction(BTreeSet<i64>);

impl Prediction {
    pub fn one(v: i64) -> Self {
        Prediction(BTreeSet::from([v]))
    }

    pub fn either(v: i64, w: i64) -> Self {
        Prediction(BTreeSet::from([v, w]))
    }

    pub fn contains(&self, v: i64) -> bool {
        self.0.contains(&v)
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }
}

/// Values joined by `|`, descending, e.g. `17|-15`.
impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(i64::to_string).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Nonzero elements of the form `r^2 + r`.
pub fn upsilon1(f: &Field) -> BTreeSet<Elem> {
    f.elements()
        .map(|r| f.square(r) + r)
        .filter(|a| !a.is_zero())
        .collect()
}

/// Roots of `x^2 + x + a` for nonzero `a`, ascending. Either empty or two
/// roots summing to 1.
pub fn quad_roots(f: &Field, a: Elem) -> Result<Vec<Elem>> {
    if a.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(f.elements()
        .filter(|&x| f.square(x) + x + a == Elem::ZERO)
        .collect())
}

/// Exact value of the sum by enumerating its whole `(x, y)` range.
pub fn sum_direct(id: SumId, f: &Field, d: u64, a: Elem, b: Elem) -> i64 {
    let mut total = 0i64;
    for x in f.nonzero_elements() {
        let xd = f.pow(x, d);
        let xd1 = f.mul(xd, x);
        let xd2 = f.mul(xd1, x);
        let bx = f.trace(f.mul(b, x));
        let ys = f.elements().skip(id.nonzero_y() as usize);
        for y in ys {
            let u = f.mul(xd, y);
            let mut e = f.trace(f.mul(a, u)) ^ bx;
            e ^= match id {
                SumId::S1 | SumId::S2 => 0,
                SumId::S3 => f.trace(f.mul(xd1, y) + u + x),
                SumId::S4 => f.trace(f.mul(xd2, y) + f.mul(xd1, y)),
                SumId::S5 => f.trace(f.mul(xd1, y)),
                SumId::S6 => f.trace(u),
                SumId::S7 => f.trace(f.mul(xd1, y)) ^ f.trace(u),
            };
            total += 1 - 2 * e as i64;
        }
    }
    id.sign() * total
}

/// Closed-form case tables, with the set needed by S4 precomputed.
pub struct Predictor<'f> {
    field: &'f Field,
    upsilon: BTreeSet<Elem>,
}

impl<'f> Predictor<'f> {
    pub fn new(field: &'f Field) -> Self {
        Predictor {
            field,
            upsilon: upsilon1(field),
        }
    }

    pub fn predict(&self, id: SumId, a: Elem, b: Elem) -> Result<Prediction> {
        let f = self.field;
        let q = 1i64 << f.degree();
        let sign = |bit: u8| if bit == 0 { q } else { -q };
        let silent = || Error::LemmaSilent {
            sum: id,
            a: a.mask(),
            b: b.mask(),
        };
        let p = match id {
            SumId::S1 => match (a.is_zero(), b.is_zero()) {
                (true, false) => -q,
                (false, _) => 0,
                (true, true) => return Err(silent()),
            },
            SumId::S2 => match (a.is_zero(), b.is_zero()) {
                (true, false) | (false, true) => -q + 1,
                (false, false) => 1,
                (true, true) => return Err(silent()),
            },
            SumId::S3 => {
                if a == Elem::ONE {
                    0
                } else if a.is_zero() {
                    if b.is_zero() {
                        return Err(silent());
                    }
                    sign(f.trace(b + Elem::ONE))
                } else {
                    sign(f.trace(f.mul(a + Elem::ONE, b + Elem::ONE)))
                }
            }
            SumId::S4 => {
                let in_upsilon = self.upsilon.contains(&a);
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => return Err(silent()),
                    (true, false) => sign(f.trace(b)) + 1,
                    (false, true) if in_upsilon => q + 1,
                    (false, true) => -q + 1,
                    (false, false) if !in_upsilon => 1,
                    (false, false) if f.trace(b) == 1 => 1,
                    (false, false) => return Ok(Prediction::either(2 * q + 1, -2 * q + 1)),
                }
            }
            SumId::S5 => {
                if a.is_zero() {
                    if b.is_zero() {
                        return Err(silent());
                    }
                    0
                } else {
                    sign(f.trace(f.mul(a, b)))
                }
            }
            SumId::S6 => {
                if a != Elem::ONE {
                    0
                } else if b.is_zero() {
                    -q * q + q
                } else {
                    q
                }
            }
            SumId::S7 => {
                if a == Elem::ONE {
                    0
                } else {
                    -sign(f.trace(f.mul(a + Elem::ONE, b)))
                }
            }
        };
        Ok(Prediction::one(p))
    }
}

/// Closed-form prediction for one sum. The value never depends on `d`.
pub fn sum_predict(id: SumId, f: &Field, a: Elem, b: Elem) -> Result<Prediction> {
    Predictor::new(f).predict(id, a, b)
}

/// One checked `(sum, d, a, b)` point. `predicted` is `None` where no case
/// of the closed form applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub sum_id: SumId,
    pub m: u32,
    pub d: u64,
    pub a: Elem,
    pub b: Elem,
    pub direct: i64,
    pub predicted: Option<Prediction>,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.predicted
            .as_ref()
            .is_some_and(|p| p.contains(self.direct))
    }
}

/// Checks every `(a, b)` label for each requested sum and exponent.
/// Rows come back ordered by `(sum, d, a, b)` whatever the thread count.
pub fn sweep(f: &Field, ds: &[u64], ids: &[SumId]) -> Vec<SweepRow> {
    let predictor = Predictor::new(f);
    let m = f.degree();
    let labels: Vec<(Elem, Elem)> = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .collect();
    let mut rows = Vec::with_capacity(ids.len() * ds.len() * labels.len());
    for &id in ids {
        for &d in ds {
            let chunk: Vec<SweepRow> = labels
                .par_iter()
                .map(|&(a, b)| SweepRow {
                    sum_id: id,
                    m,
                    d,
                    a,
                    b,
                    direct: sum_direct(id, f, d, a, b),
                    predicted: predictor.predict(id, a, b).ok(),
                })
                .collect();
            rows.extend(chunk);
        }
    }
    rows
}
