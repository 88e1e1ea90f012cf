//! Arithmetic in GF(2^m) over a polynomial basis.
//!
//! Elements are `m`-bit masks: bit `i` is the coefficient of `x^i`. The
//! modulus is an `(m+1)`-bit mask of a degree-`m` polynomial that must be
//! irreducible over GF(2). Multiplication goes through exp/log tables built
//! from a generator found at construction; the carry-less schoolbook product
//! is kept around for construction and as a cross-check.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree 2..=16.
const DEFAULT_MODULI: [u32; 15] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003,
    0x1002b,
];

/// Default modulus for degree `m`, if `m` is in the supported range.
pub fn default_modulus(m: u32) -> Option<u32> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&m) {
        Some(DEFAULT_MODULI[(m - MIN_DEGREE) as usize])
    } else {
        None
    }
}

/// Degree of a GF(2) polynomial mask; `None` for the zero polynomial.
pub fn poly_degree(poly: u32) -> Option<u32> {
    if poly == 0 {
        None
    } else {
        Some(31 - poly.leading_zeros())
    }
}

/// Remainder of `a` modulo `b` over GF(2). `b` must be nonzero.
pub fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility by trial division against every polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let Some(deg) = poly_degree(poly) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let max_divisor_degree = deg / 2;
    (2u32..(1 << (max_divisor_degree + 1))).all(|divisor| poly_rem(poly, divisor) != 0)
}

/// All irreducible polynomials of degree `m`, ascending by mask.
pub fn irreducible_polynomials(m: u32) -> impl Iterator<Item = u32> {
    ((1u32 << m)..(1u32 << (m + 1))).filter(|&p| is_irreducible(p))
}

/// Human-readable form of a GF(2) polynomial, highest degree first,
/// e.g. `x^3+x+1`.
pub fn poly_to_string(poly: u32) -> String {
    if poly == 0 {
        return "0".to_string();
    }
    let terms: Vec<String> = (0..32)
        .rev()
        .filter(|i| poly >> i & 1 == 1)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    terms.join("+")
}

/// Carry-less product of two masks (no reduction).
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = a as u64;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn reduce(mut value: u64, modulus: u32, m: u32) -> u32 {
    let modulus = modulus as u64;
    for i in (m..64).rev() {
        if value >> i & 1 == 1 {
            value ^= modulus << (i - m);
        }
    }
    value as u32
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of GF(2^m) as its polynomial-basis coordinate mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Elem {
    type Output = Elem;

    // Characteristic 2: addition is XOR.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// GF(2^m) for `2 <= m <= 16`. Immutable once built, so it can be shared
/// freely between worker threads.
#[derive(Clone)]
pub struct Field {
    m: u32,
    modulus: u32,
    generator: Elem,
    /// `exp[i] = g^i` for `0 <= i < 2(2^m - 1)`.
    exp: Vec<u32>,
    /// `log[e]` for nonzero `e`; `log[0]` is unused.
    log: Vec<u32>,
    trace_bits: Option<Vec<u64>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("trace_cache", &self.trace_bits.is_some())
            .finish()
    }
}

impl Field {
    /// GF(2^m) with the default modulus for `m`.
    pub fn new(m: u32) -> Result<Field> {
        Self::build(m, None, true)
    }

    /// GF(2^m) with an explicit modulus mask.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Field> {
        Self::build(m, Some(modulus), true)
    }

    /// Full constructor; `trace_cache` controls the precomputed trace table.
    pub fn build(m: u32, modulus: Option<u32>, trace_cache: bool) -> Result<Field> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let modulus = modulus.unwrap_or_else(|| DEFAULT_MODULI[(m - MIN_DEGREE) as usize]);
        if poly_degree(modulus) != Some(m) {
            return Err(Error::WrongDegree {
                mask: modulus,
                poly: poly_to_string(modulus),
                expected: m,
            });
        }
        if !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus {
                mask: modulus,
                poly: poly_to_string(modulus),
            });
        }

        let group_order = (1u64 << m) - 1;
        let factors = prime_factors(group_order);
        let slow_pow = |base: u32, mut e: u64| {
            let mut acc = 1u32;
            let mut base = base;
            while e > 0 {
                if e & 1 == 1 {
                    acc = reduce(clmul(acc, base), modulus, m);
                }
                base = reduce(clmul(base, base), modulus, m);
                e >>= 1;
            }
            acc
        };
        let generator = (2u32..(1 << m))
            .find(|&g| factors.iter().all(|p| slow_pow(g, group_order / p) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let q = group_order as usize;
        let mut exp = vec![0u32; 2 * q];
        let mut log = vec![0u32; q + 1];
        let mut cur = 1u32;
        for i in 0..q {
            exp[i] = cur;
            exp[i + q] = cur;
            log[cur as usize] = i as u32;
            cur = reduce(clmul(cur, generator), modulus, m);
        }

        let mut field = Field {
            m,
            modulus,
            generator: Elem(generator),
            exp,
            log,
            trace_bits: None,
        };
        if trace_cache {
            let size = 1usize << m;
            let mut bits = vec![0u64; size.div_ceil(64)];
            for e in 0..size as u32 {
                if field.trace_by_definition(Elem(e)) == 1 {
                    bits[e as usize / 64] |= 1 << (e % 64);
                }
            }
            field.trace_bits = Some(bits);
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements, `2^m`.
    pub fn order(&self) -> usize {
        1 << self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn modulus_poly(&self) -> String {
        poly_to_string(self.modulus)
    }

    pub fn has_trace_cache(&self) -> bool {
        self.trace_bits.is_some()
    }

    /// A primitive element (generator of the multiplicative group).
    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Checked conversion from a mask.
    pub fn elem(&self, mask: u32) -> Result<Elem> {
        if mask < (1 << self.m) {
            Ok(Elem(mask))
        } else {
            Err(Error::ElementOutOfRange { mask, m: self.m })
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let idx = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[idx as usize])
    }

    /// Schoolbook product reduced modulo the field polynomial.
    pub fn mul_schoolbook(&self, a: Elem, b: Elem) -> Elem {
        Elem(reduce(clmul(a.0, b.0), self.modulus, self.m))
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^e`, with `a^0 = 1` for every `a` including zero.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let q = (1u64 << self.m) - 1;
        let idx = (self.log[a.0 as usize] as u64 * (e % q)) % q;
        Elem(self.exp[idx as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let q = (1u32 << self.m) - 1;
        Some(Elem(self.exp[((q - self.log[a.0 as usize]) % q) as usize]))
    }

    /// Absolute trace `Tr(a) = a + a^2 + ... + a^(2^(m-1))`, as a bit.
    #[inline]
    pub fn trace(&self, a: Elem) -> u8 {
        match &self.trace_bits {
            Some(bits) => (bits[a.0 as usize / 64] >> (a.0 % 64) & 1) as u8,
            None => self.trace_by_definition(a),
        }
    }

    fn trace_by_definition(&self, a: Elem) -> u8 {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.m {
            t = self.mul_schoolbook(t, t);
            acc = acc + t;
        }
        debug_assert!(acc.0 <= 1, "trace must land in GF(2)");
        acc.0 as u8
    }

    /// `(-1)^Tr(a)`.
    #[inline]
    pub fn character(&self, a: Elem) -> i64 {
        1 - 2 * self.trace(a) as i64
    }

    /// All `2^m` elements in ascending mask order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..1u32 << self.m).map(Elem)
    }

    /// The `2^m - 1` nonzero elements in ascending mask order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..1u32 << self.m).map(Elem)
    }
}

/// Per-degree modulus overrides, read from a key-value file such as
///
/// ```toml
/// 5 = 0x2f
/// 7 = "0x89"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModulusOverrides(BTreeMap<u32, u32>);

impl ModulusOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::Config(format!("modulus file: {e}")))?;
        let mut out = BTreeMap::new();
        for (key, value) in table {
            let m: u32 = key
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("modulus file: key `{key}` is not a degree")))?;
            let mask = match value {
                toml::Value::Integer(i) => u32::try_from(i).ok(),
                toml::Value::String(s) => parse_mask(&s),
                _ => None,
            }
            .ok_or_else(|| Error::Config(format!("modulus file: bad mask for m={m}")))?;
            out.insert(m, mask);
        }
        Ok(ModulusOverrides(out))
    }

    pub fn single(m: u32, mask: u32) -> Self {
        ModulusOverrides(BTreeMap::from([(m, mask)]))
    }

    pub fn get(&self, m: u32) -> Option<u32> {
        self.0.get(&m).copied()
    }

    pub fn field(&self, m: u32) -> Result<Field> {
        Field::build(m, self.get(m), true)
    }
}

/// Parses `0x..`, `0b..` or decimal masks.
pub fn parse_mask(s: &str) -> Option<u32> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u32::from_str_radix(hex, 16).ok()
    } else if let Some(bin) = s.strip_prefix("0b").or_else(|| s.strip_prefix("0B")) {
        u32::from_str_radix(bin, 2).ok()
    } else {
        s.parse().ok()
    }
}
