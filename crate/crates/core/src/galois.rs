//! Binary fields GF(2^m) for 1 <= m <= 16.
//!
//! Elements are stored as bit vectors in the polynomial basis `1, t, ..., t^(m-1)`
//! modulo a fixed irreducible polynomial. A [`Field`] is a small `Copy` handle,
//! so every [`Fe`] carries its own field and mixed-field arithmetic is caught in
//! debug builds.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported extension degree over GF(2).
pub const MAX_DEGREE: u32 = 16;

/// Default irreducible moduli for m = 1..=16, bit `i` is the coefficient of `t^i`.
pub const DEFAULT_MODULI: [u32; 16] = [
    0b11,                  // t + 1
    0b111,                 // t^2 + t + 1
    0b1011,                // t^3 + t + 1
    0b1_0011,              // t^4 + t + 1
    0b10_0101,             // t^5 + t^2 + 1
    0b100_0011,            // t^6 + t + 1
    0b1000_0011,           // t^7 + t + 1
    0x11B,                 // t^8 + t^4 + t^3 + t + 1
    0x211,                 // t^9 + t^4 + 1
    0x409,                 // t^10 + t^3 + 1
    0x805,                 // t^11 + t^2 + 1
    0x1053,                // t^12 + t^6 + t^4 + t + 1
    0x201B,                // t^13 + t^4 + t^3 + t + 1
    0x4443,                // t^14 + t^10 + t^6 + t + 1
    0x8003,                // t^15 + t + 1
    0x1_002D,              // t^16 + t^5 + t^3 + t^2 + 1
];

/// Degree of a GF(2)[t] polynomial stored as bits; `None` for zero.
pub(crate) fn gf2_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn gf2_mul(a: u64, b: u64) -> u64 {
    let mut r = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn gf2_rem(mut a: u64, m: u64) -> u64 {
    let dm = gf2_degree(m).expect("nonzero modulus");
    while let Some(da) = gf2_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style irreducibility test over GF(2): `p` of degree m is irreducible
/// iff `gcd(t^(2^i) - t, p) = 1` for every `1 <= i <= m/2`.
pub fn gf2_is_irreducible(p: u32) -> bool {
    let p = p as u64;
    let Some(m) = gf2_degree(p) else { return false };
    if m == 0 {
        return false;
    }
    let mut power = 0b10u64; // t
    for _ in 1..=m / 2 {
        power = gf2_rem(gf2_mul(power, power), p);
        if gf2_gcd(p, power ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// A binary field GF(2^m) given by its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    m: u32,
    modulus: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{:b}]", self.m, self.modulus)
    }
}

impl Field {
    /// Builds GF(2^m), using the built-in default modulus when none is given.
    pub fn new(m: u32, modulus: Option<u32>) -> Result<Field> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::Degree(format!("extension degree {m} outside 1..=16")));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[(m - 1) as usize]);
        if gf2_degree(modulus as u64) != Some(m) {
            return Err(Error::Degree(format!("modulus {modulus:b} does not have degree {m}")));
        }
        if !gf2_is_irreducible(modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Field { m, modulus })
    }

    /// Builds GF(2^m) from a modulus of the right degree without testing it
    /// for irreducibility. Arithmetic in the result is only a field when the
    /// modulus is irreducible; the self-test suites use this to check that
    /// a modulus table really yields fields.
    pub fn with_unchecked_modulus(m: u32, modulus: u32) -> Result<Field> {
        if !(1..=MAX_DEGREE).contains(&m) || gf2_degree(modulus as u64) != Some(m) {
            return Err(Error::Degree(format!("modulus {modulus:b} does not have degree {m}")));
        }
        Ok(Field { m, modulus })
    }

    /// GF(2^m) with the default modulus. Panics if m is out of range.
    pub fn default_for(m: u32) -> Field {
        Field::new(m, None).expect("default moduli are irreducible")
    }

    pub fn gf2() -> Field {
        Field::default_for(1)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    pub fn zero(&self) -> Fe {
        Fe { field: *self, bits: 0 }
    }

    pub fn one(&self) -> Fe {
        Fe { field: *self, bits: 1 }
    }

    /// The class of `t`, a generator of the field over GF(2).
    pub fn gen(&self) -> Fe {
        self.elem(0b10)
    }

    /// Element from its coordinate bits (reduced modulo the modulus).
    pub fn elem(&self, bits: u32) -> Fe {
        let bits = gf2_rem(bits as u64, self.modulus as u64) as u32;
        Fe { field: *self, bits }
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let f = *self;
        (0..(1u32 << self.m)).map(move |b| Fe { field: f, bits: b })
    }

    /// Parses a coordinate bit string, most significant bit first.
    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        if s.is_empty() || s.len() > self.m as usize || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("bad element '{s}' for GF(2^{})", self.m)));
        }
        let bits = u32::from_str_radix(s, 2).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Fe { field: *self, bits })
    }
}

/// An element of a binary field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe {
    field: Field,
    bits: u32,
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field, self.bits).cmp(&(other.field, other.bits))
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

impl Fe {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    /// Coordinates as a bit string of length m, most significant first.
    pub fn to_bit_string(&self) -> String {
        format!("{:0width$b}", self.bits, width = self.field.m as usize)
    }

    pub fn square(self) -> Fe {
        self * self
    }

    pub fn pow(self, mut e: u64) -> Fe {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Applies the Frobenius `a -> a^2` k times (k may be negative).
    pub fn frobenius(self, k: i32) -> Fe {
        let m = self.field.m as i32;
        let k = k.rem_euclid(m);
        let mut a = self;
        for _ in 0..k {
            a = a.square();
        }
        a
    }

    pub fn inv(self) -> Result<Fe> {
        if self.is_zero() {
            return Err(Error::DivZero);
        }
        Ok(self.pow(self.field.size() - 2))
    }

    /// The unique square root, `a^(2^(m-1))`.
    pub fn sqrt(self) -> Fe {
        self.frobenius(-1)
    }

    /// Absolute trace to GF(2), as 0 or 1.
    pub fn abs_trace(self) -> u32 {
        let mut acc = self;
        let mut a = self;
        for _ in 1..self.field.m {
            a = a.square();
            acc += a;
        }
        acc.bits
    }
}

impl Add for Fe {
    type Output = Fe;
    fn add(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.field, rhs.field, "mixed-field addition");
        Fe { field: self.field, bits: self.bits ^ rhs.bits }
    }
}

impl AddAssign for Fe {
    fn add_assign(&mut self, rhs: Fe) {
        *self = *self + rhs;
    }
}

impl Sub for Fe {
    type Output = Fe;
    fn sub(self, rhs: Fe) -> Fe {
        self + rhs
    }
}

impl SubAssign for Fe {
    fn sub_assign(&mut self, rhs: Fe) {
        *self += rhs;
    }
}

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        self
    }
}

impl Mul for Fe {
    type Output = Fe;
    fn mul(self, rhs: Fe) -> Fe {
        debug_assert_eq!(self.field, rhs.field, "mixed-field multiplication");
        let prod = gf2_mul(self.bits as u64, rhs.bits as u64);
        Fe { field: self.field, bits: gf2_rem(prod, self.field.modulus as u64) as u32 }
    }
}

impl MulAssign for Fe {
    fn mul_assign(&mut self, rhs: Fe) {
        *self = *self * rhs;
    }
}

impl Div for Fe {
    type Output = Fe;
    /// Panics on division by zero; use [`Fe::inv`] for a checked inverse.
    fn div(self, rhs: Fe) -> Fe {
        self * rhs.inv().expect("division by zero in GF(2^m)")
    }
}

/// A fixed embedding GF(2^m) -> GF(2^(mk)).
///
/// The generator `t` is sent to the smallest root (in bit order) of the small
/// modulus inside the large field. Restriction back to the subfield is solved
/// by GF(2) elimination on the images of the basis.
#[derive(Debug)]
pub struct Embedding {
    pub from: Field,
    pub to: Field,
    images: Vec<u32>,
    // reduced rows: (pivot bit in target, target bits, source bits)
    pivots: Vec<(u32, u32, u32)>,
}

impl Embedding {
    fn compute(from: Field, to: Field) -> Result<Embedding> {
        if !to.m.is_multiple_of(from.m) {
            return Err(Error::NoEmbedding { from: from.m, to: to.m });
        }
        let root = to
            .elements()
            .find(|&r| {
                let mut acc = to.zero();
                for i in (0..=from.m).rev() {
                    acc *= r;
                    if (from.modulus >> i) & 1 == 1 {
                        acc += to.one();
                    }
                }
                acc.is_zero()
            })
            .ok_or(Error::NoEmbedding { from: from.m, to: to.m })?;
        let mut images = Vec::with_capacity(from.m as usize);
        let mut p = to.one();
        for _ in 0..from.m {
            images.push(p.bits);
            p *= root;
        }
        // Gaussian elimination over GF(2) on (image bits | source unit vector).
        let mut rows: Vec<(u32, u32)> = images.iter().enumerate().map(|(i, &b)| (b, 1u32 << i)).collect();
        let mut pivots = Vec::new();
        for bit in (0..to.m).rev() {
            let mask = 1u32 << bit;
            if let Some(idx) = rows.iter().position(|r| r.0 & mask != 0) {
                let piv = rows.remove(idx);
                for r in rows.iter_mut() {
                    if r.0 & mask != 0 {
                        r.0 ^= piv.0;
                        r.1 ^= piv.1;
                    }
                }
                for p in pivots.iter_mut() {
                    let p: &mut (u32, u32, u32) = p;
                    if p.1 & mask != 0 {
                        p.1 ^= piv.0;
                        p.2 ^= piv.1;
                    }
                }
                pivots.push((mask, piv.0, piv.1));
            }
        }
        Ok(Embedding { from, to, images, pivots })
    }

    pub fn apply(&self, a: Fe) -> Fe {
        debug_assert_eq!(a.field, self.from);
        let mut bits = 0u32;
        for (i, img) in self.images.iter().enumerate() {
            if (a.bits >> i) & 1 == 1 {
                bits ^= img;
            }
        }
        Fe { field: self.to, bits }
    }

    /// Preimage of `b` if it lies in the image of the subfield.
    pub fn restrict(&self, b: Fe) -> Option<Fe> {
        debug_assert_eq!(b.field, self.to);
        let mut rem = b.bits;
        let mut src = 0u32;
        for &(mask, tb, sb) in &self.pivots {
            if rem & mask != 0 {
                rem ^= tb;
                src ^= sb;
            }
        }
        (rem == 0).then_some(Fe { field: self.from, bits: src })
    }
}

type EmbeddingCache = Mutex<HashMap<(Field, Field), Arc<Embedding>>>;

fn embedding_cache() -> &'static EmbeddingCache {
    static CACHE: OnceLock<EmbeddingCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cached embedding `from -> to`.
pub fn embedding(from: Field, to: Field) -> Result<Arc<Embedding>> {
    if let Some(e) = embedding_cache().lock().expect("cache poisoned").get(&(from, to)) {
        return Ok(e.clone());
    }
    let e = Arc::new(Embedding::compute(from, to)?);
    embedding_cache().lock().expect("cache poisoned").insert((from, to), e.clone());
    Ok(e)
}

/// Image of `a` under the fixed embedding into `target`.
pub fn embed(a: Fe, target: Field) -> Result<Fe> {
    if a.field == target {
        return Ok(a);
    }
    Ok(embedding(a.field, target)?.apply(a))
}

/// A field together with a finite extension of it, used to compute at closed
/// points of higher degree and to descend linear conditions back down.
#[derive(Debug, Clone)]
pub struct Extension {
    pub base: Field,
    pub big: Field,
    pub degree: u32,
    emb: Arc<Embedding>,
}

impl Extension {
    pub fn new(base: Field, degree: u32) -> Result<Extension> {
        let m = base.m * degree;
        if m > MAX_DEGREE {
            return Err(Error::TooLarge(format!(
                "degree-{degree} extension of GF(2^{}) exceeds GF(2^16)",
                base.m
            )));
        }
        let big = if degree == 1 { base } else { Field::default_for(m) };
        let emb = embedding(base, big)?;
        Ok(Extension { base, big, degree, emb })
    }

    pub fn embed(&self, a: Fe) -> Fe {
        if self.degree == 1 {
            a
        } else {
            self.emb.apply(a)
        }
    }

    pub fn restrict(&self, b: Fe) -> Option<Fe> {
        if self.degree == 1 {
            Some(b)
        } else {
            self.emb.restrict(b)
        }
    }

    /// Relative trace down to the base field.
    pub fn trace(&self, b: Fe) -> Fe {
        let q = self.base.m as i32;
        let mut acc = b;
        let mut c = b;
        for _ in 1..self.degree {
            c = c.frobenius(q);
            acc += c;
        }
        self.restrict(acc).expect("trace lands in the base field")
    }

    /// Turns one linear condition with coefficients in the big field (unknowns
    /// in the base field) into equivalent base-field conditions via the
    /// nondegenerate trace form.
    pub fn descend_row(&self, row: &[Fe]) -> Vec<Vec<Fe>> {
        if self.degree == 1 {
            return vec![row.to_vec()];
        }
        (0..self.big.m)
            .map(|k| {
                let beta = self.big.elem(1 << k);
                row.iter().map(|&a| self.trace(beta * a)).collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_is_irreducible() {
        for m in 1..=16 {
            assert!(Field::new(m, None).is_ok(), "m = {m}");
        }
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(Field::new(1, None).unwrap().modulus(), 0b11);
        assert!(Field::new(2, Some(0b111)).is_ok());
        assert_eq!(Field::new(2, Some(0b101)), Err(Error::ReducibleModulus));
        assert!(matches!(Field::new(3, Some(0b111)), Err(Error::Degree(_))));
        assert!(matches!(Field::new(17, None), Err(Error::Degree(_))));
    }

    #[test]
    fn sqrt_examples() {
        let f4 = Field::new(2, Some(0b111)).unwrap();
        assert_eq!(f4.gen().sqrt(), f4.elem(0b11));
        assert_eq!(f4.zero().sqrt(), f4.zero());
        assert_eq!(f4.one().sqrt(), f4.one());
        let f8 = Field::new(3, Some(0b1011)).unwrap();
        assert_eq!(f8.gen().sqrt(), f8.elem(0b110));
    }

    #[test]
    fn embedding_examples() {
        let f2 = Field::gf2();
        let f4 = Field::default_for(2);
        let f16 = Field::default_for(4);
        assert_eq!(embed(f2.one(), f4).unwrap(), f4.one());
        let r = embed(f4.gen(), f16).unwrap();
        assert_eq!(r * r + r + f16.one(), f16.zero());
        // smallest root in bit order, found independently
        let smallest = f16.elements().find(|&z| (z * z + z + f16.one()).is_zero()).unwrap();
        assert_eq!(r, smallest);
        assert!(matches!(embed(f4.gen(), Field::default_for(3)), Err(Error::NoEmbedding { .. })));
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f4 = Field::default_for(2);
        let f16 = Field::default_for(4);
        for a in f4.elements() {
            for b in f4.elements() {
                let e = |z| embed(z, f16).unwrap();
                assert_eq!(e(a + b), e(a) + e(b));
                assert_eq!(e(a * b), e(a) * e(b));
                assert_eq!(embedding(f4, f16).unwrap().restrict(e(a)), Some(a));
            }
        }
    }

    #[test]
    fn frobenius_order() {
        for m in 1..=8 {
            let f = Field::default_for(m);
            for a in f.elements() {
                assert_eq!(a.pow(f.size()), a);
                assert_eq!(a.sqrt().square(), a);
            }
        }
    }

    #[test]
    fn descent_via_trace() {
        let f2 = Field::default_for(2);
        let ext = Extension::new(f2, 2).unwrap();
        // x0 * c = 0 over GF(16) with c in GF(4) forces c = 0: rows must have full rank 1
        let rows = ext.descend_row(&[ext.big.gen()]);
        assert!(rows.iter().any(|r| !r[0].is_zero()));
        for a in ext.big.elements() {
            let t = ext.trace(a);
            assert_eq!(t.field(), f2);
        }
    }
}
