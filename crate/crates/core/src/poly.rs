//! Dense univariate polynomials and rational functions over GF(2^m).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::atomic::{self, AtomicU64};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::galois::{Fe, Field};

/// Seed used for equal-degree splitting unless the caller supplies one.
pub const DEFAULT_FACTOR_SEED: u64 = 0x6732_6672_6f62;

static FACTOR_SEED: AtomicU64 = AtomicU64::new(DEFAULT_FACTOR_SEED);

/// Sets the seed used by [`Poly::factor`] for equal-degree splitting.
/// Factorizations are sorted, so the seed never changes a result, only the
/// path taken to it.
pub fn set_factor_seed(seed: u64) {
    FACTOR_SEED.store(seed, atomic::Ordering::Relaxed);
}

/// A polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { format!("[{a}]") };
            match i {
                0 => write!(f, "{}", if a.is_one() { "1".into() } else { coef })?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().map(|a| a.bits()).cmp(other.c.iter().rev().map(|a| a.bits())))
    }
}

impl Poly {
    pub fn new(field: Field, mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        debug_assert!(c.iter().all(|a| a.field() == field));
        Poly { field, c }
    }

    pub fn from_bits(field: Field, bits: &[u32]) -> Poly {
        Poly::new(field, bits.iter().map(|&b| field.elem(b)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, c: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(a: Fe) -> Poly {
        Poly::new(a.field(), vec![a])
    }

    /// The variable `x`.
    pub fn x(field: Field) -> Poly {
        Poly::monomial(field.one(), 1)
    }

    pub fn monomial(a: Fe, k: usize) -> Poly {
        let mut c = vec![a.field().zero(); k + 1];
        c[k] = a;
        Poly::new(a.field(), c)
    }

    /// `x - a`.
    pub fn linear(a: Fe) -> Poly {
        Poly::new(a.field(), vec![a, a.field().one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, handy in bounds arithmetic.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Fe {
        self.c.last().copied().unwrap_or(self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, a: Fe) -> Poly {
        Poly::new(self.field, self.c.iter().map(|&b| b * a).collect())
    }

    pub fn map_coeffs(&self, field: Field, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(field, self.c.iter().map(|&a| f(a)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend_from_slice(&self.c);
        Poly { field: self.field, c }
    }

    pub fn eval(&self, a: Fe) -> Fe {
        self.c.iter().rev().fold(self.field.zero(), |acc, &b| acc * a + b)
    }

    /// Evaluates at a point of an extension field, pushing coefficients through `emb`.
    pub fn eval_with(&self, a: Fe, emb: impl Fn(Fe) -> Fe) -> Fe {
        self.c.iter().rev().fold(a.field().zero(), |acc, &b| acc * a + emb(b))
    }

    /// Formal derivative; in characteristic 2 the even-degree terms die.
    pub fn derivative(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| if i % 2 == 1 { a } else { self.field.zero() })
            .collect();
        Poly::new(self.field, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivZero);
        }
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let inv = d.lead().inv()?;
        let mut r = self.c.clone();
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = r[i + dd] * inv;
            q[i] = coef;
            if !coef.is_zero() {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] -= coef * b;
                }
            }
        }
        r.truncate(dd);
        Ok((Poly::new(self.field, q), Poly::new(self.field, r)))
    }

    /// Remainder; panics when `d` is zero.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Quotient of an exact division; panics when `d` is zero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division {self:?} / {d:?}");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv().expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Square of every coefficient and exponent: `p(x)^2`.
    pub fn square(&self) -> Poly {
        let mut c = vec![self.field.zero(); (2 * self.c.len()).saturating_sub(1)];
        for (i, &a) in self.c.iter().enumerate() {
            c[2 * i] = a.square();
        }
        Poly::new(self.field, c)
    }

    /// Splits `p = e(x)^2 + x * o(x)^2`.
    pub fn even_odd(&self) -> (Poly, Poly) {
        let even = self.c.iter().step_by(2).map(|a| a.sqrt()).collect();
        let odd = self.c.iter().skip(1).step_by(2).map(|a| a.sqrt()).collect();
        (Poly::new(self.field, even), Poly::new(self.field, odd))
    }

    /// Square root of a perfect square (odd part must vanish).
    pub fn sqrt(&self) -> Option<Poly> {
        let (e, o) = self.even_odd();
        o.is_zero().then_some(e)
    }

    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.size();
        let x = Poly::x(self.field);
        let mut h = x.clone();
        for i in 1..=n / 2 {
            h = h.powmod(q, &f);
            if !(&h - &x).gcd(&f).is_one() {
                return false;
            }
            let _ = i;
        }
        true
    }

    /// Monic irreducible factorization with multiplicities, sorted ascending.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        self.factor_seeded(FACTOR_SEED.load(atomic::Ordering::Relaxed))
    }

    pub fn factor_seeded(&self, seed: u64) -> Vec<(Poly, u32)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in square_free(&self.monic()) {
            for (d, part) in distinct_degree(&sqf) {
                for fac in equal_degree(&part, d, &mut rng) {
                    out.push((fac, mult));
                }
            }
        }
        out.sort();
        // merge identical factors that arrived through different square-free parts
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (p, k) in out {
            match merged.last_mut() {
                Some((q, m)) if *q == p => *m += k,
                _ => merged.push((p, k)),
            }
        }
        merged
    }

    /// Roots in the coefficient field, ascending in bit order.
    pub fn roots(&self) -> Vec<Fe> {
        self.factor()
            .into_iter()
            .filter(|(p, _)| p.degree() == Some(1))
            .map(|(p, _)| p.coeff(0))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// All monic polynomials of exact degree `d`, in counting order.
    pub fn all_monic(field: Field, d: usize) -> impl Iterator<Item = Poly> {
        let q = field.size();
        let total = q.pow(d as u32);
        (0..total).map(move |mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(field.elem((idx % q) as u32));
                idx /= q;
            }
            c.push(field.one());
            Poly::new(field, c)
        })
    }

    /// All polynomials of degree `< d` (including zero), in counting order.
    pub fn all_below(field: Field, d: usize) -> impl Iterator<Item = Poly> {
        let q = field.size();
        let total = q.pow(d as u32);
        (0..total).map(move |mut idx| {
            let mut c = Vec::with_capacity(d);
            for _ in 0..d {
                c.push(field.elem((idx % q) as u32));
                idx /= q;
            }
            Poly::new(field, c)
        })
    }
}

fn square_free(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        let g = f.sqrt().expect("zero derivative means a square in char 2");
        return square_free(&g).into_iter().map(|(p, k)| (p, 2 * k)).collect();
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let s = c.sqrt().expect("leftover cofactor is a square");
        out.extend(square_free(&s).into_iter().map(|(p, k)| (p, 2 * k)));
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let q = f.field.size();
    let x = Poly::x(f.field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((d, g));
        }
    }
    if let Some(n) = rest.degree() {
        if n > 0 {
            out.push((n, rest));
        }
    }
    out
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field;
    let bits = field.degree() as usize * d;
    loop {
        let r = Poly::new(field, (0..n).map(|_| field.elem(rng.gen::<u32>())).collect());
        if r.is_constant() {
            continue;
        }
        // trace map r + r^2 + ... + r^(2^(bits-1)) mod f
        let mut t = r.rem(f);
        let mut acc = t.clone();
        for _ in 1..bits {
            t = (&t * &t).rem(f);
            acc = &acc + &t;
        }
        let g = acc.gcd(f);
        if !g.is_one() && g.degree() != f.degree() {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.div_exact(&g), d, rng));
            return out;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::new(self.field, c)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(self.field, c)
    }
}

/// A reduced fraction `num/den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> RatFunc {
        let den = Poly::one(p.field);
        RatFunc { num: p, den }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.field));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g), den.div_exact(&g));
        let inv = d.lead().inv()?;
        n = n.scale(inv);
        d = d.scale(inv);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn zero(field: Field) -> RatFunc {
        RatFunc { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: Field) -> RatFunc {
        RatFunc { num: Poly::one(field), den: Poly::one(field) }
    }

    pub fn constant(a: Fe) -> RatFunc {
        Poly::constant(a).into()
    }

    pub fn field(&self) -> Field {
        self.num.field
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, a: Fe) -> RatFunc {
        if a.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn square(&self) -> RatFunc {
        RatFunc { num: self.num.square(), den: self.den.square() }
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    /// Splits `r = r_e^2 + x * r_o^2` by clearing to the square denominator `den^2`.
    pub fn even_odd(&self) -> (RatFunc, RatFunc) {
        let (e, o) = (&self.num * &self.den).even_odd();
        let den = self.den.clone();
        (
            RatFunc::new(e, den.clone()).expect("nonzero den"),
            RatFunc::new(o, den).expect("nonzero den"),
        )
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + rhs
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::gf2()
    }

    fn p2(bits: &[u32]) -> Poly {
        Poly::from_bits(f2(), bits)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p2(&[1, 0, 0, 1, 0, 1]).derivative(), p2(&[0, 0, 1, 0, 1]));
        assert_eq!(p2(&[0, 1, 1]).gcd(&p2(&[0, 1])), p2(&[0, 1]));
        let f4 = Field::default_for(2);
        let x5 = Poly::monomial(f4.one(), 5);
        assert_eq!(x5.eval(f4.gen()), f4.elem(0b11));
    }

    #[test]
    fn divrem_by_zero() {
        assert_eq!(p2(&[1, 1]).divrem(&Poly::zero(f2())), Err(Error::DivZero));
        assert!(RatFunc::new(p2(&[1]), Poly::zero(f2())).is_err());
    }

    #[test]
    fn xgcd_bezout() {
        let a = p2(&[1, 0, 1, 1, 0, 1]);
        let b = p2(&[1, 1, 0, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
        assert!(g.is_monic());
    }

    #[test]
    fn factor_examples() {
        assert_eq!(p2(&[0, 1, 1]).factor(), vec![(p2(&[0, 1]), 1), (p2(&[1, 1]), 1)]);
        assert_eq!(p2(&[1, 1, 1]).factor(), vec![(p2(&[1, 1, 1]), 1)]);
        // x^4 + x = x (x + 1) (x^2 + x + 1), checked by expansion below
        let f = p2(&[0, 1, 0, 0, 1]);
        let fac = f.factor();
        assert_eq!(fac, vec![(p2(&[0, 1]), 1), (p2(&[1, 1]), 1), (p2(&[1, 1, 1]), 1)]);
        let prod = fac.iter().fold(Poly::one(f2()), |acc, (p, k)| &acc * &p.pow(*k as u64));
        assert_eq!(prod, f);
    }

    #[test]
    fn factor_with_multiplicities() {
        // (x+1)^3 (x^2+x+1)^2 x^4
        let f = &(&p2(&[1, 1]).pow(3) * &p2(&[1, 1, 1]).pow(2)) * &p2(&[0, 1]).pow(4);
        assert_eq!(
            f.factor(),
            vec![(p2(&[0, 1]), 4), (p2(&[1, 1]), 3), (p2(&[1, 1, 1]), 2)]
        );
    }

    #[test]
    fn rational_even_odd_examples() {
        let r: RatFunc = p2(&[1, 0, 1, 1]).into();
        let (e, o) = r.even_odd();
        assert_eq!(e, p2(&[1, 1]).into());
        assert_eq!(o, p2(&[0, 1]).into());
        let (e, o) = RatFunc::from(p2(&[0, 1])).even_odd();
        assert!(e.is_zero());
        assert_eq!(o, RatFunc::one(f2()));
        let inv_x = RatFunc::new(p2(&[1]), p2(&[0, 1])).unwrap();
        let (e, o) = inv_x.even_odd();
        assert!(e.is_zero());
        assert_eq!(o, inv_x);
    }

    #[test]
    fn irreducibility() {
        assert!(p2(&[1, 1, 0, 1]).is_irreducible());
        assert!(!p2(&[1, 0, 1]).is_irreducible());
        let count = Poly::all_monic(f2(), 4).filter(|p| p.is_irreducible()).count();
        assert_eq!(count, 3);
    }
}
