//! Divisor classes in Mumford representation, Cantor's algorithm for
//! characteristic 2, enumeration of rational classes, 2-torsion and theta
//! characteristics.

use std::fmt;

use crate::curve::{Curve, Divisor, Place};
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::poly::Poly;

/// The class of `D0 - deg(u) inf + d inf`, where `D0` is the affine divisor
/// cut out by the reduced Mumford pair `(u, v)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivClass {
    pub u: Poly,
    pub v: Poly,
    pub d: i64,
}

impl fmt::Debug for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}; {}]", self.u, self.v, self.d)
    }
}

impl DivClass {
    /// The class of `d * inf`.
    pub fn neutral(field: Field, d: i64) -> DivClass {
        DivClass { u: Poly::one(field), v: Poly::zero(field), d }
    }

    /// The same Mumford part with the degree shifted by `k` (i.e. `+ k inf`).
    pub fn shift(&self, k: i64) -> DivClass {
        DivClass { d: self.d + k, ..self.clone() }
    }

    pub fn has_trivial_part(&self) -> bool {
        self.u.is_one()
    }
}

impl Curve {
    fn reduce_pair(&self, mut u: Poly, mut v: Poly) -> (Poly, Poly) {
        v = v.rem(&u);
        while u.deg() > 2 {
            let num = &(self.f() + &(&v * self.h())) + &v.square();
            let u2 = num.div_exact(&u);
            let v2 = (self.h() + &v).rem(&u2);
            u = u2;
            v = v2;
        }
        let u = u.monic();
        let v = v.rem(&u);
        (u, v)
    }

    /// Cantor composition followed by reduction (degree-0 parts only).
    fn cantor(&self, a: &DivClass, b: &DivClass) -> (Poly, Poly) {
        let (d0, e1, e2) = a.u.xgcd(&b.u);
        let w = &(&a.v + &b.v) + self.h();
        let (d, c1, c2) = d0.xgcd(&w);
        let (s1, s2, s3) = (&c1 * &e1, &c1 * &e2, c2);
        let u = (&a.u * &b.u).div_exact(&d.square());
        let t = &(&(&(&s1 * &a.u) * &b.v) + &(&(&s2 * &b.u) * &a.v)) + &(&s3 * &(&(&a.v * &b.v) + self.f()));
        let v = t.div_exact(&d).rem(&u);
        self.reduce_pair(u, v)
    }

    pub fn jac_add(&self, a: &DivClass, b: &DivClass) -> DivClass {
        let (u, v) = self.cantor(a, b);
        DivClass { u, v, d: a.d + b.d }
    }

    pub fn jac_neg(&self, a: &DivClass) -> DivClass {
        DivClass { u: a.u.clone(), v: (&a.v + self.h()).rem(&a.u), d: -a.d }
    }

    pub fn jac_sub(&self, a: &DivClass, b: &DivClass) -> DivClass {
        self.jac_add(a, &self.jac_neg(b))
    }

    pub fn jac_mul(&self, a: &DivClass, k: i64) -> DivClass {
        let mut base = if k < 0 { self.jac_neg(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = DivClass::neutral(self.field(), 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.jac_add(&acc, &base);
            }
            base = self.jac_add(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Checks the Mumford invariants `u` monic, `deg u <= 2`, `deg v < deg u`,
    /// `u | v^2 + h v + f`.
    pub fn is_valid_class(&self, a: &DivClass) -> bool {
        a.u.is_monic()
            && a.u.deg() <= 2
            && a.v.deg() < a.u.deg()
            && a.u.divides(&(&(&a.v.square() + &(&a.v * self.h())) + self.f()))
    }

    /// The class of a single place.
    pub fn place_class(&self, p: &Place) -> DivClass {
        let field = self.field();
        match p {
            Place::Infinity => DivClass::neutral(field, 1),
            // An inert place is cut out by u alone: div(u) = P - deg(P) inf.
            Place::Finite { v: None, .. } => DivClass::neutral(field, p.degree() as i64),
            Place::Finite { u, v: Some(v), .. } => {
                let (u2, v2) = self.reduce_pair(u.clone(), v.clone());
                DivClass { u: u2, v: v2, d: p.degree() as i64 }
            }
        }
    }

    /// The class of a divisor, accumulated place by place.
    pub fn jac_class_of(&self, d: &Divisor) -> DivClass {
        d.iter().fold(DivClass::neutral(self.field(), 0), |acc, (p, &n)| {
            self.jac_add(&acc, &self.jac_mul(&self.place_class(p), n))
        })
    }

    /// The canonical class, that of `2 inf`.
    pub fn canonical_class(&self) -> DivClass {
        DivClass::neutral(self.field(), 2)
    }

    /// The representative divisor `D0 + (d - deg u) inf` of a class.
    pub fn class_rep(&self, a: &DivClass) -> Divisor {
        let mut out = Divisor::infinity(a.d - a.u.deg());
        for (p, e) in a.u.factor() {
            let place = Place::Finite { v: Some(a.v.rem(&p)), ramified: p.divides(self.h()), u: p };
            out.add_term(place, e as i64);
        }
        out
    }

    /// All rational classes of degree `d` (one per reduced Mumford pair).
    pub fn jac_enumerate(&self, d: i64) -> Result<Vec<DivClass>> {
        let field = self.field();
        if field.size() > 16 {
            return Err(Error::TooLarge(format!("class enumeration over GF({}) is out of range", field.size())));
        }
        let mut out = vec![DivClass::neutral(field, d)];
        for du in 1..=2usize {
            for u in Poly::all_monic(field, du) {
                for v in Poly::all_below(field, du) {
                    let c = DivClass { u: u.clone(), v, d };
                    if self.is_valid_class(&c) {
                        out.push(c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The degree-0 classes `T` with `2T = 0` on the base change of degree `ext`.
    /// Returns the base-changed curve alongside.
    pub fn jac_two_torsion(&self, ext: u32) -> Result<(Curve, Vec<DivClass>)> {
        let c = self.base_change(ext)?;
        let zero = DivClass::neutral(c.field(), 0);
        let t = c
            .jac_enumerate(0)?
            .into_iter()
            .filter(|a| c.jac_add(a, a) == zero)
            .collect();
        Ok((c, t))
    }

    /// Theta characteristics `T + [inf]` over the degree-`ext` extension.
    pub fn theta_characteristics(&self, ext: u32) -> Result<(Curve, Vec<DivClass>)> {
        let (c, t) = self.jac_two_torsion(ext)?;
        Ok((c, t.into_iter().map(|a| a.shift(1)).collect()))
    }

    /// Number of points over the degree-`k` extension, by brute force.
    pub fn count_points(&self, k: u32) -> Result<u64> {
        let c = self.base_change(k)?;
        let field = c.field();
        let mut n = 1;
        for x in field.elements() {
            let (hx, fx) = (c.h().eval(x), c.f().eval(x));
            n += field.elements().filter(|&y| y.square() + hx * y + fx == field.zero()).count() as u64;
        }
        Ok(n)
    }

    /// `|J(GF(q))|` predicted by the zeta function from `N1`, `N2`.
    pub fn jacobian_order_from_zeta(&self) -> Result<u64> {
        let (n1, n2) = (self.count_points(1)?, self.count_points(2)?);
        Ok((n1 * n1 + n2) / 2 - self.field().size())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c1() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::one(f), Poly::from_bits(f, &[0, 0, 0, 0, 0, 1])).unwrap()
    }

    fn c2() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 0, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn group_order_matches_zeta() {
        for c in [c1(), c2()] {
            let n = c.jac_enumerate(0).unwrap().len() as u64;
            assert_eq!(n, c.jacobian_order_from_zeta().unwrap(), "{c:?}");
        }
    }

    #[test]
    fn inverse_and_neutral() {
        let c = c2();
        let zero = DivClass::neutral(c.field(), 0);
        for a in c.jac_enumerate(0).unwrap() {
            assert_eq!(c.jac_add(&a, &zero), a);
            assert_eq!(c.jac_add(&a, &c.jac_neg(&a)), zero);
        }
    }

    #[test]
    fn canonical_divisor_class() {
        for c in [c1(), c2()] {
            assert_eq!(c.jac_class_of(&c.canonical_divisor()), c.canonical_class());
        }
    }

    #[test]
    fn c1_has_trivial_two_torsion() {
        let (_, t) = c1().jac_two_torsion(2).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn rep_roundtrip() {
        let c = c2();
        for a in c.jac_enumerate(1).unwrap() {
            assert_eq!(c.jac_class_of(&c.class_rep(&a)), a);
        }
    }
}
