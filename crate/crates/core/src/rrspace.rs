//! Riemann–Roch spaces `L(D)` and spaces of differentials `{w : div(w) >= D}`
//! as explicit bases of function-field elements.
//!
//! A section space is computed by shifting: choose `g`, a product of powers
//! of the `x`-polynomials below the finite support of `D`, such that
//! `g L(D)` sits inside `L(m inf)` for a small `m`; `L(m inf)` has the
//! explicit monomial basis `x^i (2i <= m)`, `x^j y (2j + 5 <= m)`, and the
//! finite vanishing conditions are linear conditions on truncated local
//! expansions.

use std::collections::BTreeMap;

use crate::curve::{Curve, Divisor, FFElem, Place};
use crate::error::{Error, Result};
use crate::galois::{Fe, Field};
use crate::jacobian::DivClass;
use crate::linalg::{echelon, Mat};
use crate::poly::{Poly, RatFunc};
use crate::series::Laurent;

/// Extra precision used on top of the number of vanishing conditions.
const PRECISION_MARGIN: usize = 4;

/// A basis of `L(D)` (or, for differential spaces, of the `w` with `w dx`
/// in `H^0(Omega(-M))`).
#[derive(Clone, Debug)]
pub struct SectionSpace {
    /// The divisor `D` with `div(z) + D >= 0` for every section `z`.
    pub twist: Divisor,
    /// Whether the elements are coefficients of differentials `w dx`.
    pub differential: bool,
    field: Field,
    denom: Poly,
    cage: i64,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
    basis: Vec<FFElem>,
}

fn monomial_counts(m: i64) -> (usize, usize) {
    let nx = if m >= 0 { (m / 2 + 1) as usize } else { 0 };
    let ny = if m >= 5 { ((m - 5) / 2 + 1) as usize } else { 0 };
    (nx, ny)
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FFElem] {
        &self.basis
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `sum c_i b_i`.
    pub fn combine(&self, coeffs: &[Fe]) -> FFElem {
        assert_eq!(coeffs.len(), self.dim(), "coordinate vector length");
        self.basis
            .iter()
            .zip(coeffs)
            .fold(FFElem::zero(self.field), |acc, (b, &c)| acc.add(&b.scale(c)))
    }

    /// Coordinates of `z` in this basis, or `None` if `z` is not in the space.
    pub fn coords(&self, z: &FFElem) -> Option<Vec<Fe>> {
        let g = RatFunc::from(self.denom.clone());
        let w = z.mul_rat(&g);
        if !w.is_integral_form() {
            return None;
        }
        let (nx, ny) = monomial_counts(self.cage);
        let (a, b) = (w.a.num(), w.b.num());
        if a.deg() >= nx as i64 || b.deg() >= ny as i64 {
            return None;
        }
        let mut vec: Vec<Fe> = (0..nx).map(|i| a.coeff(i)).collect();
        vec.extend((0..ny).map(|j| b.coeff(j)));
        let coords: Vec<Fe> = self.pivots.iter().map(|&p| vec[p]).collect();
        let mut recon = vec![self.field.zero(); nx + ny];
        for (row, &c) in self.rows.iter().zip(&coords) {
            for (r, &e) in recon.iter_mut().zip(row) {
                *r += c * e;
            }
        }
        (recon == vec).then_some(coords)
    }

    pub fn contains(&self, z: &FFElem) -> bool {
        z.is_zero() || self.coords(z).is_some()
    }
}

impl Curve {
    /// A basis of `L(D) = { z : div(z) + D >= 0 }`.
    pub fn rr_basis(&self, d: &Divisor) -> Result<SectionSpace> {
        let field = self.field();
        // Group the finite support by the x-polynomial below it.
        let mut by_u: BTreeMap<Poly, Vec<Place>> = BTreeMap::new();
        for p in d.support() {
            if let Some(u) = p.u() {
                if p.degree() > 2 {
                    return Err(Error::UnsupportedSupport(format!("place {p} of degree {}", p.degree())));
                }
                if !by_u.contains_key(u) {
                    by_u.insert(u.clone(), self.places_over(u)?);
                }
            }
        }
        // Exponents of the shifting function g and the induced conditions.
        let mut g = Poly::one(field);
        let mut conditions: Vec<(Place, usize)> = Vec::new();
        for (u, places) in &by_u {
            let c = places
                .iter()
                .map(|p| {
                    let (n, e) = (d.coeff(p), p.ramification());
                    if n > 0 {
                        (n + e - 1) / e
                    } else {
                        0
                    }
                })
                .max()
                .unwrap_or(0);
            g = &g * &u.pow(c as u64);
            for p in places {
                let k = c * p.ramification() - d.coeff(p);
                if k > 0 {
                    conditions.push((p.clone(), k as usize));
                }
            }
        }
        let cage = d.infinity_coeff() + 2 * g.deg();
        let (nx, ny) = monomial_counts(cage);
        let n = nx + ny;
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (p, k) in &conditions {
            let frame = self.frame(p)?;
            let e = frame.expansions(k + PRECISION_MARGIN);
            let (x, y) = (&e.0, &e.1);
            let big = frame.ext.big;
            let mut monos: Vec<Laurent> = Vec::with_capacity(n);
            let mut xp = Laurent::constant(big.one(), k + PRECISION_MARGIN);
            let mut xps = Vec::with_capacity(nx.max(ny));
            for _ in 0..nx.max(ny) {
                xps.push(xp.clone());
                xp = xp.mul(x);
            }
            monos.extend(xps[..nx].iter().cloned());
            monos.extend(xps[..ny].iter().map(|s| s.mul(y)));
            for r in 0..*k as i64 {
                let row: Vec<Fe> = monos
                    .iter()
                    .map(|s| s.coeff(r).expect("expansion precision covers the conditions"))
                    .collect();
                rows.extend(frame.ext.descend_row(&row));
            }
        }
        let kernel = if rows.is_empty() {
            Mat::identity(field, n).to_rows()
        } else {
            Mat::from_rows(field, n, &rows).kernel_basis()
        };
        let rows = echelon(field, n, &kernel);
        let pivots: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().position(|a| !a.is_zero()).expect("nonzero row"))
            .collect();
        let ginv = RatFunc::new(Poly::one(field), g.clone())?;
        let basis = rows
            .iter()
            .map(|r| FFElem::from_polys(Poly::new(field, r[..nx].to_vec()), Poly::new(field, r[nx..].to_vec())).mul_rat(&ginv))
            .collect();
        Ok(SectionSpace { twist: d.clone(), differential: false, field, denom: g, cage, rows, pivots, basis })
    }

    /// The differentials `w dx` with `div(w dx) >= m`, as the space of `w`.
    pub fn diff_space(&self, m: &Divisor) -> Result<SectionSpace> {
        let mut s = self.rr_basis(&self.canonical_divisor().sub(m))?;
        s.differential = true;
        Ok(s)
    }

    /// `h^0` of a line-bundle class, through its representative divisor.
    pub fn h0(&self, cls: &DivClass) -> Result<usize> {
        Ok(self.rr_basis(&self.class_rep(cls))?.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 0, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn small_spaces() {
        let c = c2();
        assert_eq!(c.rr_basis(&Divisor::zero()).unwrap().dim(), 1);
        assert_eq!(c.rr_basis(&Divisor::infinity(2)).unwrap().dim(), 2);
        assert_eq!(c.rr_basis(&Divisor::infinity(5)).unwrap().dim(), 4);
        assert_eq!(c.diff_space(&Divisor::zero()).unwrap().dim(), 2);
        assert_eq!(c.rr_basis(&Divisor::infinity(-1)).unwrap().dim(), 0);
    }

    #[test]
    fn riemann_roch_on_class_reps() {
        let c = c2();
        let k = c.canonical_divisor();
        for d in -1..=4 {
            for cls in c.jac_enumerate(d).unwrap() {
                let dv = c.class_rep(&cls);
                let l = c.rr_basis(&dv).unwrap().dim() as i64;
                let lk = c.rr_basis(&k.sub(&dv)).unwrap().dim() as i64;
                assert_eq!(l - lk, d - 1, "{cls:?}");
            }
        }
    }

    #[test]
    fn sections_have_bounded_poles() {
        let c = c2();
        for cls in c.jac_enumerate(3).unwrap() {
            let dv = c.class_rep(&cls);
            let s = c.rr_basis(&dv).unwrap();
            for z in s.basis() {
                let div = c.divisor_of(z).unwrap();
                assert!(div.add(&dv).is_effective(), "{z:?} in L({dv:?})");
                assert!(s.coords(z).is_some());
            }
        }
    }
}
