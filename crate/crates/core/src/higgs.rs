//! Higgs pairs `(V, phi: V -> V ⊗ L)` on rank-2 bundles, invariant-subbundle
//! searches, Frobenius pull-back of pairs, and the explicit fields `phi_0`
//! (on `T ⊕ T L_theta`) and `phi_1` (on `T ⊗ V_1`).
//!
//! Every component of a field is a map between line bundles and is stored as
//! a function: a map `X -> Y` is an element of `L(D_Y - D_X)` for the
//! representatives `D_X`, `D_Y`, so composition is multiplication.

use crate::curve::{Curve, Divisor, FFElem};
use crate::error::{Error, Result};
use crate::frobext::{BundleRep, LineBundle, SubLine, SubMap};
use crate::jacobian::DivClass;

/// The components of a Higgs field.
#[allow(clippy::large_enum_variant)] // short-lived, never stored in bulk
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HiggsField {
    Zero,
    /// On `A ⊕ B`: `phi(a, b) = (p11 a + p12 b, p21 a + p22 b)`, with `pij`
    /// a map from summand `j` to summand `i` twisted by `L`.
    Matrix([[FFElem; 2]; 2]),
    /// On `0 -> L1 -> V -> L2 -> 0`: the composite
    /// `V -> L2 -> L1 ⊗ L -> V ⊗ L` given by `low ∈ L(D_1 + D_L - D_2)`.
    Nilpotent { low: FFElem },
}

/// A rank-2 Higgs bundle with associated line bundle `assoc`.
#[derive(Clone, Debug)]
pub struct HiggsPair {
    pub bundle: BundleRep,
    pub assoc: LineBundle,
    pub field: HiggsField,
}

/// `Hom(A, V ⊗ tw)` through the filtration of `V`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    /// `h^0` of `Hom(A, first piece ⊗ tw)`.
    pub sub_dim: usize,
    /// For each basis section `s` of `Hom(A, second piece ⊗ tw)`, whether it
    /// lifts to `V ⊗ tw` (vanishing cup-product obstruction).
    pub quotient_sections: Vec<(FFElem, bool)>,
}

/// Smallest degree of a line subbundle that violates stability of a rank-2
/// bundle of degree `d` (`2 deg N >= d`).
pub fn stability_threshold(d: i64) -> i64 {
    d.div_euclid(2) + d.rem_euclid(2)
}

/// Smallest degree of a line subbundle that violates semistability (`2 deg N > d`).
pub fn semistability_threshold(d: i64) -> i64 {
    d.div_euclid(2) + 1
}

impl Curve {
    /// The dimension of `Hom(A, V ⊗ tw)`, with the lifting verdict of each
    /// basis section of `Hom(A, second piece ⊗ tw)`.
    pub fn hom_space(&self, a: &LineBundle, v: &BundleRep, tw: &LineBundle) -> Result<HomSpace> {
        let (first, second) = v.pieces();
        let sub_dim = self.rr_basis(&first.rep.add(&tw.rep).sub(&a.rep))?.dim();
        let s_rep = second.rep.add(&tw.rep).sub(&a.rep);
        let sections = self.rr_basis(&s_rep)?;
        match v {
            BundleRep::Split(..) => Ok(HomSpace {
                dim: sub_dim + sections.dim(),
                sub_dim,
                quotient_sections: sections.basis().iter().map(|s| (s.clone(), true)).collect(),
            }),
            BundleRep::Ext { e, .. } => {
                let cups = sections
                    .basis()
                    .iter()
                    .map(|s| self.cup(e, s, &s_rep))
                    .collect::<Result<Vec<_>>>()?;
                let cols = cups.first().map_or(0, |c| c.len());
                let rank = crate::linalg::Mat::from_rows(self.field(), cols, &cups).rank();
                let quotient_sections = sections
                    .basis()
                    .iter()
                    .zip(&cups)
                    .map(|(s, c)| (s.clone(), c.iter().all(|x| x.is_zero())))
                    .collect();
                Ok(HomSpace { dim: sub_dim + sections.dim() - rank, sub_dim, quotient_sections })
            }
        }
    }

    /// The field as a matrix on a split bundle.
    fn as_matrix(&self, field: &HiggsField) -> [[FFElem; 2]; 2] {
        let z = FFElem::zero(self.field());
        match field {
            HiggsField::Zero => [[z.clone(), z.clone()], [z.clone(), z]],
            HiggsField::Matrix(m) => m.clone(),
            HiggsField::Nilpotent { low } => [[z.clone(), low.clone()], [z.clone(), z]],
        }
    }

    /// Whether a line subbundle is `phi`-invariant, via the composite
    /// `N -> V -> V ⊗ L -> (V/N) ⊗ L`.
    pub fn is_invariant(&self, p: &HiggsPair, n: &SubLine) -> Result<bool> {
        match (&p.bundle, &p.field) {
            (_, HiggsField::Zero) => Ok(true),
            (BundleRep::Split(..), field) => {
                let m = self.as_matrix(field);
                let (alpha, beta) = split_vector(self, n);
                // (p11 a + p12 b) b - (p21 a + p22 b) a
                let top = self.mul(&m[0][0], &alpha).add(&self.mul(&m[0][1], &beta));
                let bot = self.mul(&m[1][0], &alpha).add(&self.mul(&m[1][1], &beta));
                Ok(self.mul(&top, &beta).add(&self.mul(&bot, &alpha)).is_zero())
            }
            (BundleRep::Ext { .. }, HiggsField::Nilpotent { low }) => Ok(match n.map {
                SubMap::First => true,
                _ => low.is_zero(),
            }),
            (BundleRep::Ext { .. }, HiggsField::Matrix(_)) => Err(Error::AssertionFailed {
                check: "higgs representation".into(),
                detail: "matrix fields are only defined on split bundles".into(),
            }),
        }
    }

    /// Invariance on a split bundle checked directly: `phi(alpha, beta)` is a
    /// multiple of `(alpha, beta)`.
    pub fn is_invariant_direct(&self, p: &HiggsPair, n: &SubLine) -> Result<bool> {
        let m = self.as_matrix(&p.field);
        let (alpha, beta) = split_vector(self, n);
        let top = self.mul(&m[0][0], &alpha).add(&self.mul(&m[0][1], &beta));
        let bot = self.mul(&m[1][0], &alpha).add(&self.mul(&m[1][1], &beta));
        if alpha.is_zero() {
            return Ok(top.is_zero());
        }
        let lambda = self.div(&top, &alpha)?;
        Ok(self.mul(&lambda, &beta) == bot)
    }

    /// The `phi`-invariant line subbundles of degree at least `dmin`.
    pub fn higgs_destab_search(&self, p: &HiggsPair, dmin: i64) -> Result<Vec<SubLine>> {
        let mut out = Vec::new();
        for n in self.max_destab_sub(&p.bundle, dmin)? {
            if self.is_invariant(p, &n)? {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// `phi ∘ phi = 0` as a map `V -> V ⊗ L^2`.
    pub fn higgs_is_nilpotent(&self, p: &HiggsPair) -> bool {
        match &p.field {
            HiggsField::Zero | HiggsField::Nilpotent { .. } => true,
            HiggsField::Matrix(m) => (0..2).all(|i| {
                (0..2).all(|j| self.mul(&m[i][0], &m[0][j]).add(&self.mul(&m[i][1], &m[1][j])).is_zero())
            }),
        }
    }

    /// Checks that each component lies in its section space.
    pub fn higgs_is_well_typed(&self, p: &HiggsPair) -> Result<bool> {
        let (x, y) = p.bundle.pieces();
        let l = &p.assoc.rep;
        let in_space = |z: &FFElem, d: Divisor| -> Result<bool> {
            Ok(z.is_zero() || self.rr_basis(&d)?.contains(z))
        };
        match &p.field {
            HiggsField::Zero => Ok(true),
            HiggsField::Nilpotent { low } => in_space(low, x.rep.add(l).sub(&y.rep)),
            HiggsField::Matrix(m) => {
                let reps = [&x.rep, &y.rep];
                for i in 0..2 {
                    for j in 0..2 {
                        if !in_space(&m[i][j], reps[i].add(l).sub(reps[j]))? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// Frobenius pull-back of a Higgs pair: classes and representatives
    /// double, sections square, and an extension whose class dies is
    /// rewritten on its split model.
    pub fn frob_pullback_higgs(&self, p: &HiggsPair) -> Result<HiggsPair> {
        let bundle = self.bundle_pullback(&p.bundle)?;
        let assoc = self.lb_frobenius(&p.assoc);
        let sq = |z: &FFElem| self.square(z);
        let field = match &p.field {
            HiggsField::Zero => HiggsField::Zero,
            HiggsField::Matrix(m) => HiggsField::Matrix([[sq(&m[0][0]), sq(&m[0][1])], [sq(&m[1][0]), sq(&m[1][1])]]),
            HiggsField::Nilpotent { low } => HiggsField::Nilpotent { low: sq(low) },
        };
        let BundleRep::Ext { sub, quot, e } = &bundle else {
            return Ok(HiggsPair { bundle, assoc, field });
        };
        if !e.is_zero() {
            return Ok(HiggsPair { bundle, assoc, field });
        }
        // The pulled-back extension splits: the quotient lifts with E = 0.
        let splitting = self
            .max_destab_sub(&bundle, quot.degree())?
            .into_iter()
            .any(|n| n.map == SubMap::Lift && n.e.is_zero());
        if !splitting {
            return Err(Error::AssertionFailed {
                check: "pull-back splitting".into(),
                detail: "zero extension class without a lifted quotient".into(),
            });
        }
        let split = BundleRep::Split(sub.clone(), quot.clone());
        let field = match field {
            HiggsField::Nilpotent { low } => {
                let z = FFElem::zero(self.field());
                HiggsField::Matrix([[z.clone(), low], [z.clone(), z]])
            }
            other => other,
        };
        Ok(HiggsPair { bundle: split, assoc, field })
    }

    /// `(W, phi_0)`: `W = T ⊕ T L_theta` with the identity
    /// `T L_theta -> T ⊗ L_theta` as its only nonzero entry.
    pub fn make_phi0(&self, t: &DivClass, theta: &DivClass) -> Result<HiggsPair> {
        self.require_two_torsion(t)?;
        let a = self.line_bundle(t);
        let b = self.line_bundle(&self.jac_add(t, theta));
        let assoc = self.line_bundle(theta);
        let id = self.unit_section(&a.rep.add(&assoc.rep).sub(&b.rep))?;
        let z = FFElem::zero(self.field());
        Ok(HiggsPair {
            bundle: BundleRep::Split(a, b),
            assoc,
            field: HiggsField::Matrix([[z.clone(), id], [z.clone(), z]]),
        })
    }

    /// `(T ⊗ V_1, phi_1)` with `phi_1` the composite
    /// `T ⊗ V_1 -> T L_theta -> (T) ⊗ L_theta -> (T ⊗ V_1) ⊗ L_theta`.
    pub fn make_phi1(&self, t: &DivClass, theta: &DivClass) -> Result<HiggsPair> {
        self.require_two_torsion(t)?;
        let e1 = self.v1_class(theta)?;
        let bundle = self.ext_bundle(t, &e1.space, e1.coords);
        let assoc = self.line_bundle(theta);
        let (sub, quot) = bundle.pieces();
        let low = self.unit_section(&sub.rep.add(&assoc.rep).sub(&quot.rep))?;
        Ok(HiggsPair { bundle, assoc, field: HiggsField::Nilpotent { low } })
    }

    fn require_two_torsion(&self, t: &DivClass) -> Result<()> {
        let zero = DivClass::neutral(self.field(), 0);
        if t.d != 0 || self.jac_add(t, t) != zero {
            return Err(Error::NotTwoTorsion);
        }
        Ok(())
    }

    /// The generator of `L(D)` for a divisor `D` of the trivial class: the
    /// isomorphism `O -> O(D)` (the constant map 1 up to the representatives).
    fn unit_section(&self, d: &Divisor) -> Result<FFElem> {
        let s = self.rr_basis(d)?;
        if s.dim() != 1 {
            return Err(Error::AssertionFailed {
                check: "trivial class".into(),
                detail: format!("L({d:?}) has dimension {}", s.dim()),
            });
        }
        Ok(s.basis()[0].clone())
    }
}

/// The pair `(alpha, beta)` of maps `N -> A`, `N -> B` for a subbundle of a
/// split bundle.
fn split_vector(c: &Curve, n: &SubLine) -> (FFElem, FFElem) {
    let f = c.field();
    match &n.map {
        SubMap::First => (FFElem::one(f), FFElem::zero(f)),
        SubMap::Graph { alpha } => (alpha.clone(), FFElem::one(f)),
        SubMap::Lift => (FFElem::zero(f), FFElem::one(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use crate::poly::Poly;

    fn c1() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::one(f), Poly::from_bits(f, &[0, 0, 0, 0, 0, 1])).unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(stability_threshold(1), 1);
        assert_eq!(semistability_threshold(1), 1);
        assert_eq!(stability_threshold(2), 1);
        assert_eq!(semistability_threshold(2), 2);
        assert_eq!(stability_threshold(0), 0);
        assert_eq!(semistability_threshold(0), 1);
    }

    #[test]
    fn phi0_and_phi1_on_c1() {
        let c = c1();
        let theta = c.find_b1().unwrap();
        let t = DivClass::neutral(c.field(), 0);
        let w = c.make_phi0(&t, &theta).unwrap();
        assert!(c.higgs_is_well_typed(&w).unwrap());
        assert!(c.higgs_destab_search(&w, 1).unwrap().is_empty());
        assert!(!c.max_destab_sub(&w.bundle, 1).unwrap().is_empty());
        let fw = c.frob_pullback_higgs(&w).unwrap();
        assert_eq!(fw.assoc.class, c.canonical_class());
        assert!(c.higgs_destab_search(&fw, 1).unwrap().is_empty());
        let v = c.make_phi1(&t, &theta).unwrap();
        assert!(c.higgs_destab_search(&v, 1).unwrap().is_empty());
        let fv = c.frob_pullback_higgs(&v).unwrap();
        assert!(matches!(fv.bundle, BundleRep::Split(..)));
        assert!(c.higgs_destab_search(&fv, 1).unwrap().is_empty());
        assert!(c.higgs_is_nilpotent(&fv));
    }

    #[test]
    fn hom_into_v1() {
        let c = c1();
        let theta = c.find_b1().unwrap();
        let v1 = c.v1_bundle(&theta).unwrap();
        let o = c.line_bundle(&DivClass::neutral(c.field(), 0));
        assert_eq!(c.hom_space(&o, &v1, &o).unwrap().dim, 1);
        let (_, quot) = v1.pieces();
        let h = c.hom_space(quot, &v1, &o).unwrap();
        assert!(h.quotient_sections.iter().any(|(_, lifts)| !lifts));
    }
}
