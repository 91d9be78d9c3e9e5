//! Extension classes of line bundles as Serre-duality functionals, the
//! Frobenius map on `H^1`, the bundle `B_1` and the class of `V_1`, and line
//! subbundle searches for rank-2 bundles.
//!
//! `H^1(O(D))` is realized as the dual of `H^0(Omega(-D))`, the differentials
//! `w dx` with `div(w dx) >= D`. An extension `0 -> L1 -> V -> L2 -> 0` has its
//! class in `H^1(L1 - L2)`; with the representative `D_M` of `M = L1 - L2` the
//! class is the vector of values of the functional on a basis of
//! `diff_space(D_M)`. Frobenius pull-back sends it to the class `e'` on
//! `diff_space(2 D_M)` with `e'(w) = e(C(w))^2`, `C` the Cartier operator.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::curve::{Curve, Divisor, FFElem, Place};
use crate::error::{Error, Result};
use crate::galois::{Fe, Field};
use crate::jacobian::DivClass;
use crate::linalg::Mat;
use crate::rrspace::SectionSpace;

/// A line bundle: its class together with the divisor used to realize its
/// sections, so that maps between line bundles are literal functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LineBundle {
    pub class: DivClass,
    pub rep: Divisor,
}

impl LineBundle {
    pub fn degree(&self) -> i64 {
        self.class.d
    }
}

/// The space `H^1(M)` together with its dual basis and cached data.
#[derive(Debug)]
pub struct ExtSpace {
    pub m: DivClass,
    pub rep: Divisor,
    pub dual: SectionSpace,
    restrictions: Mutex<HashMap<Divisor, Arc<Mat>>>,
    frob: OnceLock<Arc<FrobMap>>,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.dual.dim()
    }
}

/// Frobenius pull-back `H^1(M) -> H^1(M^2)`: `e'_j = (sum_k cartier[j][k] e_k)^2`.
#[derive(Debug)]
pub struct FrobMap {
    pub target: Arc<ExtSpace>,
    /// Row `j`: coordinates of `C(w'_j)` in the source dual basis.
    pub cartier: Mat,
}

impl FrobMap {
    pub fn apply(&self, e: &[Fe]) -> Vec<Fe> {
        self.cartier.mul_vec(e).into_iter().map(|a| a.square()).collect()
    }

    /// The classes killed by pull-back.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        self.cartier.kernel_basis()
    }
}

/// An element of `H^1(M) = Ext^1(L2, L1)`.
#[derive(Clone, Debug)]
pub struct ExtClass {
    pub space: Arc<ExtSpace>,
    pub coords: Vec<Fe>,
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|a| a.is_zero())
    }

    /// Value of the functional on a differential of the dual space.
    pub fn eval(&self, w: &FFElem) -> Option<Fe> {
        let field = self.space.dual.field();
        if w.is_zero() {
            return Some(field.zero());
        }
        let c = self.space.dual.coords(w)?;
        Some(c.iter().zip(&self.coords).fold(field.zero(), |acc, (&a, &b)| acc + a * b))
    }
}

/// A rank-2 bundle, either split or an extension `0 -> sub -> V -> quot -> 0`.
#[derive(Clone, Debug)]
pub enum BundleRep {
    Split(LineBundle, LineBundle),
    Ext { sub: LineBundle, quot: LineBundle, e: ExtClass },
}

impl BundleRep {
    pub fn degree(&self) -> i64 {
        match self {
            BundleRep::Split(a, b) => a.degree() + b.degree(),
            BundleRep::Ext { sub, quot, .. } => sub.degree() + quot.degree(),
        }
    }

    /// The two graded pieces (summands, or sub and quotient).
    pub fn pieces(&self) -> (&LineBundle, &LineBundle) {
        match self {
            BundleRep::Split(a, b) => (a, b),
            BundleRep::Ext { sub, quot, .. } => (sub, quot),
        }
    }
}

/// How a line subbundle `N` maps into a rank-2 bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubMap {
    /// The sub-line of an extension, or the first summand of a split bundle.
    First,
    /// `N = B(-E) -> A + B` given by `(alpha, 1)`.
    Graph { alpha: FFElem },
    /// `N = L2(-E)` lifting through an extension.
    Lift,
}

/// A line subbundle found by a destabilization search.
#[derive(Clone, Debug)]
pub struct SubLine {
    pub class: DivClass,
    pub rep: Divisor,
    /// The zero divisor of the composite `N -> (second piece)`.
    pub e: Divisor,
    pub map: SubMap,
}

impl SubLine {
    pub fn degree(&self) -> i64 {
        self.class.d
    }
}

/// All nonzero vectors of `GF(q)^n` with first nonzero coordinate 1.
pub fn projective_points(field: Field, n: usize) -> Vec<Vec<Fe>> {
    let q = field.size();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        for mut idx in 0..q.pow(free as u32) {
            let mut v = vec![field.zero(); n];
            v[lead] = field.one();
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = field.elem((idx % q) as u32);
                idx /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize(v: &[Fe]) -> Vec<Fe> {
    match v.iter().find(|a| !a.is_zero()) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|&a| a * inv).collect()
        }
    }
}

/// Largest number of vectors a brute-force enumeration is allowed to visit.
const ENUMERATION_LIMIT: u64 = 1 << 12;

impl Curve {
    pub fn line_bundle(&self, class: &DivClass) -> LineBundle {
        LineBundle { class: class.clone(), rep: self.class_rep(class) }
    }

    pub fn lb_tensor(&self, a: &LineBundle, b: &LineBundle) -> LineBundle {
        LineBundle { class: self.jac_add(&a.class, &b.class), rep: a.rep.add(&b.rep) }
    }

    pub fn lb_dual(&self, a: &LineBundle) -> LineBundle {
        LineBundle { class: self.jac_neg(&a.class), rep: a.rep.scale(-1) }
    }

    /// `F^* L = L^2`, realized on the doubled divisor.
    pub fn lb_frobenius(&self, a: &LineBundle) -> LineBundle {
        LineBundle { class: self.jac_mul(&a.class, 2), rep: a.rep.scale(2) }
    }

    /// `H^1` of the line bundle with class `m` and representative `rep`.
    pub fn ext_space_on(&self, m: &DivClass, rep: &Divisor) -> Result<Arc<ExtSpace>> {
        Ok(Arc::new(ExtSpace {
            m: m.clone(),
            rep: rep.clone(),
            dual: self.diff_space(rep)?,
            restrictions: Mutex::default(),
            frob: OnceLock::new(),
        }))
    }

    /// `H^1(M)` on the standard representative of `M`.
    pub fn ext_space(&self, m: &DivClass) -> Result<Arc<ExtSpace>> {
        self.ext_space_on(m, &self.class_rep(m))
    }

    /// `Ext^1(L2, L1) = H^1(L1 - L2)`.
    pub fn ext_space_for(&self, l1: &DivClass, l2: &DivClass) -> Result<Arc<ExtSpace>> {
        self.ext_space(&self.jac_sub(l1, l2))
    }

    /// The extension of `L2 = L1 - M` by `L1` with the given class; the
    /// quotient's representative is chosen so that `D_1 - D_2 = D_M`.
    pub fn ext_bundle(&self, l1: &DivClass, space: &Arc<ExtSpace>, coords: Vec<Fe>) -> BundleRep {
        assert_eq!(coords.len(), space.dim(), "extension class length");
        let sub = self.line_bundle(l1);
        let quot = LineBundle { class: self.jac_sub(l1, &space.m), rep: sub.rep.sub(&space.rep) };
        BundleRep::Ext { sub, quot, e: ExtClass { space: space.clone(), coords } }
    }

    pub fn split_bundle(&self, a: &DivClass, b: &DivClass) -> BundleRep {
        BundleRep::Split(self.line_bundle(a), self.line_bundle(b))
    }

    /// The Frobenius map on `H^1(M)` (cached on the space).
    pub fn frobenius_map(&self, space: &Arc<ExtSpace>) -> Result<Arc<FrobMap>> {
        if let Some(f) = space.frob.get() {
            return Ok(f.clone());
        }
        let target = self.ext_space_on(&self.jac_mul(&space.m, 2), &space.rep.scale(2))?;
        let cartier = self.cartier_matrix(&target.dual, &space.dual)?;
        let map = Arc::new(FrobMap { target, cartier });
        let _ = space.frob.set(map);
        Ok(space.frob.get().expect("just set").clone())
    }

    /// `F^* e`.
    pub fn frob_on_ext(&self, e: &ExtClass) -> Result<ExtClass> {
        let map = self.frobenius_map(&e.space)?;
        Ok(ExtClass { space: map.target.clone(), coords: map.apply(&e.coords) })
    }

    /// Rows: coordinates in `space.dual` of a basis of `diff_space(D_M + E)`.
    fn restriction(&self, space: &ExtSpace, e: &Divisor) -> Result<Arc<Mat>> {
        if let Some(m) = space.restrictions.lock().expect("restriction cache").get(e) {
            return Ok(m.clone());
        }
        let small = self.diff_space(&space.rep.add(e))?;
        let rows = small
            .basis()
            .iter()
            .map(|w| {
                space.dual.coords(w).ok_or_else(|| Error::AssertionFailed {
                    check: "differential inclusion".into(),
                    detail: format!("{w:?} not in diff_space({:?})", space.rep),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Arc::new(Mat::from_rows(space.dual.field(), space.dim(), &rows));
        space.restrictions.lock().expect("restriction cache").insert(e.clone(), m.clone());
        Ok(m)
    }

    /// Whether the sub `L2(-E) -> L2` lifts to the extension: the functional
    /// vanishes on `diff_space(D_M + E)`.
    pub fn lifts(&self, e: &ExtClass, div: &Divisor) -> Result<bool> {
        let r = self.restriction(&e.space, div)?;
        Ok(r.mul_vec(&e.coords).iter().all(|a| a.is_zero()))
    }

    /// The cup product `e ∪ s` of `e ∈ H^1(O(D_M))` with `s ∈ L(D_s)`, as a
    /// functional on `diff_space(D_M + D_s)`: `(e ∪ s)(w) = e(s w)`.
    pub fn cup(&self, e: &ExtClass, s: &FFElem, s_rep: &Divisor) -> Result<Vec<Fe>> {
        let target = self.diff_space(&e.space.rep.add(s_rep))?;
        target
            .basis()
            .iter()
            .map(|w| {
                e.eval(&self.mul(s, w)).ok_or_else(|| Error::AssertionFailed {
                    check: "cup product".into(),
                    detail: format!("s*w left the dual space for s = {s:?}"),
                })
            })
            .collect()
    }

    /// Effective divisors of degree `k` supported on places of degree `<= k`.
    pub fn effective_divisors(&self, k: usize) -> Result<Vec<Divisor>> {
        let places = self.places_cached(k)?;
        let mut out = Vec::new();
        fn rec(places: &[Place], start: usize, left: usize, acc: Divisor, out: &mut Vec<Divisor>) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for i in start..places.len() {
                let d = places[i].degree();
                if d <= left {
                    let mut next = acc.clone();
                    next.add_term(places[i].clone(), 1);
                    rec(places, i, left - d, next, out);
                }
            }
        }
        rec(&places[..], 0, k, Divisor::zero(), &mut out);
        Ok(out)
    }

    /// All line subbundles of degree at least `dmin`.
    pub fn max_destab_sub(&self, v: &BundleRep, dmin: i64) -> Result<Vec<SubLine>> {
        let (first, second) = v.pieces();
        let mut out = Vec::new();
        if first.degree() >= dmin {
            out.push(SubLine {
                class: first.class.clone(),
                rep: first.rep.clone(),
                e: Divisor::zero(),
                map: SubMap::First,
            });
        }
        let kmax = second.degree() - dmin;
        for k in 0..=kmax.max(-1) {
            for ediv in self.effective_divisors(k as usize)? {
                let class = self.jac_sub(&second.class, &self.jac_class_of(&ediv));
                let rep = second.rep.sub(&ediv);
                match v {
                    BundleRep::Ext { e, .. } => {
                        if self.lifts(e, &ediv)? {
                            out.push(SubLine { class, rep, e: ediv, map: SubMap::Lift });
                        }
                    }
                    BundleRep::Split(a, _) => {
                        let twist = a.rep.sub(&rep);
                        let space = self.rr_basis(&twist)?;
                        if k == 0 {
                            out.push(SubLine {
                                class: class.clone(),
                                rep: rep.clone(),
                                e: ediv.clone(),
                                map: SubMap::Graph { alpha: FFElem::zero(self.field()) },
                            });
                        }
                        for alpha in self.nonzero_elements(&space)? {
                            if self.saturated(&alpha, &twist, &ediv)? {
                                out.push(SubLine {
                                    class: class.clone(),
                                    rep: rep.clone(),
                                    e: ediv.clone(),
                                    map: SubMap::Graph { alpha },
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `alpha in L(twist)` has no zero on the support of `E` (as a section).
    fn saturated(&self, alpha: &FFElem, twist: &Divisor, ediv: &Divisor) -> Result<bool> {
        for p in ediv.support() {
            if self.valuation(alpha, p)? + twist.coeff(p) > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every nonzero element of a section space (small spaces only).
    pub fn nonzero_elements(&self, space: &SectionSpace) -> Result<Vec<FFElem>> {
        let field = self.field();
        let n = space.dim();
        let total = field.size().checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("{total} sections to enumerate")));
        }
        let q = field.size();
        Ok((1..total)
            .map(|mut idx| {
                let c: Vec<Fe> = (0..n)
                    .map(|_| {
                        let a = field.elem((idx % q) as u32);
                        idx /= q;
                        a
                    })
                    .collect();
                space.combine(&c)
            })
            .collect())
    }

    /// Frobenius pull-back of a rank-2 bundle.
    pub fn bundle_pullback(&self, v: &BundleRep) -> Result<BundleRep> {
        Ok(match v {
            BundleRep::Split(a, b) => BundleRep::Split(self.lb_frobenius(a), self.lb_frobenius(b)),
            BundleRep::Ext { sub, quot, e } => BundleRep::Ext {
                sub: self.lb_frobenius(sub),
                quot: self.lb_frobenius(quot),
                e: self.frob_on_ext(e)?,
            },
        })
    }

    /// `B_1`: the unique theta characteristic `theta` for which Frobenius on
    /// `H^1(theta^-1)` has a kernel.
    pub fn find_b1(&self) -> Result<DivClass> {
        let (_, thetas) = self.theta_characteristics(1)?;
        let mut found = Vec::new();
        for t in thetas {
            let space = self.ext_space(&self.jac_neg(&t))?;
            if !self.frobenius_map(&space)?.kernel().is_empty() {
                found.push(t);
            }
        }
        match found.len() {
            0 => Err(Error::B1NotFound),
            1 => Ok(found.pop().expect("one element")),
            n => Err(Error::B1NotUnique(n)),
        }
    }

    /// The class `e_1` of `V_1` in `Ext^1(L_theta, O) = H^1(L_theta^-1)`:
    /// a normalized generator of the Frobenius kernel.
    pub fn v1_class(&self, b1: &DivClass) -> Result<ExtClass> {
        let space = self.ext_space(&self.jac_neg(b1))?;
        let kernel = self.frobenius_map(&space)?.kernel();
        if kernel.len() != 1 {
            return Err(Error::AssertionFailed {
                check: "v1 uniqueness".into(),
                detail: format!("Frobenius kernel on H^1(B1^-1) has dimension {}", kernel.len()),
            });
        }
        Ok(ExtClass { space, coords: normalize(&kernel[0]) })
    }

    /// `V_1` itself: the extension `0 -> O -> V_1 -> L_theta -> 0` with class `e_1`.
    pub fn v1_bundle(&self, b1: &DivClass) -> Result<BundleRep> {
        let e1 = self.v1_class(b1)?;
        Ok(self.ext_bundle(&DivClass::neutral(self.field(), 0), &e1.space, e1.coords))
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

    #[test]
    fn projective_counts() {
        let f = Field::default_for(2);
        assert_eq!(projective_points(f, 2).len(), 5);
        assert_eq!(projective_points(f, 3).len(), 21);
    }

    #[test]
    fn v1_pulls_back_split() {
        let c = c1();
        let b1 = c.find_b1().unwrap();
        let v1 = c.v1_bundle(&b1).unwrap();
        assert!(c.max_destab_sub(&v1, 1).unwrap().is_empty());
        let pulled = c.bundle_pullback(&v1).unwrap();
        let BundleRep::Ext { e, .. } = &pulled else { panic!() };
        assert!(e.is_zero());
        let subs = c.max_destab_sub(&pulled, 2).unwrap();
        assert!(subs.iter().any(|s| s.map == SubMap::Lift && s.e.is_zero()));
    }
}
