//! The genus-2 model `y^2 + h(x) y = f(x)` with `deg f = 5` (monic) and
//! `deg h <= 2`: validation, closed points, local expansions, valuations,
//! function-field elements, differentials and divisors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::galois::{Extension, Fe, Field};
use crate::linalg::Mat;
use crate::poly::{Poly, RatFunc};
use crate::series::Laurent;

/// Starting precision for local expansions; doubled whenever a computation
/// comes out zero to the known precision.
pub const START_PRECISION: usize = 8;
const MAX_PRECISION: usize = 1 << 12;

/// A closed point of the curve.
///
/// Finite places lie over a monic irreducible `u(x)`. When the residue field
/// is that of `u`, the place is a Mumford pair `(u, v)` with
/// `u | v^2 + h v + f`; `ramified` is set iff `u | h`. When the fibre over `u`
/// is a single point of twice the degree (`v^2 + hv + f` has no solution mod
/// `u`), `v` is `None`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Place {
    Infinity,
    Finite { u: Poly, v: Option<Poly>, ramified: bool },
}

impl Place {
    /// Degree of the residue field over the base field.
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite { u, v, .. } => {
                let d = u.degree().expect("nonzero u");
                if v.is_some() {
                    d
                } else {
                    2 * d
                }
            }
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    /// Ramification index of `x` at this place.
    pub fn ramification(&self) -> i64 {
        match self {
            Place::Infinity => 2,
            Place::Finite { ramified, .. } => {
                if *ramified {
                    2
                } else {
                    1
                }
            }
        }
    }

    /// The `x`-polynomial below a finite place.
    pub fn u(&self) -> Option<&Poly> {
        match self {
            Place::Infinity => None,
            Place::Finite { u, .. } => Some(u),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite { u, v: Some(v), .. } => write!(f, "({u:?}, {v:?})"),
            Place::Finite { u, v: None, .. } => write!(f, "({u:?}, *)"),
        }
    }
}

/// A formal sum of places.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, n)| format!("{n}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn point(p: Place, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_term(p, n);
        d
    }

    /// `n * inf`.
    pub fn infinity(n: i64) -> Divisor {
        Divisor::point(Place::Infinity, n)
    }

    pub fn add_term(&mut self, p: Place, n: i64) {
        let e = self.terms.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.retain(|_, n| *n != 0);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn infinity_coeff(&self) -> i64 {
        self.coeff(&Place::Infinity)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &i64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, n)| n * p.degree() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n >= 0)
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &n) in &other.terms {
            d.add_term(p.clone(), n);
        }
        d
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor { terms: self.terms.iter().map(|(p, &n)| (p.clone(), n * k)).collect() }
    }

    /// `self >= other` coefficient-wise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        self.sub(other).is_effective()
    }
}

/// An element `a(x) + b(x) y` of the function field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + ({:?})*y", self.a, self.b)
    }
}

impl FFElem {
    pub fn new(a: RatFunc, b: RatFunc) -> FFElem {
        FFElem { a, b }
    }

    pub fn from_polys(a: Poly, b: Poly) -> FFElem {
        FFElem { a: a.into(), b: b.into() }
    }

    pub fn from_poly(a: Poly) -> FFElem {
        let field = a.field();
        FFElem { a: a.into(), b: RatFunc::zero(field) }
    }

    pub fn zero(field: Field) -> FFElem {
        FFElem { a: RatFunc::zero(field), b: RatFunc::zero(field) }
    }

    pub fn one(field: Field) -> FFElem {
        FFElem::constant(field.one())
    }

    pub fn constant(c: Fe) -> FFElem {
        FFElem::from_poly(Poly::constant(c))
    }

    pub fn x(field: Field) -> FFElem {
        FFElem::from_poly(Poly::x(field))
    }

    pub fn y(field: Field) -> FFElem {
        FFElem { a: RatFunc::zero(field), b: RatFunc::one(field) }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &FFElem) -> FFElem {
        FFElem { a: &self.a + &other.a, b: &self.b + &other.b }
    }

    pub fn scale(&self, c: Fe) -> FFElem {
        FFElem { a: self.a.scale(c), b: self.b.scale(c) }
    }

    /// Multiplication by a rational function of `x`.
    pub fn mul_rat(&self, r: &RatFunc) -> FFElem {
        FFElem { a: &self.a * r, b: &self.b * r }
    }

    /// Both parts are polynomials.
    pub fn is_integral_form(&self) -> bool {
        self.a.is_poly() && self.b.is_poly()
    }
}

/// A differential `w dx`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Differential {
    pub w: FFElem,
}

impl Differential {
    pub fn new(w: FFElem) -> Differential {
        Differential { w }
    }

    pub fn dx(field: Field) -> Differential {
        Differential { w: FFElem::one(field) }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LocalKind {
    /// Uniformizer `x - x0`.
    Unramified,
    /// Uniformizer `y - y0`.
    Ramified,
    /// Uniformizer `y / x^3`.
    Infinity,
}

/// Expansions of `x`, `y` and `dx/ds` in a uniformizer `s`.
type Expansions = (Laurent, Laurent, Laurent);

/// The data needed to expand functions around one geometric point lying over
/// a closed place: the residue field, the point `(x0, y0)`, and cached
/// expansions of `x`, `y` and `dx/ds` in the uniformizer `s`.
#[derive(Debug)]
pub struct LocalFrame {
    pub ext: Extension,
    pub x0: Fe,
    pub y0: Fe,
    kind: LocalKind,
    h: Vec<Fe>,
    f: Vec<Fe>,
    cache: Mutex<Option<(usize, Arc<Expansions>)>>,
}

impl LocalFrame {
    fn new(curve: &Curve, place: &Place) -> Result<LocalFrame> {
        let (ext, x0, y0, kind) = match place {
            Place::Infinity => {
                let ext = Extension::new(curve.field, 1)?;
                let z = curve.field.zero();
                (ext, z, z, LocalKind::Infinity)
            }
            Place::Finite { u, v, ramified } => {
                let ext = Extension::new(curve.field, place.degree() as u32)?;
                let x0 = smallest_root(&ext, u)?;
                let y0 = match v {
                    Some(v) => v.eval_with(x0, |a| ext.embed(a)),
                    None => {
                        let hx = curve.h.eval_with(x0, |a| ext.embed(a));
                        let fx = curve.f.eval_with(x0, |a| ext.embed(a));
                        let q = Poly::new(ext.big, vec![fx, hx, ext.big.one()]);
                        *q.roots().first().ok_or(Error::NoSolution)?
                    }
                };
                let kind = if *ramified { LocalKind::Ramified } else { LocalKind::Unramified };
                (ext, x0, y0, kind)
            }
        };
        let h = curve.h.coeffs().iter().map(|&a| ext.embed(a)).collect();
        let f = curve.f.coeffs().iter().map(|&a| ext.embed(a)).collect();
        Ok(LocalFrame { ext, x0, y0, kind, h, f, cache: Mutex::new(None) })
    }

    /// Expansions of `x`, `y` and `dx/ds`, with `x` and `y` known to absolute
    /// precision at least `prec` at finite places (relative precision at
    /// infinity).
    pub fn expansions(&self, prec: usize) -> Arc<(Laurent, Laurent, Laurent)> {
        let mut guard = self.cache.lock().expect("local cache");
        if let Some((p, e)) = guard.as_ref() {
            if *p >= prec {
                return e.clone();
            }
        }
        let e = Arc::new(self.compute(prec));
        *guard = Some((prec, e.clone()));
        e
    }

    fn compute(&self, prec: usize) -> (Laurent, Laurent, Laurent) {
        let big = self.ext.big;
        let id = |a: Fe| a;
        match self.kind {
            LocalKind::Unramified => {
                let x = Laurent::uniformizer(big, prec).add_scalar(self.x0);
                let hx = x.eval_poly(&self.h, id);
                let fx = x.eval_poly(&self.f, id);
                let gy0 = self.h_at(self.x0);
                let y = hensel(self.y0, gy0, prec, |y| y.square().add(&hx.mul(y)).add(&fx));
                let dx = Laurent::constant(big.one(), prec);
                (x, y, dx)
            }
            LocalKind::Ramified => {
                let y = Laurent::uniformizer(big, prec).add_scalar(self.y0);
                let y2 = y.square();
                let dh = Poly::new(big, self.h.clone()).derivative().eval(self.x0);
                let df = Poly::new(big, self.f.clone()).derivative().eval(self.x0);
                let gx0 = dh * self.y0 + df;
                let x = hensel(self.x0, gx0, prec, |x| {
                    y2.add(&x.eval_poly(&self.h, id).mul(&y)).add(&x.eval_poly(&self.f, id))
                });
                let dx = x.derivative();
                (x, y, dx)
            }
            LocalKind::Infinity => {
                // With w = 1/x and t = y/x^3 the curve reads
                // t^2 + t w^3 h(1/w) + w^6 f(1/w) = 0, and w = t^2 + ...
                let n = prec + 4;
                let t = Laurent::uniformizer(big, n);
                let t2 = t.square();
                let hrev: Vec<Fe> = (0..4).map(|i| self.coef_rev(&self.h, 3, i)).collect();
                let frev: Vec<Fe> = (0..7).map(|i| self.coef_rev(&self.f, 6, i)).collect();
                let w = hensel(big.zero(), big.one(), n, |w| {
                    t2.add(&t.mul(&w.eval_poly(&hrev, id))).add(&w.eval_poly(&frev, id))
                });
                let x = w.inv().expect("w has valuation 2");
                let y = t.mul(&x.pow(3));
                let dx = x.derivative();
                (x, y, dx)
            }
        }
    }

    /// Coefficient of `w^i` in `w^shift * p(1/w)`.
    fn coef_rev(&self, p: &[Fe], shift: usize, i: usize) -> Fe {
        let big = self.ext.big;
        if i > shift {
            return big.zero();
        }
        p.get(shift - i).copied().unwrap_or(big.zero())
    }

    fn h_at(&self, x0: Fe) -> Fe {
        Poly::new(self.ext.big, self.h.clone()).eval(x0)
    }

    /// Expansion of a rational function of `x`; `None` when precision ran out.
    fn rat_series(&self, r: &RatFunc, x: &Laurent) -> Option<Laurent> {
        let emb = |a: Fe| self.ext.embed(a);
        let num = x.eval_poly(r.num().coeffs(), emb);
        let den = x.eval_poly(r.den().coeffs(), emb);
        Some(num.mul(&den.inv()?))
    }

    /// Expansion of a nonzero function-field element; `None` when the chosen
    /// precision was insufficient to see a nonzero term.
    pub fn series(&self, z: &FFElem, prec: usize) -> Option<Laurent> {
        let e = self.expansions(prec);
        let (x, y, _) = (&e.0, &e.1, &e.2);
        let a = if z.a.is_zero() { None } else { Some(self.rat_series(&z.a, x)?) };
        let b = if z.b.is_zero() { None } else { Some(self.rat_series(&z.b, x)?.mul(y)) };
        let s = match (a, b) {
            (Some(a), Some(b)) => a.add(&b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return None,
        };
        (!s.is_known_zero()).then_some(s)
    }

    /// Valuation of `dx/ds`, i.e. the valuation of the differential `dx`.
    pub fn dx_valuation(&self) -> i64 {
        let mut prec = START_PRECISION;
        loop {
            if let Some(v) = self.expansions(prec).2.valuation() {
                return v;
            }
            prec *= 2;
            assert!(prec <= MAX_PRECISION, "dx expansion did not stabilize");
        }
    }
}

/// Lifts a simple root `x0` of `g(X, s) = 0` to a power series, using the
/// fixed derivative `g_X(x0)` (linear convergence: one coefficient per step).
fn hensel(x0: Fe, gx0: Fe, prec: usize, g: impl Fn(&Laurent) -> Laurent) -> Laurent {
    let ginv = gx0.inv().expect("simple root");
    let mut x = Laurent::constant(x0, prec);
    for _ in 0..=prec {
        let r = g(&x);
        if r.is_known_zero() {
            break;
        }
        x = x.add(&r.scale(ginv));
    }
    x
}

fn smallest_root(ext: &Extension, u: &Poly) -> Result<Fe> {
    let ub = u.map_coeffs(ext.big, |a| ext.embed(a));
    ub.roots().first().copied().ok_or(Error::NoSolution)
}

/// Finds `v` over the base field with `deg v < d` and `v(x0) = y0`, where
/// `x0` generates the degree-`d` residue field.
fn interpolate(ext: &Extension, x0: Fe, y0: Fe, d: usize) -> Result<Poly> {
    let mut row: Vec<Fe> = Vec::with_capacity(d + 1);
    let mut p = ext.big.one();
    for _ in 0..d {
        row.push(p);
        p *= x0;
    }
    row.push(y0);
    let rows = ext.descend_row(&row);
    let lhs: Vec<Vec<Fe>> = rows.iter().map(|r| r[..d].to_vec()).collect();
    let rhs: Vec<Fe> = rows.iter().map(|r| r[d]).collect();
    let sol = Mat::from_rows(ext.base, d, &lhs).solve(&rhs)?;
    Ok(Poly::new(ext.base, sol))
}

#[derive(Default)]
struct CurveCache {
    frames: Mutex<HashMap<Place, Arc<LocalFrame>>>,
    places: Mutex<HashMap<usize, Arc<Vec<Place>>>>,
    canonical: OnceLock<Divisor>,
}

/// A validated smooth genus-2 curve `y^2 + h(x) y = f(x)`.
#[derive(Clone)]
pub struct Curve {
    field: Field,
    h: Poly,
    f: Poly,
    cache: Arc<CurveCache>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "Curve(y^2 + ({:?}) y = {:?} over {:?})", self.h, self.f, self.field)
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Curve) -> bool {
        self.field == other.field && self.h == other.h && self.f == other.f
    }
}

impl Eq for Curve {}

impl Curve {
    /// Validates the model: `f` monic of degree 5, `deg h <= 2`, `h != 0`,
    /// and smoothness at the roots of `h`.
    pub fn new(h: Poly, f: Poly) -> Result<Curve> {
        let field = f.field();
        if h.field() != field {
            return Err(Error::Degree("h and f live over different fields".into()));
        }
        if f.degree() != Some(5) || !f.is_monic() {
            return Err(Error::Degree("f must be monic of degree 5".into()));
        }
        if h.deg() > 2 {
            return Err(Error::Degree("h must have degree at most 2".into()));
        }
        if h.is_zero() {
            return Err(Error::Singular("h = 0".into()));
        }
        let (dh, df) = (h.derivative(), f.derivative());
        for (p, _) in h.factor() {
            let d = p.degree().expect("factor") as u32;
            let bad = match Extension::new(field, d) {
                Ok(ext) => {
                    let x0 = smallest_root(&ext, &p)?;
                    let e = |q: &Poly| q.eval_with(x0, |a| ext.embed(a));
                    e(&dh).square() * e(&f) == e(&df).square()
                }
                // Same test without leaving the base field.
                Err(_) => p.divides(&(&(&dh.square() * &f) + &df.square())),
            };
            if bad {
                return Err(Error::Singular(format!("singular point over a root of {p:?}")));
            }
        }
        Ok(Curve { field, h, f, cache: Arc::default() })
    }

    /// Parses the four-line curve file format: field degree, modulus bits
    /// (most significant first), then the coefficient lists of `h` and `f`
    /// (lowest degree first, each coefficient a bit string).
    pub fn parse(text: &str) -> Result<Curve> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        if lines.len() != 4 {
            return Err(Error::Parse(format!("expected 4 lines, found {}", lines.len())));
        }
        let m: u32 = lines[0].parse().map_err(|_| Error::Parse(format!("bad field degree '{}'", lines[0])))?;
        let modulus = lines[1];
        if modulus.is_empty() || !modulus.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!("bad modulus '{modulus}'")));
        }
        let modulus = u32::from_str_radix(modulus, 2).map_err(|e| Error::Parse(e.to_string()))?;
        let field = Field::new(m, Some(modulus))?;
        let parse_poly = |line: &str| -> Result<Poly> {
            let c = line.split_whitespace().map(|t| field.parse_elem(t)).collect::<Result<Vec<_>>>()?;
            Ok(Poly::new(field, c))
        };
        Curve::new(parse_poly(lines[2])?, parse_poly(lines[3])?)
    }

    /// Inverse of [`Curve::parse`].
    pub fn to_file_string(&self) -> String {
        let poly = |p: &Poly| {
            if p.is_zero() {
                return "0".to_string();
            }
            p.coeffs().iter().map(|a| a.to_bit_string()).collect::<Vec<_>>().join(" ")
        };
        format!(
            "{}\n{:b}\n{}\n{}\n",
            self.field.degree(),
            self.field.modulus(),
            poly(&self.h),
            poly(&self.f)
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        2
    }

    /// The same model over the degree-`k` extension of the base field.
    pub fn base_change(&self, k: u32) -> Result<Curve> {
        if k == 1 {
            return Ok(self.clone());
        }
        let ext = Extension::new(self.field, k)?;
        let lift = |p: &Poly| p.map_coeffs(ext.big, |a| ext.embed(a));
        Curve::new(lift(&self.h), lift(&self.f))
    }

    pub fn is_on_curve(&self, x0: Fe, y0: Fe) -> bool {
        let ext = Extension::new(self.field, x0.field().degree() / self.field.degree());
        let Ok(ext) = ext else { return false };
        let e = |q: &Poly| q.eval_with(x0, |a| ext.embed(a));
        y0.square() + e(&self.h) * y0 + e(&self.f) == x0.field().zero()
    }

    // ---- function-field arithmetic ----

    pub fn mul(&self, z1: &FFElem, z2: &FFElem) -> FFElem {
        let bb = &z1.b * &z2.b;
        let a = &(&z1.a * &z2.a) + &(&bb * &RatFunc::from(self.f.clone()));
        let b = &(&(&z1.a * &z2.b) + &(&z2.a * &z1.b)) + &(&bb * &RatFunc::from(self.h.clone()));
        FFElem { a, b }
    }

    pub fn square(&self, z: &FFElem) -> FFElem {
        self.mul(z, z)
    }

    pub fn pow(&self, z: &FFElem, e: u32) -> FFElem {
        let mut acc = FFElem::one(self.field);
        for _ in 0..e {
            acc = self.mul(&acc, z);
        }
        acc
    }

    /// The conjugate under the hyperelliptic involution `y -> y + h`.
    pub fn conj(&self, z: &FFElem) -> FFElem {
        FFElem { a: &z.a + &(&z.b * &RatFunc::from(self.h.clone())), b: z.b.clone() }
    }

    /// `z * conj(z) = a^2 + a b h + b^2 f`.
    pub fn norm(&self, z: &FFElem) -> RatFunc {
        let h = RatFunc::from(self.h.clone());
        let f = RatFunc::from(self.f.clone());
        &(&z.a.square() + &(&(&z.a * &z.b) * &h)) + &(&z.b.square() * &f)
    }

    pub fn inv(&self, z: &FFElem) -> Result<FFElem> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.norm(z).inv()?;
        Ok(self.conj(z).mul_rat(&n))
    }

    pub fn div(&self, z1: &FFElem, z2: &FFElem) -> Result<FFElem> {
        Ok(self.mul(z1, &self.inv(z2)?))
    }

    // ---- places ----

    /// The places over a monic irreducible `u`: two split places, one
    /// ramified place (when `u | h`), or one inert place of degree `2 deg u`.
    pub fn places_over(&self, u: &Poly) -> Result<Vec<Place>> {
        let d = u.degree().ok_or(Error::ZeroElement)?;
        let ext = Extension::new(self.field, d as u32)?;
        let x0 = smallest_root(&ext, u)?;
        let e = |q: &Poly| q.eval_with(x0, |a| ext.embed(a));
        let (hx, fx) = (e(&self.h), e(&self.f));
        if hx.is_zero() {
            let v = interpolate(&ext, x0, fx.sqrt(), d)?;
            return Ok(vec![Place::Finite { u: u.clone(), v: Some(v), ramified: true }]);
        }
        let q = Poly::new(ext.big, vec![fx, hx, ext.big.one()]);
        let roots = q.roots();
        if roots.is_empty() {
            return Ok(vec![Place::Finite { u: u.clone(), v: None, ramified: false }]);
        }
        let mut out = roots
            .into_iter()
            .map(|y0| Ok(Place::Finite { u: u.clone(), v: Some(interpolate(&ext, x0, y0, d)?), ramified: false }))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    /// All places of degree at most `max_deg`, infinity first, then by `u`.
    pub fn place_enumerate(&self, max_deg: usize) -> Result<Vec<Place>> {
        let mut out = vec![Place::Infinity];
        for d in 1..=max_deg {
            for u in Poly::all_monic(self.field, d) {
                if !u.is_irreducible() {
                    continue;
                }
                out.extend(self.places_over(&u)?.into_iter().filter(|p| p.degree() <= max_deg));
            }
        }
        out.sort();
        Ok(out)
    }

    /// [`Curve::place_enumerate`], memoized per curve.
    pub fn places_cached(&self, max_deg: usize) -> Result<Arc<Vec<Place>>> {
        if let Some(p) = self.cache.places.lock().expect("place cache").get(&max_deg) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.place_enumerate(max_deg)?);
        self.cache.places.lock().expect("place cache").insert(max_deg, p.clone());
        Ok(p)
    }

    /// The expansion frame at a place (cached per curve).
    pub fn frame(&self, place: &Place) -> Result<Arc<LocalFrame>> {
        if let Some(fr) = self.cache.frames.lock().expect("frame cache").get(place) {
            return Ok(fr.clone());
        }
        let fr = Arc::new(LocalFrame::new(self, place)?);
        self.cache.frames.lock().expect("frame cache").insert(place.clone(), fr.clone());
        Ok(fr)
    }

    /// Expansion of `z` at `place` with at least one known nonzero term.
    pub fn local_series(&self, z: &FFElem, place: &Place) -> Result<Laurent> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        let fr = self.frame(place)?;
        let mut prec = START_PRECISION;
        loop {
            if let Some(s) = fr.series(z, prec) {
                return Ok(s);
            }
            prec *= 2;
            if prec > MAX_PRECISION {
                return Err(Error::TooLarge(format!("expansion of {z:?} at {place} did not stabilize")));
            }
        }
    }

    pub fn valuation(&self, z: &FFElem, place: &Place) -> Result<i64> {
        Ok(self.local_series(z, place)?.val())
    }

    pub fn dx_valuation(&self, place: &Place) -> Result<i64> {
        Ok(self.frame(place)?.dx_valuation())
    }

    pub fn diff_valuation(&self, w: &Differential, place: &Place) -> Result<i64> {
        Ok(self.valuation(&w.w, place)? + self.dx_valuation(place)?)
    }

    /// Irreducible `x`-polynomials over which `z` can have zeros or poles.
    fn candidate_support(&self, z: &FFElem) -> BTreeSet<Poly> {
        let n = self.norm(z);
        let mut out = BTreeSet::new();
        for p in [n.num(), n.den(), z.a.den(), z.b.den()] {
            if p.is_constant() {
                continue;
            }
            out.extend(p.factor().into_iter().map(|(q, _)| q));
        }
        out
    }

    /// The principal divisor of a nonzero function.
    pub fn divisor_of(&self, z: &FFElem) -> Result<Divisor> {
        if z.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut d = Divisor::zero();
        for u in self.candidate_support(z) {
            let places = self.places_over(&u).map_err(|e| match e {
                Error::TooLarge(s) => Error::UnsupportedSupport(s),
                e => e,
            })?;
            for p in places {
                let v = self.valuation(z, &p).map_err(|e| match e {
                    Error::TooLarge(s) => Error::UnsupportedSupport(s),
                    e => e,
                })?;
                d.add_term(p, v);
            }
        }
        d.add_term(Place::Infinity, self.valuation(z, &Place::Infinity)?);
        if d.degree() != 0 {
            return Err(Error::AssertionFailed {
                check: "principal divisor degree".into(),
                detail: format!("div({z:?}) = {d:?} has nonzero degree"),
            });
        }
        Ok(d)
    }

    /// `div(dx)`: supported at infinity and the ramified places over the roots of `h`.
    pub fn dx_divisor(&self) -> Result<Divisor> {
        let mut d = Divisor::zero();
        d.add_term(Place::Infinity, self.dx_valuation(&Place::Infinity)?);
        for (u, _) in self.h.factor() {
            for p in self.places_over(&u)? {
                d.add_term(p.clone(), self.dx_valuation(&p)?);
            }
        }
        Ok(d)
    }

    /// The canonical divisor `div(dx)` (cached).
    pub fn canonical_divisor(&self) -> Divisor {
        self.cache
            .canonical
            .get_or_init(|| self.dx_divisor().expect("roots of h have degree at most 2"))
            .clone()
    }

    /// The divisor of a nonzero differential.
    pub fn diff_divisor(&self, w: &Differential) -> Result<Divisor> {
        Ok(self.divisor_of(&w.w)?.add(&self.canonical_divisor()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::one(f), Poly::from_bits(f, &[0, 0, 0, 0, 0, 1])).unwrap()
    }

    fn c2() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 0, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn validation_examples() {
        let f = Field::gf2();
        c1();
        c2();
        let bad = Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 1, 0, 0, 0, 1]));
        assert!(matches!(bad, Err(Error::Singular(_))));
        let zero = Curve::new(Poly::zero(f), Poly::from_bits(f, &[0, 0, 0, 0, 0, 1]));
        assert_eq!(zero.unwrap_err().to_string(), "singular model: h = 0");
    }

    #[test]
    fn c1_rational_places() {
        let c = c1();
        let ps = c.place_enumerate(1).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0], Place::Infinity);
    }

    #[test]
    fn pole_orders_at_infinity() {
        let c = c1();
        let f = c.field();
        assert_eq!(c.valuation(&FFElem::x(f), &Place::Infinity).unwrap(), -2);
        assert_eq!(c.valuation(&FFElem::y(f), &Place::Infinity).unwrap(), -5);
    }

    #[test]
    fn divisor_of_x_on_c1() {
        let c = c1();
        let f = c.field();
        let d = c.divisor_of(&FFElem::x(f)).unwrap();
        let ps = c.place_enumerate(1).unwrap();
        assert_eq!(d.coeff(&ps[1]), 1);
        assert_eq!(d.coeff(&ps[2]), 1);
        assert_eq!(d.infinity_coeff(), -2);
        assert!(c.divisor_of(&FFElem::one(f)).unwrap().is_zero());
    }

    #[test]
    fn canonical_divisors() {
        assert_eq!(c1().canonical_divisor(), Divisor::infinity(2));
        let k2 = c2().canonical_divisor();
        assert_eq!(k2.degree(), 2);
        assert_eq!(k2.infinity_coeff(), -2);
    }

    #[test]
    fn parse_roundtrip() {
        let c = c2();
        let s = c.to_file_string();
        assert_eq!(Curve::parse(&s).unwrap(), c);
    }
}
