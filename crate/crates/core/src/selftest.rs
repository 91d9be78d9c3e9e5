//! Built-in property suites over the two reference curves
//!
//! * `C1: y^2 + y = x^5` (supersingular), and
//! * `C2: y^2 + (x^2 + x) y = x^5 + x^3 + 1` (ordinary),
//!
//! both over GF(2), with base changes to GF(4). Each suite returns a
//! [`SuiteResult`] naming the first failing case, so callers can report the
//! failure without unwinding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{Curve, Differential, Divisor, FFElem};
use crate::error::Result;
use crate::galois::{Fe, Field, DEFAULT_MODULI};
use crate::jacobian::DivClass;
use crate::poly::{Poly, RatFunc};

/// Default seed of the random suites.
pub const DEFAULT_SEED: u64 = 2;

/// `y^2 + y = x^5` over GF(2).
pub fn c1() -> Curve {
    let f = Field::gf2();
    Curve::new(Poly::one(f), Poly::from_bits(f, &[0, 0, 0, 0, 0, 1])).expect("C1 is smooth")
}

/// `y^2 + (x^2 + x) y = x^5 + x^3 + 1` over GF(2).
pub fn c2() -> Curve {
    let f = Field::gf2();
    Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 0, 0, 1, 0, 1])).expect("C2 is smooth")
}

/// Both reference curves over GF(2) and GF(4), labelled.
pub fn reference_curves() -> Vec<(String, Curve)> {
    let mut out = Vec::new();
    for (name, c) in [("C1", c1()), ("C2", c2())] {
        for ext in [1, 2] {
            let bc = c.base_change(ext).expect("GF(4) is in range");
            out.push((format!("{name}/GF({})", bc.field().size()), bc));
        }
    }
    out
}

/// The outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    /// Number of individual cases checked.
    pub cases: usize,
    /// Description of the first failing case.
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Accumulates cases, keeping the first failure.
struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn error(&mut self, context: &str, e: crate::Error) {
        self.check(false, || format!("{context}: {e}"));
    }

    fn finish(self) -> SuiteResult {
        SuiteResult { name: self.name, cases: self.cases, failure: self.failure }
    }
}

/// Options shared by the suites.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// The modulus table the field suite builds its fields from.
    pub moduli: [u32; 16],
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, moduli: DEFAULT_MODULI }
    }
}

/// Field axioms, exhaustively over GF(2) and GF(4); `sqrt(a)^2 = a` and
/// Frobenius additivity exhaustively up to GF(256).
pub fn field_axioms(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("field-axioms");
    for m in 1..=8u32 {
        let modulus = opts.moduli[(m - 1) as usize];
        let field = match Field::with_unchecked_modulus(m, modulus) {
            Ok(f) => f,
            Err(e) => {
                t.error(&format!("GF(2^{m})"), e);
                continue;
            }
        };
        let elems: Vec<Fe> = field.elements().collect();
        if m <= 2 {
            let (zero, one) = (field.zero(), field.one());
            for &a in &elems {
                t.check(a + zero == a && a * one == a && a + a == zero, || format!("GF(2^{m}) identities at {a:?}"));
                if !a.is_zero() {
                    let ok = a.inv().is_ok_and(|b| a * b == one);
                    t.check(ok, || format!("GF(2^{m}) modulus {modulus:b}: {a:?} has no inverse"));
                }
                for &b in &elems {
                    t.check(a + b == b + a && a * b == b * a, || format!("GF(2^{m}) commutativity at {a:?}, {b:?}"));
                    for &c in &elems {
                        let assoc = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c);
                        let distrib = a * (b + c) == a * b + a * c;
                        t.check(assoc && distrib, || format!("GF(2^{m}) modulus {modulus:b}: axioms fail at {a:?}, {b:?}, {c:?}"));
                    }
                }
            }
        }
        // A field has no zero divisors: a^(q-1) = 1 for every nonzero a.
        for &a in &elems {
            if !a.is_zero() {
                t.check(a.pow(field.size() - 1).is_one(), || format!("GF(2^{m}) modulus {modulus:b}: {a:?}^(q-1) != 1"));
            }
            t.check(a.sqrt().square() == a, || format!("GF(2^{m}): sqrt({a:?})^2 != a"));
        }
        for (&a, &b) in elems.iter().zip(elems.iter().rev()) {
            t.check((a + b).square() == a.square() + b.square(), || format!("GF(2^{m}): Frobenius not additive"));
        }
    }
    t.finish()
}

fn random_poly(rng: &mut ChaCha8Rng, field: Field, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    Poly::new(field, (0..=d).map(|_| field.elem(rng.gen_range(0..field.size()) as u32)).collect())
}

fn random_ratfunc(rng: &mut ChaCha8Rng, field: Field) -> RatFunc {
    loop {
        let den = random_poly(rng, field, 3);
        if !den.is_zero() {
            return RatFunc::new(random_poly(rng, field, 5), den).expect("nonzero denominator");
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, field: Field) -> FFElem {
    FFElem::new(random_ratfunc(rng, field), random_ratfunc(rng, field))
}

/// `r = r_e^2 + x r_o^2` on random rational functions and `w = s^2 + x t^2`
/// on random function-field elements, 200 of each per curve.
pub fn even_odd(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("even-odd");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (name, c) in reference_curves() {
        let field = c.field();
        let x = RatFunc::from(Poly::x(field));
        for _ in 0..200 {
            let r = random_ratfunc(&mut rng, field);
            let (re, ro) = r.even_odd();
            t.check(&re.square() + &(&x * &ro.square()) == r, || format!("{name}: rational recomposition of {r:?}"));
        }
        for _ in 0..200 {
            let w = random_element(&mut rng, field);
            let (s, u) = c.ff_even_odd(&w);
            let back = c.square(&s).add(&c.square(&u).mul_rat(&x));
            t.check(back == w, || format!("{name}: recomposition of {w:?}"));
        }
    }
    t.finish()
}

/// A random divisor supported on places of degree at most 2.
pub fn random_divisor(rng: &mut ChaCha8Rng, c: &Curve) -> Result<Divisor> {
    let places = c.places_cached(2)?;
    let mut d = Divisor::zero();
    for _ in 0..rng.gen_range(0..=3) {
        let p = places[rng.gen_range(0..places.len())].clone();
        d.add_term(p, rng.gen_range(-2..=2));
    }
    d.add_term(crate::curve::Place::Infinity, rng.gen_range(-2..=4));
    Ok(d)
}

/// `h^0(D) - h^0(K - D) = deg D - 1` on 100 random divisors per curve, and
/// `h^0(O) = 1`, `h^0(K) = 2`, `h^0(D) = 0` for `deg D < 0`.
pub fn riemann_roch(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("riemann-roch");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5252);
    for (name, c) in reference_curves() {
        let k = c.canonical_divisor();
        let h0 = |d: &Divisor| c.rr_basis(d).map(|s| s.dim() as i64);
        match (h0(&Divisor::zero()), h0(&k)) {
            (Ok(a), Ok(b)) => t.check(a == 1 && b == 2, || format!("{name}: h0(O) = {a}, h0(K) = {b}")),
            (Err(e), _) | (_, Err(e)) => t.error(&name, e),
        }
        for _ in 0..100 {
            let d = match random_divisor(&mut rng, &c) {
                Ok(d) => d,
                Err(e) => {
                    t.error(&name, e);
                    continue;
                }
            };
            match (h0(&d), h0(&k.sub(&d))) {
                (Ok(a), Ok(b)) => {
                    t.check(a - b == d.degree() - 1, || format!("{name}: h0({d:?}) = {a}, h0(K - D) = {b}"));
                    if d.degree() < 0 {
                        t.check(a == 0, || format!("{name}: h0({d:?}) = {a} in negative degree"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => t.error(&format!("{name}: {d:?}"), e),
            }
        }
    }
    t.finish()
}

/// `C((z^2 w) dx) = z C(w dx)` and additivity of `C` on random elements.
pub fn cartier_linearity(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("cartier-p-linearity");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xCA27);
    for (name, c) in reference_curves() {
        let field = c.field();
        let cart = |w: &FFElem| c.cartier_apply(&Differential::new(w.clone())).w;
        for _ in 0..50 {
            let (z, w, v) = (random_element(&mut rng, field), random_element(&mut rng, field), random_element(&mut rng, field));
            let lhs = cart(&c.mul(&c.square(&z), &w));
            t.check(lhs == c.mul(&z, &cart(&w)), || format!("{name}: C(z^2 w dx) != z C(w dx) for z = {z:?}"));
            t.check(cart(&w.add(&v)) == cart(&w).add(&cart(&v)), || format!("{name}: C not additive"));
        }
        // C(dx) = 0 and C(x dx) = dx.
        t.check(cart(&FFElem::one(field)).is_zero(), || format!("{name}: C(dx) != 0"));
        t.check(cart(&FFElem::x(field)) == FFElem::one(field), || format!("{name}: C(x dx) != dx"));
    }
    t.finish()
}

/// Group laws on `J^0`: exhaustive over GF(2), 300 random triples over GF(4).
pub fn group_laws(opts: &Options) -> SuiteResult {
    let mut t = Tally::new("group-laws");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6A6C);
    for (name, c) in reference_curves() {
        let classes = match c.jac_enumerate(0) {
            Ok(cl) => cl,
            Err(e) => {
                t.error(&name, e);
                continue;
            }
        };
        let zero = DivClass::neutral(c.field(), 0);
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        let n = classes.len();
        if c.field().size() == 2 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        triples.push((i, j, k));
                    }
                }
            }
        } else {
            for _ in 0..300 {
                triples.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
            }
        }
        for a in &classes {
            t.check(c.jac_add(a, &zero) == *a, || format!("{name}: identity fails at {a:?}"));
            t.check(c.jac_add(a, &c.jac_neg(a)) == zero, || format!("{name}: inverse fails at {a:?}"));
            t.check(c.jac_mul(a, n as i64) == zero, || format!("{name}: {a:?} has order not dividing {n}"));
        }
        for (i, j, k) in triples {
            let (a, b, d) = (&classes[i], &classes[j], &classes[k]);
            let ab = c.jac_add(a, b);
            t.check(ab == c.jac_add(b, a), || format!("{name}: commutativity fails at {a:?}, {b:?}"));
            t.check(c.is_valid_class(&ab), || format!("{name}: {a:?} + {b:?} is not reduced"));
            let lhs = c.jac_add(&ab, d);
            let rhs = c.jac_add(a, &c.jac_add(b, d));
            t.check(lhs == rhs, || format!("{name}: associativity fails at {a:?}, {b:?}, {d:?}"));
        }
    }
    t.finish()
}

/// `|J(GF(q))|` by enumeration against the zeta-function prediction.
pub fn zeta(_opts: &Options) -> SuiteResult {
    let mut t = Tally::new("jacobian-order");
    for (name, c) in reference_curves() {
        match (c.jac_enumerate(0), c.jacobian_order_from_zeta()) {
            (Ok(cl), Ok(z)) => t.check(cl.len() as u64 == z, || format!("{name}: enumerated {} vs zeta {z}", cl.len())),
            (Err(e), _) | (_, Err(e)) => t.error(&name, e),
        }
    }
    t.finish()
}

/// Every suite, in a fixed order.
pub fn run_all(opts: &Options) -> Vec<SuiteResult> {
    vec![
        field_axioms(opts),
        even_odd(opts),
        riemann_roch(opts),
        cartier_linearity(opts),
        group_laws(opts),
        zeta(opts),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for r in run_all(&Options::default()) {
            assert!(r.passed(), "{}: {:?}", r.name, r.failure);
            assert!(r.cases > 0);
        }
    }

    #[test]
    fn corrupted_table_fails_field_suite() {
        let mut opts = Options::default();
        opts.moduli[1] = 0b101; // t^2 + 1 = (t + 1)^2
        let r = field_axioms(&opts);
        assert!(!r.passed());
    }
}
