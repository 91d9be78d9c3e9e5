//! Truncated Laurent series in one uniformizer, used for local expansions at
//! closed points.

use std::fmt;

use crate::galois::{Fe, Field};

/// `sum c[i] s^(val+i) + O(s^(val + c.len()))`, normalized so that `c[0] != 0`
/// whenever `c` is nonempty. An empty `c` means "zero to absolute precision `val`".
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: Field,
    val: i64,
    c: Vec<Fe>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                write!(f, "[{a}]s^{} + ", self.val + i as i64)?;
            }
        }
        write!(f, "O(s^{})", self.abs_prec())
    }
}

impl Laurent {
    fn normalized(field: Field, mut val: i64, mut c: Vec<Fe>) -> Laurent {
        let lead = c.iter().position(|a| !a.is_zero()).unwrap_or(c.len());
        val += lead as i64;
        c.drain(..lead);
        Laurent { field, val, c }
    }

    /// Power series from coefficients of `s^0, s^1, ...` known to absolute precision `prec`.
    pub fn from_coeffs(field: Field, coeffs: &[Fe], prec: usize) -> Laurent {
        let mut c: Vec<Fe> = coeffs.iter().copied().take(prec).collect();
        c.resize(prec, field.zero());
        Laurent::normalized(field, 0, c)
    }

    pub fn constant(a: Fe, prec: usize) -> Laurent {
        Laurent::from_coeffs(a.field(), &[a], prec)
    }

    /// The uniformizer `s` itself.
    pub fn uniformizer(field: Field, prec: usize) -> Laurent {
        Laurent::from_coeffs(field, &[field.zero(), field.one()], prec)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Exponent of the first known-nonzero term (or the precision, if zero).
    pub fn val(&self) -> i64 {
        self.val
    }

    /// Valuation, or `None` when the series is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.val)
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.c.len() as i64
    }

    pub fn rel_prec(&self) -> usize {
        self.c.len()
    }

    pub fn is_known_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `s^k`; `None` if `k` is beyond the known precision.
    pub fn coeff(&self, k: i64) -> Option<Fe> {
        if k >= self.abs_prec() {
            None
        } else if k < self.val {
            Some(self.field.zero())
        } else {
            Some(self.c[(k - self.val) as usize])
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let abs = self.abs_prec().min(other.abs_prec());
        let v = self.val.min(other.val).min(abs);
        let c = (v..abs)
            .map(|k| self.coeff(k).expect("in range") + other.coeff(k).expect("in range"))
            .collect();
        Laurent::normalized(self.field, v, c)
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let n = self.c.len().min(other.c.len());
        let mut c = vec![self.field.zero(); n];
        for (i, &a) in self.c.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.c.iter().take(n - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent::normalized(self.field, self.val + other.val, c)
    }

    pub fn scale(&self, a: Fe) -> Laurent {
        if a.is_zero() {
            return Laurent { field: self.field, val: self.abs_prec(), c: Vec::new() };
        }
        Laurent { c: self.c.iter().map(|&b| b * a).collect(), ..self.clone() }
    }

    /// Multiplicative inverse; `None` if the series is not known to be nonzero.
    pub fn inv(&self) -> Option<Laurent> {
        let n = self.c.len();
        if n == 0 {
            return None;
        }
        let a0inv = self.c[0].inv().expect("normalized lead");
        let mut r = vec![self.field.zero(); n];
        r[0] = a0inv;
        for k in 1..n {
            let mut acc = self.field.zero();
            for i in 1..=k {
                acc += self.c[i] * r[k - i];
            }
            r[k] = -acc * a0inv;
        }
        Some(Laurent { field: self.field, val: -self.val, c: r })
    }

    pub fn square(&self) -> Laurent {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Laurent {
        let mut acc = Laurent::constant(self.field.one(), self.c.len().max(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/ds`; in characteristic 2 only odd exponents survive.
    pub fn derivative(&self) -> Laurent {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &a)| if (self.val + i as i64).rem_euclid(2) == 1 { a } else { self.field.zero() })
            .collect();
        Laurent::normalized(self.field, self.val - 1, c)
    }

    /// Truncates to absolute precision `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> Laurent {
        if prec >= self.abs_prec() {
            return self.clone();
        }
        let keep = (prec - self.val).max(0) as usize;
        Laurent::normalized(self.field, self.val, self.c[..keep.min(self.c.len())].to_vec())
    }

    /// Adds an exact scalar (a constant term known to all orders).
    pub fn add_scalar(&self, a: Fe) -> Laurent {
        if a.is_zero() || self.abs_prec() <= 0 {
            return self.clone();
        }
        let v = self.val.min(0);
        let c = (v..self.abs_prec())
            .map(|k| {
                let b = self.coeff(k).expect("in range");
                if k == 0 {
                    b + a
                } else {
                    b
                }
            })
            .collect();
        Laurent::normalized(self.field, v, c)
    }

    /// Evaluates a nonzero polynomial (coefficients mapped by `emb`) at this
    /// series by Horner's rule, treating the coefficients as exact.
    pub fn eval_poly(&self, coeffs: &[Fe], emb: impl Fn(Fe) -> Fe) -> Laurent {
        let top = coeffs.len().checked_sub(1).expect("nonzero polynomial");
        let lead = emb(coeffs[top]);
        if top == 0 {
            return Laurent::constant(lead, self.rel_prec().max(1));
        }
        let mut acc = self.scale(lead);
        for i in (0..top).rev() {
            acc = acc.add_scalar(emb(coeffs[i]));
            if i > 0 {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_one_plus_s() {
        let f = Field::gf2();
        let s = Laurent::uniformizer(f, 8);
        let a = s.add(&Laurent::constant(f.one(), 8));
        let b = a.inv().unwrap();
        let p = a.mul(&b);
        assert_eq!(p.valuation(), Some(0));
        for k in 1..8 {
            assert!(p.coeff(k).unwrap().is_zero());
        }
        // 1/(1+s) = 1 + s + s^2 + ... over GF(2)
        for k in 0..8 {
            assert!(b.coeff(k).unwrap().is_one());
        }
    }

    #[test]
    fn cancellation_loses_known_terms() {
        let f = Field::gf2();
        let s = Laurent::uniformizer(f, 4);
        let z = s.add(&s);
        assert!(z.is_known_zero());
        assert_eq!(z.abs_prec(), 4);
    }

    #[test]
    fn derivative_char_two() {
        let f = Field::gf2();
        let s = Laurent::uniformizer(f, 6);
        let s2 = s.square();
        assert!(s2.derivative().is_known_zero());
        let s3 = s2.mul(&s);
        assert_eq!(s3.derivative().valuation(), Some(2));
    }

    #[test]
    fn horner_matches_direct_powers() {
        let f = Field::default_for(2);
        let s = Laurent::uniformizer(f, 10).add_scalar(f.gen());
        let coeffs = [f.one(), f.zero(), f.gen(), f.one()];
        let direct = s
            .pow(3)
            .add(&s.square().scale(f.gen()))
            .add_scalar(f.one());
        assert_eq!(s.eval_poly(&coeffs, |a| a), direct);
    }

    #[test]
    fn laurent_tail_through_inverse() {
        let f = Field::gf2();
        let w = Laurent::uniformizer(f, 12).square().add_scalar(f.zero());
        let x = w.inv().unwrap();
        assert_eq!(x.valuation(), Some(-2));
        let back = x.eval_poly(&[f.one(), f.one()], |a| a);
        assert_eq!(back.valuation(), Some(-2));
        assert_eq!(back.coeff(0), Some(f.one()));
    }
}
