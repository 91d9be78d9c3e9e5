//! The Cartier operator on differentials, the Hasse–Witt matrix and the p-rank.

use crate::curve::{Curve, Differential, Divisor, FFElem};
use crate::error::{Error, Result};
use crate::linalg::{Mat, SemiLinMap};
use crate::poly::RatFunc;
use crate::rrspace::SectionSpace;

impl Curve {
    /// Writes `w = s^2 + x t^2` in the function field.
    ///
    /// With `w = a + b y` and `y = (y^2 + f)/h`, `w = r + (b/h) y^2` where
    /// `r = a + b f / h`; splitting `r` and `b/h` into even and odd parts gives
    /// `s = r_e + c_e y`, `t = r_o + c_o y`.
    pub fn ff_even_odd(&self, w: &FFElem) -> (FFElem, FFElem) {
        let h = RatFunc::from(self.h().clone());
        let f = RatFunc::from(self.f().clone());
        let c = w.b.div(&h).expect("h is nonzero on a valid curve");
        let r = &w.a + &(&c * &f);
        let (re, ro) = r.even_odd();
        let (ce, co) = c.even_odd();
        (FFElem::new(re, ce), FFElem::new(ro, co))
    }

    /// `C(w dx) = t dx` where `w = s^2 + x t^2`.
    pub fn cartier_apply(&self, w: &Differential) -> Differential {
        Differential::new(self.ff_even_odd(&w.w).1)
    }

    /// The matrix whose row `j` holds the coordinates, in `dst`, of the Cartier
    /// image of the `j`-th basis element of `src`.
    pub fn cartier_matrix(&self, src: &SectionSpace, dst: &SectionSpace) -> Result<Mat> {
        let rows = src
            .basis()
            .iter()
            .map(|w| {
                let t = self.cartier_apply(&Differential::new(w.clone())).w;
                if t.is_zero() {
                    return Ok(vec![dst.field().zero(); dst.dim()]);
                }
                dst.coords(&t).ok_or_else(|| Error::AssertionFailed {
                    check: "cartier image".into(),
                    detail: format!("C({w:?} dx) left the target space"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(src.field(), dst.dim(), &rows))
    }

    /// The Cartier operator on `H^0(Omega)` as a `1/2`-linear map in the basis
    /// of the regular differentials: column `i` is `C(omega_i)`.
    pub fn hasse_witt(&self) -> Result<SemiLinMap> {
        let space = self.diff_space(&Divisor::zero())?;
        let m = self.cartier_matrix(&space, &space)?;
        Ok(SemiLinMap::new(m.transpose(), -1))
    }

    /// The p-rank: the stable rank of the Hasse–Witt map.
    pub fn p_rank(&self) -> Result<usize> {
        self.hasse_witt()?.stable_rank()
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

    fn c2() -> Curve {
        let f = Field::gf2();
        Curve::new(Poly::from_bits(f, &[0, 1, 1]), Poly::from_bits(f, &[1, 0, 0, 1, 0, 1])).unwrap()
    }

    #[test]
    fn even_odd_examples() {
        let c = c1();
        let f = c.field();
        assert_eq!(c.ff_even_odd(&FFElem::one(f)), (FFElem::one(f), FFElem::zero(f)));
        assert_eq!(c.ff_even_odd(&FFElem::x(f)), (FFElem::zero(f), FFElem::one(f)));
        let y = FFElem::y(f);
        let (s, t) = c.ff_even_odd(&y);
        let back = c.square(&s).add(&c.square(&t).mul_rat(&RatFunc::from(Poly::x(f))));
        assert_eq!(back, y);
    }

    #[test]
    fn hasse_witt_c1() {
        let c = c1();
        let hw = c.hasse_witt().unwrap();
        assert_eq!(hw.mat, Mat::from_bits(c.field(), &[&[0, 1], &[0, 0]]));
        assert_eq!(c.p_rank().unwrap(), 0);
    }

    #[test]
    fn c2_is_ordinary() {
        assert_eq!(c2().p_rank().unwrap(), 2);
    }
}
