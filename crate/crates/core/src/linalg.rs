//! Exact linear algebra over GF(2^m) and 2-semilinear maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{Fe, Field};

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Fe>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Mat { field, rows: rows.len(), cols, data }
    }

    pub fn from_bits(field: Field, rows: &[&[u32]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&b| field.elem(b)).collect()).collect();
        Mat::from_rows(field, cols, &rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: Field, rows: usize, cols: &[Vec<Fe>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &a) in c.iter().enumerate() {
                m.set(i, j, a);
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, a: Fe) {
        self.data[r * self.cols + c] = a;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Entry-wise Frobenius power.
    pub fn frobenius(&self, k: i32) -> Mat {
        Mat { data: self.data.iter().map(|a| a.frobenius(k)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(self.field.zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(p, j));
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis, in reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Fe>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Fe>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![self.field.zero(); self.cols];
                v[fc] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, fc);
                }
                v
            })
            .collect();
        echelon(self.field, self.cols, &basis)
    }

    /// Column-space basis, in reduced echelon form.
    pub fn image_basis(&self) -> Vec<Vec<Fe>> {
        echelon(self.field, self.rows, &self.transpose().to_rows())
    }

    /// Some solution of `self * v = b`.
    pub fn solve(&self, b: &[Fe]) -> Result<Vec<Fe>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Mat::zeros(self.field, self.rows, self.cols + 1);
        for (r, &br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, br);
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut v = vec![self.field.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m.get(r, self.cols);
        }
        Ok(v)
    }
}

/// Reduced echelon basis of the span of `vectors`.
pub fn echelon(field: Field, dim: usize, vectors: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let (m, pivots) = Mat::from_rows(field, dim, vectors).rref();
    (0..pivots.len()).map(|r| m.row(r).to_vec()).collect()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(field: Field, basis: &[Vec<Fe>], v: &[Fe]) -> bool {
    if v.iter().all(|a| a.is_zero()) {
        return true;
    }
    let mut rows = basis.to_vec();
    let r0 = echelon(field, v.len(), &rows).len();
    rows.push(v.to_vec());
    echelon(field, v.len(), &rows).len() == r0
}

/// Coordinate-wise Frobenius power of a vector.
pub fn frobenius_vec(v: &[Fe], k: i32) -> Vec<Fe> {
    v.iter().map(|a| a.frobenius(k)).collect()
}

/// The map `v -> mat * v^(2^twist)` with the Frobenius applied coordinate-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiLinMap {
    pub mat: Mat,
    pub twist: i32,
}

impl SemiLinMap {
    pub fn new(mat: Mat, twist: i32) -> SemiLinMap {
        SemiLinMap { mat, twist }
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        self.mat.mul_vec(&frobenius_vec(v, self.twist))
    }

    /// `self` after `other`: `v -> A (B v^(σ^s))^(σ^t) = A B^(σ^t) v^(σ^(s+t))`.
    pub fn compose(&self, other: &SemiLinMap) -> SemiLinMap {
        SemiLinMap {
            mat: self.mat.mul(&other.mat.frobenius(self.twist)),
            twist: self.twist + other.twist,
        }
    }

    /// Kernel and image bases. The kernel is the untwisted kernel pulled back
    /// through the inverse Frobenius power; the image is the column space.
    pub fn kernel_image(&self) -> (Vec<Vec<Fe>>, Vec<Vec<Fe>>) {
        let field = self.mat.field();
        let ker: Vec<Vec<Fe>> =
            self.mat.kernel_basis().iter().map(|v| frobenius_vec(v, -self.twist)).collect();
        (echelon(field, self.mat.cols(), &ker), self.mat.image_basis())
    }

    /// Rank of the n-fold composite, n the size of the square matrix.
    pub fn stable_rank(&self) -> Result<usize> {
        if !self.mat.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.mat.rows();
        if n == 0 {
            return Ok(0);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc);
        }
        Ok(acc.mat.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::gf2()
    }

    fn v(bits: &[u32]) -> Vec<Fe> {
        bits.iter().map(|&b| f2().elem(b)).collect()
    }

    #[test]
    fn mat_examples() {
        let a = Mat::from_bits(f2(), &[&[1, 0], &[0, 0]]);
        assert_eq!(a.kernel_basis(), vec![v(&[0, 1])]);
        assert_eq!(Mat::identity(f2(), 3).rank(), 3);
        let b = Mat::from_bits(f2(), &[&[1, 1], &[1, 1]]);
        assert_eq!(b.kernel_basis(), vec![v(&[1, 1])]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_bits(f2(), &[&[1, 1], &[1, 1]]);
        assert_eq!(a.solve(&v(&[1, 0])), Err(Error::NoSolution));
        let x = a.solve(&v(&[1, 1])).unwrap();
        assert_eq!(a.mul_vec(&x), v(&[1, 1]));
    }

    #[test]
    fn semilinear_examples() {
        let f4 = Field::default_for(2);
        let id = SemiLinMap::new(Mat::identity(f4, 2), 1);
        let (k, i) = id.kernel_image();
        assert!(k.is_empty());
        assert_eq!(i.len(), 2);
        let nil = SemiLinMap::new(Mat::from_bits(f4, &[&[0, 1], &[0, 0]]), -1);
        let (k, i) = nil.kernel_image();
        assert_eq!(k, vec![vec![f4.one(), f4.zero()]]);
        assert_eq!(i, vec![vec![f4.one(), f4.zero()]]);
        assert_eq!(nil.stable_rank().unwrap(), 0);
        assert_eq!(SemiLinMap::new(Mat::identity(f4, 2), 0).stable_rank().unwrap(), 2);
        let rect = SemiLinMap::new(Mat::zeros(f4, 2, 3), 0);
        assert_eq!(rect.stable_rank(), Err(Error::NotSquare));
    }

    #[test]
    fn twisted_kernel_is_annihilated() {
        let f4 = Field::default_for(2);
        let t = f4.gen();
        let m = Mat::from_rows(f4, 2, &[vec![t, f4.one()], vec![t * t, t]]);
        for twist in [-1, 0, 1] {
            let s = SemiLinMap::new(m.clone(), twist);
            let (k, i) = s.kernel_image();
            assert_eq!(k.len() + i.len(), 2);
            for kv in &k {
                assert!(s.apply(kv).iter().all(|a| a.is_zero()));
            }
        }
    }
}
