//! Dense matrices and subspaces over the cyclotomic scalars.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::cyclotomic::{CycScalar, Rat};

pub type CycVector = Vec<CycScalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycScalar>,
}

impl CycMatrix {
    pub fn zeros(rows: usize, cols: usize) -> CycMatrix {
        CycMatrix { rows, cols, data: vec![CycScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> CycMatrix {
        CycMatrix::scalar(n, &CycScalar::one())
    }

    pub fn scalar(n: usize, c: &CycScalar) -> CycMatrix {
        let mut m = CycMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycScalar>>) -> CycMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        CycMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> CycMatrix {
        CycMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| CycScalar::from_int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CycVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = CycMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> CycVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = CycScalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        self.zip_with(other, CycScalar::add)
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        self.zip_with(other, CycScalar::sub)
    }

    fn zip_with(&self, other: &CycMatrix, f: impl Fn(&CycScalar, &CycScalar) -> CycScalar) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> CycMatrix {
        CycMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn neg(&self) -> CycMatrix {
        CycMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(CycScalar::neg).collect() }
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Kronecker product; `self` indexes the most significant block.
    pub fn kron(&self, other: &CycMatrix) -> CycMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = CycMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a.mul(&other[(k, l)]);
                    }
                }
            }
        }
        out
    }

    /// Commutator AB - BA.
    pub fn commutator(&self, other: &CycMatrix) -> CycMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> CycScalar {
        (0..self.rows.min(self.cols)).fold(CycScalar::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn hstack(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows).map(|i| [self.row(i), other.row(i)].concat()).collect();
        CycMatrix::from_rows(rows)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let t = factor.mul(&m[(r, j)]);
                            m[(i, j)] = m[(i, j)].sub(&t);
                        }
                    }
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

    /// A basis of the right null space.
    pub fn kernel(&self) -> Vec<CycVector> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycScalar::zero(); self.cols];
                v[f] = CycScalar::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m[(r, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Some x with A·x = b, if one exists.
    pub fn solve(&self, b: &[CycScalar]) -> Option<CycVector> {
        assert_eq!(self.rows, b.len());
        let col = CycMatrix { rows: self.rows, cols: 1, data: b.to_vec() };
        let (m, pivots) = self.hstack(&col).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![CycScalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Coefficients c_0..c_n of det(xI - A), lowest degree first (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<CycScalar> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![CycScalar::zero(); n + 1];
        coeffs[n] = CycScalar::one();
        let mut m = CycMatrix::zeros(n, n);
        for k in 1..=n {
            m = self.mul(&m).add(&CycMatrix::scalar(n, &coeffs[n - k + 1]));
            let t = self.mul(&m).trace();
            coeffs[n - k] = t.mul_rat(&Rat::new(-1, k as i64));
        }
        coeffs
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl Index<(usize, usize)> for CycMatrix {
    type Output = CycScalar;
    fn index(&self, (i, j): (usize, usize)) -> &CycScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CycMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn vec_is_zero(v: &[CycScalar]) -> bool {
    v.iter().all(CycScalar::is_zero)
}

pub fn vec_add(a: &[CycScalar], b: &[CycScalar]) -> CycVector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[CycScalar], b: &[CycScalar]) -> CycVector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(a: &[CycScalar], c: &CycScalar) -> CycVector {
    a.iter().map(|x| x.mul(c)).collect()
}

/// A subspace of K^dim kept in echelon form for incremental membership tests.
///
/// Each stored row has a leading one at its pivot and zeros at every earlier
/// row's pivot, so reducing in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<CycVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, rows: vec![], pivots: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn basis(&self) -> &[CycVector] {
        &self.rows
    }

    /// Residue of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[CycScalar]) -> CycVector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x = x.sub(&c.mul(y));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        assert_eq!(v.len(), self.dim, "echelon vector dimension mismatch");
        if self.is_full() {
            return false;
        }
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[p].inv().expect("pivot is nonzero");
        self.rows.push(vec_scale(&r, &inv));
        self.pivots.push(p);
        true
    }
}
