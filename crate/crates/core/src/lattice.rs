//! Integer lattices: Smith and Hermite forms, the radical Rad(f), the quotient Γ
//! and the normal form of a q-matrix.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::quantum_torus::QMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn diag(entries: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).map(<[i64]>::to_vec).take(self.rows).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0 {
                    for j in 0..other.cols {
                        out[(i, j)] += a * other[(k, j)];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<i128>> =
            (0..n).map(|i| (0..n).map(|j| self[(i, j)] as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            return 1;
        }
        (sign * m[n - 1][n - 1]) as i64
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs() == 1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_dst += c · row_src
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col_dst += c · col_src
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Smith normal form: returns (S, U, V) with U·A·V = S diagonal, d_1 | d_2 | ...,
/// and U, V unimodular.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s[(i, j)];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return (s, u, v) };
            if pi != t {
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }
            let p = s[(t, t)];
            let mut clean = true;
            for i in t + 1..m {
                let q = s[(i, t)].div_euclid(p);
                if q != 0 {
                    s.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                clean &= s[(i, t)] == 0;
            }
            for j in t + 1..n {
                let q = s[(t, j)].div_euclid(p);
                if q != 0 {
                    s.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= s[(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| s[(i, j)] % p != 0));
            if let Some(i) = bad {
                s.add_row(t, i, 1);
                u.add_row(t, i, 1);
                continue;
            }
            if p < 0 {
                s.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    (s, u, v)
}

/// Column Hermite form of a full-rank square lattice basis: upper triangular,
/// positive diagonal, 0 ≤ h_ij < h_ii for j > i. Spans the same lattice.
pub fn column_hermite_form(basis: &IntMatrix) -> IntMatrix {
    let d = basis.rows;
    assert_eq!(d, basis.cols);
    let mut h = basis.clone();
    for i in (0..d).rev() {
        for j in 0..i {
            while h[(i, j)] != 0 {
                let (a, b) = (h[(i, i)], h[(i, j)]);
                if a == 0 {
                    h.swap_cols(i, j);
                    continue;
                }
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                // [col_i, col_j] <- [x col_i + y col_j, -(b/g) col_i + (a/g) col_j]
                for r in 0..d {
                    let (ci, cj) = (h[(r, i)], h[(r, j)]);
                    h[(r, i)] = x * ci + y * cj;
                    h[(r, j)] = -(b / g) * ci + (a / g) * cj;
                }
            }
        }
        assert!(h[(i, i)] != 0, "lattice basis is not full rank");
        if h[(i, i)] < 0 {
            h.negate_col(i);
        }
        let p = h[(i, i)];
        for j in i + 1..d {
            let q = h[(i, j)].div_euclid(p);
            if q != 0 {
                h.add_col(j, i, -q);
            }
        }
    }
    h
}

/// The lattice Rad(f) with its triangular basis and the quotient data for Γ.
#[derive(Clone, Debug)]
pub struct RadicalData {
    d: usize,
    order: u64,
    xi_basis: IntMatrix,
    invariants_k: Vec<u64>,
    delta: Vec<Degree>,
}

impl RadicalData {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// L of the underlying q-matrix.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn xi_basis(&self) -> &IntMatrix {
        &self.xi_basis
    }

    pub fn invariants_k(&self) -> &[u64] {
        &self.invariants_k
    }

    pub fn z(&self) -> usize {
        self.invariants_k.len()
    }

    /// N = ∏ k_i.
    pub fn n(&self) -> u64 {
        self.invariants_k.iter().product()
    }

    /// Coset representatives of Γ, lexicographic within the box ∏[0, h_ii); 0 first.
    pub fn delta(&self) -> &[Degree] {
        &self.delta
    }

    pub fn gamma_order(&self) -> usize {
        self.delta.len()
    }

    /// ξ_l as a degree.
    pub fn xi(&self, l: usize) -> Degree {
        Degree::new(&self.xi_basis.column(l))
    }

    /// γ with r = Σ γ_i ξ_i, if r ∈ Rad(f).
    pub fn coords(&self, r: &Degree) -> Option<Vec<i64>> {
        let h = &self.xi_basis;
        let mut rest = r.as_slice().to_vec();
        let mut gamma = vec![0; self.d];
        for i in (0..self.d).rev() {
            let p = h[(i, i)];
            if rest[i] % p != 0 {
                return None;
            }
            let g = rest[i] / p;
            gamma[i] = g;
            for row in 0..=i {
                rest[row] -= g * h[(row, i)];
            }
        }
        Some(gamma)
    }

    pub fn contains(&self, r: &Degree) -> bool {
        let h = &self.xi_basis;
        let mut rest = *r;
        for i in (0..self.d).rev() {
            let p = h[(i, i)];
            if rest[i] % p != 0 {
                return false;
            }
            let g = rest[i] / p;
            if g != 0 {
                for row in 0..=i {
                    rest = rest.with(row, rest[row] - g * h[(row, i)]);
                }
            }
        }
        true
    }

    /// The representative in Δ of n + Rad(f).
    pub fn coset_rep(&self, n: &Degree) -> Degree {
        let h = &self.xi_basis;
        let mut rest = *n;
        for i in (0..self.d).rev() {
            let g = rest[i].div_euclid(h[(i, i)]);
            if g != 0 {
                for row in 0..=i {
                    rest = rest.with(row, rest[row] - g * h[(row, i)]);
                }
            }
        }
        rest
    }

    /// Position of the coset of n in [`RadicalData::delta`].
    pub fn coset_index(&self, n: &Degree) -> usize {
        let rep = self.coset_rep(n);
        let mut idx = 0usize;
        for i in 0..self.d {
            idx = idx * self.xi_basis[(i, i)] as usize + rep[i] as usize;
        }
        idx
    }

    /// ‖r‖ = Σ |γ_i|.
    pub fn xi_norm(&self, r: &Degree) -> Result<i64> {
        let gamma = self.coords(r).ok_or_else(|| Error::NotInRadical(r.to_string()))?;
        Ok(gamma.iter().map(|g| g.abs()).sum())
    }

    /// Σ γ_i ξ_i.
    pub fn from_coords(&self, gamma: &[i64]) -> Degree {
        Degree::new(&self.xi_basis.mul_vec(gamma))
    }

    /// Every r ∈ Rad(f) with ‖r‖ ≤ max_norm, ordered by γ lexicographically.
    pub fn points_by_norm(&self, max_norm: i64) -> Vec<Degree> {
        Degree::window(self.d, max_norm)
            .into_iter()
            .filter(|g| g.l1_norm() <= max_norm)
            .map(|g| self.from_coords(g.as_slice()))
            .collect()
    }

    /// Every r ∈ Rad(f) with ‖r‖_∞ ≤ radius.
    pub fn points_in_box(&self, radius: i64) -> Vec<Degree> {
        Degree::window(self.d, radius).into_iter().filter(|n| self.contains(n)).collect()
    }
}

impl Serialize for RadicalData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("d", &self.d)?;
        map.serialize_entry("xi_basis", &self.xi_basis)?;
        map.serialize_entry("invariants_k", &self.invariants_k)?;
        map.serialize_entry("z", &self.z())?;
        map.serialize_entry("N", &self.n())?;
        map.serialize_entry("delta", &self.delta)?;
        map.end()
    }
}

/// Rad(f) = {n : Aᵀn ≡ 0 mod L} from the kernel of [Aᵀ | L·I].
pub fn radical_basis(q: &QMatrix) -> Result<RadicalData> {
    let d = q.dim();
    let l = q.order() as i64;
    let mut system = IntMatrix::zeros(d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            system[(i, j)] = q.exponent(j, i);
        }
        system[(i, d + i)] = l;
    }
    let (_, _, v) = smith_normal_form(&system);
    // the last d columns of V span the integer kernel; their top halves span Rad(f)
    let mut gens = IntMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            gens[(i, j)] = v[(i, d + j)];
        }
    }
    let xi_basis = column_hermite_form(&gens);
    let (snf, _, _) = smith_normal_form(&xi_basis);
    let mut divisors: Vec<u64> =
        (0..d).map(|i| snf[(i, i)].unsigned_abs()).filter(|&x| x > 1).collect();
    divisors.sort_unstable_by(|a, b| b.cmp(a));
    if !divisors.len().is_multiple_of(2) || divisors.chunks(2).any(|c| c[0] != c[1]) {
        return Err(Error::InvalidQ(format!("Γ has unpaired invariant factors {divisors:?}")));
    }
    let invariants_k: Vec<u64> = divisors.chunks(2).map(|c| c[0]).collect();
    let hi: Vec<i64> = (0..d).map(|i| xi_basis[(i, i)] - 1).collect();
    let delta = Degree::boxed(&vec![0; d], &hi);
    Ok(RadicalData { d, order: q.order(), xi_basis, invariants_k, delta })
}

/// Coset representatives of Rad(f) in ℤ^d.
pub fn gamma_cosets(rad: &RadicalData) -> Vec<Degree> {
    rad.delta.clone()
}

/// ‖r‖ for r ∈ Rad(f).
pub fn xi_norm(r: &Degree, rad: &RadicalData) -> Result<i64> {
    rad.xi_norm(r)
}

/// Brings q to normal form by a skew-symmetric Smith reduction of the exponent
/// matrix: returns (q_std, P) with Pᵀ·A·P ≡ A_std (mod L), i.e.
/// f_std(n, m) = f_q(P·n, P·m).
pub fn normalize_q(q: &QMatrix) -> Result<(QMatrix, IntMatrix)> {
    let d = q.dim();
    let l = q.order() as i64;
    let a = IntMatrix::from_rows(&q.exponent_lift());
    let mut b = a.clone();
    let mut p = IntMatrix::identity(d);

    // congruence operations B -> EᵀBE, tracked in P -> PE
    let swap = |b: &mut IntMatrix, p: &mut IntMatrix, i: usize, j: usize| {
        if i != j {
            b.swap_rows(i, j);
            b.swap_cols(i, j);
            p.swap_cols(i, j);
        }
    };
    let addc = |b: &mut IntMatrix, p: &mut IntMatrix, dst: usize, src: usize, c: i64| {
        if c != 0 {
            b.add_row(dst, src, c);
            b.add_col(dst, src, c);
            p.add_col(dst, src, c);
        }
    };

    let mut pivots = vec![];
    let mut t = 0;
    'blocks: while t + 1 < d {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..d {
                for j in t..i {
                    let x = b[(i, j)];
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < b[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else { break 'blocks };
            swap(&mut b, &mut p, j, t);
            let i = if i == t { j } else { i };
            swap(&mut b, &mut p, i, t + 1);
            let a_t = b[(t + 1, t)];
            let mut clean = true;
            for k in t + 2..d {
                let q1 = b[(k, t)] / a_t;
                addc(&mut b, &mut p, k, t + 1, -q1);
                let q2 = b[(k, t + 1)] / a_t;
                addc(&mut b, &mut p, k, t, q2);
                clean &= b[(k, t)] == 0 && b[(k, t + 1)] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 2..d).find_map(|i| (t + 2..d).find(|&j| b[(i, j)] % a_t != 0));
            if let Some(j) = bad {
                addc(&mut b, &mut p, t, j, 1);
                continue;
            }
            if a_t < 0 {
                swap(&mut b, &mut p, t, t + 1);
            }
            pivots.push(b[(t + 1, t)]);
            t += 2;
            break;
        }
    }

    let mut exps = vec![0i64; d * d];
    for (t, &a_t) in pivots.iter().enumerate() {
        let e = a_t.rem_euclid(l);
        exps[(2 * t + 1) * d + 2 * t] = e;
        exps[2 * t * d + 2 * t + 1] = (-e).rem_euclid(l);
    }
    let q_std = QMatrix::from_exponents(d, q.order(), exps)?;
    debug_assert!(conjugates_to(&a, &p, &q_std, l));
    if !q_std.is_normal_form() {
        return Err(Error::NotNormalForm(format!("reduction of {q:?} produced {q_std:?}")));
    }
    Ok((q_std, p))
}

/// Whether Pᵀ·A·P agrees with the exponent lift of `target` modulo L.
fn conjugates_to(a: &IntMatrix, p: &IntMatrix, target: &QMatrix, l: i64) -> bool {
    let conj = p.transpose().mul(a).mul(p);
    let scale = l / target.order() as i64;
    let lift = target.exponent_lift();
    let d = a.rows();
    (0..d).all(|i| (0..d).all(|j| (conj[(i, j)] - scale * lift[i][j]).rem_euclid(l) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycScalar;

    fn brute_radical(q: &QMatrix, n: &Degree, radius: i64) -> bool {
        Degree::window(q.dim(), radius).iter().all(|m| q.f_exp(n, m) == 0)
    }

    #[test]
    fn snf_examples() {
        let id = IntMatrix::identity(3);
        let (s, u, v) = smith_normal_form(&id);
        assert_eq!((s.clone(), u, v), (id.clone(), id.clone(), id));
        let a = IntMatrix::diag(&[2, 3]);
        let (s, u, v) = smith_normal_form(&a);
        assert_eq!(s, IntMatrix::diag(&[1, 6]));
        assert_eq!(u.mul(&a).mul(&v), s);
        let zero = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&zero).0, zero);
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let (s, u, v) = smith_normal_form(&a);
        assert_eq!(u.mul(&a).mul(&v), s);
        assert_eq!(s, IntMatrix::diag(&[2, 6, 12]));
        assert!(u.is_unimodular() && v.is_unimodular());
    }

    #[test]
    fn radical_examples() {
        let rad = radical_basis(&QMatrix::standard(2, &[4]).unwrap()).unwrap();
        assert_eq!(rad.xi_basis(), &IntMatrix::diag(&[4, 4]));
        assert_eq!((rad.invariants_k(), rad.z(), rad.n()), (&[4u64][..], 1, 4));

        let rad = radical_basis(&QMatrix::standard(3, &[2]).unwrap()).unwrap();
        assert_eq!(rad.xi_basis(), &IntMatrix::diag(&[2, 2, 1]));

        let rad = radical_basis(&QMatrix::trivial(3)).unwrap();
        assert_eq!(rad.xi_basis(), &IntMatrix::identity(3));
        assert_eq!((rad.n(), rad.gamma_order()), (1, 1));
    }

    #[test]
    fn cosets() {
        let rad = radical_basis(&QMatrix::standard(2, &[2]).unwrap()).unwrap();
        let reps: Vec<Vec<i64>> = gamma_cosets(&rad).iter().map(|d| d.as_slice().to_vec()).collect();
        assert_eq!(reps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let rad = radical_basis(&QMatrix::standard(2, &[3]).unwrap()).unwrap();
        assert_eq!(rad.gamma_order(), 9);
        // brute force: the points of [0,3)² are pairwise incongruent mod 3ℤ²
        for a in rad.delta() {
            for b in rad.delta() {
                assert_eq!(a == b, rad.contains(&(*a - *b)));
            }
        }
        for n in Degree::window(2, 5) {
            let rep = rad.coset_rep(&n);
            assert!(rad.contains(&(n - rep)));
            assert_eq!(rad.delta()[rad.coset_index(&n)], rep);
        }
    }

    #[test]
    fn norm_examples() {
        let rad = radical_basis(&QMatrix::standard(2, &[4]).unwrap()).unwrap();
        assert_eq!(rad.xi_norm(&Degree::zero(2)).unwrap(), 0);
        assert_eq!(rad.xi_norm(&Degree::new(&[4, 8])).unwrap(), 3);
        assert!(matches!(rad.xi_norm(&Degree::new(&[1, 0])), Err(Error::NotInRadical(_))));
    }

    #[test]
    fn non_normal_radical_matches_brute_force() {
        // q_21 = ζ_6, q_31 = ζ_6^2, q_32 = ζ_6^3
        let q = QMatrix::from_exponents(3, 6, vec![0, 5, 4, 1, 0, 3, 2, 3, 0]).unwrap();
        let rad = radical_basis(&q).unwrap();
        for n in Degree::window(3, 4) {
            assert_eq!(rad.contains(&n), brute_radical(&q, &n, 6), "at {n}");
        }
        assert_eq!(rad.gamma_order() as u64, rad.n() * rad.n());
        assert_eq!(rad.xi_basis().det() as u64, rad.n() * rad.n());
    }

    #[test]
    fn normalize_examples() {
        let q = QMatrix::standard(4, &[4, 2]).unwrap();
        let (std, p) = normalize_q(&q).unwrap();
        assert_eq!(std.normal_form_orders(), Some(vec![4, 2]));
        assert!(p.is_unimodular());

        let z4 = CycScalar::root_of_unity(3, 4);
        let one = CycScalar::one();
        let q = QMatrix::from_entries(&[vec![one.clone(), z4.inv().unwrap()], vec![z4, one.clone()]]).unwrap();
        let (std, p) = normalize_q(&q).unwrap();
        assert_eq!(std.normal_form_orders(), Some(vec![4]));
        for n in Degree::window(2, 3) {
            for m in Degree::window(2, 3) {
                let pn = Degree::new(&p.mul_vec(n.as_slice()));
                let pm = Degree::new(&p.mul_vec(m.as_slice()));
                assert_eq!(std.f_form(&n, &m), q.f_form(&pn, &pm));
            }
        }

        let (std, p) = normalize_q(&QMatrix::trivial(3)).unwrap();
        assert_eq!(std, QMatrix::trivial(3));
        assert_eq!(p, IntMatrix::identity(3));
    }

    #[test]
    fn normalize_mixed_orders() {
        // orders 2 and 3 combine into a single block of order 6
        let q = QMatrix::from_exponents(4, 6, vec![0, 3, 0, 0, 3, 0, 0, 0, 0, 0, 0, 4, 0, 0, 2, 0]).unwrap();
        let (std, p) = normalize_q(&q).unwrap();
        assert_eq!(std.normal_form_orders(), Some(vec![6]));
        assert!(p.is_unimodular());
        for n in Degree::window(4, 1) {
            for m in Degree::window(4, 1) {
                let pn = Degree::new(&p.mul_vec(n.as_slice()));
                let pm = Degree::new(&p.mul_vec(m.as_slice()));
                assert_eq!(std.f_exp(&n, &m) * (6 / std.order() as i64), q.f_exp(&pn, &pm));
            }
        }
    }
}
