//! Irreducible gl_d-modules from Young symmetrizers on tensor powers of ℂ^d.

use serde::Serialize;

use crate::cyclotomic::{CycScalar, Rat};
use crate::error::{Error, Result};
use crate::linalg::CycMatrix;

/// A finite-dimensional gl_d-module given by the matrices ρ(E_ij).
#[derive(Clone, Debug)]
pub struct GlDModule {
    d: usize,
    dim: usize,
    /// ρ(E_ij) stored at index i·d + j
    action: Vec<CycMatrix>,
    highest_weight: Vec<u32>,
    b: CycScalar,
}

#[derive(Serialize)]
pub struct GlDSummary {
    pub d: usize,
    pub dim: usize,
    pub lambda: Vec<u32>,
    pub b: CycScalar,
}

impl GlDModule {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn highest_weight(&self) -> &[u32] {
        &self.highest_weight
    }

    /// The scalar by which the identity matrix acts.
    pub fn b(&self) -> &CycScalar {
        &self.b
    }

    /// ρ(E_ij)
    pub fn e(&self, i: usize, j: usize) -> &CycMatrix {
        &self.action[i * self.d + j]
    }

    /// ρ(X) for a d×d matrix X = Σ x_ij E_ij.
    pub fn rho(&self, x: &[Vec<CycScalar>]) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.dim, self.dim);
        for i in 0..self.d {
            for j in 0..self.d {
                if !x[i][j].is_zero() {
                    out = out.add(&self.e(i, j).scale(&x[i][j]));
                }
            }
        }
        out
    }

    /// ρ(r uᵀ) for an integer vector r and scalar vector u.
    pub fn rho_outer(&self, r: &[i64], u: &[CycScalar]) -> CycMatrix {
        let mut out = CycMatrix::zeros(self.dim, self.dim);
        for (i, &ri) in r.iter().enumerate() {
            if ri == 0 {
                continue;
            }
            for (j, uj) in u.iter().enumerate() {
                if !uj.is_zero() {
                    out = out.add(&self.e(i, j).scale(&uj.mul_int(ri)));
                }
            }
        }
        out
    }

    /// Checks ρ([E_ij, E_kl]) = [ρ(E_ij), ρ(E_kl)] on all generator pairs.
    pub fn check_representation(&self) -> bool {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
                        let mut want = CycMatrix::zeros(self.dim, self.dim);
                        if j == k {
                            want = want.add(self.e(i, l));
                        }
                        if l == i {
                            want = want.sub(self.e(k, j));
                        }
                        if self.e(i, j).commutator(self.e(k, l)) != want {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn summary(&self) -> GlDSummary {
        GlDSummary { d: self.d, dim: self.dim, lambda: self.highest_weight.clone(), b: self.b.clone() }
    }
}

/// dim of the irreducible gl_d-module of highest weight λ (Weyl's formula).
pub fn weyl_dimension(lambda: &[u32], d: usize) -> u64 {
    let l: Vec<i64> = (0..d).map(|i| lambda.get(i).copied().unwrap_or(0) as i64).collect();
    let mut num = Rat::ONE;
    for i in 0..d {
        for j in i + 1..d {
            num = &num * &Rat::new(l[i] - l[j] + (j - i) as i64, (j - i) as i64);
        }
    }
    num.to_i64().expect("Weyl dimension is an integer") as u64
}

/// The irreducible gl_d-module with highest weight λ, with the identity matrix
/// acting as b (the sl_d action is unchanged by the shift).
pub fn young_module(lambda: &[u32], d: usize, b: &CycScalar) -> Result<GlDModule> {
    let lambda: Vec<u32> = lambda.iter().copied().filter(|&x| x > 0).collect();
    if d == 0 {
        return Err(Error::InvalidArgument("gl_d needs d >= 1".into()));
    }
    if lambda.len() > d {
        return Err(Error::InvalidArgument(format!("partition {lambda:?} has more than {d} parts")));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("{lambda:?} is not a partition")));
    }
    let k: usize = lambda.iter().map(|&x| x as usize).sum();
    if k > 6 || d.pow(k as u32) > 4096 {
        return Err(Error::InvalidArgument(format!("tensor power ({d})^{k} too large")));
    }
    let (basis, pivots) = symmetrizer_image(&lambda, d, k);
    let dim = basis.len();
    let shift = b.sub(&CycScalar::from_int(k as i64)).mul_rat(&Rat::new(1, d as i64));
    let mut action = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut m = CycMatrix::zeros(dim, dim);
            for (s, v) in basis.iter().enumerate() {
                let img = apply_elementary(v, i, j, d, k);
                // coordinates in an RREF basis are the entries at pivot positions
                for (t, &p) in pivots.iter().enumerate() {
                    m[(t, s)] = img[p].clone();
                }
            }
            if i == j {
                m = m.add(&CycMatrix::scalar(dim, &shift));
            }
            action.push(m);
        }
    }
    Ok(GlDModule { d, dim, action, highest_weight: lambda, b: b.clone() })
}

/// RREF basis of the image of c_λ on (ℂ^d)^{⊗k} and its pivot positions.
fn symmetrizer_image(lambda: &[u32], d: usize, k: usize) -> (Vec<Vec<CycScalar>>, Vec<usize>) {
    let size = d.pow(k as u32);
    if k == 0 {
        return (vec![vec![CycScalar::one()]], vec![0]);
    }
    // canonical tableau: rows of λ filled with 0..k in reading order
    let mut rows: Vec<Vec<usize>> = vec![];
    let mut next = 0;
    for &len in lambda {
        rows.push((next..next + len as usize).collect());
        next += len as usize;
    }
    let cols: Vec<Vec<usize>> = (0..lambda[0] as usize)
        .map(|c| rows.iter().filter(|r| r.len() > c).map(|r| r[c]).collect())
        .collect();
    let row_group = product_group(&rows, k);
    let col_group = product_group(&cols, k);

    let mut images = vec![];
    for x in 0..size {
        let digits = to_digits(x, d, k);
        let mut acc = vec![0i64; size];
        for (q, sign) in &col_group {
            let y = permute(&digits, q);
            for (p, _) in &row_group {
                let z = permute(&y, p);
                acc[from_digits(&z, d)] += sign;
            }
        }
        if acc.iter().any(|&c| c != 0) {
            images.push(acc.into_iter().map(CycScalar::from_int).collect::<Vec<_>>());
        }
    }
    let (r, pivots) = CycMatrix::from_rows(images).rref();
    let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    (basis, pivots)
}

/// E_ij acting on a vector of (ℂ^d)^{⊗k} by the Leibniz rule over tensor slots.
fn apply_elementary(v: &[CycScalar], i: usize, j: usize, d: usize, k: usize) -> Vec<CycScalar> {
    let mut out = vec![CycScalar::zero(); v.len()];
    for (x, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let digits = to_digits(x, d, k);
        for pos in 0..k {
            if digits[pos] == j {
                let mut y = digits.clone();
                y[pos] = i;
                let idx = from_digits(&y, d);
                out[idx] = out[idx].add(c);
            }
        }
    }
    out
}

fn to_digits(mut x: usize, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Moves the factor in slot i to slot perm[i].
fn permute(digits: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0; digits.len()];
    for (i, &x) in digits.iter().enumerate() {
        out[perm[i]] = x;
    }
    out
}

/// All permutations of 0..k preserving each block, with their signs.
fn product_group(blocks: &[Vec<usize>], k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut group = vec![((0..k).collect::<Vec<_>>(), 1i64)];
    for block in blocks {
        let mut next = vec![];
        for (perm, sign) in &group {
            for (sub, s) in permutations(block.len()) {
                let mut p = perm.clone();
                for (a, &b) in sub.iter().enumerate() {
                    p[block[a]] = perm[block[b]];
                }
                next.push((p, sign * s));
            }
        }
        group = next;
    }
    group
}

/// Permutations of 0..n with signs, by Heap-free recursive insertion.
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = vec![];
    for (p, s) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting n-1 at pos shifts it past (n-1-pos) elements
            let sign = if (n - 1 - pos).is_multiple_of(2) { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|(_, s)| s).sum::<i64>(), 0);
        for (p, s) in &perms {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(*s, if inversions % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn dimension_examples() {
        let one = CycScalar::one();
        assert_eq!(young_module(&[1], 3, &one).unwrap().dim(), 3);
        assert_eq!(young_module(&[1, 1], 2, &one).unwrap().dim(), 1);
        assert_eq!(young_module(&[2], 2, &one).unwrap().dim(), 3);
        assert!(young_module(&[1, 1, 1], 2, &one).is_err());
    }

    #[test]
    fn weyl_formula_agrees() {
        let b = CycScalar::from_int(2);
        for d in 1..=4usize {
            for lambda in [&[][..], &[1], &[2], &[1, 1], &[2, 1], &[3], &[1, 1, 1], &[2, 2], &[3, 1]] {
                if lambda.len() > d || d.pow(lambda.iter().sum::<u32>()) > 4096 {
                    continue;
                }
                let v = young_module(lambda, d, &b).unwrap();
                assert_eq!(v.dim() as u64, weyl_dimension(lambda, d), "λ = {lambda:?}, d = {d}");
                assert!(v.check_representation(), "λ = {lambda:?}, d = {d}");
            }
        }
    }

    #[test]
    fn identity_acts_by_b() {
        for b in [CycScalar::zero(), CycScalar::from_int(5), CycScalar::rational(1, 3)] {
            let v = young_module(&[2, 1], 3, &b).unwrap();
            let id = (0..3).fold(CycMatrix::zeros(v.dim(), v.dim()), |acc, i| acc.add(v.e(i, i)));
            assert_eq!(id, CycMatrix::scalar(v.dim(), &b));
        }
    }

    #[test]
    fn natural_module_is_standard() {
        let v = young_module(&[1], 2, &CycScalar::one()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let m = v.e(i, j);
                for a in 0..2 {
                    for c in 0..2 {
                        let want = (a == i && c == j) as i64;
                        assert_eq!(m[(a, c)], CycScalar::from_int(want));
                    }
                }
            }
        }
    }
}
