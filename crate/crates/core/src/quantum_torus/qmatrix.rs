use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::CycScalar;
use crate::degree::{Degree, MAX_DIM};
use crate::error::{Error, Result};

/// A rational quantum-torus parameter matrix.
///
/// Entries are stored as exponents: q_ij = ζ_L^{e_ij} with L the least common
/// multiple of the entry orders, so σ and f reduce to integer arithmetic mod L.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    d: usize,
    order: u64,
    exps: Vec<i64>,
}

impl QMatrix {
    /// Validates a matrix of roots of unity.
    pub fn from_entries(entries: &[Vec<CycScalar>]) -> Result<QMatrix> {
        let d = entries.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidQ(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        if entries.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidQ("q must be a square matrix".into()));
        }
        let mut roots = Vec::with_capacity(d * d);
        for (i, row) in entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let r = x.as_root_of_unity().ok_or_else(|| {
                    Error::InvalidQ(format!("q[{}][{}] = {x} is not a root of unity", i + 1, j + 1))
                })?;
                roots.push(r);
            }
        }
        let order = roots.iter().fold(1u64, |acc, &(_, m)| acc.lcm(&m));
        let exps = roots.iter().map(|&(k, m)| (k * (order / m)) as i64).collect();
        QMatrix::from_exponents(d, order, exps)
    }

    /// q_ij = ζ_order^{exps[i·d + j]}.
    pub fn from_exponents(d: usize, order: u64, exps: Vec<i64>) -> Result<QMatrix> {
        if order == 0 || d == 0 || d > MAX_DIM || exps.len() != d * d {
            return Err(Error::InvalidQ("malformed exponent data".into()));
        }
        let l = order as i64;
        let mut exps: Vec<i64> = exps.into_iter().map(|e| e.rem_euclid(l)).collect();
        for i in 0..d {
            if exps[i * d + i] != 0 {
                return Err(Error::InvalidQ(format!("q[{0}][{0}] must be 1", i + 1)));
            }
            for j in 0..i {
                if (exps[i * d + j] + exps[j * d + i]) % l != 0 {
                    return Err(Error::InvalidQ(format!(
                        "q[{}][{}] is not the inverse of q[{}][{}]",
                        j + 1,
                        i + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        // shrink to the exact lcm of the entry orders
        let g = exps.iter().fold(l, |acc, &e| acc.gcd(&e));
        let order = (l / g) as u64;
        for e in &mut exps {
            *e /= g;
        }
        Ok(QMatrix { d, order, exps })
    }

    /// All entries 1: the commutative torus of the Witt case.
    pub fn trivial(d: usize) -> QMatrix {
        QMatrix { d, order: 1, exps: vec![0; d * d] }
    }

    /// The normal form with q_{2i,2i-1} = ζ_{k_i} for the given orders.
    pub fn standard(d: usize, ks: &[u64]) -> Result<QMatrix> {
        if 2 * ks.len() > d {
            return Err(Error::InvalidQ(format!("{} blocks do not fit in dimension {d}", ks.len())));
        }
        if ks.contains(&0) {
            return Err(Error::InvalidQ("block orders must be positive".into()));
        }
        let order = ks.iter().fold(1u64, |acc, k| acc.lcm(k));
        let mut exps = vec![0i64; d * d];
        for (t, &k) in ks.iter().enumerate() {
            let e = (order / k) as i64;
            exps[(2 * t + 1) * d + 2 * t] = e;
            exps[2 * t * d + 2 * t + 1] = order as i64 - e;
        }
        QMatrix::from_exponents(d, order, exps)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// L, the lcm of the orders of all entries.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.exps[i * self.d + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> CycScalar {
        CycScalar::root_of_unity(self.exponent(i, j), self.order)
    }

    pub fn entries(&self) -> Vec<Vec<CycScalar>> {
        (0..self.d).map(|i| (0..self.d).map(|j| self.entry(i, j)).collect()).collect()
    }

    /// Integer antisymmetric lift of the exponent matrix, a_ij ∈ [0, L) for i > j.
    pub fn exponent_lift(&self) -> Vec<Vec<i64>> {
        let d = self.d;
        let mut a = vec![vec![0; d]; d];
        for i in 0..d {
            for j in 0..i {
                a[i][j] = self.exponent(i, j);
                a[j][i] = -self.exponent(i, j);
            }
        }
        a
    }

    /// Exponent of σ(n,m) = ∏_{i<j} q_ji^{n_j m_i}, in [0, L).
    pub fn sigma_exp(&self, n: &Degree, m: &Degree) -> i64 {
        let (n, m) = (n.as_slice(), m.as_slice());
        let mut acc = 0i64;
        for j in 1..self.d {
            if n[j] == 0 {
                continue;
            }
            let row = &self.exps[j * self.d..j * self.d + j];
            let mut s = 0i64;
            for (i, &e) in row.iter().enumerate() {
                s += e * m[i];
            }
            acc += n[j] * s;
        }
        acc.rem_euclid(self.order as i64)
    }

    /// Exponent of f(n,m) = ∏_{i,j} q_ji^{n_j m_i}, in [0, L).
    pub fn f_exp(&self, n: &Degree, m: &Degree) -> i64 {
        let (n, m) = (n.as_slice(), m.as_slice());
        let mut acc = 0i64;
        for j in 0..self.d {
            if n[j] == 0 {
                continue;
            }
            let row = &self.exps[j * self.d..(j + 1) * self.d];
            let s: i64 = row.iter().zip(m).map(|(e, x)| e * x).sum();
            acc += n[j] * s;
        }
        acc.rem_euclid(self.order as i64)
    }

    pub fn sigma(&self, n: &Degree, m: &Degree) -> CycScalar {
        CycScalar::root_of_unity(self.sigma_exp(n, m), self.order)
    }

    pub fn f_form(&self, n: &Degree, m: &Degree) -> CycScalar {
        CycScalar::root_of_unity(self.f_exp(n, m), self.order)
    }

    /// The block orders k_1, ..., k_z when q is in normal form.
    pub fn normal_form_orders(&self) -> Option<Vec<u64>> {
        let d = self.d;
        let l = self.order as i64;
        let mut ks = vec![];
        let mut trivial_tail = false;
        for i in 0..d {
            for j in 0..i {
                let e = self.exponent(i, j);
                let block = i == j + 1 && j % 2 == 0;
                if !block && e != 0 {
                    return None;
                }
                if block {
                    let k = (l / l.gcd(&e)) as u64;
                    if k == 1 {
                        trivial_tail = true;
                    } else {
                        if trivial_tail || ks.last().is_some_and(|&prev: &u64| prev % k != 0) {
                            return None;
                        }
                        ks.push(k);
                    }
                }
            }
        }
        Some(ks)
    }

    pub fn is_normal_form(&self) -> bool {
        self.normal_form_orders().is_some()
    }

    /// The block generators q_i of a normal-form matrix.
    pub fn block_roots(&self) -> Vec<CycScalar> {
        let z = self.normal_form_orders().map_or(0, |k| k.len());
        (0..z).map(|t| self.entry(2 * t + 1, 2 * t)).collect()
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix(L={}, exps=[", self.order)?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.d).map(|j| self.exponent(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "])")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<QMatrix, D::Error> {
        let entries = Vec::<Vec<CycScalar>>::deserialize(d)?;
        QMatrix::from_entries(&entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(num: i64, den: u64) -> CycScalar {
        CycScalar::root_of_unity(num, den)
    }

    #[test]
    fn validation() {
        let one = CycScalar::one();
        let ok = QMatrix::from_entries(&[vec![one.clone(), z(3, 4)], vec![z(1, 4), one.clone()]]).unwrap();
        assert_eq!(ok.order(), 4);
        assert_eq!(ok.exponent(1, 0), 1);
        let asym = QMatrix::from_entries(&[vec![one.clone(), z(1, 4)], vec![z(1, 4), one.clone()]]);
        assert!(matches!(asym, Err(Error::InvalidQ(_))));
        let diag = QMatrix::from_entries(&[vec![z(1, 2), one.clone()], vec![one.clone(), one.clone()]]);
        assert!(diag.is_err());
        let not_root = QMatrix::from_entries(&[
            vec![one.clone(), CycScalar::from_int(2)],
            vec![CycScalar::rational(1, 2), one.clone()],
        ]);
        assert!(not_root.is_err());
    }

    #[test]
    fn order_shrinks_to_lcm() {
        let q = QMatrix::from_exponents(2, 12, vec![0, 9, 3, 0]).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(1, 0), 1);
    }

    #[test]
    fn sigma_examples() {
        let q = QMatrix::standard(2, &[4]).unwrap();
        let d = |a: i64, b: i64| Degree::new(&[a, b]);
        assert!(q.sigma(&d(3, -2), &d(0, 0)).is_one());
        assert_eq!(q.sigma(&d(1, 1), &d(1, 0)), z(1, 4));
        assert_eq!(q.sigma(&d(0, 1), &d(1, 0)), z(1, 4));
        assert!(q.sigma(&d(1, 0), &d(0, 1)).is_one());
        assert_eq!(q.f_form(&d(1, 0), &d(0, 1)), z(-1, 4));
        assert!(q.f_form(&d(2, 5), &d(2, 5)).is_one());
    }

    #[test]
    fn normal_form_detection() {
        assert_eq!(QMatrix::standard(4, &[4, 2]).unwrap().normal_form_orders(), Some(vec![4, 2]));
        assert_eq!(QMatrix::standard(3, &[2]).unwrap().normal_form_orders(), Some(vec![2]));
        assert_eq!(QMatrix::trivial(2).normal_form_orders(), Some(vec![]));
        // divisibility fails for (2, 4)
        assert_eq!(QMatrix::standard(4, &[2, 4]).unwrap().normal_form_orders(), None);
        let off = QMatrix::from_exponents(3, 2, vec![0, 0, 1, 0, 0, 0, 1, 0, 0]).unwrap();
        assert!(!off.is_normal_form());
    }

    #[test]
    fn serde_round_trip() {
        let q = QMatrix::standard(2, &[4]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[[[0,1],[3,4]],[[1,4],[0,1]]]");
        assert_eq!(serde_json::from_str::<QMatrix>(&s).unwrap(), q);
    }
}
