//! The realization ℂ_q/𝓘 ≅ gl_N: the generators X_{2i-1}, X_{2i}, the monomials
//! X^n, the loop embedding and Γ-graded gl_N-modules.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::linalg::CycMatrix;
use crate::quantum_torus::{TorusElement, Torus};

pub type GlElement = CycMatrix;

/// X_{2i-1} = diag(1, q, ..., q^{k-1}) and X_{2i} = E_12 + E_23 + ... + E_k1.
pub fn block_generators(k: usize, q_i: &CycScalar) -> Result<(GlElement, GlElement)> {
    if q_i.multiplicative_order() != Some(k as u64) {
        return Err(Error::InvalidArgument(format!("{q_i} does not have order {k}")));
    }
    let mut odd = CycMatrix::zeros(k, k);
    let mut even = CycMatrix::zeros(k, k);
    let mut p = CycScalar::one();
    for j in 0..k {
        odd[(j, j)] = p.clone();
        p = p.mul(q_i);
        even[(j, (j + 1) % k)] = CycScalar::one();
    }
    Ok((odd, even))
}

/// A matrix with exactly one nonzero entry per row, of the form ζ_L^phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    order: u64,
    /// row j holds ζ^{phase[j]} in column col[j]
    col: Vec<u32>,
    phase: Vec<u32>,
}

impl MonomialMatrix {
    pub fn identity(n: usize, order: u64) -> MonomialMatrix {
        MonomialMatrix { order, col: (0..n as u32).collect(), phase: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.col.len()
    }

    pub fn is_identity(&self) -> bool {
        self.col.iter().enumerate().all(|(j, &c)| c as usize == j) && self.phase.iter().all(|&p| p == 0)
    }

    pub fn entry(&self, row: usize) -> (usize, u64) {
        (self.col[row] as usize, self.phase[row] as u64)
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.order, other.order);
        let l = self.order as u32;
        let mut col = Vec::with_capacity(self.size());
        let mut phase = Vec::with_capacity(self.size());
        for (c, p) in self.col.iter().zip(&self.phase) {
            let c2 = other.col[*c as usize];
            col.push(c2);
            phase.push((p + other.phase[*c as usize]) % l);
        }
        MonomialMatrix { order: self.order, col, phase }
    }

    /// Some e with self = ζ^e · other, if the two differ by a root-of-unity factor.
    pub fn ratio_exponent(&self, other: &MonomialMatrix) -> Option<u64> {
        if self.col != other.col || self.order != other.order {
            return None;
        }
        let l = self.order as u32;
        let e = (self.phase.first()? + l - other.phase[0]) % l;
        self.phase.iter().zip(&other.phase).all(|(a, b)| (a + l - b) % l == e).then_some(e as u64)
    }

    pub fn to_dense(&self) -> CycMatrix {
        let n = self.size();
        let mut m = CycMatrix::zeros(n, n);
        for j in 0..n {
            m[(j, self.col[j] as usize)] = CycScalar::root_of_unity(self.phase[j] as i64, self.order);
        }
        m
    }
}

/// X^n = ⊗_i X_{2i-1}^{n_{2i-1}} X_{2i}^{n_{2i}}, block 1 most significant.
///
/// Row j of A^a B^b within a block is ζ^{c·a·j} in column (j + b) mod k, where
/// q_i = ζ_L^c.
pub fn x_power_monomial(n: &Degree, torus: &Torus) -> MonomialMatrix {
    let q = torus.q();
    let ks = torus.rad().invariants_k();
    let l = q.order() as i64;
    let mut out = MonomialMatrix::identity(1, q.order());
    for (i, &k) in ks.iter().enumerate() {
        let k = k as i64;
        let c = q.exponent(2 * i + 1, 2 * i);
        let (a, b) = (n[2 * i], n[2 * i + 1]);
        let size = out.size();
        let mut col = Vec::with_capacity(size * k as usize);
        let mut phase = Vec::with_capacity(size * k as usize);
        for r in 0..size {
            for j in 0..k {
                col.push(out.col[r] * k as u32 + (j + b).rem_euclid(k) as u32);
                phase.push(((out.phase[r] as i64 + c * a.rem_euclid(k) * j) % l) as u32);
            }
        }
        out = MonomialMatrix { order: q.order(), col, phase };
    }
    out
}

/// X^n as a dense matrix, built from the block generators by matrix products.
pub fn x_power(n: &Degree, torus: &Torus) -> GlElement {
    let q = torus.q();
    let ks = torus.rad().invariants_k();
    let mut out = CycMatrix::identity(1);
    for (i, &k) in ks.iter().enumerate() {
        let (odd, even) = block_generators(k as usize, &q.entry(2 * i + 1, 2 * i))
            .expect("normal-form block generator has the block order");
        let block = mat_pow(&odd, n[2 * i], k).mul(&mat_pow(&even, n[2 * i + 1], k));
        out = out.kron(&block);
    }
    out
}

/// m^e for a matrix of finite order k (negative exponents wrap around).
fn mat_pow(m: &CycMatrix, e: i64, k: u64) -> CycMatrix {
    let e = e.rem_euclid(k as i64);
    let mut out = CycMatrix::identity(m.rows());
    for _ in 0..e {
        out = out.mul(m);
    }
    out
}

/// Σ c_n t^n ↦ Σ c_n X^n ⊗ x^n.
pub fn loop_embed(a: &TorusElement, torus: &Torus) -> Vec<(GlElement, Degree)> {
    a.terms().iter().map(|(n, c)| (x_power(n, torus).scale(c), *n)).collect()
}

/// A finite-dimensional Γ-graded gl_N-module, given by the action of each X^δ, δ ∈ Δ.
#[derive(Clone, Debug)]
pub struct GradedGlModule {
    n: usize,
    dim: usize,
    /// coset index (position in Δ) of each basis vector
    grading: Vec<usize>,
    /// action of X^δ, indexed by the position of δ in Δ
    action: Vec<CycMatrix>,
}

impl GradedGlModule {
    /// Builds and validates a module; `action[i]` is the action of X^{Δ[i]}.
    pub fn new(torus: &Torus, dim: usize, grading: Vec<usize>, action: Vec<CycMatrix>) -> Result<GradedGlModule> {
        if !torus.q().is_normal_form() {
            return Err(Error::NotNormalForm("graded gl_N-modules need q in normal form".into()));
        }
        let n = torus.rad().n() as usize;
        let gamma = torus.rad().gamma_order();
        if grading.len() != dim || grading.iter().any(|&g| g >= gamma) {
            return Err(Error::InvalidModule("grading must assign a coset of Γ to every basis vector".into()));
        }
        if action.len() != gamma || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidModule(format!("need one {dim}x{dim} action matrix per coset of Γ")));
        }
        let w = GradedGlModule { n, dim, grading, action };
        w.validate(torus)?;
        Ok(w)
    }

    fn validate(&self, torus: &Torus) -> Result<()> {
        let rad = torus.rad();
        if !self.action[0].is_identity() {
            return Err(Error::InvalidModule("the identity matrix E does not act as the identity".into()));
        }
        for (a, da) in rad.delta().iter().enumerate() {
            let m = &self.action[a];
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if !m[(i, j)].is_zero() && self.grading[i] != rad.coset_index(&(*da + rad.delta()[self.grading[j]])) {
                        return Err(Error::InvalidModule(format!(
                            "X^{da} does not map the component of basis vector {j} into the expected component"
                        )));
                    }
                }
            }
        }
        for (a, da) in rad.delta().iter().enumerate() {
            for (b, db) in rad.delta().iter().enumerate().skip(a + 1) {
                let lhs = self.action[a].commutator(&self.action[b]);
                let c = torus.commutator_coeff(da, db);
                let rhs = self.action[rad.coset_index(&(*da + *db))].scale(&c);
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "[X^{da}, X^{db}] is not represented by the commutator of the action matrices"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The one-dimensional module of gl_1 (only for N = 1).
    pub fn trivial(torus: &Torus) -> Result<GradedGlModule> {
        if torus.rad().n() != 1 {
            return Err(Error::InvalidModule("the trivial W requires N = 1".into()));
        }
        GradedGlModule::new(torus, 1, vec![0], vec![CycMatrix::identity(1)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    /// Basis vectors lying in W_c for the coset with index c.
    pub fn component(&self, coset: usize) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.grading[i] == coset).collect()
    }

    pub fn component_dim(&self, coset: usize) -> usize {
        self.grading.iter().filter(|&&g| g == coset).count()
    }

    /// Action of X^n (which only depends on n modulo Rad(f)).
    pub fn action(&self, n: &Degree, torus: &Torus) -> &CycMatrix {
        &self.action[torus.rad().coset_index(n)]
    }

    /// The block of X^s mapping W_from into W_{from + s}.
    pub fn action_block(&self, s: &Degree, from: usize, torus: &Torus) -> CycMatrix {
        let rad = torus.rad();
        let to = rad.coset_index(&(rad.delta()[from] + *s));
        let m = self.action(s, torus);
        let rows = self.component(to);
        let cols = self.component(from);
        CycMatrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect())
    }

    pub fn from_spec(spec: &GradedGlSpec, torus: &Torus) -> Result<GradedGlModule> {
        let rad = torus.rad();
        if spec.n as u64 != rad.n() {
            return Err(Error::InvalidModule(format!("W is declared for N = {} but N = {}", spec.n, rad.n())));
        }
        let mut action: Vec<Option<CycMatrix>> = vec![None; rad.gamma_order()];
        for (key, rows) in &spec.action {
            let coords: std::result::Result<Vec<i64>, _> =
                key.trim_matches(|c| c == '[' || c == ']').split(',').map(|x| x.trim().parse::<i64>()).collect();
            let coords = coords.map_err(|_| Error::InvalidModule(format!("bad degree key {key:?}")))?;
            let deg = Degree::try_new(&coords)?;
            torus.check_degree(&deg).map_err(|e| Error::InvalidModule(e.to_string()))?;
            if rows.iter().any(|r| r.len() != spec.dim) || rows.len() != spec.dim {
                return Err(Error::InvalidModule(format!("action of X^{deg} is not {0}x{0}", spec.dim)));
            }
            let m = CycMatrix::from_rows(rows.clone());
            // X^n = X^{n mod Rad(f)}, so a non-representative key is translated to its coset
            let idx = rad.coset_index(&deg);
            if action[idx].as_ref().is_some_and(|prev| prev != &m) {
                return Err(Error::InvalidModule(format!("conflicting actions for the coset of {deg}")));
            }
            action[idx] = Some(m);
        }
        let action: Option<Vec<CycMatrix>> = action.into_iter().collect();
        let action = action.ok_or_else(|| Error::InvalidModule("action must be given for every coset of Γ".into()))?;
        GradedGlModule::new(torus, spec.dim, spec.grading.clone(), action)
    }

    /// Brute-force graded irreducibility: every homogeneous basis vector generates W.
    pub fn is_graded_irreducible(&self) -> bool {
        use crate::linalg::Echelon;
        for start in 0..self.dim {
            let mut span = Echelon::new(self.dim);
            let mut e = vec![CycScalar::zero(); self.dim];
            e[start] = CycScalar::one();
            let mut frontier = vec![e];
            span.insert(&frontier[0]);
            while let Some(v) = frontier.pop() {
                for m in &self.action {
                    let w = m.mul_vec(&v);
                    if span.insert(&w) {
                        frontier.push(w);
                    }
                }
            }
            if !span.is_full() {
                return false;
            }
        }
        true
    }
}

/// JSON form of a user-supplied W.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedGlSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub grading: Vec<usize>,
    pub action: BTreeMap<String, Vec<Vec<CycScalar>>>,
}

/// W = gl_N under left multiplication, with W_δ = ℂX^δ.
pub fn left_regular_module(torus: &Torus) -> Result<GradedGlModule> {
    let rad = torus.rad();
    let delta = rad.delta();
    let gamma = delta.len();
    let action = delta
        .iter()
        .map(|a| {
            let mut m = CycMatrix::zeros(gamma, gamma);
            for (j, b) in delta.iter().enumerate() {
                // X^a X^b = σ(a,b) X^{a+b}
                m[(rad.coset_index(&(*a + *b)), j)] = torus.sigma(a, b);
            }
            m
        })
        .collect();
    GradedGlModule::new(torus, gamma, (0..gamma).collect(), action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Echelon;

    fn z(num: i64, den: u64) -> CycScalar {
        CycScalar::root_of_unity(num, den)
    }

    #[test]
    fn generator_examples() {
        let (odd, even) = block_generators(2, &z(1, 2)).unwrap();
        assert_eq!(odd, CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]]));
        assert_eq!(even, CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        assert_eq!(even.mul(&odd), CycMatrix::from_int_rows(&[&[0, -1], &[1, 0]]));
        assert_eq!(even.mul(&odd), odd.mul(&even).scale(&z(1, 2)));
        let (odd, even) = block_generators(1, &CycScalar::one()).unwrap();
        assert!(odd.is_identity() && even.is_identity());
        assert!(block_generators(4, &z(1, 2)).is_err());
    }

    #[test]
    fn generator_relations() {
        for k in 2..7usize {
            let q = z(1, k as u64);
            let (a, b) = block_generators(k, &q).unwrap();
            assert!(mat_pow(&a, k as i64, k as u64 * 2).is_identity());
            assert!(mat_pow(&b, k as i64, k as u64 * 2).is_identity());
            assert_eq!(b.mul(&a), a.mul(&b).scale(&q));
        }
    }

    #[test]
    fn monomial_matches_dense() {
        let torus = Torus::standard(4, &[4, 2]).unwrap();
        for n in Degree::window(4, 2) {
            assert_eq!(x_power_monomial(&n, &torus).to_dense(), x_power(&n, &torus), "at {n}");
        }
    }

    #[test]
    fn x_power_examples() {
        let torus = Torus::standard(2, &[2]).unwrap();
        assert!(x_power(&Degree::zero(2), &torus).is_identity());
        assert!(x_power(&torus.rad().xi(0), &torus).is_identity());
        let lhs = x_power(&Degree::new(&[0, 1]), &torus).mul(&x_power(&Degree::new(&[1, 0]), &torus));
        let rhs = x_power(&Degree::new(&[1, 1]), &torus).scale(&CycScalar::from_int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn loop_embedding_is_multiplicative() {
        let torus = Torus::standard(2, &[4]).unwrap();
        assert_eq!(loop_embed(&TorusElement::monomial(Degree::zero(2)), &torus), vec![(CycMatrix::identity(4), Degree::zero(2))]);
        for n in Degree::window(2, 2) {
            for m in Degree::window(2, 2) {
                let (xn, _) = &loop_embed(&TorusElement::monomial(n), &torus)[0];
                let (xm, _) = &loop_embed(&TorusElement::monomial(m), &torus)[0];
                let prod = torus.mul(&TorusElement::monomial(n), &TorusElement::monomial(m));
                let (xnm, deg) = &loop_embed(&prod, &torus)[0];
                assert_eq!(*deg, n + m);
                assert_eq!(&xn.mul(xm), xnm);
            }
        }
        let witt = Torus::new(crate::quantum_torus::QMatrix::trivial(2)).unwrap();
        let n = Degree::new(&[3, -1]);
        assert_eq!(loop_embed(&TorusElement::monomial(n), &witt), vec![(CycMatrix::identity(1), n)]);
    }

    #[test]
    fn x_powers_span_gl_n() {
        let torus = Torus::standard(4, &[2, 2]).unwrap();
        let mut span = Echelon::new(16);
        for d in torus.rad().delta() {
            let m = x_power(d, &torus);
            let flat: Vec<CycScalar> = m.to_rows().concat();
            assert!(span.insert(&flat));
        }
        assert!(span.is_full());
    }

    #[test]
    fn left_regular_examples() {
        let witt = Torus::new(crate::quantum_torus::QMatrix::trivial(2)).unwrap();
        let w = left_regular_module(&witt).unwrap();
        assert_eq!((w.dim(), w.n()), (1, 1));
        let torus = Torus::standard(2, &[2]).unwrap();
        let w = left_regular_module(&torus).unwrap();
        assert_eq!(w.dim(), 4);
        assert!((0..4).all(|c| w.component_dim(c) == 1));
        assert!(w.is_graded_irreducible());
        for cfg in [&[4u64][..], &[2, 2][..]] {
            let t = Torus::standard(2 * cfg.len(), cfg).unwrap();
            assert!(left_regular_module(&t).unwrap().is_graded_irreducible());
        }
    }

    #[test]
    fn rejects_adjoint_like_identity() {
        let torus = Torus::standard(2, &[2]).unwrap();
        let w = left_regular_module(&torus).unwrap();
        let mut action = w.action.clone();
        action[0] = CycMatrix::zeros(4, 4);
        let err = GradedGlModule::new(&torus, 4, w.grading.clone(), action).unwrap_err();
        assert!(matches!(err, Error::InvalidModule(_)));
    }

    #[test]
    fn rejects_broken_grading() {
        let torus = Torus::standard(2, &[2]).unwrap();
        let w = left_regular_module(&torus).unwrap();
        assert!(GradedGlModule::new(&torus, 4, vec![0, 2, 1, 3], w.action.clone()).is_err());
    }
}
