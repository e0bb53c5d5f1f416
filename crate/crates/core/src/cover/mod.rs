//! The module ℂ_q′ ⊗ M, the map π, the subspace J and windowed weight spaces of
//! the cover (ℂ_q′ ⊗ M)/J, for M = 𝒱^α(V,W).

mod differentiator;
mod lemmas;

use std::collections::BTreeMap;

use serde::Serialize;

pub use differentiator::{
    differentiator_apply, identity_3_3_check, identity_3_3_sweep, minimal_annihilating_l, Differentiator, Identity33,
    Identity33Sweep, MinimalL,
    OmegaCounterexample,
};
pub use lemmas::{lemma_3_1_check, lemma_3_2_check, lemma_3_3_check, random_j_element, LemmaReport};

use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::derivation::{pair, Derivation, HomDer};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::quantum_torus::TorusElement;
use crate::weight_modules::{GradedVector, ModuleDescriptor};

/// Σ t^n ⊗ v_n with n ∉ Rad(f), stored by (n, degree of the M-component).
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TensorVector {
    terms: BTreeMap<(Degree, Degree), Vec<CycScalar>>,
}

impl TensorVector {
    pub fn zero() -> TensorVector {
        TensorVector::default()
    }

    /// t^n ⊗ v.
    pub fn elementary(desc: &ModuleDescriptor, n: Degree, v: &GradedVector) -> Result<TensorVector> {
        if desc.rad().contains(&n) {
            return Err(Error::InRadical(format!("t^{n} is not in the derived algebra")));
        }
        let mut out = TensorVector::zero();
        for (m, c) in v.components() {
            out.add_term(n, *m, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, n: Degree, m: Degree, c: &[CycScalar]) {
        if c.iter().all(CycScalar::is_zero) {
            return;
        }
        match self.terms.get_mut(&(n, m)) {
            Some(prev) => {
                for (a, b) in prev.iter_mut().zip(c) {
                    *a = a.add(b);
                }
                if prev.iter().all(CycScalar::is_zero) {
                    self.terms.remove(&(n, m));
                }
            }
            None => {
                self.terms.insert((n, m), c.to_vec());
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<(Degree, Degree), Vec<CycScalar>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        for ((n, m), c) in &other.terms {
            out.add_term(*n, *m, c);
        }
        out
    }

    pub fn sub(&self, other: &TensorVector) -> TensorVector {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &CycScalar) -> TensorVector {
        let mut out = TensorVector::zero();
        for ((n, m), v) in &self.terms {
            out.add_term(*n, *m, &v.iter().map(|x| x.mul(c)).collect::<Vec<_>>());
        }
        out
    }

    /// The total degree n + m of each term.
    pub fn total_degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.terms.keys().map(|(n, m)| *n + *m)
    }
}

impl Serialize for TensorVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            t: Degree,
            degree: Degree,
            coeffs: &'a [CycScalar],
        }
        let list: Vec<Term> = self.terms.iter().map(|((n, m), c)| Term { t: *n, degree: *m, coeffs: c }).collect();
        list.serialize(s)
    }
}

/// The central element t^r, r ∈ Rad(f), acting on the left slot only.
#[derive(Clone, Copy, Debug)]
pub struct Central(pub Degree);

/// Something that acts on ℂ_q′ ⊗ M.
pub trait TensorOperand {
    fn act_tensor(&self, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector>;
}

impl TensorOperand for HomDer {
    fn act_tensor(&self, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector> {
        Ok(hom_act(self, v, desc))
    }
}

impl TensorOperand for Derivation {
    fn act_tensor(&self, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector> {
        Ok(self.homs().fold(TensorVector::zero(), |acc, h| acc.add(&hom_act(&h, v, desc))))
    }
}

impl TensorOperand for Central {
    fn act_tensor(&self, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector> {
        let r = self.0;
        if !desc.rad().contains(&r) {
            return Err(Error::NotInRadical(r.to_string()));
        }
        let mut out = TensorVector::zero();
        for ((n, m), c) in &v.terms {
            out.add_term(*n + r, *m, c);
        }
        Ok(out)
    }
}

/// Terms of degree in Rad(f) act centrally, the others as ad(t^s).
impl TensorOperand for TorusElement {
    fn act_tensor(&self, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector> {
        let mut out = TensorVector::zero();
        for (s, c) in self.terms() {
            let part = if desc.rad().contains(s) {
                Central(*s).act_tensor(v, desc)?.scale(c)
            } else {
                hom_act(&HomDer::Inner { deg: *s, coeff: c.clone() }, v, desc)
            };
            out = out.add(&part);
        }
        Ok(out)
    }
}

/// Leibniz action of a homogeneous derivation on both slots.
fn hom_act(h: &HomDer, v: &TensorVector, desc: &ModuleDescriptor) -> TensorVector {
    let torus = desc.torus();
    let deg = h.degree();
    let mut out = TensorVector::zero();
    for ((n, m), c) in &v.terms {
        let left = match h {
            HomDer::Inner { deg: s, coeff } => coeff.mul(&torus.commutator_coeff(s, n)),
            HomDer::Witt { u, .. } => pair(u, n),
        };
        // a vanishing left coefficient also covers n + s ∈ Rad(f)
        if !left.is_zero() {
            out.add_term(*n + deg, *m, &c.iter().map(|x| x.mul(&left)).collect::<Vec<_>>());
        }
        out.add_term(*n, *m + deg, &desc.op_block(h, m).mul_vec(c));
    }
    out
}

/// x·v in ℂ_q′ ⊗ M.
pub fn tensor_act<X: TensorOperand + ?Sized>(x: &X, v: &TensorVector, desc: &ModuleDescriptor) -> Result<TensorVector> {
    x.act_tensor(v, desc)
}

/// π(Σ t^n ⊗ v_n) = Σ t^n·v_n.
pub fn pi(v: &TensorVector, desc: &ModuleDescriptor) -> GradedVector {
    shifted_evaluation(v, desc, None)
}

/// Σ t^{n+γ}·v_n, or π when γ is absent.
fn shifted_evaluation(v: &TensorVector, desc: &ModuleDescriptor, gamma: Option<&Degree>) -> GradedVector {
    let mut out = GradedVector::zero();
    for ((n, m), c) in &v.terms {
        let s = gamma.map_or(*n, |g| *n + *g);
        out.add_component(s + *m, &desc.monomial_block(&s, m).mul_vec(c));
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct JMembership {
    pub member: bool,
    /// whether the verdict is unchanged with the γ-window enlarged by one
    pub stable: bool,
}

fn in_j_window(v: &TensorVector, desc: &ModuleDescriptor, gamma_window: i64) -> bool {
    desc.rad()
        .points_by_norm(gamma_window)
        .iter()
        .all(|g| shifted_evaluation(v, desc, Some(g)).is_zero())
}

/// Whether Σ t^{n+γ}·v_n = 0 for every γ ∈ Rad(f) with ‖γ‖ ≤ gamma_window.
pub fn j_membership(v: &TensorVector, desc: &ModuleDescriptor, gamma_window: i64) -> JMembership {
    let member = in_j_window(v, desc, gamma_window);
    let wider = in_j_window(v, desc, gamma_window + 1);
    JMembership { member, stable: member == wider }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverWeightReport {
    pub degree: Degree,
    pub weight: Vec<CycScalar>,
    pub window: i64,
    pub gamma_window: i64,
    pub l: usize,
    pub domain_dim: usize,
    pub dimension: usize,
    pub previous_dimension: usize,
    pub stable: bool,
    pub weight_space_dim: usize,
    pub pi_rank: usize,
    pub pi_surjective: bool,
    pub spanning_radius: i64,
    pub spanning_dim: usize,
    pub spans: bool,
    pub boundary_term: bool,
    pub bound: usize,
    pub within_bound: bool,
    /// ℂ_q′ = 0, so the cover is zero
    pub vacuous: bool,
}

/// One column of the stacked evaluation map: the image of t^{n} ⊗ e_i (with
/// e_i in the degree-m fiber) in ⊕_γ M_{n+m+γ}.
fn evaluation_column(desc: &ModuleDescriptor, n: &Degree, m: &Degree, i: usize, gammas: &[Degree]) -> Vec<CycScalar> {
    let mut out = vec![];
    for g in gammas {
        let block = desc.monomial_block(&(*n + *g), m);
        out.extend((0..block.rows()).map(|row| block[(row, i)].clone()));
    }
    out
}

/// dim of the windowed cover weight space at the given degree: the span of
/// ψ(t^{n+r}, M_{μ−n−r}) for n running over the cosets of Γ other than Rad(f)
/// and ‖r‖ ≤ window, modulo J computed over a γ-window; with the spanning-set
/// check for the radius l·d/2.
pub fn cover_weight_space(
    degree: &Degree,
    desc: &ModuleDescriptor,
    window: i64,
    gamma_window: i64,
    l: usize,
) -> Result<CoverWeightReport> {
    let rad = desc.rad();
    let d = desc.dim();
    let min_window = 2 * desc.torus().order() as i64 * d as i64;
    if window < min_window {
        return Err(Error::InvalidArgument(format!("cover window must be at least 2·L·d = {min_window}")));
    }
    let gammas = rad.points_by_norm(gamma_window);
    let rows = gammas.iter().map(|g| desc.fiber_dim(&(*degree + *g))).sum();
    let spanning_radius = (l * d / 2) as i64;
    let boundary = desc.integral_alpha().map(|a| *degree + a).filter(|t| !rad.contains(t));

    let mut full = Echelon::new(rows);
    let mut previous = Echelon::new(rows);
    let mut span = Echelon::new(rows);
    let mut pi_span = Echelon::new(desc.fiber_dim(degree));
    let mut domain_dim = 0;
    let mut boundary_term = false;
    for n in rad.delta().iter().filter(|n| !rad.contains(n)) {
        for r in rad.points_by_norm(window) {
            let t = *n + r;
            let m = *degree - t;
            let norm = rad.xi_norm(&r)?;
            let is_boundary = boundary == Some(t);
            boundary_term |= is_boundary;
            for i in 0..desc.fiber_dim(&m) {
                domain_dim += 1;
                let col = evaluation_column(desc, &t, &m, i, &gammas);
                full.insert(&col);
                if norm < window {
                    previous.insert(&col);
                }
                if norm <= spanning_radius || is_boundary {
                    span.insert(&col);
                }
                pi_span.insert(&evaluation_column(desc, &t, &m, i, &[Degree::zero(d)]));
            }
        }
    }
    let max_fiber = rad.delta().iter().map(|n| desc.fiber_dim(n)).max().unwrap_or(0);
    let ball = rad.points_by_norm(spanning_radius).len();
    let mut bound = rad.gamma_order() * ball * max_fiber;
    if boundary_term {
        bound += desc.fiber_dim(&-desc.integral_alpha().expect("boundary needs integral alpha"));
    }
    let dimension = full.rank();
    let weight_space_dim = desc.fiber_dim(degree);
    Ok(CoverWeightReport {
        degree: *degree,
        weight: desc.weight(degree),
        window,
        gamma_window,
        l,
        domain_dim,
        dimension,
        previous_dimension: previous.rank(),
        stable: previous.rank() == dimension,
        weight_space_dim,
        pi_rank: pi_span.rank(),
        pi_surjective: domain_dim == 0 || pi_span.rank() == weight_space_dim,
        spanning_radius,
        spanning_dim: span.rank(),
        spans: span.rank() == dimension,
        boundary_term,
        bound,
        within_bound: dimension <= bound,
        vacuous: domain_dim == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_realization::{left_regular_module, GradedGlModule};
    use crate::quantum_torus::Torus;
    use crate::weight_modules::young_module;

    fn ints(v: &[i64]) -> Vec<CycScalar> {
        v.iter().map(|&x| CycScalar::from_int(x)).collect()
    }

    fn c1() -> ModuleDescriptor {
        let t = Torus::standard(2, &[2]).unwrap();
        let v = young_module(&[1], 2, &CycScalar::one()).unwrap();
        ModuleDescriptor::new(&t, v, left_regular_module(&t).unwrap(), vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)])
            .unwrap()
    }

    #[test]
    fn central_zero_is_identity_and_radical_is_enforced() {
        let m = c1();
        let v = TensorVector::elementary(&m, Degree::new(&[1, 0]), &GradedVector::basis(&m, Degree::new(&[0, 1]), 0)).unwrap();
        assert_eq!(tensor_act(&Central(Degree::zero(2)), &v, &m).unwrap(), v);
        assert!(tensor_act(&Central(Degree::new(&[1, 0])), &v, &m).is_err());
        assert!(TensorVector::elementary(&m, Degree::new(&[2, 0]), &GradedVector::basis(&m, Degree::zero(2), 0)).is_err());
    }

    #[test]
    fn witt_leibniz_on_elementary_tensor() {
        let m = c1();
        let n = Degree::new(&[1, 1]);
        let w = GradedVector::homogeneous(Degree::new(&[0, 1]), ints(&[2, -1]));
        let v = TensorVector::elementary(&m, n, &w).unwrap();
        let u = ints(&[1, 3]);
        let r = Degree::new(&[2, 0]);
        let x = HomDer::Witt { deg: r, u: u.clone() };
        let got = tensor_act(&x, &v, &m).unwrap();
        let left = TensorVector::elementary(&m, n + r, &w).unwrap().scale(&pair(&u, &n));
        let right = TensorVector::elementary(&m, n, &m.apply_hom(&x, &w)).unwrap();
        assert_eq!(got, left.add(&right));
    }

    #[test]
    fn j_contains_zero_and_shift_pairs() {
        let m = c1();
        assert!(j_membership(&TensorVector::zero(), &m, 1).member);
        let n = Degree::new(&[1, 0]);
        let r = m.rad().xi(0);
        let w = GradedVector::basis(&m, Degree::new(&[0, 1]), 1);
        let shifted = GradedVector::basis(&m, Degree::new(&[0, 1]) - r, 1);
        // t^n ⊗ w and t^{n+r} ⊗ w′ with w′ one ξ-step lower evaluate identically
        let eta = TensorVector::elementary(&m, n, &w)
            .unwrap()
            .sub(&TensorVector::elementary(&m, n + r, &shifted).unwrap());
        assert_eq!(j_membership(&eta, &m, 2), JMembership { member: true, stable: true });
        let lone = TensorVector::elementary(&m, n, &w).unwrap();
        assert!(!j_membership(&lone, &m, 1).member);
    }

    #[test]
    fn cover_weight_space_of_c1() {
        let m = c1();
        let rep = cover_weight_space(&Degree::new(&[1, 2]), &m, 8, 1, 3).unwrap();
        assert!(rep.stable && rep.spans && rep.within_bound && rep.pi_surjective);
        assert_eq!(rep.dimension, 2);
        assert!(cover_weight_space(&Degree::zero(2), &m, 7, 1, 3).is_err());
    }

    #[test]
    fn witt_cover_is_zero() {
        let t = Torus::standard(2, &[]).unwrap();
        let v = young_module(&[], 2, &CycScalar::zero()).unwrap();
        let m = ModuleDescriptor::new(&t, v, GradedGlModule::trivial(&t).unwrap(), ints(&[0, 0])).unwrap();
        let rep = cover_weight_space(&Degree::new(&[1, 0]), &m, 4, 1, 2).unwrap();
        assert!(rep.vacuous);
        assert_eq!(rep.dimension, 0);
    }
}
