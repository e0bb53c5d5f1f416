//! The graded modules 𝒱^α(V,W) = ⊕_n V ⊗ W_n̄ ⊗ t^n over Der(ℂ_q) and Z(ℂ_q).
//!
//! Modules are never materialized: vectors are finitely supported maps from
//! degrees to coefficient vectors of V ⊗ W_n̄ (V-index major).

mod probe;
mod verify;
mod young;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use probe::{probe_reducibility, probe_seeds, submodule_probe, ProbeProfile, ProbeReport, ProbeRow};
pub use verify::{replay_rep_counterexample, verify_rep, RepCounterexample, RepReport};
pub use young::{weyl_dimension, young_module, GlDModule, GlDSummary};

use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::derivation::{pair, Derivation, HomDer};
use crate::error::{Error, Result};
use crate::gl_realization::{left_regular_module, GradedGlModule, GradedGlSpec};
use crate::lattice::RadicalData;
use crate::linalg::CycMatrix;
use crate::quantum_torus::{Torus, TorusElement};

/// The data (V, W, α) of 𝒱^α(V,W) over a normal-form torus.
#[derive(Clone, Debug)]
pub struct ModuleDescriptor {
    torus: Torus,
    v: GlDModule,
    w: GradedGlModule,
    alpha: Vec<CycScalar>,
    flip_matrix_term: bool,
    /// W-blocks of X^s indexed by [coset of s][source coset]
    wblocks: Vec<Vec<CycMatrix>>,
}

impl ModuleDescriptor {
    pub fn new(torus: &Torus, v: GlDModule, w: GradedGlModule, alpha: Vec<CycScalar>) -> Result<ModuleDescriptor> {
        let d = torus.dim();
        if v.d() != d {
            return Err(Error::InvalidModule(format!("V is a gl_{}-module but d = {d}", v.d())));
        }
        if alpha.len() != d {
            return Err(Error::InvalidModule(format!("alpha has length {}, expected {d}", alpha.len())));
        }
        if w.n() as u64 != torus.rad().n() {
            return Err(Error::InvalidModule(format!("W is a gl_{}-module but N = {}", w.n(), torus.rad().n())));
        }
        let gamma = torus.rad().gamma_order();
        let delta = torus.rad().delta();
        let wblocks = (0..gamma)
            .map(|s| (0..gamma).map(|from| w.action_block(&delta[s], from, torus)).collect())
            .collect();
        Ok(ModuleDescriptor { torus: torus.clone(), v, w, alpha, flip_matrix_term: false, wblocks })
    }

    /// The same module with the sign of the ρ(r uᵀ) term reversed; not a
    /// representation once V is nontrivial on sl_d. Used as a negative control.
    pub fn with_corrupted_action(mut self) -> ModuleDescriptor {
        self.flip_matrix_term = true;
        self
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn rad(&self) -> &RadicalData {
        self.torus.rad()
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    pub fn v(&self) -> &GlDModule {
        &self.v
    }

    pub fn w(&self) -> &GradedGlModule {
        &self.w
    }

    pub fn alpha(&self) -> &[CycScalar] {
        &self.alpha
    }

    /// α as an integer vector, if it is one.
    pub fn integral_alpha(&self) -> Option<Degree> {
        let coords: Option<Vec<i64>> =
            self.alpha.iter().map(|a| a.as_rational().filter(|r| r.is_integer()).and_then(|r| r.to_i64())).collect();
        coords.map(|c| Degree::new(&c))
    }

    /// dim(V) · dim(W_n̄).
    pub fn fiber_dim(&self, n: &Degree) -> usize {
        self.v.dim() * self.w.component_dim(self.rad().coset_index(n))
    }

    /// The weight α + n of the degree-n component.
    pub fn weight(&self, n: &Degree) -> Vec<CycScalar> {
        self.alpha.iter().zip(n.as_slice()).map(|(a, &k)| a.add(&CycScalar::from_int(k))).collect()
    }

    /// (u | n + α)
    pub fn weight_pairing(&self, u: &[CycScalar], n: &Degree) -> CycScalar {
        let alpha = u.iter().zip(&self.alpha).fold(CycScalar::zero(), |acc, (x, a)| acc.add(&x.mul(a)));
        pair(u, n).add(&alpha)
    }

    fn wblock(&self, s: &Degree, from: &Degree) -> &CycMatrix {
        let rad = self.rad();
        &self.wblocks[rad.coset_index(s)][rad.coset_index(from)]
    }

    /// The matrix of t^s from the degree-n fiber to the degree-(n+s) fiber.
    pub fn monomial_block(&self, s: &Degree, n: &Degree) -> CycMatrix {
        CycMatrix::identity(self.v.dim()).kron(self.wblock(s, n))
    }

    /// The V-part (u|n+α)·1 + ρ(r uᵀ) of D(u, r) at degree n.
    pub fn witt_v_part(&self, u: &[CycScalar], r: &Degree, n: &Degree) -> CycMatrix {
        let mut m = self.v.rho_outer(r.as_slice(), u);
        if self.flip_matrix_term {
            m = m.neg();
        }
        m.add(&CycMatrix::scalar(self.v.dim(), &self.weight_pairing(u, n)))
    }

    /// The matrix of a homogeneous derivation from the degree-n fiber to the
    /// fiber of degree n + deg(h).
    pub fn op_block(&self, h: &HomDer, n: &Degree) -> CycMatrix {
        match h {
            HomDer::Inner { deg, coeff } => self.monomial_block(deg, n).scale(coeff),
            HomDer::Witt { deg, u } => {
                let wdim = self.w.component_dim(self.rad().coset_index(n));
                self.witt_v_part(u, deg, n).kron(&CycMatrix::identity(wdim))
            }
        }
    }

    /// Weight-space dimensions over the ∞-norm window.
    pub fn weight_table(&self, radius: i64) -> Vec<(Degree, usize)> {
        Degree::window(self.dim(), radius).into_iter().map(|n| (n, self.fiber_dim(&n))).collect()
    }

    fn check_vector(&self, v: &GradedVector) -> Result<()> {
        for (n, c) in &v.comps {
            self.torus.check_degree(n)?;
            if c.len() != self.fiber_dim(n) {
                return Err(Error::InvalidArgument(format!(
                    "component at degree {n} has length {}, but V ⊗ W_n̄ has dimension {}",
                    c.len(),
                    self.fiber_dim(n)
                )));
            }
        }
        Ok(())
    }

    pub fn apply_hom(&self, h: &HomDer, v: &GradedVector) -> GradedVector {
        let deg = h.degree();
        let mut out = GradedVector::zero();
        for (n, c) in &v.comps {
            out.add_component(*n + deg, &self.op_block(h, n).mul_vec(c));
        }
        out
    }

    /// t^s acting through X^s (for s ∈ Rad(f) this is the central shift).
    pub fn apply_monomial(&self, s: &Degree, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (n, c) in &v.comps {
            out.add_component(*n + *s, &self.monomial_block(s, n).mul_vec(c));
        }
        out
    }

    pub fn summary(&self) -> DescriptorSummary {
        DescriptorSummary {
            v: self.v.summary(),
            w_n: self.w.n(),
            w_dim: self.w.dim(),
            alpha: self.alpha.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct DescriptorSummary {
    #[serde(rename = "V")]
    pub v: GlDSummary,
    #[serde(rename = "W_N")]
    pub w_n: usize,
    #[serde(rename = "W_dim")]
    pub w_dim: usize,
    pub alpha: Vec<CycScalar>,
}

/// Something that acts on 𝒱^α(V,W).
pub trait ModuleOperand {
    fn act_on(&self, v: &GradedVector, desc: &ModuleDescriptor) -> GradedVector;
}

impl ModuleOperand for HomDer {
    fn act_on(&self, v: &GradedVector, desc: &ModuleDescriptor) -> GradedVector {
        desc.apply_hom(self, v)
    }
}

impl ModuleOperand for Derivation {
    fn act_on(&self, v: &GradedVector, desc: &ModuleDescriptor) -> GradedVector {
        self.homs().fold(GradedVector::zero(), |acc, h| acc.add(&desc.apply_hom(&h, v)))
    }
}

impl ModuleOperand for TorusElement {
    fn act_on(&self, v: &GradedVector, desc: &ModuleDescriptor) -> GradedVector {
        self.terms()
            .iter()
            .fold(GradedVector::zero(), |acc, (s, c)| acc.add(&desc.apply_monomial(s, v).scale(c)))
    }
}

/// x·v in 𝒱^α(V,W).
pub fn vw_act<X: ModuleOperand + ?Sized>(x: &X, v: &GradedVector, desc: &ModuleDescriptor) -> Result<GradedVector> {
    desc.check_vector(v)?;
    Ok(x.act_on(v, desc))
}

/// A finitely supported vector of a graded module; zero components are dropped.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct GradedVector {
    comps: BTreeMap<Degree, Vec<CycScalar>>,
}

impl GradedVector {
    pub fn zero() -> GradedVector {
        GradedVector::default()
    }

    pub fn homogeneous(n: Degree, c: Vec<CycScalar>) -> GradedVector {
        let mut out = GradedVector::zero();
        out.add_component(n, &c);
        out
    }

    /// The i-th basis vector of the degree-n fiber.
    pub fn basis(desc: &ModuleDescriptor, n: Degree, i: usize) -> GradedVector {
        let mut c = vec![CycScalar::zero(); desc.fiber_dim(&n)];
        c[i] = CycScalar::one();
        GradedVector::homogeneous(n, c)
    }

    pub fn add_component(&mut self, n: Degree, c: &[CycScalar]) {
        if c.iter().all(CycScalar::is_zero) {
            return;
        }
        match self.comps.get_mut(&n) {
            Some(prev) => {
                for (a, b) in prev.iter_mut().zip(c) {
                    *a = a.add(b);
                }
                if prev.iter().all(CycScalar::is_zero) {
                    self.comps.remove(&n);
                }
            }
            None => {
                self.comps.insert(n, c.to_vec());
            }
        }
    }

    pub fn component(&self, n: &Degree) -> Option<&[CycScalar]> {
        self.comps.get(n).map(Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<Degree, Vec<CycScalar>> {
        &self.comps
    }

    pub fn support(&self) -> impl Iterator<Item = &Degree> {
        self.comps.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (n, c) in &other.comps {
            out.add_component(*n, c);
        }
        out
    }

    pub fn sub(&self, other: &GradedVector) -> GradedVector {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &CycScalar) -> GradedVector {
        let mut out = GradedVector::zero();
        for (n, v) in &self.comps {
            out.add_component(*n, &v.iter().map(|x| x.mul(c)).collect::<Vec<_>>());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    degree: Degree,
    coeffs: Vec<CycScalar>,
}

impl Serialize for GradedVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<ComponentRepr> =
            self.comps.iter().map(|(n, c)| ComponentRepr { degree: *n, coeffs: c.clone() }).collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<GradedVector, D::Error> {
        let list = Vec::<ComponentRepr>::deserialize(d)?;
        let mut out = GradedVector::zero();
        for c in list {
            out.add_component(c.degree, &c.coeffs);
        }
        Ok(out)
    }
}

/// JSON form of V.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VSpec {
    pub lambda: Vec<u32>,
    pub b: CycScalar,
}

/// JSON form of W: "left-regular", "trivial", or an explicit module.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WSpec {
    Named(String),
    Explicit(GradedGlSpec),
}

/// JSON form of a module descriptor; `W` may also name a JSON file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorSpec {
    #[serde(rename = "V")]
    pub v: VSpec,
    #[serde(rename = "W")]
    pub w: WSpec,
    pub alpha: Vec<CycScalar>,
}

impl DescriptorSpec {
    pub fn build(&self, torus: &Torus) -> Result<ModuleDescriptor> {
        let v = young_module(&self.v.lambda, torus.dim(), &self.v.b).map_err(|e| Error::InvalidModule(e.to_string()))?;
        let w = match &self.w {
            WSpec::Named(name) if name == "left-regular" => left_regular_module(torus)?,
            WSpec::Named(name) if name == "trivial" => GradedGlModule::trivial(torus)?,
            WSpec::Named(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read W from {path:?}: {e}")))?;
                let spec: GradedGlSpec =
                    serde_json::from_str(&text).map_err(|e| Error::InvalidModule(format!("W in {path:?}: {e}")))?;
                GradedGlModule::from_spec(&spec, torus)?
            }
            WSpec::Explicit(spec) => GradedGlModule::from_spec(spec, torus)?,
        };
        ModuleDescriptor::new(torus, v, w, self.alpha.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<CycScalar> {
        v.iter().map(|&x| CycScalar::from_int(x)).collect()
    }

    fn natural_c1(alpha: Vec<CycScalar>) -> ModuleDescriptor {
        let t = Torus::standard(2, &[2]).unwrap();
        let v = young_module(&[1], 2, &CycScalar::one()).unwrap();
        ModuleDescriptor::new(&t, v, left_regular_module(&t).unwrap(), alpha).unwrap()
    }

    #[test]
    fn weight_dims_are_uniform() {
        let m = natural_c1(ints(&[0, 0]));
        assert!(m.weight_table(3).iter().all(|(_, k)| *k == 2));
    }

    #[test]
    fn d_zero_kills_degree_zero_at_zero_alpha() {
        let m = natural_c1(ints(&[0, 0]));
        let d0 = HomDer::Witt { deg: Degree::zero(2), u: ints(&[1, 3]) };
        let v = GradedVector::basis(&m, Degree::zero(2), 1);
        assert!(vw_act(&d0, &v, &m).unwrap().is_zero());
        let t0 = TorusElement::monomial(Degree::zero(2));
        assert_eq!(vw_act(&t0, &v, &m).unwrap(), v);
    }

    #[test]
    fn witt_action_hand_example() {
        let alpha = vec![CycScalar::rational(1, 2), CycScalar::zero()];
        let m = natural_c1(alpha);
        let n = Degree::new(&[1, 1]);
        let r = Degree::new(&[2, 0]);
        let u = ints(&[1, 3]);
        assert_eq!(m.weight_pairing(&u, &n), CycScalar::rational(9, 2));
        // W_n̄ is one-dimensional, so the fiber is V itself; r uᵀ = [[2,6],[0,0]]
        let x = HomDer::Witt { deg: r, u };
        let v = GradedVector::homogeneous(n, ints(&[5, 7]));
        let out = vw_act(&x, &v, &m).unwrap();
        let want = vec![
            CycScalar::rational(9, 2).mul_int(5).add(&CycScalar::from_int(2 * 5 + 6 * 7)),
            CycScalar::rational(9, 2).mul_int(7),
        ];
        assert_eq!(out, GradedVector::homogeneous(n + r, want));
    }

    #[test]
    fn cartan_acts_diagonally() {
        let m = natural_c1(vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)]);
        let u = ints(&[2, -5]);
        let h = HomDer::Witt { deg: Degree::zero(2), u: u.clone() };
        for n in Degree::window(2, 2) {
            let v = GradedVector::homogeneous(n, ints(&[1, -4]));
            assert_eq!(m.apply_hom(&h, &v), v.scale(&m.weight_pairing(&u, &n)));
        }
    }

    #[test]
    fn malformed_component_is_rejected() {
        let m = natural_c1(ints(&[0, 0]));
        let bad = GradedVector::homogeneous(Degree::zero(2), ints(&[1, 2, 3]));
        let t = TorusElement::monomial(Degree::new(&[1, 0]));
        assert!(vw_act(&t, &bad, &m).is_err());
    }

    #[test]
    fn descriptor_spec_parses() {
        let t = Torus::standard(2, &[2]).unwrap();
        let spec: DescriptorSpec =
            serde_json::from_str(r#"{"V": {"lambda": [1], "b": 1}, "W": "left-regular", "alpha": ["1/2", 0]}"#).unwrap();
        let m = spec.build(&t).unwrap();
        assert_eq!(m.v().dim(), 2);
        assert_eq!(m.w().dim(), 4);
        let bad: DescriptorSpec =
            serde_json::from_str(r#"{"V": {"lambda": [1], "b": 1}, "W": "trivial", "alpha": [0, 0]}"#).unwrap();
        assert!(bad.build(&t).is_err());
    }
}
