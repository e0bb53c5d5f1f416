//! Randomized checks that ℂ_q′ ⊗ M is a Z𝒟-module, that π is a module map and
//! that J is a submodule.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{evaluation_column, j_membership, pi, tensor_act, Central, TensorVector};
use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::derivation::{hom_bracket, pair, HomDer};
use crate::linalg::CycMatrix;
use crate::quantum_torus::TorusElement;
use crate::weight_modules::{vw_act, GradedVector, ModuleDescriptor};

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub window: i64,
    pub inputs: usize,
    pub verdict: String,
    pub passed: bool,
    /// ℂ_q′ = 0, so there is nothing to check
    pub vacuous: bool,
    pub counterexample: Option<serde_json::Value>,
}

impl LemmaReport {
    fn new(lemma: &str, window: i64, inputs: usize, vacuous: bool, counterexample: Option<serde_json::Value>) -> Self {
        let passed = counterexample.is_none();
        let verdict = match (passed, vacuous) {
            (false, _) => "fail",
            (true, true) => "vacuous",
            (true, false) => "pass",
        };
        LemmaReport { lemma: lemma.into(), window, inputs, verdict: verdict.into(), passed, vacuous, counterexample }
    }
}

struct Sampler<'a> {
    desc: &'a ModuleDescriptor,
    rng: ChaCha8Rng,
    derived: Vec<Degree>,
    radical: Vec<Degree>,
    all: Vec<Degree>,
}

impl<'a> Sampler<'a> {
    fn new(desc: &'a ModuleDescriptor, window: i64, seed: u64) -> Sampler<'a> {
        let all = Degree::window(desc.dim(), window);
        let (radical, derived) = all.iter().partition(|n| desc.rad().contains(n));
        Sampler { desc, rng: ChaCha8Rng::seed_from_u64(seed), derived, radical, all }
    }

    fn small(&mut self) -> CycScalar {
        CycScalar::from_int(self.rng.gen_range(-3..=3))
    }

    fn nonzero(&mut self) -> CycScalar {
        let k = self.rng.gen_range(1..=3);
        CycScalar::from_int(if self.rng.gen() { k } else { -k })
    }

    fn pick(&mut self, from: &[Degree]) -> Degree {
        *from.choose(&mut self.rng).expect("nonempty degree set")
    }

    fn fiber_vector(&mut self, m: &Degree) -> Vec<CycScalar> {
        let mut c: Vec<CycScalar> = (0..self.desc.fiber_dim(m)).map(|_| self.small()).collect();
        if c.iter().all(CycScalar::is_zero) {
            c[0] = CycScalar::one();
        }
        c
    }

    fn tensor(&mut self) -> TensorVector {
        let terms = self.rng.gen_range(1..=3);
        let mut out = TensorVector::zero();
        for _ in 0..terms {
            let derived = self.derived.clone();
            let all = self.all.clone();
            let n = self.pick(&derived);
            let m = self.pick(&all);
            let c = self.fiber_vector(&m);
            let w = GradedVector::homogeneous(m, c);
            out = out.add(&TensorVector::elementary(self.desc, n, &w).expect("n avoids Rad(f)"));
        }
        out
    }

    fn witt(&mut self) -> HomDer {
        let radical = self.radical.clone();
        let deg = self.pick(&radical);
        let mut u: Vec<CycScalar> = (0..self.desc.dim()).map(|_| self.small()).collect();
        if u.iter().all(CycScalar::is_zero) {
            u[0] = CycScalar::one();
        }
        HomDer::Witt { deg, u }
    }

    fn inner(&mut self) -> HomDer {
        let derived = self.derived.clone();
        let deg = self.pick(&derived);
        HomDer::Inner { deg, coeff: self.nonzero() }
    }

    fn generator(&mut self) -> HomDer {
        if self.rng.gen() {
            self.inner()
        } else {
            self.witt()
        }
    }

    fn central(&mut self) -> Degree {
        let radical = self.radical.clone();
        self.pick(&radical)
    }
}

fn act<X: super::TensorOperand + ?Sized>(x: &X, v: &TensorVector, desc: &ModuleDescriptor) -> TensorVector {
    tensor_act(x, v, desc).expect("operands are well formed")
}

/// [D(u,m), t^r] = (u|r) t^{m+r}, t^s t^r = t^r t^s and the Lie action law on
/// ℂ_q′ ⊗ M, each on `count` random inputs.
pub fn lemma_3_1_check(desc: &ModuleDescriptor, window: i64, seed: u64, count: usize) -> LemmaReport {
    let mut s = Sampler::new(desc, window, seed);
    if s.derived.is_empty() {
        return LemmaReport::new("3.1", window, 0, true, None);
    }
    for k in 0..count {
        let v = s.tensor();
        let d = s.witt();
        let r = s.central();
        let inner = s.inner();
        let (x, y) = (s.generator(), s.generator());

        let HomDer::Witt { deg: m, u } = &d else { unreachable!() };
        let lhs = act(&d, &act(&Central(r), &v, desc), desc).sub(&act(&Central(r), &act(&d, &v, desc), desc));
        let rhs = act(&Central(*m + r), &v, desc).scale(&pair(u, &r));
        if lhs != rhs {
            let ce = json!({"input": k, "identity": "(2.3)", "x": format!("{d:?}"), "shift": r, "v": v});
            return LemmaReport::new("3.1", window, k + 1, false, Some(ce));
        }
        let a = act(&inner, &act(&Central(r), &v, desc), desc);
        let b = act(&Central(r), &act(&inner, &v, desc), desc);
        if a != b {
            let ce = json!({"input": k, "identity": "(2.4)", "x": format!("{inner:?}"), "shift": r, "v": v});
            return LemmaReport::new("3.1", window, k + 1, false, Some(ce));
        }
        let z = hom_bracket(desc.torus(), &x, &y).map_or_else(TensorVector::zero, |z| act(&z, &v, desc));
        let xy = act(&x, &act(&y, &v, desc), desc).sub(&act(&y, &act(&x, &v, desc), desc));
        if z != xy {
            let ce = json!({"input": k, "identity": "Lie action", "x": format!("{x:?}"), "y": format!("{y:?}"), "v": v});
            return LemmaReport::new("3.1", window, k + 1, false, Some(ce));
        }
    }
    LemmaReport::new("3.1", window, count, false, None)
}

/// π(x·v) = x·π(v) for random homogeneous x (and central t^r) and random v.
pub fn lemma_3_2_check(desc: &ModuleDescriptor, window: i64, seed: u64, count: usize) -> LemmaReport {
    let mut s = Sampler::new(desc, window, seed);
    if s.derived.is_empty() {
        return LemmaReport::new("3.2", window, 0, true, None);
    }
    for k in 0..count {
        let v = s.tensor();
        let x = s.generator();
        let r = s.central();
        let lhs = pi(&act(&x, &v, desc), desc);
        let rhs = vw_act(&x, &pi(&v, desc), desc).expect("π lands in the module");
        if lhs != rhs {
            let ce = json!({"input": k, "x": format!("{x:?}"), "v": v});
            return LemmaReport::new("3.2", window, k + 1, false, Some(ce));
        }
        let lhs = pi(&act(&Central(r), &v, desc), desc);
        let rhs = vw_act(&TorusElement::monomial(r), &pi(&v, desc), desc).expect("π lands in the module");
        if lhs != rhs {
            let ce = json!({"input": k, "shift": r, "v": v});
            return LemmaReport::new("3.2", window, k + 1, false, Some(ce));
        }
    }
    LemmaReport::new("3.2", window, count, false, None)
}

/// A random element of the windowed J: a combination of three elementary
/// tensors of one total degree whose stacked evaluations cancel.
pub fn random_j_element(desc: &ModuleDescriptor, window: i64, gamma_window: i64, seed: u64) -> Option<TensorVector> {
    let mut s = Sampler::new(desc, window, seed);
    if s.derived.is_empty() {
        return None;
    }
    let gammas = desc.rad().points_by_norm(gamma_window);
    let all = s.all.clone();
    for _ in 0..16 {
        let mu = s.pick(&all);
        let derived = s.derived.clone();
        let slots: Vec<Degree> = (0..3).map(|_| s.pick(&derived)).collect();
        let mut cols = vec![];
        let mut labels = vec![];
        for n in &slots {
            let m = mu - *n;
            for i in 0..desc.fiber_dim(&m) {
                cols.push(evaluation_column(desc, n, &m, i, &gammas));
                labels.push((*n, m, i));
            }
        }
        let a = CycMatrix::from_rows(cols).transpose();
        let kernel = a.kernel();
        if kernel.is_empty() {
            continue;
        }
        let mut coeffs = vec![CycScalar::zero(); labels.len()];
        for k in &kernel {
            let c = s.nonzero();
            for (acc, x) in coeffs.iter_mut().zip(k) {
                *acc = acc.add(&x.mul(&c));
            }
        }
        let mut eta = TensorVector::zero();
        for ((n, m, i), c) in labels.iter().zip(&coeffs) {
            let mut e = vec![CycScalar::zero(); desc.fiber_dim(m)];
            e[*i] = c.clone();
            eta = eta.add(&TensorVector::elementary(desc, *n, &GradedVector::homogeneous(*m, e)).ok()?);
        }
        if !eta.is_zero() {
            return Some(eta);
        }
    }
    None
}

/// For random windowed J-elements η, t^{r′}η, D(u,r′)η and t^s η are again in
/// J (checked over a γ-window one step smaller).
pub fn lemma_3_3_check(desc: &ModuleDescriptor, window: i64, gamma_window: i64, seed: u64, count: usize) -> LemmaReport {
    let mut s = Sampler::new(desc, window, seed);
    if s.derived.is_empty() {
        return LemmaReport::new("3.3", window, 0, true, None);
    }
    let shrunk = (gamma_window - 1).max(1);
    for k in 0..count {
        let Some(eta) = random_j_element(desc, window, gamma_window, seed.wrapping_add(k as u64 + 1)) else {
            let ce = json!({"input": k, "reason": "no J element found"});
            return LemmaReport::new("3.3", window, k + 1, false, Some(ce));
        };
        let r = s.central();
        let d = s.witt();
        let inner = s.inner();
        let images = [
            ("t^r", act(&Central(r), &eta, desc)),
            ("D(u,r)", act(&d, &eta, desc)),
            ("t^s", act(&inner, &eta, desc)),
        ];
        if !j_membership(&eta, desc, gamma_window).member {
            let ce = json!({"input": k, "reason": "sampled element is not in J", "eta": eta});
            return LemmaReport::new("3.3", window, k + 1, false, Some(ce));
        }
        for (name, img) in images {
            if !j_membership(&img, desc, shrunk).member {
                let ce = json!({"input": k, "operator": name, "eta": eta});
                return LemmaReport::new("3.3", window, k + 1, false, Some(ce));
            }
        }
    }
    LemmaReport::new("3.3", window, count, false, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_realization::{left_regular_module, GradedGlModule};
    use crate::quantum_torus::Torus;
    use crate::weight_modules::young_module;

    fn c1() -> ModuleDescriptor {
        let t = Torus::standard(2, &[2]).unwrap();
        let v = young_module(&[1], 2, &CycScalar::one()).unwrap();
        let alpha = vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)];
        ModuleDescriptor::new(&t, v, left_regular_module(&t).unwrap(), alpha).unwrap()
    }

    #[test]
    fn lemmas_hold_on_c1() {
        let m = c1();
        assert!(lemma_3_1_check(&m, 2, 1, 10).passed);
        assert!(lemma_3_2_check(&m, 2, 2, 10).passed);
        let r = lemma_3_3_check(&m, 2, 2, 3, 10);
        assert!(r.passed, "{:?}", r.counterexample);
        assert_eq!(r.verdict, "pass");
    }

    #[test]
    fn corrupted_module_breaks_lemma_3_1() {
        let m = c1().with_corrupted_action();
        assert!(!lemma_3_1_check(&m, 2, 1, 20).passed);
    }

    #[test]
    fn witt_case_is_vacuous() {
        let t = Torus::standard(2, &[]).unwrap();
        let v = young_module(&[], 2, &CycScalar::zero()).unwrap();
        let m = ModuleDescriptor::new(&t, v, GradedGlModule::trivial(&t).unwrap(), vec![CycScalar::zero(); 2]).unwrap();
        let r = lemma_3_1_check(&m, 2, 1, 5);
        assert!(r.passed && r.vacuous);
        assert!(random_j_element(&m, 2, 1, 0).is_none());
    }
}
