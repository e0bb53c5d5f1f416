//! Windowed verification that 𝒱^α(V,W) is a module over Der(ℂ_q) and Z(ℂ_q)
//! with the compatibility identities.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{vw_act, GradedVector, ModuleDescriptor};
use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::derivation::{der_bracket, hom_bracket, pair, window_generators, Derivation, HomDer};
use crate::linalg::CycMatrix;
use crate::quantum_torus::TorusElement;

#[derive(Clone, Debug, Serialize)]
pub struct RepReport {
    pub passed: bool,
    pub window: i64,
    pub generators: usize,
    pub checks: u64,
    pub counterexample: Option<RepCounterexample>,
}

/// A failing instance: the law, its operands and a basis vector of the
/// degree-`degree` fiber on which the two sides differ by `residual`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepCounterexample {
    pub law: String,
    pub x: Derivation,
    pub y: Option<Derivation>,
    pub shift: Option<Degree>,
    pub degree: Degree,
    pub basis_index: usize,
    pub residual: GradedVector,
}

fn first_bad_column(m: &CycMatrix) -> Option<(usize, Vec<CycScalar>)> {
    (0..m.cols()).map(|j| (j, m.column(j))).find(|(_, c)| c.iter().any(|x| !x.is_zero()))
}

/// Checks [x,y]v = x(yv) − y(xv) for all generator pairs and basis vectors with
/// degrees in the ∞-norm window, and both compatibility identities
/// [D(u,r), t^{r′}] = (u|r′)t^{r+r′} and t^s t^r = t^r t^s on the module.
pub fn verify_rep(desc: &ModuleDescriptor, window: i64) -> RepReport {
    let torus = desc.torus();
    let gens = window_generators(torus, window);
    let degrees = Degree::window(desc.dim(), window);
    let radicals = desc.rad().points_in_box(window);
    let mut checks = 0u64;
    let report = |ce: Option<RepCounterexample>, checks: u64| RepReport {
        passed: ce.is_none(),
        window,
        generators: gens.len(),
        checks,
        counterexample: ce,
    };

    // blocks of every generator at every degree within twice the window
    let mut blocks: HashMap<(usize, Degree), CycMatrix> = HashMap::new();
    let mut block = |g: usize, n: Degree| blocks.entry((g, n)).or_insert_with(|| desc.op_block(&gens[g], &n)).clone();

    for (i, x) in gens.iter().enumerate() {
        let dx = x.degree();
        for (j, y) in gens.iter().enumerate().skip(i + 1) {
            let dy = y.degree();
            let z = hom_bracket(torus, x, y);
            for n in &degrees {
                checks += 1;
                let xy = block(i, *n + dy).mul(&block(j, *n));
                let yx = block(j, *n + dx).mul(&block(i, *n));
                let mut diff = xy.sub(&yx);
                if let Some(z) = &z {
                    diff = diff.sub(&desc.op_block(z, n));
                }
                if let Some((col, res)) = first_bad_column(&diff) {
                    let ce = RepCounterexample {
                        law: "lie".into(),
                        x: x.to_derivation(),
                        y: Some(y.to_derivation()),
                        shift: None,
                        degree: *n,
                        basis_index: col,
                        residual: GradedVector::homogeneous(*n + dx + dy, res),
                    };
                    return report(Some(ce), checks);
                }
            }
        }
    }

    for (i, x) in gens.iter().enumerate() {
        for r2 in &radicals {
            for n in &degrees {
                checks += 1;
                let lhs = block(i, *n + *r2);
                let rhs = block(i, *n);
                let (law, diff) = match x {
                    // D t^{r′} − t^{r′} D = (u|r′) t^{r+r′}, and t^{r′} is a pure shift
                    HomDer::Witt { u, .. } => {
                        let shift = CycMatrix::scalar(lhs.rows(), &pair(u, r2));
                        ("central-witt", lhs.sub(&rhs).sub(&shift))
                    }
                    HomDer::Inner { .. } => ("central-inner", lhs.sub(&rhs)),
                };
                if let Some((col, res)) = first_bad_column(&diff) {
                    let ce = RepCounterexample {
                        law: law.into(),
                        x: x.to_derivation(),
                        y: None,
                        shift: Some(*r2),
                        degree: *n,
                        basis_index: col,
                        residual: GradedVector::homogeneous(*n + x.degree() + *r2, res),
                    };
                    return report(Some(ce), checks);
                }
            }
        }
    }
    report(None, checks)
}

/// Recomputes a counterexample through the vector-level action; true iff the
/// law still fails there with the recorded residual.
pub fn replay_rep_counterexample(desc: &ModuleDescriptor, ce: &RepCounterexample) -> bool {
    let torus = desc.torus();
    if ce.basis_index >= desc.fiber_dim(&ce.degree) {
        return false;
    }
    let v = GradedVector::basis(desc, ce.degree, ce.basis_index);
    let act = |x: &Derivation, v: &GradedVector| vw_act(x, v, desc).unwrap_or_default();
    let residual = match (ce.law.as_str(), &ce.y, &ce.shift) {
        ("lie", Some(y), _) => {
            let z = der_bracket(torus, &ce.x, y);
            act(&ce.x, &act(y, &v)).sub(&act(y, &act(&ce.x, &v))).sub(&act(&z, &v))
        }
        ("central-witt", _, Some(r2)) | ("central-inner", _, Some(r2)) => {
            let t = TorusElement::monomial(*r2);
            let shift = |w: &GradedVector| vw_act(&t, w, desc).unwrap_or_default();
            let mut res = act(&ce.x, &shift(&v)).sub(&shift(&act(&ce.x, &v)));
            if ce.law == "central-witt" {
                for (r, u) in ce.x.witt_terms() {
                    let s = TorusElement::term(*r + *r2, pair(u, r2));
                    res = res.sub(&vw_act(&s, &v, desc).unwrap_or_default());
                }
            }
            res
        }
        _ => return false,
    };
    !residual.is_zero() && residual == ce.residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_realization::{left_regular_module, GradedGlModule};
    use crate::quantum_torus::Torus;
    use crate::weight_modules::young_module;

    fn desc(ks: &[u64], lambda: &[u32], b: i64, alpha: Vec<CycScalar>) -> ModuleDescriptor {
        let t = Torus::standard(2, ks).unwrap();
        let w = if ks.is_empty() { GradedGlModule::trivial(&t).unwrap() } else { left_regular_module(&t).unwrap() };
        let v = young_module(lambda, 2, &CycScalar::from_int(b)).unwrap();
        ModuleDescriptor::new(&t, v, w, alpha).unwrap()
    }

    #[test]
    fn witt_trivial_passes() {
        let m = desc(&[], &[], 0, vec![CycScalar::zero(), CycScalar::zero()]);
        let r = verify_rep(&m, 2);
        assert!(r.passed, "{:?}", r.counterexample);
    }

    #[test]
    fn natural_left_regular_passes() {
        let m = desc(&[2], &[1], 1, vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)]);
        let r = verify_rep(&m, 2);
        assert!(r.passed, "{:?}", r.counterexample);
        assert!(r.checks > 1000);
    }

    #[test]
    fn corrupted_action_fails_and_replays() {
        let m = desc(&[2], &[1], 1, vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)]).with_corrupted_action();
        let r = verify_rep(&m, 2);
        assert!(!r.passed);
        let ce = r.counterexample.unwrap();
        assert!(replay_rep_counterexample(&m, &ce));
        let json = serde_json::to_string(&ce).unwrap();
        let back: RepCounterexample = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ce);
    }
}
