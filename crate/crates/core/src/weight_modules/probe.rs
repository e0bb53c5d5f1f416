//! Windowed reducibility probes: closures of seeds under all homogeneous
//! generators inside a box, compared with the full weight spaces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GradedVector, ModuleDescriptor};
use crate::cyclotomic::{CycScalar, Rat};
use crate::degree::Degree;
use crate::derivation::{window_generators, HomDer};
use crate::linalg::{CycMatrix, Echelon};

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub degree: Degree,
    pub generated: usize,
    pub full: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeProfile {
    pub seed: String,
    pub radius: i64,
    pub inner_radius: i64,
    pub deficit: bool,
    pub rows: Vec<ProbeRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub verdict: String,
    pub radius: i64,
    pub inner_radius: i64,
    pub rng_seed: u64,
    pub seed_count: usize,
    pub deficient_seeds: Vec<String>,
    pub profiles: Vec<ProbeProfile>,
}

impl ProbeReport {
    pub fn reducible(&self) -> bool {
        !self.deficient_seeds.is_empty()
    }
}

/// radius − L·d, floored at 0.
pub fn inner_radius(desc: &ModuleDescriptor, radius: i64) -> i64 {
    (radius - desc.torus().order() as i64 * desc.dim() as i64).max(0)
}

/// Closure of the seed under every homogeneous generator of degree in the
/// window, keeping only vectors supported in the window.
pub fn submodule_probe(desc: &ModuleDescriptor, seed: &GradedVector, radius: i64) -> ProbeProfile {
    probe_with_label(desc, seed, radius, "custom".into())
}

fn probe_with_label(desc: &ModuleDescriptor, seed: &GradedVector, radius: i64, label: String) -> ProbeProfile {
    let gens = window_generators(desc.torus(), radius);
    let inner = inner_radius(desc, radius);
    let mut spaces: BTreeMap<Degree, Echelon> = BTreeMap::new();
    let mut work: Vec<(Degree, Vec<CycScalar>)> = vec![];
    // submodules of a weight module are graded, so components can be seeded separately
    for (n, c) in seed.components() {
        if n.inf_norm() <= radius && insert(&mut spaces, desc, n, c) {
            work.push((*n, c.clone()));
        }
    }
    let mut blocks: BTreeMap<(usize, Degree), CycMatrix> = BTreeMap::new();
    while let Some((n, v)) = work.pop() {
        for (gi, g) in gens.iter().enumerate() {
            let m = n + g.degree();
            if m.inf_norm() > radius {
                continue;
            }
            let block = blocks.entry((gi, n)).or_insert_with(|| desc.op_block(g, &n));
            let w = block.mul_vec(&v);
            if insert(&mut spaces, desc, &m, &w) {
                work.push((m, w));
            }
        }
    }
    let rows: Vec<ProbeRow> = Degree::window(desc.dim(), inner)
        .into_iter()
        .map(|n| ProbeRow { degree: n, generated: spaces.get(&n).map_or(0, Echelon::rank), full: desc.fiber_dim(&n) })
        .collect();
    let deficit = rows.iter().any(|r| r.generated < r.full);
    ProbeProfile { seed: label, radius, inner_radius: inner, deficit, rows }
}

fn insert(spaces: &mut BTreeMap<Degree, Echelon>, desc: &ModuleDescriptor, n: &Degree, v: &[CycScalar]) -> bool {
    if v.iter().all(CycScalar::is_zero) {
        return false;
    }
    spaces.entry(*n).or_insert_with(|| Echelon::new(desc.fiber_dim(n))).insert(v)
}

/// Seeds: the degree-0 basis; the degree −α basis when α is integral; rational
/// eigenvectors of a random combination of degree-0 return operators; and
/// `random_count` random vectors. Deterministic in `rng_seed`.
pub fn probe_seeds(
    desc: &ModuleDescriptor,
    radius: i64,
    rng_seed: u64,
    random_count: usize,
) -> Vec<(String, GradedVector)> {
    let d = desc.dim();
    let zero = Degree::zero(d);
    let inner = inner_radius(desc, radius);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seeds = vec![];
    for i in 0..desc.fiber_dim(&zero) {
        seeds.push((format!("basis {i} at {zero}"), GradedVector::basis(desc, zero, i)));
    }
    if let Some(a) = desc.integral_alpha() {
        let n = -a;
        if n.inf_norm() <= inner && !n.is_zero() {
            for i in 0..desc.fiber_dim(&n) {
                seeds.push((format!("basis {i} at {n}"), GradedVector::basis(desc, n, i)));
            }
        }
    }
    let ret = return_operator(desc, &mut rng);
    for root in rational_roots(&ret.char_poly()) {
        let shifted = ret.sub(&CycMatrix::scalar(ret.rows(), &CycScalar::from_rat(root.clone())));
        for (k, v) in shifted.kernel().into_iter().enumerate() {
            seeds.push((format!("eigenvector {k} for {root} at {zero}"), GradedVector::homogeneous(zero, v)));
        }
    }
    for k in 0..random_count {
        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-inner..=inner)).collect();
        let n = Degree::new(&coords);
        let mut c: Vec<CycScalar> = (0..desc.fiber_dim(&n)).map(|_| CycScalar::from_int(rng.gen_range(-5..=5))).collect();
        if c.iter().all(CycScalar::is_zero) {
            c[0] = CycScalar::one();
        }
        seeds.push((format!("random {k} at {n}"), GradedVector::homogeneous(n, c)));
    }
    seeds
}

/// A random integer combination of products y∘x of generators with deg y = −deg x,
/// as an endomorphism of the degree-0 fiber.
fn return_operator(desc: &ModuleDescriptor, rng: &mut ChaCha8Rng) -> CycMatrix {
    let d = desc.dim();
    let zero = Degree::zero(d);
    let dim = desc.fiber_dim(&zero);
    let gens: Vec<HomDer> = window_generators(desc.torus(), desc.torus().order() as i64);
    let mut out = CycMatrix::zeros(dim, dim);
    for x in &gens {
        for y in gens.iter().filter(|y| y.degree() == -x.degree()) {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                let p = desc.op_block(y, &x.degree()).mul(&desc.op_block(x, &zero));
                out = out.add(&p.scale(&CycScalar::from_int(c)));
            }
        }
    }
    out
}

/// The distinct rational roots of a polynomial (lowest degree first) with
/// rational coefficients. Gives up (returns the roots found so far) when the
/// constant and leading terms are too large to enumerate divisors.
pub fn rational_roots(poly: &[CycScalar]) -> Vec<Rat> {
    let Some(coeffs) = poly.iter().map(|c| c.as_rational().cloned()).collect::<Option<Vec<Rat>>>() else {
        return vec![];
    };
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = vec![];
    let low = ints.iter().take_while(|c| c.is_zero()).count();
    if low == ints.len() {
        return roots;
    }
    if low > 0 {
        roots.push(Rat::ZERO);
        ints.drain(..low);
    }
    let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints.last().and_then(|c| c.abs().to_u64())) else {
        return roots;
    };
    const LIMIT: u64 = 1_000_000_000_000;
    if a0 > LIMIT || an > LIMIT {
        return roots;
    }
    let rats: Vec<Rat> = ints.iter().map(|c| Rat::from(BigRational::from_integer(c.clone()))).collect();
    let eval = |x: &Rat| rats.iter().rev().fold(Rat::ZERO, |acc, c| &(&acc * x) + c);
    let mut found: Vec<Rat> = vec![];
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let x = Rat::new(sign * p as i64, q as i64);
                if !found.contains(&x) && eval(&x).is_zero() {
                    found.push(x);
                }
            }
        }
    }
    found.sort();
    roots.extend(found);
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = vec![];
    let mut large = vec![];
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Runs the probe from every seed; window-reducible iff some seed leaves an
/// interior weight space unfilled.
pub fn probe_reducibility(desc: &ModuleDescriptor, radius: i64, rng_seed: u64, random_count: usize) -> ProbeReport {
    let seeds = probe_seeds(desc, radius, rng_seed, random_count);
    let profiles: Vec<ProbeProfile> =
        seeds.into_iter().map(|(label, v)| probe_with_label(desc, &v, radius, label)).collect();
    let deficient_seeds: Vec<String> = profiles.iter().filter(|p| p.deficit).map(|p| p.seed.clone()).collect();
    ProbeReport {
        verdict: if deficient_seeds.is_empty() { "window-irreducible" } else { "window-reducible" }.into(),
        radius,
        inner_radius: inner_radius(desc, radius),
        rng_seed,
        seed_count: profiles.len(),
        deficient_seeds,
        profiles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_realization::GradedGlModule;
    use crate::quantum_torus::Torus;
    use crate::weight_modules::young_module;

    fn witt(lambda: &[u32], b: i64, alpha: Vec<CycScalar>) -> ModuleDescriptor {
        let t = Torus::standard(2, &[]).unwrap();
        let v = young_module(lambda, 2, &CycScalar::from_int(b)).unwrap();
        ModuleDescriptor::new(&t, v, GradedGlModule::trivial(&t).unwrap(), alpha).unwrap()
    }

    #[test]
    fn roots_of_small_polynomials() {
        // (x - 2)(2x + 3)x = 2x^3 - x^2 - 6x
        let p: Vec<CycScalar> = [0, -6, -1, 2].iter().map(|&c| CycScalar::from_int(c)).collect();
        assert_eq!(rational_roots(&p), vec![Rat::ZERO, Rat::new(-3, 2), Rat::from_int(2)]);
        let q: Vec<CycScalar> = [-2, 0, 1].iter().map(|&c| CycScalar::from_int(c)).collect();
        assert!(rational_roots(&q).is_empty());
    }

    #[test]
    fn gradient_submodule_is_found() {
        let m = witt(&[1], 1, vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)]);
        let r = probe_reducibility(&m, 4, 7, 3);
        assert!(r.reducible(), "{:?}", r.deficient_seeds);
    }

    #[test]
    fn constants_are_found() {
        let m = witt(&[], 0, vec![CycScalar::from_int(1), CycScalar::from_int(-1)]);
        let r = probe_reducibility(&m, 4, 7, 3);
        assert!(r.reducible());
    }

    #[test]
    fn generic_b_fills_the_interior() {
        let m = witt(&[1], 5, vec![CycScalar::rational(1, 2), CycScalar::rational(1, 3)]);
        let r = probe_reducibility(&m, 4, 7, 3);
        assert!(!r.reducible(), "{:?}", r.deficient_seeds);
        assert!(r.seed_count >= 3);
    }
}
