//! Exhaustive and randomized verification sweeps over windows of degrees.
//!
//! Each sweep returns a [`SuiteReport`]; a failing sweep carries a
//! counterexample that [`replay`] re-verifies through the generic code paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclotomic::{cyclotomic_polynomial, CycScalar, Rat};
use crate::degree::Degree;
use crate::derivation::{der_bracket, hom_bracket, hom_sum_is_zero, window_generators, Derivation, HomDer};
use crate::gl_realization::{x_power_monomial, MonomialMatrix};
use crate::quantum_torus::{qt_mul, Torus, TorusElement};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub details: Value,
    pub counterexample: Option<Value>,
}

impl SuiteReport {
    fn pass(suite: &str, checks: u64, details: Value) -> SuiteReport {
        SuiteReport { suite: suite.into(), passed: true, checks, details, counterexample: None }
    }

    fn fail(suite: &str, checks: u64, details: Value, ce: Value) -> SuiteReport {
        SuiteReport { suite: suite.into(), passed: false, checks, details, counterexample: Some(ce) }
    }
}

/// Mixed-radix index of the box [-radius, radius]^d, first coordinate most
/// significant (the order of [`Degree::window`]).
#[derive(Clone, Copy)]
struct BoxIndex {
    d: usize,
    radius: i64,
    side: i64,
}

impl BoxIndex {
    fn new(d: usize, radius: i64) -> BoxIndex {
        BoxIndex { d, radius, side: 2 * radius + 1 }
    }

    fn len(&self) -> usize {
        self.side.pow(self.d as u32) as usize
    }

    /// Σ n_i side^{d-1-i}; index(n) = offset(n) + offset of the corner.
    fn offset(&self, n: &Degree) -> i64 {
        n.as_slice().iter().fold(0, |acc, &x| acc * self.side + x)
    }

    fn center(&self) -> i64 {
        (0..self.d).fold(0, |acc, _| acc * self.side + self.radius)
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, order: u64) -> CycScalar {
    let mut x = CycScalar::zero_in(order);
    for j in 0..order {
        let num = rng.gen_range(-9..=9);
        if num != 0 {
            let c = Rat::new(num, rng.gen_range(1..=5));
            x = x.add(&CycScalar::root_of_unity(j as i64, order).mul_rat(&c));
        }
    }
    x
}

/// Field axioms, Φ_L(ζ_L) = 0 and a·a⁻¹ = 1 on `cases` random elements per order.
pub fn cyclotomic_suite(orders: &[u64], cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0u64;
    let details = json!({ "orders": orders, "cases": cases, "seed": seed });
    for &l in orders {
        let zeta = CycScalar::root_of_unity(1, l);
        let phi = cyclotomic_polynomial(l);
        let value = phi.iter().rev().fold(CycScalar::zero(), |acc, &c| acc.mul(&zeta).add(&CycScalar::from_int(c)));
        checks += 1;
        if !value.is_zero() {
            return SuiteReport::fail("cyclotomic", checks, details, json!({ "order": l, "law": "cyclotomic polynomial" }));
        }
        let one = CycScalar::one();
        let zero = CycScalar::zero();
        for case in 0..cases {
            let a = random_scalar(&mut rng, l);
            let b = random_scalar(&mut rng, l);
            let c = random_scalar(&mut rng, l);
            let laws: [(&str, bool); 9] = [
                ("additive associativity", a.add(&b).add(&c) == a.add(&b.add(&c))),
                ("additive commutativity", a.add(&b) == b.add(&a)),
                ("multiplicative associativity", a.mul(&b).mul(&c) == a.mul(&b.mul(&c))),
                ("multiplicative commutativity", a.mul(&b) == b.mul(&a)),
                ("distributivity", a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c))),
                ("additive identity", a.add(&zero) == a),
                ("multiplicative identity", a.mul(&one) == a),
                ("additive inverse", a.add(&a.neg()).is_zero()),
                ("inverse", a.is_zero() || a.mul(&a.inv().expect("nonzero element is invertible")) == one),
            ];
            checks += laws.len() as u64;
            if let Some((law, _)) = laws.iter().find(|(_, ok)| !ok) {
                let ce = json!({ "order": l, "case": case, "law": law, "a": a, "b": b, "c": c });
                return SuiteReport::fail("cyclotomic", checks, details, ce);
            }
        }
    }
    SuiteReport::pass("cyclotomic", checks, details)
}

/// σ(a,b)σ(a+b,c) = σ(b,c)σ(a,b+c) and associativity of monomials for every
/// triple in the window; qt_mul agrees with σ on every pair; plus associativity
/// of qt_mul on `random_cases` random multi-term triples.
pub fn cocycle_suite(torus: &Torus, window: i64, random_cases: usize, seed: u64) -> SuiteReport {
    let d = torus.dim();
    let l = torus.order() as i64;
    let small = BoxIndex::new(d, window);
    let big = BoxIndex::new(d, 2 * window);
    let pts = Degree::window(d, window);
    let big_pts = Degree::window(d, 2 * window);
    let details = json!({ "window": window, "random_cases": random_cases, "seed": seed });
    let mut checks = 0u64;

    // σ exponents for (big, small) and (small, big) argument pairs
    let sb: Vec<u16> = big_pts.iter().flat_map(|x| pts.iter().map(move |y| (x, y))).map(|(x, y)| torus.sigma_exp(x, y) as u16).collect();
    let bs: Vec<u16> = pts.iter().flat_map(|x| big_pts.iter().map(move |y| (x, y))).map(|(x, y)| torus.sigma_exp(x, y) as u16).collect();
    let n_small = small.len();
    let n_big = big.len();
    let off: Vec<i64> = pts.iter().map(|p| big.offset(p)).collect();
    let c0 = big.center();
    let small_in_big: Vec<usize> = off.iter().map(|o| (o + c0) as usize).collect();

    // qt_mul on monomials agrees with the σ table
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            checks += 1;
            let e = sb[small_in_big[i] * n_small + j] as i64;
            let got = qt_mul(torus, &TorusElement::monomial(*a), &TorusElement::monomial(*b));
            if got != TorusElement::term(*a + *b, CycScalar::root_of_unity(e, l as u64)) {
                return SuiteReport::fail("cocycle", checks, details, json!({ "law": "monomial product", "a": a, "b": b }));
            }
        }
    }

    for (ia, a) in pts.iter().enumerate() {
        let a_big = small_in_big[ia];
        for ib in 0..n_small {
            let s_ab = sb[a_big * n_small + ib] as i64;
            let ab = (off[ia] + off[ib] + c0) as usize;
            let row_ab = &sb[ab * n_small..(ab + 1) * n_small];
            let row_a = &bs[ia * n_big..(ia + 1) * n_big];
            let b_big = small_in_big[ib];
            let row_b = &sb[b_big * n_small..(b_big + 1) * n_small];
            for ic in 0..n_small {
                let bc = (off[ib] + off[ic] + c0) as usize;
                let lhs = s_ab + row_ab[ic] as i64;
                let rhs = row_b[ic] as i64 + row_a[bc] as i64;
                if (lhs - rhs) % l != 0 {
                    checks += 1;
                    let ce = json!({ "law": "cocycle", "a": a, "b": pts[ib], "c": pts[ic] });
                    return SuiteReport::fail("cocycle", checks, details, ce);
                }
            }
            checks += n_small as u64;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let element = |rng: &mut ChaCha8Rng| {
        let terms = rng.gen_range(1..=3);
        TorusElement::from_terms((0..terms).map(|_| {
            let deg = pts[rng.gen_range(0..pts.len())];
            (deg, CycScalar::from_int(rng.gen_range(-4..=4)))
        }))
    };
    for case in 0..random_cases {
        let (x, y, z) = (element(&mut rng), element(&mut rng), element(&mut rng));
        checks += 1;
        if torus.mul(&torus.mul(&x, &y), &z) != torus.mul(&x, &torus.mul(&y, &z)) {
            let ce = json!({ "law": "associativity", "case": case, "x": x, "y": y, "z": z });
            return SuiteReport::fail("cocycle", checks, details, ce);
        }
    }
    SuiteReport::pass("cocycle", checks, details)
}

/// Rad(f) from the Smith form against the brute-force kernel of f on the
/// window, and the shape of Δ.
pub fn radical_suite(torus: &Torus, window: i64) -> SuiteReport {
    let rad = torus.rad();
    let d = torus.dim();
    let pts = Degree::window(d, window);
    let n = rad.n() as usize;
    let details = json!({ "window": window, "N": n, "gamma_order": rad.gamma_order() });
    let mut checks = 0u64;
    for p in &pts {
        checks += 1;
        let brute = pts.iter().all(|m| torus.q().f_exp(p, m) == 0);
        if brute != rad.contains(p) {
            return SuiteReport::fail("radical", checks, details, json!({ "degree": p, "brute_force": brute }));
        }
    }
    checks += 1;
    if rad.gamma_order() != n * n {
        return SuiteReport::fail("radical", checks, details, json!({ "law": "|Δ| = N^2" }));
    }
    for (i, delta) in rad.delta().iter().enumerate() {
        checks += 1;
        if rad.coset_index(delta) != i || rad.coset_rep(delta) != *delta {
            return SuiteReport::fail("radical", checks, details, json!({ "law": "Δ indexing", "delta": delta }));
        }
    }
    for j in 0..d {
        checks += 1;
        if !rad.contains(&rad.xi(j)) {
            return SuiteReport::fail("radical", checks, details, json!({ "law": "ξ in Rad(f)", "j": j }));
        }
    }
    SuiteReport::pass("radical", checks, details)
}

/// X^n X^m = σ(n,m) X^{n+m} for all n, m in the window, and X^r = E for r ∈ Rad(f).
///
/// The monomial matrices are first shown to depend only on n mod Rad(f) over
/// the whole window; every pair is then reduced to its cosets and compared
/// with a table of genuine products over Δ × Δ.
pub fn loop_hom_suite(torus: &Torus, window: i64) -> SuiteReport {
    let rad = torus.rad();
    let d = torus.dim();
    let l = torus.order() as i64;
    let details = json!({ "window": window });
    let mut checks = 0u64;
    if !torus.q().is_normal_form() {
        return SuiteReport::fail("loop-hom", 0, details, json!({ "reason": "q is not in normal form" }));
    }
    let delta = rad.delta();
    let reps: Vec<MonomialMatrix> = delta.iter().map(|n| x_power_monomial(n, torus)).collect();
    let pts = Degree::window(d, window);
    let mut coset = Vec::with_capacity(pts.len());
    for n in &pts {
        checks += 1;
        let idx = rad.coset_index(n);
        if x_power_monomial(n, torus) != reps[idx] {
            return SuiteReport::fail("loop-hom", checks, details, json!({ "law": "periodicity", "n": n }));
        }
        if rad.contains(n) && !reps[idx].is_identity() {
            return SuiteReport::fail("loop-hom", checks, details, json!({ "law": "X^r = E", "r": n }));
        }
        coset.push(idx as u16);
    }

    let g = delta.len();
    let mut table = vec![0u16; g * g];
    for (a, da) in delta.iter().enumerate() {
        for (b, db) in delta.iter().enumerate() {
            checks += 1;
            let prod = reps[a].mul(&reps[b]);
            let target = &reps[rad.coset_index(&(*da + *db))];
            let Some(e) = prod.ratio_exponent(target) else {
                return SuiteReport::fail("loop-hom", checks, details, json!({ "law": "monomial product", "n": da, "m": db }));
            };
            table[a * g + b] = e as u16;
        }
    }

    // σ(n, ·) is linear: walk m in window order, stepping the last coordinate
    let side = (2 * window + 1) as usize;
    let q = torus.q();
    for (i, n) in pts.iter().enumerate() {
        let row = &table[coset[i] as usize * g..(coset[i] as usize + 1) * g];
        // σ(n, m) = Σ_i w_i m_i with w_i = Σ_{j>i} e_ji n_j
        let w: Vec<i64> = (0..d)
            .map(|k| (k + 1..d).map(|j| q.exponent(j, k) * n[j]).sum::<i64>().rem_euclid(l))
            .collect();
        let step = w[d - 1];
        for (chunk_idx, chunk) in coset.chunks(side).enumerate() {
            let head = pts[chunk_idx * side];
            let mut s = (0..d).map(|k| w[k] * head[k]).sum::<i64>().rem_euclid(l);
            for (k, &c) in chunk.iter().enumerate() {
                if s != row[c as usize] as i64 {
                    checks += k as u64 + 1;
                    let m = pts[chunk_idx * side + k];
                    return SuiteReport::fail("loop-hom", checks, details, json!({ "law": "X^n X^m = σ(n,m) X^{n+m}", "n": n, "m": m }));
                }
                s += step;
                if s >= l {
                    s -= l;
                }
            }
            checks += chunk.len() as u64;
        }
    }
    SuiteReport::pass("loop-hom", checks, details)
}

/// Antisymmetry on ordered pairs and the Jacobi identity on unordered triples
/// of homogeneous generators with degrees in the window.
pub fn jacobi_suite(torus: &Torus, window: i64) -> SuiteReport {
    let gens = window_generators(torus, window);
    let details = json!({ "window": window, "generators": gens.len() });
    let mut checks = 0u64;
    let mut pairs: Vec<Option<HomDer>> = Vec::with_capacity(gens.len() * gens.len());
    for x in &gens {
        for y in &gens {
            pairs.push(hom_bracket(torus, x, y));
        }
    }
    let g = gens.len();
    for i in 0..g {
        for j in 0..g {
            checks += 1;
            if !hom_sum_is_zero(&[pairs[i * g + j].clone(), pairs[j * g + i].clone()]) {
                let ce = json!({ "law": "antisymmetry", "x": gens[i].to_derivation(), "y": gens[j].to_derivation() });
                return SuiteReport::fail("jacobi", checks, details, ce);
            }
        }
    }
    let outer = |x: &HomDer, inner: &Option<HomDer>| inner.as_ref().and_then(|h| hom_bracket(torus, x, h));
    for i in 0..g {
        for j in i + 1..g {
            for k in j + 1..g {
                checks += 1;
                let terms = [
                    outer(&gens[i], &pairs[j * g + k]),
                    outer(&gens[j], &pairs[k * g + i]),
                    outer(&gens[k], &pairs[i * g + j]),
                ];
                if !hom_sum_is_zero(&terms) {
                    let ce = json!({
                        "law": "jacobi",
                        "x": gens[i].to_derivation(),
                        "y": gens[j].to_derivation(),
                        "z": gens[k].to_derivation(),
                    });
                    return SuiteReport::fail("jacobi", checks, details, ce);
                }
            }
        }
    }
    SuiteReport::pass("jacobi", checks, details)
}

/// Re-evaluates a counterexample of the algebra sweeps through the general
/// code paths (BTreeMap elements, der_bracket); true iff the failure reproduces.
pub fn replay(torus: &Torus, suite: &str, ce: &Value) -> bool {
    let deg = |key: &str| serde_json::from_value::<Degree>(ce.get(key)?.clone()).ok();
    let der = |key: &str| serde_json::from_value::<Derivation>(ce.get(key)?.clone()).ok();
    let law = ce.get("law").and_then(Value::as_str).unwrap_or("");
    match (suite, law) {
        ("jacobi", "jacobi") => {
            let (Some(x), Some(y), Some(z)) = (der("x"), der("y"), der("z")) else { return false };
            let b = |a: &Derivation, c: &Derivation| der_bracket(torus, a, c);
            !b(&x, &b(&y, &z)).add(&b(&y, &b(&z, &x))).add(&b(&z, &b(&x, &y))).is_zero()
        }
        ("jacobi", "antisymmetry") => {
            let (Some(x), Some(y)) = (der("x"), der("y")) else { return false };
            !der_bracket(torus, &x, &y).add(&der_bracket(torus, &y, &x)).is_zero()
        }
        ("cocycle", "cocycle") => {
            let (Some(a), Some(b), Some(c)) = (deg("a"), deg("b"), deg("c")) else { return false };
            let m = TorusElement::monomial;
            torus.mul(&torus.mul(&m(a), &m(b)), &m(c)) != torus.mul(&m(a), &torus.mul(&m(b), &m(c)))
        }
        ("loop-hom", "X^n X^m = σ(n,m) X^{n+m}") => {
            let (Some(n), Some(m)) = (deg("n"), deg("m")) else { return false };
            let lhs = x_power_monomial(&n, torus).mul(&x_power_monomial(&m, torus));
            let rhs = x_power_monomial(&(n + m), torus);
            lhs.ratio_exponent(&rhs) != Some(torus.sigma_exp(&n, &m) as u64)
        }
        ("radical", _) => {
            let Some(p) = deg("degree") else { return false };
            let w = p.inf_norm().max(1);
            let brute = Degree::window(torus.dim(), w).iter().all(|m| torus.q().f_exp(&p, m) == 0);
            brute != torus.rad().contains(&p)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl_realization::x_power;

    fn c(d: usize, ks: &[u64]) -> Torus {
        Torus::standard(d, ks).unwrap()
    }

    #[test]
    fn box_index_matches_window_order() {
        let b = BoxIndex::new(3, 2);
        for (i, n) in Degree::window(3, 2).iter().enumerate() {
            assert_eq!((b.offset(n) + b.center()) as usize, i);
        }
    }

    #[test]
    fn cyclotomic_suite_passes() {
        assert!(cyclotomic_suite(&[1, 2, 3, 4, 8, 12], 30, 1).passed);
    }

    #[test]
    fn small_sweeps_pass() {
        for t in [c(2, &[2]), c(2, &[4]), c(3, &[2]), c(2, &[])] {
            assert!(cocycle_suite(&t, 1, 20, 3).passed);
            assert!(radical_suite(&t, 3).passed);
            assert!(loop_hom_suite(&t, 2 * t.order() as i64).passed);
            assert!(jacobi_suite(&t, 1).passed);
        }
    }

    /// The table reduction agrees with literal dense products on small windows.
    #[test]
    fn loop_hom_matches_dense_products() {
        for t in [c(2, &[2]), c(2, &[4]), c(3, &[2])] {
            let pts = Degree::window(t.dim(), 1);
            for n in &pts {
                for m in &pts {
                    let lhs = x_power(n, &t).mul(&x_power(m, &t));
                    let rhs = x_power(&(*n + *m), &t).scale(&t.sigma(n, m));
                    assert_eq!(lhs, rhs, "n = {n}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn corrupted_sigma_is_caught_and_replays() {
        let t = c(2, &[2]).with_sigma_fault(Degree::new(&[1, 0]));
        let r = jacobi_suite(&t, 2);
        assert!(!r.passed);
        assert!(replay(&t, "jacobi", r.counterexample.as_ref().unwrap()));
        let r = cocycle_suite(&t, 2, 0, 0);
        assert!(!r.passed);
    }
}
