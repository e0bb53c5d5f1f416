//! The derivation algebra Der(ℂ_q): inner parts ad(t^s) for s ∉ Rad(f), Witt
//! parts D(u, r) for r ∈ Rad(f), their bracket and actions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::quantum_torus::{TorusElement, Torus};

/// (u | n) for an integer degree n.
pub fn pair(u: &[CycScalar], n: &Degree) -> CycScalar {
    let mut acc = CycScalar::zero();
    for (x, &k) in u.iter().zip(n.as_slice()) {
        if k != 0 && !x.is_zero() {
            acc = acc.add(&x.mul_int(k));
        }
    }
    acc
}

/// (u | v) for scalar vectors.
pub fn pair_vec(u: &[CycScalar], v: &[CycScalar]) -> CycScalar {
    u.iter().zip(v).fold(CycScalar::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
}

/// A homogeneous derivation: c·ad(t^s) or D(u, r).
#[derive(Clone, PartialEq, Eq)]
pub enum HomDer {
    Inner { deg: Degree, coeff: CycScalar },
    Witt { deg: Degree, u: Vec<CycScalar> },
}

impl HomDer {
    pub fn degree(&self) -> Degree {
        match self {
            HomDer::Inner { deg, .. } | HomDer::Witt { deg, .. } => *deg,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            HomDer::Inner { coeff, .. } => coeff.is_zero(),
            HomDer::Witt { u, .. } => u.iter().all(CycScalar::is_zero),
        }
    }

    pub fn scale(&self, c: &CycScalar) -> HomDer {
        match self {
            HomDer::Inner { deg, coeff } => HomDer::Inner { deg: *deg, coeff: coeff.mul(c) },
            HomDer::Witt { deg, u } => HomDer::Witt { deg: *deg, u: u.iter().map(|x| x.mul(c)).collect() },
        }
    }

    pub fn to_derivation(&self) -> Derivation {
        let mut out = Derivation::zero();
        out.add_hom(self.clone());
        out
    }
}

impl fmt::Debug for HomDer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDer::Inner { deg, coeff } => write!(f, "({coeff})ad(t^{deg})"),
            HomDer::Witt { deg, u } => write!(f, "D({u:?}, {deg})"),
        }
    }
}

/// c·σ(r, n); σ(r, ·) = 1 for r ∈ Rad(f) when q is in normal form.
fn twist(torus: &Torus, r: &Degree, n: &Degree, c: CycScalar) -> CycScalar {
    match torus.sigma_exp(r, n) {
        0 => c,
        _ => c.mul(&torus.sigma(r, n)),
    }
}

/// Bracket of homogeneous derivations; `None` when the result vanishes identically.
///
/// For s + s′ ∈ Rad(f) the inner-inner bracket would be a multiple of
/// ad(t^{s+s′}), which is zero because t^{s+s′} is central.
pub fn hom_bracket(torus: &Torus, x: &HomDer, y: &HomDer) -> Option<HomDer> {
    let out = match (x, y) {
        (HomDer::Inner { deg: s, coeff: a }, HomDer::Inner { deg: t, coeff: b }) => {
            let deg = *s + *t;
            if torus.rad().contains(&deg) {
                return None;
            }
            let c = torus.commutator_coeff(s, t);
            if c.is_zero() {
                return None;
            }
            HomDer::Inner { deg, coeff: a.mul(b).mul(&c) }
        }
        (HomDer::Witt { deg: r, u }, HomDer::Inner { deg: s, coeff }) => {
            HomDer::Inner { deg: *r + *s, coeff: twist(torus, r, s, pair(u, s).mul(coeff)) }
        }
        (HomDer::Inner { deg: s, coeff }, HomDer::Witt { deg: r, u }) => {
            HomDer::Inner { deg: *r + *s, coeff: twist(torus, r, s, pair(u, s).mul(coeff).neg()) }
        }
        (HomDer::Witt { deg: r, u }, HomDer::Witt { deg: r2, u: u2 }) => {
            // w = (u|r′)u′ − (u′|r)u
            let a = twist(torus, r, r2, pair(u, r2));
            let b = twist(torus, r, r2, pair(u2, r));
            let w = u.iter().zip(u2).map(|(x, y)| a.mul(y).sub(&b.mul(x))).collect();
            HomDer::Witt { deg: *r + *r2, u: w }
        }
    };
    (!out.is_zero()).then_some(out)
}

/// A finite sum of homogeneous derivations.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    inner: BTreeMap<Degree, CycScalar>,
    witt: BTreeMap<Degree, Vec<CycScalar>>,
}

impl Derivation {
    pub fn zero() -> Derivation {
        Derivation::default()
    }

    /// ad(t^s), s ∉ Rad(f).
    pub fn ad(torus: &Torus, s: Degree) -> Result<Derivation> {
        torus.check_degree(&s)?;
        if torus.rad().contains(&s) {
            return Err(Error::InRadical(s.to_string()));
        }
        Ok(HomDer::Inner { deg: s, coeff: CycScalar::one() }.to_derivation())
    }

    /// D(u, r) = t^r Σ u_i ∂_i, r ∈ Rad(f).
    pub fn d(torus: &Torus, u: &[CycScalar], r: Degree) -> Result<Derivation> {
        torus.check_degree(&r)?;
        if u.len() != torus.dim() {
            return Err(Error::Dimension(format!("u has length {}, expected {}", u.len(), torus.dim())));
        }
        if !torus.rad().contains(&r) {
            return Err(Error::NotInRadical(r.to_string()));
        }
        Ok(HomDer::Witt { deg: r, u: u.to_vec() }.to_derivation())
    }

    /// ∂_i = D(e_i, 0).
    pub fn partial(torus: &Torus, i: usize) -> Derivation {
        let d = torus.dim();
        let u: Vec<CycScalar> = (0..d).map(|j| CycScalar::from_int((i == j) as i64)).collect();
        Derivation::d(torus, &u, Degree::zero(d)).expect("0 lies in Rad(f)")
    }

    pub fn add_hom(&mut self, h: HomDer) {
        match h {
            HomDer::Inner { deg, coeff } => {
                let c = self.inner.get(&deg).map_or(coeff.clone(), |x| x.add(&coeff));
                if c.is_zero() {
                    self.inner.remove(&deg);
                } else {
                    self.inner.insert(deg, c);
                }
            }
            HomDer::Witt { deg, u } => {
                let w: Vec<CycScalar> = match self.witt.get(&deg) {
                    Some(prev) => prev.iter().zip(&u).map(|(a, b)| a.add(b)).collect(),
                    None => u,
                };
                if w.iter().all(CycScalar::is_zero) {
                    self.witt.remove(&deg);
                } else {
                    self.witt.insert(deg, w);
                }
            }
        }
    }

    pub fn homs(&self) -> impl Iterator<Item = HomDer> + '_ {
        let inner = self.inner.iter().map(|(d, c)| HomDer::Inner { deg: *d, coeff: c.clone() });
        let witt = self.witt.iter().map(|(d, u)| HomDer::Witt { deg: *d, u: u.clone() });
        inner.chain(witt)
    }

    pub fn inner_terms(&self) -> &BTreeMap<Degree, CycScalar> {
        &self.inner
    }

    pub fn witt_terms(&self) -> &BTreeMap<Degree, Vec<CycScalar>> {
        &self.witt
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_empty() && self.witt.is_empty()
    }

    /// Homogeneous of the given degree (or zero).
    pub fn is_homogeneous_of(&self, deg: &Degree) -> bool {
        self.inner.keys().chain(self.witt.keys()).all(|d| d == deg)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        for h in other.homs() {
            out.add_hom(h);
        }
        out
    }

    pub fn scale(&self, c: &CycScalar) -> Derivation {
        let mut out = Derivation::zero();
        for h in self.homs() {
            out.add_hom(h.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    /// Whether every inner degree avoids Rad(f) and every Witt degree lies in it.
    pub fn is_well_formed(&self, torus: &Torus) -> bool {
        self.inner.keys().all(|d| !torus.rad().contains(d)) && self.witt.keys().all(|d| torus.rad().contains(d))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.homs().map(|h| format!("{h:?}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InnerRepr {
    degree: Degree,
    coeff: CycScalar,
}

#[derive(Serialize, Deserialize)]
struct WittRepr {
    degree: Degree,
    u: Vec<CycScalar>,
}

#[derive(Serialize, Deserialize)]
struct DerivationRepr {
    inner: Vec<InnerRepr>,
    witt: Vec<WittRepr>,
}

impl Serialize for Derivation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DerivationRepr {
            inner: self.inner.iter().map(|(d, c)| InnerRepr { degree: *d, coeff: c.clone() }).collect(),
            witt: self.witt.iter().map(|(d, u)| WittRepr { degree: *d, u: u.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Derivation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Derivation, D::Error> {
        let repr = DerivationRepr::deserialize(d)?;
        let mut out = Derivation::zero();
        for t in repr.inner {
            out.add_hom(HomDer::Inner { deg: t.degree, coeff: t.coeff });
        }
        for t in repr.witt {
            out.add_hom(HomDer::Witt { deg: t.degree, u: t.u });
        }
        Ok(out)
    }
}

pub fn der_bracket(torus: &Torus, x: &Derivation, y: &Derivation) -> Derivation {
    let mut out = Derivation::zero();
    for a in x.homs() {
        for b in y.homs() {
            if let Some(h) = hom_bracket(torus, &a, &b) {
                out.add_hom(h);
            }
        }
    }
    out
}

/// t^r · x for r ∈ Rad(f): shifts every degree by r, with the factor σ(r, ·).
pub fn z_act(torus: &Torus, r: &Degree, x: &Derivation) -> Result<Derivation> {
    if !torus.rad().contains(r) {
        return Err(Error::NotInRadical(r.to_string()));
    }
    let mut out = Derivation::zero();
    for h in x.homs() {
        out.add_hom(match h {
            HomDer::Inner { deg, coeff } => HomDer::Inner { deg: deg + *r, coeff: twist(torus, r, &deg, coeff) },
            HomDer::Witt { deg, u } => {
                let c = torus.sigma(r, &deg);
                HomDer::Witt { deg: deg + *r, u: u.iter().map(|x| x.mul(&c)).collect() }
            }
        });
    }
    Ok(out)
}

/// The action of a homogeneous derivation on t^n, as (coefficient, degree).
pub fn hom_apply_monomial(torus: &Torus, h: &HomDer, n: &Degree) -> (CycScalar, Degree) {
    match h {
        HomDer::Inner { deg, coeff } => (coeff.mul(&torus.commutator_coeff(deg, n)), *deg + *n),
        HomDer::Witt { deg, u } => (twist(torus, deg, n, pair(u, n)), *deg + *n),
    }
}

/// x·a for a ∈ ℂ_q: D(u,r)·t^n = (u|n)t^r t^n, ad(t^s)·t^n = [t^s, t^n].
pub fn der_apply(torus: &Torus, x: &Derivation, a: &TorusElement) -> TorusElement {
    let mut out = TorusElement::zero();
    for h in x.homs() {
        for (n, c) in a.terms() {
            let (k, deg) = hom_apply_monomial(torus, &h, n);
            out.add_term(deg, k.mul(c));
        }
    }
    out
}

/// e_r = D(u, r) for the fixed generic u.
pub fn solenoidal_e(torus: &Torus, r: &Degree, u: &[CycScalar]) -> Result<Derivation> {
    Derivation::d(torus, u, *r)
}

/// A rational u = (1, c, ..., c^{d-1}) with (u|r) ≠ 0 for every nonzero integer r
/// with ‖r‖_∞ ≤ bound, taking the least such positive integer c.
pub fn generic_u(d: usize, bound: i64) -> Vec<CycScalar> {
    let c = generic_base(d, bound);
    (0..d as u32).map(|i| CycScalar::from_int(c.pow(i))).collect()
}

fn generic_base(d: usize, bound: i64) -> i64 {
    if d <= 1 {
        return 1;
    }
    // c > bound always works: the lowest nonzero r_i would have to be divisible by c
    for c in 1..=bound {
        let points = (2 * bound + 1).checked_pow(d as u32).unwrap_or(i64::MAX);
        if points > 2_000_000 {
            break;
        }
        let u: Vec<i64> = (0..d as u32).map(|i| c.pow(i)).collect();
        let hits_zero = Degree::window(d, bound)
            .iter()
            .any(|r| !r.is_zero() && r.as_slice().iter().zip(&u).map(|(a, b)| a * b).sum::<i64>() == 0);
        if !hits_zero {
            return c;
        }
    }
    bound + 1
}

/// The homogeneous generators with degrees in the window: ad(t^s) for s ∉ Rad(f)
/// and D(e_i, r) for r ∈ Rad(f).
pub fn window_generators(torus: &Torus, radius: i64) -> Vec<HomDer> {
    let d = torus.dim();
    let mut out = vec![];
    for n in Degree::window(d, radius) {
        if torus.rad().contains(&n) {
            for i in 0..d {
                let u = (0..d).map(|j| CycScalar::from_int((i == j) as i64)).collect();
                out.push(HomDer::Witt { deg: n, u });
            }
        } else {
            out.push(HomDer::Inner { deg: n, coeff: CycScalar::one() });
        }
    }
    out
}

/// Sum of homogeneous terms that all share one degree; true iff it vanishes.
pub fn hom_sum_is_zero(terms: &[Option<HomDer>]) -> bool {
    let mut inner = CycScalar::zero();
    let mut witt: Option<Vec<CycScalar>> = None;
    for t in terms.iter().flatten() {
        match t {
            HomDer::Inner { coeff, .. } => inner = inner.add(coeff),
            HomDer::Witt { u, .. } => {
                witt = Some(match witt {
                    Some(w) => w.iter().zip(u).map(|(a, b)| a.add(b)).collect(),
                    None => u.clone(),
                })
            }
        }
    }
    inner.is_zero() && witt.is_none_or(|w| w.iter().all(CycScalar::is_zero))
}
