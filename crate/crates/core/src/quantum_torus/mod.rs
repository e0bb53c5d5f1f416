//! The quantum torus ℂ_q: graded elements, the cocycle σ, the commutator form f
//! and multiplication.

mod qmatrix;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use qmatrix::QMatrix;

use crate::cyclotomic::CycScalar;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::lattice::{radical_basis, RadicalData};

/// ℂ_q with its radical precomputed.
#[derive(Clone, Debug)]
pub struct Torus {
    q: QMatrix,
    rad: RadicalData,
    /// test fixture: σ(n, ·) is multiplied by ζ_L at this n
    sigma_fault: Option<Degree>,
}

impl Torus {
    pub fn new(q: QMatrix) -> Result<Torus> {
        let rad = radical_basis(&q)?;
        Ok(Torus { q, rad, sigma_fault: None })
    }

    /// A deliberately corrupted copy whose cocycle is off by ζ_L on σ(at, ·).
    /// The result is no longer associative; used as a negative control.
    pub fn with_sigma_fault(mut self, at: Degree) -> Torus {
        self.sigma_fault = Some(at);
        self
    }

    /// σ(n,m) = ζ_L^e, returning e mod L.
    pub fn sigma_exp(&self, n: &Degree, m: &Degree) -> i64 {
        let e = self.q.sigma_exp(n, m);
        if self.sigma_fault.as_ref() == Some(n) {
            (e + 1) % self.order() as i64
        } else {
            e
        }
    }

    /// The normal-form torus with block orders `ks`.
    pub fn standard(d: usize, ks: &[u64]) -> Result<Torus> {
        Torus::new(QMatrix::standard(d, ks)?)
    }

    pub fn q(&self) -> &QMatrix {
        &self.q
    }

    pub fn rad(&self) -> &RadicalData {
        &self.rad
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn order(&self) -> u64 {
        self.q.order()
    }

    pub fn sigma(&self, n: &Degree, m: &Degree) -> CycScalar {
        CycScalar::root_of_unity(self.sigma_exp(n, m), self.order())
    }

    pub fn f_form(&self, n: &Degree, m: &Degree) -> CycScalar {
        self.q.f_form(n, m)
    }

    /// σ(n,m) - σ(m,n), the structure constant of [t^n, t^m].
    pub fn commutator_coeff(&self, n: &Degree, m: &Degree) -> CycScalar {
        let l = self.order();
        let a = self.sigma_exp(n, m);
        let b = self.sigma_exp(m, n);
        if a == b {
            return CycScalar::zero();
        }
        CycScalar::root_of_unity(a, l).sub(&CycScalar::root_of_unity(b, l))
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        qt_mul(self, a, b)
    }

    pub fn commutator(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn is_central(&self, a: &TorusElement) -> bool {
        is_central(a, &self.rad)
    }

    /// Whether a lies in the span of t^n, n ∉ Rad(f), which is ℂ_q′.
    pub fn in_derived(&self, a: &TorusElement) -> bool {
        a.terms.keys().all(|n| !self.rad.contains(n))
    }

    pub fn check_degree(&self, n: &Degree) -> Result<()> {
        if n.dim() != self.dim() {
            return Err(Error::Dimension(format!("degree {n} in a torus of rank {}", self.dim())));
        }
        Ok(())
    }
}

/// A finite sum Σ c_n t^n with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TorusElement {
    terms: BTreeMap<Degree, CycScalar>,
}

impl TorusElement {
    pub fn zero() -> TorusElement {
        TorusElement::default()
    }

    /// t^n
    pub fn monomial(n: Degree) -> TorusElement {
        TorusElement::term(n, CycScalar::one())
    }

    pub fn term(n: Degree, c: CycScalar) -> TorusElement {
        let mut out = TorusElement::zero();
        out.add_term(n, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Degree, CycScalar)>) -> TorusElement {
        let mut out = TorusElement::zero();
        for (n, c) in terms {
            out.add_term(n, c);
        }
        out
    }

    pub fn add_term(&mut self, n: Degree, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(n) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Degree, CycScalar> {
        &self.terms
    }

    pub fn coeff(&self, n: &Degree) -> CycScalar {
        self.terms.get(n).cloned().unwrap_or_else(CycScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Degree> {
        self.terms.keys()
    }

    pub fn add(&self, other: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TorusElement) -> TorusElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TorusElement {
        self.scale(&CycScalar::from_int(-1))
    }

    pub fn scale(&self, c: &CycScalar) -> TorusElement {
        TorusElement::from_terms(self.terms.iter().map(|(n, x)| (*n, x.mul(c))))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(n, c)| format!("({c})t^{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    degree: Degree,
    coeff: CycScalar,
}

impl Serialize for TorusElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<TermRepr> =
            self.terms.iter().map(|(n, c)| TermRepr { degree: *n, coeff: c.clone() }).collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<TorusElement, D::Error> {
        let list = Vec::<TermRepr>::deserialize(d)?;
        Ok(TorusElement::from_terms(list.into_iter().map(|t| (t.degree, t.coeff))))
    }
}

/// σ(n,m)
pub fn sigma(torus: &Torus, n: &Degree, m: &Degree) -> CycScalar {
    torus.sigma(n, m)
}

/// f(n,m)
pub fn f_form(torus: &Torus, n: &Degree, m: &Degree) -> CycScalar {
    torus.f_form(n, m)
}

/// Bilinear extension of t^n t^m = σ(n,m) t^{n+m}.
pub fn qt_mul(torus: &Torus, a: &TorusElement, b: &TorusElement) -> TorusElement {
    let l = torus.order();
    let mut out = TorusElement::zero();
    for (n, x) in &a.terms {
        for (m, y) in &b.terms {
            let s = CycScalar::root_of_unity(torus.sigma_exp(n, m), l);
            out.add_term(*n + *m, x.mul(y).mul(&s));
        }
    }
    out
}

/// Support contained in Rad(f), i.e. membership in Z(ℂ_q).
pub fn is_central(a: &TorusElement, rad: &RadicalData) -> bool {
    a.terms.keys().all(|n| rad.contains(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2(a: i64, b: i64) -> Degree {
        Degree::new(&[a, b])
    }

    #[test]
    fn unit_and_generators() {
        let t = Torus::standard(2, &[4]).unwrap();
        let x = TorusElement::from_terms([(d2(1, 2), CycScalar::from_int(3)), (d2(-1, 0), CycScalar::root_of_unity(1, 4))]);
        assert_eq!(t.mul(&TorusElement::monomial(d2(0, 0)), &x), x);
        let p = t.mul(&TorusElement::monomial(d2(0, 1)), &TorusElement::monomial(d2(1, 0)));
        assert_eq!(p, TorusElement::term(d2(1, 1), CycScalar::root_of_unity(1, 4)));
        // t_2 t_1 = q_21 t_1 t_2
        let q = t.mul(&TorusElement::monomial(d2(1, 0)), &TorusElement::monomial(d2(0, 1)));
        assert_eq!(p, q.scale(&t.q().entry(1, 0)));
    }

    #[test]
    fn radical_degrees_multiply_freely() {
        let t = Torus::standard(2, &[4]).unwrap();
        for n in Degree::window(2, 3) {
            for r in t.rad().points_in_box(8) {
                let p = t.mul(&TorusElement::monomial(n), &TorusElement::monomial(r));
                assert_eq!(p, TorusElement::monomial(n + r));
            }
        }
    }

    #[test]
    fn centrality() {
        let t = Torus::standard(2, &[4]).unwrap();
        assert!(t.is_central(&TorusElement::monomial(t.rad().xi(0))));
        assert!(!t.is_central(&TorusElement::monomial(d2(1, 0))));
        assert!(t.in_derived(&TorusElement::monomial(d2(1, 0))));
        // commutation oracle
        for n in Degree::window(2, 4) {
            let a = TorusElement::monomial(n);
            let commutes = Degree::window(2, 4)
                .iter()
                .all(|m| t.commutator(&a, &TorusElement::monomial(*m)).is_zero());
            assert_eq!(commutes, t.is_central(&a), "at {n}");
        }
    }

    #[test]
    fn serde_round_trip() {
        let x = TorusElement::from_terms([(d2(1, -1), CycScalar::rational(2, 3))]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[{"degree":[1,-1],"coeff":{"order":1,"coeffs":["2/3"]}}]"#);
        assert_eq!(serde_json::from_str::<TorusElement>(&s).unwrap(), x);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut x = TorusElement::monomial(d2(1, 1));
        x.add_term(d2(1, 1), CycScalar::from_int(-1));
        assert!(x.is_zero());
    }
}
