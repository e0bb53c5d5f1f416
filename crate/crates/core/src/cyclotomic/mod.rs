//! Exact arithmetic in the cyclotomic fields ℚ(ζ_L).
//!
//! A [`CycScalar`] is a polynomial in ζ_L with rational coefficients, reduced
//! modulo the L-th cyclotomic polynomial Φ_L, so the representation is a genuine
//! field element and zero-testing is exact. Scalars of different orders are
//! promoted to the lcm of their orders on demand.

mod rational;
mod serde_impl;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use smallvec::{smallvec, SmallVec};

pub use rational::Rat;

use crate::error::{Error, Result};

/// Field orders are capped to keep the table cache bounded.
pub const MAX_ORDER: u64 = 4096;

type Coeffs = SmallVec<[Rat; 4]>;

/// Precomputed data for ℚ(ζ_L): Φ_L and the reductions of x^k mod Φ_L.
pub struct CyclotomicField {
    order: u64,
    degree: usize,
    /// Φ_L, lowest degree first; monic.
    phi: Vec<i64>,
    /// `powers[k]` is x^k mod Φ_L for 0 ≤ k < L.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    pub fn get(order: u64) -> &'static CyclotomicField {
        assert!((1..=MAX_ORDER).contains(&order), "cyclotomic order {order} out of range");
        static CACHE: OnceLock<Mutex<HashMap<u64, &'static CyclotomicField>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(f) = map.get(&order) {
            return f;
        }
        let field: &'static CyclotomicField = Box::leak(Box::new(CyclotomicField::build(order)));
        map.insert(order, field);
        field
    }

    fn build(order: u64) -> CyclotomicField {
        let phi = cyclotomic_polynomial(order);
        let degree = phi.len() - 1;
        let l = order as usize;
        let mut powers = Vec::with_capacity(l);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..l {
            powers.push(cur.clone());
            // multiply by x and fold the overflow coefficient back with Φ monic
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * phi[i];
                }
            }
        }
        if degree == 1 {
            // ℚ itself: x is the rational root of x - ζ, i.e. ±1.
            for (k, p) in powers.iter_mut().enumerate() {
                p[0] = if order == 2 && k % 2 == 1 { -1 } else { 1 };
            }
        }
        CyclotomicField { order, degree, phi, powers }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// φ(L), the dimension of ℚ(ζ_L) over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of Φ_L, lowest degree first.
    pub fn phi(&self) -> &[i64] {
        &self.phi
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

/// Φ_n by exact division of x^n - 1 by Φ_d for every proper divisor d of n.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "cyclotomic division not exact");
    quot
}

/// An exact element of ℚ(ζ_L).
#[derive(Clone)]
pub struct CycScalar {
    field: &'static CyclotomicField,
    coeffs: Coeffs,
}

impl CycScalar {
    pub fn zero() -> CycScalar {
        CycScalar::from_rat(Rat::ZERO)
    }

    pub fn one() -> CycScalar {
        CycScalar::from_rat(Rat::ONE)
    }

    pub fn from_int(n: i64) -> CycScalar {
        CycScalar::from_rat(Rat::from_int(n))
    }

    pub fn from_rat(r: Rat) -> CycScalar {
        CycScalar { field: CyclotomicField::get(1), coeffs: smallvec![r] }
    }

    pub fn rational(num: i64, den: i64) -> CycScalar {
        CycScalar::from_rat(Rat::new(num, den))
    }

    /// Zero living in ℚ(ζ_order).
    pub fn zero_in(order: u64) -> CycScalar {
        let field = CyclotomicField::get(order);
        CycScalar { field, coeffs: smallvec![Rat::ZERO; field.degree] }
    }

    /// Builds a scalar from its coefficient vector in the power basis of ℚ(ζ_order).
    pub fn from_coeffs(order: u64, coeffs: Vec<Rat>) -> Result<CycScalar> {
        if order == 0 || order > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("cyclotomic order {order} out of range")));
        }
        let field = CyclotomicField::get(order);
        if coeffs.len() != field.degree {
            return Err(Error::Dimension(format!(
                "Q(zeta_{order}) needs {} coefficients, got {}",
                field.degree,
                coeffs.len()
            )));
        }
        Ok(CycScalar { field, coeffs: coeffs.into() })
    }

    /// e^{2πi·num/den}, living in ℚ(ζ_L) with L = den / gcd(num, den).
    pub fn root_of_unity(num: i64, den: u64) -> CycScalar {
        assert!(den >= 1, "root of unity needs a positive denominator");
        let den_i = den as i64;
        let num = num.rem_euclid(den_i);
        let g = num.gcd(&den_i).max(1);
        let order = (den_i / g) as u64;
        let exp = (num / g) as u64;
        CycScalar::zeta_pow(order, exp)
    }

    /// ζ_order^exp.
    pub fn zeta_pow(order: u64, exp: u64) -> CycScalar {
        let field = CyclotomicField::get(order);
        let p = &field.powers[(exp % order) as usize];
        CycScalar { field, coeffs: p.iter().map(|&c| Rat::from_int(c)).collect() }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, if the scalar lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(Rat::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses the scalar in ℚ(ζ_target); `target` must be a multiple of the order.
    pub fn promote(&self, target: u64) -> CycScalar {
        let src = self.field.order;
        if src == target {
            return self.clone();
        }
        assert!(target.is_multiple_of(src), "cannot promote Q(zeta_{src}) into Q(zeta_{target})");
        let field = CyclotomicField::get(target);
        let step = target / src;
        let mut out: Coeffs = smallvec![Rat::ZERO; field.degree];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &field.powers[((j as u64 * step) % target) as usize];
            add_scaled_int(&mut out, c, p);
        }
        CycScalar { field, coeffs: out }
    }

    fn aligned<'a>(
        &'a self,
        other: &'a CycScalar,
    ) -> (std::borrow::Cow<'a, CycScalar>, std::borrow::Cow<'a, CycScalar>) {
        use std::borrow::Cow;
        let (a, b) = (self.field.order, other.field.order);
        if a == b {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let l = a.lcm(&b);
        let lhs = if a == l { Cow::Borrowed(self) } else { Cow::Owned(self.promote(l)) };
        let rhs = if b == l { Cow::Borrowed(other) } else { Cow::Owned(other.promote(l)) };
        (lhs, rhs)
    }

    pub fn add(&self, other: &CycScalar) -> CycScalar {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycScalar { field: a.field, coeffs }
    }

    pub fn sub(&self, other: &CycScalar) -> CycScalar {
        let (a, b) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        CycScalar { field: a.field, coeffs }
    }

    pub fn neg(&self) -> CycScalar {
        CycScalar { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &CycScalar) -> CycScalar {
        let (a, b) = self.aligned(other);
        let field = a.field;
        let n = field.degree;
        if n == 1 {
            return CycScalar { field, coeffs: smallvec![&a.coeffs[0] * &b.coeffs[0]] };
        }
        let mut prod: SmallVec<[Rat; 8]> = smallvec![Rat::ZERO; 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = &prod[i + j] + &(x * y);
                }
            }
        }
        let mut out: Coeffs = prod[..n].iter().cloned().collect();
        for (k, c) in prod.iter().enumerate().skip(n) {
            if !c.is_zero() {
                add_scaled_int(&mut out, c, &field.powers[k % field.order as usize]);
            }
        }
        CycScalar { field, coeffs: out }
    }

    pub fn mul_rat(&self, r: &Rat) -> CycScalar {
        CycScalar { field: self.field, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn mul_int(&self, k: i64) -> CycScalar {
        CycScalar { field: self.field, coeffs: self.coeffs.iter().map(|c| c.mul_int(k)).collect() }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_L.
    pub fn inv(&self) -> Result<CycScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field;
        if field.degree == 1 {
            return Ok(CycScalar { field, coeffs: smallvec![self.coeffs[0].recip()?] });
        }
        let modulus: Vec<Rat> = field.phi.iter().map(|&c| Rat::from_int(c)).collect();
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.to_vec());
        let mut s0: Vec<Rat> = vec![];
        let mut s1: Vec<Rat> = vec![Rat::ONE];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let next = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, next);
        }
        // Φ_L is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip()?;
        let mut out: Coeffs = smallvec![Rat::ZERO; field.degree];
        for (k, c) in s0.iter().enumerate() {
            if !c.is_zero() {
                add_scaled_int(&mut out, &(c * &scale), &field.powers[k % field.order as usize]);
            }
        }
        Ok(CycScalar { field, coeffs: out })
    }

    pub fn div(&self, other: &CycScalar) -> Result<CycScalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Result<CycScalar> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = CycScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// If the scalar is a root of unity, returns `(k, m)` with value e^{2πi·k/m},
    /// gcd(k, m) = 1 and m its multiplicative order.
    ///
    /// The roots of unity in ℚ(ζ_L) are exactly ±ζ_L^j, so a table scan decides it.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        let field = self.field;
        let l = field.order;
        let ints: Option<Vec<i64>> = self.coeffs.iter().map(Rat::to_i64).collect();
        let ints = ints?;
        for (j, p) in field.powers.iter().enumerate() {
            let j = j as u64;
            if *p == ints {
                return Some(reduce_fraction(j, l));
            }
            if p.iter().zip(&ints).all(|(a, b)| *a == -*b) {
                // -ζ_L^j = e^{2πi (L + 2j) / 2L}
                return Some(reduce_fraction(l + 2 * j, 2 * l));
            }
        }
        None
    }

    /// Smallest m ≥ 1 with a^m = 1, or `None` when the scalar is not a root of unity.
    pub fn multiplicative_order(&self) -> Option<u64> {
        self.as_root_of_unity().map(|(_, m)| m)
    }
}

fn reduce_fraction(k: u64, m: u64) -> (u64, u64) {
    let k = k % m;
    let g = k.gcd(&m).max(1);
    (k / g, m / g)
}

fn add_scaled_int(out: &mut [Rat], c: &Rat, p: &[i64]) {
    for (o, &pi) in out.iter_mut().zip(p) {
        match pi {
            0 => {}
            1 => *o = &*o + c,
            -1 => *o = &*o - c,
            _ => *o = &*o + &c.mul_int(pi),
        }
    }
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or(Rat::ZERO);
            let y = b.get(i).cloned().unwrap_or(Rat::ZERO);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    let lead_inv = den[dd].recip().expect("nonzero leading coefficient");
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::ZERO; rem.len() - dd];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let c = &rem[rem.len() - 1] * &lead_inv;
        for (j, dj) in den.iter().enumerate() {
            rem[shift + j] = &rem[shift + j] - &(&c * dj);
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero()
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_int(n)
    }
}

impl From<Rat> for CycScalar {
    fn from(r: Rat) -> Self {
        CycScalar::from_rat(r)
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        CycScalar::add(self, rhs)
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        CycScalar::sub(self, rhs)
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        CycScalar::mul(self, rhs)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar::neg(self)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "z{}^{j}", self.field.order)?,
                _ => write!(f, "({c})*z{}^{j}", self.field.order)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Order of a vector's worth of scalars: the lcm of their field orders.
pub fn common_order<'a>(scalars: impl IntoIterator<Item = &'a CycScalar>) -> u64 {
    scalars.into_iter().fold(1, |acc, s| acc.lcm(&s.order()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(num: i64, den: u64) -> CycScalar {
        CycScalar::root_of_unity(num, den)
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn make_examples() {
        assert!(z(0, 1).is_one());
        assert_eq!(z(1, 2), CycScalar::from_int(-1));
        assert_eq!(z(1, 4).mul(&z(1, 4)), z(1, 2));
        assert_eq!(z(5, 4), z(1, 4));
        assert_eq!(z(-1, 4), z(3, 4));
        assert_eq!(z(2, 8).order(), 4);
    }

    #[test]
    fn mul_examples() {
        let x = CycScalar::rational(3, 7).add(&z(1, 5));
        assert_eq!(CycScalar::one().mul(&x), x);
        let w = z(1, 3);
        assert!(w.mul(&w).mul(&w).is_one());
        let i = z(1, 4);
        let one = CycScalar::one();
        assert_eq!(one.add(&i).mul(&one.sub(&i)), CycScalar::from_int(2));
    }

    #[test]
    fn add_examples() {
        let x = z(1, 7);
        assert_eq!(x.add(&CycScalar::zero()), x);
        assert_eq!(z(1, 3).add(&z(2, 3)), CycScalar::from_int(-1));
        assert!(z(1, 4).add(&z(3, 4)).is_zero());
    }

    #[test]
    fn inv_examples() {
        assert!(CycScalar::one().inv().unwrap().is_one());
        for k in 2..13u64 {
            assert_eq!(z(1, k).inv().unwrap(), z(k as i64 - 1, k));
        }
        let one = CycScalar::one();
        let i = z(1, 4);
        let expected = one.sub(&i).mul_rat(&Rat::new(1, 2));
        assert_eq!(one.add(&i).inv().unwrap(), expected);
        assert!(matches!(CycScalar::zero_in(12).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn order_examples() {
        assert_eq!(CycScalar::one().multiplicative_order(), Some(1));
        assert_eq!(CycScalar::from_int(-1).multiplicative_order(), Some(2));
        assert_eq!(z(3, 4).multiplicative_order(), Some(4));
        // -ζ_3 is a primitive 6th root of unity inside ℚ(ζ_3)
        assert_eq!(z(1, 3).neg().multiplicative_order(), Some(6));
        assert_eq!(CycScalar::from_int(2).multiplicative_order(), None);
        assert_eq!(CycScalar::one().add(&z(1, 4)).multiplicative_order(), None);
        for l in [1u64, 2, 3, 4, 5, 6, 8, 9, 12] {
            for j in 0..l {
                assert_eq!(z(j as i64, l).multiplicative_order(), Some(l / j.gcd(&l).max(1)).map(|m| if j == 0 { 1 } else { m }));
            }
        }
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for l in [1u64, 2, 3, 4, 5, 6, 8, 10, 12, 15, 16, 30] {
            let field = CyclotomicField::get(l);
            let zeta = z(1, l).promote(l);
            let mut acc = CycScalar::zero();
            let mut pow = CycScalar::one();
            for &c in field.phi() {
                acc = acc.add(&pow.mul_int(c));
                pow = pow.mul(&zeta);
            }
            assert!(acc.is_zero(), "Phi_{l}(zeta_{l}) != 0");
        }
    }

    #[test]
    fn promotion_preserves_value() {
        let x = z(1, 3).add(&CycScalar::rational(1, 2));
        let y = x.promote(12);
        assert_eq!(y.order(), 12);
        assert_eq!(x, y);
        assert_eq!(x.mul(&z(1, 4)), y.mul(&z(3, 12)));
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let w = z(1, 8);
        assert_eq!(w.pow(-3).unwrap(), z(5, 8));
        assert!(w.pow(8).unwrap().is_one());
        assert!(CycScalar::zero().pow(-1).is_err());
    }
}
