//! Lattice points of ℤ^d used as degrees.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

/// A point of ℤ^d with d ≤ [`MAX_DIM`], stored inline so it is `Copy`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    len: u8,
    v: [i64; MAX_DIM],
}

impl Degree {
    pub fn new(coords: &[i64]) -> Degree {
        Degree::try_new(coords).expect("degree dimension exceeds MAX_DIM")
    }

    pub fn try_new(coords: &[i64]) -> Result<Degree> {
        if coords.len() > MAX_DIM {
            return Err(Error::Dimension(format!(
                "dimension {} exceeds the supported maximum {MAX_DIM}",
                coords.len()
            )));
        }
        let mut v = [0; MAX_DIM];
        v[..coords.len()].copy_from_slice(coords);
        Ok(Degree { len: coords.len() as u8, v })
    }

    pub fn zero(d: usize) -> Degree {
        assert!(d <= MAX_DIM);
        Degree { len: d as u8, v: [0; MAX_DIM] }
    }

    pub fn unit(d: usize, i: usize) -> Degree {
        let mut e = Degree::zero(d);
        e.v[i] = 1;
        e
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.v[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Degree {
        let mut out = *self;
        for x in &mut out.v[..self.len as usize] {
            *x *= k;
        }
        out
    }

    pub fn with(&self, i: usize, value: i64) -> Degree {
        let mut out = *self;
        out.v[i] = value;
        out
    }

    pub fn inf_norm(&self) -> i64 {
        self.as_slice().iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn l1_norm(&self) -> i64 {
        self.as_slice().iter().map(|x| x.abs()).sum()
    }

    pub fn dot(&self, other: &Degree) -> i64 {
        self.as_slice().iter().zip(other.as_slice()).map(|(a, b)| a * b).sum()
    }

    /// All points of the box [-radius, radius]^d in lexicographic order.
    pub fn window(d: usize, radius: i64) -> Vec<Degree> {
        Degree::boxed(&vec![-radius; d], &vec![radius; d])
    }

    /// All points with lo_i ≤ x_i ≤ hi_i, first coordinate most significant.
    pub fn boxed(lo: &[i64], hi: &[i64]) -> Vec<Degree> {
        assert_eq!(lo.len(), hi.len());
        let d = lo.len();
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return vec![];
        }
        let mut out = vec![];
        let mut cur = Degree::new(lo);
        loop {
            out.push(cur);
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur.v[i] < hi[i] {
                    cur.v[i] += 1;
                    break;
                }
                cur.v[i] = lo[i];
            }
        }
    }
}

impl Index<usize> for Degree {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.as_slice()[i]
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = self;
        for i in 0..self.len as usize {
            out.v[i] += rhs.v[i];
        }
        out
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = self;
        for i in 0..self.len as usize {
            out.v[i] -= rhs.v[i];
        }
        out
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        self.scale(-1)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.as_slice().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Degree, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Degree::try_new(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_counts_and_order() {
        let w = Degree::window(2, 1);
        assert_eq!(w.len(), 9);
        assert_eq!(w[0], Degree::new(&[-1, -1]));
        assert_eq!(w[1], Degree::new(&[-1, 0]));
        assert_eq!(w[8], Degree::new(&[1, 1]));
        assert_eq!(Degree::window(3, 2).len(), 125);
        assert_eq!(Degree::window(0, 3), vec![Degree::zero(0)]);
    }

    #[test]
    fn arithmetic_and_norms() {
        let a = Degree::new(&[1, -2, 3]);
        let b = Degree::new(&[0, 5, -1]);
        assert_eq!(a + b, Degree::new(&[1, 3, 2]));
        assert_eq!(a - a, Degree::zero(3));
        assert_eq!(a.l1_norm(), 6);
        assert_eq!(a.inf_norm(), 3);
        assert_eq!(a.dot(&b), -13);
        assert_eq!(-a, a.scale(-1));
    }

    #[test]
    fn serde_as_int_list() {
        let a = Degree::new(&[4, -1]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[4,-1]");
        assert_eq!(serde_json::from_str::<Degree>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Degree>("[1,2,3,4,5,6,7,8,9]").is_err());
    }
}
