use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use super::{CycScalar, Rat};

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        match RatRepr::deserialize(d)? {
            RatRepr::Int(n) => Ok(Rat::from_int(n)),
            RatRepr::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// Roots of unity are written as `[num, den]`; anything else as `{order, coeffs}`.
impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some((k, m)) = self.as_root_of_unity() {
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&k)?;
            t.serialize_element(&m)?;
            return t.end();
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("order", &self.order())?;
        map.serialize_entry("coeffs", self.coeffs())?;
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycRepr {
    Root([i64; 2]),
    Int(i64),
    Str(String),
    General { order: u64, coeffs: Vec<Rat> },
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CycScalar, D::Error> {
        match CycRepr::deserialize(d)? {
            CycRepr::Root([num, den]) => {
                if den < 1 {
                    return Err(de::Error::custom(format!("root of unity [{num}, {den}] needs den >= 1")));
                }
                Ok(CycScalar::root_of_unity(num, den as u64))
            }
            CycRepr::Int(n) => Ok(CycScalar::from_int(n)),
            CycRepr::Str(s) => s.parse::<Rat>().map(CycScalar::from_rat).map_err(de::Error::custom),
            CycRepr::General { order, coeffs } => {
                CycScalar::from_coeffs(order, coeffs).map_err(de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_round_trip_as_pairs() {
        let z = CycScalar::root_of_unity(3, 8);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "[3,8]");
        assert_eq!(serde_json::from_str::<CycScalar>(&s).unwrap(), z);
    }

    #[test]
    fn general_scalars_round_trip() {
        let x = CycScalar::root_of_unity(1, 5).add(&CycScalar::rational(2, 3));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"order\":5"));
        assert_eq!(serde_json::from_str::<CycScalar>(&s).unwrap(), x);
        let h = CycScalar::rational(1, 2);
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"order":1,"coeffs":["1/2"]}"#);
        assert_eq!(serde_json::from_str::<CycScalar>("\"1/2\"").unwrap(), h);
        assert_eq!(serde_json::from_str::<CycScalar>("3").unwrap(), CycScalar::from_int(3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(serde_json::from_str::<CycScalar>("[1,0]").is_err());
        assert!(serde_json::from_str::<CycScalar>(r#"{"order":4,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<CycScalar>("\"1/0\"").is_err());
    }
}
