//! Decimal-string encodings for exact numbers in JSON.
//!
//! Integers and rationals are written as strings so no precision is lost in
//! transit. Readers accept either strings or plain JSON integers.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Int, Rat};

/// An [`Int`] that serializes as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DecInt(pub Int);

/// A [`Rat`] that serializes as `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecRat(pub Rat);

impl Serialize for DecInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Serialize for DecRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct NumberVisitor<T>(std::marker::PhantomData<T>);

impl<'de, T: FromStr + From<Int>> Visitor<'de> for NumberVisitor<T> {
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        T::from_str(v.trim()).map_err(|_| E::custom(format!("invalid number {v:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        Ok(T::from(Int::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        Ok(T::from(Int::from(v)))
    }
}

impl FromStr for DecInt {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(DecInt)
    }
}

impl From<Int> for DecInt {
    fn from(x: Int) -> Self {
        DecInt(x)
    }
}

impl FromStr for DecRat {
    type Err = num_rational::ParseRatioError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(DecRat)
    }
}

impl From<Int> for DecRat {
    fn from(x: Int) -> Self {
        DecRat(Rat::from_integer(x))
    }
}

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NumberVisitor(std::marker::PhantomData))
    }
}

impl<'de> Deserialize<'de> for DecRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NumberVisitor(std::marker::PhantomData))
    }
}

pub fn dec_vec(v: &[Int]) -> Vec<DecInt> {
    v.iter().cloned().map(DecInt).collect()
}

pub fn int_vec(v: Vec<DecInt>) -> Vec<Int> {
    v.into_iter().map(|d| d.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_strings_and_numbers() {
        let v: Vec<DecInt> = serde_json::from_str(r#"["12", 7, "-340282366920938463463374607431768211457"]"#).unwrap();
        assert_eq!(v[0].0, Int::from(12));
        assert_eq!(v[1].0, Int::from(7));
        assert_eq!(v[2].0.to_string(), "-340282366920938463463374607431768211457");
        let r: DecRat = serde_json::from_str(r#""-3/6""#).unwrap();
        assert_eq!(r.0, Rat::new(Int::from(-1), Int::from(2)));
    }

    #[test]
    fn writes_strings() {
        let s = serde_json::to_string(&(DecInt(Int::from(5)), DecRat(Rat::new(Int::from(1), Int::from(4))))).unwrap();
        assert_eq!(s, r#"["5","1/4"]"#);
    }

    #[test]
    fn rejects_garbage() {
        assert!(serde_json::from_str::<DecInt>(r#""12a""#).is_err());
        assert!(serde_json::from_str::<DecInt>("1.5").is_err());
    }
}
