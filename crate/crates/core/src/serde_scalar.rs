//! Serde helpers writing rationals as "p/q" strings.

use num_rational::BigRational;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

use crate::geometry::{format_scalar, parse_scalar, Point};

pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(v))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_scalar(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
}

pub mod point {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&format_scalar(&p.x))?;
        seq.serialize_element(&format_scalar(&p.y))?;
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let px = parse_scalar(&x).ok_or_else(|| D::Error::custom(format!("bad rational {x:?}")))?;
        let py = parse_scalar(&y).ok_or_else(|| D::Error::custom(format!("bad rational {y:?}")))?;
        Ok(Point::new(px, py))
    }
}

pub mod points {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(ps: &[Point], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(ps.len()))?;
        for p in ps {
            seq.serialize_element(&[format_scalar(&p.x), format_scalar(&p.y)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.into_iter()
            .map(|[x, y]| {
                let px = parse_scalar(&x).ok_or_else(|| D::Error::custom(format!("bad rational {x:?}")))?;
                let py = parse_scalar(&y).ok_or_else(|| D::Error::custom(format!("bad rational {y:?}")))?;
                Ok(Point::new(px, py))
            })
            .collect()
    }
}
