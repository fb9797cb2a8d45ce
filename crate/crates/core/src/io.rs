//! Wire-format helpers: complex numbers travel as `[re, im]` pairs and every
//! serialized real is rounded to 12 significant digits.

use crate::linalg::C64;

pub type ComplexPair = [f64; 2];

/// Rounds to 12 significant digits; `-0.0` and non-finite values pass through
/// as `0.0` and unchanged respectively.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

pub fn pairs_to_complex(pairs: &[ComplexPair]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

pub fn complex_to_pairs(v: &[C64]) -> Vec<ComplexPair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub mod sig12_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(super::sig12(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        f64::deserialize(d)
    }
}

pub mod sig12_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&super::sig12(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<f64>::deserialize(d)
    }
}

pub mod sig12_pairs {
    use super::ComplexPair;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[ComplexPair], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for [re, im] in v {
            seq.serialize_element(&[super::sig12(*re), super::sig12(*im)])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ComplexPair>, D::Error> {
        Vec::<ComplexPair>::deserialize(d)
    }
}

pub mod sig12_opt_pairs {
    use super::ComplexPair;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<ComplexPair>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::sig12_pairs::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<ComplexPair>>, D::Error> {
        Option::<Vec<ComplexPair>>::deserialize(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(2.0 / 3.0), 0.666666666667);
        assert_eq!(sig12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(sig12(1.0), 1.0);
        assert_eq!(sig12(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(sig12(-1e-17), -1e-17);
        assert_eq!(sig12(123456.7890123456), 123456.789012);
        assert!(sig12(f64::NAN).is_nan());
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1, 1.0 / 7.0, 3.0e-9, -2.5e12, std::f64::consts::PI] {
            assert_eq!(sig12(sig12(x)), sig12(x));
        }
    }
}
