//! Real numbers extended by a distinguished infinite value.
//!
//! Coherence lengths and radii of curvature are routinely infinite (fully
//! coherent beams, flat phase fronts in the waist plane). Those cases are
//! carried as [`Extended::Infinite`] instead of `f64::INFINITY` so that the
//! limiting branches stay explicit.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A real value or an (unsigned) infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(value: f64) -> Self {
        Extended::Finite(value)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match *self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// `1/x`, with `1/∞ = 0`.
    pub fn recip(&self) -> f64 {
        match *self {
            Extended::Finite(v) => 1.0 / v,
            Extended::Infinite => 0.0,
        }
    }

    /// `1/x²`, with `1/∞² = 0`.
    pub fn recip_squared(&self) -> f64 {
        let r = self.recip();
        r * r
    }

    /// Lossy conversion, mapping the infinite variant to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match *self {
            Extended::Finite(v) => v,
            Extended::Infinite => f64::INFINITY,
        }
    }

    /// Inverse of [`Extended::to_f64`]: any infinite float becomes `Infinite`.
    pub fn from_f64(value: f64) -> Self {
        if value.is_infinite() {
            Extended::Infinite
        } else {
            Extended::Finite(value)
        }
    }
}

impl From<f64> for Extended {
    fn from(value: f64) -> Self {
        Extended::from_f64(value)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

// Serialized as a plain number, or as the string "inf".
impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            Extended::Finite(v) => serializer.serialize_f64(v),
            Extended::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtendedVisitor;

        impl Visitor<'_> for ExtendedVisitor {
            type Value = Extended;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Extended, E> {
                Ok(Extended::from_f64(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Extended, E> {
                Ok(Extended::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Extended, E> {
                Ok(Extended::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Extended, E> {
                parse_extended(v).ok_or_else(|| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        deserializer.deserialize_any(ExtendedVisitor)
    }
}

/// Parses `"inf"`, `"infinity"` (any case, optional `+`) or a float literal.
pub fn parse_extended(text: &str) -> Option<Extended> {
    let t = text.trim();
    let lower = t.trim_start_matches('+').to_ascii_lowercase();
    if lower == "inf" || lower == "infinity" {
        return Some(Extended::Infinite);
    }
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(Extended::Finite)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recip_of_infinity_is_zero() {
        assert_eq!(Extended::Infinite.recip(), 0.0);
        assert_eq!(Extended::Finite(4.0).recip_squared(), 1.0 / 16.0);
    }

    #[test]
    fn json_round_trip() {
        let values = vec![Extended::Finite(-2.5), Extended::Infinite];
        let text = serde_json::to_string(&values).unwrap();
        assert_eq!(text, r#"[-2.5,"inf"]"#);
        let back: Vec<Extended> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, values);
    }

    #[test]
    fn parses_text_forms() {
        assert_eq!(parse_extended("Inf"), Some(Extended::Infinite));
        assert_eq!(parse_extended("+infinity"), Some(Extended::Infinite));
        assert_eq!(parse_extended("1e-3"), Some(Extended::Finite(1e-3)));
        assert_eq!(parse_extended("nan"), None);
        assert_eq!(parse_extended("abc"), None);
    }
}
