//! Exact rational coordinates for box cells, pitches and shape constants.
//!
//! Values are written as integers (`3`), fractions (`-1/2`) or finite decimals
//! (`0.25`). In JSON they may also appear as plain numbers; a float literal is read
//! through its shortest decimal text, so `0.1` means exactly one tenth.

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Rational number with 64-bit numerator and denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub Rational64);

impl Q {
    pub fn int(n: i64) -> Q {
        Q(Rational64::from_integer(n))
    }

    pub fn new(num: i64, den: i64) -> Q {
        Q(Rational64::new(num, den))
    }

    pub fn zero() -> Q {
        Q(Rational64::zero())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Q {
    type Err = Error;

    fn from_str(s: &str) -> Result<Q> {
        parse(s.trim()).ok_or_else(|| {
            Error::parse(format!("{s:?}"), "expected an integer, fraction or decimal")
        })
    }
}

fn parse(s: &str) -> Option<Q> {
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i64, i64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
        return (d != 0).then(|| Q::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let negative = whole.starts_with('-');
        let w: i64 = match whole {
            "" | "-" | "+" => 0,
            _ => whole.parse().ok()?,
        };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let f: i64 = frac.parse().ok()?;
        let mag = w.checked_abs()?.checked_mul(den)?.checked_add(f)?;
        return Some(Q::new(if negative { -mag } else { mag }, den));
    }
    s.parse().ok().map(Q::int)
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                Q(std::ops::$tr::$m(self.0, rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl std::ops::Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational number as integer, decimal or \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
                Ok(Q::int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
                i64::try_from(v).map(Q::int).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
                if !v.is_finite() {
                    return Err(E::custom("non-finite number"));
                }
                parse(&format!("{v}"))
                    .ok_or_else(|| E::custom(format!("cannot represent {v} exactly")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
                parse(v.trim()).ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!("3".parse::<Q>().unwrap(), Q::int(3));
        assert_eq!("-1/2".parse::<Q>().unwrap(), Q::new(-1, 2));
        assert_eq!("0.25".parse::<Q>().unwrap(), Q::new(1, 4));
        assert_eq!("-.5".parse::<Q>().unwrap(), Q::new(-1, 2));
        assert_eq!("-1.5".parse::<Q>().unwrap(), Q::new(-3, 2));
        assert!("1/0".parse::<Q>().is_err());
        assert!("abc".parse::<Q>().is_err());
    }

    #[test]
    fn json_forms() {
        let v: Vec<Q> = serde_json::from_str(r#"[1, 0.1, "2/3", "-4"]"#).unwrap();
        assert_eq!(v, vec![Q::int(1), Q::new(1, 10), Q::new(2, 3), Q::int(-4)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1,"1/10","2/3",-4]"#);
    }

    #[test]
    fn rounding() {
        assert_eq!(Q::new(-1, 2).floor(), -1);
        assert_eq!(Q::new(-1, 2).ceil(), 0);
        assert_eq!(Q::new(7, 2).floor(), 3);
    }
}
