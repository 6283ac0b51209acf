use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed};

use crate::Rational;

/// Field elements the generic containers operate on.
///
/// Division is assumed exact. `BigRational` is the production instance;
/// `Ratio<i64>` works for small test cases.
pub trait Scalar:
    Clone + PartialEq + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the scalar type")
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
}

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `num/den`, with `/den` omitted when it is 1.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter storing a rational in its canonical text form.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        use super::super::{fmt_rational, parse_rational};
        use crate::Rational;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let strs: Vec<String> = v.iter().map(fmt_rational).collect();
            strs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let strs = Vec::<String>::deserialize(d)?;
            strs.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_round_trips() {
        for q in [rat(3, 2), rat(-5, 1), rat(0, 7), rat(-241, 2880)] {
            assert_eq!(parse_rational(&fmt_rational(&q)).unwrap(), q);
        }
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-10, 5)), "-2");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn always_reduced() {
        let q = rat(12, -18);
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
    }
}
