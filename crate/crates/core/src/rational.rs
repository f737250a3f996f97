//! Exact rational numbers used for every coordinate and interval endpoint.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An arbitrary-precision rational, serialized as the string `"p/q"` (or `"p"`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Rat {
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// `2^-k`.
    pub fn dyadic(k: u32) -> Rat {
        Rat(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
        (a + b) / &Rat::integer(2)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator: {s:?}")));
                }
                Ok(Rat(BigRational::new(parse_int(p)?, q)))
            }
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

/// The `k`-th term of the Calkin-Wilf enumeration of the positive rationals.
fn calkin_wilf(k: usize) -> Rat {
    // Walk the binary expansion of k+1 below its leading bit: 0 -> left child, 1 -> right child.
    let n = k + 1;
    let bits = usize::BITS - n.leading_zeros() - 1;
    let (mut p, mut q) = (BigInt::one(), BigInt::one());
    for i in (0..bits).rev() {
        if (n >> i) & 1 == 0 {
            q = &p + &q;
        } else {
            p = &p + &q;
        }
    }
    Rat(BigRational::new(p, q))
}

/// Fixed enumeration of all rationals: `0, 1, -1, 1/2, -1/2, 2, -2, ...`.
pub fn enumerate_rational(k: usize) -> Rat {
    if k == 0 {
        return Rat::zero();
    }
    let q = calkin_wilf((k - 1) / 2);
    if k % 2 == 1 {
        q
    } else {
        -q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn parse_and_display() {
        let q: Rat = "6/8".parse().unwrap();
        assert_eq!(q, Rat::new(3, 4));
        assert_eq!(q.to_string(), "3/4");
        assert_eq!("-5".parse::<Rat>().unwrap(), Rat::integer(-5));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn enumeration_prefix() {
        let got: Vec<String> = (0..7).map(|k| enumerate_rational(k).to_string()).collect();
        assert_eq!(got, ["0", "1", "-1", "1/2", "-1/2", "2", "-2"]);
    }

    #[test]
    fn enumeration_has_no_repeats() {
        let set: BTreeSet<Rat> = (0..2000).map(enumerate_rational).collect();
        assert_eq!(set.len(), 2000);
    }

    #[test]
    fn serde_as_string() {
        let q = Rat::new(-7, 3);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "\"-7/3\"");
        let back: Rat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
