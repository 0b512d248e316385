use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FieldDescriptor;
use crate::error::{Error, Result};

/// An exact coefficient: a rational number or an encoded finite-field element.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed
/// by `BigRational`). Finite-field values are meaningful only relative to a
/// [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Finite(u32),
}

/// Coefficient mode shared by every polynomial in a computation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ring {
    Rational,
    Finite(Arc<FieldDescriptor>),
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "Q"),
            Ring::Finite(field) => write!(f, "{field:?}"),
        }
    }
}

impl Ring {
    pub fn finite(field: FieldDescriptor) -> Self {
        Ring::Finite(Arc::new(field))
    }

    /// Prime field `F_p` with modulus `x`.
    pub fn prime_field(p: u32) -> Result<Self> {
        Ok(Ring::finite(FieldDescriptor::build(p, 1)?))
    }

    pub fn field(&self) -> Option<&Arc<FieldDescriptor>> {
        match self {
            Ring::Rational => None,
            Ring::Finite(f) => Some(f),
        }
    }

    pub fn is_same(&self, other: &Ring) -> bool {
        match (self, other) {
            (Ring::Rational, Ring::Rational) => true,
            (Ring::Finite(a), Ring::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::zero()),
            Ring::Finite(_) => Scalar::Finite(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::one()),
            Ring::Finite(_) => Scalar::Finite(1),
        }
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        match self {
            Ring::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Ring::Finite(f) => Scalar::Finite(f.from_int(v)),
        }
    }

    /// Maps `num / den` into the ring; fails when `den` vanishes there.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self {
            Ring::Rational => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            Ring::Finite(f) => {
                let p = BigInt::from(f.characteristic());
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &p) + &p) % &p;
                    r.to_u32().expect("residue fits in u32")
                };
                let d = reduce(den);
                let inv = f.inv(d).ok_or(Error::DivisionByZero)?;
                Ok(Scalar::Finite(f.mul(reduce(num), inv)))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Finite(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Finite(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Ring::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Ring::Finite(f), Scalar::Finite(x), Scalar::Finite(y)) => {
                Scalar::Finite(f.add(*x, *y))
            }
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Ring::Rational, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Ring::Finite(f), Scalar::Finite(x)) => Scalar::Finite(f.neg(*x)),
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Ring::Rational, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Ring::Finite(f), Scalar::Finite(x), Scalar::Finite(y)) => {
                Scalar::Finite(f.mul(*x, *y))
            }
            _ => panic!("scalar does not belong to ring {self:?}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (Ring::Rational, Scalar::Rational(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(x.recip()))
                }
            }
            (Ring::Finite(f), Scalar::Finite(x)) => {
                f.inv(*x).map(Scalar::Finite).ok_or(Error::DivisionByZero)
            }
            _ => Err(Error::IncompatibleModes),
        }
    }

    pub fn pow(&self, a: &Scalar, exp: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Ring::Rational, Scalar::Rational(_)) => true,
            (Ring::Finite(f), Scalar::Finite(v)) => *v < f.order(),
            _ => false,
        }
    }

    /// Text form used by the polynomial printer: `7`, `-3/2`, or `{a0,a1}`
    /// for elements of a proper extension field.
    pub fn scalar_text(&self, a: &Scalar) -> String {
        match (self, a) {
            (_, Scalar::Rational(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (Ring::Finite(f), Scalar::Finite(v)) if f.degree() > 1 && *v >= f.characteristic() => {
                let digits: Vec<String> = f.coeffs(*v).iter().map(|d| d.to_string()).collect();
                format!("{{{}}}", digits.join(","))
            }
            (_, Scalar::Finite(v)) => v.to_string(),
        }
    }

    /// Whether the printer should render this coefficient with a leading minus.
    pub(crate) fn is_negative(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Rational(r) if r.is_negative())
    }
}
