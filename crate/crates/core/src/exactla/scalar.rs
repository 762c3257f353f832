//! Exact field elements over the rationals and prime fields.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p < 2 || !is_prime(p) || p >= (1 << 31) {
            return Err(Error::Invalid(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(Rational::from_integer(v)),
            Field::Prime(p) => Scalar::Fp {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Parses `n`, `-n` or `n/m`.
    pub fn parse(&self, text: &str) -> Option<Scalar> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (text, None),
        };
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = match den {
            Some(d) => d.parse().ok()?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return None;
        }
        match *self {
            Field::Rational => Some(Scalar::Q(Rational::from_big(BigRational::new(num, den)))),
            Field::Prime(p) => {
                let pm = BigInt::from(p);
                let n = num.mod_floor(&pm).to_u32()?;
                let d = den.mod_floor(&pm).to_u32()?;
                if d == 0 {
                    return None;
                }
                let n = Scalar::Fp { value: n, p };
                let d = Scalar::Fp { value: d, p };
                Some(n.mul(&d.inv()))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Reduced fraction with an `i64` fast path.
///
/// The small form is used whenever numerator and denominator fit, so
/// structural equality coincides with numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

impl Rational {
    pub fn from_integer(v: i64) -> Rational {
        Rational::Small(v, 1)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    fn add(&self, other: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    if s != i64::MIN {
                        return Rational::Small(s, 1);
                    }
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(n), Some(m)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Rational::from_i128(n, m);
                }
            }
        }
        Rational::from_big(self.to_big() + other.to_big())
    }

    fn mul(&self, other: &Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            let n = (*a as i128) * (*c as i128);
            let m = (*b as i128) * (*d as i128);
            return Rational::from_i128(n, m);
        }
        Rational::from_big(self.to_big() * other.to_big())
    }

    fn neg(&self) -> Rational {
        match self {
            Rational::Small(n, d) => Rational::Small(-n, *d),
            Rational::Big(r) => Rational::from_big(-r.clone()),
        }
    }

    fn inv(&self) -> Rational {
        match self {
            Rational::Small(n, d) => {
                assert!(*n != 0, "division by zero");
                Rational::from_i128(*d as i128, *n as i128)
            }
            Rational::Big(r) => Rational::from_big(r.recip()),
        }
    }

    fn cmp_value(&self, other: &Rational) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(r) => r.is_negative(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

/// An exact element of `Q` or `F_p`. The field tag travels with the value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp { value: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => *r == Rational::Small(1, 1),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// True for rationals with a negative value; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => Scalar::Fp {
                value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => panic!("{}", mixed(self, other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => Scalar::Fp {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => panic!("{}", mixed(self, other)),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.inv()),
            Scalar::Fp { value, p } => {
                assert!(*value != 0, "division by zero in F_{p}");
                Scalar::Fp {
                    value: pow_mod(*value as u64, *p as u64 - 2, *p as u64) as u32,
                    p: *p,
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Multiplies by `±1`.
    pub fn signed(&self, sign: i32) -> Scalar {
        if sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Total order used only for deterministic output of rationals.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp_value(b),
            (Scalar::Fp { value: a, .. }, Scalar::Fp { value: b, .. }) => a.cmp(b),
            _ => panic!("{}", mixed(self, other)),
        }
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> String {
    format!("mixed-field arithmetic: {} vs {}", a.field(), b.field())
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}
