use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{frac, Rational};

/// The root of unity `e^{2 pi i exponent / order}`, kept symbolic.
///
/// Always normalized: `order` is the minimal order and `exponent` lies in
/// `[0, order)`. The trivial root is `0/1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };
    pub const MINUS_ONE: RootOfUnity = RootOfUnity { order: 2, exponent: 1 };

    /// `e^{2 pi i n / m}` for any integer `n` and `m > 0`.
    pub fn new(n: i64, m: u64) -> Self {
        assert!(m > 0, "root of unity order must be positive");
        let m = m as i64;
        let n = n.rem_euclid(m);
        let g = n.gcd(&m);
        RootOfUnity { order: (m / g) as u64, exponent: (n / g) as u64 }
    }

    /// `e^{2 pi i x}` for a rational `x`.
    pub fn from_turns(x: &Rational) -> Self {
        let f = frac(x);
        let n = f.numer().to_i64().expect("numerator fits in i64");
        let m = f.denom().to_u64().expect("denominator fits in u64");
        RootOfUnity::new(n, m)
    }

    /// `e^{pi i x}`, i.e. half turns.
    pub fn from_half_turns(x: &Rational) -> Self {
        Self::from_turns(&(x / Rational::from_integer(2.into())))
    }

    /// `+1` or `-1`.
    pub fn from_sign(s: i32) -> Self {
        if s >= 0 {
            Self::ONE
        } else {
            Self::MINUS_ONE
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The value as a fraction of a full turn.
    pub fn turns(&self) -> Rational {
        Rational::new((self.exponent as i64).into(), (self.order as i64).into())
    }

    pub fn pow(&self, e: i64) -> Self {
        let m = self.order as i128;
        let n = (self.exponent as i128 * e as i128).rem_euclid(m);
        RootOfUnity::new(n as i64, self.order)
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// `Some(+1)` / `Some(-1)` for real roots, `None` otherwise.
    pub fn as_sign(&self) -> Option<i32> {
        match self.order {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent as f64 / self.order as f64;
        Complex64::from_polar(1.0, theta)
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let m = self.order.lcm(&rhs.order);
        let n = self.exponent * (m / self.order) + rhs.exponent * (m / rhs.order);
        RootOfUnity::new((n % m) as i64, m)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2*pi*i*{}/{})", self.exponent, self.order)
    }
}
