use std::fmt;
use std::str::FromStr;

use crate::arith::ext_gcd;
use crate::error::{Error, Result};

/// An integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("matrix entry overflow")
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub const IDENTITY: SL2Matrix = SL2Matrix { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_IDENTITY: SL2Matrix = SL2Matrix { a: -1, b: 0, c: 0, d: -1 };
    pub const S: SL2Matrix = SL2Matrix { a: 0, b: -1, c: 1, d: 0 };

    /// `T^n = (1 n; 0 1)`.
    pub fn t_pow(n: i64) -> Self {
        SL2Matrix { a: 1, b: n, c: 0, d: 1 }
    }

    /// A matrix with first column `(a, c)`, i.e. one sending `infinity` to `a/c`.
    pub fn with_first_column(a: i64, c: i64) -> Result<Self> {
        let (g, x, y) = ext_gcd(a, c);
        if g != 1 {
            return Err(Error::Parse { what: "coprime column", input: format!("{a},{c}") });
        }
        // a x + c y = 1  =>  (a, -y; c, x)
        SL2Matrix::new(a, -y, c, x)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let (e, f, g, h) = (o.a as i128, o.b as i128, o.c as i128, o.d as i128);
        SL2Matrix {
            a: narrow(a * e + b * g),
            b: narrow(a * f + b * h),
            c: narrow(c * e + d * g),
            d: narrow(c * f + d * h),
        }
    }

    pub fn inverse(&self) -> Self {
        SL2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        SL2Matrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for SL2Matrix {
    type Err = Error;

    /// Parses `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "matrix a,b,c,d", input: s.to_string() };
        let parts: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match parts.as_slice() {
            &[a, b, c, d] => SL2Matrix::new(a, b, c, d),
            _ => Err(bad()),
        }
    }
}
