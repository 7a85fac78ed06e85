use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt as qfmt, to_f64, Q};

/// A constant `base^exponent` with rational base and exponent, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactConstant {
    base: Q,
    exponent: Q,
}

impl ExactConstant {
    /// `base` must be nonnegative; zero is allowed for boundary cases of
    /// validity windows.
    pub fn new(base: Q, exponent: Q) -> Result<Self> {
        if base.is_negative() {
            return Err(Error::Invalid(format!("negative base {}", qfmt(&base))));
        }
        Ok(Self { base, exponent })
    }

    pub fn base(&self) -> &Q {
        &self.base
    }

    pub fn exponent(&self) -> &Q {
        &self.exponent
    }

    pub fn value(&self) -> f64 {
        if self.base.is_zero() {
            return 0.0;
        }
        let e = to_f64(&self.exponent);
        let b = to_f64(&self.base);
        if b.is_finite() && b > 0.0 {
            b.powf(e)
        } else {
            (ln_q(&self.base) * e).exp()
        }
    }

    /// Exact value when the exponent is an integer.
    pub fn exact_value(&self) -> Option<Q> {
        if !self.exponent.denom().is_one() {
            return None;
        }
        let e: i64 = self.exponent.numer().try_into().ok()?;
        Some(crate::rational::pow_int(&self.base, e))
    }

    /// Ordering of two constants with the same exponent, by exact base comparison.
    pub fn cmp_same_exponent(&self, other: &Self) -> Option<Ordering> {
        if self.exponent != other.exponent {
            return None;
        }
        let ord = self.base.cmp(&other.base);
        Some(if self.exponent.is_negative() { ord.reverse() } else { ord })
    }

    /// Decimal rendering with `digits` significant digits (round half up).
    ///
    /// Computed as an exact integer root: `floor((base^c * 10^(s d))^(1/d))` for
    /// exponent `c/d`, so every printed digit is correct before rounding.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.base.is_zero() {
            return "0".into();
        }
        let (c, d) = (self.exponent.numer().clone(), self.exponent.denom().clone());
        let d: u32 = match (&d).try_into() {
            Ok(v) => v,
            Err(_) => return format!("{:e}", self.value()),
        };
        let c_abs: usize = match c.abs().try_into() {
            Ok(v) => v,
            Err(_) => return format!("{:e}", self.value()),
        };
        let mut x = num_traits::pow(self.base.clone(), c_abs);
        if c.is_negative() {
            x = x.recip();
        }
        // decimal exponent estimate of x^(1/d)
        let est = (ln_q(&x) / d as f64 / std::f64::consts::LN_10).floor() as i64;
        let mut s = digits as i64 + 2 - est;
        loop {
            let scaled = scale_pow10(&x, s * d as i64);
            let int = scaled.numer().div_floor(scaled.denom());
            let root = to_biguint(&int).nth_root(d);
            let text = root.to_string();
            if text.len() < digits + 1 {
                s += (digits + 1 - text.len()) as i64;
                continue;
            }
            return place_point(&text, s, digits);
        }
    }

    /// `"num/den^(c/d)"` form used in reports.
    pub fn fraction_form(&self) -> String {
        format!(
            "{}/{}^({}/{})",
            self.base.numer(),
            self.base.denom(),
            self.exponent.numer(),
            self.exponent.denom()
        )
    }

    pub fn powi_base(&self, e: &Q) -> Self {
        Self { base: self.base.clone(), exponent: &self.exponent * e }
    }
}

impl fmt::Display for ExactConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.fraction_form(), self.to_decimal(30))
    }
}

/// Serialized form: exact strings plus the 30-digit decimal and a float.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub base: String,
    pub exponent: String,
    pub exact: String,
    pub decimal: String,
    pub value: f64,
}

impl From<&ExactConstant> for ConstantRecord {
    fn from(c: &ExactConstant) -> Self {
        Self {
            base: qfmt(&c.base),
            exponent: qfmt(&c.exponent),
            exact: c.fraction_form(),
            decimal: c.to_decimal(30),
            value: c.value(),
        }
    }
}

fn to_biguint(x: &BigInt) -> BigUint {
    match x.to_biguint() {
        Some(v) => v,
        None => BigUint::zero(),
    }
}

fn scale_pow10(x: &Q, e: i64) -> Q {
    let ten = BigInt::from(10);
    if e >= 0 {
        x * Q::from_integer(num_traits::pow(ten, e as usize))
    } else {
        x / Q::from_integer(num_traits::pow(ten, (-e) as usize))
    }
}

fn ln_q(x: &Q) -> f64 {
    let ln_big = |b: &BigInt| -> f64 {
        let bits = b.bits();
        if bits < 1000 {
            to_f64(&Q::from_integer(b.clone())).abs().ln()
        } else {
            let shift = bits - 60;
            let top: BigInt = b.abs() >> (shift as usize);
            to_f64(&Q::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(x.numer()) - ln_big(x.denom())
}

/// `text` holds floor(v * 10^s) with at least `digits + 1` digits.
fn place_point(text: &str, s: i64, digits: usize) -> String {
    let mut ds: Vec<u8> = text.bytes().map(|b| b - b'0').collect();
    let round_up = ds[digits] >= 5;
    ds.truncate(digits);
    let mut int_len = text.len() as i64 - s;
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                ds.insert(0, 1);
                ds.pop();
                int_len += 1;
                break;
            }
            i -= 1;
            if ds[i] == 9 {
                ds[i] = 0;
            } else {
                ds[i] += 1;
                break;
            }
        }
    }
    let body: String = ds.iter().map(|d| (b'0' + d) as char).collect();
    if int_len <= 0 {
        format!("0.{}{}", "0".repeat((-int_len) as usize), body)
    } else if int_len as usize >= body.len() {
        format!("{}{}", body, "0".repeat(int_len as usize - body.len()))
    } else {
        let (a, b) = body.split_at(int_len as usize);
        format!("{a}.{b}")
    }
}
