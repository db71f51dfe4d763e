//! Exact scalar kernel: big rationals, sums of square roots of rationals, and
//! outward-rounded rational intervals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Relative precision (in bits) kept by interval endpoints after rounding.
pub const INTERVAL_PRECISION_BITS: u64 = 256;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `10^-digits` as an exact rational.
pub fn ten_pow_neg(digits: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

/// Parses `7`, `-3/2`, `3.25`, `1e-30` or `2.5E3` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Cheap necessary condition: squares are 0, 1, 4 or 9 mod 16.
fn maybe_square(n: &num_bigint::BigUint) -> bool {
    let low = n.iter_u64_digits().next().unwrap_or(0);
    matches!(low & 15, 0 | 1 | 4 | 9)
}

/// Exact square root when `q` is the square of a rational.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    if !maybe_square(n) || !maybe_square(d) {
        return None;
    }
    let rn = n.sqrt();
    if &(&rn * &rn) != n {
        return None;
    }
    let rd = d.sqrt();
    if &(&rd * &rd) != d {
        return None;
    }
    Some(Rational::new(
        BigInt::from_biguint(Sign::Plus, rn),
        BigInt::from_biguint(Sign::Plus, rd),
    ))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Scientific notation with `digits` significant digits, rounded toward
/// `+∞` when `up`, else toward `−∞`; the printed number brackets `q` on that
/// side.
pub fn fmt_decimal(q: &Rational, digits: u32, up: bool) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let abs = q.abs();
    // Decimal exponent: 10^e <= |q| < 10^(e+1).
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let ten = int(10);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }
    let scaled = q * pow10(digits as i64 - 1 - e);
    let rounded = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (sign, mut mant) = if rounded.is_negative() {
        ("-", (-rounded).to_string())
    } else {
        ("", rounded.to_string())
    };
    // Rounding can carry into an extra digit (e.g. 9.99 -> 10.0).
    if mant.len() > digits as usize {
        mant.pop();
        e += 1;
    }
    let (head, tail) = mant.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// `q = n / 2^e` with `e >= 0`, when the denominator is a power of two.
fn dyadic_parts(q: &Rational) -> Option<(&BigInt, u64)> {
    let d = q.denom();
    let e = d.trailing_zeros().unwrap_or(0);
    (d.bits() == e + 1).then_some((q.numer(), e))
}

/// `n / 2^e` rounded outward to [`INTERVAL_PRECISION_BITS`] relative bits,
/// using shifts only.
fn round_dyadic_parts(n: BigInt, e: u64, up: bool) -> Rational {
    if n.is_zero() {
        return Rational::zero();
    }
    let keep = (INTERVAL_PRECISION_BITS as i64 - (n.bits() as i64 - e as i64)).max(0) as u64;
    let (mut n, mut e) = (n, e);
    if e > keep {
        let drop = e - keep;
        n = if up { -((-n) >> drop) } else { n >> drop };
        e = keep;
    }
    let tz = n.trailing_zeros().unwrap_or(0).min(e);
    Rational::new_raw(n >> tz, BigInt::one() << (e - tz))
}

fn dyadic_sum(a: &Rational, b: &Rational, negate_b: bool, up: bool) -> Option<Rational> {
    let (na, ea) = dyadic_parts(a)?;
    let (nb, eb) = dyadic_parts(b)?;
    let e = ea.max(eb);
    let nb = nb << (e - eb);
    let n = (na << (e - ea)) + if negate_b { -nb } else { nb };
    Some(round_dyadic_parts(n, e, up))
}

fn dyadic_product(a: &Rational, b: &Rational, up: bool) -> Option<Rational> {
    let (na, ea) = dyadic_parts(a)?;
    let (nb, eb) = dyadic_parts(b)?;
    Some(round_dyadic_parts(na * nb, ea + eb, up))
}

fn approx_log2(q: &Rational) -> i64 {
    q.numer().bits() as i64 - q.denom().bits() as i64
}

fn round_dyadic(q: &Rational, up: bool) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let (n, d) = (q.numer(), q.denom());
    let shift = INTERVAL_PRECISION_BITS as i64 - approx_log2(q);
    if shift <= 0 {
        // Already integral at this precision.
        return if up { q.ceil() } else { q.floor() };
    }
    let shift = shift as u64;
    let dyadic = d.trailing_zeros() == Some(d.bits() - 1);
    if dyadic && d.bits() - 1 <= shift {
        return q.clone();
    }
    let scaled = n << shift;
    let mut r = if up { Integer::div_ceil(&scaled, d) } else { Integer::div_floor(&scaled, d) };
    let tz = r.trailing_zeros().unwrap_or(0).min(shift);
    r >>= tz;
    Rational::new_raw(r, BigInt::one() << (shift - tz))
}

/// Closed rational interval `[lo, hi]`; every arithmetic operation rounds
/// the endpoints outward to [`INTERVAL_PRECISION_BITS`] relative bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    /// Tightest dyadic enclosure of `q` at the working precision; exact when
    /// `q` is already dyadic. Arithmetic on such intervals avoids gcds.
    pub fn around(q: &Rational) -> Self {
        Interval::rounded(q.clone(), q.clone())
    }

    fn rounded(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo: round_dyadic(&lo, false), hi: round_dyadic(&hi, true) }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Widens both ends by `slack`.
    pub fn inflate(&self, slack: &Rational) -> Interval {
        Interval::new(&self.lo - slack, &self.hi + slack)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    pub fn lo_f64(&self) -> f64 {
        to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        to_f64(&self.hi)
    }

    /// Enclosure of `sqrt(q)`.
    pub fn sqrt(q: &Rational) -> Interval {
        assert!(!q.is_negative(), "square root of a negative rational");
        if let Some(r) = sqrt_exact(q) {
            return Interval::point(r);
        }
        let e = approx_log2(q);
        let shift = (INTERVAL_PRECISION_BITS as i64 - e / 2).max(0) as usize;
        let scale = BigInt::one() << shift;
        let scaled = (q * Rational::from_integer(&scale * &scale)).floor().to_integer();
        let s = scaled.sqrt();
        let lo = Rational::new(s.clone(), scale.clone());
        let hi = Rational::new(s + 1, scale);
        Interval::new(lo, hi)
    }

    pub fn recip(&self) -> Interval {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Interval::rounded(self.hi.recip(), self.lo.recip())
    }

    pub fn pow(&self, exp: u32) -> Interval {
        let mut acc = Interval::point(int(1));
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        self * &Interval::point(q.clone())
    }

    /// `true` when every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.15e}, {:.15e}]", self.lo_f64(), self.hi_f64())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        if let (Some(lo), Some(hi)) =
            (dyadic_sum(&self.lo, &rhs.lo, false, false), dyadic_sum(&self.hi, &rhs.hi, false, true))
        {
            return Interval { lo, hi };
        }
        Interval::rounded(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        if let (Some(lo), Some(hi)) =
            (dyadic_sum(&self.lo, &rhs.hi, true, false), dyadic_sum(&self.hi, &rhs.lo, true, true))
        {
            return Interval { lo, hi };
        }
        Interval::rounded(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        if self.is_point() && rhs.is_point() {
            let p = &self.lo * &rhs.lo;
            return Interval::rounded(p.clone(), p);
        }
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            if let (Some(lo), Some(hi)) =
                (dyadic_product(&self.lo, &rhs.lo, false), dyadic_product(&self.hi, &rhs.hi, true))
            {
                return Interval { lo, hi };
            }
            return Interval::rounded(&self.lo * &rhs.lo, &self.hi * &rhs.hi);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::rounded(lo, hi)
    }
}

/// Finite sum `sum_i c_i sqrt(r_i)` with rational `c_i` and positive rational
/// radicands lying in pairwise distinct square classes, so the
/// representation is zero exactly when the value is zero.
#[derive(Clone, Debug, Default)]
pub struct Surd {
    terms: Vec<(Rational, Rational)>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: Vec::new() }
    }

    pub fn rational(q: Rational) -> Self {
        let mut s = Surd::zero();
        s.push(int(1), q);
        s
    }

    /// `sqrt(q)` for `q >= 0`.
    pub fn sqrt(q: Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Surd::zero();
        }
        match sqrt_exact(&q) {
            Some(r) => Surd::rational(r),
            None => Surd { terms: vec![(q, int(1))] },
        }
    }

    /// `sign * sqrt(q)`.
    pub fn signed_sqrt(negative: bool, q: Rational) -> Self {
        let s = Surd::sqrt(q);
        if negative {
            -s
        } else {
            s
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    /// Rational value, if the surd has no irrational part.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(int(0)),
            [(r, c)] if r.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn square(&self) -> Surd {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| to_f64(c) * to_f64(r).sqrt())
            .sum()
    }

    pub fn enclose(&self) -> Interval {
        self.terms.iter().fold(Interval::point(int(0)), |acc, (r, c)| {
            &acc + &Interval::sqrt(r).scale(c)
        })
    }

    fn push(&mut self, radicand: Rational, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let (radicand, coeff) = if radicand.is_one() {
            (radicand, coeff)
        } else {
            match sqrt_exact(&radicand) {
                Some(root) => (int(1), coeff * root),
                None => (radicand, coeff),
            }
        };
        for i in 0..self.terms.len() {
            let existing = &self.terms[i].0;
            let factor = if *existing == radicand {
                Some(int(1))
            } else {
                sqrt_exact(&(&radicand / existing))
            };
            if let Some(f) = factor {
                self.terms[i].1 += coeff * f;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
                return;
            }
        }
        self.terms.push((radicand, coeff));
    }

    pub fn scale(&self, q: &Rational) -> Surd {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(r, c)| (r.clone(), c * q)).collect(),
        }
    }
}

/// Equality of values; representations may differ by square factors.
impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Surd {}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{}", fmt_rational(c))?;
            } else {
                write!(f, "{}*sqrt({})", fmt_rational(c), fmt_rational(r))?;
            }
        }
        Ok(())
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.push(r.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.push(r.clone(), -c.clone());
        }
        out
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.into_iter().map(|(r, c)| (r, -c)).collect(),
        }
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &rhs.terms {
                let coeff = c1 * c2;
                if r1 == r2 {
                    out.push(int(1), coeff * r1);
                    continue;
                }
                let product = r1 * r2;
                match sqrt_exact(&product) {
                    Some(root) => out.push(int(1), coeff * root),
                    None => out.push(product, coeff),
                }
            }
        }
        out
    }
}

/// Total order on exact rationals compared against an interval, used by gates.
pub fn cmp_interval(q: &Rational, iv: &Interval) -> Option<Ordering> {
    if q < iv.lo() {
        Some(Ordering::Less)
    } else if q > iv.hi() {
        Some(Ordering::Greater)
    } else if iv.is_point() {
        Some(Ordering::Equal)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rounding_is_directed() {
        assert_eq!(fmt_decimal(&rat(1, 3), 4, false), "3.333e-1");
        assert_eq!(fmt_decimal(&rat(1, 3), 4, true), "3.334e-1");
        assert_eq!(fmt_decimal(&rat(-1, 3), 4, true), "-3.333e-1");
        assert_eq!(fmt_decimal(&rat(999, 1000), 2, true), "1e0");
        assert_eq!(fmt_decimal(&int(144), 6, false), "1.44e2");
        assert_eq!(fmt_decimal(&int(0), 6, false), "0");
        assert_eq!(fmt_decimal(&rat(1, 1000), 3, false), "1e-3");
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("7/2").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("3.5").unwrap(), rat(7, 2));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn surds_collapse_square_classes() {
        // sqrt(8) - 2 sqrt(2) = 0
        let a = Surd::sqrt(int(8));
        let b = Surd::sqrt(int(2)).scale(&int(2));
        assert!((&a - &b).is_zero());
        // sqrt(3/2) * sqrt(3/8) = 3/4
        let p = &Surd::sqrt(rat(3, 2)) * &Surd::sqrt(rat(3, 8));
        assert_eq!(p.to_rational(), Some(rat(3, 4)));
        // (sqrt 2 + sqrt 3)^2 = 5 + 2 sqrt 6 is not rational
        let s = &Surd::sqrt(int(2)) + &Surd::sqrt(int(3));
        assert!(s.square().to_rational().is_none());
    }

    #[test]
    fn interval_sqrt_encloses() {
        let iv = Interval::sqrt(&int(5));
        let lo2 = iv.lo() * iv.lo();
        let hi2 = iv.hi() * iv.hi();
        assert!(lo2 <= int(5) && int(5) <= hi2);
        assert!(iv.width() < ten_pow_neg(60));
        assert!(Interval::sqrt(&rat(9, 4)).is_point());
    }

    #[test]
    fn interval_ops_are_outward() {
        let third = Interval::point(int(3)).recip();
        assert!(third.contains(&rat(1, 3)));
        let x = &third * &Interval::point(int(3));
        assert!(x.contains(&int(1)));
        assert_eq!(Interval::point(int(2)).pow(10), Interval::point(int(1024)));
    }
}
