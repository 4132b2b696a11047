//! Half-integer spins and the exact arithmetic the 6j engine closes over.
//!
//! A [`Spin`] stores `2j`, so the length `l = j + 1/2` is `(2j + 1)/2` and a
//! unit shift in `l` is a shift of two in the stored integer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("malformed spin `{0}`")]
    Malformed(String),
    #[error("negative spin `{0}`")]
    Negative(String),
    #[error("spin `{0}` is not a multiple of 1/2")]
    NotHalfInteger(String),
}

/// An angular momentum label `j`, stored as `two_j = 2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub const ZERO: Spin = Spin { two_j: 0 };

    pub const fn from_twice(two_j: u32) -> Self {
        Spin { two_j }
    }

    pub const fn integer(j: u32) -> Self {
        Spin { two_j: 2 * j }
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    pub fn value(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// `2l = 2j + 1`.
    pub const fn two_l(self) -> u32 {
        self.two_j + 1
    }

    /// `l = j + 1/2`.
    pub fn length(self) -> f64 {
        f64::from(self.two_l()) / 2.0
    }

    /// Inverse of [`Spin::two_l`]; `None` when `two_l == 0`.
    pub fn from_two_l(two_l: u32) -> Option<Self> {
        two_l.checked_sub(1).map(Spin::from_twice)
    }

    pub fn as_rational(self) -> ExactRational {
        ExactRational::new(BigInt::from(self.two_j), BigInt::from(2))
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

pub fn format_spin(s: Spin) -> String {
    s.to_string()
}

/// Accepts `"2"`, `"3/2"` and `"1.5"`. Parsing is exact.
pub fn parse_spin(text: &str) -> Result<Spin, SpinError> {
    let t = text.trim();
    let malformed = || SpinError::Malformed(text.to_string());
    if t.is_empty() {
        return Err(malformed());
    }
    if let Some(rest) = t.strip_prefix('-') {
        if parse_spin(rest).map(|s| s.two_j > 0).unwrap_or(false) {
            return Err(SpinError::Negative(text.to_string()));
        }
        if parse_spin(rest).is_ok() {
            return Ok(Spin::ZERO);
        }
        return Err(malformed());
    }
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let twice = if let Some((num, den)) = t.split_once('/') {
        if !digits(num) || !digits(den) {
            return Err(malformed());
        }
        let n: BigUint = num.parse().map_err(|_| malformed())?;
        let d: BigUint = den.parse().map_err(|_| malformed())?;
        if d.is_zero() {
            return Err(malformed());
        }
        let (q, r) = (n * 2u32).div_rem(&d);
        if !r.is_zero() {
            return Err(SpinError::NotHalfInteger(text.to_string()));
        }
        q
    } else if let Some((int, frac)) = t.split_once('.') {
        if !digits(int) || !digits(frac) {
            return Err(malformed());
        }
        let trimmed = frac.trim_end_matches('0');
        let half = match trimmed {
            "" => 0u32,
            "5" => 1,
            _ => return Err(SpinError::NotHalfInteger(text.to_string())),
        };
        let n: BigUint = int.parse().map_err(|_| malformed())?;
        n * 2u32 + half
    } else {
        if !digits(t) {
            return Err(malformed());
        }
        let n: BigUint = t.parse().map_err(|_| malformed())?;
        n * 2u32
    };
    let two_j = twice.to_u32().ok_or_else(malformed)?;
    Ok(Spin::from_twice(two_j))
}

impl FromStr for Spin {
    type Err = SpinError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spin(s)
    }
}

/// `|a-b| <= c <= a+b` and `a+b+c` integral.
pub fn triad_admissible(a: Spin, b: Spin, c: Spin) -> bool {
    let (a, b, c) = (a.two_j, b.two_j, c.two_j);
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b
}

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics if `den` is zero.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        ExactRational(BigRational::new(num, den))
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.0.numer(), self.0.denom())
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        let n = self.0.numer().magnitude();
        let d = self.0.denom().magnitude();
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (&rn * &rn == *n && &rd * &rd == *d)
            .then(|| ExactRational::new(BigInt::from(rn), BigInt::from(rd)))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

/// `2^e` as f64 without intermediate overflow for |e| up to a few thousand.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `n/d` for huge magnitudes: shift so the integer quotient carries ~64 bits.
fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let sign = if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) { -1.0 } else { 1.0 };
    let (n, d) = (n.magnitude(), d.magnitude());
    let shift = 66 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    sign * ldexp(big_to_f64(&q), -shift)
}

fn big_to_f64(q: &BigUint) -> f64 {
    // Keep the top 64 bits; the dropped tail is below 2^-63 relative.
    let bits = q.bits();
    if bits <= 64 {
        return q.to_u64().unwrap() as f64;
    }
    let drop = bits - 64;
    ldexp((q >> drop).to_u64().unwrap() as f64, drop as i64)
}

/// `sign * sqrt(radicand)`, the exact closure of Racah-type sums.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: ExactRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        SignedSqrtRational { sign: 0, radicand: ExactRational::zero() }
    }

    /// Panics if `radicand` is negative.
    pub fn new(sign: i8, radicand: ExactRational) -> Self {
        assert!(radicand.signum() >= 0, "negative radicand");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        SignedSqrtRational { sign: sign.signum(), radicand }
    }

    /// `q * sqrt(r)` for rational `q` and non-negative `r`.
    pub fn from_scaled_sqrt(q: &ExactRational, r: &ExactRational) -> Self {
        Self::new(q.signum(), &(q * q) * r)
    }

    pub fn from_rational(q: &ExactRational) -> Self {
        Self::new(q.signum(), q * q)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &ExactRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The signed square `sign * radicand`.
    pub fn signed_square(&self) -> ExactRational {
        match self.sign {
            0 => ExactRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// Relative error below `2^-50` for any radicand size.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let n = self.radicand.numer().magnitude();
        let d = self.radicand.denom().magnitude();
        // floor(sqrt(n * 4^k / d)) carries at least 64 bits.
        let k = ((140 + d.bits() as i64 - n.bits() as i64) / 2).max(-(1 << 40));
        let t = if k >= 0 { (n << (2 * k) as u64) / d } else { n / (d << (-2 * k) as u64) };
        f64::from(self.sign) * ldexp(big_to_f64(&t.sqrt()), -k)
    }

    /// Decimal rendering with 17 significant digits.
    pub fn decimal(&self) -> String {
        format!("{:.16e}", self.to_f64())
    }

    /// Exact sum of terms whose radicands are pairwise rational squares of each
    /// other; `None` when some pair is incommensurable.
    pub fn sum_commensurable<'a, I>(terms: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a SignedSqrtRational>,
    {
        let mut base: Option<ExactRational> = None;
        let mut acc = ExactRational::zero();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            let b = base.get_or_insert_with(|| t.radicand.clone());
            let ratio = (&t.radicand / b).sqrt_exact()?;
            let term = if t.sign < 0 { -ratio } else { ratio };
            acc = acc + term;
        }
        Some(match base {
            None => Self::zero(),
            Some(b) => Self::from_scaled_sqrt(&acc, &b),
        })
    }

    pub fn abs_cmp(&self, other: &Self) -> Ordering {
        self.radicand.cmp(&other.radicand)
    }
}

impl Mul for &SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational::new(self.sign * rhs.sign, &self.radicand * &rhs.radicand)
    }
}

impl Neg for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn neg(self) -> SignedSqrtRational {
        SignedSqrtRational { sign: -self.sign, radicand: self.radicand }
    }
}

impl fmt::Display for SignedSqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let c = if s > 0 { '+' } else { '-' };
                write!(f, "{c}sqrt({}/{})", self.radicand.numer(), self.radicand.denom())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_spin("3/2").unwrap().two_j(), 3);
        assert_eq!(parse_spin("0").unwrap().two_j(), 0);
        assert_eq!(parse_spin("1.5").unwrap().two_j(), 3);
        assert_eq!(parse_spin("2.0").unwrap().two_j(), 4);
        assert_eq!(parse_spin("4/2").unwrap().two_j(), 4);
        assert!(matches!(parse_spin("-1"), Err(SpinError::Negative(_))));
        assert!(matches!(parse_spin("1/3"), Err(SpinError::NotHalfInteger(_))));
        assert!(matches!(parse_spin("1.25"), Err(SpinError::NotHalfInteger(_))));
        assert!(matches!(parse_spin("x"), Err(SpinError::Malformed(_))));
        assert!(matches!(parse_spin("1/0"), Err(SpinError::Malformed(_))));
        assert!(matches!(parse_spin(""), Err(SpinError::Malformed(_))));
    }

    #[test]
    fn triad_examples() {
        let h = Spin::from_twice(1);
        assert!(triad_admissible(h, h, Spin::integer(1)));
        assert!(!triad_admissible(h, h, h));
        assert!(!triad_admissible(Spin::integer(1), Spin::integer(1), Spin::integer(3)));
    }

    #[test]
    fn length_encoding() {
        let s = Spin::from_twice(3);
        assert_eq!(s.length(), 2.0);
        assert_eq!(Spin::from_two_l(s.two_l()), Some(s));
        assert_eq!(Spin::from_two_l(0), None);
    }

    #[test]
    fn signed_sqrt_display_and_value() {
        let x = SignedSqrtRational::new(-1, q(1, 9));
        assert_eq!(x.to_string(), "-sqrt(1/9)");
        assert_eq!(x.to_f64(), -1.0 / 3.0);
        assert_eq!(SignedSqrtRational::zero().to_string(), "0");
    }

    #[test]
    fn huge_radicand_conversion() {
        // (10^400 + 1)^2 / 10^800 has square root 1 + 10^-400.
        let big = BigInt::from(10).pow(400u32);
        let r = ExactRational::new(&(&big + 1) * &(&big + 1), &big * &big);
        assert_eq!(SignedSqrtRational::new(1, r).to_f64(), 1.0);
        let r = ExactRational::new(BigInt::from(2) * &big, BigInt::one());
        let v = SignedSqrtRational::new(1, r).to_f64();
        assert!((v / (std::f64::consts::SQRT_2 * 1e200) - 1.0).abs() < 1e-15);
        let r = ExactRational::new(BigInt::from(3), BigInt::from(4) * &big);
        let v = SignedSqrtRational::new(-1, r).to_f64();
        assert!((v / (-0.5 * 3f64.sqrt() * 1e-200) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn commensurable_sum() {
        // sqrt(2) + sqrt(8) - sqrt(1/2) = (5/2) sqrt(2)
        let terms = [
            SignedSqrtRational::new(1, q(2, 1)),
            SignedSqrtRational::new(1, q(8, 1)),
            SignedSqrtRational::new(-1, q(1, 2)),
        ];
        let s = SignedSqrtRational::sum_commensurable(&terms).unwrap();
        assert_eq!(s, SignedSqrtRational::new(1, q(25, 2)));
        let bad = [SignedSqrtRational::new(1, q(2, 1)), SignedSqrtRational::new(1, q(3, 1))];
        assert!(SignedSqrtRational::sum_commensurable(&bad).is_none());
    }

    fn rational() -> impl Strategy<Value = ExactRational> {
        (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn spin_round_trip(two_j in 0u32..100_000) {
            let s = Spin::from_twice(two_j);
            prop_assert_eq!(parse_spin(&format_spin(s)).unwrap(), s);
            prop_assert_eq!(parse_spin(&format!("{}", s.value())).unwrap(), s);
        }

        #[test]
        fn triad_symmetric(a in 0u32..20, b in 0u32..20, c in 0u32..20) {
            let (a, b, c) = (Spin::from_twice(a), Spin::from_twice(b), Spin::from_twice(c));
            let t = triad_admissible(a, b, c);
            for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(triad_admissible(p.0, p.1, p.2), t);
            }
        }

        #[test]
        fn field_axioms(a in rational(), b in rational(), c in rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &a), &ExactRational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip(), ExactRational::one());
            }
            prop_assert!(a.denom() > &BigInt::zero());
        }

        #[test]
        fn sqrt_conversion_accuracy(n in 1u64..u64::MAX, d in 1u64..u64::MAX, e in 0u32..300) {
            let scale = BigInt::from(3).pow(e);
            let r = ExactRational::new(BigInt::from(n) * &scale, BigInt::from(d));
            let v = SignedSqrtRational::new(1, r.clone()).to_f64();
            // v^2 * d / (n * 3^e) == 1 within the stated bound
            let back = ExactRational::new(
                BigInt::from(d),
                BigInt::from(n) * &scale,
            ).to_f64() * v * v;
            prop_assert!((back - 1.0).abs() < 4.0 * 2f64.powi(-50));
            let _ = r;
        }
    }
}
