//! Exact Gaussian-integer arithmetic.
//!
//! Values are kept inside a component bound of `2^31` so that the norm
//! `re² + im²` always fits a signed 64-bit integer. Arithmetic through the
//! `checked_*` methods reports a [`RangeError`]; the operator impls panic on
//! the same condition, like the primitive integer operators do in debug
//! builds.
//!
//! The module also carries the parity notion (residue modulo `1+i`), the four
//! units, and the named regions of the plane used throughout the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exclusive bound on the absolute value of each component.
pub const COMPONENT_LIMIT: i64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("gaussian integer component out of range: ({re}, {im})")]
pub struct RangeError {
    pub re: i128,
    pub im: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseGaussianError {
    #[error("expected RE,IM but got {0:?}")]
    Syntax(String),
    #[error(transparent)]
    Range(#[from] RangeError),
}

/// A Gaussian integer `re + im·i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawGaussian", into = "RawGaussian")]
pub struct GaussianInt {
    re: i64,
    im: i64,
}

#[derive(Serialize, Deserialize)]
struct RawGaussian {
    re: i64,
    im: i64,
}

impl TryFrom<RawGaussian> for GaussianInt {
    type Error = RangeError;

    fn try_from(raw: RawGaussian) -> Result<Self, RangeError> {
        GaussianInt::try_new(raw.re, raw.im)
    }
}

impl From<GaussianInt> for RawGaussian {
    fn from(z: GaussianInt) -> Self {
        RawGaussian { re: z.re, im: z.im }
    }
}

fn in_range(c: i128) -> bool {
    c.abs() < COMPONENT_LIMIT as i128
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    /// Builds `re + im·i`.
    ///
    /// Panics when a component is outside the supported range; use
    /// [`GaussianInt::try_new`] for untrusted input.
    pub const fn new(re: i64, im: i64) -> Self {
        assert!(
            re > -COMPONENT_LIMIT
                && re < COMPONENT_LIMIT
                && im > -COMPONENT_LIMIT
                && im < COMPONENT_LIMIT,
            "gaussian integer component out of range"
        );
        GaussianInt { re, im }
    }

    pub fn try_new(re: i64, im: i64) -> Result<Self, RangeError> {
        Self::from_wide(re as i128, im as i128)
    }

    fn from_wide(re: i128, im: i128) -> Result<Self, RangeError> {
        if in_range(re) && in_range(im) {
            Ok(GaussianInt {
                re: re as i64,
                im: im as i64,
            })
        } else {
            Err(RangeError { re, im })
        }
    }

    pub const fn re(self) -> i64 {
        self.re
    }

    pub const fn im(self) -> i64 {
        self.im
    }

    pub const fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// The algebraic norm `re² + im²`.
    pub const fn norm(self) -> u64 {
        (self.re * self.re + self.im * self.im) as u64
    }

    pub const fn conj(self) -> Self {
        GaussianInt {
            re: self.re,
            im: -self.im,
        }
    }

    /// Multiplication by `i`.
    pub const fn rotate(self) -> Self {
        GaussianInt {
            re: -self.im,
            im: self.re,
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, RangeError> {
        Self::from_wide(
            self.re as i128 + rhs.re as i128,
            self.im as i128 + rhs.im as i128,
        )
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, RangeError> {
        Self::from_wide(
            self.re as i128 - rhs.re as i128,
            self.im as i128 - rhs.im as i128,
        )
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RangeError> {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (rhs.re as i128, rhs.im as i128);
        Self::from_wide(a * c - b * d, a * d + b * c)
    }

    pub fn parity(self) -> Parity {
        if (self.re + self.im).rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Whether `self ≡ k (mod 1+i)`. Since `2 = -i(1+i)²`, only the parity of
    /// `k` matters.
    pub fn congruent_mod_one_plus_i(self, k: i64) -> bool {
        self.parity() == Parity::of_integer(k)
    }

    pub fn in_region(self, region: Region) -> bool {
        region.contains(self)
    }

    /// `[z, iz, -z, -iz]`.
    pub fn associates(self) -> [GaussianInt; 4] {
        Unit::ALL.map(|u| u.apply(self))
    }

    /// The unique associate lying in [`Region::GammaPi`], or `None` for zero.
    pub fn canonical_associate(self) -> Option<GaussianInt> {
        self.associates()
            .into_iter()
            .find(|w| w.in_region(Region::GammaPi))
    }

    /// Larger of the two components, as used by the "max(Re, Im) ≥ c" guards.
    pub fn max_component(self) -> i64 {
        self.re.max(self.im)
    }

    /// Enumeration order used everywhere a canonical choice is needed:
    /// by norm, then real part, then imaginary part.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.norm(), self.re, self.im).cmp(&(other.norm(), other.re, other.im))
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs)
            .expect("gaussian integer addition overflow")
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs)
            .expect("gaussian integer subtraction overflow")
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs)
            .expect("gaussian integer multiplication overflow")
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> Self {
        GaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(n: i64) -> Self {
        GaussianInt::new(n, 0)
    }
}

impl fmt::Display for GaussianInt {
    /// Writes the usual textual form: `3+2i`, `2-i`, `3i`, `-i`, `7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: i64| match im {
            1 => write!(f, "i"),
            -1 => write!(f, "-i"),
            _ => write!(f, "{im}i"),
        };
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => imag(f, im),
            (re, im) if im > 0 => {
                write!(f, "{re}+")?;
                imag(f, im)
            }
            (re, im) => {
                write!(f, "{re}")?;
                imag(f, im)
            }
        }
    }
}

impl FromStr for GaussianInt {
    type Err = ParseGaussianError;

    /// Parses the `RE,IM` command-line syntax.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || ParseGaussianError::Syntax(s.to_string());
        let (re, im) = s.split_once(',').ok_or_else(syntax)?;
        let re: i64 = re.trim().parse().map_err(|_| syntax())?;
        let im: i64 = im.trim().parse().map_err(|_| syntax())?;
        Ok(GaussianInt::try_new(re, im)?)
    }
}

/// Residue modulo `1+i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of_integer(k: i64) -> Parity {
        if k.rem_euclid(2) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// One of the four units of `Z[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "-1")]
    NegOne,
    #[serde(rename = "-i")]
    NegI,
}

impl Unit {
    pub const ALL: [Unit; 4] = [Unit::One, Unit::I, Unit::NegOne, Unit::NegI];

    fn exponent(self) -> u8 {
        match self {
            Unit::One => 0,
            Unit::I => 1,
            Unit::NegOne => 2,
            Unit::NegI => 3,
        }
    }

    fn from_exponent(e: u8) -> Unit {
        Unit::ALL[(e % 4) as usize]
    }

    pub fn value(self) -> GaussianInt {
        self.apply(GaussianInt::ONE)
    }

    pub fn apply(self, z: GaussianInt) -> GaussianInt {
        (0..self.exponent()).fold(z, |acc, _| acc.rotate())
    }

    pub fn inverse(self) -> Unit {
        Unit::from_exponent(4 - self.exponent())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::One => "1",
            Unit::I => "i",
            Unit::NegOne => "-1",
            Unit::NegI => "-i",
        }
    }
}

impl Mul for Unit {
    type Output = Unit;

    // i^a · i^b = i^(a+b)
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Unit) -> Unit {
        Unit::from_exponent(self.exponent() + rhs.exponent())
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "" | "1" => Ok(Unit::One),
            "i" => Ok(Unit::I),
            "-1" => Ok(Unit::NegOne),
            "-i" => Ok(Unit::NegI),
            other => Err(format!("unknown unit {other:?}")),
        }
    }
}

/// Named regions of the plane.
///
/// The `*Pi` regions are used as prime pools; membership here is positional
/// only, primality is checked separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `Re > 0 ∧ -Re < Im ≤ Re`
    GammaGSector,
    /// `Re > 0 ∧ Im ≥ 0`
    GammaGQuadrant,
    /// `Re > 0 ∧ Im > 0`
    AOpen,
    /// `0 ≤ Im ≤ Re`
    GammaTable,
    /// `Re > 0 ∧ -Re < Im ≤ Re`
    GammaPi,
    /// `Re ≥ 0 ∧ Im ≥ 0`
    KPi,
    /// `Re ≥ 0 ∧ -Re < Im`
    SPi,
}

/// The closed half-plane `a·re + b·im ≥ min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: i64,
    pub b: i64,
    pub min: i64,
}

impl HalfPlane {
    const fn new(a: i64, b: i64, min: i64) -> Self {
        HalfPlane { a, b, min }
    }

    pub fn eval(&self, z: GaussianInt) -> i64 {
        self.a * z.re() + self.b * z.im()
    }
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::GammaGSector,
        Region::GammaGQuadrant,
        Region::AOpen,
        Region::GammaTable,
        Region::GammaPi,
        Region::KPi,
        Region::SPi,
    ];

    pub fn contains(self, z: GaussianInt) -> bool {
        let (re, im) = (z.re(), z.im());
        match self {
            Region::GammaGSector | Region::GammaPi => re > 0 && -re < im && im <= re,
            Region::GammaGQuadrant => re > 0 && im >= 0,
            Region::AOpen => re > 0 && im > 0,
            Region::GammaTable => 0 <= im && im <= re,
            Region::KPi => re >= 0 && im >= 0,
            Region::SPi => re >= 0 && -re < im,
        }
    }

    /// The same predicate written as an intersection of integer half-planes.
    /// Every region is a cone, so a sum of `k` members satisfies each
    /// inequality with `k·min` on the right.
    pub fn half_planes(self) -> &'static [HalfPlane] {
        const SECTOR: [HalfPlane; 3] = [
            HalfPlane::new(1, 0, 1),
            HalfPlane::new(1, 1, 1),
            HalfPlane::new(1, -1, 0),
        ];
        const QUADRANT: [HalfPlane; 2] = [HalfPlane::new(1, 0, 1), HalfPlane::new(0, 1, 0)];
        const OPEN: [HalfPlane; 2] = [HalfPlane::new(1, 0, 1), HalfPlane::new(0, 1, 1)];
        const TABLE: [HalfPlane; 2] = [HalfPlane::new(0, 1, 0), HalfPlane::new(1, -1, 0)];
        const KPI: [HalfPlane; 2] = [HalfPlane::new(1, 0, 0), HalfPlane::new(0, 1, 0)];
        const SPI: [HalfPlane; 2] = [HalfPlane::new(1, 0, 0), HalfPlane::new(1, 1, 1)];
        match self {
            Region::GammaGSector | Region::GammaPi => &SECTOR,
            Region::GammaGQuadrant => &QUADRANT,
            Region::AOpen => &OPEN,
            Region::GammaTable => &TABLE,
            Region::KPi => &KPI,
            Region::SPi => &SPI,
        }
    }

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Region::GammaGSector => "gammag-sector",
            Region::GammaGQuadrant => "gammag-quadrant",
            Region::AOpen => "a",
            Region::GammaTable => "gamma",
            Region::GammaPi => "gammapi",
            Region::KPi => "kpi",
            Region::SPi => "spi",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Region::ALL
            .into_iter()
            .find(|r| r.name() == lower)
            .ok_or_else(|| {
                let names: Vec<_> = Region::ALL.iter().map(|r| r.name()).collect();
                format!("unknown region {s:?}; expected one of {}", names.join(", "))
            })
    }
}
