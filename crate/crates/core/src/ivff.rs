//! Interval-valued Fermatean fuzzy numbers.
//!
//! An [`Ivffn`] carries a membership interval `[ζL, ζU]` and a
//! non-membership interval `[ηL, ηU]`, both inside `[0, 1]`, with
//! `ζU³ + ηU³ ≤ 1`. All operations here are pure and operate on `Copy`
//! values.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used for every invariant check on grades.
pub const EPS: f64 = 1e-9;

/// Tolerance applied when re-reading values from a report. Grades there
/// are rounded to six decimals, which can push `ζU³ + ηU³` up by 3e-6.
pub(crate) const REPORT_EPS: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IvffError {
    #[error("grade {0} is not a finite number")]
    NonFinite(f64),
    #[error("grade {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("interval lower bound {lo} exceeds upper bound {hi}")]
    IntervalOrder { lo: f64, hi: f64 },
    #[error("cubic constraint violated: ζU³ + ηU³ = {sum} > 1")]
    CubicConstraint { sum: f64 },
    #[error("scalar {0} must be non-negative")]
    NegativeScalar(f64),
}

fn cube(x: f64) -> f64 {
    x * x * x
}

/// Cube root of a radicand that may dip a hair below zero from rounding.
fn cbrt_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.cbrt()
    }
}

/// A closed subinterval of `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitInterval {
    lo: f64,
    hi: f64,
}

impl UnitInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IvffError> {
        Self::with_tolerance(lo, hi, EPS)
    }

    fn with_tolerance(lo: f64, hi: f64, tol: f64) -> Result<Self, IvffError> {
        for v in [lo, hi] {
            if !v.is_finite() {
                return Err(IvffError::NonFinite(v));
            }
            if v < -tol || v > 1.0 + tol {
                return Err(IvffError::OutOfRange(v));
            }
        }
        if lo > hi + tol {
            return Err(IvffError::IntervalOrder { lo, hi });
        }
        Ok(UnitInterval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

/// Score, accuracy and normalized score of an [`Ivffn`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub score: f64,
    pub accuracy: f64,
    pub normalized: f64,
}

/// An interval-valued Fermatean fuzzy number.
///
/// Serialized as the four-element array `[ζL, ζU, ηL, ηU]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Ivffn {
    membership: UnitInterval,
    nonmembership: UnitInterval,
}

impl TryFrom<[f64; 4]> for Ivffn {
    type Error = IvffError;

    fn try_from(v: [f64; 4]) -> Result<Self, Self::Error> {
        Ivffn::with_tolerance(v[0], v[1], v[2], v[3], REPORT_EPS)
    }
}

impl From<Ivffn> for [f64; 4] {
    fn from(f: Ivffn) -> Self {
        f.grades()
    }
}

impl Ivffn {
    /// `([0, 0], [1, 1])`, the neutral element of `⊕`.
    pub const ZERO: Ivffn = Ivffn {
        membership: UnitInterval { lo: 0.0, hi: 0.0 },
        nonmembership: UnitInterval { lo: 1.0, hi: 1.0 },
    };

    /// `([1, 1], [0, 0])`, the neutral element of `⊗`.
    pub const ONE: Ivffn = Ivffn {
        membership: UnitInterval { lo: 1.0, hi: 1.0 },
        nonmembership: UnitInterval { lo: 0.0, hi: 0.0 },
    };

    /// Validated constructor. Grades are stored as given, never clamped.
    pub fn new(
        membership_lo: f64,
        membership_hi: f64,
        nonmembership_lo: f64,
        nonmembership_hi: f64,
    ) -> Result<Self, IvffError> {
        Self::with_tolerance(
            membership_lo,
            membership_hi,
            nonmembership_lo,
            nonmembership_hi,
            EPS,
        )
    }

    fn with_tolerance(zl: f64, zu: f64, nl: f64, nu: f64, tol: f64) -> Result<Self, IvffError> {
        let membership = UnitInterval::with_tolerance(zl, zu, tol)?;
        let nonmembership = UnitInterval::with_tolerance(nl, nu, tol)?;
        let sum = cube(zu) + cube(nu);
        if sum > 1.0 + tol {
            return Err(IvffError::CubicConstraint { sum });
        }
        Ok(Ivffn {
            membership,
            nonmembership,
        })
    }

    /// Builds from grades produced by a closed operation.
    fn raw(zl: f64, zu: f64, nl: f64, nu: f64) -> Self {
        debug_assert!(
            Ivffn::new(zl, zu, nl, nu).is_ok(),
            "operation left the IVFFN domain: {zl} {zu} {nl} {nu}"
        );
        Ivffn {
            membership: UnitInterval { lo: zl, hi: zu },
            nonmembership: UnitInterval { lo: nl, hi: nu },
        }
    }

    pub fn membership(&self) -> UnitInterval {
        self.membership
    }

    pub fn nonmembership(&self) -> UnitInterval {
        self.nonmembership
    }

    /// `[ζL, ζU, ηL, ηU]`
    pub fn grades(&self) -> [f64; 4] {
        [
            self.membership.lo,
            self.membership.hi,
            self.nonmembership.lo,
            self.nonmembership.hi,
        ]
    }

    /// True for the all-zero value `([0,0],[0,0])` that the strict reading
    /// of the definition (`0 < ζU³ + ηU³`) excludes. Accepted, but callers
    /// report it as a warning.
    pub fn is_degenerate(&self) -> bool {
        self.membership.hi == 0.0 && self.nonmembership.hi == 0.0
    }

    pub fn hesitation(&self) -> UnitInterval {
        let [zl, zu, nl, nu] = self.grades();
        UnitInterval {
            lo: cbrt_clamped(1.0 - cube(zu) - cube(nu)),
            hi: cbrt_clamped(1.0 - cube(zl) - cube(nl)),
        }
    }

    pub fn score_triple(&self) -> ScoreTriple {
        let [zl, zu, nl, nu] = self.grades();
        let m = cube(zl) + cube(zu);
        let n = cube(nl) + cube(nu);
        let score = 0.5 * (m - n);
        ScoreTriple {
            score,
            accuracy: 0.5 * (m + n),
            normalized: (score + 1.0) / 2.0,
        }
    }

    pub fn score(&self) -> f64 {
        self.score_triple().score
    }

    pub fn complement(&self) -> Ivffn {
        Ivffn {
            membership: self.nonmembership,
            nonmembership: self.membership,
        }
    }

    /// Componentwise max on membership, min on non-membership.
    pub fn join(&self, other: &Ivffn) -> Ivffn {
        let [a0, a1, a2, a3] = self.grades();
        let [b0, b1, b2, b3] = other.grades();
        Ivffn::raw(a0.max(b0), a1.max(b1), a2.min(b2), a3.min(b3))
    }

    /// Componentwise min on membership, max on non-membership.
    pub fn meet(&self, other: &Ivffn) -> Ivffn {
        let [a0, a1, a2, a3] = self.grades();
        let [b0, b1, b2, b3] = other.grades();
        Ivffn::raw(a0.min(b0), a1.min(b1), a2.max(b2), a3.max(b3))
    }

    /// `λF`: cubic-probabilistic attenuation of membership, power on
    /// non-membership.
    pub fn scale(&self, lambda: f64) -> Result<Ivffn, IvffError> {
        check_scalar(lambda)?;
        let [zl, zu, nl, nu] = self.grades();
        Ok(Ivffn::raw(
            prob_pow(zl, lambda),
            prob_pow(zu, lambda),
            nl.powf(lambda),
            nu.powf(lambda),
        ))
    }

    /// `F^λ`, the dual of [`Ivffn::scale`].
    pub fn pow(&self, lambda: f64) -> Result<Ivffn, IvffError> {
        check_scalar(lambda)?;
        Ok(self.complement().scale(lambda)?.complement())
    }

    /// Distance used by the deviation model: a quarter of the summed
    /// absolute differences of the cubed membership, non-membership and
    /// hesitation bounds. Ranges over `[0, 1.5]`.
    pub fn distance(&self, other: &Ivffn) -> f64 {
        let ha = self.hesitation();
        let hb = other.hesitation();
        let a = self.grades();
        let b = other.grades();
        let grades: f64 = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (cube(*x) - cube(*y)).abs())
            .sum();
        let hes = (cube(ha.lo) - cube(hb.lo)).abs() + (cube(ha.hi) - cube(hb.hi)).abs();
        0.25 * (grades + hes)
    }

    /// Ranking order: `Less` means `self` ranks ahead of `other`.
    ///
    /// Higher score first, then higher accuracy, then lexicographically
    /// larger grades. Score and accuracy are compared after quantizing to
    /// 1e-12 so rounding noise cannot split a tie while the order stays
    /// total.
    pub fn rank_cmp(&self, other: &Ivffn) -> Ordering {
        let sa = self.score_triple();
        let sb = other.score_triple();
        quantize(sb.score)
            .cmp(&quantize(sa.score))
            .then_with(|| quantize(sb.accuracy).cmp(&quantize(sa.accuracy)))
            .then_with(|| {
                let a = self.grades();
                let b = other.grades();
                b.iter()
                    .zip(a.iter())
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

fn quantize(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

fn check_scalar(lambda: f64) -> Result<(), IvffError> {
    if !lambda.is_finite() {
        return Err(IvffError::NonFinite(lambda));
    }
    if lambda < 0.0 {
        return Err(IvffError::NegativeScalar(lambda));
    }
    Ok(())
}

/// `(1 − (1 − x³)^λ)^(1/3)`, evaluated in log space so small `x` keeps
/// its precision.
fn prob_pow(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    cbrt_clamped(-(lambda * (-cube(x)).ln_1p()).exp_m1())
}

/// `(a³ + b³ − a³b³)^(1/3)`
fn prob_sum(a: f64, b: f64) -> f64 {
    let (a3, b3) = (cube(a), cube(b));
    cbrt_clamped(a3 + b3 - a3 * b3)
}

impl std::ops::Add for Ivffn {
    type Output = Ivffn;

    fn add(self, rhs: Ivffn) -> Ivffn {
        let [a0, a1, a2, a3] = self.grades();
        let [b0, b1, b2, b3] = rhs.grades();
        Ivffn::raw(prob_sum(a0, b0), prob_sum(a1, b1), a2 * b2, a3 * b3)
    }
}

impl std::ops::Mul for Ivffn {
    type Output = Ivffn;

    fn mul(self, rhs: Ivffn) -> Ivffn {
        let [a0, a1, a2, a3] = self.grades();
        let [b0, b1, b2, b3] = rhs.grades();
        Ivffn::raw(a0 * b0, a1 * b1, prob_sum(a2, b2), prob_sum(a3, b3))
    }
}

impl fmt::Display for Ivffn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.*}, {:.*})", p, self.membership, p, self.nonmembership),
            None => write!(f, "({}, {})", self.membership, self.nonmembership),
        }
    }
}
