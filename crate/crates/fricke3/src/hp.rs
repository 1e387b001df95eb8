//! Arbitrary-precision real and complex arithmetic on top of MPFR, plus the
//! series-evaluation kernel shared by the arc, contour and bounds modules.
//!
//! The evaluator is built for the cancellation profile of these q-expansions:
//! near the corner of the arc the summands grow to `e^{~300}` while the sum
//! stays `O(e^{75})`, so alongside the value it reports the largest term
//! magnitude (the scale that bounds the achievable accuracy) and the modulus
//! of the upper half of the sum (the truncation-doubling remainder).

use crate::qseries::{Coeff, LaurentSeries};
use num_bigint::{BigInt, Sign};
use num_traits::One;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

/// Working precision in bits.
pub type Prec = u32;

pub fn pi(prec: Prec) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn sqrt3(prec: Prec) -> Float {
    Float::with_val(prec, 3u32).sqrt()
}

/// Parses an exact decimal literal into a correctly rounded `Float`.
pub fn dec(prec: Prec, s: &str) -> Float {
    Float::with_val(prec, Float::parse(s).expect("valid decimal literal"))
}

/// Deterministic decimal rendering with a fixed number of significant digits.
pub fn to_dec(f: &Float, digits: usize) -> String {
    f.to_string_radix(10, Some(digits))
}

pub fn bigint_to_rug(n: &BigInt) -> rug::Integer {
    let (sign, digits) = n.to_u64_digits();
    let mut r = rug::Integer::from_digits(&digits, rug::integer::Order::Lsf);
    if sign == Sign::Minus {
        r = -r;
    }
    r
}

/// Exact rational coefficient to a correctly rounded float.
pub fn coeff_to_float(c: &Coeff, prec: Prec) -> Float {
    if c.denom().is_one() {
        Float::with_val(prec, bigint_to_rug(c.numer()))
    } else {
        let q = rug::Rational::from((bigint_to_rug(c.numer()), bigint_to_rug(c.denom())));
        Float::with_val(prec, &q)
    }
}

/// Complex number as a pair of same-precision MPFR floats.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        Self { re, im }
    }

    pub fn zero(prec: Prec) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: Prec) -> Self {
        Self { re: Float::with_val(prec, 1), im: Float::new(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: Prec) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Self { re, im: Float::new(prec) }
    }

    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let prec = r.prec();
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        Self { re: Float::with_val(prec, r * &c), im: Float::with_val(prec, r * &s) }
    }

    pub fn prec(&self) -> Prec {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re + &other.re),
            im: Float::with_val(p, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re - &other.re),
            im: Float::with_val(p, &self.im - &other.im),
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec();
        let mut re = Float::with_val(p, &self.re * &other.re);
        re -= Float::with_val(p, &self.im * &other.im);
        let mut im = Float::with_val(p, &self.re * &other.im);
        im += Float::with_val(p, &self.im * &other.re);
        Self { re, im }
    }

    pub fn scale(&self, c: &Float) -> Self {
        let p = self.prec();
        Self { re: Float::with_val(p, &self.re * c), im: Float::with_val(p, &self.im * c) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, &self.re * &self.re);
        n += Float::with_val(p, &self.im * &self.im);
        n
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Self {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -&self.im) / n,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// `e^{self}`.
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let ex = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &ex * &c), im: Float::with_val(p, &ex * &s) }
    }

    /// Integer power by binary powering; negative exponents invert at the end.
    pub fn powi(&self, e: i64) -> Self {
        let p = self.prec();
        if e == 0 {
            return Self::one(p);
        }
        let mut exp = e.unsigned_abs();
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        loop {
            if exp & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            base = base.mul(&base);
        }
        let r = acc.expect("nonzero exponent");
        if e < 0 {
            r.recip()
        } else {
            r
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// `e^{2πi·τ}` — the map from a point in the upper half-plane to its nome.
pub fn nome(tau: &Cx) -> Cx {
    let p = tau.prec();
    let two_pi = Float::with_val(p, 2) * pi(p);
    // 2πi(x+iy) = -2πy + 2πix
    let arg = Cx {
        re: Float::with_val(p, -&two_pi) * &tau.im,
        im: two_pi * &tau.re,
    };
    arg.exp()
}

/// Outcome of one cancellation-aware series evaluation.
#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub value: Cx,
    /// Modulus of the partial sum over the upper half of the exponent window —
    /// exactly the discrepancy `|S_N − S_{N/2}|` of the doubling check.
    pub tail_abs: Float,
    /// Largest summand magnitude; the cancellation scale.
    pub max_term: Float,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(
        "insufficient truncation order: doubling remainder {tail} exceeds threshold {threshold}"
    )]
    InsufficientTruncation { tail: String, threshold: String },
}

/// A checked evaluation: the doubling remainder passed the precision gate.
#[derive(Clone, Debug)]
pub struct CheckedEval {
    pub value: Cx,
    /// Doubling remainder plus the rounding floor.
    pub error_estimate: Float,
    pub max_term: Float,
}

impl EvalOutcome {
    /// Enforces the doubling check: the upper-half remainder must stay below
    /// `2^{-p/2}` relative to the value, with a floor at the cancellation
    /// noise scale so points near a zero of the sum are not rejected.
    pub fn checked(self, prec: Prec) -> Result<CheckedEval, EvalError> {
        let p = prec;
        let value_abs = self.value.abs();
        let floor = Float::with_val(p, &self.max_term) >> (p / 4);
        let scale = if value_abs > floor { value_abs } else { floor };
        let threshold = scale >> (p / 2);
        if self.tail_abs > threshold {
            return Err(EvalError::InsufficientTruncation {
                tail: to_dec(&self.tail_abs, 8),
                threshold: to_dec(&threshold, 8),
            });
        }
        let rounding_floor = Float::with_val(p, &self.max_term) >> (p - 8);
        let error_estimate = self.tail_abs + rounding_floor;
        Ok(CheckedEval { value: self.value, error_estimate, max_term: self.max_term })
    }
}

/// Precomputed evaluator: nonzero coefficients of a series, converted once to
/// floats at the working precision, stored by descending exponent.
pub struct SeriesEval {
    prec: Prec,
    /// `(exponent, coefficient)`, descending exponent, zeros skipped.
    terms: Vec<(i64, Float)>,
    min_exp: i64,
    max_exp: i64,
}

impl SeriesEval {
    pub fn new(series: &LaurentSeries, prec: Prec) -> Self {
        let mut terms: Vec<(i64, Float)> = series
            .terms()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(n, c)| (n, coeff_to_float(c, prec)))
            .collect();
        terms.reverse();
        let (min_exp, max_exp) = if terms.is_empty() {
            (0, 0)
        } else {
            (terms.last().unwrap().0, terms[0].0)
        };
        Self { prec, terms, min_exp, max_exp }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Horner evaluation at the nome `q`, with exponent-gap batching for
    /// sparse series. Scratch-based complex updates keep the hot loop free of
    /// allocation.
    pub fn eval(&self, q: &Cx) -> EvalOutcome {
        let p = self.prec;
        if self.terms.is_empty() {
            return EvalOutcome {
                value: Cx::zero(p),
                tail_abs: Float::new(p),
                max_term: Float::new(p),
            };
        }
        let q_abs = q.abs();
        let log2_q = q_abs.clone().log2().to_f64();

        // Largest term magnitude, assembled in the log₂ domain; a factor-2
        // slop is irrelevant for its role as a noise normalizer.
        let mut max_log2 = f64::NEG_INFINITY;
        for (n, c) in &self.terms {
            if let Some(e) = c.get_exp() {
                max_log2 = max_log2.max(e as f64 + *n as f64 * log2_q);
            }
        }
        let max_term = Float::with_val(64, max_log2).exp2();
        let max_term = Float::with_val(p, max_term);

        let mid = (self.min_exp + self.max_exp).div_euclid(2);

        let mut acc = Cx::zero(p);
        let mut t0 = Float::new(p);
        let mut t1 = Float::new(p);
        let mut prev: Option<i64> = None;
        let mut tail_abs = Float::new(p);
        let mut tail_taken = false;
        for (n, c) in &self.terms {
            if let Some(pe) = prev {
                if !tail_taken && *n <= mid {
                    // acc currently equals Σ_{e > mid} c_e q^{e - pe}
                    tail_abs = acc.abs() * Float::with_val(p, (&q_abs).pow(pe as i32));
                    tail_taken = true;
                }
                let gap = pe - *n;
                if gap == 1 {
                    // acc *= q
                    t0.assign(&acc.re * &q.re);
                    t1.assign(&acc.im * &q.im);
                    t0 -= &t1;
                    t1.assign(&acc.re * &q.im);
                    acc.im *= &q.re;
                    acc.im += &t1;
                    std::mem::swap(&mut acc.re, &mut t0);
                } else {
                    acc = acc.mul(&q.powi(gap));
                }
            }
            acc.re += c;
            prev = Some(*n);
        }
        let value = acc.mul(&q.powi(self.min_exp));
        EvalOutcome { value, tail_abs, max_term }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn complex_exp_basics() {
        let p = 256;
        let ipi = Cx::new(Float::new(p), pi(p));
        let e = ipi.exp();
        assert!(close(&e.re, -1.0, 1e-60));
        assert!(e.im.clone().abs().to_f64() < 1e-60);
    }

    #[test]
    fn powi_and_recip() {
        let p = 192;
        let z = Cx::from_f64(0.3, -1.7, p);
        let z5 = z.powi(5);
        let manual = z.mul(&z).mul(&z).mul(&z).mul(&z);
        assert!(z5.sub(&manual).abs().to_f64() < 1e-50);
        let zm3 = z.powi(-3);
        let check = z5.mul(&zm3).mul(&z.powi(-2)); // z^0
        assert!(close(&check.re, 1.0, 1e-50));
    }

    #[test]
    fn series_eval_geometric() {
        // Σ_{n≥0} qⁿ against 1/(1−q) at q = 0.25 + 0i.
        let p = 320;
        let geo = LaurentSeries::from_ints(0, &vec![1i64; 200], 199);
        let ev = SeriesEval::new(&geo, p);
        let q = Cx::from_f64(0.25, 0.0, p);
        let out = ev.eval(&q);
        let expect = 4.0 / 3.0;
        assert!(close(&out.value.re, expect, 1e-30));
        // tail of the upper half is ~ q^100
        assert!(out.tail_abs.to_f64() < 0.25f64.powi(99));
        assert!(out.tail_abs.to_f64() > 0.0);
        // normalizer is exact only up to a factor of 2
        let mt = out.max_term.to_f64();
        assert!(mt >= 1.0 && mt <= 2.0, "max_term normalizer out of range: {mt}");
    }

    #[test]
    fn series_eval_laurent_part() {
        // q⁻² + 1 at q = i/2: (i/2)⁻² = -4.
        let s = LaurentSeries::from_ints(-2, &[1, 0, 1], 0);
        let ev = SeriesEval::new(&s, 192);
        let q = Cx::from_f64(0.0, 0.5, 192);
        let out = ev.eval(&q);
        assert!(close(&out.value.re, -3.0, 1e-40));
        assert!(out.value.im.clone().abs().to_f64() < 1e-40);
    }

    #[test]
    fn coeff_conversion_is_exact_for_dyadics() {
        let c = BigRational::new(BigInt::from(-5), BigInt::from(8));
        let f = coeff_to_float(&c, 64);
        assert_eq!(f.to_f64(), -0.625);
        let big = BigInt::from(3).pow(40);
        let f2 = coeff_to_float(&BigRational::from_integer(big.clone()), 256);
        assert_eq!(f2.to_integer().unwrap(), bigint_to_rug(&big));
    }
}
