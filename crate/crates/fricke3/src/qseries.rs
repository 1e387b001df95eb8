//! Truncated Laurent series in `q` over exact arbitrary-precision rationals.
//!
//! A series is stored as a dense coefficient window `[valuation, trunc_order]`
//! and is understood modulo `q^{trunc_order+1}`.  Every ring operation shrinks
//! the truncation order to what the operands actually prove:
//!
//! - `add`:  `N = min(N_a, N_b)`,
//! - `mul`:  `N = min(N_a + v_b, N_b + v_a)`,
//! - `inverse`: the relative order `N − v` is preserved.
//!
//! Coefficients are exact `BigRational`s; there is no floating point in this
//! module.  The multiplication and inversion kernels clear denominators and
//! run on `BigInt`, so series that are integral (all of the modular-form
//! expansions downstream) never pay for rational normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Exact coefficient type for all q-expansions.
pub type Coeff = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// Inversion of a series whose coefficients vanish through the truncation order.
    #[error("non-invertible series: no nonzero coefficient up to the truncation order")]
    NonInvertible,
    /// A constructor was given an inconsistent coefficient window.
    #[error("invalid series window: valuation {valuation} > trunc_order {trunc_order}")]
    InvalidWindow { valuation: i64, trunc_order: i64 },
    /// JSON parse failure for the serialized form.
    #[error("malformed series JSON: {0}")]
    Parse(String),
}

/// A truncated Laurent series `Σ_{n=v}^{N} c_n q^n + O(q^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    valuation: i64,
    trunc_order: i64,
    coeffs: Vec<Coeff>,
}

impl LaurentSeries {
    /// Builds a series from an explicit window. `coeffs[i]` is the coefficient
    /// of `q^{valuation + i}` and must span exactly `trunc_order - valuation + 1` entries.
    pub fn new(valuation: i64, trunc_order: i64, coeffs: Vec<Coeff>) -> Result<Self, SeriesError> {
        if valuation > trunc_order {
            return Err(SeriesError::InvalidWindow { valuation, trunc_order });
        }
        assert_eq!(
            coeffs.len() as i64,
            trunc_order - valuation + 1,
            "coefficient window length mismatch"
        );
        Ok(Self { valuation, trunc_order, coeffs })
    }

    /// Series that is zero through `q^{trunc_order}`.
    pub fn zero(trunc_order: i64) -> Self {
        Self { valuation: trunc_order, trunc_order, coeffs: vec![Coeff::zero()] }
    }

    /// The constant series 1, known modulo `q^{trunc_order+1}`.
    pub fn one(trunc_order: i64) -> Self {
        Self::monomial(0, trunc_order)
    }

    /// `q^exp`, known modulo `q^{trunc_order+1}`.
    pub fn monomial(exp: i64, trunc_order: i64) -> Self {
        assert!(exp <= trunc_order, "monomial exponent beyond truncation order");
        let mut coeffs = vec![Coeff::zero(); (trunc_order - exp + 1) as usize];
        coeffs[0] = Coeff::one();
        Self { valuation: exp, trunc_order, coeffs }
    }

    /// Constant series `c`.
    pub fn constant(c: Coeff, trunc_order: i64) -> Self {
        assert!(trunc_order >= 0);
        let mut coeffs = vec![Coeff::zero(); (trunc_order + 1) as usize];
        coeffs[0] = c;
        Self { valuation: 0, trunc_order, coeffs }
    }

    /// Convenience constructor from small integer coefficients starting at `valuation`.
    pub fn from_ints(valuation: i64, ints: &[i64], trunc_order: i64) -> Self {
        assert!(valuation + ints.len() as i64 - 1 <= trunc_order);
        let mut coeffs: Vec<Coeff> =
            ints.iter().map(|&n| Coeff::from_integer(BigInt::from(n))).collect();
        coeffs.resize((trunc_order - valuation + 1) as usize, Coeff::zero());
        Self { valuation, trunc_order, coeffs }
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc_order(&self) -> i64 {
        self.trunc_order
    }

    /// Coefficient of `q^n`. Exactly zero below the valuation; panics above the
    /// truncation order, where the series proves nothing.
    pub fn coeff(&self, n: i64) -> Coeff {
        assert!(n <= self.trunc_order, "coefficient q^{n} beyond truncation order {}", self.trunc_order);
        if n < self.valuation {
            Coeff::zero()
        } else {
            self.coeffs[(n - self.valuation) as usize].clone()
        }
    }

    /// Borrowed coefficient access over the stored window.
    pub fn coeff_ref(&self, n: i64) -> Option<&Coeff> {
        if n < self.valuation || n > self.trunc_order {
            None
        } else {
            Some(&self.coeffs[(n - self.valuation) as usize])
        }
    }

    /// `(exponent, coefficient)` pairs over the stored window.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.valuation + i as i64, c))
    }

    /// Exponent of the first provably nonzero coefficient, if any.
    pub fn true_valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.valuation + i as i64)
    }

    /// True when every stored coefficient vanishes.
    pub fn is_zero_through_trunc(&self) -> bool {
        self.true_valuation().is_none()
    }

    /// Drops leading stored zeros so `coeffs[0] != 0` (a normalized series).
    /// The zero series normalizes to `zero(trunc_order)`.
    pub fn normalized(&self) -> Self {
        match self.true_valuation() {
            None => Self::zero(self.trunc_order),
            Some(v) => {
                let skip = (v - self.valuation) as usize;
                Self {
                    valuation: v,
                    trunc_order: self.trunc_order,
                    coeffs: self.coeffs[skip..].to_vec(),
                }
            }
        }
    }

    /// All denominators equal to one.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Restricts the window to `new_trunc ≤ trunc_order`.
    pub fn truncate(&self, new_trunc: i64) -> Self {
        assert!(new_trunc <= self.trunc_order, "cannot extend truncation order");
        if new_trunc < self.valuation {
            return Self::zero(new_trunc);
        }
        let len = (new_trunc - self.valuation + 1) as usize;
        Self { valuation: self.valuation, trunc_order: new_trunc, coeffs: self.coeffs[..len].to_vec() }
    }

    /// Multiplies by `q^d`.
    pub fn shift(&self, d: i64) -> Self {
        Self { valuation: self.valuation + d, trunc_order: self.trunc_order + d, coeffs: self.coeffs.clone() }
    }

    /// Scales every coefficient by `c`.
    pub fn scale(&self, c: &Coeff) -> Self {
        Self {
            valuation: self.valuation,
            trunc_order: self.trunc_order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            valuation: self.valuation,
            trunc_order: self.trunc_order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Coefficient-wise sum; `N = min(N_a, N_b)`, `v = min(v_a, v_b)`.
    pub fn add(&self, other: &Self) -> Self {
        let valuation = self.valuation.min(other.valuation);
        let trunc = self.trunc_order.min(other.trunc_order);
        let len = (trunc - valuation + 1).max(1) as usize;
        let mut coeffs = vec![Coeff::zero(); len];
        for (n, c) in self.terms().chain(other.terms()) {
            if n >= valuation && n <= trunc && !c.is_zero() {
                let slot = &mut coeffs[(n - valuation) as usize];
                *slot = &*slot + c;
            }
        }
        Self { valuation, trunc_order: trunc, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// In-place `self += c · other` on overlapping window; used by the basis solver.
    pub fn add_scaled_assign(&mut self, c: &Coeff, other: &Self) {
        let merged = self.add(&other.scale(c));
        *self = merged;
    }

    /// Cauchy product. `v = v_a + v_b`, `N = min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let valuation = self.valuation + other.valuation;
        let trunc = (self.trunc_order + other.valuation).min(other.trunc_order + self.valuation);
        let out_len = (trunc - valuation + 1) as usize;

        let (a_num, a_den) = clear_denominators(&self.coeffs);
        let (b_num, b_den) = clear_denominators(&other.coeffs);
        let prod = convolve_trunc(&a_num, &b_num, out_len);
        let den = &a_den * &b_den;
        let coeffs = if den.is_one() {
            prod.into_iter().map(Coeff::from_integer).collect()
        } else {
            prod.into_iter().map(|p| Coeff::new(p, den.clone())).collect()
        };
        Self { valuation, trunc_order: trunc, coeffs }
    }

    /// Multiplicative inverse. Requires a provably nonzero leading coefficient;
    /// the relative order `N − v` is preserved, so the result spans
    /// `[-v, N - 2v]` for a normalized input of window `[v, N]`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let v0 = self.true_valuation().ok_or(SeriesError::NonInvertible)?;
        let rel_len = (self.trunc_order - v0 + 1) as usize;
        let unit: Vec<Coeff> =
            (0..rel_len).map(|i| self.coeff(v0 + i as i64)).collect();
        let (u, d) = clear_denominators(&unit);
        let c0 = u[0].clone();
        debug_assert!(!c0.is_zero());

        // g_0 = 1, g_n = -Σ_{i=1..n} u_i · g_{n-i} · c0^{i-1};
        // the inverse unit coefficient is then d · g_n / c0^{n+1}.
        let mut c0_pows: Vec<BigInt> = Vec::with_capacity(rel_len);
        c0_pows.push(BigInt::one());
        for i in 1..rel_len {
            c0_pows.push(&c0_pows[i - 1] * &c0);
        }
        let mut g: Vec<BigInt> = Vec::with_capacity(rel_len);
        g.push(BigInt::one());
        for n in 1..rel_len {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                if !u[i].is_zero() {
                    acc += &u[i] * &g[n - i] * &c0_pows[i - 1];
                }
            }
            g.push(-acc);
        }
        let coeffs: Vec<Coeff> = g
            .into_iter()
            .enumerate()
            .map(|(n, gn)| Coeff::new(&d * gn, &c0_pows[n] * &c0))
            .collect();
        Self::new(-v0, self.trunc_order - 2 * v0, coeffs)
    }

    /// `a / b` via `a · b⁻¹`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow_int(&self, e: i64) -> Result<Self, SeriesError> {
        if e == 0 {
            // Exact constant 1; keep the operand's relative reliable order.
            return Ok(Self::one(self.trunc_order - self.valuation));
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut result: Option<Self> = None;
        let mut power = base;
        loop {
            if exp & 1 == 1 {
                result = Some(match result {
                    None => power.clone(),
                    Some(r) => r.mul(&power),
                });
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            power = power.mul(&power);
        }
        Ok(result.expect("nonzero exponent"))
    }

    /// Substitution `q ↦ q^t`: exponents scale by `t`, truncation becomes `t·N`.
    pub fn dilate(&self, t: u32) -> Self {
        assert!(t >= 1);
        let t = t as i64;
        let valuation = self.valuation * t;
        let trunc = self.trunc_order * t;
        let mut coeffs = vec![Coeff::zero(); (trunc - valuation + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * t as usize] = c.clone();
            }
        }
        Self { valuation, trunc_order: trunc, coeffs }
    }

    /// Logarithmic-style derivative `q·d/dq`: maps `Σ c_n qⁿ` to `Σ n·c_n qⁿ`.
    pub fn q_derivative(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(n, c)| c * Coeff::from_integer(BigInt::from(n)))
            .collect();
        Self { valuation: self.valuation, trunc_order: self.trunc_order, coeffs }
    }

    /// Euler product `∏_{n≥1} (1 − q^{tn})` modulo `q^{N+1}`, expanded by the
    /// pentagonal number theorem: `Σ_{n∈ℤ} (−1)^n q^{t·n(3n−1)/2}`.  The
    /// `q^{t/24}` eta prefactor is never stored; callers track it separately.
    pub fn eta_product(t: u32, trunc_order: i64) -> Self {
        assert!(t >= 1);
        assert!(trunc_order >= 0);
        let t = t as i64;
        let mut coeffs = vec![Coeff::zero(); (trunc_order + 1) as usize];
        let mut n: i64 = 0;
        loop {
            let mut hit = false;
            for s in [n, -n] {
                let e = t * s * (3 * s - 1) / 2;
                if e <= trunc_order {
                    hit = true;
                    let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
                    coeffs[e as usize] = Coeff::from_integer(BigInt::from(sign));
                }
                if n == 0 {
                    break;
                }
            }
            if !hit && n > 0 {
                break;
            }
            n += 1;
        }
        Self { valuation: 0, trunc_order, coeffs }
    }

    /// Serializes to the exchange schema
    /// `{"valuation": v, "trunc_order": N, "coeffs": ["p/q", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "valuation": self.valuation,
            "trunc_order": self.trunc_order,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Parses the exchange schema; exact round-trip with [`Self::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<Self, SeriesError> {
        let obj = v.as_object().ok_or_else(|| SeriesError::Parse("expected object".into()))?;
        let valuation = obj
            .get("valuation")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| SeriesError::Parse("missing valuation".into()))?;
        let trunc_order = obj
            .get("trunc_order")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| SeriesError::Parse("missing trunc_order".into()))?;
        let coeffs = obj
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| SeriesError::Parse("missing coeffs".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| SeriesError::Parse("coefficient must be a string".into()))
                    .and_then(|s| {
                        BigRational::from_str(s)
                            .map_err(|e| SeriesError::Parse(format!("bad rational {s:?}: {e}")))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() as i64 != trunc_order - valuation + 1 {
            return Err(SeriesError::Parse("coefficient count does not match window".into()));
        }
        Self::new(valuation, trunc_order, coeffs)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*q")?,
                _ => write!(f, "({c})*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc_order + 1)
    }
}

/// Splits a rational coefficient vector into integer numerators over a common
/// denominator. Integral input returns denominator 1 and clones no rationals.
fn clear_denominators(coeffs: &[Coeff]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for c in coeffs {
        if !c.denom().is_one() {
            den = den.lcm(c.denom());
        }
    }
    let nums = if den.is_one() {
        coeffs.iter().map(|c| c.numer().clone()).collect()
    } else {
        coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect()
    };
    (nums, den)
}

/// Truncated integer convolution: `out[k] = Σ_{i+j=k} a[i]·b[j]` for `k < out_len`.
fn convolve_trunc(a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); out_len];
    for (i, ai) in a.iter().enumerate() {
        if i >= out_len || ai.is_zero() {
            continue;
        }
        let jmax = b.len().min(out_len - i);
        for (j, bj) in b.iter().enumerate().take(jmax) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> Coeff {
        Coeff::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_cancellation_and_identity() {
        // (1 − q) + q = 1, truncation preserved.
        let a = LaurentSeries::from_ints(0, &[1, -1], 5);
        let b = LaurentSeries::from_ints(1, &[1], 5);
        let s = a.add(&b);
        assert_eq!(s.trunc_order(), 5);
        assert_eq!(s.coeff(0), q(1, 1));
        assert_eq!(s.coeff(1), q(0, 1));
        // a + 0 = a
        let z = LaurentSeries::zero(5);
        assert_eq!(a.add(&z).normalized(), a.normalized());
        // q⁻¹ + q⁻¹ = 2q⁻¹
        let p = LaurentSeries::monomial(-1, 3);
        assert_eq!(p.add(&p).coeff(-1), q(2, 1));
    }

    #[test]
    fn mul_examples() {
        // (1 + q)(1 − q) = 1 − q²
        let a = LaurentSeries::from_ints(0, &[1, 1], 8);
        let b = LaurentSeries::from_ints(0, &[1, -1], 8);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), q(1, 1));
        assert_eq!(p.coeff(1), q(0, 1));
        assert_eq!(p.coeff(2), q(-1, 1));
        // a · 1 = a
        assert_eq!(a.mul(&LaurentSeries::one(8)), a);
        // (q⁻¹ + 1)(q) = 1 + q, valuation shift
        let c = LaurentSeries::from_ints(-1, &[1, 1], 4);
        let d = LaurentSeries::monomial(1, 4);
        let s = c.mul(&d);
        assert_eq!(s.valuation(), 0);
        assert_eq!(s.coeff(0), q(1, 1));
        assert_eq!(s.coeff(1), q(1, 1));
    }

    #[test]
    fn mul_truncation_rule() {
        // a known mod q^4 with v=1, b known mod q^3 with v=-2:
        // N = min(4 + (-2), 3 + 1) = 2.
        let a = LaurentSeries::from_ints(1, &[1, 1, 1, 1], 4);
        let b = LaurentSeries::from_ints(-2, &[1, 0, 0, 0, 0, 1], 3);
        let p = a.mul(&b);
        assert_eq!(p.valuation(), -1);
        assert_eq!(p.trunc_order(), 2);
    }

    #[test]
    fn inverse_geometric_series() {
        let a = LaurentSeries::from_ints(0, &[1, -1], 6);
        let inv = a.inverse().unwrap();
        for n in 0..=6 {
            assert_eq!(inv.coeff(n), q(1, 1), "coefficient of q^{n}");
        }
        assert_eq!(LaurentSeries::one(4).inverse().unwrap(), LaurentSeries::one(4));
        // inverse(q²·u) = q⁻²·inverse(u)
        let u = LaurentSeries::from_ints(0, &[1, 3, -2], 5);
        let shifted = u.shift(2);
        let li = shifted.inverse().unwrap();
        let ri = u.inverse().unwrap().shift(-2);
        assert_eq!(li, ri);
        assert_eq!(li.valuation(), -2);
    }

    #[test]
    fn inverse_rejects_zero() {
        assert_eq!(LaurentSeries::zero(3).inverse(), Err(SeriesError::NonInvertible));
    }

    #[test]
    fn inverse_with_rational_leading_coefficient() {
        // (2/3 + q)⁻¹ computed exactly.
        let mut coeffs = vec![q(2, 3), q(1, 1)];
        coeffs.resize(6, Coeff::zero());
        let a = LaurentSeries::new(0, 5, coeffs).unwrap();
        let inv = a.inverse().unwrap();
        let check = a.mul(&inv);
        assert_eq!(check.coeff(0), q(1, 1));
        for n in 1..=check.trunc_order() {
            assert_eq!(check.coeff(n), q(0, 1), "residual at q^{n}");
        }
    }

    #[test]
    fn pow_int_examples() {
        let a = LaurentSeries::from_ints(0, &[1, -1], 6);
        let sq = a.pow_int(2).unwrap();
        assert_eq!(sq.coeff(0), q(1, 1));
        assert_eq!(sq.coeff(1), q(-2, 1));
        assert_eq!(sq.coeff(2), q(1, 1));
        assert_eq!(a.pow_int(0).unwrap(), LaurentSeries::one(6));
        assert_eq!(a.pow_int(-1).unwrap(), a.inverse().unwrap());
    }

    #[test]
    fn dilate_examples() {
        let a = LaurentSeries::from_ints(0, &[1, -1], 4);
        let d = a.dilate(3);
        assert_eq!(d.trunc_order(), 12);
        assert_eq!(d.coeff(0), q(1, 1));
        assert_eq!(d.coeff(3), q(-1, 1));
        assert_eq!(d.coeff(1), q(0, 1));
        assert_eq!(a.dilate(1), a);
        let m = LaurentSeries::monomial(-1, 2);
        assert_eq!(m.dilate(3).valuation(), -3);
    }

    /// Independent oracle: multiply the factors (1 − q^{tn}) directly.
    fn eta_oracle(t: i64, n_max: i64) -> Vec<i64> {
        let mut poly = vec![0i64; (n_max + 1) as usize];
        poly[0] = 1;
        let mut f = t;
        while f <= n_max {
            let mut next = poly.clone();
            for (i, &c) in poly.iter().enumerate() {
                if c != 0 && i as i64 + f <= n_max {
                    next[i + f as usize] -= c;
                }
            }
            poly = next;
            f += t;
        }
        poly
    }

    #[test]
    fn eta_product_matches_factor_oracle() {
        for (t, n) in [(1i64, 40i64), (2, 30), (3, 36)] {
            let s = LaurentSeries::eta_product(t as u32, n);
            let oracle = eta_oracle(t, n);
            for e in 0..=n {
                assert_eq!(
                    s.coeff(e),
                    q(oracle[e as usize], 1),
                    "eta_product({t}, {n}) at q^{e}"
                );
            }
        }
    }

    #[test]
    fn eta_product_examples() {
        // ∏(1−qⁿ) = 1 − q − q² + q⁵ + q⁷ − q¹² − ...
        let s = LaurentSeries::eta_product(1, 12);
        let expected = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
        for (e, &c) in expected.iter().enumerate() {
            assert_eq!(s.coeff(e as i64), q(c, 1));
        }
        // first nontrivial term of the t=3 product is −q³
        let s3 = LaurentSeries::eta_product(3, 2);
        assert_eq!(s3.coeff(0), q(1, 1));
        assert_eq!(s3.coeff(1), q(0, 1));
        assert_eq!(s3.coeff(2), q(0, 1));
        // pentagonal coefficients stay in {−1, 0, 1}
        let s100 = LaurentSeries::eta_product(1, 100);
        for (_, c) in s100.terms() {
            assert!(c.denom().is_one() && c.numer().abs() <= BigInt::one());
        }
    }

    #[test]
    fn eta_dilate_consistency() {
        let n = 60;
        for t in [2u32, 3, 5] {
            let direct = LaurentSeries::eta_product(t, n);
            let base = LaurentSeries::eta_product(1, n / t as i64 + 1);
            let dilated = base.dilate(t).truncate(n);
            assert_eq!(direct, dilated.truncate(n));
        }
    }

    #[test]
    fn json_round_trip_exact() {
        let mut coeffs = vec![q(-7, 3), q(0, 1), q(22, 7), q(5, 1)];
        coeffs.resize(6, Coeff::zero());
        let s = LaurentSeries::new(-2, 3, coeffs).unwrap();
        let j = s.to_json();
        let back = LaurentSeries::from_json(&j).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn coeff_access_beyond_trunc_panics() {
        let a = LaurentSeries::one(3);
        let r = std::panic::catch_unwind(|| a.coeff(4));
        assert!(r.is_err());
    }
}
