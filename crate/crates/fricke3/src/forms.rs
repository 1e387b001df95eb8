//! The named forms of level 3: Eisenstein series `E_k`, symmetrized `E_k⁺`,
//! the cusp form `Δ₃⁺ = (η(z)η(3z))¹²`, the Hauptmodul `j₃⁺`, the normalized
//! weight-r forms `Δ_{3,r}`, and the eta-quotient pair `η/η₃`, `η₃/η`.
//!
//! All expansions are exact. Fractional eta prefactors (`q^{±1/12}`) are never
//! stored in a series; the two bare eta quotients carry their offsets as
//! documented constants and every composite form used downstream has an
//! integral exponent lattice.

use crate::qseries::{Coeff, LaurentSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormsError {
    #[error("Eisenstein weight must be an even integer ≥ 4, got {0}")]
    BadEisensteinWeight(i64),
    #[error("closed-form coefficients are available for k in {{4, 6, 8, 10, 14}}, got {0}")]
    UnsupportedPlusWeight(i64),
    #[error("Δ_{{3,r}} is defined for r in {{0, 4, 6, 8, 10, 14}}, got {0}")]
    UnsupportedR(i64),
    #[error("truncation order {got} below the minimum {min} for this form")]
    OrderTooSmall { got: i64, min: i64 },
}

/// Identifies one of the named forms; used as the memo-cache key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormLabel {
    Eisenstein(i64),
    EisensteinPlus(i64),
    Delta3Plus,
    J3Plus,
    Delta3R(i64),
}

/// A named form: exact series plus its weight. `exponent_offset` is zero for
/// every form here; only the bare eta quotients carry `∓1/12` and those are
/// returned as raw series by [`eta_quotient_pair`].
#[derive(Clone, Debug)]
pub struct NamedForm {
    pub label: FormLabel,
    pub weight: i64,
    pub series: LaurentSeries,
    pub exponent_offset: Coeff,
}

/// Exponent offsets (in units of `q`) of the two series returned by
/// [`eta_quotient_pair`]: `η/η₃ = q^{-1/12}·Σa_n qⁿ`, `η₃/η = q^{+1/12}·Σb_n qⁿ`.
pub fn eta_quotient_offsets() -> (Coeff, Coeff) {
    (
        Coeff::new(BigInt::from(-1), BigInt::from(12)),
        Coeff::new(BigInt::from(1), BigInt::from(12)),
    )
}

/// `n`-th Bernoulli number (B₁ = −1/2 convention), by the defining recurrence
/// `Σ_{j≤n} C(n+1, j) B_j = 0`. Only small indices are ever needed here.
pub fn bernoulli(n: u32) -> Coeff {
    let mut b: Vec<Coeff> = Vec::with_capacity(n as usize + 1);
    b.push(Coeff::one());
    for m in 1..=n as usize {
        // B_m = -1/(m+1) · Σ_{j<m} C(m+1, j) B_j
        let mut acc = Coeff::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += bj * Coeff::from_integer(binom.clone());
            }
            // C(m+1, j+1) = C(m+1, j) · (m+1-j)/(j+1)
            binom = binom * BigInt::from((m + 1 - j) as u64) / BigInt::from((j + 1) as u64);
        }
        b.push(-acc / Coeff::from_integer(BigInt::from(m as u64 + 1)));
    }
    b.pop().unwrap()
}

/// Divisor power sum `σ_p(n) = Σ_{d|n} d^p` by trial division.
pub fn sigma(p: u32, n: u64) -> BigInt {
    assert!(n >= 1);
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    total
}

/// `E_k(z) = 1 − (2k / B_k) Σ σ_{k−1}(n) qⁿ`, exact.
pub fn eisenstein(k: i64, trunc_order: i64) -> Result<NamedForm, FormsError> {
    if k < 4 || k % 2 != 0 {
        return Err(FormsError::BadEisensteinWeight(k));
    }
    if trunc_order < 0 {
        return Err(FormsError::OrderTooSmall { got: trunc_order, min: 0 });
    }
    let bk = bernoulli(k as u32);
    let factor = -Coeff::from_integer(BigInt::from(2 * k)) / bk;
    let mut coeffs = Vec::with_capacity(trunc_order as usize + 1);
    coeffs.push(Coeff::one());
    for n in 1..=trunc_order {
        coeffs.push(&factor * Coeff::from_integer(sigma(k as u32 - 1, n as u64)));
    }
    Ok(NamedForm {
        label: FormLabel::Eisenstein(k),
        weight: k,
        series: LaurentSeries::new(0, trunc_order, coeffs).expect("valid window"),
        exponent_offset: Coeff::zero(),
    })
}

/// `E_k⁺(z) = (E_k(z) + 3^{k/2} E_k(3z)) / (1 + 3^{k/2})`; constant term 1.
pub fn eisenstein_plus(k: i64, trunc_order: i64) -> Result<NamedForm, FormsError> {
    let ek = eisenstein(k, trunc_order)?.series;
    let sub_order = trunc_order.div_euclid(3) + 1;
    let ek3 = eisenstein(k, sub_order)?.series.dilate(3).truncate(trunc_order);
    let three_pow = Coeff::from_integer(BigInt::from(3).pow(k as u32 / 2));
    let numerator = ek.add(&ek3.scale(&three_pow));
    let series = numerator.scale(&(Coeff::one() / (Coeff::one() + three_pow)));
    Ok(NamedForm {
        label: FormLabel::EisensteinPlus(k),
        weight: k,
        series,
        exponent_offset: Coeff::zero(),
    })
}

/// Closed-form Fourier coefficient `s_{k,n}` of `E_k⁺`:
/// 1 at n = 0; `−(1/(1+3^{k/2}))(2k/B_k) σ_{k−1}(n)` off multiples of 3, with
/// the extra `3^{k/2} σ_{k−1}(n/3)` term on multiples of 3.
pub fn s_coefficient(k: i64, n: i64) -> Result<Coeff, FormsError> {
    if ![4, 6, 8, 10, 14].contains(&k) {
        return Err(FormsError::UnsupportedPlusWeight(k));
    }
    assert!(n >= 0);
    if n == 0 {
        return Ok(Coeff::one());
    }
    let three_pow = Coeff::from_integer(BigInt::from(3).pow(k as u32 / 2));
    let prefactor = -(Coeff::from_integer(BigInt::from(2 * k)) / bernoulli(k as u32))
        / (Coeff::one() + three_pow.clone());
    let mut s = Coeff::from_integer(sigma(k as u32 - 1, n as u64));
    if n % 3 == 0 {
        s += three_pow * Coeff::from_integer(sigma(k as u32 - 1, n as u64 / 3));
    }
    Ok(prefactor * s)
}

/// `Δ₃⁺(z) = (η(z)η(3z))¹² = q² ∏(1−qⁿ)¹² ∏(1−q³ⁿ)¹²`; valuation exactly 2.
pub fn delta3_plus(trunc_order: i64) -> Result<NamedForm, FormsError> {
    if trunc_order < 2 {
        return Err(FormsError::OrderTooSmall { got: trunc_order, min: 2 });
    }
    let n = trunc_order - 2;
    let p1 = LaurentSeries::eta_product(1, n);
    let p3 = LaurentSeries::eta_product(3, n);
    let series = p1
        .mul(&p3)
        .pow_int(12)
        .expect("unit series")
        .shift(2);
    debug_assert_eq!(series.valuation(), 2);
    Ok(NamedForm {
        label: FormLabel::Delta3Plus,
        weight: 12,
        series,
        exponent_offset: Coeff::zero(),
    })
}

/// `j₃⁺(z) = (η/η₃)¹² + 12 + 3⁶ (η₃/η)¹² = q⁻¹ + 0 + 783q + …`.
pub fn j3_plus(trunc_order: i64) -> Result<NamedForm, FormsError> {
    if trunc_order < 0 {
        return Err(FormsError::OrderTooSmall { got: trunc_order, min: 0 });
    }
    let n = trunc_order + 1;
    let p1 = LaurentSeries::eta_product(1, n);
    let p3 = LaurentSeries::eta_product(3, n);
    // (η/η₃)¹² = q⁻¹ (P₁/P₃)¹² and (η₃/η)¹² = q (P₃/P₁)¹², built independently
    // so the product identity between them stays a real test downstream.
    let a12 = p1.div(&p3).expect("unit").pow_int(12).expect("unit").shift(-1);
    let b12 = p3.div(&p1).expect("unit").pow_int(12).expect("unit").shift(1);
    let series = a12
        .add(&LaurentSeries::constant(Coeff::from_integer(BigInt::from(12)), trunc_order))
        .add(&b12.scale(&Coeff::from_integer(BigInt::from(729))))
        .truncate(trunc_order);
    debug_assert_eq!(series.valuation(), -1);
    Ok(NamedForm {
        label: FormLabel::J3Plus,
        weight: 0,
        series,
        exponent_offset: Coeff::zero(),
    })
}

/// Dimension of the relevant cusp-form space: `ε_r = 1` iff r ∈ {8, 10, 14}.
pub fn epsilon_r(r: i64) -> Result<i64, FormsError> {
    match r {
        0 | 4 | 6 => Ok(0),
        8 | 10 | 14 => Ok(1),
        _ => Err(FormsError::UnsupportedR(r)),
    }
}

/// The normalized holomorphic form `Δ_{3,r} = q^{ε_r} + O(q^{ε_r+1})` of weight
/// `r`, from the explicit `E_k⁺` combinations. The normalization
/// `q^ε + O(q^{ε+1})` is authoritative: the leading coefficient is checked and
/// the sign fixed if a combination were to produce `−1` (none does).
pub fn delta3_r(r: i64, trunc_order: i64) -> Result<NamedForm, FormsError> {
    let eps = epsilon_r(r)?;
    if trunc_order < eps + 1 {
        return Err(FormsError::OrderTooSmall { got: trunc_order, min: eps + 1 });
    }
    let ratio = |num: i64, den: i64| Coeff::new(BigInt::from(num), BigInt::from(den));
    let series = match r {
        0 => LaurentSeries::one(trunc_order),
        4 => eisenstein_plus(4, trunc_order)?.series,
        6 => eisenstein_plus(6, trunc_order)?.series,
        8 => {
            let e4 = eisenstein_plus(4, trunc_order)?.series;
            let e8 = eisenstein_plus(8, trunc_order)?.series;
            e4.mul(&e4).sub(&e8).scale(&ratio(41, 1728))
        }
        10 => {
            let e4 = eisenstein_plus(4, trunc_order)?.series;
            let e6 = eisenstein_plus(6, trunc_order)?.series;
            let e10 = eisenstein_plus(10, trunc_order)?.series;
            e4.mul(&e6).sub(&e10).scale(&ratio(61, 432))
        }
        14 => {
            let e6 = eisenstein_plus(6, trunc_order)?.series;
            let e8 = eisenstein_plus(8, trunc_order)?.series;
            let e14 = eisenstein_plus(14, trunc_order)?.series;
            e6.mul(&e8).sub(&e14).scale(&ratio(-22427, 272160))
        }
        _ => unreachable!(),
    };
    let normalized = series.normalized();
    assert_eq!(normalized.valuation(), eps, "Δ_{{3,{r}}} must start at q^{eps}");
    let lead = normalized.coeff(eps);
    let series = if lead == -Coeff::one() {
        normalized.neg()
    } else {
        assert!(lead.is_one(), "Δ_{{3,{r}}} leading coefficient must be ±1, got {lead}");
        normalized
    };
    Ok(NamedForm {
        label: FormLabel::Delta3R(r),
        weight: r,
        series,
        exponent_offset: Coeff::zero(),
    })
}

/// The two eta-quotient tails: `(Σ a_n qⁿ, Σ b_n qⁿ)` with
/// `η/η₃ = q^{-1/12} Σ a_n qⁿ` and `η₃/η = q^{+1/12} Σ b_n qⁿ`.
pub fn eta_quotient_pair(trunc_order: i64) -> Result<(LaurentSeries, LaurentSeries), FormsError> {
    if trunc_order < 0 {
        return Err(FormsError::OrderTooSmall { got: trunc_order, min: 0 });
    }
    let p1 = LaurentSeries::eta_product(1, trunc_order);
    let p3 = LaurentSeries::eta_product(3, trunc_order);
    let a = p1.div(&p3).expect("unit series");
    let b = p3.div(&p1).expect("unit series");
    Ok((a, b))
}

type CacheMap = HashMap<(FormLabel, i64), Arc<LaurentSeries>>;

fn cache() -> &'static RwLock<CacheMap> {
    static CACHE: OnceLock<RwLock<CacheMap>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Process-wide memo for named-form series (single-writer, multi-reader).
/// Construction is deterministic, so a racing double-compute is benign.
pub fn cached_series(label: FormLabel, trunc_order: i64) -> Result<Arc<LaurentSeries>, FormsError> {
    if let Some(hit) = cache().read().expect("form cache poisoned").get(&(label, trunc_order)) {
        return Ok(Arc::clone(hit));
    }
    let form = match label {
        FormLabel::Eisenstein(k) => eisenstein(k, trunc_order)?,
        FormLabel::EisensteinPlus(k) => eisenstein_plus(k, trunc_order)?,
        FormLabel::Delta3Plus => delta3_plus(trunc_order)?,
        FormLabel::J3Plus => j3_plus(trunc_order)?,
        FormLabel::Delta3R(r) => delta3_r(r, trunc_order)?,
    };
    let arc = Arc::new(form.series);
    cache()
        .write()
        .expect("form cache poisoned")
        .insert((label, trunc_order), Arc::clone(&arc));
    Ok(arc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn int(n: i64) -> Coeff {
        Coeff::from_integer(BigInt::from(n))
    }

    #[test]
    fn bernoulli_small_values() {
        let expect = [
            (2u32, 1i64, 6i64),
            (4, -1, 30),
            (6, 1, 42),
            (8, -1, 30),
            (10, 5, 66),
            (12, -691, 2730),
            (14, 7, 6),
        ];
        for (n, p, q) in expect {
            assert_eq!(bernoulli(n), Coeff::new(BigInt::from(p), BigInt::from(q)), "B_{n}");
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(sigma(3, 3), BigInt::from(28));
        assert_eq!(sigma(7, 2), BigInt::from(129));
        assert_eq!(sigma(0, 12), BigInt::from(6));
    }

    #[test]
    fn eisenstein_expansions() {
        let e4 = eisenstein(4, 3).unwrap().series;
        assert_eq!(e4.coeff(0), int(1));
        assert_eq!(e4.coeff(1), int(240));
        assert_eq!(e4.coeff(2), int(2160));
        assert_eq!(e4.coeff(3), int(6720));
        let e6 = eisenstein(6, 1).unwrap().series;
        assert_eq!(e6.coeff(1), int(-504));
        assert!(eisenstein(5, 4).is_err());
        assert!(eisenstein(2, 4).is_err());
    }

    #[test]
    fn eisenstein_plus_examples() {
        let e4p = eisenstein_plus(4, 3).unwrap().series;
        assert_eq!(e4p.coeff(0), int(1));
        assert_eq!(e4p.coeff(1), int(24));
        assert_eq!(e4p.coeff(2), int(216));
        assert_eq!(e4p.coeff(3), int(888));
    }

    #[test]
    fn s_coefficient_matches_series() {
        for k in [4i64, 6, 8, 10, 14] {
            let series = eisenstein_plus(k, 40).unwrap().series;
            for n in 0..=40 {
                assert_eq!(
                    s_coefficient(k, n).unwrap(),
                    series.coeff(n),
                    "s_{{{k},{n}}} against the series"
                );
            }
        }
        assert_eq!(s_coefficient(4, 0).unwrap(), int(1));
        assert_eq!(s_coefficient(4, 1).unwrap(), int(24));
        assert_eq!(s_coefficient(4, 3).unwrap(), int(888));
        assert!(s_coefficient(12, 1).is_err());
    }

    #[test]
    fn delta3_plus_expansion() {
        let d = delta3_plus(8).unwrap().series;
        assert_eq!(d.valuation(), 2);
        assert_eq!(d.coeff(2), int(1));
        // q³ coefficient −12: the only contribution is the linear term of (1−q)¹².
        assert_eq!(d.coeff(3), int(-12));
        assert!(d.is_integral());
    }

    /// Independent oracle for the first j₃⁺ coefficients: binomial expansion of
    /// (1 + u)^±12 with u = P₁/P₃ − 1 carried to order 3 in exact rationals.
    #[test]
    fn j3_plus_low_order_coefficients() {
        let j3 = j3_plus(2).unwrap().series;
        assert_eq!(j3.valuation(), -1);
        assert_eq!(j3.coeff(-1), int(1));
        assert_eq!(j3.coeff(0), int(0));

        // Oracle: P₁/P₃ = 1 − q − q² + q³ + O(q⁴) (long division by hand),
        // (P₁/P₃)¹² = 1 − 12q + 54q² − 76q³ via Σ C(12,i) uⁱ, and
        // (P₃/P₁)¹² = 1 + 12q + ... ⇒ [q¹]j₃⁺ = 54 + 729 = 783,
        // [q²]j₃⁺ = −76 + 729·12 = 8672.
        assert_eq!(j3.coeff(1), int(783));
        assert_eq!(j3.coeff(2), int(8672));
    }

    #[test]
    fn eta_quotient_inverse_identity() {
        let (a, b) = eta_quotient_pair(40).unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.coeff(0), int(1));
        for n in 1..=prod.trunc_order() {
            assert_eq!(prod.coeff(n), int(0), "a·b at q^{n}");
        }
        let a12 = a.pow_int(12).unwrap();
        let b12 = b.pow_int(12).unwrap();
        let prod12 = a12.mul(&b12);
        assert_eq!(prod12.coeff(0), int(1));
        for n in 1..=prod12.trunc_order() {
            assert_eq!(prod12.coeff(n), int(0));
        }
    }

    #[test]
    fn eta_quotient_coefficients() {
        let (a, b) = eta_quotient_pair(60).unwrap();
        assert_eq!(a.coeff(0), int(1));
        assert_eq!(b.coeff(0), int(1));
        assert_eq!(a.coeff(1), int(-1));
        let mut bound = BigInt::from(1);
        for n in 0..=60 {
            assert!(a.coeff(n).numer().abs() <= bound, "|a_{n}| ≤ 2^{n}");
            assert!(b.coeff(n).numer().abs() <= bound, "|b_{n}| ≤ 2^{n}");
            bound *= 2;
        }
        assert!(a.is_integral() && b.is_integral());
    }

    #[test]
    fn delta3_r_normalization_and_products() {
        for (r, eps) in [(0i64, 0i64), (4, 0), (6, 0), (8, 1), (10, 1), (14, 1)] {
            let d = delta3_r(r, 30).unwrap().series;
            assert_eq!(d.valuation(), eps, "Δ_{{3,{r}}} valuation");
            assert!(d.coeff(eps).is_one());
            assert!(d.is_integral(), "Δ_{{3,{r}}} integral");
        }
        let d14 = delta3_r(14, 25).unwrap().series;
        for r in [0i64, 4, 6, 8, 10, 14] {
            let a = delta3_r(r, 30).unwrap().series;
            let b = delta3_r(14 - r, 30).unwrap().series;
            let prod = a.mul(&b);
            for n in 1..=25 {
                assert_eq!(prod.coeff(n), d14.coeff(n), "Δ_{{3,{r}}}·Δ_{{3,{}}} at q^{n}", 14 - r);
            }
        }
        assert!(delta3_r(2, 30).is_err());
    }

    #[test]
    fn j3_times_delta_is_holomorphic() {
        let j3 = j3_plus(20).unwrap().series;
        let d = delta3_plus(22).unwrap().series;
        let prod = j3.mul(&d).normalized();
        assert_eq!(prod.valuation(), 1);
        assert!(prod.is_integral());
    }

    #[test]
    fn cached_series_returns_same_expansion() {
        let a = cached_series(FormLabel::J3Plus, 10).unwrap();
        let b = cached_series(FormLabel::J3Plus, 10).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, j3_plus(10).unwrap().series);
    }
}
