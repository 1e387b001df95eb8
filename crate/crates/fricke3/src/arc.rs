//! Evaluation of forms on the boundary arc `S = {e^{iθ}/√3 : π/2 ≤ θ ≤ 5π/6}`,
//! realness verification of `e^{ikθ/2} f(z)`, sign-change zero location, and
//! the valence-formula bookkeeping that certifies the zero counts.
//!
//! The normalized arc value is
//! `h(θ) = e^{−2πm sinθ/√3} · e^{ikθ/2} · f_{k,m}(e^{iθ}/√3)`,
//! which is real on the arc and stays within the proven distance of
//! `2cos α(θ)`, `α(θ) = kθ/2 − 2πm cosθ/√3`.  The damping uses `sin θ`: that
//! is what `|q^{-m}| = e^{2πm·Im z}` forces, with `cos θ` showing up only in
//! the oscillatory phase.

use crate::basis::{self, BasisForm};
use crate::forms::{self, FormLabel};
use crate::hp::{self, Cx, EvalOutcome, Prec, SeriesEval};
use crate::qseries::LaurentSeries;
use num_rational::Rational64;
use rayon::prelude::*;
use rug::Float;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArcError {
    #[error("evaluation point must satisfy Im(z) > 0")]
    NotUpperHalfPlane,
    #[error(transparent)]
    InsufficientTruncation(#[from] hp::EvalError),
    #[error("theta {0} outside the arc [π/2, 5π/6]")]
    ThetaOutsideArc(f64),
    #[error(transparent)]
    Basis(#[from] basis::BasisError),
    #[error(transparent)]
    Forms(#[from] forms::FormsError),
}

/// Arc left endpoint `θ = π/2` (the elliptic point `i/√3`).
pub fn theta_lo(prec: Prec) -> Float {
    hp::pi(prec) / 2u32
}

/// Arc right endpoint `θ = 5π/6` (the elliptic point `ρ₃`).
pub fn theta_hi(prec: Prec) -> Float {
    hp::pi(prec) * 5u32 / 6u32
}

/// `z = e^{iθ}/√3`.
pub fn theta_to_z(theta: &Float) -> Cx {
    let prec = theta.prec();
    let radius = hp::sqrt3(prec).recip();
    Cx::from_polar(&radius, theta)
}

/// Result of one series evaluation: the value, the truncation-doubling
/// remainder as an error estimate, and the largest-summand scale.
pub type Evaluation = hp::CheckedEval;

fn checked_outcome(out: EvalOutcome, prec: Prec) -> Result<Evaluation, ArcError> {
    out.checked(prec).map_err(ArcError::from)
}

/// Sums a q-expansion at `z` in the upper half-plane.  Fails with
/// `InsufficientTruncation` when the doubling check shows the stored window
/// cannot support `2^{-precision_bits/2}` relative accuracy.
pub fn evaluate(
    series: &LaurentSeries,
    z: &Cx,
    precision_bits: Prec,
) -> Result<Evaluation, ArcError> {
    if !(z.im.is_sign_positive() && !z.im.is_zero()) {
        return Err(ArcError::NotUpperHalfPlane);
    }
    let ev = SeriesEval::new(series, precision_bits);
    let q = hp::nome(z);
    checked_outcome(ev.eval(&q), precision_bits)
}

/// One evaluated arc point of a normalized basis form.
#[derive(Clone, Debug)]
pub struct ArcSample {
    pub theta: Float,
    pub z: Cx,
    /// Real part of `h(θ)` after the realness projection.
    pub h_value: Float,
    /// Phase function `α(θ) = kθ/2 − 2πm cosθ/√3`.
    pub alpha: Float,
    /// Imaginary part of `h(θ)` before projection.
    pub imag_residual: Float,
    /// Damped largest-summand magnitude; the residual is judged against this.
    pub scale: Float,
}

/// Truncation order sufficient for the doubling check at the given precision,
/// from the coefficient growth model `ln|c_n| ≈ (4π/√3)·√(m·n)` for a form
/// with a pole of order `m` at the cusp, evaluated down to `Im z = y_min`.
pub fn sufficient_trunc_order(m: i64, y_min: f64, prec: Prec) -> i64 {
    let m_eff = m.max(1) as f64;
    let a = 2.0 * std::f64::consts::PI * y_min;
    let b = 4.0 * std::f64::consts::PI / 3f64.sqrt() * m_eff.sqrt();
    let value_ln = if m > 0 { a * m as f64 } else { 0.0 };
    // −30 covers the scale loss when sampling within the bisection tolerance
    // of a zero of the sum; −20 is slack for the growth model itself.
    let target = value_ln - 30.0 - std::f64::consts::LN_2 * (prec as f64) / 2.0 - 20.0;
    // smallest n with  b·√n − a·n ≤ target
    let disc = (b * b - 4.0 * a * target).sqrt();
    let u = (b + disc) / (2.0 * a);
    let n_star = (u * u * 1.05).ceil() as i64;
    // The doubling check probes the midpoint of the exponent window, so the
    // window must extend to twice the exponent where terms become negligible.
    2 * n_star + m.max(0) + 16
}

/// Default evaluation order for arc work on `f_{k,m}`: enough terms for the
/// whole arc (worst case `Im z = 1/(2√3)` at the ρ₃ corner).
pub fn default_arc_order(m: i64, prec: Prec) -> i64 {
    let y_min = 0.5 / 3f64.sqrt();
    sufficient_trunc_order(m, y_min, prec)
}

/// Reusable evaluator for one form on the arc.
pub struct ArcEvaluator {
    prec: Prec,
    k: i64,
    m: i64,
    eval: SeriesEval,
}

impl ArcEvaluator {
    pub fn for_form(b: &BasisForm, prec: Prec) -> Self {
        Self { prec, k: b.decomp.k, m: b.m, eval: SeriesEval::new(&b.series, prec) }
    }

    pub fn sample(&self, theta: &Float) -> Result<ArcSample, ArcError> {
        let p = self.prec;
        let theta = Float::with_val(p, theta);
        let z = theta_to_z(&theta);
        let q = hp::nome(&z);
        let out = self.eval.eval(&q);
        let f = checked_outcome(out, p)?;

        let (sin_t, cos_t) = theta.clone().sin_cos(Float::new(p));
        let two_pi_m = Float::with_val(p, 2) * hp::pi(p) * Float::with_val(p, self.m);
        let sqrt3 = hp::sqrt3(p);
        let damp = (-(Float::with_val(p, &two_pi_m * &sin_t) / &sqrt3)).exp();
        let half_k_theta = Float::with_val(p, &theta * &Float::with_val(p, self.k)) / 2u32;
        let phase = Cx::from_polar(&Float::with_val(p, 1), &half_k_theta);
        let h = f.value.scale(&damp).mul(&phase);
        let alpha = half_k_theta - Float::with_val(p, &two_pi_m * &cos_t) / &sqrt3;
        let scale = Float::with_val(p, &f.max_term) * &damp;
        Ok(ArcSample { theta, z, h_value: h.re, alpha, imag_residual: h.im, scale })
    }
}

/// Normalized arc value `h(θ)` of a basis form at one point.
pub fn normalized_value(b: &BasisForm, theta: &Float, prec: Prec) -> Result<ArcSample, ArcError> {
    let t = theta.to_f64();
    let eps = 1e-15;
    if !(t >= std::f64::consts::FRAC_PI_2 - eps && t <= 5.0 * std::f64::consts::PI / 6.0 + eps) {
        return Err(ArcError::ThetaOutsideArc(t));
    }
    ArcEvaluator::for_form(b, prec).sample(theta)
}

/// Uniform arc grid including both corners: `grid_points + 1` samples.
pub fn arc_samples(
    b: &BasisForm,
    grid_points: usize,
    prec: Prec,
) -> Result<Vec<ArcSample>, ArcError> {
    let evaluator = ArcEvaluator::for_form(b, prec);
    let lo = theta_lo(prec);
    let span = theta_hi(prec) - lo.clone();
    (0..=grid_points)
        .into_par_iter()
        .map(|i| {
            let theta =
                lo.clone() + span.clone() * Float::with_val(prec, i as u64) / (grid_points as u64);
            evaluator.sample(&theta)
        })
        .collect()
}

/// One refined zero of `h` on the open arc.
#[derive(Clone, Debug)]
pub struct ZeroLocation {
    pub theta: Float,
    /// Inside the window `θ < 5π/6 − 12/(25m)` covered by the estimates.
    pub in_guaranteed_window: bool,
}

/// Report of a sign-change scan for one basis form.
#[derive(Debug)]
pub struct ArcZeroReport {
    pub k: i64,
    pub m: i64,
    pub zeros: Vec<ZeroLocation>,
    pub expected_count: i64,
    /// Forced corner orders `(s_k, t_k)` from the weight decomposition.
    pub corner_orders: (i64, i64),
    /// Numerically-vanishing flags for `|h|` at `θ = π/2` and `θ = 5π/6`.
    pub corner_small: (bool, bool),
    /// Refined brackets that collapsed into a corner; expected exactly when
    /// the corresponding corner order is positive.
    pub corner_artifacts: usize,
    pub grid_points: usize,
    pub precision_bits: Prec,
    pub refine_tolerance: f64,
    /// Set when adjacent zeros could not be separated at this grid density.
    pub rescan_denser_grid: bool,
    /// `m ≥ 18|ℓ| + 23`, the hypothesis of the located-zeros theorem.
    pub in_theorem_range: bool,
    pub pass: bool,
}

impl ArcZeroReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "m": self.m,
            "expected_count": self.expected_count,
            "found_count": self.zeros.len(),
            "zeros": self.zeros.iter().map(|z| serde_json::json!({
                "theta": hp::to_dec(&z.theta, 30),
                "in_guaranteed_window": z.in_guaranteed_window,
            })).collect::<Vec<_>>(),
            "corner_orders": [self.corner_orders.0, self.corner_orders.1],
            "corner_small": [self.corner_small.0, self.corner_small.1],
            "corner_artifacts": self.corner_artifacts,
            "grid_points": self.grid_points,
            "precision_bits": self.precision_bits,
            "refine_tolerance": self.refine_tolerance,
            "rescan_denser_grid": self.rescan_denser_grid,
            "in_theorem_range": self.in_theorem_range,
            "pass": self.pass,
        })
    }
}

fn sign_of(f: &Float) -> i8 {
    match f.cmp0() {
        Some(std::cmp::Ordering::Greater) => 1,
        Some(std::cmp::Ordering::Less) => -1,
        _ => 0,
    }
}

/// Scans `h` for sign changes over an already-evaluated sample grid and
/// refines each bracket by bisection.
pub fn scan_zeros_from_samples(
    b: &BasisForm,
    samples: &[ArcSample],
    prec: Prec,
) -> Result<ArcZeroReport, ArcError> {
    assert!(samples.len() >= 17, "grid too coarse to scan");
    let evaluator = ArcEvaluator::for_form(b, prec);
    let grid_points = samples.len() - 1;
    let d = b.decomp;
    let m = b.m;
    let expected = 2 * d.ell + m + d.eps;

    let tol = hp::pi(prec) * hp::dec(prec, "1e-12");
    let corner_margin = hp::dec(prec, "1e-6");
    let lo = theta_lo(prec);
    let hi = theta_hi(prec);

    let window_limit = if m >= 1 {
        Some(hi.clone() - Float::with_val(prec, 12) / Float::with_val(prec, 25 * m))
    } else {
        None
    };

    let mut zeros: Vec<Float> = Vec::new();
    let mut corner_artifacts = 0usize;
    for w in samples.windows(2) {
        let (sa, sb) = (&w[0], &w[1]);
        let (sig_a0, sig_b0) = (sign_of(&sa.h_value), sign_of(&sb.h_value));
        if sig_a0 == 0 {
            if zeros.last().map(|z| *z != sa.theta).unwrap_or(true) {
                zeros.push(sa.theta.clone());
            }
            continue;
        }
        if sig_b0 == 0 || sig_a0 * sig_b0 > 0 {
            continue;
        }
        // Bisection; the sign at `a` is sig_a0 throughout by construction.
        let mut a = sa.theta.clone();
        let mut bt = sb.theta.clone();
        while Float::with_val(prec, &bt - &a) > tol {
            let mid = Float::with_val(prec, &a + &bt) / 2u32;
            let sm = evaluator.sample(&mid)?;
            match sign_of(&sm.h_value) {
                0 => {
                    a = mid.clone();
                    bt = mid;
                    break;
                }
                s if s == sig_a0 => a = mid,
                _ => bt = mid,
            }
        }
        let root = Float::with_val(prec, &a + &bt) / 2u32;
        let near_lo = Float::with_val(prec, &root - &lo).abs() < corner_margin;
        let near_hi = Float::with_val(prec, &hi - &root).abs() < corner_margin;
        if near_lo || near_hi {
            corner_artifacts += 1;
            continue;
        }
        zeros.push(root);
    }
    zeros.sort_by(|x, y| x.partial_cmp(y).expect("finite"));

    // collapse unresolved near-duplicates and flag for a denser rescan
    let mut rescan = false;
    let mut dedup: Vec<Float> = Vec::with_capacity(zeros.len());
    let sep = Float::with_val(prec, &tol * &Float::with_val(prec, 4));
    for z in zeros {
        if let Some(last) = dedup.last() {
            if Float::with_val(prec, &z - last) < sep {
                rescan = true;
                continue;
            }
        }
        dedup.push(z);
    }

    let corner_small = {
        let small = |s: &ArcSample| {
            let thresh = Float::with_val(prec, &s.scale) >> (prec / 4);
            s.h_value.clone().abs() < thresh
        };
        (small(&samples[0]), small(samples.last().expect("nonempty grid")))
    };

    let zeros: Vec<ZeroLocation> = dedup
        .into_iter()
        .map(|theta| {
            let in_window = window_limit.as_ref().map(|wl| theta < *wl).unwrap_or(true);
            ZeroLocation { theta, in_guaranteed_window: in_window }
        })
        .collect();

    let found = zeros.len() as i64;
    let pass = found == expected;
    Ok(ArcZeroReport {
        k: d.k,
        m,
        zeros,
        expected_count: expected,
        corner_orders: (d.s, d.t),
        corner_small,
        corner_artifacts,
        grid_points,
        precision_bits: prec,
        refine_tolerance: 1e-12 * std::f64::consts::PI,
        rescan_denser_grid: rescan || found != expected,
        in_theorem_range: m >= 18 * d.ell.abs() + 23,
        pass,
    })
}

/// Grid scan plus bisection refinement for the zeros of `h` on the open arc.
pub fn scan_zeros(b: &BasisForm, grid_points: usize, prec: Prec) -> Result<ArcZeroReport, ArcError> {
    assert!(grid_points >= 16, "grid too coarse to scan");
    let samples = arc_samples(b, grid_points, prec)?;
    scan_zeros_from_samples(b, &samples, prec)
}

/// Arc profile of the Hauptmodul: values at a uniform grid, realness
/// residuals, the corner values 66 and −42, and strict monotonicity.
#[derive(Debug)]
pub struct J3ArcProfile {
    pub samples: Vec<(Float, Float)>,
    pub monotone_decreasing: bool,
    /// `|j₃⁺(i/√3) − 66|` and `|j₃⁺(ρ₃) + 42|`.
    pub corner_errors: (Float, Float),
    pub max_relative_residual: Float,
}

pub fn j3_arc_profile(grid_points: usize, prec: Prec) -> Result<J3ArcProfile, ArcError> {
    assert!(grid_points >= 2);
    let order = sufficient_trunc_order(1, 0.5 / 3f64.sqrt(), prec);
    let series = forms::cached_series(FormLabel::J3Plus, order)?;
    let ev = SeriesEval::new(&series, prec);
    let lo = theta_lo(prec);
    let span = theta_hi(prec) - lo.clone();
    let results: Vec<(Float, Float, Float)> = (0..=grid_points)
        .into_par_iter()
        .map(|i| {
            let theta =
                lo.clone() + span.clone() * Float::with_val(prec, i as u64) / (grid_points as u64);
            let z = theta_to_z(&theta);
            let out = ev.eval(&hp::nome(&z));
            let rel = Float::with_val(prec, &out.value.im).abs()
                / Float::with_val(prec, &out.max_term);
            (theta, out.value.re, rel)
        })
        .collect();
    let max_relative_residual = results
        .iter()
        .map(|(_, _, r)| r.clone())
        .fold(Float::new(prec), |acc, r| if r > acc { r } else { acc });
    let monotone_decreasing = results.windows(2).all(|w| w[1].1 < w[0].1);
    let first = &results.first().expect("nonempty").1;
    let last = &results.last().expect("nonempty").1;
    let corner_errors = (
        Float::with_val(prec, first - &Float::with_val(prec, 66)).abs(),
        Float::with_val(prec, last + &Float::with_val(prec, 42)).abs(),
    );
    Ok(J3ArcProfile {
        samples: results.into_iter().map(|(t, v, _)| (t, v)).collect(),
        monotone_decreasing,
        corner_errors,
        max_relative_residual,
    })
}

/// Valence-formula audit: `v_∞ + s_k/2 + t_k/6 + (arc zero count) − k/6`,
/// exactly zero when the corner orders are exactly `s_k, t_k`, all arc zeros
/// are simple, and no zero lies elsewhere in the fundamental domain.
pub fn valence_audit(b: &BasisForm, report: &ArcZeroReport) -> Rational64 {
    let v_inf = b.series.true_valuation().expect("basis form is nonzero");
    let d = &b.decomp;
    let count = report.zeros.len() as i64;
    Rational64::new(6 * v_inf + 3 * d.s + d.t + 6 * count - d.k, 6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build;

    #[test]
    fn evaluate_constant_and_preconditions() {
        let one = LaurentSeries::one(4);
        let z = Cx::from_f64(0.1, 0.7, 192);
        let v = evaluate(&one, &z, 192).unwrap();
        assert!((v.value.re.to_f64() - 1.0).abs() < 1e-50);
        let lower = Cx::from_f64(0.1, -0.7, 192);
        assert!(matches!(evaluate(&one, &lower, 192), Err(ArcError::NotUpperHalfPlane)));
    }

    #[test]
    fn j3_special_values() {
        let prec = 256;
        let order = sufficient_trunc_order(1, 0.5 / 3f64.sqrt(), prec);
        let j3 = forms::j3_plus(order).unwrap().series;
        // j₃⁺(i/√3) = 66
        let i_sqrt3 = theta_to_z(&(hp::pi(prec) / 2u32));
        let v = evaluate(&j3, &i_sqrt3, prec).unwrap();
        let err66 = Float::with_val(prec, &v.value.re - &Float::with_val(prec, 66)).abs();
        assert!(err66.to_f64() < 1e-20, "j3(i/√3) error {}", err66.to_f64());
        // j₃⁺(ρ₃) = −42
        let rho3 = theta_to_z(&theta_hi(prec));
        let w = evaluate(&j3, &rho3, prec).unwrap();
        let err42 = Float::with_val(prec, &w.value.re + &Float::with_val(prec, 42)).abs();
        assert!(err42.to_f64() < 1e-20, "j3(ρ₃) error {}", err42.to_f64());
    }

    #[test]
    fn insufficient_truncation_is_detected() {
        // 20 coefficients of j₃⁺ cannot support 512-bit accuracy at ρ₃.
        let j3 = forms::j3_plus(20).unwrap().series;
        let rho3 = theta_to_z(&theta_hi(512));
        assert!(matches!(
            evaluate(&j3, &rho3, 512),
            Err(ArcError::InsufficientTruncation(_))
        ));
    }

    #[test]
    fn constant_form_normalizes_to_one() {
        let b = build(0, 0, 12).unwrap();
        let prec = 192;
        for t in [1.6f64, 2.0, 2.5] {
            let s = normalized_value(&b, &Float::with_val(prec, t), prec).unwrap();
            assert!((s.h_value.to_f64() - 1.0).abs() < 1e-40);
            assert!(s.imag_residual.clone().abs().to_f64() < 1e-40);
            assert!(s.alpha.clone().abs().to_f64() < 1e-40);
        }
    }

    #[test]
    fn alpha_phase_function() {
        // k=4, m=2: α(θ) = 2θ − 4π cosθ/√3
        let prec = 256;
        let b = build(4, 2, default_arc_order(2, prec)).unwrap();
        let theta = Float::with_val(prec, 2.0);
        let s = normalized_value(&b, &theta, prec).unwrap();
        let expect = 2.0 * 2.0 - 4.0 * std::f64::consts::PI * (2.0f64).cos() / 3f64.sqrt();
        assert!((s.alpha.to_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn realness_on_small_instance() {
        let prec = 384;
        let order = default_arc_order(6, prec);
        let b = build(6, 6, order).unwrap();
        let samples = arc_samples(&b, 64, prec).unwrap();
        for s in &samples {
            let rel = s.imag_residual.clone().abs() / Float::with_val(prec, &s.scale);
            assert!(
                rel < Float::with_val(prec, 1) >> (prec / 2),
                "imaginary residual too large at θ = {}",
                s.theta.to_f64()
            );
        }
    }

    #[test]
    fn delta3_has_no_arc_zeros_and_valence_zero() {
        let prec = 384;
        let b = build(12, -2, default_arc_order(-2, prec)).unwrap();
        let report = scan_zeros(&b, 400, prec).unwrap();
        assert_eq!(report.zeros.len(), 0);
        assert_eq!(report.expected_count, 0);
        assert!(report.pass);
        let audit = valence_audit(&b, &report);
        assert_eq!(audit, Rational64::new(0, 1));
    }

    #[test]
    fn j3_profile_endpoints_and_monotonicity() {
        let prof = j3_arc_profile(200, 320).unwrap();
        assert!(prof.monotone_decreasing);
        assert!(prof.corner_errors.0.to_f64() < 1e-30);
        assert!(prof.corner_errors.1.to_f64() < 1e-30);
        assert!(prof.max_relative_residual.to_f64() < 1e-40);
    }
}
