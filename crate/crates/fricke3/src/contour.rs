//! Numerical realization of the line-integral identity for `f_{k,m}`.
//!
//! With `f_k = (Δ₃⁺)^ℓ Δ_{3,r}` and
//!
//! `G(τ,z) = e^{−2πimτ} · (f_k(z)/f_k(τ)) · (Δ_{3,14}(τ)/Δ₃⁺(τ)) / (j₃⁺(τ) − j₃⁺(z))`,
//!
//! integrating over `Re τ ∈ [−1/2, 1/2]` at a large height gives `f_{k,m}(z)`
//! outright, and pushing the contour down to `A′ = 0.35` (resp. `0.15`) peels
//! off the residues at the images of `z`: the pair `z, −1/(3z)` produces the
//! `2cos α(θ)` main term, and — in the lower regime — the four extra images
//! produce the closed-form correction terms `B_{k,m}(θ)` and `C_{k,m}(θ)`.
//! `identity_check` recomputes both sides of that equation independently.

use crate::arc::{self, ArcError};
use crate::basis::{self, BasisError};
use crate::forms::{self, FormLabel, FormsError};
use crate::hp::{self, Cx, Prec, SeriesEval};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContourError {
    #[error("pole proximity: |j₃⁺(τ) − j₃⁺(z)| < 1e-20 at a quadrature node")]
    PoleProximity,
    #[error("quadrature not converged: node doubling moved the result by {moved}")]
    QuadratureNotConverged { moved: String },
    #[error("theta {theta} outside the {regime:?} regime window")]
    ThetaOutsideRegime { theta: f64, regime: Regime },
    #[error(transparent)]
    Eval(#[from] hp::EvalError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// Which contour height the check runs at: `Low` is the `θ ∈ [π/2, 23/10]`
/// case with `A′ = 0.35`; `High` is `θ ∈ [23/10, 5π/6 − 12/(25m)]` with
/// `A′ = 0.15` and the `B`, `C` correction terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Low,
    High,
}

/// Contour parameters: height, node count, precision, τ-side series order.
#[derive(Clone, Debug)]
pub struct ContourConfig {
    pub height: f64,
    pub quadrature_points: usize,
    pub precision_bits: Prec,
    pub trunc_order: i64,
}

impl ContourConfig {
    pub fn new(height: f64, quadrature_points: usize, precision_bits: Prec) -> Self {
        assert!(height > 0.0, "contour height must be positive");
        assert!(quadrature_points >= 64, "need at least 64 quadrature nodes");
        let trunc_order = arc::sufficient_trunc_order(1, height, precision_bits);
        Self { height, quadrature_points, precision_bits, trunc_order }
    }

    /// `A′ = 0.35` (low regime) or `A′ = 0.15` (high regime).
    pub fn for_regime(regime: Regime, precision_bits: Prec) -> Self {
        match regime {
            Regime::Low => Self::new(0.35, 512, precision_bits),
            Regime::High => Self::new(0.15, 512, precision_bits),
        }
    }
}

/// Evaluator of `G(·, z)` for fixed `(k, m, z)`: the z-side factor is frozen,
/// the τ-side forms are summed at each node.  Negative powers of `Δ₃⁺(τ)` are
/// taken pointwise (value then reciprocal), never by long series inversion.
pub struct GKernel {
    k: i64,
    m: i64,
    ell: i64,
    prec: Prec,
    z_side: Cx,
    j3_z: Cx,
    delta_tau: SeriesEval,
    dr_tau: SeriesEval,
    d14_tau: SeriesEval,
    j3_tau: SeriesEval,
    j3_deriv_tau: SeriesEval,
}

impl GKernel {
    pub fn new(k: i64, m: i64, z: &Cx, cfg: &ContourConfig) -> Result<Self, ContourError> {
        let prec = cfg.precision_bits;
        let d = basis::decompose(k)?;
        let order = cfg.trunc_order;
        let delta = forms::cached_series(FormLabel::Delta3Plus, order)?;
        let dr = forms::cached_series(FormLabel::Delta3R(d.r), order)?;
        let d14 = forms::cached_series(FormLabel::Delta3R(14), order)?;
        let j3 = forms::cached_series(FormLabel::J3Plus, order)?;

        // z-side constant Δ₃⁺(z)^ℓ Δ_{3,r}(z), summed at an order fitted to Im z.
        let y = z.im.to_f64();
        let z_order = arc::sufficient_trunc_order(1, y, prec);
        let delta_z = forms::cached_series(FormLabel::Delta3Plus, z_order)?;
        let dr_z = forms::cached_series(FormLabel::Delta3R(d.r), z_order)?;
        let q_z = hp::nome(z);
        let delta_z_val = SeriesEval::new(&delta_z, prec).eval(&q_z).checked(prec)?.value;
        let dr_z_val = SeriesEval::new(&dr_z, prec).eval(&q_z).checked(prec)?.value;
        let z_side = delta_z_val.powi(d.ell).mul(&dr_z_val);
        let j3_z_series = forms::cached_series(FormLabel::J3Plus, z_order)?;
        let j3_z = SeriesEval::new(&j3_z_series, prec).eval(&q_z).checked(prec)?.value;

        Ok(Self {
            k,
            m,
            ell: d.ell,
            prec,
            z_side,
            j3_z,
            delta_tau: SeriesEval::new(&delta, prec),
            dr_tau: SeriesEval::new(&dr, prec),
            d14_tau: SeriesEval::new(&d14, prec),
            j3_tau: SeriesEval::new(&j3, prec),
            j3_deriv_tau: SeriesEval::new(&j3.q_derivative(), prec),
        })
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    fn tau_values(&self, tau: &Cx) -> Result<(Cx, Cx, Cx, Cx), ContourError> {
        let p = self.prec;
        let q = hp::nome(tau);
        let delta = self.delta_tau.eval(&q).checked(p)?.value;
        let dr = self.dr_tau.eval(&q).checked(p)?.value;
        let d14 = self.d14_tau.eval(&q).checked(p)?.value;
        let j3 = self.j3_tau.eval(&q).checked(p)?.value;
        Ok((delta, dr, d14, j3))
    }

    fn denominator(&self, j3_tau: &Cx) -> Result<Cx, ContourError> {
        let denom = j3_tau.sub(&self.j3_z);
        if denom.abs() < hp::dec(self.prec, "1e-20") {
            return Err(ContourError::PoleProximity);
        }
        Ok(denom)
    }

    /// First form of the kernel:
    /// `e^{−2πimτ} · z_side / (Δ₃⁺(τ)^ℓ Δ_{3,r}(τ)) · Δ_{3,14}(τ)/Δ₃⁺(τ) / (j₃⁺(τ) − j₃⁺(z))`.
    pub fn g(&self, tau: &Cx) -> Result<Cx, ContourError> {
        let (delta, dr, d14, j3) = self.tau_values(tau)?;
        let denom = self.denominator(&j3)?;
        let expm = hp::nome(tau).powi(-self.m);
        let tau_pole_part = d14.div(&delta).div(&denom);
        let ratio = self.z_side.div(&delta.powi(self.ell).mul(&dr));
        Ok(expm.mul(&ratio).mul(&tau_pole_part))
    }

    /// Second form, with the pole factor written as the logarithmic derivative
    /// of `j₃⁺(τ) − j₃⁺(z)`:
    /// `e^{−2πimτ}/(−2πi) · z_side/(Δ₃⁺^ℓ Δ_{3,r}) · (dj₃⁺/dτ)/(j₃⁺(τ) − j₃⁺(z))`
    /// with `dj₃⁺/dτ = 2πi Σ n c_n q'ⁿ`.
    pub fn g_log_derivative_form(&self, tau: &Cx) -> Result<Cx, ContourError> {
        let p = self.prec;
        let q = hp::nome(tau);
        let delta = self.delta_tau.eval(&q).checked(p)?.value;
        let dr = self.dr_tau.eval(&q).checked(p)?.value;
        let j3 = self.j3_tau.eval(&q).checked(p)?.value;
        let deriv = self.j3_deriv_tau.eval(&q).checked(p)?.value;
        let denom = self.denominator(&j3)?;
        let expm = q.powi(-self.m);
        let ratio = self.z_side.div(&delta.powi(self.ell).mul(&dr));
        // (1/(−2πi)) · 2πi · Σ n c_n q'ⁿ = −Σ n c_n q'ⁿ
        Ok(expm.mul(&ratio).mul(&deriv.div(&denom)).neg())
    }

    /// Residual of `dj₃⁺/dτ = −2πi Δ_{3,14}/Δ₃⁺` at one point, relative.
    pub fn derivative_identity_residual(&self, tau: &Cx) -> Result<Float, ContourError> {
        let p = self.prec;
        let q = hp::nome(tau);
        let delta = self.delta_tau.eval(&q).checked(p)?.value;
        let d14 = self.d14_tau.eval(&q).checked(p)?.value;
        let deriv = self.j3_deriv_tau.eval(&q).checked(p)?.value;
        // q·dj₃⁺/dq = Σ n c_n qⁿ must equal −Δ_{3,14}/Δ₃⁺
        let lhs = deriv;
        let rhs = d14.div(&delta).neg();
        let diff = lhs.sub(&rhs).abs();
        Ok(diff / rhs.abs())
    }
}

/// One-shot kernel value (the spec-level `G` operation).
pub fn g_value(
    tau: &Cx,
    z: &Cx,
    k: i64,
    m: i64,
    cfg: &ContourConfig,
) -> Result<Cx, ContourError> {
    GKernel::new(k, m, z, cfg)?.g(tau)
}

/// Trapezoid quadrature of `G(·, z)` over `Re τ ∈ [−1/2, 1/2]` at
/// `Im τ = cfg.height`.  The integrand is 1-periodic, so the uniform rule is
/// spectrally accurate; convergence is certified by node doubling (the
/// half-density sum reuses the even nodes).
pub fn line_integral(z: &Cx, k: i64, m: i64, cfg: &ContourConfig) -> Result<Cx, ContourError> {
    let kernel = GKernel::new(k, m, z, cfg)?;
    line_integral_with(&kernel, cfg)
}

pub fn line_integral_with(kernel: &GKernel, cfg: &ContourConfig) -> Result<Cx, ContourError> {
    let p = cfg.precision_bits;
    let n = cfg.quadrature_points;
    let total = 2 * n;
    let height = Float::with_val(p, cfg.height);
    let values: Vec<Cx> = (0..total)
        .into_par_iter()
        .map(|j| {
            let x = Float::with_val(p, j as u64) / Float::with_val(p, total as u64)
                - Float::with_val(p, 0.5f64);
            let tau = Cx::new(x, height.clone());
            kernel.g(&tau)
        })
        .collect::<Result<_, _>>()?;
    let mut sum_all = Cx::zero(p);
    let mut sum_even = Cx::zero(p);
    for (j, v) in values.iter().enumerate() {
        sum_all = sum_all.add(v);
        if j % 2 == 0 {
            sum_even = sum_even.add(v);
        }
    }
    let coarse = sum_even.scale(&(Float::with_val(p, 1) / Float::with_val(p, n as u64)));
    let fine = sum_all.scale(&(Float::with_val(p, 1) / Float::with_val(p, total as u64)));
    let moved = fine.sub(&coarse).abs();
    let scale = fine.abs().max(&hp::dec(p, "1e-30"));
    if moved > hp::dec(p, "1e-20") * scale {
        return Err(ContourError::QuadratureNotConverged { moved: hp::to_dec(&moved, 8) });
    }
    Ok(fine)
}

/// The two main residues: `Res_z G = e^{−2πimz}/(−2πi)` and
/// `Res_{−1/(3z)} G = e^{−2πim(−1/(3z))}/(−2πi (√3 z)^k)`.
pub fn residues_main(z: &Cx, k: i64, m: i64, prec: Prec) -> (Cx, Cx) {
    // 1/(−2πi) = i/(2π)
    let inv_m2pii = Cx::new(Float::new(prec), Float::with_val(prec, 1) / (hp::pi(prec) * 2u32));
    let res_z = hp::nome(z).powi(-m).mul(&inv_m2pii);
    let w = z.scale(&Float::with_val(prec, 3)).recip().neg();
    let sqrt3_z = z.scale(&hp::sqrt3(prec));
    let res_w = hp::nome(&w).powi(-m).mul(&inv_m2pii).div(&sqrt3_z.powi(k));
    (res_z, res_w)
}

/// The four extra images of `z` whose residues are crossed between heights
/// 0.35 and 0.15: `z/(3z+1)`, `−1/(3z+3)`, `(−z−1)/(3z+2)`, `(3z+1)/(6z+3)`.
pub fn sec5_extra_poles(z: &Cx) -> [Cx; 4] {
    let p = z.prec();
    let one = Cx::one(p);
    let two = Cx::from_f64(2.0, 0.0, p);
    let three = Float::with_val(p, 3);
    let six = Float::with_val(p, 6);
    let z3 = z.scale(&three);
    let pole_b1 = z.div(&z3.add(&one));
    let pole_b2 = z3.add(&Cx::from_f64(3.0, 0.0, p)).recip().neg();
    let pole_c1 = z.add(&one).neg().div(&z3.add(&two));
    let pole_c2 = z3.add(&one).div(&z.scale(&six).add(&Cx::from_f64(3.0, 0.0, p)));
    [pole_b1, pole_b2, pole_c1, pole_c2]
}

/// Closed-form correction terms `(B_{k,m}(θ), C_{k,m}(θ))` from the residues
/// at the four extra images; each is a conjugate-symmetric sum, hence real.
pub fn correction_terms(theta: &Float, k: i64, m: i64, prec: Prec) -> (Float, Float) {
    let p = prec;
    let theta = Float::with_val(p, theta);
    let (sin_t, cos_t) = theta.clone().sin_cos(Float::new(p));
    let pi = hp::pi(p);
    let sqrt3 = hp::sqrt3(p);
    let two_pi_m = Float::with_val(p, 2) * &pi * Float::with_val(p, m);
    let kf = Float::with_val(p, k);
    let half_k_theta = Float::with_val(p, &kf * &theta) / 2u32;

    // B: weight 4 + 2√3 cosθ, phase 2πm(√3+cosθ)/(4√3+6cosθ), (√3 e^{iθ}+1)^{−k}
    let w4 = Float::with_val(p, 4) + Float::with_val(p, 2) * &sqrt3 * &cos_t;
    let damp_b = (-(Float::with_val(p, &two_pi_m / &sqrt3)
        * (Float::with_val(p, &sin_t) - Float::with_val(p, &sin_t / &w4))))
    .exp();
    let phase_b = Float::with_val(p, &half_k_theta)
        - &two_pi_m * (Float::with_val(p, &sqrt3 + &cos_t)
            / (Float::with_val(p, 4) * &sqrt3 + Float::with_val(p, 6) * &cos_t));
    let base_b = Cx::from_polar(&Float::with_val(p, 1), &theta)
        .scale(&sqrt3)
        .add(&Cx::one(p));
    let term_b = Cx::from_polar(&Float::with_val(p, 1), &phase_b).mul(&base_b.powi(-k));
    let b = Float::with_val(p, 2) * damp_b * term_b.re;

    // C: weight 7 + 4√3 cosθ, phase 2πm(3√3+5cosθ)/(7√3+12cosθ), (√3 e^{iθ}+2)^{−k}.
    // The image (−z−1)/(3z+2), whose automorphy factor is √3e^{iθ}+2, has
    // real part −(3√3+5cosθ)/(7√3+12cosθ), so its residue phase enters with
    // the opposite sign to the B term; the conjugate image (3z+1)/(6z+3)
    // supplies the conjugate summand.  (|C| is unchanged by this pairing.)
    let w7 = Float::with_val(p, 7) + Float::with_val(p, 4) * &sqrt3 * &cos_t;
    let damp_c = (-(Float::with_val(p, &two_pi_m / &sqrt3)
        * (Float::with_val(p, &sin_t) - Float::with_val(p, &sin_t / &w7))))
    .exp();
    let phase_c = half_k_theta
        + &two_pi_m * ((Float::with_val(p, 3) * &sqrt3 + Float::with_val(p, 5) * &cos_t)
            / (Float::with_val(p, 7) * &sqrt3 + Float::with_val(p, 12) * &cos_t));
    let base_c = Cx::from_polar(&Float::with_val(p, 1), &theta)
        .scale(&sqrt3)
        .add(&Cx::from_f64(2.0, 0.0, p));
    let term_c = Cx::from_polar(&Float::with_val(p, 1), &phase_c).mul(&base_c.powi(-k));
    let c = Float::with_val(p, 2) * damp_c * term_c.re;

    (b, c)
}

/// Envelope majorants of the correction terms:
/// `g(θ) = e^{−(2π/√3)(sinθ − sinθ/(4+2√3cosθ))} (4+2√3cosθ)^{1/3}` and the
/// matching `h` with `7+4√3cosθ`.  Both equal 1 at `θ = 5π/6`.
pub fn envelope_functions(theta: &Float, prec: Prec) -> (Float, Float) {
    let p = prec;
    let theta = Float::with_val(p, theta);
    let (sin_t, cos_t) = theta.sin_cos(Float::new(p));
    let pi = hp::pi(p);
    let sqrt3 = hp::sqrt3(p);
    let two_pi_over_sqrt3 = Float::with_val(p, 2) * &pi / &sqrt3;
    let third = Float::with_val(p, 1) / Float::with_val(p, 3);

    let w4 = Float::with_val(p, 4) + Float::with_val(p, 2) * &sqrt3 * &cos_t;
    let g = (-(Float::with_val(p, &two_pi_over_sqrt3)
        * (Float::with_val(p, &sin_t) - Float::with_val(p, &sin_t / &w4))))
    .exp()
        * w4.pow(&third);

    let w7 = Float::with_val(p, 7) + Float::with_val(p, 4) * &sqrt3 * &cos_t;
    let h = (-(two_pi_over_sqrt3
        * (Float::with_val(p, &sin_t) - Float::with_val(p, &sin_t / &w7))))
    .exp()
        * w7.pow(&third);

    (g, h)
}

/// Closed-form derivatives of the envelope functions.
pub fn envelope_derivatives(theta: &Float, prec: Prec) -> (Float, Float) {
    let p = prec;
    let theta = Float::with_val(p, theta);
    let (g, h) = envelope_functions(&theta, p);
    let (sin_t, cos_t) = theta.sin_cos(Float::new(p));
    let pi = hp::pi(p);
    let sqrt3 = hp::sqrt3(p);
    let two_over_sqrt3 = Float::with_val(p, 2) / &sqrt3;
    let two_sqrt3_pi = Float::with_val(p, 2) * &sqrt3 * &pi;

    let w4 = Float::with_val(p, 4) + Float::with_val(p, 2) * &sqrt3 * &cos_t;
    let bracket_g = Float::with_val(p, &sin_t / &w4)
        * (Float::with_val(p, &two_sqrt3_pi * &sin_t) / &w4 - Float::with_val(p, 1))
        - Float::with_val(p, &pi * &cos_t)
            * (Float::with_val(p, &w4 - &Float::with_val(p, 1)) / &w4);
    let dg = Float::with_val(p, &two_over_sqrt3 * &g) * bracket_g;

    let w7 = Float::with_val(p, 7) + Float::with_val(p, 4) * &sqrt3 * &cos_t;
    let bracket_h = Float::with_val(p, 2) * Float::with_val(p, &sin_t / &w7)
        * (Float::with_val(p, &two_sqrt3_pi * &sin_t) / &w7 - Float::with_val(p, 1))
        - Float::with_val(p, &pi * &cos_t)
            * (Float::with_val(p, &w7 - &Float::with_val(p, 1)) / &w7);
    let dh = Float::with_val(p, &two_over_sqrt3 * &h) * bracket_h;

    (dg, dh)
}

/// Everything `identity_check` produced, for reporting.
#[derive(Debug)]
pub struct IdentityReport {
    pub k: i64,
    pub m: i64,
    pub regime: Regime,
    pub theta: Float,
    /// `h(θ) − 2cos α(θ)`, from the arc-side evaluation.
    pub lhs: Float,
    /// Damped, phase-rotated line integral plus corrections (complex; the
    /// imaginary part is a numerical residual).
    pub rhs: Cx,
    pub integral_term: Cx,
    pub two_cos_alpha: Float,
    pub b_term: Float,
    pub c_term: Float,
    pub residual_abs: Float,
    pub residual_rel: Float,
    pub quadrature_points: usize,
    pub precision_bits: Prec,
}

impl IdentityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "m": self.m,
            "regime": match self.regime { Regime::Low => "low", Regime::High => "high" },
            "theta": hp::to_dec(&self.theta, 25),
            "lhs": hp::to_dec(&self.lhs, 30),
            "rhs": { "re": hp::to_dec(&self.rhs.re, 30), "im": hp::to_dec(&self.rhs.im, 30) },
            "residual": hp::to_dec(&self.residual_abs, 10),
            "residual_relative": hp::to_dec(&self.residual_rel, 10),
            "parts": {
                "integral": { "re": hp::to_dec(&self.integral_term.re, 30),
                              "im": hp::to_dec(&self.integral_term.im, 30) },
                "residues": hp::to_dec(&self.two_cos_alpha, 30),
                "B": hp::to_dec(&self.b_term, 30),
                "C": hp::to_dec(&self.c_term, 30),
            },
            "quadrature_points": self.quadrature_points,
            "precision_bits": self.precision_bits,
        })
    }
}

/// Independently computes both sides of the moved-contour identity at one arc
/// point and returns their difference.
///
/// Left side: `h(θ) − 2cos α(θ)` via the q-expansion of `f_{k,m}` on the arc.
/// Right side: `e^{−2πm sinθ/√3} e^{ikθ/2} ∫ G(τ, z) dτ` at the regime height,
/// plus `B_{k,m}(θ) + C_{k,m}(θ)` in the high regime.
pub fn identity_check(
    theta: &Float,
    k: i64,
    m: i64,
    regime: Regime,
    cfg: &ContourConfig,
) -> Result<IdentityReport, ContourError> {
    let p = cfg.precision_bits;
    let theta = Float::with_val(p, theta);
    let t = theta.to_f64();
    let in_window = match regime {
        Regime::Low => {
            t >= std::f64::consts::FRAC_PI_2 - 1e-12 && t <= 2.3 + 1e-12
        }
        Regime::High => {
            let hi = 5.0 * std::f64::consts::PI / 6.0 - 12.0 / (25.0 * m.max(1) as f64);
            t >= 2.3 - 1e-12 && t <= hi + 1e-12
        }
    };
    if !in_window {
        return Err(ContourError::ThetaOutsideRegime { theta: t, regime });
    }

    // Arc side.
    let order = arc::default_arc_order(m, p);
    let form = basis::build_memo(k, m, order)?;
    let sample = arc::normalized_value(&form, &theta, p)?;
    let two_cos_alpha = Float::with_val(p, 2) * sample.alpha.clone().cos();
    let lhs = Float::with_val(p, &sample.h_value) - &two_cos_alpha;

    // Contour side.
    let z = arc::theta_to_z(&theta);
    let integral = line_integral(&z, k, m, cfg)?;
    let (sin_t, _) = theta.clone().sin_cos(Float::new(p));
    let damp = (-(Float::with_val(p, 2) * hp::pi(p) * Float::with_val(p, m) * &sin_t
        / hp::sqrt3(p)))
        .exp();
    let half_k_theta = Float::with_val(p, &theta * &Float::with_val(p, k)) / 2u32;
    let phase = Cx::from_polar(&Float::with_val(p, 1), &half_k_theta);
    let integral_term = integral.scale(&damp).mul(&phase);

    let (b_term, c_term) = match regime {
        Regime::Low => (Float::new(p), Float::new(p)),
        Regime::High => correction_terms(&theta, k, m, p),
    };
    let rhs = integral_term.add(&Cx::from_real(Float::with_val(p, &b_term + &c_term)));

    let diff = rhs.sub(&Cx::from_real(lhs.clone()));
    let residual_abs = diff.abs();
    let mut scale = lhs.clone().abs().max(&rhs.abs());
    if scale < 1u32 {
        scale = Float::with_val(p, 1);
    }
    let residual_rel = Float::with_val(p, &residual_abs / &scale);

    Ok(IdentityReport {
        k,
        m,
        regime,
        theta,
        lhs,
        rhs,
        integral_term,
        two_cos_alpha,
        b_term,
        c_term,
        residual_abs,
        residual_rel,
        quadrature_points: cfg.quadrature_points,
        precision_bits: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    const P: Prec = 320;

    fn arc_z(theta: f64) -> Cx {
        arc::theta_to_z(&Float::with_val(P, theta))
    }

    #[test]
    fn residues_at_corner_are_trivial() {
        // z = i/√3, m = 0, k = 0: both residues equal 1/(−2πi) = i/(2π).
        let z = arc_z(std::f64::consts::FRAC_PI_2);
        let (r1, r2) = residues_main(&z, 0, 0, P);
        let expect = 1.0 / (2.0 * std::f64::consts::PI);
        assert!((r1.im.to_f64() - expect).abs() < 1e-40);
        assert!(r1.re.to_f64().abs() < 1e-40);
        assert!(r1.sub(&r2).abs().to_f64() < 1e-40);
    }

    #[test]
    fn residue_exponential_at_corner() {
        // m = 1, k = 0, z = i/√3: Res_z = e^{2π/√3}/(−2πi).
        let z = arc_z(std::f64::consts::FRAC_PI_2);
        let (r1, _) = residues_main(&z, 0, 1, P);
        let expect = (2.0 * std::f64::consts::PI / 3f64.sqrt()).exp()
            / (2.0 * std::f64::consts::PI);
        assert!((r1.im.to_f64() - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn residues_combine_into_two_cos_alpha() {
        // −2πi(Res_z + Res_{−1/(3z)}) · e^{−2πm sinθ/√3} e^{ikθ/2} = 2cos α(θ).
        let p = P;
        for (k, m, t) in [(0i64, 3i64, 2.0f64), (4, 2, 1.8), (-12, 5, 2.4)] {
            let theta = Float::with_val(p, t);
            let z = arc::theta_to_z(&theta);
            let (r1, r2) = residues_main(&z, k, m, p);
            // multiply by −2πi: (a+bi)(−2πi) = 2πb − 2πa i
            let two_pi = Float::with_val(p, 2) * hp::pi(p);
            let sum = r1.add(&r2);
            let main = Cx::new(
                Float::with_val(p, &two_pi * &sum.im),
                -Float::with_val(p, &two_pi * &sum.re),
            );
            let (sin_t, cos_t) = theta.clone().sin_cos(Float::new(p));
            let damp = (-(Float::with_val(p, 2) * hp::pi(p) * Float::with_val(p, m) * &sin_t
                / hp::sqrt3(p)))
                .exp();
            let half_k_theta = Float::with_val(p, &theta * &Float::with_val(p, k)) / 2u32;
            let phase = Cx::from_polar(&Float::with_val(p, 1), &half_k_theta);
            let lhs = main.scale(&damp).mul(&phase);
            let alpha = half_k_theta
                - Float::with_val(p, 2) * hp::pi(p) * Float::with_val(p, m) * &cos_t
                    / hp::sqrt3(p);
            let expect = Float::with_val(p, 2) * alpha.cos();
            assert!(
                (lhs.re - expect).abs().to_f64() < 1e-60,
                "main residues at (k,m,θ)=({k},{m},{t})"
            );
            assert!(lhs.im.abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn kernel_forms_agree_and_are_periodic() {
        let cfg = ContourConfig::for_regime(Regime::Low, P);
        let z = arc_z(1.9);
        let kernel = GKernel::new(0, 1, &z, &cfg).unwrap();
        let tau = Cx::from_f64(0.21, 0.35, P);
        let g1 = kernel.g(&tau).unwrap();
        let g2 = kernel.g_log_derivative_form(&tau).unwrap();
        let rel = g1.sub(&g2).abs() / g1.abs();
        assert!(rel.to_f64() < 1e-25, "forms disagree: {}", rel.to_f64());
        // 1-periodicity in Re τ (shift computed in full precision)
        let tau1 = Cx::new(
            Float::with_val(P, &tau.re - &Float::with_val(P, 1)),
            tau.im.clone(),
        );
        let g3 = kernel.g(&tau1).unwrap();
        let rel_p = g1.sub(&g3).abs() / g1.abs();
        assert!(rel_p.to_f64() < 1e-60);
        // dj₃⁺/dτ = −2πi Δ_{3,14}/Δ₃⁺
        let dres = kernel.derivative_identity_residual(&tau).unwrap();
        assert!(dres.to_f64() < 1e-25, "derivative identity: {}", dres.to_f64());
    }

    #[test]
    fn kernel_collapses_for_weight_zero() {
        // k=0 ⇒ ℓ=0, r=0: G = e^{−2πimτ} Δ_{3,14}(τ)/(Δ₃⁺(τ)(j₃⁺(τ)−j₃⁺(z))).
        let cfg = ContourConfig::for_regime(Regime::Low, P);
        let z = arc_z(2.0);
        let kernel = GKernel::new(0, 1, &z, &cfg).unwrap();
        let tau = Cx::from_f64(-0.37, 0.35, P);
        let g = kernel.g(&tau).unwrap();

        let q = hp::nome(&tau);
        let d14 = SeriesEval::new(
            &forms::cached_series(FormLabel::Delta3R(14), cfg.trunc_order).unwrap(),
            P,
        )
        .eval(&q)
        .checked(P)
        .unwrap()
        .value;
        let delta = SeriesEval::new(
            &forms::cached_series(FormLabel::Delta3Plus, cfg.trunc_order).unwrap(),
            P,
        )
        .eval(&q)
        .checked(P)
        .unwrap()
        .value;
        let j3_t = SeriesEval::new(
            &forms::cached_series(FormLabel::J3Plus, cfg.trunc_order).unwrap(),
            P,
        )
        .eval(&q)
        .checked(P)
        .unwrap()
        .value;
        let j3_z = {
            let zo = arc::sufficient_trunc_order(1, z.im.to_f64(), P);
            SeriesEval::new(&forms::cached_series(FormLabel::J3Plus, zo).unwrap(), P)
                .eval(&hp::nome(&z))
                .checked(P)
                .unwrap()
                .value
        };
        let manual = q
            .powi(-1)
            .mul(&d14)
            .div(&delta)
            .div(&j3_t.sub(&j3_z));
        let rel = g.sub(&manual).abs() / manual.abs();
        assert!(rel.to_f64() < 1e-60);
    }

    #[test]
    fn line_integral_at_large_height_recovers_the_form() {
        // At A = 2.0 no poles lie above the contour, so eq. (4) gives
        // f_{0,1}(z) directly; compare with the arc-side series evaluation.
        let cfg = ContourConfig::new(2.0, 64, P);
        let theta = 2.0f64;
        let z = arc_z(theta);
        let integral = line_integral(&z, 0, 1, &cfg).unwrap();
        let order = arc::default_arc_order(1, P);
        let form = basis::build_memo(0, 1, order).unwrap();
        let direct = arc::evaluate(&form.series, &z, P).unwrap().value;
        let rel = integral.sub(&direct).abs() / direct.abs();
        assert!(rel.to_f64() < 1e-15, "eq.(4) at height 2: rel err {}", rel.to_f64());
    }

    #[test]
    fn contour_deformation_between_pole_free_heights() {
        // Heights 1.2 and 1.7 both lie above every pole for z on the arc, so
        // the two integrals agree.
        let z = arc_z(1.7);
        let a = line_integral(&z, 0, 2, &ContourConfig::new(1.2, 64, P)).unwrap();
        let b = line_integral(&z, 0, 2, &ContourConfig::new(1.7, 64, P)).unwrap();
        let rel = a.sub(&b).abs() / a.abs();
        assert!(rel.to_f64() < 1e-30);
    }

    #[test]
    fn envelope_endpoint_values_are_one() {
        let p = 256;
        let hi = arc::theta_hi(p);
        let (g, h) = envelope_functions(&hi, p);
        assert!((g.to_f64() - 1.0).abs() < 1e-60);
        assert!((h.to_f64() - 1.0).abs() < 1e-60);
        // 4 + 2√3 cos(5π/6) = 1
        let w = 4.0 + 2.0 * 3f64.sqrt() * (5.0 * std::f64::consts::PI / 6.0).cos();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_derivatives_match_finite_differences() {
        let p = 384;
        for i in 0..20 {
            let t = 2.31 + (0.30 / 19.0) * i as f64;
            let theta = Float::with_val(p, t);
            let (dg, dh) = envelope_derivatives(&theta, p);
            let eps = Float::with_val(p, 1e-25f64);
            let tp = Float::with_val(p, &theta + &eps);
            let tm = Float::with_val(p, &theta - &eps);
            let (gp, hp_) = envelope_functions(&tp, p);
            let (gm, hm) = envelope_functions(&tm, p);
            let fd_g = Float::with_val(p, &gp - &gm) / (Float::with_val(p, 2) * &eps);
            let fd_h = Float::with_val(p, &hp_ - &hm) / (Float::with_val(p, 2) * &eps);
            assert!(
                (Float::with_val(p, &dg - &fd_g)).abs().to_f64() < 1e-8,
                "g' mismatch at θ={t}"
            );
            assert!(
                (Float::with_val(p, &dh - &fd_h)).abs().to_f64() < 1e-8,
                "h' mismatch at θ={t}"
            );
        }
    }

    #[test]
    fn correction_terms_weight_zero_closed_form() {
        // k=0: B = 2 e^{−2πm(sinθ−sinθ/(4+2√3cosθ))/√3} cos(2πm(√3+cosθ)/(4√3+6cosθ)).
        let p = 320;
        let m = 23i64;
        let t = 2.5f64;
        let theta = Float::with_val(p, t);
        let (b, _) = correction_terms(&theta, 0, m, p);
        let st = t.sin();
        let ct = t.cos();
        let w4 = 4.0 + 2.0 * 3f64.sqrt() * ct;
        let damp =
            (-2.0 * std::f64::consts::PI * m as f64 / 3f64.sqrt() * (st - st / w4)).exp();
        let phase = 2.0 * std::f64::consts::PI * m as f64 * (3f64.sqrt() + ct)
            / (4.0 * 3f64.sqrt() + 6.0 * ct);
        let expect = 2.0 * damp * phase.cos();
        assert!((b.to_f64() - expect).abs() < 1e-12 * expect.abs().max(1e-3));
    }

    #[test]
    fn extra_poles_sit_between_the_heights_and_share_j3() {
        let p = 448;
        let z = arc_z(2.5);
        let poles = sec5_extra_poles(&z);
        let zo = arc::sufficient_trunc_order(1, 0.15, p);
        let j3 = forms::cached_series(FormLabel::J3Plus, zo).unwrap();
        let ev = SeriesEval::new(&j3, p);
        let j3_z = ev.eval(&hp::nome(&Cx::new(
            Float::with_val(p, &z.re),
            Float::with_val(p, &z.im),
        )))
        .checked(p)
        .unwrap()
        .value;
        for pole in &poles {
            let im = pole.im.to_f64();
            assert!(im > 0.15 && im < 0.35, "pole height {im}");
            let v = ev.eval(&hp::nome(pole)).checked(p).unwrap().value;
            let diff = v.sub(&j3_z).abs();
            assert!(diff.to_f64() < 1e-20, "j₃⁺ mismatch {}", diff.to_f64());
        }
    }

    #[test]
    fn pow_helper_sanity() {
        // (√3 e^{iθ} + 1) at θ = 5π/6 has squared modulus 4 + 2√3 cos θ = 1.
        let p = 192;
        let theta = arc::theta_hi(p);
        let base = Cx::from_polar(&Float::with_val(p, 1), &theta)
            .scale(&hp::sqrt3(p))
            .add(&Cx::one(p));
        let w = 4.0 + 2.0 * 3f64.sqrt() * (5.0 * std::f64::consts::PI / 6.0).cos();
        assert!((base.norm_sqr().to_f64() - w).abs() < 1e-30);
        let cube = Float::with_val(p, 2).pow(&(Float::with_val(p, 1) / Float::with_val(p, 3)));
        assert!((cube.to_f64() - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }
}
