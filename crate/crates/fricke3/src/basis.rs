//! The canonical basis `f_{k,m} = (Δ₃⁺)^{ℓ_k} Δ_{3,r_k} F(j₃⁺)` of
//! `M_k^!(Γ₀⁺(3))`, built by an ascending triangular solve.
//!
//! Writing `k = 12ℓ_k + r_k` with `r_k ∈ {0,4,6,8,10,14}`, the products
//! `P_j = (Δ₃⁺)^ℓ Δ_{3,r} (j₃⁺)^j` have leading term `q^{2ℓ+ε-j}` with unit
//! coefficient, so matching the target expansion `q^{-m} + O(q^{2ℓ+ε+1})`
//! coefficient by coefficient is a unit upper-triangular system.  Integrality
//! of the solved polynomial is asserted after the fact, never assumed.

use crate::forms::{self, FormLabel, FormsError};
use crate::qseries::{Coeff, LaurentSeries, SeriesError};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("weight must be even, got {0}")]
    OddWeight(i64),
    #[error("index below basis range: m = {m} < {min} = -2ℓ - ε for weight {k}")]
    IndexBelowRange { k: i64, m: i64, min: i64 },
    #[error("truncation order {got} too small; the defining window ends at q^{window_end}")]
    OrderTooSmall { got: i64, window_end: i64 },
    #[error("internal consistency failure while solving for F: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("basis cache I/O: {0}")]
    Cache(#[from] std::io::Error),
}

/// The tuple `(k, ℓ_k, r_k, ε_k, s_k, t_k)` governing basis shape and the
/// forced vanishing orders at the two corners of the arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub k: i64,
    /// `ℓ_k` with `k = 12ℓ_k + r_k`.
    pub ell: i64,
    /// `r_k ∈ {0, 4, 6, 8, 10, 14}`.
    pub r: i64,
    /// `ε_k = dim S_{r_k}(Γ₀⁺(3))`, 1 iff `r_k ∈ {8, 10, 14}`.
    pub eps: i64,
    /// corner order at `i/√3`: `s_k ∈ {0,1}` with `2s_k ≡ k (mod 4)`.
    pub s: i64,
    /// corner order at `ρ₃`: `t_k ∈ {0..5}` with `−2t_k ≡ k (mod 12)`.
    pub t: i64,
}

/// Splits an even weight as `k = 12ℓ + r` and derives the corner orders.
pub fn decompose(k: i64) -> Result<WeightDecomposition, BasisError> {
    if k % 2 != 0 {
        return Err(BasisError::OddWeight(k));
    }
    let r = match k.rem_euclid(12) {
        0 => 0,
        4 => 4,
        6 => 6,
        8 => 8,
        10 => 10,
        2 => 14,
        _ => unreachable!("even residues mod 12"),
    };
    let ell = (k - r) / 12;
    let eps = forms::epsilon_r(r).expect("r from decomposition");
    let s = if k.rem_euclid(4) == 0 { 0 } else { 1 };
    let t = (-k / 2).rem_euclid(6);
    debug_assert_eq!(12 * ell + r, k);
    debug_assert_eq!((2 * s - k).rem_euclid(4), 0);
    debug_assert_eq!((-2 * t - k).rem_euclid(12), 0);
    Ok(WeightDecomposition { k, ell, r, eps, s, t })
}

/// One basis element `f_{k,m}`: its exact expansion together with the monic
/// integer polynomial `F` (ascending coefficients, `poly.last() == 1`) such
/// that `f_{k,m} = (Δ₃⁺)^ℓ Δ_{3,r} F(j₃⁺)`.
#[derive(Clone, Debug)]
pub struct BasisForm {
    pub decomp: WeightDecomposition,
    pub m: i64,
    pub poly: Vec<BigInt>,
    pub series: LaurentSeries,
}

impl BasisForm {
    /// Smallest admissible index for this weight: `m ≥ −2ℓ − ε`.
    pub fn min_index(d: &WeightDecomposition) -> i64 {
        -2 * d.ell - d.eps
    }

    /// End of the defining coefficient window: `f = q^{-m} + O(q^{2ℓ+ε+1})`.
    pub fn window_end(d: &WeightDecomposition) -> i64 {
        2 * d.ell + d.eps
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.decomp.k,
            "m": self.m,
            "order": self.series.trunc_order(),
            "poly": self.poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "series": self.series.to_json(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BasisError> {
        let bad = |msg: &str| BasisError::InternalConsistency(format!("cache parse: {msg}"));
        let k = v.get("k").and_then(|x| x.as_i64()).ok_or_else(|| bad("missing k"))?;
        let m = v.get("m").and_then(|x| x.as_i64()).ok_or_else(|| bad("missing m"))?;
        let poly = v
            .get("poly")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing poly"))?
            .iter()
            .map(|x| {
                x.as_str()
                    .and_then(|s| BigInt::from_str(s).ok())
                    .ok_or_else(|| bad("bad poly entry"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let series =
            LaurentSeries::from_json(v.get("series").ok_or_else(|| bad("missing series"))?)?;
        Ok(BasisForm { decomp: decompose(k)?, m, poly, series })
    }
}

/// Default working order for basis construction: the defining window plus a
/// 40-coefficient verification margin.
pub fn default_order(k: i64, m: i64) -> Result<i64, BasisError> {
    let d = decompose(k)?;
    let _ = m;
    Ok(BasisForm::window_end(&d) + 40)
}

/// The generator `f_k = f_{k,-2ℓ-ε} = (Δ₃⁺)^ℓ Δ_{3,r}`; `F = 1`.
pub fn generator(k: i64, trunc_order: i64) -> Result<BasisForm, BasisError> {
    let d = decompose(k)?;
    let series = generator_series(&d, trunc_order)?;
    Ok(BasisForm { decomp: d, m: BasisForm::min_index(&d), poly: vec![BigInt::one()], series })
}

fn generator_series(d: &WeightDecomposition, trunc_order: i64) -> Result<LaurentSeries, BasisError> {
    let val = 2 * d.ell + d.eps;
    let rel = trunc_order - val;
    if rel < 1 {
        return Err(BasisError::OrderTooSmall { got: trunc_order, window_end: val });
    }
    let delta = forms::cached_series(FormLabel::Delta3Plus, 2 + rel)?;
    let dr = forms::cached_series(FormLabel::Delta3R(d.r), d.eps + rel)?;
    let series = delta.pow_int(d.ell)?.mul(&dr);
    debug_assert_eq!(series.valuation(), val);
    Ok(series.truncate(trunc_order))
}

/// Builds `f_{k,m}` at truncation order `trunc_order`.
///
/// The monic polynomial is determined first on the minimal coefficient window
/// by descending unit-triangular elimination over `P_j = f_k · (j₃⁺)^j`; the
/// full-order expansion is then assembled once as `f_k · F(j₃⁺)` by Horner.
/// The gap shape is re-verified on the full window, so a wrong polynomial
/// cannot survive phase 2.
pub fn build(k: i64, m: i64, trunc_order: i64) -> Result<BasisForm, BasisError> {
    let d = decompose(k)?;
    let min = BasisForm::min_index(&d);
    if m < min {
        return Err(BasisError::IndexBelowRange { k, m, min });
    }
    let window_end = BasisForm::window_end(&d);
    if trunc_order <= window_end {
        return Err(BasisError::OrderTooSmall { got: trunc_order, window_end });
    }
    let deg = (window_end + m) as usize;
    let poly = solve_poly(&d, m, deg)?;

    // Assemble at a uniform relative order; multiplication preserves it, so
    // the final window stays reliable a few coefficients past trunc_order.
    let rel = trunc_order + m + 4;
    let gen = generator_series(&d, 2 * d.ell + d.eps + rel)?;
    let j3 = forms::cached_series(FormLabel::J3Plus, rel - 1)?;
    let mut acc = LaurentSeries::one(rel);
    for j in (0..deg).rev() {
        acc = acc.mul(&j3);
        if !poly[j].is_zero() {
            let c = LaurentSeries::constant(
                Coeff::from_integer(poly[j].clone()),
                acc.trunc_order(),
            );
            acc = acc.add(&c);
        }
    }
    let f = gen.mul(&acc);

    if !f.coeff(-m).is_one() {
        return Err(BasisError::InternalConsistency("leading coefficient is not 1".into()));
    }
    for n in (-m + 1)..=window_end {
        if !f.coeff(n).is_zero() {
            return Err(BasisError::InternalConsistency(format!(
                "nonzero coefficient {} inside the gap at q^{n}",
                f.coeff(n)
            )));
        }
    }

    Ok(BasisForm { decomp: d, m, poly, series: f.truncate(trunc_order) })
}

/// Determines the monic integer polynomial of `f_{k,m}` on the minimal window
/// `q^{-m} … q^{2ℓ+ε}`. The products `P_j` lead with coefficient 1 at
/// `q^{2ℓ+ε-j}`, so elimination proceeds in strictly descending leading
/// exponents and integrality is checked after the fact.
fn solve_poly(d: &WeightDecomposition, m: i64, deg: usize) -> Result<Vec<BigInt>, BasisError> {
    let window_end = BasisForm::window_end(d);
    let rel = window_end + 1 + m + 4;
    let gen = generator_series(d, 2 * d.ell + d.eps + rel)?;
    let j3 = forms::cached_series(FormLabel::J3Plus, rel - 1)?;
    let mut powers: Vec<LaurentSeries> = Vec::with_capacity(deg + 1);
    powers.push(LaurentSeries::one(rel));
    for j in 1..=deg {
        powers.push(powers[j - 1].mul(&j3));
    }

    let mut f = gen.mul(&powers[deg]);
    let mut poly_rat: Vec<Coeff> = vec![Coeff::zero(); deg + 1];
    poly_rat[deg] = Coeff::one();
    if !f.coeff(-m).is_one() {
        return Err(BasisError::InternalConsistency(format!(
            "P_{deg} does not lead with q^{} coefficient 1",
            -m
        )));
    }
    for j in (0..deg).rev() {
        let target = window_end - j as i64;
        let c = f.coeff(target);
        if !c.is_zero() {
            let coef = -c;
            f = f.add(&gen.mul(&powers[j]).scale(&coef));
            poly_rat[j] = coef;
        }
    }

    let mut poly = Vec::with_capacity(deg + 1);
    for (j, c) in poly_rat.iter().enumerate() {
        if !c.denom().is_one() {
            return Err(BasisError::InternalConsistency(format!(
                "non-integer solve residue {c} at degree {j}"
            )));
        }
        poly.push(c.numer().clone());
    }
    Ok(poly)
}

/// Re-derives `b` at a higher order and confirms the stored expansion
/// bit-exactly; also re-checks the monic-integer shape. The solve is unit
/// upper-triangular, so agreement here certifies uniqueness of the basis
/// element with the given principal part and gap.
pub fn uniqueness_check(b: &BasisForm) -> bool {
    let monic = b.poly.last().map(|c| c.is_one()).unwrap_or(false);
    let degree_ok =
        b.poly.len() as i64 - 1 == BasisForm::window_end(&b.decomp) + b.m;
    if !monic || !degree_ok {
        return false;
    }
    let rebuilt = match build(b.decomp.k, b.m, b.series.trunc_order() + 20) {
        Ok(f) => f,
        Err(_) => return false,
    };
    if rebuilt.poly != b.poly {
        return false;
    }
    let lo = b.series.valuation().max(rebuilt.series.valuation());
    (lo..=b.series.trunc_order()).all(|n| rebuilt.series.coeff(n) == b.series.coeff(n))
}

type BasisMemo = HashMap<(i64, i64, i64), Arc<BasisForm>>;

fn memo() -> &'static RwLock<BasisMemo> {
    static MEMO: OnceLock<RwLock<BasisMemo>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Process-wide memoized [`build`]; repeated scans share one construction.
pub fn build_memo(k: i64, m: i64, trunc_order: i64) -> Result<Arc<BasisForm>, BasisError> {
    if let Some(hit) = memo().read().expect("basis memo poisoned").get(&(k, m, trunc_order)) {
        return Ok(Arc::clone(hit));
    }
    let built = Arc::new(build(k, m, trunc_order)?);
    memo()
        .write()
        .expect("basis memo poisoned")
        .insert((k, m, trunc_order), Arc::clone(&built));
    Ok(built)
}

/// On-disk cache of built basis forms keyed by `(k, m, order)`. Writers stage
/// to a temporary file and rename, so concurrent writers of the same key
/// last-write-win with identical deterministic contents.
pub struct BasisCache {
    dir: PathBuf,
}

impl BasisCache {
    pub fn new(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir.as_ref())?;
        Ok(Self { dir: dir.as_ref().to_path_buf() })
    }

    fn path(&self, k: i64, m: i64, order: i64) -> PathBuf {
        self.dir.join(format!("basis_k{k}_m{m}_N{order}.json"))
    }

    pub fn load(&self, k: i64, m: i64, order: i64) -> Option<BasisForm> {
        let text = std::fs::read_to_string(self.path(k, m, order)).ok()?;
        let value: serde_json::Value = serde_json::from_str(&text).ok()?;
        let form = BasisForm::from_json(&value).ok()?;
        (form.decomp.k == k && form.m == m && form.series.trunc_order() == order).then_some(form)
    }

    pub fn store(&self, form: &BasisForm) -> std::io::Result<()> {
        let final_path =
            self.path(form.decomp.k, form.m, form.series.trunc_order());
        let tmp_path = final_path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = std::fs::File::create(&tmp_path)?;
            f.write_all(form.to_json().to_string().as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp_path, &final_path)
    }
}

/// Cache-through build: disk hit, else construct and persist.
pub fn build_cached(
    k: i64,
    m: i64,
    trunc_order: i64,
    cache: &BasisCache,
) -> Result<BasisForm, BasisError> {
    if let Some(form) = cache.load(k, m, trunc_order) {
        return Ok(form);
    }
    let built = build(k, m, trunc_order)?;
    cache.store(&built)?;
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let d0 = decompose(0).unwrap();
        assert_eq!((d0.ell, d0.r, d0.eps, d0.s, d0.t), (0, 0, 0, 0, 0));
        let d8 = decompose(8).unwrap();
        assert_eq!((d8.ell, d8.r, d8.eps, d8.s, d8.t), (0, 8, 1, 0, 2));
        let dm12 = decompose(-12).unwrap();
        assert_eq!((dm12.ell, dm12.r, dm12.eps, dm12.s, dm12.t), (-1, 0, 0, 0, 0));
        assert!(decompose(7).is_err());
    }

    #[test]
    fn decompose_invariants_and_pairing() {
        for k in (-60..=60).filter(|k| k % 2 == 0) {
            let d = decompose(k).unwrap();
            assert_eq!(12 * d.ell + d.r, k);
            assert_eq!(d.eps, if [8, 10, 14].contains(&d.r) { 1 } else { 0 });
            assert_eq!((2 * d.s).rem_euclid(4), k.rem_euclid(4));
            assert_eq!((-2 * d.t).rem_euclid(12), k.rem_euclid(12));
            // pairing used by the integral formula
            let dual = decompose(2 - k).unwrap();
            assert_eq!(dual.ell, -d.ell - 1, "ℓ_{{2-k}} at k={k}");
            assert_eq!(dual.r, 14 - d.r, "r_{{2-k}} at k={k}");
        }
    }

    #[test]
    fn generator_examples() {
        let g12 = generator(12, 20).unwrap();
        assert_eq!(g12.m, -2);
        let delta = crate::forms::delta3_plus(20).unwrap().series;
        assert_eq!(g12.series, delta);

        let g0 = generator(0, 10).unwrap();
        assert_eq!(g0.m, 0);
        assert!(g0.series.coeff(0).is_one());

        // generator(−12) is the series inverse of Δ₃⁺, leading term q⁻².
        let gm = generator(-12, 10).unwrap();
        assert_eq!(gm.m, 2);
        assert_eq!(gm.series.valuation(), -2);
        let oracle = delta.inverse().unwrap().truncate(10);
        assert_eq!(gm.series, oracle);
    }

    #[test]
    fn build_trivial_cases() {
        let b = build(0, 0, 10).unwrap();
        assert_eq!(b.poly, vec![BigInt::one()]);
        assert!(b.series.coeff(0).is_one());
        for n in 1..=10 {
            assert!(b.series.coeff(n).is_zero());
        }

        // F(x) = x, f_{0,1} = j₃⁺ since the Hauptmodul has constant term 0.
        let b01 = build(0, 1, 5).unwrap();
        assert_eq!(b01.poly, vec![BigInt::zero(), BigInt::one()]);
        let j3 = crate::forms::j3_plus(5).unwrap().series;
        assert_eq!(b01.series, j3);

        let b12 = build(12, -2, 18).unwrap();
        assert_eq!(b12.series, generator(12, 18).unwrap().series);
        assert_eq!(b12.poly, vec![BigInt::one()]);
    }

    #[test]
    fn build_gap_shape_and_integrality() {
        for &(k, m) in &[(0i64, 4i64), (4, 2), (8, 3), (10, 1), (12, 0), (-12, 3), (14, 2), (6, 5)] {
            let d = decompose(k).unwrap();
            let n = BasisForm::window_end(&d) + 12;
            let b = build(k, m, n).unwrap();
            assert_eq!(b.degree() as i64, BasisForm::window_end(&d) + m);
            assert!(b.poly.last().unwrap().is_one(), "monic at ({k},{m})");
            assert!(b.series.coeff(-m).is_one());
            for e in (-m + 1)..=BasisForm::window_end(&d) {
                assert!(b.series.coeff(e).is_zero(), "gap at q^{e} for ({k},{m})");
            }
            assert!(b.series.is_integral(), "integral expansion at ({k},{m})");
        }
    }

    #[test]
    fn build_rejects_out_of_range() {
        assert!(matches!(build(0, -1, 10), Err(BasisError::IndexBelowRange { .. })));
        assert!(matches!(build(12, -3, 10), Err(BasisError::IndexBelowRange { .. })));
    }

    #[test]
    fn uniqueness_checks() {
        let b = build(0, 1, 8).unwrap();
        assert!(uniqueness_check(&b));
        let b8 = build(8, 4, 12).unwrap();
        assert!(uniqueness_check(&b8));
        let mut tampered = b8.clone();
        *tampered.poly.last_mut().unwrap() = BigInt::from(2);
        assert!(!uniqueness_check(&tampered));
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = BasisCache::new(dir.path()).unwrap();
        let built = build_cached(8, 2, 14, &cache).unwrap();
        let loaded = cache.load(8, 2, 14).expect("cache hit");
        assert_eq!(loaded.poly, built.poly);
        assert_eq!(loaded.series, built.series);
        // second call must come from disk and agree
        let again = build_cached(8, 2, 14, &cache).unwrap();
        assert_eq!(again.series, built.series);
    }
}
