//! Weakly holomorphic modular forms for the Fricke group of level 3.
//!
//! The crate builds the canonical basis `f_{k,m} = (Δ₃⁺)^ℓ Δ_{3,r} F(j₃⁺)` of
//! `M_k^!(Γ₀⁺(3))` from exact rational q-expansions, locates the zeros of the
//! basis elements on the lower boundary arc `|z| = 1/√3` of the fundamental
//! domain, and re-derives, at high precision, every numerical estimate used in
//! the contour-integral proof that those zeros exhaust the fundamental domain.
//!
//! Module map:
//! - [`qseries`] — truncated Laurent series over exact rationals, plus the
//!   Euler-product constructors everything else is assembled from.
//! - [`forms`] — the named forms: Eisenstein series `E_k`, their level-3
//!   symmetrizations `E_k⁺`, the cusp form `Δ₃⁺`, the Hauptmodul `j₃⁺`, the
//!   weight-r normalized forms `Δ_{3,r}`, and the eta-quotient pair.
//! - [`basis`] — weight decomposition `k = 12ℓ + r` and the triangular solve
//!   producing each `f_{k,m}` together with its monic integer polynomial.
//! - [`hp`] — arbitrary-precision real/complex arithmetic (MPFR-backed) and
//!   cancellation-aware series evaluation.
//! - [`arc`] — evaluation on the arc `z = e^{iθ}/√3`, realness verification,
//!   sign-change zero scans, and the valence-formula audit.
//! - [`contour`] — the line-integral identity for `f_{k,m}`, its residue
//!   terms, the correction terms `B_{k,m}`, `C_{k,m}`, and the envelope
//!   functions controlling them.
//! - [`bounds`] — grid/tail-bound reproduction of every printed constant in
//!   the two estimate lemmas and the final aggregation chains.
//! - [`cli`] — the `expand`/`basis`/`zeros`/`verify`/`contour-check`
//!   subcommand front-end.

pub mod qseries;
pub mod forms;
pub mod basis;
pub mod hp;
pub mod arc;
pub mod contour;
pub mod bounds;
pub mod cli;

pub use qseries::LaurentSeries;
pub use basis::{BasisForm, WeightDecomposition};
