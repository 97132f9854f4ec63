use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    check_decomposition, Decomposition, DecompositionEngine, NormPolicy, SearchParams, Term,
    VerifyError,
};
use crate::zcore::{GaussianInt, Parity, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("base solver found no decomposition of {0}")]
    BaseCaseFailure(GaussianInt),
    #[error("extended decomposition is invalid: {0}")]
    Invalid(#[from] VerifyError),
}

/// Extends a `k`-term decomposition to `w ≡ k+1 (mod 1+i)` by splitting off
/// the inert prime `3i` (when `Im(w) ≥ c0 + 3`) or `3`, and asking
/// `base_solver` for the rest. The result uses quadrant primes throughout.
pub fn proposition1_extend<F>(
    w: GaussianInt,
    k: usize,
    mut base_solver: F,
    c0: i64,
) -> Result<Decomposition, ExtendError>
where
    F: FnMut(GaussianInt) -> Option<Decomposition>,
{
    if !w.in_region(Region::AOpen) {
        return Err(ExtendError::Precondition(format!(
            "{w} is not in the open quadrant"
        )));
    }
    if c0 <= 0 {
        return Err(ExtendError::Precondition(format!(
            "c0 must be positive, got {c0}"
        )));
    }
    if !w.congruent_mod_one_plus_i(k as i64 + 1) {
        return Err(ExtendError::Precondition(format!(
            "{w} is not ≡ {} mod 1+i",
            k + 1
        )));
    }
    if w.max_component() < c0 + 3 {
        return Err(ExtendError::Precondition(format!(
            "max(Re, Im) of {w} is below c0 + 3 = {}",
            c0 + 3
        )));
    }
    let step = if w.im() >= c0 + 3 {
        GaussianInt::new(0, 3)
    } else {
        GaussianInt::new(3, 0)
    };
    let reduced = w - step;
    let base = base_solver(reduced).ok_or(ExtendError::BaseCaseFailure(reduced))?;
    let mut terms = base.terms;
    terms.push(Term::plain(step));
    let extended = Decomposition {
        target: w,
        terms,
        prime_region: Region::KPi,
        norm_policy: NormPolicy::NoBound,
        parity_filter: Parity::Odd,
    };
    check_decomposition(&extended)?;
    Ok(extended)
}

/// How [`theorem3_decompose`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem3Route {
    /// Three terms for an odd target, two for an even one.
    Direct,
    /// Three-term base on `z - 3i` or `z - 3`, plus that inert prime.
    Extension,
    /// The structured path failed; a plain fewest-term search of up to four
    /// terms succeeded (this includes a prime target as a single term).
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Result {
    pub decomposition: Decomposition,
    pub route: Theorem3Route,
}

/// At most four odd quadrant primes summing to `z ∈ A` with
/// `max(Re, Im) > c1`. `None` marks a counterexample candidate.
pub fn theorem3_decompose(z: GaussianInt, c1: i64) -> Result<Option<Theorem3Result>, ExtendError> {
    if !z.in_region(Region::AOpen) {
        return Err(ExtendError::Precondition(format!(
            "{z} is not in the open quadrant"
        )));
    }
    if z.max_component() <= c1 {
        return Err(ExtendError::Precondition(format!(
            "max(Re, Im) of {z} is not above c1 = {c1}"
        )));
    }
    let params = |k| SearchParams::new(Region::KPi, k, NormPolicy::NoBound).expect("k in range");
    let engine = DecompositionEngine::for_targets(params(4), &[z]);
    let with_route = |d: Decomposition, route| Theorem3Result {
        decomposition: d,
        route,
    };

    let direct = match z.parity() {
        Parity::Odd => engine.find_exact(z, 3),
        Parity::Even => engine.find_exact(z, 2),
    };
    if let Some(d) = direct {
        return Ok(Some(with_route(d, Theorem3Route::Direct)));
    }
    if z.parity() == Parity::Even {
        let c0 = (c1 - 3).max(1);
        let base = |w: GaussianInt| {
            let e = DecompositionEngine::for_targets(params(3), &[w]);
            e.find_exact(w, 3)
        };
        if let Ok(d) = proposition1_extend(z, 3, base, c0) {
            return Ok(Some(with_route(d, Theorem3Route::Extension)));
        }
    }
    Ok(engine
        .find(z)
        .map(|d| with_route(d, Theorem3Route::Fallback)))
}
