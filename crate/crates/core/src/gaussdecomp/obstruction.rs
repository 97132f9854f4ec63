//! The sector obstruction: odd primes of the sector `-Re < Im ≤ Re` all have
//! `Re - Im ≥ 1`, so a `k`-term sum of them has `Re - Im ≥ k` and nothing on
//! the lines `Im = Re` or `Im = Re - 1` is a sum of two or more.

use serde::{Deserialize, Serialize};

use super::{DecompositionEngine, NormPolicy, PrimePool, SearchError, SearchParams, MAX_TERMS};
use crate::primes::is_gaussian_prime;
use crate::zcore::{GaussianInt, Parity, Region};

/// Odd sector primes with norm `≤ norm_limit` violating `Re - Im ≥ 1`.
pub fn gamma_pi_difference_violations(norm_limit: u64) -> (usize, Vec<GaussianInt>) {
    let pool = PrimePool::new(Region::GammaPi, norm_limit + 1);
    let violations = pool
        .primes()
        .iter()
        .copied()
        .filter(|p| p.re() - p.im() < 1)
        .collect();
    (pool.primes().len(), violations)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionRow {
    pub target: GaussianInt,
    /// Some `k ∈ 2..=6` admits a `k`-term sum, by exhaustive sumset.
    pub multi_term_sumset: bool,
    /// The canonical search found a 2- or 3-term strict-norm decomposition.
    pub multi_term_search: bool,
    /// The target is itself an odd sector prime.
    pub single_term: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub bound: i64,
    pub pool_norm_limit: u64,
    pub primes_checked: usize,
    pub difference_violations: Vec<GaussianInt>,
    pub rows: Vec<ObstructionRow>,
}

impl ObstructionReport {
    pub fn multi_term_hits(&self) -> Vec<GaussianInt> {
        self.rows
            .iter()
            .filter(|r| r.multi_term_sumset || r.multi_term_search)
            .map(|r| r.target)
            .collect()
    }

    pub fn single_term_targets(&self) -> Vec<GaussianInt> {
        self.rows
            .iter()
            .filter(|r| r.single_term)
            .map(|r| r.target)
            .collect()
    }

    pub fn holds(&self) -> bool {
        self.difference_violations.is_empty() && self.multi_term_hits().is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "targets: {}, multi-term representations: {}, single-term primes: {}, difference violations: {}",
            self.rows.len(),
            self.multi_term_hits().len(),
            self.single_term_targets().len(),
            self.difference_violations.len()
        )
    }
}

/// Sums of exactly `k` pool primes for `k = 0..=MAX_TERMS`, kept on the box
/// `0 ≤ Re ≤ bound`, `|Im| ≤ bound`. Sector sums never leave the sector, and
/// the real part only grows, so the box loses nothing reachable inside it.
struct SectorSumsets {
    bound: i64,
    layers: Vec<Vec<bool>>,
}

impl SectorSumsets {
    fn new(primes: &[GaussianInt], bound: i64) -> Self {
        let side = (2 * bound + 1) as usize;
        let cells = (bound + 1) as usize * side;
        let cell = |re: i64, im: i64| re as usize * side + (im + bound) as usize;
        let mut first = vec![false; cells];
        first[cell(0, 0)] = true;
        let mut layers = vec![first];
        for _ in 0..MAX_TERMS {
            let prev = layers.last().expect("nonempty");
            let mut next = vec![false; cells];
            for re in 0..=bound {
                for im in -bound..=bound {
                    if !prev[cell(re, im)] {
                        continue;
                    }
                    for p in primes {
                        let (r, i) = (re + p.re(), im + p.im());
                        if r <= bound && i.abs() <= bound {
                            next[cell(r, i)] = true;
                        }
                    }
                }
            }
            layers.push(next);
        }
        SectorSumsets { bound, layers }
    }

    fn contains(&self, k: usize, z: GaussianInt) -> bool {
        let side = (2 * self.bound + 1) as usize;
        z.re() >= 0
            && z.re() <= self.bound
            && z.im().abs() <= self.bound
            && self.layers[k][z.re() as usize * side + (z.im() + self.bound) as usize]
    }
}

/// Checks every `z` with `1 ≤ Re ≤ bound` and `Im ∈ {Re, Re - 1}`.
///
/// The pool holds every odd sector prime with norm below `2·bound² + 1`,
/// which covers any term of any sector sum equal to such a target, so the
/// sumset answer holds with or without a norm bound.
pub fn verify_gamma_pi_obstruction(bound: i64) -> Result<ObstructionReport, SearchError> {
    if bound < 10 {
        return Err(SearchError::Argument(format!(
            "bound must be ≥ 10, got {bound}"
        )));
    }
    let pool_norm_limit = 2 * (bound * bound) as u64 + 1;
    let pool = PrimePool::new(Region::GammaPi, pool_norm_limit);
    debug_assert!(pool.primes().iter().all(|p| p.in_region(Region::GammaPi)));
    let difference_violations = pool
        .primes()
        .iter()
        .copied()
        .filter(|p| p.re() - p.im() < 1)
        .collect();
    let sums = SectorSumsets::new(pool.primes(), bound);
    let params = SearchParams::new(Region::GammaPi, 3, NormPolicy::StrictLess)?;
    let engine = DecompositionEngine::new(params, pool_norm_limit);
    let rows = (1..=bound)
        .flat_map(|re| [GaussianInt::new(re, re - 1), GaussianInt::new(re, re)])
        .map(|z| ObstructionRow {
            target: z,
            multi_term_sumset: (2..=MAX_TERMS).any(|k| sums.contains(k, z)),
            multi_term_search: engine.find(z).is_some(),
            single_term: z.parity() == Parity::Odd
                && z.in_region(Region::GammaPi)
                && is_gaussian_prime(z),
        })
        .collect();
    Ok(ObstructionReport {
        bound,
        pool_norm_limit,
        primes_checked: pool.primes().len(),
        difference_violations,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn examples() {
        let report = verify_gamma_pi_obstruction(10).unwrap();
        assert!(report.holds());
        let row = |z| report.rows.iter().find(|r| r.target == z).unwrap().clone();
        let r = row(g(7, 7));
        assert!(!r.multi_term_sumset && !r.multi_term_search && !r.single_term);
        let r = row(g(5, 4));
        assert!(!r.multi_term_sumset && r.single_term);
        let r = row(g(9, 8));
        assert!(!r.multi_term_sumset && !r.single_term);
        assert_eq!(report.rows.len(), 20);
        assert!(verify_gamma_pi_obstruction(9).is_err());
    }

    #[test]
    fn sumsets_do_find_off_line_targets() {
        let pool = PrimePool::new(Region::GammaPi, 2 * 400 + 1);
        let sums = SectorSumsets::new(pool.primes(), 20);
        // 9 = 3+3+3, 8 = (5+2i)+(3-2i), 10+4i = (5+2i)+(5+2i)
        assert!(sums.contains(3, g(9, 0)));
        assert!(sums.contains(2, g(8, 0)));
        assert!(sums.contains(2, g(10, 4)));
        assert!(!sums.contains(2, g(9, 0)));
        // Re - Im ≥ k for every k-term sum
        for k in 1..=MAX_TERMS {
            for re in 0..=20 {
                for im in -20..=20 {
                    if sums.contains(k, g(re, im)) {
                        assert!(re - im >= k as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn difference_invariant_small() {
        let (n, bad) = gamma_pi_difference_violations(10_000);
        assert!(n > 100);
        assert!(bad.is_empty());
    }
}
