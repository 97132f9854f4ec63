//! Sums of odd Gaussian primes.
//!
//! The search works over a [`PrimePool`]: the odd Gaussian primes of one
//! region below a norm limit, in (norm, re, im) order. A decomposition is
//! canonical when its terms, listed largest first, form the
//! lexicographically smallest such list in that order; in particular the
//! largest term is as small as possible.
//!
//! Every region here is a pointed cone cut out by integer half-planes
//! `h(z) ≥ min`. A sum of `k` region members satisfies `h ≥ k·min`, and each
//! member of a sum equal to `z` satisfies `min ≤ h ≤ h(z)`. The first fact
//! prunes the search; the second bounds the pool needed for an exhaustive
//! answer even without a norm bound.

mod obstruction;
mod scan;
mod theorem3;

use std::collections::HashMap;
use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primes::{gaussian_primes_in_with, is_gaussian_prime, PrimeTable};
use crate::zcore::{GaussianInt, Parity, Region, Unit};

pub use obstruction::{
    gamma_pi_difference_violations, verify_gamma_pi_obstruction, ObstructionReport, ObstructionRow,
};
pub use scan::{scan_representability, ScanRecord, ScanReport, ScanTargets};
pub use theorem3::{
    proposition1_extend, theorem3_decompose, ExtendError, Theorem3Result, Theorem3Route,
};

/// Largest term count the search supports.
pub const MAX_TERMS: usize = 6;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("max_terms must be in 1..={MAX_TERMS}, got {0}")]
    MaxTerms(usize),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("report output: {0}")]
    Io(#[from] io::Error),
    #[error("report output: {0}")]
    Csv(#[from] csv::Error),
}

/// Constraint on the size of each summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormPolicy {
    /// `N(unit·prime) < N(target)` for every term.
    StrictLess,
    NoBound,
}

/// One summand `unit·prime`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub prime: GaussianInt,
    pub unit: Unit,
}

impl Term {
    pub fn plain(prime: GaussianInt) -> Self {
        Term {
            prime,
            unit: Unit::One,
        }
    }

    pub fn value(&self) -> GaussianInt {
        self.unit.apply(self.prime)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub target: GaussianInt,
    pub terms: Vec<Term>,
    pub prime_region: Region,
    pub norm_policy: NormPolicy,
    pub parity_filter: Parity,
}

const TERM_NAMES: [&str; MAX_TERMS] = ["p", "q", "r", "s", "t", "u"];

impl Decomposition {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The target is itself an admissible prime.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    /// Representation string in the appendix style, e.g. `z=p+q+ir`.
    pub fn form(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .zip(TERM_NAMES)
            .map(|(t, name)| {
                let prefix = match t.unit {
                    Unit::One => "",
                    Unit::I => "i",
                    Unit::NegOne => "-",
                    Unit::NegI => "-i",
                };
                format!("{prefix}{name}")
            })
            .collect();
        format!("z={}", parts.join("+"))
    }
}

impl fmt::Display for Decomposition {
    /// `19+16i = (10+9i)+(6+5i)+(3+2i)`, with `i(2-i)` for rotated terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.target)?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            let unit = match t.unit {
                Unit::One => "",
                Unit::I => "i",
                Unit::NegOne => "-",
                Unit::NegI => "-i",
            };
            write!(f, "{unit}({})", t.prime)?;
        }
        Ok(())
    }
}

/// Why a decomposition failed verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("no terms")]
    Empty,
    #[error("terms sum to {actual}, not {target}")]
    Sum {
        target: GaussianInt,
        actual: GaussianInt,
    },
    #[error("{0} is not a gaussian prime")]
    NotPrime(GaussianInt),
    #[error("{prime} lies outside {region}")]
    OutsideRegion { prime: GaussianInt, region: Region },
    #[error("{0} has the wrong parity")]
    Parity(GaussianInt),
    #[error("term {term} has norm {norm} ≥ target norm {target_norm}")]
    Norm {
        term: GaussianInt,
        norm: u64,
        target_norm: u64,
    },
    #[error("unit {0:?} is not 1 or i")]
    Unit(Unit),
}

/// Re-checks every invariant of `d` from scratch, reporting the first
/// violation.
pub fn check_decomposition(d: &Decomposition) -> Result<(), VerifyError> {
    if d.terms.is_empty() {
        return Err(VerifyError::Empty);
    }
    let mut sum = GaussianInt::ZERO;
    for t in &d.terms {
        if !matches!(t.unit, Unit::One | Unit::I) {
            return Err(VerifyError::Unit(t.unit));
        }
        if !is_gaussian_prime(t.prime) {
            return Err(VerifyError::NotPrime(t.prime));
        }
        if !d.prime_region.contains(t.prime) {
            return Err(VerifyError::OutsideRegion {
                prime: t.prime,
                region: d.prime_region,
            });
        }
        if t.prime.parity() != d.parity_filter {
            return Err(VerifyError::Parity(t.prime));
        }
        let v = t.value();
        if d.norm_policy == NormPolicy::StrictLess && v.norm() >= d.target.norm() {
            return Err(VerifyError::Norm {
                term: v,
                norm: v.norm(),
                target_norm: d.target.norm(),
            });
        }
        sum = sum.checked_add(v).map_err(|_| VerifyError::Sum {
            target: d.target,
            actual: sum,
        })?;
    }
    if sum != d.target {
        return Err(VerifyError::Sum {
            target: d.target,
            actual: sum,
        });
    }
    Ok(())
}

pub fn verify_decomposition(d: &Decomposition) -> bool {
    check_decomposition(d).is_ok()
}

/// Search configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub prime_region: Region,
    pub max_terms: usize,
    pub norm_policy: NormPolicy,
    /// Count a prime target as its own one-term decomposition.
    pub include_single_term: bool,
}

impl SearchParams {
    pub fn new(
        prime_region: Region,
        max_terms: usize,
        norm_policy: NormPolicy,
    ) -> Result<Self, SearchError> {
        if !(1..=MAX_TERMS).contains(&max_terms) {
            return Err(SearchError::MaxTerms(max_terms));
        }
        Ok(SearchParams {
            prime_region,
            max_terms,
            norm_policy,
            include_single_term: true,
        })
    }

    pub fn excluding_single_term(self) -> Self {
        SearchParams {
            include_single_term: false,
            ..self
        }
    }

    /// Exclusive norm limit a pool needs to answer exhaustively for `z`.
    pub fn pool_limit_for(&self, z: GaussianInt) -> u64 {
        match self.norm_policy {
            NormPolicy::StrictLess => z.norm(),
            NormPolicy::NoBound => term_norm_cap(self.prime_region, z) + 1,
        }
    }
}

/// Largest norm any single term of a `region`-sum equal to `z` can have.
pub fn term_norm_cap(region: Region, z: GaussianInt) -> u64 {
    let planes = region.half_planes();
    let reach = z.re().abs() + z.im().abs() + 1;
    let mut cap = 0u64;
    for re in -reach..=reach {
        let (mut lo, mut hi) = (-reach, reach);
        for h in planes {
            // min ≤ a·re + b·im ≤ h(z)
            let (low, high) = (h.min - h.a * re, h.eval(z) - h.a * re);
            if h.b == 0 {
                if low > 0 || high < 0 {
                    lo = 1;
                    hi = 0;
                }
                continue;
            }
            let (l, u) = if h.b > 0 {
                (div_ceil(low, h.b), div_floor(high, h.b))
            } else {
                (div_ceil(high, h.b), div_floor(low, h.b))
            };
            lo = lo.max(l);
            hi = hi.min(u);
        }
        if lo <= hi {
            for im in [lo, hi] {
                cap = cap.max(GaussianInt::new(re, im).norm());
            }
        }
    }
    cap
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Odd Gaussian primes of one region with norm below a limit, in canonical
/// order, with O(1) membership.
#[derive(Debug, Clone)]
pub struct PrimePool {
    region: Region,
    norm_limit: u64,
    primes: Vec<GaussianInt>,
    norms: Vec<u64>,
    origin: (i64, i64),
    width: usize,
    height: usize,
    index: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl PrimePool {
    pub fn new(region: Region, norm_limit: u64) -> PrimePool {
        let table = PrimeTable::sieve(norm_limit.max(2)).expect("limit at least 2");
        Self::with_table(&table, region, norm_limit)
    }

    pub fn with_table(table: &PrimeTable, region: Region, norm_limit: u64) -> PrimePool {
        let primes = gaussian_primes_in_with(table, region, norm_limit, Some(Parity::Odd));
        let norms = primes.iter().map(|z| z.norm()).collect();
        let (mut re_lo, mut re_hi, mut im_lo, mut im_hi) = (0i64, 0i64, 0i64, 0i64);
        for z in &primes {
            re_lo = re_lo.min(z.re());
            re_hi = re_hi.max(z.re());
            im_lo = im_lo.min(z.im());
            im_hi = im_hi.max(z.im());
        }
        let width = (re_hi - re_lo + 1) as usize;
        let height = (im_hi - im_lo + 1) as usize;
        let mut index = vec![ABSENT; width * height];
        for (k, z) in primes.iter().enumerate() {
            let cell = (z.re() - re_lo) as usize * height + (z.im() - im_lo) as usize;
            index[cell] = k as u32;
        }
        PrimePool {
            region,
            norm_limit,
            primes,
            norms,
            origin: (re_lo, im_lo),
            width,
            height,
            index,
        }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn norm_limit(&self) -> u64 {
        self.norm_limit
    }

    pub fn primes(&self) -> &[GaussianInt] {
        &self.primes
    }

    pub fn index_of(&self, z: GaussianInt) -> Option<usize> {
        let dr = z.re() - self.origin.0;
        let di = z.im() - self.origin.1;
        if dr < 0 || di < 0 || dr as usize >= self.width || di as usize >= self.height {
            return None;
        }
        match self.index[dr as usize * self.height + di as usize] {
            ABSENT => None,
            k => Some(k as usize),
        }
    }

    /// Number of pool primes with norm below `bound`.
    fn count_below(&self, bound: u64) -> usize {
        self.norms.partition_point(|&n| n < bound)
    }
}

/// Canonical-decomposition search over a shared pool.
#[derive(Debug, Clone)]
pub struct DecompositionEngine {
    params: SearchParams,
    pool: PrimePool,
}

impl DecompositionEngine {
    pub fn new(params: SearchParams, pool_norm_limit: u64) -> Self {
        DecompositionEngine {
            params,
            pool: PrimePool::new(params.prime_region, pool_norm_limit),
        }
    }

    /// An engine whose pool answers exhaustively for every target listed.
    pub fn for_targets(params: SearchParams, targets: &[GaussianInt]) -> Self {
        let limit = targets
            .iter()
            .map(|&z| params.pool_limit_for(z))
            .max()
            .unwrap_or(2);
        Self::new(params, limit)
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn pool(&self) -> &PrimePool {
        &self.pool
    }

    /// Fewest-term canonical decomposition of `z` within `max_terms`.
    pub fn find(&self, z: GaussianInt) -> Option<Decomposition> {
        let first = if self.params.include_single_term {
            1
        } else {
            2
        };
        (first..=self.params.max_terms)
            .filter(|&k| z.congruent_mod_one_plus_i(k as i64))
            .find_map(|k| self.find_exact(z, k))
    }

    /// Canonical decomposition of `z` with exactly `k` terms.
    pub fn find_exact(&self, z: GaussianInt, k: usize) -> Option<Decomposition> {
        if k == 0 || k > MAX_TERMS {
            return None;
        }
        let needed = self.params.pool_limit_for(z);
        if needed > self.pool.norm_limit {
            return DecompositionEngine::new(self.params, needed).find_exact(z, k);
        }
        let allowed = match self.params.norm_policy {
            NormPolicy::StrictLess => self.pool.count_below(z.norm()),
            NormPolicy::NoBound => self.pool.primes.len(),
        };
        let mut search = Search {
            pool: &self.pool,
            memo: HashMap::new(),
        };
        let picks = search.run(z, k, allowed)?;
        Some(Decomposition {
            target: z,
            terms: picks
                .into_iter()
                .map(|i| Term::plain(self.pool.primes[i]))
                .collect(),
            prime_region: self.params.prime_region,
            norm_policy: self.params.norm_policy,
            parity_filter: Parity::Odd,
        })
    }
}

struct Search<'a> {
    pool: &'a PrimePool,
    /// `(re, im, k) → n`: no `k`-term sum from the first `n` primes.
    memo: HashMap<(i64, i64, usize), usize>,
}

impl Search<'_> {
    fn cone_admits(&self, w: GaussianInt, k: usize) -> bool {
        w.congruent_mod_one_plus_i(k as i64)
            && self
                .pool
                .region
                .half_planes()
                .iter()
                .all(|h| h.eval(w) >= k as i64 * h.min)
    }

    /// Indices (largest first) of a `k`-term sum equal to `w` drawn from the
    /// first `limit` pool primes, lexicographically smallest.
    fn run(&mut self, w: GaussianInt, k: usize, limit: usize) -> Option<Vec<usize>> {
        if limit == 0 || !self.cone_admits(w, k) {
            return None;
        }
        if k == 1 {
            return self
                .pool
                .index_of(w)
                .filter(|&i| i < limit)
                .map(|i| vec![i]);
        }
        // the largest of k terms has |t| ≥ |w| / k
        let kk = (k * k) as u64;
        let mut start = self.pool.count_below(w.norm().div_ceil(kk));
        let key = (w.re(), w.im(), k);
        if let Some(&done) = self.memo.get(&key) {
            if limit <= done {
                return None;
            }
            start = start.max(done);
        }
        for top in start..limit {
            let rest = w - self.pool.primes[top];
            if let Some(mut picks) = self.run(rest, k - 1, top + 1) {
                picks.insert(0, top);
                return Some(picks);
            }
        }
        self.memo.insert(key, limit);
        None
    }
}

/// One-off search for `z`; see [`DecompositionEngine::find`].
pub fn find_decomposition(
    z: GaussianInt,
    prime_region: Region,
    max_terms: usize,
    norm_policy: NormPolicy,
) -> Result<Option<Decomposition>, SearchError> {
    let params = SearchParams::new(prime_region, max_terms, norm_policy)?;
    Ok(DecompositionEngine::for_targets(params, &[z]).find(z))
}

/// CSV header for decomposition records with up to `terms` summands.
pub(crate) fn record_header(terms: usize) -> Vec<String> {
    let mut h = vec!["z".to_string()];
    h.extend(
        TERM_NAMES[..terms.clamp(1, MAX_TERMS)]
            .iter()
            .map(|s| s.to_string()),
    );
    h.push("representation".into());
    h
}

pub(crate) fn record_row(
    target: GaussianInt,
    d: Option<&Decomposition>,
    terms: usize,
) -> Vec<String> {
    let width = terms.clamp(1, MAX_TERMS);
    let mut row = vec![target.to_string()];
    match d {
        Some(d) => {
            row.extend(d.terms.iter().map(|t| t.prime.to_string()));
            row.resize(width + 1, String::new());
            row.push(d.form());
        }
        None => {
            row.resize(width + 1, String::new());
            row.push("EMPTY".into());
        }
    }
    row
}

/// Writes decompositions in the appendix layout: `z,p,q,r,representation`.
pub fn write_decompositions_csv<W: io::Write>(
    out: W,
    decompositions: &[Decomposition],
) -> Result<(), SearchError> {
    let width = decompositions
        .iter()
        .map(Decomposition::term_count)
        .max()
        .unwrap_or(3)
        .max(3);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(record_header(width))?;
    for d in decompositions {
        w.write_record(record_row(d.target, Some(d), width))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn plain(
        target: GaussianInt,
        primes: &[GaussianInt],
        region: Region,
        policy: NormPolicy,
    ) -> Decomposition {
        Decomposition {
            target,
            terms: primes.iter().copied().map(Term::plain).collect(),
            prime_region: region,
            norm_policy: policy,
            parity_filter: Parity::Odd,
        }
    }

    fn find(z: GaussianInt, region: Region, k: usize, policy: NormPolicy) -> Decomposition {
        find_decomposition(z, region, k, policy).unwrap().unwrap()
    }

    #[test]
    fn appendix_examples_have_expected_shape() {
        let nine = find(g(9, 0), Region::GammaPi, 3, NormPolicy::StrictLess);
        assert_eq!(
            nine.terms.iter().map(|t| t.prime).collect::<Vec<_>>(),
            vec![g(3, 0); 3]
        );

        let eight = find(g(8, 0), Region::GammaPi, 2, NormPolicy::StrictLess);
        assert_eq!(eight.term_count(), 2);
        assert!(verify_decomposition(&eight));
        let printed = plain(
            g(8, 0),
            &[g(5, 2), g(3, -2)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        assert!(verify_decomposition(&printed));

        let z = find(g(19, 16), Region::KPi, 3, NormPolicy::StrictLess);
        assert_eq!(z.term_count(), 3);
        assert!(verify_decomposition(&z));
        let printed = plain(
            g(19, 16),
            &[g(10, 9), g(6, 5), g(3, 2)],
            Region::KPi,
            NormPolicy::StrictLess,
        );
        assert!(verify_decomposition(&printed));

        let d = find(g(6, 6), Region::SPi, 2, NormPolicy::StrictLess);
        assert_eq!(d.term_count(), 2);
        assert!(verify_decomposition(&d));
        let printed = plain(
            g(6, 6),
            &[g(5, 4), g(1, 2)],
            Region::SPi,
            NormPolicy::StrictLess,
        );
        assert!(verify_decomposition(&printed));
    }

    #[test]
    fn canonical_choice_minimizes_largest_term() {
        // 7+4i in KPi: the largest term must have norm 13; 2+3i precedes
        // 3+2i, which the appendix uses
        let d = find(g(7, 4), Region::KPi, 3, NormPolicy::NoBound);
        let primes: Vec<_> = d.terms.iter().map(|t| t.prime).collect();
        assert_eq!(primes, vec![g(2, 3), g(3, 0), g(2, 1)]);
        let d = find(g(8, 1), Region::KPi, 3, NormPolicy::NoBound);
        let primes: Vec<_> = d.terms.iter().map(|t| t.prime).collect();
        assert_eq!(primes, vec![g(3, 0), g(3, 0), g(2, 1)]);
    }

    #[test]
    fn single_term_is_reported_and_excludable() {
        let d = find(g(5, 4), Region::GammaPi, 3, NormPolicy::NoBound);
        assert!(d.is_single_term());
        let params = SearchParams::new(Region::GammaPi, 3, NormPolicy::NoBound)
            .unwrap()
            .excluding_single_term();
        let engine = DecompositionEngine::for_targets(params, &[g(5, 4)]);
        assert!(engine.find(g(5, 4)).is_none());
        // strict norm rules out the target itself
        assert!(
            find_decomposition(g(5, 4), Region::GammaPi, 1, NormPolicy::StrictLess)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn max_terms_is_validated() {
        assert!(matches!(
            find_decomposition(g(9, 0), Region::KPi, 0, NormPolicy::NoBound),
            Err(SearchError::MaxTerms(0))
        ));
        assert!(find_decomposition(g(9, 0), Region::KPi, 7, NormPolicy::NoBound).is_err());
    }

    #[test]
    fn verify_examples() {
        let row = Decomposition {
            target: g(50, 49),
            terms: vec![
                Term::plain(g(25, 24)),
                Term::plain(g(20, 19)),
                Term {
                    prime: g(6, -5),
                    unit: Unit::I,
                },
            ],
            prime_region: Region::GammaPi,
            norm_policy: NormPolicy::StrictLess,
            parity_filter: Parity::Odd,
        };
        assert!(verify_decomposition(&row));
        assert_eq!(row.form(), "z=p+q+ir");

        let bad = plain(
            g(9, 0),
            &[g(3, 0), g(3, 0), g(5, 0)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        assert!(matches!(
            check_decomposition(&bad),
            Err(VerifyError::NotPrime(_))
        ));
        let bad = plain(
            g(9, 0),
            &[g(3, 0), g(3, 0), g(7, 0)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        assert!(matches!(
            check_decomposition(&bad),
            Err(VerifyError::Sum { .. })
        ));

        let fifteen = plain(
            g(15, 0),
            &[g(8, 3), g(5, -2), g(2, -1)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        assert!(verify_decomposition(&fifteen));
    }

    #[test]
    fn verify_catches_each_violation() {
        let d = plain(
            g(4, 0),
            &[g(2, 1), g(2, -1)],
            Region::KPi,
            NormPolicy::NoBound,
        );
        assert!(matches!(
            check_decomposition(&d),
            Err(VerifyError::OutsideRegion { .. })
        ));
        let d = plain(
            g(4, 2),
            &[g(3, 1), g(1, 1)],
            Region::KPi,
            NormPolicy::NoBound,
        );
        assert!(matches!(
            check_decomposition(&d),
            Err(VerifyError::NotPrime(_))
        ));
        let d = plain(
            g(5, 3),
            &[g(1, 1), g(2, 1), g(2, 1)],
            Region::KPi,
            NormPolicy::NoBound,
        );
        assert!(matches!(
            check_decomposition(&d),
            Err(VerifyError::Parity(_))
        ));
        let d = plain(g(7, 0), &[g(7, 0)], Region::GammaPi, NormPolicy::StrictLess);
        assert!(matches!(
            check_decomposition(&d),
            Err(VerifyError::Norm { .. })
        ));
        let d = plain(g(7, 0), &[], Region::GammaPi, NormPolicy::NoBound);
        assert_eq!(check_decomposition(&d), Err(VerifyError::Empty));
        let mut d = plain(g(0, -3), &[g(3, 0)], Region::GammaPi, NormPolicy::NoBound);
        d.terms[0].unit = Unit::NegI;
        assert_eq!(check_decomposition(&d), Err(VerifyError::Unit(Unit::NegI)));
    }

    #[test]
    fn term_norm_cap_bounds_all_terms() {
        // brute force: every region point t with t and z - t both in the
        // k-fold cone for some k is within the cap
        for region in [Region::KPi, Region::GammaPi, Region::SPi] {
            for z in [g(7, 4), g(12, -5), g(9, 9), g(20, 1), g(3, 11)] {
                let cap = term_norm_cap(region, z);
                for re in -40..=40 {
                    for im in -40..=40 {
                        let t = g(re, im);
                        let rest = z - t;
                        let fits = region.contains(t)
                            && region.half_planes().iter().all(|h| h.eval(rest) >= 0);
                        if fits {
                            assert!(t.norm() <= cap, "{region} {z} {t}");
                        }
                    }
                }
            }
        }
        assert_eq!(term_norm_cap(Region::KPi, g(7, 4)), 65);
    }

    #[test]
    fn engine_reuses_pool_and_grows_when_needed() {
        let params = SearchParams::new(Region::KPi, 3, NormPolicy::NoBound).unwrap();
        let engine = DecompositionEngine::new(params, 10);
        let d = engine.find(g(19, 16)).unwrap();
        assert!(verify_decomposition(&d));
        assert_eq!(engine.pool().norm_limit(), 10);
    }

    #[test]
    fn pool_lookup() {
        let pool = PrimePool::new(Region::SPi, 100);
        for (k, &z) in pool.primes().iter().enumerate() {
            assert_eq!(pool.index_of(z), Some(k));
        }
        assert_eq!(pool.index_of(g(5, 0)), None);
        assert_eq!(pool.index_of(g(-300, 7)), None);
    }

    #[test]
    fn csv_layout() {
        let d = plain(
            g(9, 0),
            &[g(3, 0), g(3, 0), g(3, 0)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        let e = plain(
            g(8, 0),
            &[g(5, 2), g(3, -2)],
            Region::GammaPi,
            NormPolicy::StrictLess,
        );
        let mut buf = Vec::new();
        write_decompositions_csv(&mut buf, &[d, e]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "z,p,q,r,representation\n9,3,3,3,z=p+q+r\n8,5+2i,3-2i,,z=p+q\n"
        );
    }

    #[test]
    fn display() {
        let d = Decomposition {
            target: g(6, 6),
            terms: vec![
                Term::plain(g(5, 4)),
                Term {
                    prime: g(2, -1),
                    unit: Unit::I,
                },
            ],
            prime_region: Region::GammaPi,
            norm_policy: NormPolicy::StrictLess,
            parity_filter: Parity::Odd,
        };
        assert_eq!(d.to_string(), "6+6i = (5+4i)+i(2-i)");
    }
}
