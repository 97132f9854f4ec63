//! Rational additive-prime decompositions.
//!
//! Every search here returns the canonical witness: the lexicographically
//! smallest ascending sequence of admissible primes, presented in descending
//! order (`p ≥ q ≥ r ≥ …`).

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parallel::ordered_map;
use crate::primes::PrimeTable;

/// Largest term count tried by [`min_odd_prime_terms`].
pub const MAX_ODD_PRIME_TERMS: usize = 9;

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("prime table reaches {limit} but {n} was requested")]
    TableTooSmall { n: u64, limit: u64 },
    #[error("no {k}-term decomposition of {n} found")]
    SearchExhausted { n: u64, k: usize },
    #[error("hypothesis violated: {n} has no 3-term decomposition into primes ≡ 3 (mod 4)")]
    HypothesisViolation { n: u64 },
    #[error("report output: {0}")]
    Io(#[from] io::Error),
    #[error("report output: {0}")]
    Csv(#[from] csv::Error),
}

/// Which primes may appear as terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermClass {
    /// Any odd prime.
    Odd,
    /// Primes `≡ 3 (mod 4)`.
    ThreeModFour,
}

impl TermClass {
    fn residue_modulus(self) -> (u64, u64) {
        match self {
            TermClass::Odd => (1, 2),
            TermClass::ThreeModFour => (3, 4),
        }
    }

    pub fn admits(self, table: &PrimeTable, p: u64) -> bool {
        let (r, m) = self.residue_modulus();
        p % m == r && table.is_prime(p)
    }

    /// A sum of `k` admissible primes is `≡ k·r (mod m)`.
    fn sum_possible(self, n: u64, k: usize) -> bool {
        let (r, m) = self.residue_modulus();
        n % m == (k as u64 * r) % m
    }
}

/// `n` written as a sum of odd primes, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddPrimeSplit {
    pub n: u64,
    pub terms: Vec<u64>,
}

impl OddPrimeSplit {
    fn from_ascending(n: u64, mut terms: Vec<u64>) -> Self {
        terms.reverse();
        OddPrimeSplit { n, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-checks the sum, ordering and that every term is an admissible prime.
    pub fn is_valid(&self, table: &PrimeTable, class: TermClass) -> bool {
        self.terms.iter().sum::<u64>() == self.n
            && self.terms.windows(2).all(|w| w[0] >= w[1])
            && self.terms.iter().all(|&p| class.admits(table, p))
    }

    /// `7+3` style rendering.
    pub fn witness_string(&self) -> String {
        self.terms
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("+")
    }
}

struct TermSearch<'a> {
    table: &'a PrimeTable,
    class: TermClass,
    candidates: Vec<u64>,
}

impl<'a> TermSearch<'a> {
    fn new(table: &'a PrimeTable, class: TermClass, n: u64) -> Self {
        let candidates = table
            .primes()
            .iter()
            .copied()
            .take_while(|&p| p <= n)
            .filter(|&p| class.admits(table, p))
            .collect();
        TermSearch {
            table,
            class,
            candidates,
        }
    }

    /// Lexicographically smallest ascending `k`-term sequence summing to `n`
    /// whose terms are all at least `candidates[start]`.
    fn smallest(&self, n: u64, k: usize, start: usize) -> Option<Vec<u64>> {
        if k == 0 || !self.class.sum_possible(n, k) {
            return None;
        }
        let floor = *self.candidates.get(start)?;
        match k {
            1 => (n >= floor && self.class.admits(self.table, n)).then(|| vec![n]),
            2 => self.candidates[start..]
                .iter()
                .take_while(|&&p| 2 * p <= n)
                .find(|&&p| self.class.admits(self.table, n - p))
                .map(|&p| vec![p, n - p]),
            _ => {
                for (offset, &p) in self.candidates[start..].iter().enumerate() {
                    if p * k as u64 > n {
                        break;
                    }
                    if let Some(mut rest) = self.smallest(n - p, k - 1, start + offset) {
                        rest.insert(0, p);
                        return Some(rest);
                    }
                }
                None
            }
        }
    }
}

fn ensure_covered(table: &PrimeTable, n: u64) -> Result<(), DecompError> {
    if n > table.limit() {
        Err(DecompError::TableTooSmall {
            n,
            limit: table.limit(),
        })
    } else {
        Ok(())
    }
}

/// Canonical `k`-term decomposition of `n` into primes of `class`.
pub fn decompose(
    table: &PrimeTable,
    n: u64,
    k: usize,
    class: TermClass,
) -> Result<Option<OddPrimeSplit>, DecompError> {
    ensure_covered(table, n)?;
    let search = TermSearch::new(table, class, n);
    Ok(search
        .smallest(n, k, 0)
        .map(|terms| OddPrimeSplit::from_ascending(n, terms)))
}

/// Two odd primes summing to the even `n ≥ 6`, smallest first prime.
pub fn goldbach_pair(table: &PrimeTable, n: u64) -> Result<OddPrimeSplit, DecompError> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(DecompError::Argument(format!(
            "goldbach pair needs an even n ≥ 6, got {n}"
        )));
    }
    decompose(table, n, 2, TermClass::Odd)?.ok_or(DecompError::SearchExhausted { n, k: 2 })
}

/// Four odd primes `p ≥ q ≥ r ≥ l` summing to the even `n ≥ 12`.
///
/// The canonical witness starts `3, 3` followed by the canonical Goldbach
/// pair of `n - 6` whenever that exists, which is what the general search
/// finds first.
pub fn four_odd_primes(table: &PrimeTable, n: u64) -> Result<OddPrimeSplit, DecompError> {
    if n < 12 || !n.is_multiple_of(2) {
        return Err(DecompError::Argument(format!(
            "four odd primes need an even n ≥ 12, got {n}"
        )));
    }
    decompose(table, n, 4, TermClass::Odd)?.ok_or(DecompError::SearchExhausted { n, k: 4 })
}

/// Fewest odd primes summing to `n > 7`, with a witness.
pub fn min_odd_prime_terms(
    table: &PrimeTable,
    n: u64,
) -> Result<(usize, OddPrimeSplit), DecompError> {
    if n <= 7 {
        return Err(DecompError::Argument(format!("need n > 7, got {n}")));
    }
    ensure_covered(table, n)?;
    let search = TermSearch::new(table, TermClass::Odd, n);
    let first = if n % 2 == 1 { 1 } else { 2 };
    (first..=MAX_ODD_PRIME_TERMS)
        .step_by(2)
        .find_map(|k| {
            search
                .smallest(n, k, 0)
                .map(|t| (k, OddPrimeSplit::from_ascending(n, t)))
        })
        .ok_or(DecompError::SearchExhausted {
            n,
            k: MAX_ODD_PRIME_TERMS,
        })
}

/// `k ∈ 2..=5` primes, each `≡ 3 (mod 4)`, summing to `n`.
pub fn decompose_residue34(
    table: &PrimeTable,
    n: u64,
    k: usize,
) -> Result<Option<OddPrimeSplit>, DecompError> {
    if !(2..=5).contains(&k) {
        return Err(DecompError::Argument(format!(
            "k must be in 2..=5, got {k}"
        )));
    }
    decompose(table, n, k, TermClass::ThreeModFour)
}

/// One of the four residue-class claims: every large enough
/// `n ≡ residue (mod 4)` is a sum of `term_count` primes `≡ 3 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisSpec {
    pub index: u8,
    pub residue: u64,
    pub term_count: usize,
    /// Empirical threshold, filled in from a scan.
    pub c0_candidate: Option<u64>,
}

impl HypothesisSpec {
    pub fn new(index: u8) -> Result<Self, DecompError> {
        let (residue, term_count) = match index {
            1 => (2, 2),
            2 => (1, 3),
            3 => (0, 4),
            4 => (3, 5),
            _ => {
                return Err(DecompError::Argument(format!(
                    "hypothesis index must be 1..=4, got {index}"
                )))
            }
        };
        Ok(HypothesisSpec {
            index,
            residue,
            term_count,
            c0_candidate: None,
        })
    }

    pub fn all() -> [HypothesisSpec; 4] {
        [1, 2, 3, 4].map(|i| HypothesisSpec::new(i).expect("index in range"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub n: u64,
    pub witness: Option<Vec<u64>>,
}

/// Result of checking one hypothesis on every `n ≤ upper` in its class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub spec: HypothesisSpec,
    pub upper: u64,
    pub rows: Vec<HypothesisRow>,
    pub exceptions: Vec<u64>,
    /// Smallest `c` with every class member in `[c, upper]` decomposing,
    /// i.e. one past the largest exception.
    pub c0_candidate: u64,
}

impl HypothesisReport {
    pub fn max_exception(&self) -> Option<u64> {
        self.exceptions.last().copied()
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), DecompError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "residue", "k", "witness"])?;
        for row in &self.rows {
            let witness = match &row.witness {
                Some(t) => t.iter().map(u64::to_string).collect::<Vec<_>>().join("+"),
                None => "EMPTY".to_string(),
            };
            w.write_record([
                row.n.to_string(),
                self.spec.residue.to_string(),
                self.spec.term_count.to_string(),
                witness,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Scans `1..=upper` for members of the hypothesis' residue class that lack
/// a decomposition, on `threads` workers.
pub fn hypothesis_scan(
    table: &PrimeTable,
    spec: HypothesisSpec,
    upper: u64,
    threads: usize,
) -> Result<HypothesisReport, DecompError> {
    if upper < 16 {
        return Err(DecompError::Argument(format!(
            "upper must be ≥ 16, got {upper}"
        )));
    }
    ensure_covered(table, upper)?;
    let search = TermSearch::new(table, TermClass::ThreeModFour, upper);
    let first = if spec.residue == 0 { 4 } else { spec.residue };
    let targets: Vec<u64> = (first..=upper).step_by(4).collect();
    let chunks: Vec<&[u64]> = targets.chunks(4096).collect();
    let rows: Vec<HypothesisRow> = ordered_map(threads, &chunks, |chunk| {
        chunk
            .iter()
            .map(|&n| HypothesisRow {
                n,
                witness: search.smallest(n, spec.term_count, 0).map(|mut t| {
                    t.reverse();
                    t
                }),
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let exceptions: Vec<u64> = rows
        .iter()
        .filter(|r| r.witness.is_none())
        .map(|r| r.n)
        .collect();
    let c0_candidate = exceptions.last().map_or(first, |&e| e + 1);
    Ok(HypothesisReport {
        spec: HypothesisSpec {
            c0_candidate: Some(c0_candidate),
            ..spec
        },
        upper,
        rows,
        exceptions,
        c0_candidate,
    })
}

/// Output of the residue chain: primes `≡ 3 (mod 4)` summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainResult {
    pub n: u64,
    pub terms: Vec<u64>,
    pub m: usize,
    pub c0: u64,
    pub c1: u64,
    pub s1: usize,
}

pub const CHAIN_MAX_TERMS: usize = 6;

/// Builds a decomposition of `n ≥ c0 + 9` into 3 to 6 primes `≡ 3 (mod 4)`:
/// residue 1 takes the 3-term decomposition directly, every other residue
/// peels off a 3 and recurses on `n - 3`.
pub fn theorem130_decompose(
    table: &PrimeTable,
    n: u64,
    c0: u64,
) -> Result<ChainResult, DecompError> {
    let c1 = c0 + 9;
    if n < c1 {
        return Err(DecompError::Argument(format!(
            "need n ≥ c0 + 9 = {c1}, got {n}"
        )));
    }
    ensure_covered(table, n)?;
    let search = TermSearch::new(table, TermClass::ThreeModFour, n);
    let mut peeled = 0;
    let mut base = n;
    while base % 4 != 1 {
        base -= 3;
        peeled += 1;
    }
    let mut terms = search
        .smallest(base, 3, 0)
        .ok_or(DecompError::HypothesisViolation { n: base })?;
    terms.extend(std::iter::repeat_n(3, peeled));
    terms.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ChainResult {
        n,
        m: terms.len(),
        terms,
        c0,
        c1,
        s1: CHAIN_MAX_TERMS,
    })
}
