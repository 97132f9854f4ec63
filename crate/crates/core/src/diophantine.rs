//! Two-row systems `x_{1s} + … = a`, `x_{2s} + … = b` whose columns are tied
//! to primes: either `x_{1s} + x_{2s}` is an odd prime, or
//! `x_{1s}² + x_{2s}²` is a prime `≡ 1 (mod 4)` or the square of a prime
//! `≡ 3 (mod 4)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussdecomp::{find_decomposition, NormPolicy, SearchError, MAX_TERMS};
use crate::primes::{is_prime_u64, PrimeTable};
use crate::ratdecomp::{decompose, four_odd_primes, DecompError, TermClass, MAX_ODD_PRIME_TERMS};
use crate::zcore::{GaussianInt, Region};

/// Largest `a + b` the brute-force enumerator accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 200;

const BRUTE_FORCE_MAX_COLUMNS: usize = 8;

#[derive(Debug, Error)]
pub enum DiophantineError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("no solution of ({a}, {b}) with at most {k_max} columns")]
    BoundExceeded { a: u64, b: u64, k_max: usize },
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Four columns, each summing to an odd prime.
    Thm1,
    /// Any number of columns, each summing to an odd prime.
    Thm2,
    /// Columns whose squares sum to `p ≡ 1 (mod 4)` or `p²` with `p ≡ 3 (mod 4)`.
    Conj1,
}

impl Variant {
    fn column_ok(self, c: &Column) -> bool {
        match self {
            Variant::Thm1 | Variant::Thm2 => {
                c.x1 + c.x2 == c.target && c.target % 2 == 1 && is_prime_u64(c.target)
            }
            Variant::Conj1 => c.x1 * c.x1 + c.x2 * c.x2 == c.target && is_conj1_target(c.target),
        }
    }
}

/// `t` is a prime `≡ 1 (mod 4)` or the square of a prime `≡ 3 (mod 4)`.
pub fn is_conj1_target(t: u64) -> bool {
    if t % 4 == 1 && is_prime_u64(t) {
        return true;
    }
    let r = t.isqrt();
    r * r == t && r % 4 == 3 && is_prime_u64(r)
}

/// A validated `(a, b, variant)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophantineInstance {
    pub a: u64,
    pub b: u64,
    pub variant: Variant,
}

impl DiophantineInstance {
    pub fn new(a: u64, b: u64, variant: Variant) -> Result<Self, DiophantineError> {
        let floor = match variant {
            Variant::Thm1 => 10,
            Variant::Thm2 | Variant::Conj1 => 6,
        };
        if a <= floor || b == 0 || b > a {
            return Err(DiophantineError::Argument(format!(
                "{variant:?} needs a > {floor} and a ≥ b > 0, got a = {a}, b = {b}"
            )));
        }
        if variant == Variant::Thm1 && !(a + b).is_multiple_of(2) {
            return Err(DiophantineError::Argument(format!(
                "Thm1 needs a + b even, got {}",
                a + b
            )));
        }
        Ok(DiophantineInstance { a, b, variant })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Column {
    pub x1: u64,
    pub x2: u64,
    pub target: u64,
}

impl Column {
    fn sum(x1: u64, x2: u64) -> Self {
        Column {
            x1,
            x2,
            target: x1 + x2,
        }
    }

    fn squares(x1: u64, x2: u64) -> Self {
        Column {
            x1,
            x2,
            target: x1 * x1 + x2 * x2,
        }
    }

    /// Canonical order: larger target first, then larger first-row entry.
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .target
            .cmp(&self.target)
            .then(other.x1.cmp(&self.x1))
            .then(other.x2.cmp(&self.x2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionMatrix {
    pub a: u64,
    pub b: u64,
    pub k: usize,
    pub columns: Vec<Column>,
}

impl SolutionMatrix {
    pub fn new(a: u64, b: u64, mut columns: Vec<Column>) -> Self {
        columns.sort_by(Column::canonical_cmp);
        SolutionMatrix {
            a,
            b,
            k: columns.len(),
            columns,
        }
    }

    pub fn row1(&self) -> Vec<u64> {
        self.columns.iter().map(|c| c.x1).collect()
    }

    pub fn row2(&self) -> Vec<u64> {
        self.columns.iter().map(|c| c.x2).collect()
    }

    /// Row sums, column count and every column constraint.
    pub fn validate(&self, variant: Variant) -> bool {
        self.k == self.columns.len()
            && self.k > 0
            && (variant != Variant::Thm1 || self.k == 4)
            && self.columns.iter().map(|c| c.x1).sum::<u64>() == self.a
            && self.columns.iter().map(|c| c.x2).sum::<u64>() == self.b
            && self.columns.iter().all(|c| variant.column_ok(c))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }
}

impl fmt::Display for SolutionMatrix {
    /// Two rows of entries, then the column targets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<u64>| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "row 1:   {}", join(self.row1()))?;
        writeln!(f, "row 2:   {}", join(self.row2()))?;
        write!(
            f,
            "targets: {}",
            join(self.columns.iter().map(|c| c.target).collect())
        )
    }
}

/// Where `b` falls among the suffix sums of `p ≥ q ≥ r ≥ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem1Case {
    /// `b ≤ l`
    One,
    /// `l < b ≤ r + l`
    Two,
    /// `r + l < b ≤ q + r + l`
    Three,
    /// `q + r + l < b`
    Four,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Solution {
    pub matrix: SolutionMatrix,
    pub case: Theorem1Case,
    pub primes: [u64; 4],
}

/// Four-column solution of the `a > 10`, `a ≥ b > 0`, `a + b` even system.
///
/// The second row fills the columns from the smallest prime up; whatever is
/// left of each prime goes to the first row.
pub fn solve_theorem1(
    table: &PrimeTable,
    a: u64,
    b: u64,
) -> Result<Theorem1Solution, DiophantineError> {
    DiophantineInstance::new(a, b, Variant::Thm1)?;
    let split = four_odd_primes(table, a + b)?;
    let [p, q, r, l]: [u64; 4] = split.terms.as_slice().try_into().expect("four terms");
    let (case, second) = if b <= l {
        (Theorem1Case::One, [0, 0, 0, b])
    } else if b <= r + l {
        (Theorem1Case::Two, [0, 0, b - l, l])
    } else if b <= q + r + l {
        (Theorem1Case::Three, [0, b - r - l, r, l])
    } else {
        (Theorem1Case::Four, [b - q - r - l, q, r, l])
    };
    let columns = [p, q, r, l]
        .iter()
        .zip(second)
        .map(|(&t, x2)| Column::sum(t - x2, x2))
        .collect();
    let matrix = SolutionMatrix::new(a, b, columns);
    debug_assert!(matrix.validate(Variant::Thm1));
    Ok(Theorem1Solution {
        matrix,
        case,
        primes: [p, q, r, l],
    })
}

/// Solution with the fewest columns, at most `k_max`.
///
/// The column count must share the parity of `a + b`. A prime `a + b`
/// gives a single column.
pub fn solve_theorem2(
    table: &PrimeTable,
    a: u64,
    b: u64,
    k_max: usize,
) -> Result<SolutionMatrix, DiophantineError> {
    DiophantineInstance::new(a, b, Variant::Thm2)?;
    if !(2..=MAX_ODD_PRIME_TERMS).contains(&k_max) {
        return Err(DiophantineError::Argument(format!(
            "k_max must be in 2..={MAX_ODD_PRIME_TERMS}, got {k_max}"
        )));
    }
    let n = a + b;
    let first = if n % 2 == 1 { 1 } else { 2 };
    for k in (first..=k_max).step_by(2) {
        if let Some(split) = decompose(table, n, k, TermClass::Odd)? {
            // split.terms is descending; give b to the largest columns first
            let mut left = b;
            let columns = split
                .terms
                .iter()
                .map(|&t| {
                    let x2 = left.min(t);
                    left -= x2;
                    Column::sum(t - x2, x2)
                })
                .collect();
            let m = SolutionMatrix::new(a, b, columns);
            debug_assert!(m.validate(Variant::Thm2));
            return Ok(m);
        }
    }
    Err(DiophantineError::BoundExceeded { a, b, k_max })
}

/// Columns read off a decomposition of `a + bi` into odd primes with
/// nonnegative parts; `None` if none has at most `k_max` terms.
pub fn solve_conjecture1(
    a: u64,
    b: u64,
    k_max: usize,
) -> Result<Option<SolutionMatrix>, DiophantineError> {
    DiophantineInstance::new(a, b, Variant::Conj1)?;
    if !(2..=MAX_TERMS).contains(&k_max) {
        return Err(DiophantineError::Argument(format!(
            "k_max must be in 2..={MAX_TERMS}, got {k_max}"
        )));
    }
    let z = GaussianInt::try_new(a as i64, b as i64)
        .map_err(|e| DiophantineError::Argument(e.to_string()))?;
    let found = find_decomposition(z, Region::KPi, k_max, NormPolicy::NoBound)?;
    Ok(found.map(|d| {
        let columns = d
            .terms
            .iter()
            .map(|t| Column::squares(t.prime.re() as u64, t.prime.im() as u64))
            .collect();
        SolutionMatrix::new(a, b, columns)
    }))
}

/// Every `k`-column solution of the variant's system, one per multiset of
/// columns, in canonical order. No theorem preconditions apply.
pub fn brute_force_matrix(
    a: u64,
    b: u64,
    k: usize,
    variant: Variant,
) -> Result<Vec<SolutionMatrix>, DiophantineError> {
    if a + b > BRUTE_FORCE_LIMIT {
        return Err(DiophantineError::Argument(format!(
            "a + b = {} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}",
            a + b
        )));
    }
    if k == 0 || k > BRUTE_FORCE_MAX_COLUMNS {
        return Err(DiophantineError::Argument(format!(
            "k must be in 1..={BRUTE_FORCE_MAX_COLUMNS}, got {k}"
        )));
    }
    let mut candidates: Vec<Column> = Vec::new();
    for x1 in 0..=a {
        for x2 in 0..=b {
            let c = match variant {
                Variant::Thm1 | Variant::Thm2 => Column::sum(x1, x2),
                Variant::Conj1 => Column::squares(x1, x2),
            };
            if variant.column_ok(&c) {
                candidates.push(c);
            }
        }
    }
    candidates.sort_by(Column::canonical_cmp);
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    enumerate(&candidates, 0, a, b, k, &mut chosen, &mut out);
    Ok(out
        .into_iter()
        .map(|columns| SolutionMatrix::new(a, b, columns))
        .collect())
}

/// Non-increasing column sequences (by candidate index) using up `(ra, rb)`.
fn enumerate(
    candidates: &[Column],
    start: usize,
    ra: u64,
    rb: u64,
    k: usize,
    chosen: &mut Vec<Column>,
    out: &mut Vec<Vec<Column>>,
) {
    if k == 0 {
        if ra == 0 && rb == 0 {
            out.push(chosen.clone());
        }
        return;
    }
    for (i, c) in candidates.iter().enumerate().skip(start) {
        if c.x1 > ra || c.x2 > rb {
            continue;
        }
        chosen.push(*c);
        enumerate(candidates, i, ra - c.x1, rb - c.x2, k - 1, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::sieve(10_000).unwrap()
    }

    fn cols(m: &SolutionMatrix) -> Vec<(u64, u64)> {
        m.columns.iter().map(|c| (c.x1, c.x2)).collect()
    }

    #[test]
    fn theorem1_examples() {
        let t = table();
        let s = solve_theorem1(&t, 11, 3).unwrap();
        assert_eq!(s.primes, [5, 3, 3, 3]);
        assert_eq!(s.case, Theorem1Case::One);
        assert_eq!(s.matrix.row1(), vec![5, 3, 3, 0]);
        assert_eq!(s.matrix.row2(), vec![0, 0, 0, 3]);

        let s = solve_theorem1(&t, 12, 2).unwrap();
        assert_eq!(s.matrix.row1(), vec![5, 3, 3, 1]);
        assert_eq!(s.matrix.row2(), vec![0, 0, 0, 2]);

        assert!(matches!(
            solve_theorem1(&t, 7, 7),
            Err(DiophantineError::Argument(_))
        ));
        assert!(matches!(
            solve_theorem1(&t, 12, 3),
            Err(DiophantineError::Argument(_))
        ));
        assert!(matches!(
            solve_theorem1(&t, 12, 14),
            Err(DiophantineError::Argument(_))
        ));
    }

    #[test]
    fn theorem1_reaches_every_case() {
        let t = table();
        // 32 = 23 + 3 + 3 + 3
        let cases: Vec<_> = [(31, 1), (28, 4), (24, 8), (20, 12)]
            .iter()
            .map(|&(a, b)| {
                let s = solve_theorem1(&t, a, b).unwrap();
                assert!(s.matrix.validate(Variant::Thm1));
                s.case
            })
            .collect();
        assert_eq!(
            cases,
            vec![
                Theorem1Case::One,
                Theorem1Case::Two,
                Theorem1Case::Three,
                Theorem1Case::Four
            ]
        );
    }

    #[test]
    fn theorem2_examples() {
        let t = table();
        let m = solve_theorem2(&t, 7, 1, 4).unwrap();
        assert_eq!(m.k, 2);
        assert_eq!(cols(&m), vec![(4, 1), (3, 0)]);
        assert_eq!(
            m.columns.iter().map(|c| c.target).collect::<Vec<_>>(),
            vec![5, 3]
        );

        let m = solve_theorem2(&t, 9, 9, 4).unwrap();
        assert_eq!(m.k, 2);
        assert!(m.validate(Variant::Thm2));

        let m = solve_theorem2(&t, 7, 7, 4).unwrap();
        assert!(m.k <= 4 && m.validate(Variant::Thm2));

        // 7 + 4 = 11 is prime
        let m = solve_theorem2(&t, 7, 4, 4).unwrap();
        assert_eq!(cols(&m), vec![(7, 4)]);
        assert!(solve_theorem2(&t, 6, 1, 4).is_err());
    }

    #[test]
    fn theorem2_bound_exceeded() {
        let t = table();
        // 27 is odd and not prime, so it needs three columns
        assert!(matches!(
            solve_theorem2(&t, 20, 7, 2),
            Err(DiophantineError::BoundExceeded {
                a: 20,
                b: 7,
                k_max: 2
            })
        ));
        assert_eq!(solve_theorem2(&t, 20, 7, 3).unwrap().k, 3);
    }

    #[test]
    fn conjecture1_examples() {
        let m = solve_conjecture1(7, 4, 3).unwrap().unwrap();
        assert_eq!(m.k, 3);
        assert!(m.validate(Variant::Conj1));
        let appendix = SolutionMatrix::new(
            7,
            4,
            vec![
                Column::squares(3, 2),
                Column::squares(2, 1),
                Column::squares(2, 1),
            ],
        );
        assert!(appendix.validate(Variant::Conj1));

        // a = 6 is below the solver's range; the matrix itself is fine
        assert!(matches!(
            solve_conjecture1(6, 3, 3),
            Err(DiophantineError::Argument(_))
        ));
        let appendix = SolutionMatrix::new(6, 3, vec![Column::squares(2, 1); 3]);
        assert!(appendix.validate(Variant::Conj1));
        assert!(brute_force_matrix(6, 3, 3, Variant::Conj1)
            .unwrap()
            .contains(&appendix));

        let m = solve_conjecture1(8, 1, 3).unwrap().unwrap();
        assert_eq!(cols(&m), vec![(3, 0), (3, 0), (2, 1)]);
        assert_eq!(
            m.columns.iter().map(|c| c.target).collect::<Vec<_>>(),
            vec![9, 9, 5]
        );
    }

    #[test]
    fn brute_force_contains_solver_witnesses() {
        let t = table();
        let all = brute_force_matrix(11, 3, 4, Variant::Thm1).unwrap();
        assert!(all.contains(&solve_theorem1(&t, 11, 3).unwrap().matrix));
        assert!(all.iter().all(|m| m.validate(Variant::Thm1)));

        let all = brute_force_matrix(7, 4, 3, Variant::Conj1).unwrap();
        let appendix = SolutionMatrix::new(
            7,
            4,
            vec![
                Column::squares(3, 2),
                Column::squares(2, 1),
                Column::squares(2, 1),
            ],
        );
        assert!(all.contains(&appendix));
        assert!(all.contains(&solve_conjecture1(7, 4, 3).unwrap().unwrap()));

        assert!(brute_force_matrix(3, 3, 2, Variant::Thm2)
            .unwrap()
            .iter()
            .all(|m| m.validate(Variant::Thm2)));
        assert!(brute_force_matrix(150, 100, 2, Variant::Thm2).is_err());
    }

    #[test]
    fn brute_force_has_no_duplicates() {
        let all = brute_force_matrix(9, 5, 2, Variant::Thm2).unwrap();
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(all.len(), dedup.len());
        // 14 = 11+3 = 7+7
        let eleven_three = all.iter().filter(|m| m.columns[0].target == 11).count();
        let seven_seven = all.iter().filter(|m| m.columns[0].target == 7).count();
        assert_eq!((eleven_three, seven_seven, all.len()), (4, 3, 7));
    }

    #[test]
    fn conj1_targets() {
        assert!(is_conj1_target(5));
        assert!(is_conj1_target(9));
        assert!(is_conj1_target(49));
        assert!(!is_conj1_target(25));
        assert!(!is_conj1_target(3));
        assert!(!is_conj1_target(2));
    }

    #[test]
    fn json_shape() {
        let m = SolutionMatrix::new(7, 1, vec![Column::sum(3, 0), Column::sum(4, 1)]);
        let v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(v["a"], 7);
        assert_eq!(v["k"], 2);
        assert_eq!(v["columns"][0]["target"], 5);
        assert_eq!(v["columns"][1]["x1"], 3);
    }
}
