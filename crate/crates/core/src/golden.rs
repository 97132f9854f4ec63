//! Two reference tables of odd Gaussian integers written as sums of odd
//! sector primes, with checks against the search engine.
//!
//! Table 1 holds three-term sums, Table 2 two-term sums. A term may carry the
//! unit `i`, so the summands range over the sector and its rotation.

use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussdecomp::{
    check_decomposition, Decomposition, DecompositionEngine, NormPolicy, SearchParams, Term,
};
use crate::parallel::ordered_map;
use crate::zcore::{GaussianInt, Parity, Region, Unit};

const TABLES_CSV: &str = include_str!("../data/appendix_tables.csv");

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("golden table row {line}: {reason}")]
    Row { line: usize, reason: String },
    #[error("golden table: {0}")]
    Csv(#[from] csv::Error),
    #[error("table output: {0}")]
    Io(#[from] io::Error),
}

/// Shape of a row's representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    #[serde(rename = "p+q+r")]
    Pqr,
    #[serde(rename = "p+q+ir")]
    PqIr,
    #[serde(rename = "p+q")]
    Pq,
    #[serde(rename = "p+iq")]
    PIq,
}

impl Form {
    pub fn as_str(self) -> &'static str {
        match self {
            Form::Pqr => "p+q+r",
            Form::PqIr => "p+q+ir",
            Form::Pq => "p+q",
            Form::PIq => "p+iq",
        }
    }

    pub fn term_count(self) -> usize {
        match self {
            Form::Pqr | Form::PqIr => 3,
            Form::Pq | Form::PIq => 2,
        }
    }

    /// The last term carries the unit `i`.
    pub fn rotated_last(self) -> bool {
        matches!(self, Form::PqIr | Form::PIq)
    }

    fn of_units(units: &[Unit]) -> Option<Form> {
        match units {
            [Unit::One, Unit::One, Unit::One] => Some(Form::Pqr),
            [Unit::One, Unit::One, Unit::I] => Some(Form::PqIr),
            [Unit::One, Unit::One] => Some(Form::Pq),
            [Unit::One, Unit::I] => Some(Form::PIq),
            _ => None,
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p+q+r" => Ok(Form::Pqr),
            "p+q+ir" => Ok(Form::PqIr),
            "p+q" => Ok(Form::Pq),
            "p+iq" => Ok(Form::PIq),
            _ => Err(format!("unknown form {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub table: u8,
    pub target: GaussianInt,
    pub terms: Vec<Term>,
    pub form: Form,
    /// Set on rows whose printed form had a transcription slip.
    pub note: Option<String>,
}

impl GoldenRow {
    pub fn decomposition(&self) -> Decomposition {
        Decomposition {
            target: self.target,
            terms: self.terms.clone(),
            prime_region: Region::GammaPi,
            norm_policy: NormPolicy::StrictLess,
            parity_filter: Parity::Odd,
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawRow {
    table: u8,
    z_re: i64,
    z_im: i64,
    t1_re: i64,
    t1_im: i64,
    t1_unit: Unit,
    t2_re: i64,
    t2_im: i64,
    t2_unit: Unit,
    t3_re: Option<i64>,
    t3_im: Option<i64>,
    t3_unit: Option<Unit>,
    form: String,
    note: Option<String>,
}

fn gaussian(line: usize, re: i64, im: i64) -> Result<GaussianInt, GoldenError> {
    GaussianInt::try_new(re, im).map_err(|e| GoldenError::Row {
        line,
        reason: e.to_string(),
    })
}

impl RawRow {
    fn into_row(self, line: usize) -> Result<GoldenRow, GoldenError> {
        let bad = |reason: String| GoldenError::Row { line, reason };
        let mut terms = vec![
            Term {
                prime: gaussian(line, self.t1_re, self.t1_im)?,
                unit: self.t1_unit,
            },
            Term {
                prime: gaussian(line, self.t2_re, self.t2_im)?,
                unit: self.t2_unit,
            },
        ];
        match (self.t3_re, self.t3_im, self.t3_unit) {
            (Some(re), Some(im), Some(unit)) => terms.push(Term {
                prime: gaussian(line, re, im)?,
                unit,
            }),
            (None, None, None) => {}
            _ => return Err(bad("third term is partially filled".into())),
        }
        let form: Form = self.form.parse().map_err(bad)?;
        let units: Vec<Unit> = terms.iter().map(|t| t.unit).collect();
        if Form::of_units(&units) != Some(form) {
            return Err(bad(format!("units {units:?} do not match form {form}")));
        }
        let expected_table = if form.term_count() == 3 { 1 } else { 2 };
        if self.table != expected_table {
            return Err(bad(format!(
                "form {form} does not belong in table {}",
                self.table
            )));
        }
        Ok(GoldenRow {
            table: self.table,
            target: gaussian(line, self.z_re, self.z_im)?,
            terms,
            form,
            note: self.note.filter(|n| !n.is_empty()),
        })
    }
}

/// All rows of both tables, in table order.
pub fn golden_rows() -> Result<Vec<GoldenRow>, GoldenError> {
    let mut reader = csv::Reader::from_reader(TABLES_CSV.as_bytes());
    reader
        .deserialize::<RawRow>()
        .enumerate()
        .map(|(i, raw)| raw?.into_row(i + 2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub row: GoldenRow,
    /// The first violated invariant, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub checks: Vec<GoldenCheck>,
}

impl GoldenReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.failure.is_none()).count()
    }

    pub fn failed(&self) -> Vec<&GoldenCheck> {
        self.checks.iter().filter(|c| c.failure.is_some()).collect()
    }

    pub fn annotated(&self) -> Vec<&GoldenRow> {
        self.checks
            .iter()
            .map(|c| &c.row)
            .filter(|r| r.note.is_some())
            .collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "rows: {} passed, {} failed, {} annotated typos",
            self.passed(),
            self.failed().len(),
            self.annotated().len()
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `table,z,form,status,note`, status `ok` or the first violation.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), GoldenError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["table", "z", "form", "status", "note"])?;
        for c in &self.checks {
            w.write_record([
                c.row.table.to_string(),
                c.row.target.to_string(),
                c.row.form.to_string(),
                c.failure.clone().unwrap_or_else(|| "ok".into()),
                c.row.note.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Checks every row: sector primes before units, odd, each term of norm
/// below the target's, summing to the target.
pub fn validate_golden() -> Result<GoldenReport, GoldenError> {
    let checks = golden_rows()?
        .into_iter()
        .map(|row| {
            let failure = check_decomposition(&row.decomposition())
                .err()
                .map(|e| e.to_string());
            GoldenCheck { row, failure }
        })
        .collect();
    Ok(GoldenReport { checks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegeneratedRow {
    pub table: u8,
    pub target: GaussianInt,
    pub decomposition: Option<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegenerationReport {
    pub rows: Vec<RegeneratedRow>,
}

impl RegenerationReport {
    /// Targets the engine could not reproduce.
    pub fn failures(&self) -> Vec<GaussianInt> {
        self.rows
            .iter()
            .filter(|r| r.decomposition.is_none())
            .map(|r| r.target)
            .collect()
    }

    /// Engine output that fails re-validation; always empty unless the
    /// engine is broken.
    pub fn invalid(&self) -> Vec<GaussianInt> {
        self.rows
            .iter()
            .filter_map(|r| r.decomposition.as_ref())
            .filter(|d| check_decomposition(d).is_err())
            .map(|d| d.target)
            .collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "targets: {}, regenerated: {}, missing: {}, invalid: {}",
            self.rows.len(),
            self.rows.len() - self.failures().len(),
            self.failures().len(),
            self.invalid().len()
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Both tables as markdown, one `| z | p | q | r | form |` table each.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for table in [1u8, 2] {
            let width = if table == 1 { 3 } else { 2 };
            let names = ["p", "q", "r"];
            out.push_str(&format!("## Table {table}\n\n| z |"));
            for name in &names[..width] {
                out.push_str(&format!(" {name} |"));
            }
            out.push_str(" form |\n|---|");
            out.push_str(&"---|".repeat(width + 1));
            out.push('\n');
            for r in self.rows.iter().filter(|r| r.table == table) {
                out.push_str(&format!("| {} |", r.target));
                match &r.decomposition {
                    Some(d) => {
                        for t in &d.terms {
                            out.push_str(&format!(" {} |", t.prime));
                        }
                        out.push_str(&format!(" {} |\n", d.form()));
                    }
                    None => {
                        out.push_str(&" |".repeat(width));
                        out.push_str(" EMPTY |\n");
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// The golden CSV layout; missing targets keep their row with empty
    /// terms and form `EMPTY`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), GoldenError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "table", "z_re", "z_im", "t1_re", "t1_im", "t1_unit", "t2_re", "t2_im", "t2_unit",
            "t3_re", "t3_im", "t3_unit", "form", "note",
        ])?;
        for r in &self.rows {
            let mut rec = vec![
                r.table.to_string(),
                r.target.re().to_string(),
                r.target.im().to_string(),
            ];
            let form = match &r.decomposition {
                Some(d) => {
                    for t in &d.terms {
                        rec.extend([
                            t.prime.re().to_string(),
                            t.prime.im().to_string(),
                            t.unit.as_str().into(),
                        ]);
                    }
                    let units: Vec<Unit> = d.terms.iter().map(|t| t.unit).collect();
                    Form::of_units(&units).map_or("EMPTY", Form::as_str)
                }
                None => "EMPTY",
            };
            rec.resize(12, String::new());
            rec.push(form.into());
            rec.push(String::new());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Rewrites a decomposition over the rotation-closed region in the table
/// style: sector primes, with `i` on any term that came from the rotated
/// half, rotated terms last.
fn to_table_style(d: Decomposition) -> Decomposition {
    let mut terms: Vec<Term> = d
        .terms
        .iter()
        .map(|t| {
            let v = t.value();
            if v.in_region(Region::GammaPi) {
                Term::plain(v)
            } else {
                Term {
                    prime: Unit::NegI.apply(v),
                    unit: Unit::I,
                }
            }
        })
        .collect();
    terms.sort_by_key(|t| t.unit == Unit::I);
    Decomposition {
        terms,
        prime_region: Region::GammaPi,
        ..d
    }
}

/// Re-derives every golden target with the engine: three terms for Table 1
/// and two for Table 2, strict norm bound, sector primes for unit-free rows
/// and the rotation-closed region for rows with an `i` term.
pub fn regenerate_tables(threads: usize) -> Result<RegenerationReport, GoldenError> {
    let rows = golden_rows()?;
    let regenerated = ordered_map(threads, &rows, |row| {
        let region = if row.form.rotated_last() {
            Region::SPi
        } else {
            Region::GammaPi
        };
        let k = row.form.term_count();
        let params = SearchParams::new(region, k, NormPolicy::StrictLess).expect("k in range");
        let engine = DecompositionEngine::for_targets(params, &[row.target]);
        RegeneratedRow {
            table: row.table,
            target: row.target,
            decomposition: engine.find_exact(row.target, k).map(to_table_style),
        }
    });
    Ok(RegenerationReport { rows: regenerated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    fn row(rows: &[GoldenRow], z: GaussianInt) -> &GoldenRow {
        rows.iter().find(|r| r.target == z).unwrap()
    }

    #[test]
    fn parses_both_tables() {
        let rows = golden_rows().unwrap();
        assert_eq!(rows.iter().filter(|r| r.table == 1).count(), 52);
        assert_eq!(rows.iter().filter(|r| r.table == 2).count(), 50);
        let r = row(&rows, g(11, 10));
        assert_eq!(r.form, Form::PqIr);
        assert!(r.note.is_some());
        assert_eq!(r.terms[2].unit, Unit::I);
        assert_eq!(r.terms[2].prime, g(6, -1));
        let r = row(&rows, g(36, 2));
        assert_eq!(
            r.terms.iter().map(|t| t.prime).collect::<Vec<_>>(),
            vec![g(26, 1), g(10, 1)]
        );
    }

    #[test]
    fn every_row_validates() {
        let report = validate_golden().unwrap();
        assert_eq!(report.failed().len(), 0, "{:?}", report.failed());
        assert_eq!(report.passed(), 102);
        let annotated: Vec<_> = report.annotated().iter().map(|r| r.target).collect();
        assert_eq!(annotated, vec![g(11, 10), g(48, 48)]);
        assert_eq!(
            report.summary(),
            "rows: 102 passed, 0 failed, 2 annotated typos"
        );
    }

    #[test]
    fn validation_catches_a_corrupted_row() {
        let rows = golden_rows().unwrap();
        let mut r = row(&rows, g(48, 48)).clone();
        r.terms[1].unit = Unit::One;
        assert!(check_decomposition(&r.decomposition()).is_err());
    }

    #[test]
    fn table_style_rotates_the_upper_half() {
        // 6+6i = (5+4i) + (1+2i), and 1+2i = i(2-i)
        let d = Decomposition {
            target: g(6, 6),
            terms: vec![Term::plain(g(1, 2)), Term::plain(g(5, 4))],
            prime_region: Region::SPi,
            norm_policy: NormPolicy::StrictLess,
            parity_filter: Parity::Odd,
        };
        let t = to_table_style(d);
        assert_eq!(t.terms[0], Term::plain(g(5, 4)));
        assert_eq!(
            t.terms[1],
            Term {
                prime: g(2, -1),
                unit: Unit::I
            }
        );
        assert!(check_decomposition(&t).is_ok());
        assert_eq!(t.form(), "z=p+iq");
    }

    #[test]
    fn regenerates_every_target() {
        let report = regenerate_tables(4).unwrap();
        assert_eq!(report.rows.len(), 102);
        assert!(report.failures().is_empty(), "{:?}", report.failures());
        assert!(report.invalid().is_empty());
        let nine = report.rows.iter().find(|r| r.target == g(9, 0)).unwrap();
        let d = nine.decomposition.as_ref().unwrap();
        assert_eq!(
            d.terms.iter().map(|t| t.prime).collect::<Vec<_>>(),
            vec![g(3, 0); 3]
        );
    }

    #[test]
    fn regenerated_csv_round_trips_through_the_layout() {
        let report = regenerate_tables(1).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 103);
        assert_eq!(
            text.lines().next().unwrap(),
            TABLES_CSV.lines().next().unwrap()
        );
        assert!(report.to_markdown().contains("## Table 2"));
    }
}
