use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use super::{
    record_header, record_row, Decomposition, DecompositionEngine, NormPolicy, SearchError,
    SearchParams,
};
use crate::parallel::ordered_map;
use crate::zcore::{GaussianInt, Region};

/// Largest rectangle side a scan accepts.
pub const MAX_SCAN_SIDE: i64 = 500;

/// The targets of a scan: points of `region` inside a rectangle, optionally
/// restricted to the line `Im = Re - offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTargets {
    pub region: Region,
    pub re: (i64, i64),
    pub im: (i64, i64),
    pub line_offset: Option<i64>,
}

impl ScanTargets {
    pub fn rectangle(region: Region, re: (i64, i64), im: (i64, i64)) -> Self {
        ScanTargets {
            region,
            re,
            im,
            line_offset: None,
        }
    }

    pub fn on_line(self, offset: i64) -> Self {
        ScanTargets {
            line_offset: Some(offset),
            ..self
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        for (lo, hi) in [self.re, self.im] {
            if lo > hi {
                return Err(SearchError::Argument(format!("empty range {lo}..{hi}")));
            }
            if hi - lo + 1 > MAX_SCAN_SIDE || lo.abs() > MAX_SCAN_SIDE || hi.abs() > MAX_SCAN_SIDE {
                return Err(SearchError::Argument(format!(
                    "range {lo}..{hi} exceeds the {MAX_SCAN_SIDE} per-side bound"
                )));
            }
        }
        Ok(())
    }

    /// Targets grouped by real part, in (re, im) order.
    fn rows(&self, min_max_component: i64) -> Vec<Vec<GaussianInt>> {
        (self.re.0..=self.re.1)
            .map(|re| {
                (self.im.0..=self.im.1)
                    .map(|im| GaussianInt::new(re, im))
                    .filter(|z| self.region.contains(*z))
                    .filter(|z| self.line_offset.is_none_or(|o| z.im() == z.re() - o))
                    .filter(|z| z.max_component() >= min_max_component)
                    .collect::<Vec<_>>()
            })
            .filter(|row| !row.is_empty())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub target: GaussianInt,
    pub decomposition: Option<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub targets: ScanTargets,
    pub prime_region: Region,
    pub max_terms: usize,
    pub norm_policy: NormPolicy,
    pub include_single_term: bool,
    pub min_max_component: i64,
    pub targets_checked: usize,
    /// Targets with no decomposition within `max_terms`.
    pub exceptions: Vec<GaussianInt>,
    /// Successful targets by term count of the decomposition found.
    pub counts: BTreeMap<usize, usize>,
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per target in the appendix layout; exceptions get `EMPTY`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), SearchError> {
        let width = self.max_terms.max(3);
        let mut w = csv::Writer::from_writer(out);
        w.write_record(record_header(width))?;
        for r in &self.records {
            w.write_record(record_row(r.target, r.decomposition.as_ref(), width))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, n)| format!("{k}-term: {n}"))
            .collect();
        format!(
            "targets: {}, exceptions: {} ({})",
            self.targets_checked,
            self.exceptions.len(),
            counts.join(", ")
        )
    }
}

/// Searches every target for a decomposition into at most `params.max_terms`
/// odd primes of `params.prime_region`. Rows of the target grid are spread
/// over `threads` workers; the report does not depend on the thread count.
pub fn scan_representability(
    targets: ScanTargets,
    params: SearchParams,
    min_max_component: i64,
    threads: usize,
) -> Result<ScanReport, SearchError> {
    targets.validate()?;
    let rows = targets.rows(min_max_component);
    let all: Vec<GaussianInt> = rows.iter().flatten().copied().collect();
    let engine = DecompositionEngine::for_targets(params, &all);
    let records: Vec<ScanRecord> = ordered_map(threads, &rows, |row| {
        row.iter()
            .map(|&z| ScanRecord {
                target: z,
                decomposition: engine.find(z),
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let mut counts = BTreeMap::new();
    let mut exceptions = Vec::new();
    for r in &records {
        match &r.decomposition {
            Some(d) => *counts.entry(d.term_count()).or_insert(0) += 1,
            None => exceptions.push(r.target),
        }
    }
    Ok(ScanReport {
        targets,
        prime_region: params.prime_region,
        max_terms: params.max_terms,
        norm_policy: params.norm_policy,
        include_single_term: params.include_single_term,
        min_max_component,
        targets_checked: records.len(),
        exceptions,
        counts,
        records,
    })
}
