use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shnirel::diophantine::{solve_conjecture1, solve_theorem1, solve_theorem2, SolutionMatrix};
use shnirel::gaussdecomp::{
    gamma_pi_difference_violations, scan_representability, verify_gamma_pi_obstruction,
    write_decompositions_csv, DecompositionEngine, NormPolicy, ScanTargets, SearchParams,
};
use shnirel::golden::{regenerate_tables, validate_golden};
use shnirel::primes::PrimeTable;
use shnirel::ratdecomp::{hypothesis_scan, theorem130_decompose, DecompError, HypothesisSpec};
use shnirel::{GaussianInt, Region};

#[derive(Parser)]
#[command(
    name = "shnirel",
    version,
    about = "Additive prime decompositions over Z and Z[i]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Report format. Without --output the report goes to stdout.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here (csv unless --format says otherwise).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for scans; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Prime cache file, reused and extended between runs.
    #[arg(long, global = true, env = "SHNIREL_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve the primes up to a limit, refreshing the cache if one is set.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Fewest-term sum of odd Gaussian primes from a region.
    Decompose {
        /// Target as RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        z: GaussianInt,
        #[arg(long, default_value = "kpi")]
        primes: Region,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        /// Every term must have smaller norm than the target.
        #[arg(long)]
        strict_norm: bool,
        /// Do not accept the target itself as a one-term answer.
        #[arg(long)]
        no_single_term: bool,
    },
    /// Four columns, each summing to an odd prime.
    SolveThm1 {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Fewest columns, each summing to an odd prime.
    SolveThm2 {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// Columns whose squares sum to p ≡ 1 (mod 4) or p² with p ≡ 3 (mod 4).
    SolveConj1 {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Decompose every target of a region inside a rectangle.
    Scan {
        /// Target region.
        #[arg(long)]
        targets: Region,
        /// Real parts, LO..HI inclusive.
        #[arg(long, allow_hyphen_values = true)]
        re: Span,
        /// Imaginary parts, LO..HI inclusive.
        #[arg(long, allow_hyphen_values = true)]
        im: Span,
        /// Region the primes are drawn from.
        #[arg(long)]
        primes: Region,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        #[arg(long)]
        strict_norm: bool,
        #[arg(long)]
        no_single_term: bool,
        /// Skip targets with max(Re, Im) below this.
        #[arg(long, default_value_t = 0)]
        min_max_component: i64,
        /// Keep only targets on the line Im = Re - OFFSET.
        #[arg(long, allow_hyphen_values = true)]
        line: Option<i64>,
    },
    /// Check that no odd sector prime sum lands on Im = Re or Im = Re - 1.
    Obstruction {
        #[arg(long, default_value_t = 50)]
        bound: i64,
        /// Norm limit for the Re - Im ≥ 1 check on single primes.
        #[arg(long, default_value_t = 1_000_000)]
        norm_limit: u64,
    },
    /// Scan one residue-class claim about primes ≡ 3 (mod 4).
    Hypotheses {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        index: u8,
        #[arg(long)]
        upper: u64,
    },
    /// Primes ≡ 3 (mod 4) summing to n by peeling off threes.
    Thm130 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c0: u64,
    },
    /// Check or re-derive the reference tables.
    Tables {
        #[arg(
            long,
            conflicts_with = "regenerate",
            required_unless_present = "regenerate"
        )]
        validate: bool,
        #[arg(long)]
        regenerate: bool,
    },
}

/// `LO..HI`, both ends inclusive.
#[derive(Clone, Copy, Debug)]
struct Span(i64, i64);

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Span(parse(lo)?, parse(hi)?))
    }
}

/// What a subcommand hands back for printing.
struct Rendered {
    csv: String,
    json: String,
    md: String,
    /// Human-readable body printed when no format or output is requested.
    text: Option<String>,
    summary: String,
    /// A data outcome worth flagging: exceptions, failures, missing witnesses.
    flagged: bool,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<Rendered, Failure>;

fn table(global: &Global, limit: u64) -> Result<PrimeTable, Failure> {
    let limit = limit.max(2);
    Ok(match &global.cache {
        Some(path) => PrimeTable::load_or_build(path, limit)?,
        None => PrimeTable::sieve(limit)?,
    })
}

fn csv_of(write: impl FnOnce(&mut Vec<u8>) -> Result<(), Failure>) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!(
        "| {} |\n|{}\n",
        header.join(" | "),
        "---|".repeat(header.len())
    );
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out
}

fn matrix_rendered(m: &SolutionMatrix, summary: String) -> Rendered {
    let rows: Vec<Vec<String>> = m
        .columns
        .iter()
        .map(|c| vec![c.x1.to_string(), c.x2.to_string(), c.target.to_string()])
        .collect();
    let mut csv = String::from("x1,x2,target\n");
    for r in &rows {
        csv.push_str(&r.join(","));
        csv.push('\n');
    }
    Rendered {
        csv,
        json: m.to_json(),
        md: md_table(&["x1", "x2", "target"], &rows),
        text: Some(m.to_string()),
        summary,
        flagged: false,
    }
}

fn sieve(global: &Global, limit: u64) -> Outcome {
    let t = table(global, limit)?;
    let largest = t.primes().last().copied().unwrap_or(0);
    let json = serde_json::json!({ "limit": limit, "count": t.len(), "largest": largest });
    Ok(Rendered {
        csv: format!("limit,count,largest\n{limit},{},{largest}\n", t.len()),
        json: serde_json::to_string_pretty(&json).expect("json"),
        md: md_table(
            &["limit", "count", "largest"],
            &[vec![
                limit.to_string(),
                t.len().to_string(),
                largest.to_string(),
            ]],
        ),
        text: None,
        summary: format!("primes up to {limit}: {} (largest {largest})", t.len()),
        flagged: false,
    })
}

fn decompose(
    z: GaussianInt,
    primes: Region,
    max_terms: usize,
    strict: bool,
    no_single: bool,
) -> Outcome {
    let policy = if strict {
        NormPolicy::StrictLess
    } else {
        NormPolicy::NoBound
    };
    let mut params = SearchParams::new(primes, max_terms, policy)?;
    if no_single {
        params = params.excluding_single_term();
    }
    let found = DecompositionEngine::for_targets(params, &[z]).find(z);
    let found: Vec<_> = found.into_iter().collect();
    let csv = csv_of(|buf| Ok(write_decompositions_csv(buf, &found)?))?;
    Ok(match found.first() {
        Some(d) => Rendered {
            csv,
            json: serde_json::to_string_pretty(d).expect("json"),
            md: md_table(
                &["z", "terms", "representation"],
                &[vec![z.to_string(), d.to_string(), d.form()]],
            ),
            text: Some(d.to_string()),
            summary: format!("{z}: {} term(s), {}", d.term_count(), d.form()),
            flagged: false,
        },
        None => Rendered {
            csv: format!("z,p,q,r,representation\n{z},,,,EMPTY\n"),
            json: "null".into(),
            md: md_table(
                &["z", "terms", "representation"],
                &[vec![z.to_string(), String::new(), "EMPTY".into()]],
            ),
            text: None,
            summary: format!("{z}: no decomposition with at most {max_terms} terms"),
            flagged: true,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn scan(
    global: &Global,
    targets: Region,
    re: Span,
    im: Span,
    primes: Region,
    max_terms: usize,
    strict: bool,
    no_single: bool,
    min_max: i64,
    line: Option<i64>,
) -> Outcome {
    let policy = if strict {
        NormPolicy::StrictLess
    } else {
        NormPolicy::NoBound
    };
    let mut params = SearchParams::new(primes, max_terms, policy)?;
    if no_single {
        params = params.excluding_single_term();
    }
    let mut t = ScanTargets::rectangle(targets, (re.0, re.1), (im.0, im.1));
    if let Some(offset) = line {
        t = t.on_line(offset);
    }
    let report = scan_representability(t, params, min_max, global.jobs)?;
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| match &r.decomposition {
            Some(d) => vec![r.target.to_string(), d.to_string(), d.form()],
            None => vec![r.target.to_string(), String::new(), "EMPTY".into()],
        })
        .collect();
    let exceptions: Vec<String> = report.exceptions.iter().map(|z| z.to_string()).collect();
    Ok(Rendered {
        csv: csv_of(|buf| Ok(report.write_csv(buf)?))?,
        json: report.to_json(),
        md: md_table(&["z", "terms", "representation"], &rows),
        text: (!exceptions.is_empty()).then(|| format!("exceptions: {}", exceptions.join(" "))),
        summary: report.summary(),
        flagged: !report.exceptions.is_empty(),
    })
}

fn obstruction(bound: i64, norm_limit: u64) -> Outcome {
    let report = verify_gamma_pi_obstruction(bound)?;
    let (checked, violations) = gamma_pi_difference_violations(norm_limit);
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.target.to_string(),
                r.multi_term_sumset.to_string(),
                r.multi_term_search.to_string(),
                r.single_term.to_string(),
            ]
        })
        .collect();
    let header = ["z", "multi_term_sumset", "multi_term_search", "single_term"];
    let mut csv = header.join(",") + "\n";
    for r in &rows {
        csv.push_str(&r.join(","));
        csv.push('\n');
    }
    let json = serde_json::json!({
        "sumset": report,
        "difference_check": { "norm_limit": norm_limit, "primes_checked": checked, "violations": violations },
    });
    Ok(Rendered {
        csv,
        json: serde_json::to_string_pretty(&json).expect("json"),
        md: md_table(&header, &rows),
        text: None,
        summary: format!(
            "{}; primes with norm ≤ {norm_limit}: {checked}, Re - Im < 1: {}",
            report.summary(),
            violations.len()
        ),
        flagged: !report.holds() || !violations.is_empty(),
    })
}

fn hypotheses(global: &Global, index: u8, upper: u64) -> Outcome {
    let t = table(global, upper)?;
    let spec = HypothesisSpec::new(index)?;
    let report = hypothesis_scan(&t, spec, upper, global.jobs)?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let w = r.witness.as_ref().map_or("EMPTY".into(), |w| {
                w.iter().map(u64::to_string).collect::<Vec<_>>().join("+")
            });
            vec![r.n.to_string(), w]
        })
        .collect();
    let exceptions: Vec<String> = report.exceptions.iter().map(u64::to_string).collect();
    Ok(Rendered {
        csv: csv_of(|buf| Ok(report.write_csv(buf)?))?,
        json: report.to_json(),
        md: md_table(&["n", "witness"], &rows),
        text: Some(format!("exceptions: {}", exceptions.join(" "))),
        summary: format!(
            "n ≡ {} (mod 4) up to {upper} as {} primes ≡ 3 (mod 4): {} exceptions, max {}, c0 candidate {}",
            spec.residue,
            spec.term_count,
            report.exceptions.len(),
            report.max_exception().map_or("none".into(), |m| m.to_string()),
            report.c0_candidate
        ),
        flagged: false,
    })
}

fn thm130(global: &Global, n: u64, c0: u64) -> Outcome {
    let t = table(global, n)?;
    match theorem130_decompose(&t, n, c0) {
        Ok(r) => {
            let terms = r
                .terms
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join("+");
            Ok(Rendered {
                csv: format!("n,m,terms\n{n},{},{terms}\n", r.m),
                json: serde_json::to_string_pretty(&r).expect("json"),
                md: md_table(
                    &["n", "m", "terms"],
                    &[vec![n.to_string(), r.m.to_string(), terms.clone()]],
                ),
                text: Some(format!("{n} = {terms}")),
                summary: format!("{n}: {} primes ≡ 3 (mod 4)", r.m),
                flagged: false,
            })
        }
        Err(DecompError::HypothesisViolation { n: base }) => Ok(Rendered {
            csv: format!("n,m,terms\n{n},0,EMPTY\n"),
            json: serde_json::json!({ "n": n, "violation_at": base }).to_string(),
            md: md_table(
                &["n", "m", "terms"],
                &[vec![n.to_string(), "0".into(), "EMPTY".into()]],
            ),
            text: None,
            summary: format!("{n}: chain failed, {base} has no 3-term split"),
            flagged: true,
        }),
        Err(e) => Err(e.into()),
    }
}

fn tables(global: &Global, validate: bool) -> Outcome {
    if validate {
        let report = validate_golden()?;
        let rows: Vec<Vec<String>> = report
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.row.table.to_string(),
                    c.row.target.to_string(),
                    c.row.form.to_string(),
                    c.failure.clone().unwrap_or_else(|| "ok".into()),
                    c.row.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        let header = ["table", "z", "form", "status", "note"];
        let failures: Vec<String> = report
            .failed()
            .iter()
            .map(|c| format!("{}: {}", c.row.target, c.failure.as_deref().unwrap_or("")))
            .collect();
        Ok(Rendered {
            csv: csv_of(|buf| Ok(report.write_csv(buf)?))?,
            json: report.to_json(),
            md: md_table(&header, &rows),
            text: (!failures.is_empty()).then(|| failures.join("\n")),
            summary: report.summary(),
            flagged: !report.failed().is_empty(),
        })
    } else {
        let report = regenerate_tables(global.jobs)?;
        let missing: Vec<String> = report.failures().iter().map(|z| z.to_string()).collect();
        Ok(Rendered {
            csv: csv_of(|buf| Ok(report.write_csv(buf)?))?,
            json: report.to_json(),
            md: report.to_markdown(),
            text: (!missing.is_empty()).then(|| format!("missing: {}", missing.join(" "))),
            summary: report.summary(),
            flagged: !report.failures().is_empty() || !report.invalid().is_empty(),
        })
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Sieve { limit } => sieve(g, limit),
        Command::Decompose {
            z,
            primes,
            max_terms,
            strict_norm,
            no_single_term,
        } => decompose(z, primes, max_terms, strict_norm, no_single_term),
        Command::SolveThm1 { a, b } => {
            let t = table(g, a + b)?;
            let s = solve_theorem1(&t, a, b)?;
            let [p, q, r, l] = s.primes;
            let summary = format!("{a}+{b} = {p}+{q}+{r}+{l}, case {:?}", s.case).to_lowercase();
            Ok(matrix_rendered(&s.matrix, summary))
        }
        Command::SolveThm2 { a, b, kmax } => {
            let t = table(g, a + b)?;
            let m = solve_theorem2(&t, a, b, kmax)?;
            Ok(matrix_rendered(&m, format!("({a}, {b}): {} columns", m.k)))
        }
        Command::SolveConj1 { a, b, kmax } => match solve_conjecture1(a, b, kmax)? {
            Some(m) => Ok(matrix_rendered(&m, format!("({a}, {b}): {} columns", m.k))),
            None => Ok(Rendered {
                csv: "x1,x2,target\n".into(),
                json: "null".into(),
                md: md_table(&["x1", "x2", "target"], &[]),
                text: None,
                summary: format!("({a}, {b}): no solution with at most {kmax} columns"),
                flagged: true,
            }),
        },
        Command::Scan {
            targets,
            re,
            im,
            primes,
            max_terms,
            strict_norm,
            no_single_term,
            min_max_component,
            line,
        } => scan(
            g,
            targets,
            re,
            im,
            primes,
            max_terms,
            strict_norm,
            no_single_term,
            min_max_component,
            line,
        ),
        Command::Obstruction { bound, norm_limit } => obstruction(bound, norm_limit),
        Command::Hypotheses { index, upper } => hypotheses(g, index, upper),
        Command::Thm130 { n, c0 } => thm130(g, n, c0),
        Command::Tables { validate, .. } => tables(g, validate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let output = cli.global.output.clone();
    let rendered = match run(cli) {
        Ok(r) => r,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let body = |f: Format| match f {
        Format::Csv => &rendered.csv,
        Format::Json => &rendered.json,
        Format::Md => &rendered.md,
    };
    let mut summary_to_stderr = false;
    match (&output, format) {
        (Some(path), f) => {
            if let Err(e) = fs::write(path, body(f.unwrap_or(Format::Csv))) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        (None, Some(f)) => {
            print!("{}", body(f));
            if !body(f).ends_with('\n') {
                println!();
            }
            summary_to_stderr = true;
        }
        (None, None) => {
            if let Some(text) = &rendered.text {
                println!("{text}");
            }
        }
    }
    if summary_to_stderr {
        eprintln!("{}", rendered.summary);
    } else {
        println!("{}", rendered.summary);
    }
    if rendered.flagged {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
