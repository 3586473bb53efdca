//! Command-line front end: parse period matrices or precomputed bases, run
//! the lattice pipeline and emit symbolic forms, bases, search tables and
//! classification reports in stable text/JSON/CSV formats.
//!
//! Exit codes: 0 success, 1 domain errors (bad matrix, bad ranges),
//! 2 I/O and parse errors.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nsdivisor::criteria::{self, ClassificationReport, CriterionOutcome, Verdict};
use nsdivisor::intersection::{coefficient_symbols, q_symbolic, PolarizedContext};
use nsdivisor::nslattice::{
    LatticeError, NsBasisJson, PeriodMatrix, PeriodMatrixJson, PolarizedNS,
};
use nsdivisor::search::{enumerate, DivisorRecord, SearchQuery};

#[derive(Parser)]
#[command(
    name = "nsdivisor",
    about = "Exact Neron-Severi lattices and abelian-divisor search on ppavs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the symbolic form q_r in the coefficients a_ij.
    Qform(QformArgs),
    /// Compute the Neron-Severi basis and polarized quotient from a period matrix.
    Ns(NsArgs),
    /// Enumerate primitive abelian-divisor classes in a coordinate box.
    Search(SearchArgs),
    /// Run the classification criteria (splittings, Jacobian tests, covers).
    Classify(ClassifyArgs),
    /// Print the divisor table: class, divisor degree, complement degree.
    Table(TableArgs),
}

#[derive(Args)]
struct QformArgs {
    /// Dimension n of the abelian variety.
    #[arg(long)]
    dim: usize,
    /// Which form q_r to expand (2 <= r <= n).
    #[arg(long)]
    r: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct NsArgs {
    /// Path to a period-matrix JSON document, or the document itself.
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    /// Path to a period-matrix or precomputed-basis JSON document, or inline JSON.
    #[arg(long)]
    input: String,
    /// Coordinate box bound B: scan [-B, B]^rank.
    #[arg(long)]
    bound: i64,
    /// Largest divisor degree to keep.
    #[arg(long)]
    max_degree: u64,
    /// Explicit comma-separated degree targets (kept in addition to the cap).
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    input: String,
    /// Coordinate box bound for every criterion.
    #[arg(long)]
    bound: i64,
    /// Also list minimal elliptic covers, asserting the context is a genus-g Jacobian.
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    bound: i64,
    #[arg(long)]
    max_degree: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Failure carrying the exit status it maps to.
enum CliError {
    /// Bad input semantics: exit 1.
    Domain(String),
    /// I/O or parse failure: exit 2.
    Parse(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Parse(m) => m,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match &e {
            LatticeError::Document(_) | LatticeError::Entry { .. } | LatticeError::Scalar(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Qform(a) => cmd_qform(a),
        Command::Ns(a) => cmd_ns(a),
        Command::Search(a) => cmd_search(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Table(a) => cmd_table(a),
    }
}

/// A parsed input document: either a period matrix (the lattice is computed)
/// or a precomputed basis (re-ingested as-is).
enum InputDoc {
    Tau(PeriodMatrix),
    Basis(PolarizedNS),
}

fn read_input(spec: &str) -> Result<InputDoc, CliError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| CliError::Parse(format!("cannot read {spec}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Parse("input document must be a JSON object".into()))?;
    if obj.contains_key("tau") {
        let doc: PeriodMatrixJson = serde_json::from_value(value)
            .map_err(|e| CliError::Parse(format!("invalid period-matrix document: {e}")))?;
        Ok(InputDoc::Tau(PeriodMatrix::from_document(&doc)?))
    } else if obj.contains_key("quotient_basis") {
        let doc: NsBasisJson = serde_json::from_value(value)
            .map_err(|e| CliError::Parse(format!("invalid basis document: {e}")))?;
        Ok(InputDoc::Basis(PolarizedNS::from_document(&doc)?))
    } else {
        Err(CliError::Parse(
            "input document must contain either \"tau\" or \"quotient_basis\"".into(),
        ))
    }
}

fn polarized(doc: InputDoc) -> Result<PolarizedNS, CliError> {
    match doc {
        InputDoc::Tau(tau) => Ok(PolarizedNS::from_period_matrix(&tau)?),
        InputDoc::Basis(pns) => Ok(pns),
    }
}

fn cmd_qform(a: QformArgs) -> Result<(), CliError> {
    if a.dim < 1 {
        return Err(CliError::Domain("--dim must be at least 1".into()));
    }
    let q = q_symbolic(a.dim, a.r).map_err(|e| CliError::Domain(e.to_string()))?;
    match a.format {
        Format::Text => println!("{q}"),
        Format::Json => {
            let table = coefficient_symbols(a.dim);
            let doc = serde_json::json!({
                "n": a.dim,
                "r": a.r,
                "variables": table.names(),
                "polynomial": q.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serialize"));
        }
        Format::Csv => {
            return Err(CliError::Domain("qform has no csv format".into()));
        }
    }
    Ok(())
}

fn vector_text(v: &[i64]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

fn cmd_ns(a: NsArgs) -> Result<(), CliError> {
    let pns = polarized(read_input(&a.input)?)?;
    match a.format {
        Format::Text => {
            println!("n = {}", pns.n());
            println!("ambient rank = {}", pns.ambient_rank());
            println!("NS rank = {}", pns.rank());
            println!("quotient rank = {}", pns.quotient_rank());
            println!("theta = {}", vector_text(pns.theta_coords()));
            for (i, row) in pns.quotient_basis().iter().enumerate() {
                println!("q{} = {}", i + 1, vector_text(row));
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&pns.to_document()).expect("serialize")
            );
        }
        Format::Csv => return Err(CliError::Domain("ns has no csv format".into())),
    }
    Ok(())
}

fn build_query(bound: i64, max_degree: u64, targets: Option<Vec<u64>>) -> Result<SearchQuery, CliError> {
    if bound < 1 {
        return Err(CliError::Domain("--bound must be at least 1".into()));
    }
    if max_degree < 1 {
        return Err(CliError::Domain("--max-degree must be at least 1".into()));
    }
    if let Some(t) = &targets {
        if t.iter().any(|&d| d == 0) {
            return Err(CliError::Domain("--targets entries must be positive".into()));
        }
    }
    let mut q = SearchQuery::new(bound, max_degree);
    if let Some(t) = targets {
        q = q.with_targets(t);
    }
    Ok(q)
}

fn run_search(input: &str, query: &SearchQuery) -> Result<(PolarizedNS, Vec<DivisorRecord>), CliError> {
    let pns = polarized(read_input(input)?)?;
    let ctx = PolarizedContext::standard(pns.n());
    let records = enumerate(&ctx, &pns, query);
    Ok((pns, records))
}

fn search_header(pns: &PolarizedNS, out: &mut String) {
    let _ = writeln!(out, "# n = {}, quotient rank = {}", pns.n(), pns.quotient_rank());
    let _ = writeln!(
        out,
        "# class coordinates are relative to the quotient basis rows:"
    );
    for (i, row) in pns.quotient_basis().iter().enumerate() {
        let _ = writeln!(out, "#   q{} = {}", i + 1, vector_text(row));
    }
}

fn cmd_search(a: SearchArgs) -> Result<(), CliError> {
    let query = build_query(a.bound, a.max_degree, a.targets.clone())?;
    let (pns, records) = run_search(&a.input, &query)?;
    let n = pns.n();
    match a.format {
        Format::Text => {
            let mut out = String::new();
            search_header(&pns, &mut out);
            let _ = writeln!(
                out,
                "{:<24} {:>10} {:>12} {}",
                "class",
                "degree",
                "complement",
                (2..=n).map(|r| format!("{:>12}", format!("q_{r}"))).collect::<String>()
            );
            for rec in &records {
                let comp = rec
                    .complement_degree
                    .map(|k| k.to_string())
                    .unwrap_or_else(|| "-".into());
                let qs: String = rec
                    .q_values
                    .iter()
                    .map(|q| format!("{q:>12}"))
                    .collect();
                let _ = writeln!(
                    out,
                    "{:<24} {:>10} {:>12} {}",
                    vector_text(&rec.quotient_coords),
                    rec.divisor_degree,
                    comp,
                    qs
                );
            }
            let _ = write!(out, "# {} classes", records.len());
            println!("{out}");
        }
        Format::Json => {
            for rec in &records {
                println!("{}", serde_json::to_string(rec).expect("serialize"));
            }
        }
        Format::Csv => {
            let mut header = String::from("coords,divisor_degree,complement_degree");
            for r in 2..=n {
                let _ = write!(header, ",q_{r}");
            }
            println!("{header}");
            for rec in &records {
                let coords: Vec<String> =
                    rec.quotient_coords.iter().map(|x| x.to_string()).collect();
                let comp = rec
                    .complement_degree
                    .map(|k| k.to_string())
                    .unwrap_or_default();
                let mut line = format!(
                    "\"{}\",{},{}",
                    coords.join(","),
                    rec.divisor_degree,
                    comp
                );
                for q in &rec.q_values {
                    let _ = write!(line, ",{q}");
                }
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn cmd_table(a: TableArgs) -> Result<(), CliError> {
    let query = build_query(a.bound, a.max_degree, None)?;
    let (pns, records) = run_search(&a.input, &query)?;
    let n = pns.n();
    let mut out = String::new();
    search_header(&pns, &mut out);
    let _ = writeln!(
        out,
        "{:<24} {:>14} {:>12}",
        "divisor class",
        format!("(Z.Theta^{})", n - 1),
        "(E.Theta)"
    );
    for rec in &records {
        let comp = rec
            .complement_degree
            .map(|k| k.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<24} {:>14} {:>12}",
            vector_text(&rec.quotient_coords),
            rec.divisor_degree,
            comp
        );
    }
    let _ = write!(out, "# {} classes", records.len());
    println!("{out}");
    Ok(())
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::HoldsUpToBound => "holds-up-to-bound",
        Verdict::Fails => "fails",
        Verdict::FailsUpToBound => "fails-up-to-bound",
    }
}

fn outcome_lines(o: &CriterionOutcome, out: &mut String) {
    let _ = writeln!(
        out,
        "{:<34} {:<18} (bound {})",
        o.criterion,
        verdict_text(o.verdict),
        o.bound
    );
    for w in &o.witnesses {
        let _ = writeln!(
            out,
            "    witness {}  q = {:?}{}",
            vector_text(&w.quotient_coords),
            w.q_values,
            if w.primitive { "" } else { "  (imprimitive)" }
        );
    }
}

fn cmd_classify(a: ClassifyArgs) -> Result<(), CliError> {
    if a.bound < 1 {
        return Err(CliError::Domain("--bound must be at least 1".into()));
    }
    let pns = polarized(read_input(&a.input)?)?;
    let ctx = PolarizedContext::standard(pns.n());

    let mut verdicts = Vec::new();
    let split = criteria::splits_off_elliptic_factor(&ctx, &pns, a.bound);
    verdicts.push(CriterionOutcome {
        criterion: "splits-off-elliptic-factor".into(),
        verdict: if split.is_some() { Verdict::Holds } else { Verdict::FailsUpToBound },
        witnesses: split.into_iter().collect(),
        bound: a.bound,
    });
    if pns.n() == 3 {
        let report = criteria::jacobian_split_report_dim3(&ctx, &pns, a.bound)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        verdicts.extend(report.verdicts);
    }
    let report = ClassificationReport {
        dimension: pns.n(),
        quotient_rank: pns.quotient_rank(),
        verdicts,
    };
    let covers = match a.genus {
        Some(g) => Some(
            criteria::elliptic_covers(&ctx, &pns, g, a.bound)
                .map_err(|e| CliError::Domain(e.to_string()))?,
        ),
        None => None,
    };

    match a.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "n = {}, quotient rank = {}",
                report.dimension, report.quotient_rank
            );
            for o in &report.verdicts {
                outcome_lines(o, &mut out);
            }
            if let Some(covers) = &covers {
                let _ = writeln!(out, "minimal elliptic covers (degree k: count):");
                let mut counts: Vec<(u64, usize)> = Vec::new();
                for (k, _) in covers {
                    match counts.last_mut() {
                        Some((kk, c)) if kk == k => *c += 1,
                        _ => counts.push((*k, 1)),
                    }
                }
                for (k, c) in counts {
                    let _ = writeln!(out, "    k = {k}: {c}");
                }
                for (k, rec) in covers {
                    let _ = writeln!(
                        out,
                        "    k = {k}  class {}  degree {}",
                        vector_text(&rec.quotient_coords),
                        rec.divisor_degree
                    );
                }
            }
            print!("{out}");
        }
        Format::Json => {
            let mut text = String::from("{\"report\":");
            text.push_str(&serde_json::to_string(&report).expect("serialize"));
            if let Some(covers) = &covers {
                text.push_str(",\"covers\":");
                text.push_str(&serde_json::to_string(covers).expect("serialize"));
            }
            text.push('}');
            println!("{text}");
        }
        Format::Csv => return Err(CliError::Domain("classify has no csv format".into())),
    }
    Ok(())
}
