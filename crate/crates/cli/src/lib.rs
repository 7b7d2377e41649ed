//! Argument model and dispatch for the `polystrata` binary.
//!
//! [`run`] never prints; it returns the text for standard output, the
//! diagnostics for standard error and the exit code, so the whole surface
//! can be tested in-process.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polystrata::compositions::{
    c_lambda_poset, delta_lambda_complex, face_poset, Composition, CompositionError, NumberPartition,
    MAX_DEGREE,
};
use polystrata::homology::{HomologyError, HomologyResult};
use polystrata::hyperbolic::{
    cross_check, hook_prediction, hyp_homology, order_complex_size, resonance_free_prediction, Backend,
    FreePrediction, HyperbolicError, DEFAULT_CHAIN_BUDGET,
};
use polystrata::iterated::{c_lambda_d_poset, iterated_poset, IteratedError};
use polystrata::permutahedron::{permutahedron_face_poset, PermutahedronError};
use polystrata::polyspace::{affine_normalize, cell_of, stabilize, FactoredPolynomial, MonicPolynomial, PolyError};
use polystrata::poset::{Poset, PosetError};
use polystrata::resonance::ResonanceReport;
use polystrata::strata::{
    closure_poset, complement_cohomology, pol_chain_complex_with, stabilization_report, ParityRule,
    StrataError,
};
use polystrata::verify::{self, VerificationReport, VerifyError, SUITE_CHAIN_BUDGET};

/// Largest ambient degree accepted by the cell-based commands.
pub const MAX_CELL_DEGREE: u32 = 16;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polystrata", version, about = "Strata of real polynomials by root multiplicities")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print only summaries and failures.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of the compactified hyperbolic stratum of type λ.
    Hyp(HypArgs),
    /// Homology of the compactified closure of a stratum in degree n.
    Pol(PolArgs),
    /// Homology of the order complex Δ(C_λ).
    OrderComplex(LambdaArgs),
    /// Homology of the simplicial complex δ_λ.
    Delta(LambdaArgs),
    /// Reduced cohomology of the complement of a stratum closure.
    Complement(ComplementArgs),
    /// Complement cohomology for n, n+2, … side by side.
    Stabilization(StabilizationArgs),
    /// Partition identities among the parts of a composition.
    Resonance(ResonanceArgs),
    /// The cell containing a factored polynomial.
    Cell(CellArgs),
    /// Affine normal form of a monic polynomial.
    Normalize(NormalizeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Export a poset or complex.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Number partition, e.g. 1,1,2 or 1^2,2.
    #[arg(long)]
    pub lambda: String,
    /// Refuse order complexes with more chains than this.
    #[arg(long, default_value_t = DEFAULT_CHAIN_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Args)]
pub struct HypArgs {
    #[arg(long)]
    pub lambda: String,
    /// cells, order-complex, delta or all.
    #[arg(long, default_value = "all")]
    pub backend: String,
    /// The order-complex backend is skipped above this many chains.
    #[arg(long, default_value_t = DEFAULT_CHAIN_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Args)]
pub struct PolArgs {
    #[arg(long)]
    pub lambda: String,
    /// Ambient degree.
    #[arg(long)]
    pub n: u32,
    /// Insertion parity rule; `literal` breaks ∂² = 0 and is for diagnostics.
    #[arg(long, value_enum, default_value_t = Parity::Corrected)]
    pub parity: Parity,
}

#[derive(Debug, Args)]
pub struct ComplementArgs {
    #[arg(long)]
    pub lambda: String,
    /// Ambient degree.
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    Corrected,
    Literal,
}

impl From<Parity> for ParityRule {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Corrected => ParityRule::Corrected,
            Parity::Literal => ParityRule::Literal,
        }
    }
}

#[derive(Debug, Args)]
pub struct StabilizationArgs {
    #[arg(long)]
    pub lambda: String,
    /// Defaults to the weight of λ.
    #[arg(long)]
    pub n_min: Option<u32>,
    #[arg(long)]
    pub n_max: u32,
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    /// Composition; order is kept.
    #[arg(long, alias = "lambda")]
    pub parts: String,
}

#[derive(Debug, Args)]
pub struct CellArgs {
    /// Factored polynomial, e.g. "(x-1)^2 (x-3) (x^2+1)".
    #[arg(long)]
    pub poly: String,
    /// Multiply by (x^2+1)^k to reach this degree first.
    #[arg(long)]
    pub stabilize: Option<u32>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Ascending coefficients ending in 1, or a factored polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// hook, resonance-free, permutahedron-quotient, iterated, machine-table,
    /// d-squared, backends, closure-reduction, oracles, stabilization.
    pub suite: String,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub t_max: Option<u32>,
    #[arg(long)]
    pub max_weight: Option<u32>,
    #[arg(long)]
    pub budget: Option<u128>,
    /// Partitions for the stabilization suite; repeatable.
    #[arg(long)]
    pub lambda: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// clambda, delta, closure-poset, permutahedron or iterated.
    pub object: String,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Keep the top element of C_λ^d.
    #[arg(long)]
    pub include_top: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }
}

/// A failed invocation, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Invalid(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) => m,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

impl From<CompositionError> for Failure {
    fn from(e: CompositionError) -> Self {
        match e {
            CompositionError::Poset(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<StrataError> for Failure {
    fn from(e: StrataError) -> Self {
        match e {
            StrataError::Composition(inner) => inner.into(),
            StrataError::Ambient { .. } | StrataError::FullClosure { .. } | StrataError::Range(..) => {
                Failure::Invalid(e.to_string())
            }
            StrataError::AmbiguousRun { .. } | StrataError::Homology(_) | StrataError::Poset(_) => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

impl From<HyperbolicError> for Failure {
    fn from(e: HyperbolicError) -> Self {
        match e {
            HyperbolicError::Strata(inner) => inner.into(),
            HyperbolicError::Composition(inner) => inner.into(),
            HyperbolicError::Disagreement { .. } => Failure::Internal(e.to_string()),
            HyperbolicError::Hook { .. } | HyperbolicError::Empty | HyperbolicError::UnknownBackend(_) => {
                Failure::Invalid(e.to_string())
            }
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Strata(inner) => inner.into(),
            PolyError::NoConvergence | PolyError::NotMonotone(..) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<PermutahedronError> for Failure {
    fn from(e: PermutahedronError) -> Self {
        match e {
            PermutahedronError::Composition(inner) => inner.into(),
            PermutahedronError::Poset(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<IteratedError> for Failure {
    fn from(e: IteratedError) -> Self {
        match e {
            IteratedError::Composition(inner) => inner.into(),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Range(m) => Failure::Invalid(m),
            VerifyError::Internal(m) => Failure::Internal(m),
        }
    }
}

/// Parses arguments (without the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("polystrata")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Hyp(a) => cmd_hyp(a, cli),
        Command::Pol(a) => cmd_pol(a, cli.format),
        Command::OrderComplex(a) => cmd_order_complex(a, cli.format),
        Command::Delta(a) => cmd_delta(a, cli.format),
        Command::Complement(a) => cmd_complement(a, cli.format),
        Command::Stabilization(a) => cmd_stabilization(a, cli.format),
        Command::Resonance(a) => cmd_resonance(a, cli.format),
        Command::Cell(a) => cmd_cell(a, cli.format),
        Command::Normalize(a) => cmd_normalize(a, cli.format),
        Command::Verify(a) => return cmd_verify(a, cli),
        Command::Export(a) => cmd_export(a, cli.format),
    };
    match result {
        Ok((stdout, stderr)) => Outcome {
            stdout,
            stderr: if cli.quiet { String::new() } else { stderr },
            code: EXIT_OK,
        },
        Err(f) => failure(f),
    }
}

fn failure(f: Failure) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {}\n", f.message()),
        code: f.code(),
    }
}

type CmdResult = Result<(String, String), Failure>;

fn partition(s: &str) -> Result<NumberPartition, Failure> {
    Ok(s.parse::<NumberPartition>()?)
}

fn desk_scale(lambda: &NumberPartition, n: u32) -> Result<(), Failure> {
    if n > MAX_CELL_DEGREE {
        return Err(invalid(format!(
            "degree {n} for {lambda} exceeds the supported maximum of {MAX_CELL_DEGREE}"
        )));
    }
    Ok(())
}

fn nonempty(lambda: &NumberPartition) -> Result<(), Failure> {
    if lambda.is_empty() {
        return Err(invalid("λ must have at least one part"));
    }
    Ok(())
}

fn homology_output(h: &HomologyResult, format: Format, header: &str, extra: Value) -> Result<String, Failure> {
    match format {
        Format::Text => Ok(format!("{header}\n{h}\n")),
        Format::Csv => Ok(h.to_csv()),
        Format::Json => {
            let mut v = h.to_json();
            if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            Ok(format!("{}\n", serde_json::to_string(&v).expect("serializable")))
        }
        Format::Dot => Err(invalid("dot output is only available for exports and stabilization")),
    }
}

fn hook_parameters(lambda: &NumberPartition) -> Option<(u32, u32)> {
    let (&k, rest) = lambda.parts().split_last()?;
    (k >= 2 && rest.iter().all(|&p| p == 1)).then_some((lambda.weight(), k))
}

fn cmd_hyp(a: &HypArgs, cli: &Cli) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    nonempty(&lambda)?;
    desk_scale(&lambda, lambda.weight())?;
    let mut notes = String::new();
    let (h, used, skipped): (HomologyResult, Vec<Backend>, Vec<Backend>) = if a.backend == "all" {
        let c = cross_check(&lambda, Some(a.budget))?;
        let used = c.results.iter().map(|r| r.0).collect();
        (c.homology().clone(), used, c.skipped.clone())
    } else {
        let b: Backend = a.backend.parse()?;
        if b == Backend::OrderComplex && order_complex_size(&lambda)? > a.budget {
            return Err(invalid(format!("Δ(C_λ) for {lambda} exceeds --budget {}", a.budget)));
        }
        (hyp_homology(&lambda, b)?, vec![b], vec![])
    };
    for b in &skipped {
        let _ = writeln!(notes, "note: {b} skipped, Δ(C_λ) has more than {} chains", a.budget);
    }
    let mut predictions = Vec::new();
    if let Some((n, k)) = hook_parameters(&lambda) {
        let p = hook_prediction(n, k)?;
        predictions.push(json!({
            "source": "hook",
            "case": p.case,
            "shape": p.stratum.to_string(),
            "matches": p.stratum.matches(&h),
        }));
    }
    match resonance_free_prediction(&lambda) {
        FreePrediction::NoPrediction(id) => predictions.push(json!({
            "source": "resonance-free",
            "case": format!("not free: {}", id.in_values(lambda.parts())),
            "shape": Value::Null,
            "matches": Value::Null,
        })),
        p => {
            let shape = p.shape().expect("free");
            predictions.push(json!({
                "source": "resonance-free",
                "case": if lambda.has_repeated_part() { "repeated part" } else { "distinct parts" },
                "shape": shape.to_string(),
                "matches": shape.matches(&h),
            }));
        }
    }
    let names = |bs: &[Backend]| bs.iter().map(|b| b.name()).collect::<Vec<_>>();
    let out = if cli.format == Format::Text {
        let mut s = format!(
            "λ = {}, n = {}, backends: {}\n{h}\n",
            lambda.exponential(),
            lambda.weight(),
            names(&used).join(", ")
        );
        for p in &predictions {
            let verdict = match p["matches"].as_bool() {
                Some(true) => "matches",
                Some(false) => "DOES NOT MATCH",
                None => "no prediction",
            };
            let shape = p["shape"].as_str().unwrap_or("-");
            let _ = writeln!(s, "prediction ({}, {}): {shape}, {verdict}", p["source"].as_str().unwrap_or(""), p["case"].as_str().unwrap_or(""));
        }
        s
    } else {
        homology_output(
            &h,
            cli.format,
            "",
            json!({
                "lambda": lambda.to_string(),
                "n": lambda.weight(),
                "backends": names(&used),
                "skipped": names(&skipped),
                "predictions": predictions,
            }),
        )?
    };
    Ok((out, notes))
}

fn cmd_pol(a: &PolArgs, format: Format) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    desk_scale(&lambda, a.n)?;
    let h = pol_chain_complex_with(&lambda, a.n, a.parity.into())?.complex.homology(true)?;
    let header = format!("closure of {} in degree {}, one-point compactified", lambda.exponential(), a.n);
    let out = homology_output(&h, format, &header, json!({"lambda": lambda.to_string(), "n": a.n, "backends": ["cells"]}))?;
    Ok((out, String::new()))
}

fn cmd_order_complex(a: &LambdaArgs, format: Format) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    nonempty(&lambda)?;
    desk_scale(&lambda, lambda.weight())?;
    let c = c_lambda_poset(&lambda)?;
    let chains = c.poset.chain_count();
    if chains > a.budget {
        return Err(invalid(format!("Δ(C_λ) for {lambda} has {chains} chains, over --budget {}", a.budget)));
    }
    let h = c.poset.order_complex().homology();
    let header = format!("Δ(C_{}): {} elements, {chains} chains", lambda.exponential(), c.poset.len());
    let out = homology_output(
        &h,
        format,
        &header,
        json!({"lambda": lambda.to_string(), "elements": c.poset.len(), "chains": chains.to_string(), "backends": ["order-complex"]}),
    )?;
    Ok((out, String::new()))
}

fn cmd_delta(a: &LambdaArgs, format: Format) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    nonempty(&lambda)?;
    desk_scale(&lambda, lambda.weight())?;
    let d = delta_lambda_complex(&lambda)?;
    let h = d.complex.homology();
    let header = format!("δ_{}: {} faces", lambda.exponential(), d.complex.face_count());
    let out = homology_output(
        &h,
        format,
        &header,
        json!({"lambda": lambda.to_string(), "faces": d.complex.face_count(), "backends": ["delta"]}),
    )?;
    Ok((out, String::new()))
}

fn cmd_complement(a: &ComplementArgs, format: Format) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    desk_scale(&lambda, a.n)?;
    let c = complement_cohomology(&lambda, a.n)?;
    let header = format!(
        "reduced cohomology of the complement of the closure of {} in degree {}",
        lambda.exponential(),
        a.n
    );
    let out = homology_output(&c.groups, format, &header, json!({"lambda": lambda.to_string(), "n": a.n, "cohomology": true}))?;
    Ok((out, String::new()))
}

fn cmd_stabilization(a: &StabilizationArgs, format: Format) -> CmdResult {
    let lambda = partition(&a.lambda)?;
    desk_scale(&lambda, a.n_max)?;
    let n_min = a.n_min.unwrap_or(lambda.weight());
    let r = stabilization_report(&lambda, n_min, a.n_max)?;
    let out = match format {
        Format::Csv => r.to_csv(),
        Format::Dot => r.closure.poset.to_dot(&format!("C_{},<={}", lambda, a.n_max)),
        Format::Json => {
            let v = json!({
                "lambda": lambda.to_string(),
                "columns": r.columns.iter().map(|c| json!({"n": c.n, "cohomology": c.groups.to_json()})).collect::<Vec<_>>(),
                "differences": r.differences.iter().map(|&(a, b, q)| json!({"from": a, "to": b, "lowest_differing_degree": q})).collect::<Vec<_>>(),
                "closure": r.closure.poset.to_json(),
            });
            format!("{}\n", serde_json::to_string(&v).expect("serializable"))
        }
        Format::Text => {
            let mut s = format!("complement cohomology for {}\n", lambda.exponential());
            for c in &r.columns {
                let _ = writeln!(s, "n = {}: {}", c.n, verify::compact(&c.groups));
            }
            for &(a, b, q) in &r.differences {
                match q {
                    Some(q) => {
                        let _ = writeln!(s, "{a} → {b}: first difference in degree {q}");
                    }
                    None => {
                        let _ = writeln!(s, "{a} → {b}: equal");
                    }
                }
            }
            s
        }
    };
    Ok((out, String::new()))
}

fn cmd_resonance(a: &ResonanceArgs, format: Format) -> CmdResult {
    let comp: Composition = a.parts.parse()?;
    if comp.len() > 12 {
        return Err(invalid("resonance brute force supports at most 12 parts"));
    }
    let r = ResonanceReport::new(comp.parts());
    let out = match format {
        Format::Json => format!("{}\n", serde_json::to_string(&r.to_json()).expect("serializable")),
        Format::Text => {
            let mut s = format!("{comp}: {}\n", if r.is_free() { "free of resonances" } else { "not free of resonances" });
            for id in &r.primitive {
                let _ = writeln!(s, "primitive  {}  ({})", id.describe(), id.in_values(comp.parts()));
            }
            for id in &r.hyperplanes {
                let _ = writeln!(s, "hyperplane {}  ({})", id.describe(), id.in_values(comp.parts()));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("kind,left,right,values\n");
            for (kind, ids) in [("primitive", &r.primitive), ("hyperplane", &r.hyperplanes)] {
                for id in ids {
                    let side = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                    let _ = writeln!(s, "{kind},{},{},{}", side(&id.left), side(&id.right), id.in_values(comp.parts()));
                }
            }
            s
        }
        Format::Dot => return Err(invalid("dot output is not available for resonance")),
    };
    Ok((out, String::new()))
}

fn cmd_cell(a: &CellArgs, format: Format) -> CmdResult {
    let mut f: FactoredPolynomial = a.poly.parse()?;
    if let Some(m) = a.stabilize {
        f = stabilize(&f, m)?;
    }
    let c = cell_of(&f)?;
    let out = match format {
        Format::Json => format!(
            "{}\n",
            json!({
                "polynomial": f.to_string(),
                "composition": c.composition().to_string(),
                "n": c.ambient(),
                "dimension": c.dimension(),
            })
        ),
        Format::Text => format!(
            "{f}\ncell {} in degree {}, dimension {}\n",
            c.composition(),
            c.ambient(),
            c.dimension()
        ),
        Format::Csv => format!(
            "composition,n,dimension\n\"{}\",{},{}\n",
            c.composition(),
            c.ambient(),
            c.dimension()
        ),
        Format::Dot => return Err(invalid("dot output is not available for cell")),
    };
    Ok((out, String::new()))
}

fn cmd_normalize(a: &NormalizeArgs, format: Format) -> CmdResult {
    let f: MonicPolynomial = if a.poly.contains('x') {
        a.poly.parse::<FactoredPolynomial>()?.to_monic()?
    } else {
        a.poly.parse()?
    };
    let r = affine_normalize(&f)?;
    let out = match format {
        Format::Json => format!(
            "{}\n",
            json!({"coefficients": r.g.coeffs(), "rho": r.rho, "gamma": r.gamma})
        ),
        Format::Text => format!("{}\nrho = {}, gamma = {}\n", r.g, r.rho, r.gamma),
        Format::Csv => {
            let c: Vec<String> = r.g.coeffs().iter().map(f64::to_string).collect();
            format!("rho,gamma,coefficients\n{},{},{}\n", r.rho, r.gamma, c.join(" "))
        }
        Format::Dot => return Err(invalid("dot output is not available for normalize")),
    };
    Ok((out, String::new()))
}

/// `a..b`, `a..=b` or a single number.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, Failure> {
    let bad = || invalid(format!("cannot parse range {s:?}; expected a..b or a number"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn range_or(s: &Option<String>, default: RangeInclusive<u32>) -> Result<RangeInclusive<u32>, Failure> {
    s.as_deref().map_or(Ok(default), parse_range)
}

fn run_suite(a: &VerifyArgs) -> Result<VerificationReport, Failure> {
    let name = verify::suite_name(&a.suite).ok_or_else(|| {
        let names: Vec<&str> = verify::SUITES.iter().map(|s| s.0).collect();
        invalid(format!("unknown suite {:?}; expected one of {}", a.suite, names.join(", ")))
    })?;
    let budget = a.budget.unwrap_or(SUITE_CHAIN_BUDGET);
    Ok(match name {
        "hook" => verify::hook_suite(range_or(&a.n, 2..=12)?, range_or(&a.k, 2..=12)?, budget)?,
        "resonance-free" => verify::resonance_free_suite(a.max_weight.unwrap_or(12), budget)?,
        "permutahedron-quotient" => {
            verify::permutahedron_quotient_suite(a.t_max.unwrap_or(5), a.max_weight.unwrap_or(16))?
        }
        "iterated" => verify::iterated_suite(range_or(&a.n, 2..=6)?, range_or(&a.d, 1..=3)?)?,
        "machine-table" => verify::machine_table_suite()?,
        "d-squared" => verify::d_squared_suite(range_or(&a.l, 1..=6)?, a.n_max.unwrap_or(10))?,
        "backends" => verify::backends_suite(a.n_max.unwrap_or(7))?,
        "closure-reduction" => verify::closure_reduction_suite(a.n_max.unwrap_or(7))?,
        "oracles" => verify::oracles_suite()?,
        "stabilization" => {
            let lambdas = if a.lambda.is_empty() {
                vec!["2".to_string(), "3".to_string(), "2,1".to_string()]
            } else {
                a.lambda.clone()
            };
            let lambdas = lambdas.iter().map(|s| partition(s)).collect::<Result<Vec<_>, _>>()?;
            verify::stabilization_suite(&lambdas, a.n_max.unwrap_or(10))?
        }
        _ => unreachable!("suite_name returns known names"),
    })
}

fn cmd_verify(a: &VerifyArgs, cli: &Cli) -> Outcome {
    let report = match run_suite(a) {
        Ok(r) => r,
        Err(f) => return failure(f),
    };
    let stdout = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string(&report.to_json()).expect("serializable")),
        Format::Csv => report.to_csv(),
        Format::Dot => return failure(invalid("dot output is not available for verify")),
        Format::Text if cli.quiet => {
            let mut s = String::new();
            for c in report.failures() {
                let _ = writeln!(s, "FAIL  {}: expected {}, computed {}", c.input, c.expected, c.computed);
            }
            s + &report.summary() + "\n"
        }
        Format::Text => format!("{report}\n"),
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if report.passed() { EXIT_OK } else { EXIT_MISMATCH },
    }
}

fn poset_output(p: &Poset, name: &str, format: Format, extra: Value) -> Result<String, Failure> {
    match format {
        Format::Text | Format::Dot => Ok(p.to_dot(name)),
        Format::Json => {
            let mut v = serde_json::to_value(p.to_json()).expect("serializable");
            if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            Ok(format!("{}\n", serde_json::to_string(&v).expect("serializable")))
        }
        Format::Csv => Err(invalid("exports are available as dot or json")),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, object: &str) -> Result<T, Failure> {
    v.ok_or_else(|| invalid(format!("export {object} needs --{flag}")))
}

fn cmd_export(a: &ExportArgs, format: Format) -> CmdResult {
    let lambda = || -> Result<NumberPartition, Failure> {
        partition(a.lambda.as_deref().ok_or_else(|| invalid(format!("export {} needs --lambda", a.object)))?)
    };
    let out = match a.object.as_str() {
        "clambda" => {
            let l = lambda()?;
            nonempty(&l)?;
            desk_scale(&l, l.weight())?;
            let c = c_lambda_poset(&l)?;
            poset_output(&c.poset, &format!("C_{l}"), format, json!({"lambda": l.to_string()}))?
        }
        "delta" => {
            let l = lambda()?;
            desk_scale(&l, l.weight())?;
            let d = delta_lambda_complex(&l)?;
            match format {
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "lambda": l.to_string(),
                        "vertices": d.complex.vertex_labels(),
                        "facets": d.complex.facets(),
                    })
                ),
                _ => {
                    let (p, _) = face_poset(&d.complex);
                    poset_output(&p, &format!("delta_{l}"), format, Value::Null)?
                }
            }
        }
        "closure-poset" => {
            let l = lambda()?;
            let n = need(a.n, "n", "closure-poset")?;
            if n > MAX_DEGREE {
                return Err(invalid(format!("degree {n} exceeds {MAX_DEGREE}")));
            }
            let c = closure_poset(&l, n)?;
            poset_output(&c.poset, &format!("C_{l},<={n}"), format, json!({"lambda": l.to_string(), "n": n}))?
        }
        "permutahedron" => {
            let t = need(a.t, "t", "permutahedron")?;
            if t > 6 {
                return Err(invalid("permutahedron export supports t ≤ 6"));
            }
            let f = permutahedron_face_poset(t)?;
            poset_output(&f.poset, &format!("L_{t}"), format, json!({"t": t}))?
        }
        "iterated" => {
            let d = need(a.d, "d", "iterated")?;
            if d > 4 {
                return Err(invalid("iterated export supports d ≤ 4"));
            }
            match &a.lambda {
                Some(_) => {
                    let l = lambda()?;
                    desk_scale(&l, l.weight())?;
                    let c = c_lambda_d_poset(&l, d, a.include_top)?;
                    poset_output(
                        &c.poset,
                        &format!("C_{l}^{d}"),
                        format,
                        json!({"lambda": l.to_string(), "d": d, "include_top": a.include_top}),
                    )?
                }
                None => {
                    let n = need(a.n, "n", "iterated")?;
                    if n > 8 {
                        return Err(invalid("iterated export supports n ≤ 8"));
                    }
                    let p = iterated_poset(n, d)?;
                    poset_output(&p.poset, &format!("C_{n}^{d}"), format, json!({"n": n, "d": d}))?
                }
            }
        }
        other => {
            return Err(invalid(format!(
                "unknown export {other:?}; expected clambda, delta, closure-poset, permutahedron or iterated"
            )))
        }
    };
    Ok((out, String::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..12").unwrap(), 3..=12);
        assert_eq!(parse_range("3..=12").unwrap(), 3..=12);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn hooks_are_recognized() {
        assert_eq!(hook_parameters(&"1,1,3".parse().unwrap()), Some((5, 3)));
        assert_eq!(hook_parameters(&"4".parse().unwrap()), Some((4, 4)));
        assert_eq!(hook_parameters(&"1,1".parse().unwrap()), None);
        assert_eq!(hook_parameters(&"2,2".parse().unwrap()), None);
    }

    #[test]
    fn failures_classify() {
        assert_eq!(Failure::from(CompositionError::ZeroPart).code(), EXIT_INVALID);
        assert_eq!(Failure::from(StrataError::Range(1, 0)).code(), EXIT_INVALID);
        let d = HyperbolicError::Disagreement {
            lambda: "(1)".into(),
            tables: String::new(),
        };
        assert_eq!(Failure::from(d).code(), EXIT_INTERNAL);
        assert_eq!(Failure::from(PolyError::NoConvergence).code(), EXIT_INTERNAL);
    }
}
