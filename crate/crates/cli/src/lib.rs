//! Batch driver behind the `qecmarkov` binary.
//!
//! Every command writes its artifacts under an output prefix plus a
//! `<prefix>.manifest.json` describing the run. Files are written to a
//! temporary sibling and renamed into place.
//!
//! File formats:
//!
//! * decay CSV: `# code=<name>,p=<p>` then `m,q_m,eps_m,abs_delta_eps`, one
//!   row per round starting at `m = 0`; undefined values are empty fields.
//! * transition-matrix CSV: `to\from` header followed by the state labels,
//!   one row per target state. Eigenvalues go to `<prefix>_p<p>_eigenvalues.csv`
//!   as `index,re,im,modulus`.
//! * encoding-unitary CSV: `logical,syndrome,encoded_state`, ordered by
//!   logical value then syndrome; states are written as `c|bits>` sums.
//! * composability CSV: `case,p,seed,distance,violated`.
//! * leading-order CSV: `p,measured,predicted,ratio`.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use qecmarkov::channels::{self, CodeOperators, CPTP_TOLERANCE};
use qecmarkov::experiments::{self, COMPOSABILITY_THRESHOLD};
use qecmarkov::linalg::format_float;
use qecmarkov::markov;
use qecmarkov::{builtin_five_qubit, builtin_rep3, parse_code_file, StabilizerCode, Syndrome};
use serde_json::json;

pub mod svg;

/// Largest accepted `--rounds`.
pub const MAX_ROUNDS: usize = 100_000;

/// Environment variable holding the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QECMARKOV_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Command {
    Decay,
    Composability,
    #[value(name = "verify-theorem1")]
    VerifyTheorem1,
    TransitionMatrix,
    EncodingUnitary,
    CubeGraph,
    LeadingOrder,
}

impl Command {
    fn supported(self) -> &'static [Format] {
        use Format::*;
        match self {
            Command::Decay => &[Csv, Json, Svg],
            Command::Composability => &[Csv, Json],
            Command::VerifyTheorem1 => &[Json],
            Command::TransitionMatrix => &[Csv, Json],
            Command::EncodingUnitary => &[Csv, Json],
            Command::CubeGraph => &[Json, Dot],
            Command::LeadingOrder => &[Csv, Json],
        }
    }

    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Svg => "svg",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CodeChoice {
    Rep3,
    FiveQubit,
    File(PathBuf),
}

impl CodeChoice {
    fn parse(s: &str) -> Self {
        match s {
            "rep3" => CodeChoice::Rep3,
            "five-qubit" => CodeChoice::FiveQubit,
            path => CodeChoice::File(PathBuf::from(path)),
        }
    }

    pub fn load(&self) -> Result<StabilizerCode, CliError> {
        match self {
            CodeChoice::Rep3 => Ok(builtin_rep3()),
            CodeChoice::FiveQubit => Ok(builtin_five_qubit()),
            CodeChoice::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::config(format!("cannot read code file {}: {e}", path.display())))?;
                Ok(parse_code_file(&text)?)
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qecmarkov", version, about = "Logical channels of repeated noisy error correction")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// `rep3`, `five-qubit` or a path to a code file.
    #[arg(long, default_value = "rep3")]
    pub code: String,
    /// Readout flip probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 60)]
    pub rounds: usize,
    /// Output prefix, relative to the output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = ".")]
    pub output_dir: PathBuf,
    /// Subset of csv,json,dot,svg; defaults to every format the command supports.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub formats: Vec<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub log_y: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub code: CodeChoice,
    pub p: Vec<f64>,
    pub rounds: usize,
    pub output: PathBuf,
    pub formats: BTreeSet<Format>,
    pub seed: u64,
    pub log_y: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Capacity,
    Validation,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Capacity => 3,
            ErrorKind::Validation => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrorKind::Config => "config",
            ErrorKind::Capacity => "capacity",
            ErrorKind::Validation => "validation",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Config, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// One-line JSON suitable for stderr.
    pub fn to_line(&self) -> String {
        json!({
            "error": self.kind.name(),
            "exit_code": self.exit_code(),
            "message": self.message,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.name(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qecmarkov::Error> for CliError {
    fn from(e: qecmarkov::Error) -> Self {
        use qecmarkov::Error as E;
        let kind = match e {
            E::Capacity { .. } => ErrorKind::Capacity,
            E::Parse { .. } | E::Probability(_) | E::Unsupported(_) => ErrorKind::Config,
            _ => ErrorKind::Validation,
        };
        Self { kind, message: e.to_string() }
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.p.is_empty() {
            return Err(CliError::config("at least one p is required"));
        }
        if let Some(p) = cli.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(CliError::config(format!("p = {p} is outside [0, 1]")));
        }
        if cli.rounds < 1 {
            return Err(CliError::config("rounds must be at least 1"));
        }
        if cli.rounds > MAX_ROUNDS {
            return Err(CliError {
                kind: ErrorKind::Capacity,
                message: format!("rounds = {} exceeds the limit {MAX_ROUNDS}", cli.rounds),
            });
        }
        let supported = cli.command.supported();
        let formats: BTreeSet<Format> = if cli.formats.is_empty() {
            supported.iter().copied().collect()
        } else {
            cli.formats.iter().copied().collect()
        };
        if let Some(f) = formats.iter().find(|f| !supported.contains(f)) {
            return Err(CliError::config(format!(
                "{} cannot emit {}",
                cli.command.name(),
                f.ext()
            )));
        }
        let prefix = cli.output.unwrap_or_else(|| PathBuf::from(cli.command.name()));
        Ok(Self {
            command: cli.command,
            code: CodeChoice::parse(&cli.code),
            p: cli.p,
            rounds: cli.rounds,
            output: cli.output_dir.join(prefix),
            formats,
            seed: cli.seed,
            log_y: cli.log_y,
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn path(&self, suffix: &str, ext: &str) -> PathBuf {
        let mut name = self.output.file_name().map(|s| s.to_os_string()).unwrap_or_default();
        name.push(format!("{suffix}.{ext}"));
        self.output.with_file_name(name)
    }
}

fn p_suffix(p: f64) -> String {
    format!("_p{p}")
}

/// Writes `contents` to a temporary file next to `path` and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::config(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

struct Outputs<'a> {
    config: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl Outputs<'_> {
    fn emit(&mut self, suffix: &str, ext: &str, contents: &str) -> Result<(), CliError> {
        let path = self.config.path(suffix, ext);
        write_atomic(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

fn operators(code: &StabilizerCode) -> Result<CodeOperators, CliError> {
    Ok(CodeOperators::new(code)?)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data serialises") + "\n"
}

fn run_decay(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    let ops = operators(code)?;
    let mut records = Vec::new();
    for &p in &cfg.p {
        let rec = experiments::decay_with(&ops, p, cfg.rounds)?;
        if cfg.wants(Format::Csv) {
            out.emit(&p_suffix(p), "csv", &rec.to_csv())?;
        }
        records.push(rec);
    }
    if cfg.wants(Format::Json) {
        let runs: Vec<_> = records
            .iter()
            .map(|r| json!({"p": r.p, "q": r.q, "eps": r.eps, "abs_delta_eps": r.deps}))
            .collect();
        out.emit("", "json", &pretty(&json!({"code": code.name(), "rounds": cfg.rounds, "runs": runs})))?;
    }
    if cfg.wants(Format::Svg) {
        let series = |f: &dyn Fn(&experiments::DecayRecord) -> Vec<(f64, f64)>| {
            records
                .iter()
                .map(|r| svg::Series { label: format!("p={}", r.p), points: f(r) })
                .collect()
        };
        let defined = |v: &[Option<f64>]| -> Vec<(f64, f64)> {
            v.iter().enumerate().skip(1).filter_map(|(m, x)| Some((m as f64, (*x)?))).collect()
        };
        let panels = [
            svg::Panel {
                title: "polarization q_m".into(),
                x_label: "m".into(),
                series: series(&|r| r.q.iter().enumerate().skip(1).map(|(m, &q)| (m as f64, q)).collect()),
            },
            svg::Panel {
                title: "error rate eps_m".into(),
                x_label: "m".into(),
                series: series(&|r| defined(&r.eps)),
            },
            svg::Panel {
                title: "|eps_(m+1) - eps_m|".into(),
                x_label: "m".into(),
                series: series(&|r| defined(&r.deps)),
            },
        ];
        out.emit("", "svg", &svg::render(&panels, cfg.log_y))?;
    }
    Ok(())
}

fn run_composability(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    let ops = operators(code)?;
    let mut rows = Vec::new();
    for &p in &cfg.p {
        let chi = channels::bitflip_confusion(code, p)?;
        let noisy = ops.noisy_recovery(&chi)?;
        let report = experiments::composability_check(&ops, &noisy, &noisy)?;
        rows.push(("noisy-recovery", Some(p), report.distance, report.violated));
    }
    let trial = experiments::sufficiency_trial(&ops, cfg.seed)?;
    for (case, d) in [("random-with-recovery", trial.with_recovery), ("random-without-recovery", trial.without_recovery)] {
        rows.push((case, None, d, d > COMPOSABILITY_THRESHOLD));
    }
    if cfg.wants(Format::Csv) {
        let mut csv = String::from("case,p,seed,distance,violated\n");
        for (case, p, d, v) in &rows {
            let p = p.map(|p| p.to_string()).unwrap_or_default();
            let seed = if p.is_empty() { cfg.seed.to_string() } else { String::new() };
            csv += &format!("{case},{p},{seed},{},{v}\n", format_float(*d));
        }
        out.emit("", "csv", &csv)?;
    }
    if cfg.wants(Format::Json) {
        let cases: Vec<_> = rows
            .iter()
            .map(|(case, p, d, v)| json!({"case": case, "p": p, "distance": d, "violated": v}))
            .collect();
        out.emit(
            "",
            "json",
            &pretty(&json!({"code": code.name(), "seed": cfg.seed, "threshold": COMPOSABILITY_THRESHOLD, "cases": cases})),
        )?;
    }
    Ok(())
}

fn run_theorem1(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    let ops = operators(code)?;
    for &p in &cfg.p {
        let chi = channels::bitflip_confusion(code, p)?;
        let verdict = experiments::verify_theorem1(&ops, &chi)?;
        out.emit(&p_suffix(p), "json", &(verdict.to_json(code, Some(p)) + "\n"))?;
    }
    Ok(())
}

fn run_transition(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    for &p in &cfg.p {
        let chi = channels::bitflip_confusion(code, p)?;
        let noisy = channels::noisy_recovery_map(code, &chi)?;
        let tm = markov::transition_matrix(code, &noisy)?;
        let summary = markov::spectral_summary(&tm);
        let suffix = p_suffix(p);
        if cfg.wants(Format::Csv) {
            let mut csv = format!("to\\from,{}\n", tm.states().join(","));
            for (label, row) in tm.states().iter().zip(tm.matrix().rows()) {
                let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
                csv += &format!("{label},{}\n", cells.join(","));
            }
            out.emit(&suffix, "csv", &csv)?;
            out.emit(&format!("{suffix}_eigenvalues"), "csv", &summary.to_csv())?;
        }
        if cfg.wants(Format::Json) {
            let tm_json: serde_json::Value = serde_json::from_str(&tm.to_json()).expect("valid json");
            out.emit(
                &suffix,
                "json",
                &pretty(&json!({
                    "code": code.name(),
                    "p": p,
                    "states": tm_json["states"],
                    "matrix": tm_json["matrix"],
                    "spectral_radius": summary.spectral_radius,
                    "second_largest_modulus": summary.second_largest_modulus,
                    "subdominant_ratio": summary.subdominant_ratio,
                })),
            )?;
        }
    }
    Ok(())
}

fn coefficient(re: f64, im: f64, first: bool) -> String {
    let clean = |x: f64| {
        let r = (x * 1e12).round() / 1e12;
        if r == 0.0 { 0.0 } else { r }
    };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        let sign = if re < 0.0 { "-" } else if first { "" } else { "+" };
        if re.abs() == 1.0 { sign.to_string() } else { format!("{sign}{}", re.abs()) }
    } else {
        let lead = if first { "" } else { "+" };
        let op = if im < 0.0 { '-' } else { '+' };
        format!("{lead}({re}{op}{}i)", im.abs())
    }
}

/// `c|bits>` sum for a state vector over `n` qubits, qubit 0 leftmost.
pub fn format_state(amplitudes: &[num_complex::Complex64], n: usize) -> String {
    let mut out = String::new();
    for (i, a) in amplitudes.iter().enumerate() {
        if a.norm() < 1e-12 {
            continue;
        }
        out += &coefficient(a.re, a.im, out.is_empty());
        out += &format!("|{:0n$b}>", i);
    }
    if out.is_empty() { "0".into() } else { out }
}

/// Rows `(logical, syndrome, encoded_state)` ordered by logical value then syndrome.
pub fn encoding_table(code: &StabilizerCode) -> Result<Vec<[String; 3]>, CliError> {
    let ops = operators(code)?;
    let u = ops.encoding_unitary();
    let (k, d) = (code.k(), ops.logical_dim());
    let mut rows = Vec::new();
    for l in 0..d {
        for s in Syndrome::all(code.num_syndrome_bits()) {
            let col: Vec<_> = u.column(s.index() * d + l).to_vec();
            let logical = if k == 0 { String::new() } else { format!("{:0k$b}", l) };
            rows.push([logical, s.to_string(), format_state(&col, code.n())]);
        }
    }
    Ok(rows)
}

fn run_encoding(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    let rows = encoding_table(code)?;
    if cfg.wants(Format::Csv) {
        let mut csv = String::from("logical,syndrome,encoded_state\n");
        for r in &rows {
            csv += &format!("{}\n", r.join(","));
        }
        out.emit("", "csv", &csv)?;
    }
    if cfg.wants(Format::Json) {
        let entries: Vec<_> = rows
            .iter()
            .map(|[l, s, e]| json!({"logical": l, "syndrome": s, "encoded_state": e}))
            .collect();
        out.emit("", "json", &pretty(&json!({"code": code.name(), "columns": entries})))?;
    }
    Ok(())
}

fn run_cube_graph(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    for &p in &cfg.p {
        let graph = markov::cube_graph(code, p)?;
        if cfg.wants(Format::Json) {
            out.emit(&p_suffix(p), "json", &(graph.to_json() + "\n"))?;
        }
        if cfg.wants(Format::Dot) {
            out.emit(&p_suffix(p), "dot", &graph.to_dot())?;
        }
    }
    Ok(())
}

fn run_leading_order(cfg: &RunConfig, code: &StabilizerCode, out: &mut Outputs) -> Result<(), CliError> {
    let ops = operators(code)?;
    let rows = experiments::leading_order_report(&ops, &cfg.p)?;
    if cfg.wants(Format::Csv) {
        out.emit("", "csv", &experiments::leading_order_csv(&rows))?;
    }
    if cfg.wants(Format::Json) {
        let (flips, pairs) = experiments::two_round_flip_pairs(code)?;
        let entries: Vec<_> = rows
            .iter()
            .map(|r| json!({"p": r.p, "measured": r.measured, "predicted": r.predicted, "ratio": r.ratio}))
            .collect();
        out.emit(
            "",
            "json",
            &pretty(&json!({"code": code.name(), "flip_pairs": flips, "readout_pairs": pairs, "rows": entries})),
        )?;
    }
    Ok(())
}

/// Runs one command and returns the files written, manifest last.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let code = cfg.code.load()?;
    let mut out = Outputs { config: cfg, files: Vec::new() };
    match cfg.command {
        Command::Decay => run_decay(cfg, &code, &mut out)?,
        Command::Composability => run_composability(cfg, &code, &mut out)?,
        Command::VerifyTheorem1 => run_theorem1(cfg, &code, &mut out)?,
        Command::TransitionMatrix => run_transition(cfg, &code, &mut out)?,
        Command::EncodingUnitary => run_encoding(cfg, &code, &mut out)?,
        Command::CubeGraph => run_cube_graph(cfg, &code, &mut out)?,
        Command::LeadingOrder => run_leading_order(cfg, &code, &mut out)?,
    }
    let names: Vec<String> = out
        .files
        .iter()
        .filter_map(|f| Some(f.file_name()?.to_string_lossy().into_owned()))
        .collect();
    let manifest = json!({
        "command": cfg.command.name(),
        "code": code.name(),
        "code_fingerprint": code.fingerprint(),
        "p": cfg.p,
        "rounds": cfg.rounds,
        "seed": cfg.seed,
        "formats": cfg.formats.iter().map(|f| f.ext()).collect::<Vec<_>>(),
        "log_y": cfg.log_y,
        "tolerances": {
            "cptp": CPTP_TOLERANCE,
            "composability": COMPOSABILITY_THRESHOLD,
        },
        "files": names,
    });
    let path = cfg.path(".manifest", "json");
    write_atomic(&path, &pretty(&manifest))?;
    out.files.push(path);
    Ok(out.files)
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let err = CliError::config(first.trim_start_matches("error: "));
            eprintln!("{}", err.to_line());
            return err.exit_code();
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_line());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn state_strings() {
        let z = C::new(0.0, 0.0);
        assert_eq!(format_state(&[z, C::new(1.0, 0.0), z, z], 2), "|01>");
        assert_eq!(format_state(&[C::new(-1.0, 0.0), z], 1), "-|0>");
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            format_state(&[C::new(h, 0.0), C::new(0.0, -h)], 1),
            "0.707106781187|0>+(0-0.707106781187i)|1>"
        );
        assert_eq!(format_state(&[z, z], 1), "0");
    }

    #[test]
    fn prefix_paths() {
        let cli = Cli::try_parse_from(["qecmarkov", "decay", "--output", "runs/a", "--output-dir", "/tmp/x"]).unwrap();
        let cfg = RunConfig::from_cli(cli).unwrap();
        assert_eq!(cfg.path("_p0.1", "csv"), PathBuf::from("/tmp/x/runs/a_p0.1.csv"));
        assert_eq!(cfg.formats.len(), 3);
    }
}
