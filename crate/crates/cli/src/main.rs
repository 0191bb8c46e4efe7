use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::{Map, Value};

mod commands;
mod output;

use output::Format;

#[derive(Parser)]
#[command(name = "bgcrys", version, about = "Exact homological algebra for classifying stacks")]
struct Cli {
    /// JSON file supplying defaults for the flags; flags given on the
    /// command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic in W_N(F_q).
    Witt(WittArgs),
    /// Dieudonne modules from the catalog or a presentation.
    Dieudonne(DieudonneArgs),
    /// Integral homology of a finite abelian group or K(G, n).
    GroupHomology(GroupHomologyArgs),
    /// Descent spectral sequence pages and abutment.
    Specseq(SpecseqArgs),
    /// Crystalline cohomology of BG with W_N coefficients.
    StackCohomology(StackArgs),
    /// Run the acceptance suite and write report.json.
    Verify(VerifyArgs),
}

#[derive(Args, Serialize, Deserialize, Default, Clone)]
#[serde(default, rename_all = "kebab-case")]
pub struct OutputArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV, one row per (degree, invariant factor).
    #[arg(long)]
    pub csv: bool,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct WittArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree of the residue field over F_p.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub witt_length: Option<usize>,
    /// add, sub, mul, neg, frobenius, verschiebung, inverse or axioms.
    #[arg(long)]
    pub op: Option<String>,
    /// An integer, or Witt coordinates as JSON ([[c0, c1], ...] per coordinate).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Random triples for `--op axioms`.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct DieudonneArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub witt_length: Option<usize>,
    /// constant(p^n), mu(p^n), alpha_p, W(n,m), Qp/Zp, mu(p^inf), etale(h).
    #[arg(long)]
    pub catalog: Option<String>,
    /// D/(D F^m + D V^n), given as m,n.
    #[arg(long)]
    pub presentation: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct GroupHomologyArgs {
    /// Orders of the cyclic factors, e.g. 2,4.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Z or an integer m >= 2.
    #[arg(long)]
    pub coefficients: Option<String>,
    /// bar, normalized-bar or periodic.
    #[arg(long)]
    pub method: Option<String>,
    /// Compute K(G, n) instead of BG = K(G, 1).
    #[arg(long)]
    pub eilenberg_maclane: Option<usize>,
    #[arg(long)]
    pub max_group_order: Option<u64>,
    #[arg(long)]
    pub max_generators: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct SpecseqArgs {
    /// Rows from the abelian model with H^1 of this rank.
    #[arg(long)]
    pub abelian_rank: Option<usize>,
    /// A single row: cochains of this group (orders of cyclic factors).
    #[arg(long)]
    pub constant_group: Option<String>,
    /// The built-in double complex with a nonzero d_2.
    #[arg(long)]
    pub synthetic: bool,
    #[arg(long)]
    pub max_total: Option<usize>,
    #[arg(long)]
    pub coefficients: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct StackArgs {
    /// BG for a finite abelian group (orders of cyclic factors).
    #[arg(long)]
    pub constant_group: Option<String>,
    /// The abelian model of dimension g.
    #[arg(long)]
    pub abelian: Option<usize>,
    /// The etale p-divisible group (Qp/Zp)^h.
    #[arg(long)]
    pub pdivisible: Option<usize>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub witt_length: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Frobenius on H^1 of the abelian model, rows separated by ';'.
    #[arg(long)]
    pub frobenius: Option<String>,
    #[arg(long)]
    pub max_group_order: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// all, exactalg, dieudonne, homology, barstack, specseq or stackcoh.
    #[arg(long)]
    pub suite: Option<String>,
    /// Directory for report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

/// Usage problems: bad flags, missing parameters, invalid values.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

/// Outcome of a successful run: the text to print and whether every check
/// passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

/// Overlays the command-line values on the config: flags that were given
/// (non-null, or true for switches) replace config entries.
fn merge<T: Serialize + DeserializeOwned>(cli: &T, config: &Map<String, Value>) -> Result<T> {
    let mut merged = config.clone();
    let Value::Object(given) = serde_json::to_value(cli)? else {
        bail!("arguments did not serialize to an object");
    };
    // the output format is one choice: a format flag replaces the config's
    if given.get("json") == Some(&Value::Bool(true)) || given.get("csv") == Some(&Value::Bool(true)) {
        merged.remove("json");
        merged.remove("csv");
    }
    for (k, v) in given {
        if !(v.is_null() || v == Value::Bool(false)) {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| usage(format!("config: {e}")))
}

/// Top-level keys apply to every subcommand; an object under the
/// subcommand's name overrides them.
fn load_config(path: Option<&PathBuf>, command: &str) -> Result<Map<String, Value>> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{} is not valid JSON: {e}", path.display())))?;
    let Value::Object(top) = value else {
        return Err(usage("config must be a JSON object"));
    };
    let mut out: Map<String, Value> = top
        .iter()
        .filter(|(_, v)| !v.is_object())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if let Some(Value::Object(section)) = top.get(command) {
        out.extend(section.clone());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Outcome> {
    let cfg = |name: &str| load_config(cli.config.as_ref(), name);
    match &cli.command {
        Command::Witt(a) => {
            let a = merge(a, &cfg("witt")?)?;
            commands::witt(&a, a.output.format())
        }
        Command::Dieudonne(a) => {
            let a = merge(a, &cfg("dieudonne")?)?;
            commands::dieudonne(&a, a.output.format())
        }
        Command::GroupHomology(a) => {
            let a = merge(a, &cfg("group-homology")?)?;
            commands::group_homology(&a, a.output.format())
        }
        Command::Specseq(a) => {
            let a = merge(a, &cfg("specseq")?)?;
            commands::specseq(&a, a.output.format())
        }
        Command::StackCohomology(a) => {
            let a = merge(a, &cfg("stack-cohomology")?)?;
            commands::stack_cohomology(&a, a.output.format())
        }
        Command::Verify(a) => {
            let a = merge(a, &cfg("verify")?)?;
            commands::verify(&a, a.output.format())
        }
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    use bgcrys::error::Error as E;
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<E>(),
        Some(
            E::NotPrime(_)
                | E::InvalidField(_)
                | E::InvalidArgument(_)
                | E::Mismatch(_)
                | E::UnknownCatalogEntry(_)
                | E::OutOfScope(_)
                | E::TruncationTooSmall { .. }
        )
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}

/// Parses "2,4" into [2, 4].
pub fn parse_orders(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("bad group order {t:?} in {s:?}")))
        })
        .collect()
}

pub fn require<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| usage(format!("--{flag} is required")))
}

pub fn to_pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).context("serializing output")?;
    s.push('\n');
    Ok(s)
}
