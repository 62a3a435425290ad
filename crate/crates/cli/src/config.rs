//! Command-line flags, the JSON job file that mirrors them, and the merged
//! [`JobConfig`].

use std::path::{Path, PathBuf};

use bsok_core::arith::{parse_q, Q};
use bsok_core::bs::DEFAULT_SEED;
use bsok_core::picard::{is_effective, DivisorClass};
use bsok_core::rootsys::CartanDatum;
use bsok_core::BottSamelson;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::report::CliError;

#[derive(Debug, Parser)]
#[command(name = "bsok", version, about = "Exact Okounkov bodies of Bott-Samelson varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Okounkov body of one class, with counting and volume checks.
    Body,
    /// Truncated global cone and its saturation witness.
    Global,
    /// Weight multiplicities against slice volumes.
    Weights,
    /// Runs every invariant suite on the shipped (or given) fixtures.
    Verify,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON job file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cartan type such as A2, B2, G2.
    #[arg(long = "type", global = true)]
    pub cartan_type: Option<String>,
    /// JSON file holding a Cartan matrix (Kac convention).
    #[arg(long, global = true)]
    pub matrix_file: Option<PathBuf>,
    /// Reduced word as a comma list, e.g. 1,2,1.
    #[arg(long, global = true)]
    pub word: Option<String>,
    /// Divisor class, e.g. can:1,1 or eff:1,0,2.
    #[arg(long, global = true)]
    pub bundle: Option<String>,
    #[arg(long, global = true)]
    pub max_level: Option<u32>,
    /// Class box for the global cone.
    #[arg(long = "box", global = true)]
    pub class_box: Option<u32>,
    /// Weight as a comma list of rationals, e.g. 0,1/2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// JSON file holding an integer matrix projecting weights to a sub-torus.
    #[arg(long, global = true)]
    pub torus_proj_file: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Restricts `verify` to the fast fixtures.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Directory of fixture files for `verify` instead of the shipped ones.
    #[arg(long, global = true)]
    pub fixtures: Option<PathBuf>,
}

/// A list given either as `"1,2"` or as a JSON array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ListField {
    Text(String),
    Ints(Vec<i64>),
}

impl ListField {
    fn text(self) -> String {
        match self {
            ListField::Text(s) => s,
            ListField::Ints(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

/// The job file: the same keys as the long flags, with `_` for `-`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "type")]
    cartan_type: Option<String>,
    matrix_file: Option<PathBuf>,
    word: Option<ListField>,
    bundle: Option<String>,
    max_level: Option<u32>,
    #[serde(rename = "box")]
    class_box: Option<u32>,
    mu: Option<ListField>,
    torus_proj_file: Option<PathBuf>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    quick: Option<bool>,
    fixtures: Option<PathBuf>,
}

/// Resolved job parameters. Paths inside a job file are relative to it.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub cartan_type: Option<String>,
    pub matrix_file: Option<PathBuf>,
    pub word: Option<Vec<usize>>,
    pub bundle: Option<DivisorClass>,
    pub max_level: Option<u32>,
    pub class_box: Option<u32>,
    pub mu: Option<Vec<Q>>,
    pub torus_proj: Option<Vec<Vec<i64>>>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub quick: bool,
    pub fixtures: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::invalid(msg)
}

pub fn parse_word(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|_| invalid(format!("bad word letter {t:?}"))))
        .collect()
}

pub fn parse_mu(s: &str) -> Result<Vec<Q>, CliError> {
    s.split(',')
        .map(|t| parse_q(t).ok_or_else(|| invalid(format!("bad rational {t:?}"))))
        .collect()
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Reads an integer matrix stored either bare or under `key`.
pub fn read_matrix(path: &Path, key: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let v = read_json(path)?;
    let m = v.get(key).cloned().unwrap_or(v);
    serde_json::from_value(m).map_err(|e| invalid(format!("{}: expected an integer matrix: {e}", path.display())))
}

impl JobConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let (file, base) = match &flags.config {
            Some(p) => {
                let file: FileConfig = serde_json::from_value(read_json(p)?)
                    .map_err(|e| invalid(format!("{}: {e}", p.display())))?;
                (file, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        let rel = |p: Option<PathBuf>| p.map(|p| base.join(p));
        let word = match flags.word.clone().or(file.word.map(ListField::text)) {
            Some(w) => Some(parse_word(&w)?),
            None => None,
        };
        let bundle = match flags.bundle.clone().or(file.bundle) {
            Some(b) => Some(b.parse::<DivisorClass>().map_err(|e| invalid(e.to_string()))?),
            None => None,
        };
        let mu = match flags.mu.clone().or(file.mu.map(ListField::text)) {
            Some(m) => Some(parse_mu(&m)?),
            None => None,
        };
        let torus_proj = match flags.torus_proj_file.clone().or(rel(file.torus_proj_file)) {
            Some(p) => Some(read_matrix(&p, "projection")?),
            None => None,
        };
        Ok(JobConfig {
            cartan_type: flags.cartan_type.clone().or(file.cartan_type),
            matrix_file: flags.matrix_file.clone().or(rel(file.matrix_file)),
            word,
            bundle,
            max_level: flags.max_level.or(file.max_level),
            class_box: flags.class_box.or(file.class_box),
            mu,
            torus_proj,
            out: flags.out.clone().or(rel(file.out)),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            quick: flags.quick || file.quick.unwrap_or(false),
            fixtures: flags.fixtures.clone().or(rel(file.fixtures)),
        })
    }

    pub fn cartan(&self) -> Result<CartanDatum, CliError> {
        match (&self.cartan_type, &self.matrix_file) {
            (Some(_), Some(_)) => Err(invalid("give either --type or --matrix-file, not both")),
            (Some(t), None) => Ok(CartanDatum::parse(t)?),
            (None, Some(p)) => Ok(CartanDatum::new(read_matrix(p, "matrix")?)?),
            (None, None) => Err(invalid("missing --type or --matrix-file")),
        }
    }

    /// The Bott-Samelson variety; rejects non-reduced words.
    pub fn variety(&self) -> Result<BottSamelson, CliError> {
        let word = self.word.clone().ok_or_else(|| invalid("missing --word"))?;
        Ok(BottSamelson::new(self.cartan()?, word)?.with_seed(self.seed))
    }

    /// The divisor class, checked for length and effectivity.
    pub fn effective_bundle(&self, bs: &BottSamelson) -> Result<DivisorClass, CliError> {
        let d = self.bundle.clone().ok_or_else(|| invalid("missing --bundle"))?;
        bs.check_len(&d.coords)?;
        if !is_effective(bs, &d)? {
            return Err(invalid(format!("{d} is not effective")));
        }
        Ok(d)
    }

    pub fn max_level(&self, default: u32) -> Result<u32, CliError> {
        match self.max_level.unwrap_or(default) {
            0 => Err(invalid("--max-level must be at least 1")),
            k => Ok(k),
        }
    }
}
