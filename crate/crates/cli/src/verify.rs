//! The `verify` command: every invariant suite over a list of fixtures.
//!
//! A fixture file holds one fixture object or an array of them:
//!
//! ```json
//! {"case": "a1-can3", "kind": "body", "type": "A1", "word": [1],
//!  "bundle": "can:3", "max_level": 3, "quick": true,
//!  "expect": {"vertices": [["0"], ["3"]], "volume": "3"}}
//! ```

use std::path::Path;

use bsok_core::arith::parse_q;
use bsok_core::okounkov::{global_cone, restriction_check};
use bsok_core::picard::{is_nef, DivisorClass};
use bsok_core::rootsys::CartanDatum;
use bsok_core::sections::equivariance::check_equivariance;
use bsok_core::sections::{section_basis_glue, section_basis_nef, span_rank};
use bsok_core::weights::multiplicity_asymptotics;
use bsok_core::BottSamelson;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::commands::{body_checks, global_checks, polytope_roundtrip, run_body, weight_checks};
use crate::config::{parse_mu, JobConfig};
use crate::report::{Check, CliError, Output};

pub const SHIPPED: &str = include_str!("../fixtures/shipped.json");

const EQUIVARIANCE_TRIALS: usize = 20;
const QUICK_EQUIVARIANCE_TRIALS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Body,
    Global,
    Weights,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_volume: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub case: String,
    pub kind: Kind,
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub word: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<String>,
    pub max_level: u32,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub class_box: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default)]
    pub quick: bool,
    #[serde(default)]
    pub expect: Expect,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FixtureFile {
    One(Box<Fixture>),
    Many(Vec<Fixture>),
}

pub fn parse_fixtures(text: &str, origin: &str) -> Result<Vec<Fixture>, CliError> {
    match serde_json::from_str(text) {
        Ok(FixtureFile::One(f)) => Ok(vec![*f]),
        Ok(FixtureFile::Many(v)) => Ok(v),
        Err(e) => Err(CliError::invalid(format!("{origin}: not a fixture file: {e}"))),
    }
}

/// All `*.json` fixture files of a directory, in file-name order.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::invalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?;
        out.extend(parse_fixtures(&text, &p.display().to_string())?);
    }
    Ok(out)
}

/// Per-case seed, independent of the order in which cases run.
fn case_seed(seed: u64, case: &str) -> u64 {
    case.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn expect_check(case: &str, invariant: &str, expected: &impl PartialEq<String>, got: String, shown: String) -> Check {
    let ok = expected == &got;
    Check::new(case, invariant, ok, if ok { format!("matches {got}") } else { format!("expected {shown}, got {got}") })
}

fn json_text<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serialize")
}

fn verify_body(f: &Fixture, bs: &BottSamelson, seed: u64, quick: bool) -> Result<Vec<Check>, CliError> {
    let case = f.case.as_str();
    let d: DivisorClass = f.bundle.as_deref().ok_or_else(|| CliError::invalid(format!("{case}: body fixture needs a bundle")))?.parse()?;
    bs.check_len(&d.coords)?;
    let run = run_body(bs, &d, f.max_level)?;
    let mut checks = vec![polytope_roundtrip(case, &run.body.polytope)];
    if let Some(v) = &f.expect.vertices {
        let got: Vec<Vec<String>> = run.body.polytope.vertices.iter().map(|x| x.iter().map(bsok_core::arith::fmt_q).collect()).collect();
        checks.push(expect_check(case, "golden_vertices", &json_text(v), json_text(&got), json_text(v)));
    }
    if let Some(v) = &f.expect.volume {
        let got = bsok_core::arith::fmt_q(&run.body.polytope.volume());
        checks.push(expect_check(case, "golden_volume", v, got, v.clone()));
    }
    if !is_nef(bs, &d)? {
        return Ok(checks);
    }
    let vr = run.volume.as_ref().expect("nef classes get a volume report");
    checks.extend(body_checks(case, bs, &d, vr)?);

    let nef = section_basis_nef(bs, &d)?.polys();
    let glue = section_basis_glue(bs, &d)?.polys();
    let both: Vec<_> = nef.iter().chain(&glue).cloned().collect();
    let (rn, rg, rb) = (span_rank(&nef), span_rank(&glue), span_rank(&both));
    checks.push(Check::new(
        case,
        "oracle_independence",
        rn == rb && rg == rb && nef.len() == glue.len(),
        format!("rank nef {rn}, glue {rg}, together {rb}"),
    ));

    let can = d.to_canonical(bs)?;
    let trials = if quick { QUICK_EQUIVARIANCE_TRIALS } else { EQUIVARIANCE_TRIALS };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let er = check_equivariance(bs, &can.coords, trials, &mut rng)?;
    checks.push(Check::new(
        case,
        "equivariance",
        er.failures == 0,
        format!("{} failures in {} checks over {} sections", er.failures, er.checks, er.sections),
    ));

    if bs.n() >= 2 {
        let r = restriction_check(bs, &d, f.max_level)?;
        checks.push(Check::new(
            case,
            "restriction",
            r.equal,
            format!("tail body vs body of {} on the truncated word", r.restricted_class),
        ));
    }
    Ok(checks)
}

fn verify_global(f: &Fixture, bs: &BottSamelson) -> Result<Vec<Check>, CliError> {
    let class_box = f.class_box.unwrap_or(crate::commands::DEFAULT_BOX);
    let g = global_cone(bs, f.max_level, class_box)?;
    let mut checks = global_checks(&f.case, &g);
    if let Some(rays) = &f.expect.rays {
        let got: Vec<Vec<String>> = g.cone.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let want: Vec<Vec<String>> = rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        checks.push(expect_check(&f.case, "golden_rays", &json_text(&want), json_text(&got), json_text(&want)));
    }
    Ok(checks)
}

fn verify_weights(f: &Fixture, bs: &BottSamelson) -> Result<Vec<Check>, CliError> {
    let case = f.case.as_str();
    let d: DivisorClass = f.bundle.as_deref().ok_or_else(|| CliError::invalid(format!("{case}: weights fixture needs a bundle")))?.parse()?;
    let mu = parse_mu(f.mu.as_deref().ok_or_else(|| CliError::invalid(format!("{case}: weights fixture needs mu")))?)?;
    let r = multiplicity_asymptotics(bs, &d, &mu, f.max_level, &None)?;
    let mut checks = weight_checks(case, &r);
    if let Some(dims) = &f.expect.dims {
        let got: Vec<u64> = r.rows.iter().map(|x| x.dim).collect();
        checks.push(expect_check(case, "golden_dims", &json_text(dims), json_text(&got), json_text(dims)));
    }
    if let Some(v) = &f.expect.slice_volume {
        let same = parse_q(v).is_some_and(|x| parse_q(&r.slice_volume) == Some(x));
        checks.push(Check::new(case, "golden_slice_volume", same, format!("expected {v}, got {}", r.slice_volume)));
    }
    Ok(checks)
}

fn verify_one(f: &Fixture, seed: u64, quick: bool) -> Result<Vec<Check>, CliError> {
    let bs = BottSamelson::new(CartanDatum::parse(&f.cartan_type)?, f.word.clone())?.with_seed(seed);
    match f.kind {
        Kind::Body => verify_body(f, &bs, seed, quick),
        Kind::Global => verify_global(f, &bs),
        Kind::Weights => verify_weights(f, &bs),
    }
}

/// Runs the fixtures; a computation error is recorded against the case
/// instead of aborting the run.
pub fn run_fixtures(fixtures: &[Fixture], seed: u64, quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    for f in fixtures.iter().filter(|f| f.quick || !quick) {
        match verify_one(f, case_seed(seed, &f.case), quick) {
            Ok(c) => checks.extend(c),
            Err(e) => checks.push(Check::error(&f.case, "computation", &e)),
        }
    }
    checks
}

pub fn cmd_verify(cfg: &JobConfig) -> Result<Output, CliError> {
    let fixtures = match &cfg.fixtures {
        Some(dir) => load_dir(dir)?,
        None => parse_fixtures(SHIPPED, "shipped fixtures")?,
    };
    if fixtures.is_empty() {
        return Err(CliError::invalid("no fixtures"));
    }
    let checks = run_fixtures(&fixtures, cfg.seed, cfg.quick);
    let cases = fixtures.iter().filter(|f| f.quick || !cfg.quick).count();
    let failed = checks.iter().filter(|c| c.status != crate::report::Status::Pass).count();
    let doc = json!({
        "command": "verify",
        "quick": cfg.quick,
        "seed": cfg.seed,
        "cases": cases,
        "checks": checks.len(),
        "failed": failed,
    });
    Ok(Output { document: doc, checks })
}
