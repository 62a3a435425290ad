//! The `body`, `global` and `weights` commands.

use bsok_core::arith::{fmt_q, parse_q, Q};
use bsok_core::okounkov::{body, global_cone, volume_check, GlobalConeApprox, OkounkovBody, VolumeReport};
use bsok_core::picard::{is_nef, DivisorClass};
use bsok_core::polyhedra::{RationalCone, RationalPolytope};
use bsok_core::weights::{multiplicity_asymptotics, MultiplicityReport};
use bsok_core::BottSamelson;
use num_traits::Zero;
use serde_json::json;

use crate::config::JobConfig;
use crate::report::{Check, CliError, Output};

pub const DEFAULT_BODY_LEVEL: u32 = 3;
pub const DEFAULT_GLOBAL_LEVEL: u32 = 4;
pub const DEFAULT_BOX: u32 = 2;
pub const DEFAULT_WEIGHTS_LEVEL: u32 = 6;

fn header(command: &str, bs: &BottSamelson) -> serde_json::Value {
    json!({
        "command": command,
        "cartan": bs.cartan.matrix,
        "word": bs.word,
    })
}

fn vertex_strings(p: &RationalPolytope) -> Vec<Vec<String>> {
    p.vertices.iter().map(|v| v.iter().map(fmt_q).collect()).collect()
}

/// Re-reads an emitted polytope and compares.
pub fn polytope_roundtrip(case: &str, p: &RationalPolytope) -> Check {
    match RationalPolytope::from_json(&p.to_json()) {
        Ok(q) if &q == p => Check::new(case, "polytope_roundtrip", true, "V/H round trip reproduces the polytope"),
        Ok(_) => Check::new(case, "polytope_roundtrip", false, "reloaded polytope differs"),
        Err(e) => Check::new(case, "polytope_roundtrip", false, e.to_string()),
    }
}

pub fn cone_roundtrip(case: &str, c: &RationalCone) -> Check {
    match RationalCone::from_json(&c.to_json()) {
        Ok(d) if &d == c => Check::new(case, "cone_roundtrip", true, "V/H round trip reproduces the cone"),
        Ok(_) => Check::new(case, "cone_roundtrip", false, "reloaded cone differs"),
        Err(e) => Check::new(case, "cone_roundtrip", false, e.to_string()),
    }
}

/// Valuation counts against section dimensions, and for nef classes against
/// the character of `O(kD)` and the volume identity.
pub fn body_checks(case: &str, bs: &BottSamelson, d: &DivisorClass, vr: &VolumeReport) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let bad: Vec<String> = vr
        .levels
        .iter()
        .filter(|l| l.valuations != l.h0)
        .map(|l| format!("level {}: {} valuations, h0 {}", l.level, l.valuations, l.h0))
        .collect();
    checks.push(Check::new(
        case,
        "valuation_count",
        bad.is_empty(),
        if bad.is_empty() { format!("#nu = h0 for levels 1..={}", vr.levels.len()) } else { bad.join("; ") },
    ));
    let can = d.to_canonical(bs)?;
    let mut bad = Vec::new();
    for l in &vr.levels {
        let kc: Vec<i64> = can.coords.iter().map(|x| x * l.level as i64).collect();
        let chi = bs.cartan.bs_character(&bs.word, &kc)?.dim() as usize;
        if chi != l.h0 {
            bad.push(format!("level {}: h0 {}, character {chi}", l.level, l.h0));
        }
    }
    checks.push(Check::new(
        case,
        "character_dimension",
        bad.is_empty(),
        if bad.is_empty() { "h0 = character dimension at every level".to_string() } else { bad.join("; ") },
    ));
    checks.push(Check::new(
        case,
        "volume_identity",
        vr.volumes_match,
        format!("hull volume {}, vol(D)/n! {}", vr.hull_volume, vr.expected),
    ));
    Ok(checks)
}

pub struct BodyRun {
    pub body: OkounkovBody,
    pub volume: Option<VolumeReport>,
}

pub fn run_body(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<BodyRun, CliError> {
    let b = body(bs, d, max_level)?;
    let volume = if is_nef(bs, d)? { Some(volume_check(bs, d, max_level)?) } else { None };
    Ok(BodyRun { body: b, volume })
}

pub fn cmd_body(cfg: &JobConfig) -> Result<Output, CliError> {
    let bs = cfg.variety()?;
    let d = cfg.effective_bundle(&bs)?;
    let k = cfg.max_level(DEFAULT_BODY_LEVEL)?;
    let run = run_body(&bs, &d, k)?;
    let case = format!("{d}");
    let mut checks = vec![polytope_roundtrip(&case, &run.body.polytope)];
    if let Some(vr) = &run.volume {
        checks.extend(body_checks(&case, &bs, &d, vr)?);
    }
    let mut doc = header("body", &bs);
    let map = doc.as_object_mut().expect("object");
    map.insert("class".into(), json!(d.to_string()));
    map.insert("canonical".into(), json!(d.to_canonical(&bs)?.coords));
    map.insert("effective".into(), json!(d.to_effective(&bs)?.coords));
    map.insert("max_level".into(), json!(k));
    map.insert("nef".into(), json!(run.volume.is_some()));
    map.insert("vertices".into(), json!(vertex_strings(&run.body.polytope)));
    map.insert("volume".into(), json!(fmt_q(&run.body.polytope.volume())));
    map.insert("polytope".into(), run.body.polytope.to_json());
    if let Some(vr) = &run.volume {
        map.insert("volume_check".into(), serde_json::to_value(vr).expect("serialize"));
    }
    Ok(Output { document: doc, checks })
}

pub fn global_checks(case: &str, g: &GlobalConeApprox) -> Vec<Check> {
    vec![
        cone_roundtrip(case, &g.cone),
        Check::new(
            case,
            "saturation",
            g.saturated,
            format!(
                "extreme rays at (K, box) = ({}, {}) {} those at ({}, {})",
                g.max_level,
                g.class_box,
                if g.saturated { "equal" } else { "differ from" },
                g.max_level + 1,
                g.class_box + 1
            ),
        ),
    ]
}

pub fn cmd_global(cfg: &JobConfig) -> Result<Output, CliError> {
    let bs = cfg.variety()?;
    let k = cfg.max_level(DEFAULT_GLOBAL_LEVEL)?;
    let class_box = cfg.class_box.unwrap_or(DEFAULT_BOX);
    let g = global_cone(&bs, k, class_box)?;
    let case = format!("global K={k} box={class_box}");
    let checks = global_checks(&case, &g);
    let mut doc = header("global", &bs);
    let map = doc.as_object_mut().expect("object");
    map.insert("max_level".into(), json!(k));
    map.insert("class_box".into(), json!(class_box));
    map.insert("saturated".into(), json!(g.saturated));
    map.insert("rays".into(), json!(g.cone.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()));
    map.insert("cone".into(), g.cone.to_json());
    Ok(Output { document: doc, checks })
}

/// Semigroup counts against character multiplicities, and monotone gaps
/// (a gap that reaches zero may stay there).
pub fn weight_checks(case: &str, r: &MultiplicityReport) -> Vec<Check> {
    let bad: Vec<String> = r
        .rows
        .iter()
        .filter(|row| row.semigroup_count as u64 != row.dim)
        .map(|row| format!("level {}: semigroup {}, character {}", row.level, row.semigroup_count, row.dim))
        .collect();
    let gaps: Vec<Q> = r.rows.iter().map(|row| parse_q(&row.gap).expect("gap is rational")).collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0] || (w[0].is_zero() && w[1].is_zero()));
    vec![
        Check::new(
            case,
            "weight_multiplicity",
            bad.is_empty(),
            if bad.is_empty() { "semigroup counts = character multiplicities".to_string() } else { bad.join("; ") },
        ),
        Check::new(
            case,
            "gap_decreasing",
            monotone,
            format!("gaps {} against slice volume {}", r.rows.iter().map(|x| x.gap.as_str()).collect::<Vec<_>>().join(", "), r.slice_volume),
        ),
    ]
}

pub fn cmd_weights(cfg: &JobConfig) -> Result<Output, CliError> {
    let bs = cfg.variety()?;
    let d = cfg.effective_bundle(&bs)?;
    let k = cfg.max_level(DEFAULT_WEIGHTS_LEVEL)?;
    let mu = cfg.mu.clone().ok_or_else(|| CliError::invalid("missing --mu"))?;
    let r = multiplicity_asymptotics(&bs, &d, &mu, k, &cfg.torus_proj)?;
    let case = format!("{d} mu={}", r.mu.join(","));
    let checks = weight_checks(&case, &r);
    let mut doc = header("weights", &bs);
    let map = doc.as_object_mut().expect("object");
    map.insert("max_level".into(), json!(k));
    map.insert("torus_projection".into(), json!(cfg.torus_proj));
    map.insert("multiplicities".into(), serde_json::to_value(&r).expect("serialize"));
    Ok(Output { document: doc, checks })
}
