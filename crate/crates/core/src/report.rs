//! Run configuration, the JSON report and its canonical serialization.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::catalog::{build_entry, oracle_eigenvalues, CatalogEntry, Family, FamilyParams, OracleEigenvalues};
use crate::checker::{
    check_many, classify, sample_invariants, theorem1_crosscheck, Classification, Theorem1Report, Tolerances,
    Verdict,
};
use crate::conformal::invariants_at;
use crate::dsl::{parse_chart, ChartImmersion};
use crate::error::{Error, Result};
use crate::identities::{identity_suite, IdentityResiduals};
use crate::probe::{invariance_probe, ProbeReport, ProbeTransform};
use crate::sampling::sample_points;

pub const SCHEMA_VERSION: &str = "conforma-report/1";
/// Largest accepted drift of the invariance probe.
pub const PROBE_TOL: f64 = 1e-8;
/// Default cap on per-point rows in a report.
pub const DEFAULT_MAX_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Invariants,
    Identities,
    Isoparametric,
    Classify,
    Theorem1,
    InvarianceProbe,
}

impl std::str::FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown check `{s}`")))
    }
}

/// Where the chart comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSpec {
    ChartPath(PathBuf),
    ChartSource(String),
    Catalog { family: Family, params: FamilyParams },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: InputSpec,
    pub lambdas: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckKind>,
    pub transforms: Vec<ProbeTransform>,
    pub max_points: usize,
}

impl RunConfig {
    pub fn new(input: InputSpec) -> Self {
        Self {
            input,
            lambdas: vec![0.0],
            sample_count: 20,
            seed: 42,
            tolerances: Tolerances::default(),
            checks: vec![CheckKind::Isoparametric, CheckKind::Classify],
            transforms: Vec::new(),
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.sample_count < 2 {
            return Err(Error::Config("sample_count must be at least 2".into()));
        }
        let needs_lambda = self
            .checks
            .iter()
            .any(|c| matches!(c, CheckKind::Isoparametric | CheckKind::Classify | CheckKind::Theorem1));
        if needs_lambda && self.lambdas.is_empty() {
            return Err(Error::Config("lambda list is empty".into()));
        }
        if self.lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::Config("lambda values must be finite".into()));
        }
        if self.checks.contains(&CheckKind::InvarianceProbe) && self.transforms.is_empty() {
            return Err(Error::Config("invariance probe needs at least one transform".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEcho {
    pub chart_name: String,
    pub ambient: String,
    pub n: usize,
    pub source_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogEcho>,
    pub lambdas: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEcho {
    pub family: Family,
    pub params: FamilyParams,
    pub classification_case: u8,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub point: Vec<f64>,
    pub lambda: f64,
    pub e2tau: f64,
    pub kappa: f64,
    pub mean_curvature: f64,
    pub principal: Vec<f64>,
    pub c_max: f64,
    pub eig_a: Vec<f64>,
    pub eig_b: Vec<f64>,
    pub eig_d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub points: usize,
    pub dropped: usize,
    pub max: IdentityResiduals<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub lambda: f64,
    pub oracle: OracleEigenvalues,
    /// Largest slot deviation of the sampled means, sign-insensitive in `B`.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitySummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<Theorem1Report>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub input: InputEcho,
    pub results: Results,
    /// Hash of the canonical JSON of `results` alone, so the same chart
    /// read from a file or built from the catalog hashes identically.
    pub results_sha256: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub oracle: Vec<OracleComparison>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Sorted keys, two-space indentation, floats as `{:.16e}`, LF endings.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat("  ").take(d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(depth + 1, out);
                write_value(item, depth + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*k], depth + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(depth, out);
            out.push('}');
        }
    }
}

/// Resolves the input into a chart (and the catalog entry, if any).
pub fn load_input(input: &InputSpec) -> Result<(ChartImmersion, String, Option<CatalogEntry>)> {
    match input {
        InputSpec::ChartPath(path) => {
            let source = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            Ok((parse_chart(&source)?, source, None))
        }
        InputSpec::ChartSource(source) => Ok((parse_chart(source)?, source.clone(), None)),
        InputSpec::Catalog { family, params } => {
            let entry = build_entry(*family, params)?;
            Ok((entry.chart.clone(), entry.source.clone(), Some(entry)))
        }
    }
}

fn point_records(chart: &ChartImmersion, cfg: &RunConfig) -> Result<(Vec<PointRecord>, usize)> {
    let lambda = cfg.lambdas.first().copied().unwrap_or(0.0);
    let count = cfg.sample_count.min(cfg.max_points);
    let pts = sample_points(chart, count, cfg.seed)?;
    let rows: Vec<Result<PointRecord>> = pts
        .par_iter()
        .map(|p| {
            let d = invariants_at(chart, p, lambda)?.canonical(1e-9);
            Ok(PointRecord {
                point: p.clone(),
                lambda,
                e2tau: d.e2tau,
                kappa: d.kappa,
                mean_curvature: d.forms.mean_curvature,
                principal: d.forms.principal.clone(),
                c_max: d.c_max(),
                eig_a: d.eig_a.clone(),
                eig_b: d.eig_b.clone(),
                eig_d: d.eig_d.clone(),
            })
        })
        .collect();
    let mut out = Vec::new();
    let mut dropped = 0;
    for r in rows {
        match r {
            Ok(row) => out.push(row),
            Err(e) if e.is_pointwise_degeneracy() => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((out, dropped))
}

fn identity_summary(chart: &ChartImmersion, cfg: &RunConfig) -> Result<IdentitySummary> {
    let set = sample_invariants(chart, cfg.sample_count, cfg.seed)?;
    let rows: Vec<IdentityResiduals<f64>> = set
        .points
        .par_iter()
        .zip(&set.data)
        .map(|(p, d)| identity_suite(chart, p, d))
        .collect::<Result<_>>()?;
    let max = rows.iter().fold(IdentityResiduals::zero(), |m, r| m.max(r));
    let t = &cfg.tolerances;
    let analytic = [max.trace_b, max.norm_b, max.trace_a, max.gauss, max.ricci, max.divergence]
        .into_iter()
        .fold(0.0, f64::max);
    let passed = analytic <= t.identity_tol && max.codazzi.max(max.max_finite_difference()) <= t.codazzi_tol;
    Ok(IdentitySummary {
        points: rows.len(),
        dropped: set.dropped,
        max,
        passed,
    })
}

fn slot_dev(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn oracle_comparison(entry: &CatalogEntry, v: &Verdict) -> OracleComparison {
    let o = entry.oracle();
    let dev = |o: &crate::catalog::Oracle, lam: f64| {
        slot_dev(&v.eig_a, &o.eig_a()).max(slot_dev(&v.eig_b, &o.eig_b())).max(slot_dev(&v.eig_d, &o.eig_d(lam)))
    };
    let l = v.lambda;
    let max_deviation = dev(&o, l).min(dev(&o.flipped(), l)).min(dev(&o, -l)).min(dev(&o.flipped(), -l));
    OracleComparison {
        lambda: l,
        oracle: oracle_eigenvalues(entry, l),
        max_deviation,
    }
}

/// Executes the requested checks in a fixed order.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let (chart, source, entry) = load_input(&cfg.input)?;
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    let mut warnings = Vec::new();
    let mut passed = true;
    let mut results = Results {
        points: None,
        identities: None,
        verdicts: Vec::new(),
        theorem1: None,
        probes: Vec::new(),
    };
    let mut oracle = Vec::new();

    for check in &checks {
        match check {
            CheckKind::Invariants => {
                let (rows, dropped) = point_records(&chart, cfg)?;
                if dropped > 0 {
                    warnings.push(format!("{dropped} degenerate point(s) skipped in the point table"));
                }
                results.points = Some(rows);
            }
            CheckKind::Identities => {
                let s = identity_summary(&chart, cfg)?;
                if s.dropped > 0 {
                    warnings.push(format!("{} degenerate point(s) skipped by the identity suite", s.dropped));
                }
                passed &= s.passed;
                results.identities = Some(s);
            }
            CheckKind::Isoparametric | CheckKind::Classify => {
                if !results.verdicts.is_empty() {
                    continue;
                }
                let mut verdicts = check_many(&chart, &cfg.lambdas, cfg.sample_count, cfg.seed, &cfg.tolerances)?;
                let classify_requested = checks.contains(&CheckKind::Classify);
                for v in &mut verdicts {
                    if v.dropped > 0 {
                        warnings.push(format!("lambda {}: {} degenerate point(s) dropped", v.lambda, v.dropped));
                    }
                    if checks.contains(&CheckKind::Isoparametric) {
                        passed &= v.para_blaschke_isoparametric && v.conformal_isoparametric;
                    }
                    if classify_requested {
                        let c = classify(v, &chart);
                        passed &= c.matched().is_some();
                        v.family_match = Some(c);
                    }
                    if let Some(e) = &entry {
                        oracle.push(oracle_comparison(e, v));
                    }
                }
                results.verdicts = verdicts;
            }
            CheckKind::Theorem1 => {
                let t = theorem1_crosscheck(&chart, &cfg.lambdas, cfg.sample_count, cfg.seed, &cfg.tolerances)?;
                passed &= t.holds;
                results.theorem1 = Some(t);
            }
            CheckKind::InvarianceProbe => {
                let lambda = cfg.lambdas.first().copied().unwrap_or(0.0);
                for t in &cfg.transforms {
                    let p = invariance_probe(&chart, t, lambda, cfg.sample_count, cfg.seed)?;
                    passed &= p.max_drift < PROBE_TOL;
                    results.probes.push(p);
                }
            }
        }
    }
    if results.verdicts.iter().any(|v| {
        matches!(&v.family_match, Some(Classification::Matched(m)) if m.case == 1)
    }) {
        warnings.push("case (1) is assigned by elimination; no conformal representative is verified".into());
    }
    if !results.verdicts.is_empty() {
        warnings.push("constancy of eigenvalues is checked on one chart box only".into());
    }
    if let Some(e) = &entry {
        warnings.extend(e.notes.iter().cloned());
    }

    let results_value = serde_json::to_value(&results).expect("results serialize");
    let results_sha256 = sha256_hex(canonical_json(&results_value).as_bytes());
    let input = InputEcho {
        chart_name: chart.name.clone(),
        ambient: chart.ambient.kind.keyword().to_string(),
        n: chart.n(),
        source_sha256: sha256_hex(source.as_bytes()),
        catalog: entry.as_ref().map(|e| CatalogEcho {
            family: e.family,
            params: e.params.clone(),
            classification_case: e.family.classification_case(),
            notes: e.notes.clone(),
        }),
        lambdas: cfg.lambdas.clone(),
        sample_count: cfg.sample_count,
        seed: cfg.seed,
        tolerances: cfg.tolerances,
        checks,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION.into(),
        input,
        results,
        results_sha256,
        oracle,
        warnings,
        passed,
    })
}
