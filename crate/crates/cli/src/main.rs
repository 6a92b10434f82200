//! `conforma` command-line front end.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conforma::catalog::oracle_eigenvalues;
use conforma::report::{canonical_json, run, CheckKind, InputSpec, RunConfig, DEFAULT_MAX_POINTS};
use conforma::{build_entry, Error, Family, FamilyParams, ProbeTransform, Tolerances};
use serde::Deserialize;

#[derive(Parser)]
#[command(
    name = "conforma",
    version,
    about = "Conformal invariants of spacelike hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isoparametric verdicts and classification.
    Check(Common),
    /// Structure-equation residuals.
    Identities(Common),
    /// Per-point invariant table.
    Invariants(Common),
    /// Build a catalog entry; `--emit` prints its chart file.
    Catalog {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        emit: bool,
    },
    /// Invariance of the invariants under conformal maps of the flat ambient.
    Probe {
        #[command(flatten)]
        common: Common,
        /// Dilation factor (repeatable).
        #[arg(long)]
        dilation: Vec<f64>,
        /// Rotation or boost `i,j,angle` in a coordinate plane (repeatable).
        #[arg(long)]
        rotation: Vec<String>,
        /// Translation vector `b1,b2,...` (repeatable).
        #[arg(long)]
        translation: Vec<String>,
    },
    /// Cross-check of the eigenvalue-count implication over the lambda grid.
    Theorem1(Common),
}

#[derive(Args, Default)]
#[command(allow_negative_numbers = true)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    chart: Option<PathBuf>,
    #[arg(long, alias = "family")]
    catalog: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_points: Option<usize>,
    #[arg(long)]
    c_tol: Option<f64>,
    #[arg(long)]
    spread_tol: Option<f64>,
    #[arg(long)]
    identity_tol: Option<f64>,
    #[arg(long)]
    codazzi_tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// TOML config file; same key names as the flags.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    chart: Option<PathBuf>,
    #[serde(alias = "family")]
    catalog: Option<Family>,
    n: Option<usize>,
    k: Option<usize>,
    p: Option<usize>,
    q: Option<usize>,
    a: Option<f64>,
    r: Option<f64>,
    lambda: Option<Vec<f64>>,
    samples: Option<usize>,
    seed: Option<u64>,
    max_points: Option<usize>,
    c_tol: Option<f64>,
    spread_tol: Option<f64>,
    identity_tol: Option<f64>,
    codazzi_tol: Option<f64>,
    checks: Option<Vec<CheckKind>>,
}

fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Config(format!("not a number: `{t}`"))))
        .collect()
}

impl Common {
    fn merged(&self) -> Result<(Common, Option<Vec<CheckKind>>), Error> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text).map_err(|e| Error::Config(e.to_string()))?
            }
            None => FileConfig::default(),
        };
        Ok((
            Common {
                config: None,
                chart: self.chart.clone().or(file.chart),
                catalog: self.catalog.or(file.catalog),
                n: self.n.or(file.n),
                k: self.k.or(file.k),
                p: self.p.or(file.p),
                q: self.q.or(file.q),
                a: self.a.or(file.a),
                r: self.r.or(file.r),
                lambda: self.lambda.clone().or(file.lambda),
                samples: self.samples.or(file.samples),
                seed: self.seed.or(file.seed),
                max_points: self.max_points.or(file.max_points),
                c_tol: self.c_tol.or(file.c_tol),
                spread_tol: self.spread_tol.or(file.spread_tol),
                identity_tol: self.identity_tol.or(file.identity_tol),
                codazzi_tol: self.codazzi_tol.or(file.codazzi_tol),
                output: self.output.clone(),
            },
            file.checks,
        ))
    }

    fn family_params(&self) -> Result<FamilyParams, Error> {
        let n = self.n.ok_or_else(|| Error::Config("catalog input needs --n".into()))?;
        Ok(FamilyParams {
            n,
            k: self.k,
            p: self.p,
            q: self.q,
            a: self.a,
            r: self.r,
            lambda: self.lambda.as_ref().and_then(|l| l.first().copied()),
        })
    }

    fn input(&self) -> Result<InputSpec, Error> {
        match (&self.chart, self.catalog) {
            (Some(_), Some(_)) => Err(Error::Config("give either --chart or --catalog, not both".into())),
            (Some(path), None) => Ok(InputSpec::ChartPath(path.clone())),
            (None, Some(family)) => Ok(InputSpec::Catalog {
                family,
                params: self.family_params()?,
            }),
            (None, None) => Err(Error::Config("no input: give --chart or --catalog".into())),
        }
    }

    fn run_config(&self, checks: Vec<CheckKind>) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::new(self.input()?);
        if let Some(l) = &self.lambda {
            cfg.lambdas = l.clone();
        }
        if let Some(s) = self.samples {
            cfg.sample_count = s;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.max_points = self.max_points.unwrap_or(DEFAULT_MAX_POINTS);
        let d = Tolerances::default();
        cfg.tolerances = Tolerances {
            c_tol: self.c_tol.unwrap_or(d.c_tol),
            spread_tol: self.spread_tol.unwrap_or(d.spread_tol),
            identity_tol: self.identity_tol.unwrap_or(d.identity_tol),
            codazzi_tol: self.codazzi_tol.unwrap_or(d.codazzi_tol),
        };
        cfg.checks = checks;
        Ok(cfg)
    }
}

fn transforms(dilation: &[f64], rotation: &[String], translation: &[String]) -> Result<Vec<ProbeTransform>, Error> {
    let mut out: Vec<ProbeTransform> = dilation.iter().map(|&rho| ProbeTransform::Dilation { rho }).collect();
    for r in rotation {
        let parts: Vec<&str> = r.split(',').map(str::trim).collect();
        let bad = || Error::Config(format!("rotation expects `i,j,angle`, got `{r}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        out.push(ProbeTransform::LorentzRotation {
            i: parts[0].parse().map_err(|_| bad())?,
            j: parts[1].parse().map_err(|_| bad())?,
            angle: parts[2].parse().map_err(|_| bad())?,
        });
    }
    for t in translation {
        out.push(ProbeTransform::Translation { b: parse_list(t)? });
    }
    if out.is_empty() {
        out = vec![
            ProbeTransform::Dilation { rho: 2.0 },
            ProbeTransform::LorentzRotation { i: 0, j: 1, angle: 0.4 },
        ];
    }
    Ok(out)
}

fn init_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("CONFORMA_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("CONFORMA_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Config(e.to_string()))
        }
    }
}

/// Returns whether every requested check passed.
fn execute(cli: Cli) -> Result<bool, Error> {
    init_threads()?;
    let (common, checks, probe) = match &cli.command {
        Command::Check(c) => (c, vec![CheckKind::Isoparametric, CheckKind::Classify], None),
        Command::Identities(c) => (c, vec![CheckKind::Identities], None),
        Command::Invariants(c) => (c, vec![CheckKind::Invariants], None),
        Command::Theorem1(c) => (c, vec![CheckKind::Theorem1], None),
        Command::Probe {
            common,
            dilation,
            rotation,
            translation,
        } => (common, vec![CheckKind::InvarianceProbe], Some(transforms(dilation, rotation, translation)?)),
        Command::Catalog { common, emit: do_emit } => {
            let (c, _) = common.merged()?;
            let family = c.catalog.ok_or_else(|| Error::Config("catalog needs --family".into()))?;
            let entry = build_entry(family, &c.family_params()?)?;
            if *do_emit {
                emit(&entry.source, c.output.as_ref())?;
            } else {
                let lambda = entry.params.lambda.unwrap_or(0.0);
                let v = serde_json::json!({
                    "family": entry.family,
                    "classification_case": entry.family.classification_case(),
                    "params": entry.params,
                    "oracle": oracle_eigenvalues(&entry, lambda),
                    "lambda": lambda,
                    "notes": entry.notes,
                    "source": entry.source,
                });
                emit(&canonical_json(&v), c.output.as_ref())?;
            }
            return Ok(true);
        }
    };
    let (c, file_checks) = common.merged()?;
    let mut cfg = c.run_config(file_checks.unwrap_or(checks))?;
    if let Some(t) = probe {
        cfg.transforms = t;
    }
    let report = run(&cfg)?;
    emit(&report.to_canonical_json(), c.output.as_ref())?;
    Ok(report.passed)
}

fn fail(kind: &str, message: String, point: Option<&[f64]>) -> ExitCode {
    let mut detail = serde_json::json!({"kind": kind, "message": message});
    if let Some(p) = point {
        detail["point"] = serde_json::json!(p);
    }
    let _ = writeln!(std::io::stderr(), "{}", serde_json::json!({ "error": detail }));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("UsageError", e.to_string().trim().to_string(), None),
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            let point = match &e {
                Error::NotSpacelike { point, .. }
                | Error::UmbilicPoint { point, .. }
                | Error::DegenerateNormal { point, .. } => Some(point.as_slice()),
                _ => None,
            };
            fail(e.kind(), e.to_string(), point)
        }
    }
}
