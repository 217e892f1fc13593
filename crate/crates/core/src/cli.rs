//! Command-line front end. `run` parses arguments, writes the requested
//! artifact and returns the process exit status: 0 when every certificate
//! passes, 1 when one fails, 2 on a usage error.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::actions::{
    builtin_actions, hopf, sp1_h_imh, sp1_right_h2, sp1sp1_h3h, spm_u1, su2_geodesic, su2_sym3_dual, so3_sym6_real, u1_weights, u2_c4,
    validate, SphereAction,
};
use crate::closedform::{self, c2r3_f, c2r3_ranges, wcp1_k, wcp1_k_monotone, wcp1_metric_coeff, MonotoneReport, WCP1Params};
use crate::eliminator::{builtin_catalog, load_catalog, run_catalog, theorem_catalog};
use crate::numkern::RANK_TOL;
use crate::oneill::{fmt17, frame_at, kappa_scan, plane_curvature};
use crate::thorpe::{self, AuditTolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "orbcurv", version, about = "Curvature of orbit spaces of isometric actions on spheres")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Certificate tolerance; each subcommand has its own default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct ActionArgs {
    /// hopf, wcp1, su2-h2, sp1-right, u2-c4, c2r3, so3-r7, h3xh, spm-u1
    #[arg(long)]
    pub action: String,
    #[arg(long, default_value_t = 2)]
    pub a: i64,
    #[arg(long, default_value_t = 1)]
    pub b: i64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub r: i64,
    #[arg(long, default_value_t = 0)]
    pub s: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample regular points and horizontal planes, report the minimum curvature.
    KappaScan {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 10)]
        planes: usize,
    },
    /// K(r) of a weighted projective line.
    Wcp1 {
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value_t = 500)]
        grid: usize,
    },
    /// Warped product curvatures for SU(2) on C^2 + R^3.
    C2r3 {
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// K(i_R^h ^ j_R^h) for SU(2) on H^2, closed form against the engine.
    Su2H2 {
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// JSON certificate for the curvature-1 planes of S^7 / SU(2).
    ThorpeAudit {
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Points per curvature-1 circle.
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// (t, K(i_R^h ^ j_R^h)) on (0, pi/6).
    FigureKij {
        #[arg(long, default_value_t = 500)]
        grid: usize,
    },
    /// (t, C_i / alpha_i) on (0, pi/6).
    FigureCOverAlpha {
        #[arg(long, default_value_t = 500)]
        grid: usize,
    },
    /// Run the elimination rules over a candidate catalog.
    Eliminate {
        /// JSON list of candidates; the built-in catalog when absent.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Built-in actions, theorem cases and candidates.
    Catalog,
    /// Antisymmetry and closure checks of the built-in actions.
    Validate {
        #[arg(long)]
        action: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Certificate(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub fn action_by_name(args: &ActionArgs) -> Result<SphereAction, CliError> {
    let usage = |e: &dyn std::fmt::Display| CliError::Usage(e.to_string());
    Ok(match args.action.as_str() {
        "hopf" => hopf(),
        "wcp1" => u1_weights(&[args.a, args.b], 1).map_err(|e| usage(&e))?,
        "su2-h2" => su2_sym3_dual(),
        "sp1-right" => sp1_right_h2(),
        "u2-c4" => u2_c4(),
        "c2r3" => sp1_h_imh(),
        "so3-r7" => so3_sym6_real(),
        "h3xh" => sp1sp1_h3h().action,
        "spm-u1" => spm_u1(args.m, args.r, args.s).map_err(|e| usage(&e))?,
        other => return Err(CliError::Usage(format!("unknown action '{other}'"))),
    })
}

/// A numeric table written as CSV (17 significant digits) or JSON.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    columns: &'a [&'static str],
    rows: &'a [Vec<f64>],
}

impl Table {
    fn write(&self, out: &mut dyn Write, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|x| fmt17(*x)))?;
                }
                w.flush()?;
            }
            Format::Json => write_json(out, &JsonTable { columns: &self.columns, rows: &self.rows })?,
        }
        Ok(())
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Certificate(message()))
    }
}

fn execute(cfg: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.command {
        Command::KappaScan { action, points, planes } => {
            if *points == 0 || *planes == 0 {
                return Err(CliError::Usage("--points and --planes must be at least 1".into()));
            }
            let act = action_by_name(action)?;
            let report = kappa_scan(&act, *points, *planes, cfg.seed, true).map_err(|e| CliError::Certificate(e.to_string()))?;
            match cfg.format {
                Format::Csv => report.write_csv(&mut *out)?,
                Format::Json => write_json(out, &report)?,
            }
            let (Some(min), Some(max)) = (report.min, report.max) else {
                return Err(CliError::Certificate(format!("{}: no regular point among {} samples", report.action, points)));
            };
            writeln!(log, "{}: min {} max {} over {} regular points", report.action, fmt17(min), fmt17(max), report.n_regular)?;
            let tol = cfg.tol.unwrap_or(1e-9);
            check(min >= 1.0 - tol, || format!("curvature {min} below 1 - {tol:e}"))
        }
        Command::Wcp1 { a, b, grid } => {
            let params = WCP1Params::new(*a, *b).map_err(|e| CliError::Usage(e.to_string()))?;
            let rows = (0..*grid)
                .map(|i| {
                    let r = FRAC_PI_2 * (i + 1) as f64 / (*grid + 1) as f64;
                    Ok(vec![r, wcp1_k(params, r)?, wcp1_metric_coeff(params, r)?])
                })
                .collect::<Result<Vec<_>, closedform::ClosedFormError>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Table { columns: vec!["r", "K", "metric_coeff"], rows }.write(out, cfg.format)?;
            let tol = cfg.tol.unwrap_or(1e-12);
            let report = wcp1_k_monotone(params, (*grid).max(2)).map_err(|e| CliError::Certificate(e.to_string()))?;
            writeln!(log, "K_inf {} K_sup {}", fmt17(params.k_inf()), fmt17(params.k_sup()))?;
            match report {
                MonotoneReport::Constant { max_deviation, .. } => {
                    check(max_deviation < tol, || format!("equal weights but K varies by {max_deviation:e}"))
                }
                MonotoneReport::Increasing { numerator_positive, .. } => {
                    check(numerator_positive, || "K' numerator is not positive on the grid".into())
                }
                other => Err(CliError::Certificate(format!("K is not monotone: {other:?}"))),
            }
        }
        Command::C2r3 { grid } => {
            let rs: Vec<f64> = (0..*grid).map(|i| FRAC_PI_2 * (i + 1) as f64 / (*grid + 1) as f64).collect();
            let rows = rs
                .iter()
                .map(|&r| {
                    let w = c2r3_f(r);
                    vec![r, w.f, w.df, w.d2f, w.radial_curvature(), w.spherical_curvature(), w.spherical_curvature_unsquared()]
                })
                .collect();
            Table { columns: vec!["r", "f", "df", "d2f", "radial", "spherical", "spherical_unsquared"], rows }.write(out, cfg.format)?;
            let ranges = c2r3_ranges(&rs);
            let tol = cfg.tol.unwrap_or(1e-9);
            writeln!(
                log,
                "radial [{}, {}] spherical min {}",
                fmt17(ranges.radial.min),
                fmt17(ranges.radial.max),
                fmt17(ranges.spherical.min)
            )?;
            check(ranges.radial.min >= 1.75 - tol && ranges.radial.max <= 13.0 + tol, || {
                format!("radial curvature leaves [7/4, 13]: [{}, {}]", ranges.radial.min, ranges.radial.max)
            })?;
            check(ranges.spherical.min >= 9.0 - tol, || format!("spherical curvature below 9: {}", ranges.spherical.min))
        }
        Command::Su2H2 { grid } => {
            let action = thorpe::su2_action();
            let mut rows = Vec::with_capacity(*grid);
            for t in closedform::grid(0.0, FRAC_PI_6, *grid, 1e-3) {
                let f = thorpe::lifted_frame(t).map_err(|e| CliError::Certificate(e.to_string()))?;
                let p = su2_geodesic(t);
                let tf = frame_at(&action, &p, RANK_TOL).map_err(|e| CliError::Certificate(e.to_string()))?;
                let engine = plane_curvature(&action, &tf, &f[1], &f[2]).map_err(|e| CliError::Certificate(e.to_string()))?.value;
                let closed = closedform::su2_k_ij(t);
                rows.push(vec![t, closed, engine, (closed - engine).abs()]);
            }
            let worst = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
            Table { columns: vec!["t", "k_closed", "k_engine", "residual"], rows }.write(out, cfg.format)?;
            let tol = cfg.tol.unwrap_or(1e-8);
            writeln!(log, "t0 {} max residual {:e}", fmt17(closedform::t0()), worst)?;
            check(worst < tol, || format!("engine and closed form differ by {worst:e}"))
        }
        Command::ThorpeAudit { grid, points } => {
            let audit = thorpe::thorpe_audit(*grid, *points, AuditTolerances::default())
                .map_err(|e| CliError::Certificate(e.to_string()))?;
            write_json(out, &audit)?;
            writeln!(log, "t0 {} delta {}", fmt17(audit.t0), fmt17(audit.delta))?;
            check(audit.passed(), || audit.failures.join("; "))
        }
        Command::FigureKij { grid } => {
            let rows = closedform::grid(0.0, FRAC_PI_6, *grid, 1e-4).into_iter().map(|t| vec![t, closedform::su2_k_ij(t)]).collect();
            Table { columns: vec!["t", "K"], rows }.write(out, cfg.format)
        }
        Command::FigureCOverAlpha { grid } => {
            let rows = closedform::grid(0.0, FRAC_PI_6, *grid, 1e-4)
                .into_iter()
                .map(|t| {
                    let ap = closedform::appendix_funcs(t)?;
                    let (c, al) = (closedform::c_funcs(t), ap.alpha());
                    Ok(vec![t, c[0] / al[0], c[1] / al[1], c[2] / al[2]])
                })
                .collect::<Result<Vec<_>, closedform::ClosedFormError>>()
                .map_err(|e| CliError::Certificate(e.to_string()))?;
            Table { columns: vec!["t", "c1_over_alpha1", "c2_over_alpha2", "c3_over_alpha3"], rows }.write(out, cfg.format)
        }
        Command::Eliminate { catalog } => {
            let (candidates, builtin) = match catalog {
                Some(path) => (load_catalog(path).map_err(|e| CliError::Usage(e.to_string()))?, false),
                None => (builtin_catalog(), true),
            };
            let report = run_catalog(&candidates).map_err(|e| CliError::Usage(e.to_string()))?;
            match cfg.format {
                Format::Json => write_json(out, &report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["name", "eliminated", "rules", "arithmetic"])?;
                    for r in &report.reports {
                        let rules = r.eliminated_by.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                        let arithmetic =
                            r.verdicts.iter().filter(|v| v.eliminated()).map(|v| v.arithmetic()).filter(|s| !s.is_empty());
                        w.write_record([r.name.clone(), r.eliminated.to_string(), rules, arithmetic.collect::<Vec<_>>().join(" | ")])?;
                    }
                    w.flush()?;
                }
            }
            check(report.mismatches.is_empty() && report.inconsistent_verdicts.is_empty(), || {
                [report.mismatches.clone(), report.inconsistent_verdicts.clone()].concat().join("; ")
            })?;
            check(!builtin || report.survivors_match_theorem, || format!("survivors {:?} do not match cases (i)-(v)", report.survivors))
        }
        Command::Catalog => {
            #[derive(Serialize)]
            struct Catalog {
                actions: Vec<crate::actions::ActionRecord>,
                theorem: Vec<crate::eliminator::CaseRecord>,
                candidates: Vec<crate::eliminator::Candidate>,
            }
            let catalog = Catalog {
                actions: builtin_actions().iter().map(SphereAction::record).collect(),
                theorem: theorem_catalog(),
                candidates: builtin_catalog(),
            };
            match cfg.format {
                Format::Json => write_json(out, &catalog),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["name", "ambient_dim", "group_dim", "group_rank"])?;
                    for a in &catalog.actions {
                        w.write_record([a.name.clone(), a.ambient_dim.to_string(), a.group_dim.to_string(), a.group_rank.to_string()])?;
                    }
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::Validate { action } => {
            let actions = match action {
                Some(name) => {
                    let args = ActionArgs { action: name.clone(), a: 2, b: 1, m: 1, r: 1, s: 0 };
                    vec![action_by_name(&args)?]
                }
                None => builtin_actions(),
            };
            let reports: Vec<_> = actions.iter().map(validate).collect();
            match cfg.format {
                Format::Json => write_json(out, &reports)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["name", "max_antisymmetry", "max_closure_residual", "passed"])?;
                    for r in &reports {
                        w.write_record([r.name.clone(), fmt17(r.max_antisymmetry), fmt17(r.max_closure_residual), r.passed().to_string()])?;
                    }
                    w.flush()?;
                }
            }
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| format!("{}: {:?}", r.name, r.failures)).collect();
            check(failed.is_empty(), || failed.join("; "))
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cfg.out {
        Some(path) => match File::create(path) {
            Ok(mut f) => execute(&cfg, &mut f, stderr),
            Err(e) => Err(CliError::Usage(format!("cannot create {}: {e}", path.display()))),
        },
        None => execute(&cfg, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Certificate(msg)) => {
            let _ = writeln!(stderr, "certificate failed: {msg}");
            1
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
