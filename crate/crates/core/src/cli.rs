//! Command-line front end.
//!
//! `run` is the whole program minus process plumbing: it takes argv and
//! returns the exit code and the text destined for stdout and stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::classgrp::{class_group, class_group_ell};
use crate::curvehom::{curve_profile, mv_profile, ConfigGraph, CurveProfile};
use crate::dualgraph::{gen_ade, gen_hj, validate, DynkinType, ValidationReport};
use crate::dualizing::{dualizing_report, SurfaceSpec};
use crate::error::Error;
use crate::exactlat::{Coefficients, FgAbGroup, LModule, Prime};
use crate::perversity::{check_perverse, parse_strata, PerversityVerdict, StratumProfile};
use crate::surfhom::{
    local_homology_general, local_homology_rational, GeneralCurveInput, HomologyProfile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const JSON_SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "ratsing",
    version,
    about = "Class groups, l-adic homology and dualizing complexes of rational surface singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// The prime l of the coefficient ring Z_l / Q_l.
    #[arg(long, global = true)]
    ell: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Integral)]
    mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Integral,
    Rational,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a dual graph (requires --ell).
    Check { input: String },
    /// Divisor class group Cl(X); with --ell also its l-part.
    Classgroup { input: String },
    /// Local homology profile H_q(X) (requires --ell).
    Homology {
        input: String,
        /// Rank of H^1(E, Λ); switches to the general (non-rational) assembly.
        #[arg(long)]
        h1_rank: Option<usize>,
    },
    /// Homology of the exceptional curve configuration.
    Curve { input: String },
    /// Dualizing-complex report for a surface JSON file.
    Dualizing { input: String },
    /// Check perverse support/cosupport conditions for a strata JSON file.
    Perversity { input: String },
    /// Generate a graph.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Inspect the shipped catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// ADE configuration, e.g. `A3`, `D5`, `E8`.
    Ade { name: String },
    /// Hirzebruch–Jung chain of the cyclic quotient of type (k, a).
    Hj { k: i64, a: i64 },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    Show { name: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOutput {
    pub schema: u32,
    pub report: ValidationReport,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassGroupOutput {
    pub schema: u32,
    pub graph: String,
    pub class_group: FgAbGroup,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_part: Option<LModule>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyOutput {
    pub schema: u32,
    pub profile: HomologyProfile,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveOutput {
    pub schema: u32,
    pub graph: String,
    pub profile: CurveProfile,
    pub mayer_vietoris_agrees: bool,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerversityOutput {
    pub schema: u32,
    pub strata: Vec<StratumProfile>,
    pub verdict: PerversityVerdict,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogOutput {
    pub schema: u32,
    pub graphs: Vec<String>,
}

enum Failure {
    Usage(String),
    Input(String),
    Domain(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Json(_) | Error::UnknownCatalogGraph(_) => {
                Failure::Input(e.to_string())
            }
            Error::NotPrime(_) => Failure::Usage(e.to_string()),
            Error::ValidationFailed(ref report) => {
                Failure::Domain(e.to_string(), report.to_string())
            }
            Error::PointValidationFailed { ref report, .. } => {
                Failure::Domain(e.to_string(), report.to_string())
            }
            _ => Failure::Domain(e.to_string(), String::new()),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Input(msg)) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(msg, detail)) => {
            let mut stderr = format!("error: {msg}\n");
            if !detail.is_empty() {
                stderr.push_str(&detail);
                stderr.push('\n');
            }
            Outcome {
                code: EXIT_DOMAIN,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn required_ell(opts: &GlobalOpts, command: &str) -> Result<Prime, Failure> {
    let ell = opts
        .ell
        .ok_or_else(|| Failure::Usage(format!("`{command}` requires --ell <PRIME>")))?;
    Ok(Prime::new(ell)?)
}

fn optional_ell(opts: &GlobalOpts) -> Result<Option<Prime>, Failure> {
    opts.ell.map(Prime::new).transpose().map_err(Failure::from)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = &cli.opts;
    let json = opts.format == Format::Json;
    match &cli.command {
        Command::Check { input } => {
            let ell = required_ell(opts, "check")?;
            let g = catalog::resolve(input)?;
            let report = validate(&g, ell);
            let stdout = if json {
                to_json(&CheckOutput {
                    schema: JSON_SCHEMA,
                    report: report.clone(),
                })
            } else {
                format!("{report}\n")
            };
            let code = if report.overall { EXIT_OK } else { EXIT_DOMAIN };
            let stderr = if report.overall {
                String::new()
            } else {
                let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                format!("error: validation failed: {}\n", names.join(", "))
            };
            Ok(Outcome {
                code,
                stdout,
                stderr,
            })
        }
        Command::Classgroup { input } => {
            let ell = optional_ell(opts)?;
            let g = catalog::resolve(input)?;
            let cl = class_group(&g)?;
            let ell_part = ell.map(|p| class_group_ell(&g, p)).transpose()?;
            if json {
                return Ok(Outcome::ok(to_json(&ClassGroupOutput {
                    schema: JSON_SCHEMA,
                    graph: g.name().to_owned(),
                    text: cl.to_string(),
                    class_group: cl,
                    ell_part,
                })));
            }
            let mut out = format!("{cl}\n");
            if let (Some(p), Some(m)) = (ell, ell_part) {
                let _ = writeln!(out, "Cl ⊗ Z_{p} = {m}");
            }
            Ok(Outcome::ok(out))
        }
        Command::Homology { input, h1_rank } => {
            let ell = required_ell(opts, "homology")?;
            let g = catalog::resolve(input)?;
            let mode = match opts.mode {
                Mode::Integral => Coefficients::Integral,
                Mode::Rational => Coefficients::Rational,
            };
            let profile = match h1_rank {
                None => local_homology_rational(&g, ell, mode)?,
                Some(rank) => {
                    let extra = GeneralCurveInput {
                        h1_rank: *rank,
                        h1_homology: None,
                    };
                    let mut p = local_homology_general(&g, ell, &extra)?;
                    if mode == Coefficients::Rational {
                        p = rationalized(p);
                    }
                    p
                }
            };
            if json {
                return Ok(Outcome::ok(to_json(&HomologyOutput {
                    schema: JSON_SCHEMA,
                    profile,
                })));
            }
            Ok(Outcome::ok(render_homology(&profile)))
        }
        Command::Curve { input } => {
            let g = catalog::resolve(input)?;
            let config = ConfigGraph::from(&g);
            let profile = curve_profile(&config)?;
            let agrees = mv_profile(&config)? == profile;
            if json {
                return Ok(Outcome::ok(to_json(&CurveOutput {
                    schema: JSON_SCHEMA,
                    graph: g.name().to_owned(),
                    profile,
                    mayer_vietoris_agrees: agrees,
                })));
            }
            Ok(Outcome::ok(render_curve(g.name(), &profile, agrees)))
        }
        Command::Dualizing { input } => {
            let text = catalog::read_text(Path::new(input))?;
            let mut spec = SurfaceSpec::from_json(&text, catalog::resolve)?;
            if let Some(p) = optional_ell(opts)? {
                spec.ell = p;
            }
            let report = dualizing_report(&spec)?;
            Ok(Outcome::ok(if json {
                to_json(&report)
            } else {
                format!("{report}\n")
            }))
        }
        Command::Perversity { input } => {
            let text = catalog::read_text(Path::new(input))?;
            let strata = match parse_strata(&text) {
                Ok(s) => s,
                Err(e @ Error::InvalidDelta { .. }) => return Err(Failure::Input(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            let verdict = check_perverse(&strata)?;
            if json {
                return Ok(Outcome::ok(to_json(&PerversityOutput {
                    schema: JSON_SCHEMA,
                    strata,
                    verdict,
                })));
            }
            Ok(Outcome::ok(format!(
                "left_ok = {}\nright_ok = {}\nperverse = {}\n",
                verdict.left_ok, verdict.right_ok, verdict.perverse
            )))
        }
        Command::Gen(GenCommand::Ade { name }) => {
            let t: DynkinType = name.parse().map_err(Failure::Usage)?;
            Ok(Outcome::ok(gen_ade(t.family, t.n)?.to_json()))
        }
        Command::Gen(GenCommand::Hj { k, a }) => Ok(Outcome::ok(gen_hj(*k, *a)?.to_json())),
        Command::Catalog(CatalogCommand::List) => {
            let graphs = catalog::names();
            Ok(Outcome::ok(if json {
                to_json(&CatalogOutput {
                    schema: JSON_SCHEMA,
                    graphs,
                })
            } else {
                graphs.iter().map(|n| format!("{n}\n")).collect()
            }))
        }
        Command::Catalog(CatalogCommand::Show { name }) => {
            Ok(Outcome::ok(catalog::load(name)?.to_json()))
        }
    }
}

fn rationalized(mut p: HomologyProfile) -> HomologyProfile {
    p.coefficients = Coefficients::Rational;
    for e in &mut p.entries {
        e.module = e.module.clone().rationalize();
    }
    if let Some(ext) = &mut p.h2_extension {
        ext.torsion = ext.torsion.clone().rationalize();
    }
    p
}

fn render_homology(p: &HomologyProfile) -> String {
    let ring = match p.coefficients {
        Coefficients::Integral => format!("Z_{}", p.ell),
        Coefficients::Rational => format!("Q_{}", p.ell),
    };
    let mut out = format!("homology of {} over {ring}\n", p.graph);
    for e in &p.entries {
        let _ = writeln!(
            out,
            "H_{} = {:<24} [{}]",
            e.degree,
            e.module.to_string(),
            e.source
        );
    }
    out
}

fn render_curve(name: &str, p: &CurveProfile, agrees: bool) -> String {
    fn show(s: &Option<crate::exactlat::Summand>) -> String {
        match s {
            None => "0".to_owned(),
            Some(s) if s.free_rank == 1 => format!("Λ({})", s.twist),
            Some(s) => format!("Λ^{}({})", s.free_rank, s.twist),
        }
    }
    let mut out = format!(
        "curve configuration {name}: r = {}, n = {}\n",
        p.components, p.curves
    );
    for q in 0..3 {
        let _ = writeln!(out, "H_{q} = {}", show(&p.homology[q]));
    }
    for q in 0..3 {
        let _ = writeln!(out, "H^{q} = {}", show(&p.cohomology[q]));
    }
    let _ = writeln!(out, "basis: {}", p.basis_labels.join(", "));
    let _ = writeln!(
        out,
        "mayer-vietoris: {}",
        if agrees { "agrees" } else { "DIFFERS" }
    );
    out
}
