//! Command-line front end: job files in, exact reports out.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inconclusive (level cap),
//! 4 internal consistency failure.

pub mod job;
pub mod report;

use std::collections::BTreeMap;
use std::str::FromStr;

use logpoisson::cartan::check_cgl;
use logpoisson::deform::{deform, t_pfaffian, DeformConfig, Schedule, Smoothing, DEFAULT_LEVEL_CAP};
use logpoisson::linalg::{rat, Rational};
use logpoisson::logcan::{LogCanonicalStructure, SmoothableWeight, SmoothingDiagram};
use logpoisson::Error;
use thiserror::Error as ThisError;

pub use job::{CoefficientKey, JobFile, Problem, Rat};
use report::{Checks, Report, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Inconsistent(_) => EXIT_INTERNAL,
            CliError::Engine(e) => match e {
                Error::CapExceeded { .. } => EXIT_INCONCLUSIVE,
                Error::NonDivisible { .. }
                | Error::InhomogeneousInput
                | Error::NoValidIndex(_)
                | Error::NotClosed(_)
                | Error::JacobiResidue(_)
                | Error::Internal(_) => EXIT_INTERNAL,
                _ => EXIT_VALIDATION,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Deform,
    Pfaffian,
    CheckCgl,
    ExportDot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Settings {
    pub format: Format,
    pub schedule: Schedule,
    /// `pfaffian` of the log-canonical part instead of the deformation.
    pub pfaffian_of_base: bool,
}

/// Command-line replacements for job-file options.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub subset: Option<Vec<[usize; 2]>>,
    pub coefficients: Vec<(String, Rat)>,
    pub level_cap: Option<usize>,
    pub oracle_box: Option<u32>,
}

impl Overrides {
    pub fn apply(&self, job: &mut JobFile) -> Result<(), CliError> {
        if let Some(subset) = &self.subset {
            job.options_mut().subset = Some(subset.clone());
        }
        if let Some(cap) = self.level_cap {
            job.options_mut().level_cap = Some(cap);
        }
        if let Some(b) = self.oracle_box {
            job.options_mut().oracle_box = Some(b);
        }
        for (name, value) in &self.coefficients {
            job.coefficients_mut().insert(name.clone(), value.clone());
        }
        job.normalize()
    }
}

/// A finished job: the rendered body and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub body: String,
    pub code: i32,
}

/// Everything a command needs, derived once from the job file.
struct Context {
    problem: Problem,
    structure: LogCanonicalStructure,
    all: Vec<SmoothableWeight>,
    selected: Vec<SmoothableWeight>,
    level_cap: usize,
}

impl Context {
    fn new(job: &JobFile) -> Result<Self, CliError> {
        let problem = job.build()?;
        let structure = problem.datum()?.induced_structure();
        let all = structure.smoothable_weights()?;
        let selected = match &job.options().subset {
            None => all.clone(),
            Some(borders) => borders
                .iter()
                .map(|&[j, k]| {
                    all.iter().find(|w| w.border == (j - 1, k - 1)).cloned().ok_or_else(|| {
                        CliError::Validation(format!("subset entry {j}:{k} is not the border of a smoothable weight"))
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        let level_cap = job.options().level_cap.unwrap_or(DEFAULT_LEVEL_CAP);
        Ok(Context { problem, structure, all, selected, level_cap })
    }

    /// Pairs each selected weight with its coefficient: explicit entries
    /// first, then the Bott-Samelson preset for Cartan jobs, else 1.
    /// Explicit entries for unselected weights are ignored.
    fn smoothings(&self, job: &JobFile) -> Result<Vec<Smoothing>, CliError> {
        let explicit = match job {
            JobFile::ActionDatum { c, .. } | JobFile::Cartan { c, .. } => c,
        };
        let mut chosen: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (name, value) in explicit {
            let target = match CoefficientKey::from_str(name)? {
                CoefficientKey::Border(j, k) => self.all.iter().find(|w| w.border == (j - 1, k - 1)),
                CoefficientKey::Left(j) => self.all.iter().find(|w| w.border.0 == j - 1),
            };
            let w = target
                .ok_or_else(|| CliError::Validation(format!("coefficient {name} does not name a smoothable weight")))?;
            if !self.selected.contains(w) {
                continue;
            }
            if chosen.insert(w.border, value.0.clone()).is_some() {
                return Err(CliError::Validation(format!("two coefficients name the weight at {name}")));
            }
        }
        let preset = match &self.problem {
            Problem::Cartan(c) => c.bott_samelson_c(),
            Problem::Datum(_) => BTreeMap::new(),
        };
        Ok(self
            .selected
            .iter()
            .map(|w| {
                let coefficient =
                    chosen.get(&w.border).or_else(|| preset.get(&w.border.0)).cloned().unwrap_or_else(|| rat(1));
                Smoothing { weight: w.clone(), coefficient }
            })
            .collect())
    }

    fn config(&self, settings: &Settings) -> DeformConfig {
        DeformConfig { level_cap: self.level_cap, schedule: settings.schedule }
    }
}

fn verdict(result: logpoisson::Result<bool>) -> Result<Verdict, CliError> {
    match result {
        Ok(true) => Ok(Verdict::Pass),
        Ok(false) => Ok(Verdict::Fail),
        Err(Error::CapExceeded { .. }) => Ok(Verdict::Inconclusive),
        Err(e) => Err(e.into()),
    }
}

/// Runs one command on one (already overridden) job.
pub fn run_job(command: Command, job: &JobFile, settings: &Settings) -> Result<Rendered, CliError> {
    let ctx = Context::new(job)?;
    let mut report = Report::new(command, job, &ctx.structure, &ctx.all);
    let mut checks = Checks::default();
    let mut code = EXIT_OK;

    match command {
        Command::Analyze => {
            report.lambda = Some(report::matrix(ctx.structure.brackets()));
            checks.t_log_symplectic = Some(Verdict::from(ctx.structure.is_t_log_symplectic()));
            report.diagram =
                Some(report::DiagramEntry::new(&SmoothingDiagram::build(ctx.structure.dim(), &ctx.selected)?));
            checks.w1 = Some(verdict(ctx.structure.check_w1(&ctx.selected, ctx.level_cap))?);
            checks.w2 = Some(verdict(ctx.structure.check_w2(&ctx.selected, ctx.level_cap))?);
            if let Some(bound) = job.options().oracle_box {
                let agrees = ctx.structure.brute_force_smoothable(bound) == ctx.all;
                checks.oracle = Some(Verdict::from(agrees));
                if !agrees {
                    code = EXIT_INTERNAL;
                }
            }
            let datum = ctx.problem.datum()?;
            report.predicates = Some(datum.analyze()?.predicates().into());
            if [checks.w1, checks.w2].contains(&Some(Verdict::Inconclusive)) {
                code = code.max(EXIT_INCONCLUSIVE);
            }
        }
        Command::Deform | Command::Pfaffian | Command::CheckCgl => {
            let smoothings = ctx.smoothings(job)?;
            let deformation = deform(&ctx.structure, &smoothings, ctx.config(settings))?;
            report.smoothings = Some(deformation.smoothings.iter().map(report::SmoothingEntry::new).collect());
            match command {
                Command::Deform => {
                    report.deformation = Some(report::DeformationEntry::new(&deformation));
                    checks.jacobi = Some(Verdict::Pass);
                }
                Command::Pfaffian => {
                    let pi = if settings.pfaffian_of_base { &deformation.orders[0] } else { &deformation.total };
                    report.set_pfaffian(&t_pfaffian(&ctx.structure, pi)?);
                }
                _ => {
                    let cgl = check_cgl(&ctx.problem.datum()?, &deformation.total)?;
                    checks.cgl = Some(Verdict::from(cgl.passes));
                    if !cgl.passes {
                        code = EXIT_INTERNAL;
                    }
                    report.cgl = Some(report::CglEntry::new(&cgl));
                }
            }
        }
        Command::ExportDot => {
            let dot = SmoothingDiagram::build(ctx.structure.dim(), &ctx.selected)?.to_dot();
            return Ok(Rendered { body: dot, code });
        }
    }
    report.checks = checks;
    let body = match settings.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Ok(Rendered { body, code })
}

/// Reads, overrides and runs one job file, folding every failure into an
/// exit code and a message for stderr.
pub fn run_path(
    command: Command,
    path: &str,
    overrides: &Overrides,
    settings: &Settings,
) -> (Option<Rendered>, Option<String>, i32) {
    let result = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.to_string(), message: e.to_string() })
        .and_then(|text| JobFile::parse(&text))
        .and_then(|mut job| {
            overrides.apply(&mut job)?;
            run_job(command, &job, settings)
        });
    match result {
        Ok(r) => {
            let code = r.code;
            (Some(r), None, code)
        }
        Err(e) => {
            let code = e.exit_code();
            (None, Some(format!("{path}: {e}")), code)
        }
    }
}
