//! Command implementations. Each returns a [`Report`] (or raw JSON for
//! `gen`) together with the process exit code.

use std::time::Instant;

use koszul_points_core::config::ConfigError;
use koszul_points_core::families::{self, FamilyError};
use koszul_points_core::filtration::recheck_certificate;
use koszul_points_core::lambda::{LambdaError, SearchOptions};
use koszul_points_core::oracle::{OracleError, OracleField, OracleOptions};
use koszul_points_core::pipeline::{certify, CertifyOptions, PipelineError, Verdict};
use koszul_points_core::quadrics::{descent_check, imposes_independent_on_quadrics, quadric_count, quadric_evaluation, Evidence};
use koszul_points_core::scan::{conjecture_scan, ScanError, ScanOptions, ScanOutcome};
use koszul_points_core::{Configuration, Field, PointSet, PrimeField, Rationals};

use crate::cli::{CertifyArgs, Command, DescentArgs, FamilyArg, FlatsArgs, GenArgs, OracleArgs, ScanArgs, WindowArgs};
use crate::format::{load_config, read_input, AnyConfig, InputError};
use crate::report::{
    indices, sets, CertificateDto, ConfigSummary, DescentSection, FlatDto, FlatsSection, GenerationDto, OracleSection,
    QuadricSection, Report, ScanSection, ScanTrialDto, SearchSection,
};
use crate::with_config;

pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INAPPLICABLE: i32 = 3;
    pub const REFUTED: i32 = 4;
    pub const RESOURCE: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Input(_) => exit::INPUT,
            CommandError::Resource(_) => exit::RESOURCE,
            CommandError::Internal(_) => exit::INTERNAL,
        }
    }
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Input(InputError::Usage(msg.into()))
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Capacity { .. } => CommandError::Resource(e.to_string()),
            other => usage(other.to_string()),
        }
    }
}

impl From<OracleError> for CommandError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Capacity(_) => CommandError::Resource(e.to_string()),
            OracleError::Window { .. } => usage(e.to_string()),
            OracleError::Config(c) => c.into(),
        }
    }
}

impl From<PipelineError> for CommandError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Lambda(LambdaError::Config(c)) => c.into(),
            PipelineError::Oracle(o) => o.into(),
            other => CommandError::Internal(other.to_string()),
        }
    }
}

impl From<FamilyError> for CommandError {
    fn from(e: FamilyError) -> Self {
        usage(e.to_string())
    }
}

impl From<ScanError> for CommandError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Pipeline(p) => p.into(),
            ScanError::NoSample(_) => CommandError::Resource(e.to_string()),
            other => usage(other.to_string()),
        }
    }
}

/// What a command produced.
#[derive(Clone, Debug)]
pub enum Output {
    Report(Box<Report>),
    /// Configuration JSON from `gen`.
    Json(String),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Report(r) => r.exit_code,
            Output::Json(_) => exit::OK,
        }
    }
}

pub fn run(command: &Command) -> Result<Output, CommandError> {
    let start = Instant::now();
    let mut out = match command {
        Command::Flats(a) => Output::Report(Box::new(cmd_flats(a)?)),
        Command::Certify(a) => Output::Report(Box::new(cmd_certify(a)?)),
        Command::Descent(a) => Output::Report(Box::new(cmd_descent(a)?)),
        Command::Oracle(a) => Output::Report(Box::new(cmd_oracle(a)?)),
        Command::Gen(a) => Output::Json(cmd_gen(a)?),
        Command::Scan(a) => Output::Report(Box::new(cmd_scan(a)?)),
    };
    if let Output::Report(r) = &mut out {
        r.timing_ms = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
    }
    Ok(out)
}

fn window(w: &WindowArgs) -> OracleOptions {
    OracleOptions { i_max: w.imax, j_max: w.jmax, method: w.method.into(), bar_bound: w.bar_bound }
}

pub fn cmd_flats(a: &FlatsArgs) -> Result<Report, CommandError> {
    let cfg = load_config(&a.input)?;
    let mut report = Report::new("flats", Some(ConfigSummary::of(&cfg)));
    let section = with_config!(&cfg, c => {
        let lattice = c.flats_lattice(a.bound)?;
        let violating = c.two_r_condition(&lattice).err();
        FlatsSection {
            count: lattice.len(),
            flats: lattice.iter().map(|f| FlatDto { members: indices(f.members), span_dim: f.span_dim }).collect(),
            two_r_condition: violating.is_none(),
            violating_flat: violating.map(|f| FlatDto { members: indices(f.members), span_dim: f.span_dim }),
        }
    });
    report.verdict = "listed".into();
    report.flats = Some(section);
    Ok(report)
}

fn quadric_section<F: Field>(cfg: &Configuration<F>) -> QuadricSection {
    QuadricSection {
        independent_on_quadrics: imposes_independent_on_quadrics(cfg, cfg.all()),
        quadric_rank: quadric_evaluation(cfg, cfg.all()).rank(),
        quadric_count: quadric_count(cfg.dim()),
        generation: (&koszul_points_core::oracle::quadratic_generation_check(cfg)).into(),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::CertifiedKoszul => exit::OK,
        Verdict::CriterionInapplicable => exit::INAPPLICABLE,
        Verdict::OracleRefuted => exit::REFUTED,
        Verdict::BudgetExhausted => exit::RESOURCE,
    }
}

fn certify_typed<F: OracleField>(cfg: &Configuration<F>, digest: &str, a: &CertifyArgs, report: &mut Report) -> Result<(), CommandError> {
    let opts = CertifyOptions {
        search: SearchOptions { budget: a.budget, templates_only: a.templates_only, ..SearchOptions::default() },
        d_iso: a.d_iso,
        oracle: (!a.no_oracle).then(|| window(&a.window)),
    };
    let out = certify(cfg, &opts)?;
    report.verdict = out.verdict.name().into();
    report.exit_code = verdict_code(out.verdict);
    report.oracle = out.oracle.as_ref().map(OracleSection::from);
    match &out.certified {
        Some(c) => {
            report.search = Some(SearchSection {
                found: true,
                hypothesis: Some(c.hypothesis.to_string()),
                blocks: sets(&c.hypothesis.blocks()),
                lambda: sets(&c.found),
                exhaustive: false,
                budget_used: out.budget_used,
            });
            report.certificate = Some(CertificateDto::from_certificate(cfg, digest, &c.certificate));
            report.quadrics = Some(QuadricSection {
                independent_on_quadrics: c.quadrics_independent,
                quadric_rank: cfg.len(),
                quadric_count: quadric_count(cfg.dim()),
                generation: GenerationDto::from(&c.quadratic),
            });
        }
        None => {
            report.search = Some(SearchSection {
                found: false,
                hypothesis: None,
                blocks: Vec::new(),
                lambda: Vec::new(),
                exhaustive: out.exhaustive,
                budget_used: out.budget_used,
            });
            report.quadrics = Some(quadric_section(cfg));
            if out.exhaustive {
                report.notes.push("no family of flats with more than one member satisfies the witness condition".into());
            }
            if out.verdict == Verdict::BudgetExhausted {
                report.notes.push(format!("search stopped after {} checks; raise --budget", out.budget_used));
            }
            if a.no_oracle {
                report.notes.push("oracle skipped".into());
            }
        }
    }
    Ok(())
}

fn recheck_typed<F: Field>(cfg: &Configuration<F>, digest: &str, path: &str, report: &mut Report) -> Result<(), CommandError> {
    let text = read_input(path)?;
    let dto: CertificateDto = serde_json::from_str(&text)
        .map_err(|e| InputError::Json { source_name: path.into(), line: e.line(), column: e.column(), message: e.to_string() })?;
    let cert = dto.to_certificate(cfg, digest).map_err(|e| usage(format!("{path}: {e}")))?;
    recheck_certificate(cfg, &cert).map_err(|e| usage(format!("{path}: certificate rejected: {e}")))?;
    report.verdict = Verdict::CertifiedKoszul.name().into();
    report.exit_code = exit::OK;
    report.certificate = Some(dto);
    report.notes.push("certificate re-checked without searching".into());
    Ok(())
}

pub fn cmd_certify(a: &CertifyArgs) -> Result<Report, CommandError> {
    let cfg = load_config(&a.input)?;
    let digest = cfg.digest();
    let mut report = Report::new("certify", Some(ConfigSummary::of(&cfg)));
    if let Some(path) = &a.recheck {
        with_config!(&cfg, c => recheck_typed(c, &digest, path, &mut report))?;
        return Ok(report);
    }
    with_config!(&cfg, c => certify_typed(c, &digest, a, &mut report))?;
    if let (Some(path), Some(cert)) = (&a.out, &report.certificate) {
        let text = serde_json::to_string_pretty(cert).expect("plain data serializes");
        std::fs::write(path, text).map_err(|error| InputError::Io { path: path.clone(), error })?;
    }
    Ok(report)
}

fn descent_typed<F: OracleField>(cfg: &Configuration<F>, digest: &str, a: &DescentArgs, report: &mut Report) -> Result<(), CommandError> {
    for &i in &a.subset {
        if i >= cfg.len() {
            return Err(usage(format!("subset index {i} out of range for {} points", cfg.len())));
        }
    }
    let sub = PointSet::from_indices(a.subset.iter().copied());
    let certificate = if let Some(path) = &a.certificate {
        let text = read_input(path)?;
        let dto: CertificateDto = serde_json::from_str(&text)
            .map_err(|e| InputError::Json { source_name: path.clone(), line: e.line(), column: e.column(), message: e.to_string() })?;
        let cert = dto.to_certificate(cfg, digest).map_err(|e| usage(format!("{path}: {e}")))?;
        recheck_certificate(cfg, &cert).map_err(|e| usage(format!("{path}: certificate rejected: {e}")))?;
        Some(cert)
    } else if a.assume_koszul {
        None
    } else {
        let opts = CertifyOptions {
            search: SearchOptions { budget: a.budget, ..SearchOptions::default() },
            oracle: None,
            ..CertifyOptions::default()
        };
        let out = certify(cfg, &opts)?;
        report.search = Some(SearchSection {
            found: out.certified.is_some(),
            hypothesis: out.certified.as_ref().map(|c| c.hypothesis.to_string()),
            blocks: out.certified.as_ref().map(|c| sets(&c.hypothesis.blocks())).unwrap_or_default(),
            lambda: out.certified.as_ref().map(|c| sets(&c.found)).unwrap_or_default(),
            exhaustive: out.exhaustive,
            budget_used: out.budget_used,
        });
        out.certified.map(|c| c.certificate)
    };
    let evidence = match (&certificate, a.assume_koszul) {
        (Some(c), _) => Evidence::Certificate(c),
        (None, true) => Evidence::Asserted,
        (None, false) => Evidence::None,
    };
    let verdict = descent_check(cfg, sub, evidence).map_err(|e| usage(e.to_string()))?;
    report.verdict = if verdict.koszul_by_descent { "koszul-by-descent" } else { "inapplicable" }.into();
    report.exit_code = if verdict.koszul_by_descent { exit::OK } else { exit::INAPPLICABLE };
    report.descent = Some(DescentSection::of(cfg.field(), sub, &verdict));
    Ok(())
}

pub fn cmd_descent(a: &DescentArgs) -> Result<Report, CommandError> {
    let cfg = load_config(&a.input)?;
    let digest = cfg.digest();
    let mut report = Report::new("descent", Some(ConfigSummary::of(&cfg)));
    with_config!(&cfg, c => descent_typed(c, &digest, a, &mut report))?;
    Ok(report)
}

pub fn cmd_oracle(a: &OracleArgs) -> Result<Report, CommandError> {
    let cfg = load_config(&a.input)?;
    let mut report = Report::new("oracle", Some(ConfigSummary::of(&cfg)));
    let opts = window(&a.window);
    let (section, quadrics) = with_config!(&cfg, c => {
        let r = OracleField::run_oracle(c, &opts)?;
        (OracleSection::from(&r), quadric_section(c))
    });
    report.verdict = if section.diagonal_only { "oracle-consistent" } else { "oracle-refuted" }.into();
    report.exit_code = if section.diagonal_only { exit::OK } else { exit::REFUTED };
    report.oracle = Some(section);
    report.quadrics = Some(quadrics);
    Ok(report)
}

fn gen_typed<F: Field>(field: F, family: &FamilyArg) -> Result<AnyConfig, CommandError>
where
    AnyConfig: From<Configuration<F>>,
{
    let cfg = match family {
        FamilyArg::General { n, s } => families::gen_general_position(field, *n, *s)?,
        FamilyArg::Split { n, a, b } => families::gen_split(field, *n, [*a, *b])?.config,
        FamilyArg::Chain { n, sizes } => families::gen_chain(field, *n, sizes)?.config,
        FamilyArg::ThreePlanes { n, sizes } => {
            let s: [usize; 4] = sizes.as_slice().try_into().map_err(|_| usage("three-planes takes exactly four sizes"))?;
            families::gen_three_planes(field, *n, s)?.config
        }
        FamilyArg::BlockUnions { n, m } => families::gen_block_unions(field, *n, *m)?.config,
        FamilyArg::Rains => families::rains_configuration(field),
    };
    Ok(cfg.into())
}

pub fn cmd_gen(a: &GenArgs) -> Result<String, CommandError> {
    let cfg = match a.prime {
        None => gen_typed(Rationals, &a.family)?,
        Some(p) => {
            let f = PrimeField::new(p).map_err(|e| usage(e.to_string()))?;
            gen_typed(f, &a.family)?
        }
    };
    let text = cfg.pretty_json();
    if let Some(path) = &a.out {
        std::fs::write(path, &text).map_err(|error| InputError::Io { path: path.clone(), error })?;
    }
    Ok(text)
}

pub fn cmd_scan(a: &ScanArgs) -> Result<Report, CommandError> {
    let opts = ScanOptions {
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        coord_bound: a.bound,
        certify: CertifyOptions {
            search: SearchOptions { budget: a.budget, ..SearchOptions::default() },
            oracle: Some(window(&a.window)),
            ..CertifyOptions::default()
        },
        inject_rains: a.inject_rains,
    };
    let scan = conjecture_scan(&opts)?;
    let results: Vec<ScanTrialDto> = scan
        .trials
        .iter()
        .map(|t| ScanTrialDto {
            index: t.index,
            points: t.points.clone(),
            rejected: t.rejected,
            injected: t.injected,
            outcome: t.outcome.name().into(),
            detail: match &t.outcome {
                ScanOutcome::Certified { hypothesis } => hypothesis.clone(),
                ScanOutcome::CertifiedByDescent { extra_point, hypothesis, route } => {
                    format!("via {extra_point:?} added, {hypothesis}, descent route {}", route.name())
                }
                ScanOutcome::OracleRefuted { i, j, dim } => {
                    format!("counterexample candidate: dim Tor_{{{i},{j}}} = {dim}")
                }
                ScanOutcome::OracleConsistentOnly => "no certificate; oracle window diagonal-only".into(),
                ScanOutcome::BudgetExhausted => "search budget exhausted".into(),
            },
            oracle: t.oracle.as_ref().map(OracleSection::from),
        })
        .collect();
    let refuted = scan.count("oracle-refuted");
    let mut report = Report::new("scan", None);
    report.verdict = if refuted > 0 { "counterexample-candidates" } else { "no-counterexample" }.into();
    report.exit_code = if refuted > 0 { exit::REFUTED } else { exit::OK };
    report.notes.push(format!("seed {} recorded; rerun with the same arguments to reproduce", a.seed));
    report.scan = Some(ScanSection {
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        coord_bound: a.bound,
        inject_rains: a.inject_rains,
        certified: scan.count("certified"),
        oracle_consistent_only: scan.count("oracle-consistent-only"),
        oracle_refuted: refuted,
        budget_exhausted: scan.count("budget-exhausted"),
        results,
    });
    Ok(report)
}
