//! Seeded search for configurations of `2n` points in `P^n` that meet the
//! `2r` condition, run through the certification pipeline.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Configuration, DEFAULT_LATTICE_BOUND};
use crate::families::rains_configuration;
use crate::field::{Field, Rationals};
use crate::oracle::OracleReport;
use crate::pipeline::{certify, CertifyOptions, PipelineError, Verdict};
use crate::pointset::PointSet;
use crate::quadrics::{descent_check, DescentRoute, Evidence};
use crate::search_vectors::SmallIntVectors;

pub const DEFAULT_COORD_BOUND: i64 = 5;
/// Draws allowed per trial before giving up on finding a valid sample.
pub const MAX_DRAWS_PER_TRIAL: usize = 10_000;
/// Extra points tried when certifying a sample through a larger set.
pub const DESCENT_CANDIDATES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub coord_bound: i64,
    pub certify: CertifyOptions,
    /// Replace the first sample by the Rains configuration (needs `n = 4`).
    pub inject_rains: bool,
}

impl ScanOptions {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self { n, trials, seed, coord_bound: DEFAULT_COORD_BOUND, certify: CertifyOptions::default(), inject_rains: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("2n = {0} points exceed the lattice bound")]
    TooLarge(usize),
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("the Rains configuration lives in P^4, not P^{0}")]
    RainsDimension(usize),
    #[error("no valid sample after {0} draws")]
    NoSample(usize),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    /// Certified directly by `hypothesis`.
    Certified { hypothesis: String },
    /// Certified through a larger certified set and a descent route.
    CertifiedByDescent { extra_point: Vec<i64>, hypothesis: String, route: DescentRoute },
    OracleConsistentOnly,
    /// Off-diagonal `Tor_{i,j}` of the given dimension: a counterexample candidate.
    OracleRefuted { i: usize, j: usize, dim: usize },
    BudgetExhausted,
}

impl ScanOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            ScanOutcome::Certified { .. } | ScanOutcome::CertifiedByDescent { .. } => "certified",
            ScanOutcome::OracleConsistentOnly => "oracle-consistent-only",
            ScanOutcome::OracleRefuted { .. } => "oracle-refuted",
            ScanOutcome::BudgetExhausted => "budget-exhausted",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, ScanOutcome::Certified { .. } | ScanOutcome::CertifiedByDescent { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanTrial {
    pub index: usize,
    pub points: Vec<Vec<i64>>,
    /// Samples discarded before this one (invalid or violating the 2r condition).
    pub rejected: usize,
    pub injected: bool,
    pub outcome: ScanOutcome,
    pub oracle: Option<OracleReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub options: ScanOptions,
    pub trials: Vec<ScanTrial>,
}

impl ScanReport {
    pub fn count(&self, name: &str) -> usize {
        self.trials.iter().filter(|t| t.outcome.name() == name).count()
    }
}

fn draw(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Option<Configuration<Rationals>> {
    let pts: Vec<Vec<i64>> = (0..2 * n).map(|_| (0..=n).map(|_| rng.random_range(-bound..=bound)).collect()).collect();
    let cfg = Configuration::from_integers(Rationals, n, &pts).ok()?;
    let lattice = cfg.flats_lattice(DEFAULT_LATTICE_BOUND).ok()?;
    cfg.two_r_condition(&lattice).ok()?;
    Some(cfg)
}

fn integer_points(cfg: &Configuration<Rationals>) -> Vec<Vec<i64>> {
    cfg.points()
        .iter()
        .map(|p| {
            crate::field::primitive_integer_vector(p)
                .iter()
                .map(|x| i64::try_from(x).expect("sampled coordinates are small"))
                .collect()
        })
        .collect()
}

/// Tries `S ∪ {P}` for small integer `P`, certifying it and descending to `S`.
fn certify_by_descent(cfg: &Configuration<Rationals>, opts: &CertifyOptions) -> Result<Option<ScanOutcome>, PipelineError> {
    let f = cfg.field();
    let inner = CertifyOptions { oracle: None, ..*opts };
    let sub = PointSet::full(cfg.len());
    let candidates = SmallIntVectors::new(cfg.dim() + 1, 2).filter_map(|v| {
        let p: Vec<_> = v.iter().map(|&x| f.from_i64(x)).collect();
        let mut pts = cfg.points().to_vec();
        pts.push(p);
        Configuration::new(*f, cfg.dim(), pts, Vec::new()).ok().map(|c| (v, c))
    });
    for (v, ext) in candidates.take(DESCENT_CANDIDATES) {
        let out = certify(&ext, &inner)?;
        let Some(c) = out.certified else { continue };
        let verdict = descent_check(&ext, sub, Evidence::Certificate(&c.certificate)).map_err(|_| PipelineError::CrossCheck("descent on a sample"))?;
        if let (true, Some(route)) = (verdict.koszul_by_descent, verdict.route) {
            return Ok(Some(ScanOutcome::CertifiedByDescent { extra_point: v, hypothesis: c.hypothesis.name().into(), route }));
        }
    }
    Ok(None)
}

fn run_trial(cfg: &Configuration<Rationals>, opts: &CertifyOptions) -> Result<(ScanOutcome, Option<OracleReport>), PipelineError> {
    let direct = CertifyOptions { oracle: None, ..*opts };
    let out = certify(cfg, &direct)?;
    if let Some(c) = out.certified {
        return Ok((ScanOutcome::Certified { hypothesis: c.hypothesis.name().into() }, None));
    }
    if let Some(o) = certify_by_descent(cfg, opts)? {
        return Ok((o, None));
    }
    let with_oracle = certify(cfg, opts)?;
    let outcome = match with_oracle.verdict {
        Verdict::OracleRefuted => {
            let report = with_oracle.oracle.as_ref().expect("refuted by the oracle");
            let (i, j, dim) = report.table.off_diagonal()[0];
            ScanOutcome::OracleRefuted { i, j, dim }
        }
        Verdict::BudgetExhausted => ScanOutcome::BudgetExhausted,
        _ => ScanOutcome::OracleConsistentOnly,
    };
    Ok((outcome, with_oracle.oracle))
}

/// Samples `trials` configurations with coordinates in `[-B, B]`, keeping
/// only those meeting the `2r` condition. Deterministic in `seed`.
pub fn conjecture_scan(opts: &ScanOptions) -> Result<ScanReport, ScanError> {
    if opts.trials == 0 {
        return Err(ScanError::NoTrials);
    }
    if opts.n == 0 {
        return Err(ScanError::ZeroDimension);
    }
    if 2 * opts.n > DEFAULT_LATTICE_BOUND {
        return Err(ScanError::TooLarge(2 * opts.n));
    }
    if opts.inject_rains && opts.n != 4 {
        return Err(ScanError::RainsDimension(opts.n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trials = Vec::with_capacity(opts.trials);
    for index in 0..opts.trials {
        let (cfg, rejected, injected) = if index == 0 && opts.inject_rains {
            (rains_configuration(Rationals), 0, true)
        } else {
            let mut rejected = 0;
            loop {
                if let Some(c) = draw(&mut rng, opts.n, opts.coord_bound) {
                    break (c, rejected, false);
                }
                rejected += 1;
                if rejected == MAX_DRAWS_PER_TRIAL {
                    return Err(ScanError::NoSample(rejected));
                }
            }
        };
        let (outcome, oracle) = run_trial(&cfg, &opts.certify)?;
        trials.push(ScanTrial { index, points: integer_points(&cfg), rejected, injected, outcome, oracle });
    }
    Ok(ScanReport { options: *opts, trials })
}
