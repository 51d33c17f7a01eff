//! Search over families of axis-parallel boxes for violations of the
//! discrete log-concavity inequalities.
//!
//! Candidates are k x n side matrices with entries from a finite grid. They
//! are scored through permanents (the cheap route); [`verify_finding`]
//! recomputes a finding through polarization instead.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bodies::{AxisBox, Body};
use crate::error::{Error, Result};
use crate::inequalities::{gromov_concavity, gromov_triple_check, triple_report, Certificate};
use crate::mixed::{box_volume_polynomial, mixed_volume_boxes, volume_polynomial, BodyTuple, MultiIndex};
use crate::numerics::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    pub n: usize,
    pub k: usize,
    pub side_grid: Vec<Rational>,
}

impl SearchSpace {
    /// The grid is sorted and deduplicated; hill-climbing moves along it.
    pub fn new(n: usize, k: usize, mut side_grid: Vec<Rational>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Domain("search needs n >= 1 and k >= 1".into()));
        }
        if side_grid.is_empty() {
            return Err(Error::Domain("empty side grid".into()));
        }
        if side_grid.iter().any(Signed::is_negative) {
            return Err(Error::Domain("side grid values must be nonnegative".into()));
        }
        side_grid.sort();
        side_grid.dedup();
        Ok(SearchSpace { n, k, side_grid })
    }

    fn cells(&self) -> usize {
        self.n * self.k
    }

    fn matrix(&self, grid_idx: &[usize]) -> Matrix {
        Matrix::new(self.k, self.n, grid_idx.iter().map(|&g| self.side_grid[g].clone()).collect())
            .expect("cells match shape")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Exhaustive,
    Random,
    HillClimb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchTarget {
    /// `V_111^3 >= V_210 V_021 V_102` (k = n = 3)
    TripleInequality,
    /// concave-envelope test on the whole simplex
    FullEnvelope,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Random => "random",
            SearchMode::HillClimb => "hill-climb",
        }
    }
}

impl SearchTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchTarget::TripleInequality => "triple-inequality",
            SearchTarget::FullEnvelope => "full-envelope",
        }
    }
}

impl FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" | "exhaustive-grid" => Ok(SearchMode::Exhaustive),
            "random" => Ok(SearchMode::Random),
            "hill-climb" => Ok(SearchMode::HillClimb),
            other => Err(Error::Parse(format!("unknown search mode {other:?}"))),
        }
    }
}

impl FromStr for SearchTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triple-inequality" | "triple" => Ok(SearchTarget::TripleInequality),
            "full-envelope" | "envelope" => Ok(SearchTarget::FullEnvelope),
            other => Err(Error::Parse(format!("unknown search target {other:?}"))),
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub seed: u64,
    pub max_evaluations: u64,
    pub target: SearchTarget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Exhaustive,
            seed: 0,
            max_evaluations: 1_000_000,
            target: SearchTarget::TripleInequality,
        }
    }
}

/// A box family violating the target inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    /// Row `i` holds the side lengths of box `A_i`.
    pub side_matrix: Matrix,
    pub target: SearchTarget,
    pub certificate: Certificate,
    /// `rhs / lhs` of the certificate; above one.
    pub violation_ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Sorted by descending violation ratio, then by discovery order.
    pub findings: Vec<Finding>,
    pub evaluations: u64,
}

impl SearchOutcome {
    pub fn best_ratio(&self) -> Option<&Rational> {
        self.findings.first().map(|f| &f.violation_ratio)
    }
}

fn boxes(sides: &Matrix) -> Vec<Body> {
    (0..sides.rows())
        .map(|i| Body::Box(AxisBox::from_lengths(sides.row(i)).expect("nonnegative sides")))
        .collect()
}

/// The certificate deciding `target` for the boxes with these sides: the
/// worst violation if any, otherwise the comparison closest to failing.
/// Computed through permanents.
pub fn evaluate(sides: &Matrix, target: SearchTarget) -> Result<Option<Certificate>> {
    match target {
        SearchTarget::TripleInequality => {
            if sides.rows() != 3 || sides.cols() != 3 {
                return Err(Error::Dimension("the triple inequality needs a 3x3 side matrix".into()));
            }
            let value = |i: &MultiIndex| {
                mixed_volume_boxes(&sides.select_rows(&i.expand())).expect("square nonnegative")
            };
            Ok(triple_report(value)?.tightest)
        }
        SearchTarget::FullEnvelope => Ok(gromov_concavity(&box_volume_polynomial(sides)?).tightest),
    }
}

fn finding_from(sides: Matrix, target: SearchTarget, cert: Option<Certificate>) -> Option<Finding> {
    let cert = cert?;
    if !cert.is_violation() {
        return None;
    }
    // lhs = 0 with rhs > 0 would need a zero mixed volume next to positive
    // ones on the same support, which boxes cannot produce
    let violation_ratio = cert.ratio()?;
    Some(Finding { side_matrix: sides, target, certificate: cert, violation_ratio })
}

/// Recomputes the finding through polarization and checks that the same
/// certificate and ratio come out.
pub fn verify_finding(f: &Finding) -> bool {
    let recomputed = match f.target {
        SearchTarget::TripleInequality => gromov_triple_check(&boxes(&f.side_matrix)).ok().and_then(|r| r.tightest),
        SearchTarget::FullEnvelope => BodyTuple::new(boxes(&f.side_matrix))
            .and_then(|t| volume_polynomial(&t))
            .ok()
            .and_then(|vp| gromov_concavity(&vp).tightest),
    };
    match recomputed {
        Some(c) => c.is_violation() && c == f.certificate && c.ratio().as_ref() == Some(&f.violation_ratio),
        None => false,
    }
}

fn check_space(space: &SearchSpace, config: &SearchConfig) -> Result<()> {
    if config.max_evaluations == 0 {
        return Err(Error::Domain("max_evaluations must be at least 1".into()));
    }
    if config.target == SearchTarget::TripleInequality && (space.n != 3 || space.k != 3) {
        return Err(Error::Domain("the triple inequality target needs n = k = 3".into()));
    }
    Ok(())
}

/// Entry `c` of candidate `index` in mixed radix, most significant first.
fn grid_digits(mut index: u64, cells: usize, base: usize) -> Vec<usize> {
    let mut d = vec![0; cells];
    for slot in d.iter_mut().rev() {
        *slot = (index % base as u64) as usize;
        index /= base as u64;
    }
    d
}

/// Counter-keyed stream: candidate `index` depends only on `(seed, index)`.
fn random_digits(seed: u64, index: u64, cells: usize, base: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..cells).map(|_| rng.random_range(0..base)).collect()
}

fn sort_findings(mut found: Vec<(u64, Finding)>) -> Vec<Finding> {
    found.sort_by(|(ia, a), (ib, b)| b.violation_ratio.cmp(&a.violation_ratio).then(ia.cmp(ib)));
    let mut seen = HashSet::new();
    found.into_iter().map(|(_, f)| f).filter(|f| seen.insert(f.side_matrix.clone())).collect()
}

pub fn search(space: &SearchSpace, config: &SearchConfig) -> Result<SearchOutcome> {
    check_space(space, config)?;
    let base = space.side_grid.len();
    let cells = space.cells();
    match config.mode {
        SearchMode::Exhaustive => {
            let total = (base as u64).checked_pow(cells as u32).unwrap_or(u64::MAX);
            let count = total.min(config.max_evaluations);
            scan(space, config, count, |i| grid_digits(i, cells, base))
        }
        SearchMode::Random => {
            let seed = config.seed;
            scan(space, config, config.max_evaluations, |i| random_digits(seed, i, cells, base))
        }
        SearchMode::HillClimb => hill_climb(space, config),
    }
}

/// Runs [`search`] on a dedicated pool of `jobs` threads.
pub fn search_with_jobs(space: &SearchSpace, config: &SearchConfig, jobs: usize) -> Result<SearchOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    pool.install(|| search(space, config))
}

fn scan(
    space: &SearchSpace,
    config: &SearchConfig,
    count: u64,
    candidate: impl Fn(u64) -> Vec<usize> + Sync,
) -> Result<SearchOutcome> {
    let found: Vec<(u64, Finding)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let sides = space.matrix(&candidate(i));
            let cert = evaluate(&sides, config.target)?;
            Ok(finding_from(sides, config.target, cert).map(|f| (i, f)))
        })
        .filter_map(|r: Result<Option<(u64, Finding)>>| r.transpose())
        .collect::<Result<_>>()?;
    Ok(SearchOutcome { findings: sort_findings(found), evaluations: count })
}

fn better(a: &Option<Certificate>, b: &Option<Certificate>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.severity_cmp(y) == Ordering::Greater,
        (Some(_), None) => true,
        _ => false,
    }
}

/// Steepest ascent on the certificate score, one grid step in one side at a
/// time; ties do not count as progress. Restarts from a fresh random point
/// at every local maximum until the evaluation budget is spent.
fn hill_climb(space: &SearchSpace, config: &SearchConfig) -> Result<SearchOutcome> {
    let base = space.side_grid.len();
    let cells = space.cells();
    let budget = config.max_evaluations;
    let mut evals = 0u64;
    let mut found: Vec<(u64, Finding)> = Vec::new();
    let mut restart = 0u64;
    let keep = |sides: Matrix, cert: Option<Certificate>, evals: u64, found: &mut Vec<(u64, Finding)>| {
        if let Some(f) = finding_from(sides, config.target, cert) {
            found.push((evals, f));
        }
    };

    while evals < budget {
        let mut cur = random_digits(config.seed, restart, cells, base);
        restart += 1;
        let mut cur_cert = evaluate(&space.matrix(&cur), config.target)?;
        keep(space.matrix(&cur), cur_cert.clone(), evals, &mut found);
        evals += 1;

        loop {
            let mut moves: Vec<Vec<usize>> = Vec::new();
            for c in 0..cells {
                if cur[c] > 0 {
                    let mut m = cur.clone();
                    m[c] -= 1;
                    moves.push(m);
                }
                if cur[c] + 1 < base {
                    let mut m = cur.clone();
                    m[c] += 1;
                    moves.push(m);
                }
            }
            moves.truncate((budget - evals) as usize);
            if moves.is_empty() {
                break;
            }
            let scored: Vec<Option<Certificate>> = moves
                .par_iter()
                .map(|m| evaluate(&space.matrix(m), config.target))
                .collect::<Result<_>>()?;
            let mut best: Option<usize> = None;
            for (i, cert) in scored.iter().enumerate() {
                keep(space.matrix(&moves[i]), cert.clone(), evals + i as u64, &mut found);
                let beats_best = best.is_none_or(|b| better(cert, &scored[b]));
                if better(cert, &cur_cert) && beats_best {
                    best = Some(i);
                }
            }
            evals += moves.len() as u64;
            match best {
                Some(b) => {
                    cur = moves.swap_remove(b);
                    cur_cert = scored[b].clone();
                }
                None => break,
            }
            if evals >= budget {
                break;
            }
        }
    }
    Ok(SearchOutcome { findings: sort_findings(found), evaluations: evals })
}
