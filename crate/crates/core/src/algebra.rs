//! Edge binomials `f_ij = x_i y_j - x_j y_i` and the transcendence-degree
//! engine: the transcendence degree of `K(f_1, ..., f_r)` over a field of
//! characteristic zero is the generic rank of the Jacobian of the `f`s.
//!
//! Variables are indexed `x_1..x_n -> 0..n` and `y_1..y_n -> n..2n`; Jacobian
//! columns follow the same order.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::{bareiss_echelon, gauss_echelon, Echelon, IncrementalBasis, Matrix};
use crate::poly::MPoly;
use crate::scalar::{
    PrimeField, Rationals, ScalarField, DEFAULT_PRIME, MIN_PRIME, SECONDARY_PRIME,
};

/// Default generator cap for the symbolic rank oracle.
pub const DEFAULT_SYMBOLIC_CAP: usize = 24;
/// Coordinates of rational evaluation points are drawn from `1..=RATIONAL_POINT_MAX`.
pub const RATIONAL_POINT_MAX: u64 = 1 << 20;
const EXTRA_EXACT_ATTEMPTS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is below the minimum 2^30")]
    PrimeTooSmall(u64),
    #[error("at least two trials are required, got {0}")]
    TooFewTrials(u32),
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },
    #[error("generator order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("vertices must satisfy a < b < c < d <= n, got {0:?} with n = {1}")]
    BadQuadruple([usize; 4], usize),
    #[error("evaluation rank {eval} exceeds symbolic rank {symbolic}")]
    Inconsistent { eval: usize, symbolic: usize },
    #[error("no sampled point reached the generic rank {0}")]
    DegenerateSample(usize),
}

/// `f_ij = x_i y_j - x_j y_i` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeBinomial {
    pub i: usize,
    pub j: usize,
}

impl EdgeBinomial {
    pub fn new(i: usize, j: usize) -> EdgeBinomial {
        assert!(i < j, "edge binomial needs i < j, got ({i}, {j})");
        EdgeBinomial { i, j }
    }

    pub fn edge(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    /// The binomial as a polynomial in `2n` variables.
    pub fn to_poly(&self, n: usize) -> MPoly {
        let (xi, xj) = (MPoly::var(self.i - 1), MPoly::var(self.j - 1));
        let (yi, yj) = (MPoly::var(n + self.i - 1), MPoly::var(n + self.j - 1));
        &xi * &yj - &xj * &yi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSystem {
    pub n: usize,
    pub gens: Vec<EdgeBinomial>,
}

impl GeneratorSystem {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n
    }

    pub fn subsystem(&self, indices: &[usize]) -> GeneratorSystem {
        GeneratorSystem { n: self.n, gens: indices.iter().map(|&k| self.gens[k]).collect() }
    }
}

/// One binomial per edge, in sorted edge order.
pub fn build_system(g: &Graph) -> GeneratorSystem {
    GeneratorSystem { n: g.n(), gens: g.edges().map(|(i, j)| EdgeBinomial::new(i, j)).collect() }
}

fn jacobian_row<K: ScalarField>(n: usize, f: EdgeBinomial, field: &K, point: &[K::Elem]) -> Vec<K::Elem> {
    let mut row = vec![field.zero(); 2 * n];
    let (x, y) = point.split_at(n);
    let (i, j) = (f.i - 1, f.j - 1);
    row[i] = y[j].clone();
    row[j] = -y[i].clone();
    row[n + i] = -x[j].clone();
    row[n + j] = x[i].clone();
    row
}

/// Jacobian of the system evaluated at `point = (x_1..x_n, y_1..y_n)`.
pub fn jacobian_at<K: ScalarField>(
    sys: &GeneratorSystem,
    field: &K,
    point: &[K::Elem],
) -> Result<Matrix<K::Elem>, EngineError> {
    if point.len() != sys.num_vars() {
        return Err(EngineError::PointLength { got: point.len(), expected: sys.num_vars() });
    }
    let rows = sys.gens.iter().map(|&f| jacobian_row(sys.n, f, field, point)).collect();
    Ok(Matrix::from_rows(sys.num_vars(), rows))
}

/// The Jacobian with polynomial entries.
pub fn symbolic_jacobian(sys: &GeneratorSystem) -> Matrix<MPoly> {
    let n = sys.n;
    let rows = sys
        .gens
        .iter()
        .map(|f| {
            let mut row = vec![MPoly::default(); 2 * n];
            let (i, j) = (f.i - 1, f.j - 1);
            row[i] = MPoly::var(n + j);
            row[j] = -MPoly::var(n + i);
            row[n + i] = -MPoly::var(j);
            row[n + j] = MPoly::var(i);
            row
        })
        .collect();
    Matrix::from_rows(2 * n, rows)
}

/// Rank of the Jacobian over the rational function field, by fraction-free
/// elimination on polynomial entries. Exact but expensive.
pub fn symbolic_rank(sys: &GeneratorSystem) -> usize {
    bareiss_echelon(&symbolic_jacobian(sys)).rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "modulus")]
pub enum FieldMode {
    Prime(u64),
    ExactRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldConfig {
    pub mode: FieldMode,
    pub trials: u32,
    pub seed: u64,
    /// Exact mode runs the symbolic oracle only for systems with at most this many generators.
    pub symbolic_cap: usize,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            mode: FieldMode::Prime(DEFAULT_PRIME),
            trials: 4,
            seed: 0,
            symbolic_cap: DEFAULT_SYMBOLIC_CAP,
        }
    }
}

impl FieldConfig {
    pub fn prime(p: u64) -> FieldConfig {
        FieldConfig { mode: FieldMode::Prime(p), ..Default::default() }
    }

    pub fn exact() -> FieldConfig {
        FieldConfig { mode: FieldMode::ExactRational, ..Default::default() }
    }

    pub fn with_seed(self, seed: u64) -> FieldConfig {
        FieldConfig { seed, ..self }
    }

    pub fn with_trials(self, trials: u32) -> FieldConfig {
        FieldConfig { trials, ..self }
    }

    pub fn with_symbolic_cap(self, symbolic_cap: usize) -> FieldConfig {
        FieldConfig { symbolic_cap, ..self }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.trials < 2 {
            return Err(EngineError::TooFewTrials(self.trials));
        }
        if let FieldMode::Prime(p) = self.mode {
            if p <= MIN_PRIME {
                return Err(EngineError::PrimeTooSmall(p));
            }
            if PrimeField::new(p).is_none() {
                return Err(EngineError::NotPrime(p));
            }
        }
        Ok(())
    }

    /// The prime used when a prime-mode run escalates.
    pub fn backup_prime(&self) -> u64 {
        match self.mode {
            FieldMode::Prime(p) if p == SECONDARY_PRIME => DEFAULT_PRIME,
            _ => SECONDARY_PRIME,
        }
    }
}

/// Field in which a certificate's witness point lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "modulus")]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// Max over random prime-field points; the last two trials agreed.
    Probabilistic,
    /// Prime trials disagreed; a second prime and a rational point were added.
    Escalated,
    /// Confirmed by symbolic elimination over the rational function field.
    Symbolic,
    /// Exact mode over the symbolic cap: rational points only.
    ProbabilisticOnly,
}

/// Generic rank plus a re-checkable nonsingular minor of the Jacobian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub field: FieldSpec,
    pub witness_point: Vec<u64>,
    /// Generator indices of the minor's rows.
    pub witness_rows: Vec<usize>,
    /// Variable indices of the minor's columns.
    pub witness_cols: Vec<usize>,
    pub trials_agreeing: u32,
    pub trial_ranks: Vec<usize>,
    pub exactness: Exactness,
}

impl RankCertificate {
    /// Re-evaluates the cited minor at the witness point.
    pub fn recheck(&self, sys: &GeneratorSystem) -> bool {
        if self.witness_rows.len() != self.rank || self.witness_cols.len() != self.rank {
            return false;
        }
        if self.rank == 0 {
            return true;
        }
        if self.witness_point.len() != sys.num_vars()
            || self.witness_rows.iter().any(|&r| r >= sys.len())
            || self.witness_cols.iter().any(|&c| c >= sys.num_vars())
        {
            return false;
        }
        match self.field {
            FieldSpec::Prime(p) => {
                let Some(f) = PrimeField::new(p) else { return false };
                let pt = lift(&f, &self.witness_point);
                let j = jacobian_at(sys, &f, &pt).expect("length checked");
                gauss_echelon(&j.select(&self.witness_rows, &self.witness_cols)).rank == self.rank
            }
            FieldSpec::Rational => {
                let j = integer_jacobian(sys, &self.witness_point);
                bareiss_echelon(&j.select(&self.witness_rows, &self.witness_cols)).rank == self.rank
            }
        }
    }
}

fn lift<K: ScalarField>(field: &K, point: &[u64]) -> Vec<K::Elem> {
    point.iter().map(|&v| field.embed_bigint(&BigInt::from(v))).collect()
}

fn integer_jacobian(sys: &GeneratorSystem, point: &[u64]) -> Matrix<BigInt> {
    let pt: Vec<BigRational> = lift(&Rationals, point);
    jacobian_at(sys, &Rationals, &pt)
        .expect("caller checks length")
        .map(|q| q.to_integer())
}

// stream tags keep the point sequences of different fields independent
const TAG_PRIMARY: u64 = 0x5052_494d;
const TAG_BACKUP: u64 = 0x4241_434b;
const TAG_RATIONAL: u64 = 0x5241_5449;

fn trial_rng(seed: u64, tag: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(trial);
    rng
}

fn sample_point(num_vars: usize, upper: u64, seed: u64, tag: u64, trial: u64) -> Vec<u64> {
    let mut rng = trial_rng(seed, tag, trial);
    (0..num_vars).map(|_| rng.gen_range(1..=upper)).collect()
}

struct Evaluation {
    field: FieldSpec,
    point: Vec<u64>,
    echelon: Echelon,
}

fn eval_prime(sys: &GeneratorSystem, p: u64, point: Vec<u64>) -> Evaluation {
    let f = PrimeField::new(p).expect("validated prime");
    let j = jacobian_at(sys, &f, &lift(&f, &point)).expect("sampled with the right length");
    Evaluation { field: FieldSpec::Prime(p), echelon: gauss_echelon(&j), point }
}

fn eval_rational(sys: &GeneratorSystem, point: Vec<u64>) -> Evaluation {
    let echelon = bareiss_echelon(&integer_jacobian(sys, &point));
    Evaluation { field: FieldSpec::Rational, echelon, point }
}

fn prime_evaluations(sys: &GeneratorSystem, p: u64, tag: u64, cfg: &FieldConfig) -> Vec<Evaluation> {
    (0..cfg.trials as u64)
        .map(|t| eval_prime(sys, p, sample_point(sys.num_vars(), p - 1, cfg.seed, tag, t)))
        .collect()
}

fn rational_evaluations(sys: &GeneratorSystem, cfg: &FieldConfig, start: u64, count: u64) -> Vec<Evaluation> {
    (start..start + count)
        .map(|t| eval_rational(sys, sample_point(sys.num_vars(), RATIONAL_POINT_MAX, cfg.seed, TAG_RATIONAL, t)))
        .collect()
}

fn certificate(best: &Evaluation, trial_ranks: Vec<usize>, exactness: Exactness) -> RankCertificate {
    let rank = best.echelon.rank;
    RankCertificate {
        rank,
        field: best.field,
        witness_point: best.point.clone(),
        witness_rows: best.echelon.pivot_rows.clone(),
        witness_cols: best.echelon.pivot_cols.clone(),
        trials_agreeing: trial_ranks.iter().filter(|&&r| r == rank).count() as u32,
        trial_ranks,
        exactness,
    }
}

fn best_of(evals: &[Evaluation]) -> &Evaluation {
    // first evaluation attaining the maximum, so ties resolve by trial index
    let max = evals.iter().map(|e| e.echelon.rank).max().expect("at least one evaluation");
    evals.iter().find(|e| e.echelon.rank == max).expect("max is attained")
}

/// Generic rank of the Jacobian of `sys`, i.e. the transcendence degree of
/// the field generated by its binomials.
pub fn generic_rank(sys: &GeneratorSystem, cfg: &FieldConfig) -> Result<RankCertificate, EngineError> {
    cfg.validate()?;
    match cfg.mode {
        FieldMode::Prime(p) => {
            let primary = prime_evaluations(sys, p, TAG_PRIMARY, cfg);
            let ranks: Vec<usize> = primary.iter().map(|e| e.echelon.rank).collect();
            let max = *ranks.iter().max().expect("trials >= 2");
            let last_two_agree = ranks[ranks.len() - 1] == max && ranks[ranks.len() - 2] == max;
            if last_two_agree {
                return Ok(certificate(best_of(&primary), ranks, Exactness::Probabilistic));
            }
            let mut all = primary;
            all.extend(prime_evaluations(sys, cfg.backup_prime(), TAG_BACKUP, cfg));
            all.extend(rational_evaluations(sys, cfg, 0, 1));
            Ok(certificate(best_of(&all), ranks, Exactness::Escalated))
        }
        FieldMode::ExactRational => {
            let mut evals = rational_evaluations(sys, cfg, 0, cfg.trials as u64);
            let ranks: Vec<usize> = evals.iter().map(|e| e.echelon.rank).collect();
            if sys.len() > cfg.symbolic_cap {
                return Ok(certificate(best_of(&evals), ranks, Exactness::ProbabilisticOnly));
            }
            let symbolic = symbolic_rank(sys);
            let mut eval_max = best_of(&evals).echelon.rank;
            if eval_max > symbolic {
                return Err(EngineError::Inconsistent { eval: eval_max, symbolic });
            }
            let mut next = cfg.trials as u64;
            while eval_max < symbolic && next < cfg.trials as u64 + EXTRA_EXACT_ATTEMPTS {
                evals.extend(rational_evaluations(sys, cfg, next, 1));
                eval_max = best_of(&evals).echelon.rank;
                next += 1;
            }
            if eval_max < symbolic {
                return Err(EngineError::DegenerateSample(symbolic));
            }
            Ok(certificate(best_of(&evals), ranks, Exactness::Symbolic))
        }
    }
}

/// A transcendence base chosen greedily from a generator order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscendenceBase {
    /// Indices into the system's generator list, in scan order.
    pub kept: Vec<usize>,
    pub rejected: Vec<usize>,
}

impl TranscendenceBase {
    pub fn edges(&self, sys: &GeneratorSystem) -> Vec<(usize, usize)> {
        self.kept.iter().map(|&k| sys.gens[k].edge()).collect()
    }
}

/// Keeps a generator iff it is independent of those kept so far at some
/// sample point where the kept prefix is itself independent.
fn greedy_over<K: ScalarField>(
    sys: &GeneratorSystem,
    order: &[usize],
    field: &K,
    points: &[Vec<u64>],
) -> TranscendenceBase {
    let points: Vec<Vec<K::Elem>> = points.iter().map(|p| lift(field, p)).collect();
    let mut bases: Vec<IncrementalBasis<K::Elem>> = vec![IncrementalBasis::default(); points.len()];
    let mut kept = Vec::new();
    let mut rejected = Vec::new();
    for &k in order {
        let rows: Vec<Vec<K::Elem>> =
            points.iter().map(|p| jacobian_row(sys.n, sys.gens[k], field, p)).collect();
        let independent = bases
            .iter()
            .zip(&rows)
            .any(|(b, row)| b.rank() == kept.len() && b.is_independent(row));
        if independent {
            for (b, row) in bases.iter_mut().zip(&rows) {
                b.insert(row);
            }
            kept.push(k);
        } else {
            rejected.push(k);
        }
    }
    TranscendenceBase { kept, rejected }
}

/// Scans `order` (a permutation of generator indices) and keeps each
/// generator that raises the generic rank of the kept set.
pub fn greedy_transcendence_base(
    sys: &GeneratorSystem,
    order: &[usize],
    cfg: &FieldConfig,
) -> Result<TranscendenceBase, EngineError> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..sys.len()).collect::<Vec<_>>() {
        return Err(EngineError::BadOrder(sys.len()));
    }
    let cert = generic_rank(sys, cfg)?;
    let base = match cert.field {
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).expect("validated prime");
            let tag = if matches!(cfg.mode, FieldMode::Prime(q) if q == p) { TAG_PRIMARY } else { TAG_BACKUP };
            let mut points: Vec<Vec<u64>> = (0..cfg.trials as u64)
                .map(|t| sample_point(sys.num_vars(), p - 1, cfg.seed, tag, t))
                .collect();
            points.push(cert.witness_point.clone());
            greedy_over(sys, order, &f, &points)
        }
        FieldSpec::Rational => {
            let mut points: Vec<Vec<u64>> = (0..cfg.trials as u64)
                .map(|t| sample_point(sys.num_vars(), RATIONAL_POINT_MAX, cfg.seed, TAG_RATIONAL, t))
                .collect();
            points.push(cert.witness_point.clone());
            greedy_over(sys, order, &Rationals, &points)
        }
    };
    if base.kept.len() != cert.rank {
        return Err(EngineError::DegenerateSample(cert.rank));
    }
    Ok(base)
}

/// `s0 f_ab f_cd + s1 f_ac f_bd + s2 f_ad f_bc` in `2n` variables.
pub fn plucker_expansion(n: usize, [a, b, c, d]: [usize; 4], signs: [i64; 3]) -> MPoly {
    let f = |i, j| EdgeBinomial::new(i, j).to_poly(n);
    let term = |s: i64, p: MPoly, q: MPoly| &MPoly::constant(s) * &(&p * &q);
    term(signs[0], f(a, b), f(c, d)) + term(signs[1], f(a, c), f(b, d)) + term(signs[2], f(a, d), f(b, c))
}

/// Whether `f_ab f_cd - f_ac f_bd + f_ad f_bc` vanishes identically.
pub fn plucker_check(n: usize, quad: [usize; 4]) -> Result<bool, EngineError> {
    let [a, b, c, d] = quad;
    if !(1 <= a && a < b && b < c && c < d && d <= n) {
        return Err(EngineError::BadQuadruple(quad, n));
    }
    Ok(num_traits::Zero::is_zero(&plucker_expansion(n, quad, [1, -1, 1])))
}
