//! Newton polyhedra of monomial ideals and their compact faces.
//!
//! For a closed labeling the lex leading term of `f_ij` (`x_1 > .. > x_n > y_1 > .. > y_n`)
//! is `x_i y_j`, and the initial ideal of every power is the power of the
//! initial ideal. The region built from all powers is then
//! `conv(generators) + R_{>=0}^{2n}`, and a face is compact exactly when it
//! minimizes a strictly positive weight.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{closedness_violation, Graph};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::{bareiss_echelon, Matrix};

/// Largest generator count the subset enumeration will accept.
pub const LP_GENERATOR_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("labeling is not closed: triple ({0}, {1}, {2}) violates the closed condition")]
    NotClosed(usize, usize, usize),
    #[error("monomial ideal has no generators; compact-face dimension is undefined")]
    Empty,
    #[error("generators have mixed total degrees {0} and {1}")]
    MixedDegree(u32, u32),
    #[error("generator {index} has length {got}, expected {expected}")]
    DimensionMismatch { index: usize, got: usize, expected: usize },
    #[error("{0} generators exceed the subset-enumeration cap of {LP_GENERATOR_CAP}")]
    TooManyGenerators(usize),
    #[error("rank route gives mcd {rank_route}, LP route gives {lp_route}")]
    RouteDisagreement { rank_route: usize, lp_route: usize },
}

/// A monomial ideal given by exponent vectors in `ambient_dim` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<u32>>,
}

impl MonomialIdeal {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<u32>>) -> Result<Self, NewtonError> {
        for (index, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(NewtonError::DimensionMismatch { index, got: g.len(), expected: ambient_dim });
            }
        }
        Ok(MonomialIdeal { ambient_dim, generators })
    }

    fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.generators.iter().map(|g| g.iter().sum())
    }
}

/// Lex leading terms `x_i y_j` of the edge binomials of a closed graph.
pub fn initial_ideal_closed(g: &Graph) -> Result<MonomialIdeal, NewtonError> {
    if let Some((i, j, k)) = closedness_violation(g) {
        return Err(NewtonError::NotClosed(i, j, k));
    }
    let n = g.n();
    let generators = g
        .edges()
        .map(|(i, j)| {
            let mut e = vec![0u32; 2 * n];
            e[i - 1] = 1;
            e[n + j - 1] = 1;
            e
        })
        .collect();
    Ok(MonomialIdeal { ambient_dim: 2 * n, generators })
}

/// `conv(generators) + R_{>=0}^{ambient_dim}`. Faces are probed lazily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonRegion {
    pub ideal: MonomialIdeal,
}

impl NewtonRegion {
    pub fn is_empty(&self) -> bool {
        self.ideal.generators.is_empty()
    }
}

pub fn newton_region(m: &MonomialIdeal) -> NewtonRegion {
    NewtonRegion { ideal: m.clone() }
}

fn exponent_matrix(vectors: &[&Vec<u32>]) -> Matrix<BigInt> {
    let cols = vectors.first().map_or(0, |v| v.len());
    Matrix::from_rows(cols, vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

/// Rank of the exponent matrix minus one, for an ideal generated in one degree.
pub fn mcd_via_rank(m: &MonomialIdeal) -> Result<usize, NewtonError> {
    let mut degrees = m.degrees();
    let first = degrees.next().ok_or(NewtonError::Empty)?;
    if let Some(other) = degrees.find(|&d| d != first) {
        return Err(NewtonError::MixedDegree(first, other));
    }
    let rows: Vec<&Vec<u32>> = m.generators.iter().collect();
    Ok(bareiss_echelon(&exponent_matrix(&rows)).rank - 1)
}

/// Indices of a set of linearly independent generators spanning the exponent matrix's row space.
pub fn independent_generators(m: &MonomialIdeal) -> Vec<usize> {
    let rows: Vec<&Vec<u32>> = m.generators.iter().collect();
    bareiss_echelon(&exponent_matrix(&rows)).pivot_rows
}

/// Dimension of the affine hull of the selected points.
fn affine_dimension(points: &[&Vec<u32>]) -> usize {
    let Some((base, rest)) = points.split_first() else { return 0 };
    let diffs: Vec<Vec<BigInt>> = rest
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(&a, &b)| BigInt::from(a) - BigInt::from(b)).collect())
        .collect();
    bareiss_echelon(&Matrix::from_rows(base.len(), diffs)).rank
}

fn serialize_rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| format!("{}/{}", q.numer(), q.denom())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompactFaceReport {
    pub mcd: usize,
    pub witness_subset: Vec<usize>,
    #[serde(serialize_with = "serialize_rationals")]
    pub witness_normal: Vec<BigRational>,
    /// Filled in by [`closed_spread_via_newton`]; `None` when only the LP ran.
    pub rank_route_value: Option<usize>,
}

impl CompactFaceReport {
    /// Re-verifies the witness exactly: positive weight, equal value on the
    /// subset, strictly larger elsewhere, and the claimed affine dimension.
    pub fn recheck(&self, m: &MonomialIdeal) -> bool {
        recheck_face(m, &self.witness_subset, &self.witness_normal, self.mcd)
    }
}

/// Checks that `normal` certifies `subset` as a compact face of dimension `dim`.
pub fn recheck_face(m: &MonomialIdeal, subset: &[usize], normal: &[BigRational], dim: usize) -> bool {
    if normal.len() != m.ambient_dim || normal.iter().any(|w| !w.is_positive()) || subset.is_empty() {
        return false;
    }
    let weight = |g: &Vec<u32>| -> BigRational {
        g.iter().zip(normal).map(|(&a, w)| w * BigRational::from_integer(a.into())).sum()
    };
    let level = weight(&m.generators[subset[0]]);
    for (k, g) in m.generators.iter().enumerate() {
        let v = weight(g);
        let ok = if subset.contains(&k) { v == level } else { v > level };
        if !ok {
            return false;
        }
    }
    let pts: Vec<&Vec<u32>> = subset.iter().map(|&k| &m.generators[k]).collect();
    affine_dimension(&pts) == dim
}

/// Finds a strictly positive `w` with `w.a = c` on `subset` and
/// `w.b >= c + 1` off it, with `w_k >= 1` normalizing the scale.
fn face_normal(m: &MonomialIdeal, subset: &[usize]) -> Option<Vec<BigRational>> {
    let d = m.ambient_dim;
    // variables: u_0..u_{d-1} (w = 1 + u), c+ and c-
    let nv = d + 2;
    let mut lp = LinearProgram::new(nv);
    let row = |g: &Vec<u32>| -> (Vec<BigRational>, BigRational) {
        let mut coeffs: Vec<BigRational> = g.iter().map(|&a| BigRational::from_integer(a.into())).collect();
        coeffs.push(-BigRational::one());
        coeffs.push(BigRational::one());
        let shift: u32 = g.iter().sum();
        (coeffs, BigRational::from_integer(BigInt::from(shift)))
    };
    for (k, g) in m.generators.iter().enumerate() {
        let (coeffs, shift) = row(g);
        // w.g - c = u.g + |g| - c
        if subset.contains(&k) {
            lp.add_constraint(coeffs, Relation::Eq, -shift);
        } else {
            lp.add_constraint(coeffs, Relation::Ge, BigRational::one() - shift);
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(x[..d].iter().map(|u| u + BigRational::one()).collect()),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    }
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let cur = idx.clone()?;
        let mut next = cur.clone();
        let mut i = k;
        idx = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                break Some(next);
            }
        };
        Some(cur)
    })
}

/// Maximum dimension of a compact face, by enumerating generator subsets
/// (largest first, lexicographic within a size) and certifying each candidate
/// with an exact LP. Subsets that cannot beat the best face found are skipped.
pub fn mcd_via_lp(m: &MonomialIdeal) -> Result<CompactFaceReport, NewtonError> {
    let count = m.generators.len();
    if count == 0 {
        return Err(NewtonError::Empty);
    }
    if count > LP_GENERATOR_CAP {
        return Err(NewtonError::TooManyGenerators(count));
    }
    let mut best: Option<CompactFaceReport> = None;
    for size in (1..=count).rev() {
        let floor = best.as_ref().map(|b| b.mcd as isize).unwrap_or(-1);
        if size as isize - 1 <= floor {
            break;
        }
        for subset in subsets_of_size(count, size) {
            let pts: Vec<&Vec<u32>> = subset.iter().map(|&k| &m.generators[k]).collect();
            let dim = affine_dimension(&pts);
            if dim as isize <= best.as_ref().map(|b| b.mcd as isize).unwrap_or(-1) {
                continue;
            }
            if let Some(normal) = face_normal(m, &subset) {
                best = Some(CompactFaceReport {
                    mcd: dim,
                    witness_subset: subset,
                    witness_normal: normal,
                    rank_route_value: None,
                });
            }
        }
    }
    Ok(best.expect("every single generator minimizing a generic weight is a compact face"))
}

/// Both routes, checked against each other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonSpread {
    pub ideal: MonomialIdeal,
    pub report: CompactFaceReport,
    /// `mcd + 1`.
    pub spread: usize,
}

/// `mcd + 1` for a closed graph, computed by the rank route and the LP route,
/// which must agree.
pub fn closed_spread_via_newton(g: &Graph) -> Result<NewtonSpread, NewtonError> {
    let ideal = initial_ideal_closed(g)?;
    let rank_route = mcd_via_rank(&ideal)?;
    let mut report = mcd_via_lp(&ideal)?;
    if report.mcd != rank_route {
        return Err(NewtonError::RouteDisagreement { rank_route, lp_route: report.mcd });
    }
    report.rank_route_value = Some(rank_route);
    Ok(NewtonSpread { spread: rank_route + 1, ideal, report })
}

/// Scales every entry of a normal by a positive rational.
pub fn scale_normal(normal: &[BigRational], factor: &BigRational) -> Vec<BigRational> {
    assert!(factor.is_positive(), "scaling factor must be positive");
    normal.iter().map(|w| w * factor).collect()
}

impl NewtonSpread {
    pub fn mcd(&self) -> usize {
        self.report.mcd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};
    use num_traits::Zero;

    fn unit(dim: usize, ones: &[usize]) -> Vec<u32> {
        let mut v = vec![0; dim];
        for &k in ones {
            v[k] += 1;
        }
        v
    }

    #[test]
    fn initial_ideal_examples() {
        let p3 = initial_ideal_closed(&path(3)).unwrap();
        // x1 y2 and x2 y3 in (x1, x2, x3, y1, y2, y3)
        assert_eq!(p3.generators, vec![unit(6, &[0, 4]), unit(6, &[1, 5])]);
        let k3 = initial_ideal_closed(&complete(3)).unwrap();
        assert_eq!(k3.generators, vec![unit(6, &[0, 4]), unit(6, &[0, 5]), unit(6, &[1, 5])]);
        assert_eq!(initial_ideal_closed(&path(2)).unwrap().generators, vec![unit(4, &[0, 3])]);
        assert_eq!(initial_ideal_closed(&cycle(4).unwrap()), Err(NewtonError::NotClosed(1, 2, 4)));
    }

    #[test]
    fn rank_route_examples() {
        assert_eq!(mcd_via_rank(&initial_ideal_closed(&path(2)).unwrap()), Ok(0));
        assert_eq!(mcd_via_rank(&initial_ideal_closed(&complete(4)).unwrap()), Ok(4));
        assert_eq!(mcd_via_rank(&initial_ideal_closed(&path(3)).unwrap()), Ok(1));
        let empty = MonomialIdeal::new(4, vec![]).unwrap();
        assert_eq!(mcd_via_rank(&empty), Err(NewtonError::Empty));
        let mixed = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 0]]).unwrap();
        assert_eq!(mcd_via_rank(&mixed), Err(NewtonError::MixedDegree(2, 1)));
        assert!(MonomialIdeal::new(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn lp_route_examples() {
        let one = initial_ideal_closed(&path(2)).unwrap();
        let r = mcd_via_lp(&one).unwrap();
        assert_eq!(r.mcd, 0);
        assert_eq!(r.witness_normal, vec![BigRational::one(); 4]);
        assert!(r.recheck(&one));

        let k3 = initial_ideal_closed(&complete(3)).unwrap();
        let r = mcd_via_lp(&k3).unwrap();
        assert_eq!(r.mcd, 2);
        assert!(r.recheck(&k3));

        let p3 = initial_ideal_closed(&path(3)).unwrap();
        let r = mcd_via_lp(&p3).unwrap();
        assert_eq!(r.mcd, 1);
        assert_eq!(r.witness_subset, vec![0, 1]);
        assert_eq!(r.witness_normal, vec![BigRational::one(); 6]);

        assert_eq!(mcd_via_lp(&MonomialIdeal::new(2, vec![]).unwrap()), Err(NewtonError::Empty));
        assert!(newton_region(&MonomialIdeal::new(2, vec![]).unwrap()).is_empty());
    }

    #[test]
    fn lp_route_on_mixed_degrees() {
        // (2,0), (0,2), (3,3): the third point sits above the segment, so the
        // largest compact face is the segment between the first two
        let m = MonomialIdeal::new(2, vec![vec![2, 0], vec![0, 2], vec![3, 3]]).unwrap();
        let r = mcd_via_lp(&m).unwrap();
        assert_eq!(r.mcd, 1);
        assert_eq!(r.witness_subset, vec![0, 1]);
        assert!(r.recheck(&m));

        // (1,0,0), (0,1,0), (0,0,1), (1,1,1): a triangle plus a point above it
        let m = MonomialIdeal::new(3, vec![unit(3, &[0]), unit(3, &[1]), unit(3, &[2]), unit(3, &[0, 1, 2])])
            .unwrap();
        assert_eq!(mcd_via_lp(&m).unwrap().mcd, 2);

        // (2,0), (1,1), (0,2), (1,0): the only edge of the lower hull joins
        // (0,2) and (1,0); (1,1) lies above it
        let m = MonomialIdeal::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 2], vec![1, 0]]).unwrap();
        let r = mcd_via_lp(&m).unwrap();
        assert_eq!(r.mcd, 1);
        assert!(r.recheck(&m));
        assert!(r.witness_subset.contains(&3));
        // (2,0) lies on the recession ray from (1,0), so it is never on a compact face
        assert!(!r.witness_subset.contains(&0));
    }

    #[test]
    fn witness_scaling_invariance() {
        let m = initial_ideal_closed(&complete(4)).unwrap();
        let r = mcd_via_lp(&m).unwrap();
        for (num, den) in [(1, 3), (7, 2), (1000, 1)] {
            let f = BigRational::new(num.into(), den.into());
            let scaled = scale_normal(&r.witness_normal, &f);
            assert!(recheck_face(&m, &r.witness_subset, &scaled, r.mcd));
        }
        // a nonpositive weight is never a witness
        let mut bad = r.witness_normal.clone();
        bad[0] = BigRational::zero();
        assert!(!recheck_face(&m, &r.witness_subset, &bad, r.mcd));
    }

    #[test]
    fn closed_spread_examples() {
        assert_eq!(closed_spread_via_newton(&complete(4)).unwrap().spread, 5);
        assert_eq!(closed_spread_via_newton(&path(3)).unwrap().spread, 2);
        let k5 = closed_spread_via_newton(&complete(5)).unwrap();
        assert_eq!(k5.spread, 7);
        assert_eq!(k5.report.rank_route_value, Some(6));
        assert!(k5.report.recheck(&k5.ideal));
    }

    #[test]
    fn report_json_uses_rational_strings() {
        let r = mcd_via_lp(&initial_ideal_closed(&path(2)).unwrap()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["witness_normal"][0], "1/1");
        assert_eq!(v["mcd"], 0);
    }
}
