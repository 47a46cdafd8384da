//! Dense matrices and rank-revealing elimination.

use serde::Serialize;

use crate::scalar::{Field, IntegralDomain};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Matrix<T> {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Matrix<T> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        let data = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }
}

/// Rank together with a nonsingular minor: `pivot_rows x pivot_cols`
/// (original indices) has full rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Echelon {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

/// Gaussian elimination over a field, first-nonzero pivoting by column.
pub fn gauss_echelon<F: Field>(m: &Matrix<F>) -> Echelon {
    let mut a = m.clone();
    let mut row_ids: Vec<usize> = (0..a.rows).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        row_ids.swap(r, p);
        let inv = a.get(r, c).inverse().expect("pivot is nonzero");
        for i in r + 1..a.rows {
            if a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone() * inv.clone();
            for j in c..a.cols {
                let v = a.get(i, j).clone() - factor.clone() * a.get(r, j).clone();
                a.set(i, j, v);
            }
        }
        pivot_rows.push(row_ids[r]);
        pivot_cols.push(c);
        r += 1;
    }
    Echelon { rank: r, pivot_rows, pivot_cols }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    gauss_echelon(m).rank
}

/// Fraction-free (Bareiss) elimination with full pivoting on the cheapest
/// nonzero entry. Every intermediate entry is a minor of the input, so no
/// fractions ever appear.
pub fn bareiss_echelon<D: IntegralDomain>(m: &Matrix<D>) -> Echelon {
    let mut a = m.clone();
    let mut row_ids: Vec<usize> = (0..a.rows).collect();
    let mut col_ids: Vec<usize> = (0..a.cols).collect();
    let mut prev = D::one();
    let mut k = 0;
    while k < a.rows.min(a.cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..a.rows {
            for j in k..a.cols {
                let e = a.get(i, j);
                if !e.is_zero() {
                    let cost = e.pivot_cost();
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap_rows(k, pi);
        row_ids.swap(k, pi);
        a.swap_cols(k, pj);
        col_ids.swap(k, pj);
        let pivot = a.get(k, k).clone();
        for i in k + 1..a.rows {
            let lead = a.get(i, k).clone();
            for j in k + 1..a.cols {
                let v = pivot.clone() * a.get(i, j).clone() - lead.clone() * a.get(k, j).clone();
                a.set(i, j, v.exact_div(&prev));
            }
            a.set(i, k, D::zero());
        }
        prev = pivot;
        k += 1;
    }
    let mut pivots: Vec<(usize, usize)> = (0..k).map(|t| (row_ids[t], col_ids[t])).collect();
    pivots.sort_unstable();
    Echelon {
        rank: k,
        pivot_rows: pivots.iter().map(|p| p.0).collect(),
        pivot_cols: {
            let mut c: Vec<usize> = pivots.iter().map(|p| p.1).collect();
            c.sort_unstable();
            c
        },
    }
}

/// Row space built one vector at a time; `insert` reports whether the
/// vector was independent of everything inserted before.
#[derive(Debug, Clone)]
pub struct IncrementalBasis<F> {
    /// Reduced rows paired with their pivot column.
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Default for IncrementalBasis<F> {
    fn default() -> Self {
        IncrementalBasis { rows: Vec::new() }
    }
}

impl<F: Field> IncrementalBasis<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.clone() - factor.clone() * r.clone();
            }
        }
        v
    }

    pub fn is_independent(&self, v: &[F]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    pub fn insert(&mut self, v: &[F]) -> bool {
        let reduced = self.reduce(v);
        let Some(pc) = reduced.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = reduced[pc].inverse().expect("nonzero");
        let normalized: Vec<F> = reduced.into_iter().map(|x| x * inv.clone()).collect();
        // keep earlier rows reduced against the new pivot
        for (_, row) in &mut self.rows {
            if !row[pc].is_zero() {
                let factor = row[pc].clone();
                for (x, n) in row.iter_mut().zip(&normalized) {
                    *x = x.clone() - factor.clone() * n.clone();
                }
            }
        }
        self.rows.push((pc, normalized));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{PrimeField, Rationals, ScalarField};
    use num_bigint::BigInt;

    fn int_matrix(rows: &[&[i64]]) -> Matrix<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    #[test]
    fn bareiss_and_gauss_agree_on_small_cases() {
        let cases: Vec<(Vec<&[i64]>, usize)> = vec![
            (vec![&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]], 2),
            (vec![&[0, 0], &[0, 0]], 0),
            (vec![&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]], 3),
            (vec![&[1, 1, 0, 0], &[0, 1, 1, 0], &[1, 0, -1, 0]], 2),
        ];
        for (rows, expected) in cases {
            let m = int_matrix(&rows);
            let e = bareiss_echelon(&m);
            assert_eq!(e.rank, expected);
            let q = m.map(|x| Rationals.embed_bigint(x));
            assert_eq!(rank(&q), expected);
            let p = PrimeField::new(1_000_000_007).unwrap();
            assert_eq!(rank(&m.map(|x| p.embed_bigint(x))), expected);
            // the certified minor is nonsingular
            let minor = m.select(&e.pivot_rows, &e.pivot_cols);
            assert_eq!(bareiss_echelon(&minor).rank, expected);
        }
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m: Matrix<BigInt> = Matrix::from_rows(4, vec![]);
        assert_eq!(bareiss_echelon(&m).rank, 0);
    }

    #[test]
    fn small_prime_can_deflate_rank() {
        let m = int_matrix(&[&[1, 1], &[1, 8]]);
        let p7 = PrimeField::new(7).unwrap();
        assert_eq!(rank(&m.map(|x| p7.embed_bigint(x))), 1);
        assert_eq!(bareiss_echelon(&m).rank, 2);
    }

    #[test]
    fn incremental_basis_tracks_rank() {
        let q = Rationals;
        let v = |xs: &[i64]| xs.iter().map(|&x| q.embed_i64(x)).collect::<Vec<_>>();
        let mut b = IncrementalBasis::default();
        assert!(b.insert(&v(&[1, 2, 0])));
        assert!(!b.insert(&v(&[2, 4, 0])));
        assert!(b.is_independent(&v(&[0, 1, 1])));
        assert!(b.insert(&v(&[0, 1, 1])));
        assert!(!b.insert(&v(&[1, 3, 1])));
        assert!(b.insert(&v(&[0, 0, 7])));
        assert_eq!(b.rank(), 3);
    }
}
