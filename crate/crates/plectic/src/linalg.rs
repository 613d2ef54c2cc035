//! Dense exact linear algebra over the rationals: rank, linear solves and
//! inconsistency certificates via plain rational pivoting.

use num_traits::Zero;

use crate::scalar::Rational;

/// A dense row-major matrix with rational entries.
#[derive(Clone, PartialEq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[a] -= factor * row[b]`.
    fn row_sub(&mut self, a: usize, b: usize, factor: &Rational) {
        for j in 0..self.cols {
            let delta = self.get(b, j) * factor;
            let v = self.get(a, j) - delta;
            self.set(a, j, v);
        }
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            for rr in (pivot_row + 1)..m.rows {
                if !m.get(rr, col).is_zero() {
                    let factor = m.get(rr, col) / m.get(pivot_row, col);
                    m.row_sub(rr, pivot_row, &factor);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }
}

/// Result of an exact linear solve `A x = b`.
#[derive(Clone, PartialEq, Debug)]
pub enum SolveOutcome {
    /// A particular solution (free variables set to zero).
    Solution(Vec<Rational>),
    /// No solution; the certificate `y` satisfies `y A = 0` and `y.b != 0`.
    Inconsistent { certificate: Vec<Rational> },
}

/// Solve `A x = b` exactly, producing either a particular solution or a
/// left-nullspace certificate of inconsistency.
pub fn solve(a: &QMatrix, b: &[Rational]) -> SolveOutcome {
    assert_eq!(a.rows, b.len(), "right-hand side length mismatch");
    let mut m = a.clone();
    // row-operation tracker: e * a == m at every step
    let mut e = QMatrix::zero(a.rows, a.rows);
    for i in 0..a.rows {
        e.set(i, i, Rational::from_integer(1.into()));
    }
    let mut rhs = b.to_vec();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let Some(r) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(pivot_row, r);
        e.swap_rows(pivot_row, r);
        rhs.swap(pivot_row, r);
        for rr in 0..m.rows {
            if rr != pivot_row && !m.get(rr, col).is_zero() {
                let factor = m.get(rr, col) / m.get(pivot_row, col);
                m.row_sub(rr, pivot_row, &factor);
                e.row_sub(rr, pivot_row, &factor);
                let delta = &rhs[pivot_row] * &factor;
                rhs[rr] = &rhs[rr] - &delta;
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }

    for (r, value) in rhs.iter().enumerate().skip(pivot_row) {
        if !value.is_zero() {
            let certificate = (0..a.rows).map(|j| e.get(r, j).clone()).collect();
            return SolveOutcome::Inconsistent { certificate };
        }
    }

    let mut x = vec![Rational::zero(); a.cols];
    for (r, c) in pivots {
        x[c] = &rhs[r] / m.get(r, c);
    }
    SolveOutcome::Solution(x)
}

/// A basis of the right nullspace of `A`, one vector per free column.
pub fn nullspace(a: &QMatrix) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let Some(r) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(pivot_row, r);
        for rr in 0..m.rows {
            if rr != pivot_row && !m.get(rr, col).is_zero() {
                let factor = m.get(rr, col) / m.get(pivot_row, col);
                m.row_sub(rr, pivot_row, &factor);
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::from_integer(1.into());
        for &(r, c) in &pivots {
            if !m.get(r, free).is_zero() {
                v[c] = -(m.get(r, free) / m.get(r, c));
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn mat(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_singular_matrix() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(QMatrix::zero(3, 4).rank(), 0);
    }

    #[test]
    fn solve_consistent() {
        let a = mat(&[&[2, 0], &[0, 4], &[2, 4]]);
        let b = vec![rat_int(1), rat_int(2), rat_int(3)];
        match solve(&a, &b) {
            SolveOutcome::Solution(x) => {
                assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
            }
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn solve_underdetermined_picks_particular() {
        let a = mat(&[&[1, 1]]);
        let b = vec![rat_int(5)];
        match solve(&a, &b) {
            SolveOutcome::Solution(x) => {
                let combo = &x[0] + &x[1];
                assert_eq!(combo, rat_int(5));
            }
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn nullspace_basis() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = nullspace(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in 0..a.rows() {
                let dot: Rational = (0..a.cols())
                    .map(|c| a.get(r, c) * &v[c])
                    .fold(Rational::zero(), |acc, x| acc + x);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn inconsistency_certificate() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        let b = vec![rat_int(1), rat_int(3)];
        match solve(&a, &b) {
            SolveOutcome::Inconsistent { certificate } => {
                // y A = 0
                for col in 0..2 {
                    let dot: Rational = (0..2)
                        .map(|r| &certificate[r] * a.get(r, col))
                        .fold(Rational::zero(), |acc, v| acc + v);
                    assert!(dot.is_zero());
                }
                // y . b != 0
                let pairing: Rational = certificate
                    .iter()
                    .zip(&b)
                    .map(|(y, v)| y * v)
                    .fold(Rational::zero(), |acc, v| acc + v);
                assert!(!pairing.is_zero());
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }
}
