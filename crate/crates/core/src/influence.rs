//! Influence matrices and their colonization matrices.
//!
//! Both matrices are indexed `(source, target)`: entry `(j, i)` of `F` is the
//! weight player `i` gives to player `j`'s mixed utility, and entry `(j, i)`
//! of `C` is the weight of `j`'s pure utility inside `i`'s mixed utility.
//! Every per-target quantity (budgets, normalization) runs down a column.
//!
//! The colonization solve works on the partial matrix `P`, which satisfies
//!
//! ```text
//! P[j][i] = Σ_k F[k][i] · P[j][k] + δ(i, j) · (1 − Σ_k |F[k][i]|)
//! ```
//!
//! Fixing the source `j`, the row `P[j][·]` solves `(I − Fᵀ) x = s_j e_j`
//! where `s_j` is player `j`'s free budget. The budget bound makes `I − Fᵀ`
//! strictly diagonally dominant, so one factorization serves every source.
//! Normalizing each column of `P` to unit absolute sum gives `C`.

use crate::linalg::Lu;
use thiserror::Error;

/// Absolute column sum below which normalization refuses to divide.
pub const DEGENERATE_COLUMN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfluenceError {
    #[error("matrix is not square (row {row} has {len} entries, expected {n})")]
    NonSquare { row: usize, len: usize, n: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("diagonal entry ({0}, {0}) must be zero")]
    NonZeroDiagonal(usize),
    #[error("influence budget of player {target} is {sum}, must be below 1")]
    BudgetExceeded { target: usize, sum: f64 },
    #[error("colonization system is singular")]
    SingularSystem,
    #[error("column {0} of the partial colonization has no mass")]
    DegenerateColumn(usize),
    #[error("self weight of player {index} is {value}, must be positive")]
    NonPositiveSelfWeight { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("{what} is outside the admissible domain")]
    OutOfRange { what: &'static str },
}

fn check_square(entries: &[Vec<f64>]) -> Result<usize, InfluenceError> {
    let n = entries.len();
    if n == 0 {
        return Err(InfluenceError::Empty);
    }
    for (row, r) in entries.iter().enumerate() {
        if r.len() != n {
            return Err(InfluenceError::NonSquare { row, len: r.len(), n });
        }
        if let Some(col) = r.iter().position(|v| !v.is_finite()) {
            return Err(InfluenceError::NonFinite { row, col });
        }
    }
    Ok(n)
}

/// A validated influence matrix: zero diagonal and every target's absolute
/// incoming weight strictly below one.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl InfluenceMatrix {
    /// Validates `entries[j][i] = f_{j,i}`.
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self, InfluenceError> {
        let n = check_square(&entries)?;
        let flat: Vec<f64> = entries.into_iter().flatten().collect();
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(InfluenceError::NonZeroDiagonal(i));
            }
        }
        for i in 0..n {
            let sum: f64 = (0..n).map(|j| flat[j * n + i].abs()).sum();
            if sum >= 1.0 {
                return Err(InfluenceError::BudgetExceeded { target: i, sum });
            }
        }
        Ok(Self { n, entries: flat })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0.0; n * n] }
    }

    /// Builds a matrix from `(source, target, weight)` edges on `n` nodes.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, InfluenceError> {
        let mut rows = vec![vec![0.0; n]; n];
        for (j, i, w) in edges {
            if j >= n || i >= n {
                return Err(InfluenceError::DimensionMismatch { expected: n, actual: j.max(i) + 1 });
            }
            rows[j][i] = w;
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_{source,target}`.
    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.entries[source * self.n + target]
    }

    /// Absolute incoming weight of `target`.
    pub fn budget(&self, target: usize) -> f64 {
        (0..self.n).map(|j| self.get(j, target).abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Ultimate utility weights. Each column has unit absolute sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ColonizationMatrix {
    n: usize,
    entries: Vec<f64>,
    partial: Option<Vec<Vec<f64>>>,
}

impl ColonizationMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries, partial: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c_{source,target}`: weight of `source`'s pure utility in `target`'s
    /// mixed utility.
    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.entries[source * self.n + target]
    }

    /// Pre-normalization values, when this matrix came out of the solver.
    pub fn partial(&self) -> Option<&[Vec<f64>]> {
        self.partial.as_deref()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// `Σ_j |c_{j,target}|`.
    pub fn column_abs_sum(&self, target: usize) -> f64 {
        (0..self.n).map(|j| self.get(j, target).abs()).sum()
    }

    /// Mixed utility of `target` given pure utilities `u`.
    pub fn mixed_utility(&self, target: usize, u: &[f64]) -> f64 {
        (0..self.n).map(|j| self.get(j, target) * u[j]).sum()
    }
}

/// Solves the partial colonization system. Returns `p[j][i] = c^p_{j,i}`.
pub fn partial_colonization(f: &InfluenceMatrix) -> Result<Vec<Vec<f64>>, InfluenceError> {
    let n = f.n();
    // system[i][k] = δ(i, k) − f_{k,i}
    let mut system = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            system[i * n + k] = if i == k { 1.0 } else { 0.0 } - f.get(k, i);
        }
    }
    let lu = Lu::factor(n, system, 1e-14).ok_or(InfluenceError::SingularSystem)?;
    let mut out = Vec::with_capacity(n);
    let mut rhs = vec![0.0; n];
    for j in 0..n {
        rhs.iter_mut().for_each(|v| *v = 0.0);
        rhs[j] = 1.0 - f.budget(j);
        out.push(lu.solve(&rhs));
    }
    Ok(out)
}

/// Largest absolute residual of the partial-colonization equations.
pub fn partial_residual(f: &InfluenceMatrix, p: &[Vec<f64>]) -> f64 {
    let n = f.n();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let mut rhs: f64 = (0..n).map(|k| f.get(k, i) * p[j][k]).sum();
            if i == j {
                rhs += 1.0 - f.budget(i);
            }
            worst = worst.max((p[j][i] - rhs).abs());
        }
    }
    worst
}

/// Rescales every column of `partial` to unit absolute sum.
pub fn normalize_colonization(partial: Vec<Vec<f64>>) -> Result<ColonizationMatrix, InfluenceError> {
    let n = check_square(&partial)?;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let sum: f64 = partial.iter().map(|row| row[i].abs()).sum();
        if sum < DEGENERATE_COLUMN_TOL {
            return Err(InfluenceError::DegenerateColumn(i));
        }
        for j in 0..n {
            entries[j * n + i] = partial[j][i] / sum;
        }
    }
    Ok(ColonizationMatrix { n, entries, partial: Some(partial) })
}

/// Full transform `F → C`, rejecting non-positive self weights.
pub fn colonization(f: &InfluenceMatrix) -> Result<ColonizationMatrix, InfluenceError> {
    if f.is_zero() {
        let mut c = ColonizationMatrix::identity(f.n());
        c.partial = Some(c.to_rows());
        return Ok(c);
    }
    let c = normalize_colonization(partial_colonization(f)?)?;
    for i in 0..c.n() {
        let value = c.get(i, i);
        if value <= 0.0 {
            return Err(InfluenceError::NonPositiveSelfWeight { index: i, value });
        }
    }
    Ok(c)
}

/// `U_i = Σ_j c_{j,i} u_j` for every player.
pub fn mixed_utilities(c: &ColonizationMatrix, u: &[f64]) -> Result<Vec<f64>, InfluenceError> {
    if u.len() != c.n() {
        return Err(InfluenceError::DimensionMismatch { expected: c.n(), actual: u.len() });
    }
    Ok((0..c.n()).map(|i| c.mixed_utility(i, u)).collect())
}

/// Two-player influence `(f_{2,1}, f_{1,2})` to colonization `(c_{2,1}, c_{1,2})`.
pub fn two_player_f_to_c(f21: f64, f12: f64) -> Result<(f64, f64), InfluenceError> {
    let ok = |v: f64| v.is_finite() && v.abs() < 1.0;
    if !ok(f21) || !ok(f12) {
        return Err(InfluenceError::OutOfRange { what: "influence pair" });
    }
    let (a21, a12) = (f21.abs(), f12.abs());
    let denom = 1.0 - a12 * a21;
    Ok((f21 * (1.0 - a12) / denom, f12 * (1.0 - a21) / denom))
}

/// Inverse of [`two_player_f_to_c`] on the open diamond `|c21| + |c12| < 1`.
///
/// The forward map gives `|c_{1,2}| = |f_{1,2}| (1 − |c_{2,1}|)`, so the
/// inverse is `f_{2,1} = c_{2,1} / (1 − |c_{1,2}|)` and symmetrically.
pub fn two_player_c_to_f(c21: f64, c12: f64) -> Result<(f64, f64), InfluenceError> {
    if !(c21.is_finite() && c12.is_finite()) || c21.abs() + c12.abs() >= 1.0 {
        return Err(InfluenceError::OutOfRange { what: "colonization pair" });
    }
    Ok((c21 / (1.0 - c12.abs()), c12 / (1.0 - c21.abs())))
}
