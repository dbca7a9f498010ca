//! Dense LU with partial pivoting, enough for the handful of unknowns the
//! colonization and labor systems produce.

/// Row-major square matrix factorized in place.
pub(crate) struct Lu {
    n: usize,
    a: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` when a pivot falls below `tol` (relative to the
    /// largest entry of the input).
    pub(crate) fn factor(n: usize, mut a: Vec<f64>, tol: f64) -> Option<Lu> {
        assert_eq!(a.len(), n * n);
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (piv, best) =
                (col..n)
                    .map(|r| (r, a[r * n + col].abs()))
                    .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= tol * scale {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    a.swap(col * n + k, piv * n + k);
                }
                perm.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let m = a[r * n + col] / d;
                a[r * n + col] = m;
                if m != 0.0 {
                    for k in col + 1..n {
                        a[r * n + k] -= m * a[col * n + k];
                    }
                }
            }
        }
        Some(Lu { n, a, perm })
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let s: f64 = (0..r).map(|k| self.a[r * n + k] * x[k]).sum();
            x[r] -= s;
        }
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| self.a[r * n + k] * x[k]).sum();
            x[r] = (x[r] - s) / self.a[r * n + r];
        }
        x
    }
}
