use crate::error::{Error, Result};

/// Thomas solve of `a_i x_{i−1} + b_i x_i + c_i x_{i+1} = d_i`; `a[0]` and `c[n−1]` are ignored.
pub fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    if a.len() != n || c.len() != n || d.len() != n || n == 0 {
        return Err(Error::Domain(
            "tridiagonal bands have mismatched lengths".into(),
        ));
    }
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut pivot = b[0];
    if pivot == 0.0 {
        return Err(Error::Domain(
            "zero pivot in tridiagonal solve at row 0".into(),
        ));
    }
    cp[0] = c[0] / pivot;
    dp[0] = d[0] / pivot;
    for i in 1..n {
        pivot = b[i] - a[i] * cp[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Domain(format!(
                "zero pivot in tridiagonal solve at row {i}"
            )));
        }
        cp[i] = c[i] / pivot;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / pivot;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        x[i] -= cp[i] * x[i + 1];
    }
    Ok(x)
}
