//! Symmetric/general tridiagonal helpers: Thomas solve and lowest eigenpair.

/// Solves `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]` in place.
///
/// `sub[0]` and `sup[n-1]` are ignored. No pivoting: callers pass diagonally
/// dominant or shifted-definite systems.
pub fn thomas_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    debug_assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    if n == 0 {
        return;
    }
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        c[i - 1] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i - 1];
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `shift` (Sturm sequence count).
fn sturm_count(diag: &[f64], off: &[f64], shift: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - shift;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON * off[i - 1].abs().max(1.0) } else { q };
        q = diag[i] - shift - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue and normalized eigenvector (unit Euclidean norm, positive
/// sum) of a symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off.len() == diag.len() - 1`).
///
/// The eigenvalue comes from Sturm bisection to machine precision; the vector
/// from inverse iteration at a slightly lowered shift.
pub fn lowest_eigenpair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n);
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);

    let shift = lambda - 1e-10 * lambda.abs().max(1.0);
    let sub: Vec<f64> = std::iter::once(0.0).chain(off.iter().copied()).collect();
    let sup: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    let shifted: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut v = vec![1.0; n];
    for _ in 0..4 {
        thomas_solve(&sub, &shifted, &sup, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    (lambda, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_matches_dense_solution() {
        // [[4,1,0],[1,4,1],[0,1,4]] x = [5,6,5] => x = [1,1,1]
        let mut rhs = vec![5.0, 6.0, 5.0];
        thomas_solve(&[0.0, 1.0, 1.0], &[4.0, 4.0, 4.0], &[1.0, 1.0, 0.0], &mut rhs);
        for x in rhs {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lowest_eigenpair_of_discrete_laplacian() {
        // tridiag(-1, 2, -1) of size n: lambda_1 = 2 - 2 cos(pi/(n+1)).
        let n = 50;
        let (lambda, v) = lowest_eigenpair(&vec![2.0; n], &vec![-1.0; n - 1]);
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((lambda - exact).abs() < 1e-13, "{lambda} {exact}");
        let k = std::f64::consts::PI / (n as f64 + 1.0);
        let norm: f64 = (1..=n).map(|j| (k * j as f64).sin().powi(2)).sum::<f64>().sqrt();
        for (j, vj) in v.iter().enumerate() {
            let exact = (k * (j + 1) as f64).sin() / norm;
            assert!((vj - exact).abs() < 1e-9);
        }
    }
}
