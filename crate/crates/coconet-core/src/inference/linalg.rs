//! Dense least squares via Householder QR with column pivoting.
//! Sized for regression designs (tens of rows, a handful of columns).

use crate::scalar::Real;

/// Least-squares solution of X b = y.
#[derive(Debug, Clone)]
pub struct Lstsq<F> {
    /// Coefficients in original column order; columns dropped for rank
    /// deficiency get zero.
    pub coef: Vec<F>,
    pub residuals: Vec<F>,
    pub fitted: Vec<F>,
    pub rank: usize,
    /// Original indices of columns dropped by the rank check.
    pub dropped: Vec<usize>,
}

/// Householder-QR least squares with column pivoting. Rank-deficient
/// designs are solved over the pivoted leading columns; the rest are
/// reported in `dropped`.
pub fn least_squares<F: Real>(columns: &[Vec<F>], y: &[F]) -> Lstsq<F> {
    let n = y.len();
    let p = columns.len();
    debug_assert!(columns.iter().all(|c| c.len() == n));

    let mut a: Vec<Vec<F>> = columns.to_vec();
    let mut z: Vec<F> = y.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();

    let steps = p.min(n);
    let mut rank = steps;
    let mut r00 = F::zero();

    for k in 0..steps {
        // pivot: remaining column with the largest tail norm
        let mut best = k;
        let mut best_norm = F::zero();
        for j in k..p {
            let norm: F = a[j][k..].iter().map(|&v| v * v).sum();
            if norm > best_norm {
                best_norm = norm;
                best = j;
            }
        }
        a.swap(k, best);
        perm.swap(k, best);

        let norm_x = best_norm.sqrt();
        if k == 0 {
            r00 = norm_x;
        }
        let tol = F::epsilon() * F::from_usize(n.max(p)).unwrap() * r00;
        if norm_x <= tol {
            rank = k;
            break;
        }

        // Householder vector v = x + sign(x0) |x| e1, reflect tail rows
        let sign = if a[k][k] < F::zero() {
            -F::one()
        } else {
            F::one()
        };
        let mut v: Vec<F> = a[k][k..].to_vec();
        v[0] += sign * norm_x;
        let vtv: F = v.iter().map(|&t| t * t).sum();
        let two = F::one() + F::one();

        let reflect = |col: &mut [F], v: &[F]| {
            let dot: F = v.iter().zip(col.iter()).map(|(&a, &b)| a * b).sum();
            let scale = two * dot / vtv;
            for (c, &vi) in col.iter_mut().zip(v.iter()) {
                *c = *c - scale * vi;
            }
        };

        for j in k..p {
            reflect(&mut a[j][k..], &v);
        }
        reflect(&mut z[k..], &v);
        // r_kk is now a[k][k]; entries below are numerically zero
        for row in k + 1..n {
            a[k][row] = F::zero();
        }
    }

    // back substitution on the leading rank x rank triangle
    let mut beta_perm = vec![F::zero(); p];
    for k in (0..rank).rev() {
        let mut acc = z[k];
        for j in k + 1..rank {
            acc = acc - a[j][k] * beta_perm[j];
        }
        beta_perm[k] = acc / a[k][k];
    }

    let mut coef = vec![F::zero(); p];
    for (slot, &orig) in perm.iter().enumerate() {
        coef[orig] = beta_perm[slot];
    }
    let dropped: Vec<usize> = perm[rank..].to_vec();

    let fitted: Vec<F> = (0..n)
        .map(|row| {
            let mut acc = F::zero();
            for (j, col) in columns.iter().enumerate() {
                acc += coef[j] * col[row];
            }
            acc
        })
        .collect();
    let residuals: Vec<F> = y.iter().zip(&fitted).map(|(&yi, &fi)| yi - fi).collect();

    Lstsq {
        coef,
        residuals,
        fitted,
        rank,
        dropped,
    }
}

/// Diagonal of (X^T X)^(-1) for a full-rank design, from the same pivoted
/// QR factorization. Returns None when X is rank deficient.
pub fn xtx_inverse_diagonal<F: Real>(columns: &[Vec<F>]) -> Option<Vec<F>> {
    let n = columns.first().map_or(0, Vec::len);
    let p = columns.len();
    if p == 0 || n < p {
        return None;
    }

    let mut a: Vec<Vec<F>> = columns.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut r00 = F::zero();

    for k in 0..p {
        let mut best = k;
        let mut best_norm = F::zero();
        for j in k..p {
            let norm: F = a[j][k..].iter().map(|&v| v * v).sum();
            if norm > best_norm {
                best_norm = norm;
                best = j;
            }
        }
        a.swap(k, best);
        perm.swap(k, best);

        let norm_x = best_norm.sqrt();
        if k == 0 {
            r00 = norm_x;
        }
        if norm_x <= F::epsilon() * F::from_usize(n.max(p)).unwrap() * r00 {
            return None;
        }

        let sign = if a[k][k] < F::zero() {
            -F::one()
        } else {
            F::one()
        };
        let mut v: Vec<F> = a[k][k..].to_vec();
        v[0] += sign * norm_x;
        let vtv: F = v.iter().map(|&t| t * t).sum();
        let two = F::one() + F::one();
        for j in k..p {
            let dot: F = v.iter().zip(a[j][k..].iter()).map(|(&x, &y)| x * y).sum();
            let scale = two * dot / vtv;
            for (c, &vi) in a[j][k..].iter_mut().zip(v.iter()) {
                *c = *c - scale * vi;
            }
        }
        for row in k + 1..n {
            a[k][row] = F::zero();
        }
    }

    // R^(-1) by back substitution against the identity, then
    // (X^T X)^(-1) = R^(-1) R^(-T) in permuted space.
    let mut rinv = vec![vec![F::zero(); p]; p]; // rinv[col][row]
    for e in 0..p {
        let mut x = vec![F::zero(); p];
        for k in (0..=e).rev() {
            let mut acc = if k == e { F::one() } else { F::zero() };
            for j in k + 1..=e {
                acc = acc - a[j][k] * x[j];
            }
            x[k] = acc / a[k][k];
        }
        rinv[e] = x;
    }

    let mut diag = vec![F::zero(); p];
    for i in 0..p {
        // row i of R^(-1): entries rinv[col][i] for col >= i
        let mut acc = F::zero();
        for col in i..p {
            let v = rinv[col][i];
            acc += v * v;
        }
        diag[perm[i]] = acc;
    }
    Some(diag)
}
