//! Regularized incomplete gamma / beta functions and the t and chi-squared
//! tail probabilities built on them. Implemented in-module to keep the
//! statistics layer dependency-light; accuracy is verified against
//! 50-digit reference values to 1e-10.

use crate::scalar::Real;

const MAX_ITER: usize = 500;

/// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma<F: Real>(x: F) -> F {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let half = F::from_f64_lossy(0.5);
    let one = F::one();
    if x < half {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let pi = F::from_f64_lossy(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(one - x);
    }
    let x = x - one;
    let mut acc = F::from_f64_lossy(0.99999999999980993);
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += F::from_f64_lossy(c) / (x + F::from_usize(i + 1).unwrap());
    }
    let g = F::from_f64_lossy(7.5);
    let t = x + g;
    let ln_sqrt_2pi = F::from_f64_lossy(0.918938533204672741780329736406);
    ln_sqrt_2pi + (x + half) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
pub fn reg_gamma_p<F: Real>(a: F, x: F) -> F {
    if x <= F::zero() {
        return F::zero();
    }
    if x < a + F::one() {
        gamma_p_series(a, x)
    } else {
        F::one() - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn reg_gamma_q<F: Real>(a: F, x: F) -> F {
    if x <= F::zero() {
        return F::one();
    }
    if x < a + F::one() {
        F::one() - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series<F: Real>(a: F, x: F) -> F {
    let eps = F::from_f64_lossy(1e-16);
    let mut term = F::one() / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += F::one();
        term = term * x / ap;
        sum += term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    sum * (a * x.ln() - x - ln_gamma(a)).exp()
}

fn gamma_q_cf<F: Real>(a: F, x: F) -> F {
    // modified Lentz continued fraction for Q(a, x)
    let eps = F::from_f64_lossy(1e-16);
    let tiny = F::from_f64_lossy(1e-300);
    let one = F::one();
    let mut b = x + one - a;
    let mut c = one / tiny;
    let mut d = one / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -F::from_usize(i).unwrap() * (F::from_usize(i).unwrap() - a);
        b += one + one;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let delta = d * c;
        h = h * delta;
        if (delta - one).abs() < eps {
            break;
        }
    }
    (a * x.ln() - x - ln_gamma(a)).exp() * h
}

/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
pub fn reg_inc_beta<F: Real>(a: F, b: F, x: F) -> F {
    if x <= F::zero() {
        return F::zero();
    }
    if x >= F::one() {
        return F::one();
    }
    let one = F::one();
    let front =
        (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (one - x).ln()).exp();
    // continued fraction converges fast for x < (a+1)/(a+b+2)
    let two = one + one;
    if x < (a + one) / (a + b + two) {
        front * beta_cf(a, b, x) / a
    } else {
        one - front * beta_cf(b, a, one - x) / b
    }
}

fn beta_cf<F: Real>(a: F, b: F, x: F) -> F {
    let eps = F::from_f64_lossy(1e-16);
    let tiny = F::from_f64_lossy(1e-300);
    let one = F::one();
    let two = one + one;
    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one - qab * x / qap;
    if d.abs() < tiny {
        d = tiny;
    }
    d = one / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let mf = F::from_usize(m).unwrap();
        let m2 = mf * two;
        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        h = h * d * c;
        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = one + aa * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = one + aa / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = one / d;
        let delta = d * c;
        h = h * delta;
        if (delta - one).abs() < eps {
            break;
        }
    }
    h
}

/// Two-sided p-value of a t statistic with df degrees of freedom.
pub fn t_two_sided_p<F: Real>(t: F, df: F) -> F {
    if t.is_infinite() {
        return F::zero();
    }
    if t == F::zero() {
        return F::one();
    }
    let half = F::from_f64_lossy(0.5);
    let x = df / (df + t * t);
    reg_inc_beta(df * half, half, x)
}

/// Upper-tail probability of a chi-squared statistic with k degrees of freedom.
pub fn chi_squared_upper_p<F: Real>(x: F, k: F) -> F {
    if x <= F::zero() {
        return F::one();
    }
    let half = F::from_f64_lossy(0.5);
    reg_gamma_q(k * half, x * half)
}
