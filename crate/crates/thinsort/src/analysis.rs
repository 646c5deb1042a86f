//! Statistics for measured comparison counts: summary moments, the
//! `a*n*ln(n) + b*n` least-squares fit, and closed-form coefficient bounds
//! for the thinned pivot selectors.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("fit design is degenerate: need at least two distinct sizes")]
    DegenerateDesign,
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
}

/// Least-squares estimate of `y = a*n*ln(n) + b*n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub b_stderr: f64,
    pub residual_rms: f64,
}

/// Sample mean and unbiased (n-1 denominator) variance.
pub fn mean_unbiased_variance(xs: &[f64]) -> Result<(f64, f64), AnalysisError> {
    if xs.len() < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    Ok((mean, ss / (n - 1.0)))
}

/// Fits `y = a*n*ln(n) + b*n` to `(n, y)` points by least squares.
///
/// Solved through a thin QR factorization of the two-column design matrix
/// rather than the normal equations, so exact data is recovered to close to
/// machine precision even when the two columns are nearly collinear.
/// Standard errors use the residual variance with `len - 2` degrees of
/// freedom and are zero when there are no spare degrees of freedom.
pub fn fit_nlnn(points: &[(f64, f64)]) -> Result<FitResult, AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, got: points.len() });
    }
    let mut distinct: Vec<f64> = points.iter().map(|&(n, _)| n).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(AnalysisError::DegenerateDesign);
    }

    let u: Vec<f64> = points.iter().map(|&(n, _)| n * n.ln()).collect();
    let v: Vec<f64> = points.iter().map(|&(n, _)| n).collect();
    let y: Vec<f64> = points.iter().map(|&(_, y)| y).collect();

    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
    let r11 = dot(&u, &u).sqrt();
    if r11 == 0.0 {
        return Err(AnalysisError::DegenerateDesign);
    }
    let q1: Vec<f64> = u.iter().map(|x| x / r11).collect();
    let r12 = dot(&q1, &v);
    let w: Vec<f64> = v.iter().zip(&q1).map(|(x, q)| x - r12 * q).collect();
    let r22 = dot(&w, &w).sqrt();
    let vnorm = dot(&v, &v).sqrt();
    if r22 <= 1e-12 * vnorm {
        return Err(AnalysisError::DegenerateDesign);
    }
    let q2: Vec<f64> = w.iter().map(|x| x / r22).collect();

    // Back-substitute R [a, b]^T = Q^T y.
    let c1 = dot(&q1, &y);
    let c2 = dot(&q2, &y);
    let b = c2 / r22;
    let a = (c1 - r12 * b) / r11;

    let nslots = points.len() as f64;
    let ss_res = points
        .iter()
        .map(|&(n, y)| {
            let e = y - a * n * n.ln() - b * n;
            e * e
        })
        .sum::<f64>();
    let residual_rms = (ss_res / nslots).sqrt();
    let dof = points.len() as isize - 2;
    let (a_stderr, b_stderr) = if dof > 0 {
        let s2 = ss_res / dof as f64;
        // Diagonal of (X^T X)^-1 = R^-1 R^-T for the 2x2 triangular R.
        let var_a = s2 * (1.0 / (r11 * r11) + (r12 * r12) / (r11 * r11 * r22 * r22));
        let var_b = s2 / (r22 * r22);
        (var_a.sqrt(), var_b.sqrt())
    } else {
        (0.0, 0.0)
    };

    Ok(FitResult { a, b, a_stderr, b_stderr, residual_rms })
}

/// Entropy `-p*ln(p) - (1-p)*ln(1-p)` in nats, with the 0*ln(0) = 0
/// convention at the endpoints.
pub fn entropy(p: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(AnalysisError::ProbabilityOutOfRange(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.ln() - (1.0 - p) * (1.0 - p).ln())
}

/// Worst-case coefficient ceiling for the thinned median-of-medians pivot:
/// `(1 + c1/s) / H(0.3/s)`, where `c1*n` bounds the per-level selection cost
/// at thinning `s = 1`.
pub fn tbfprt_worst_coeff_upper(s: usize, c1: f64) -> f64 {
    assert!(s >= 1, "thinning factor must be positive");
    let h = entropy(0.3 / s as f64).expect("0.3/s is a probability for s >= 1");
    (1.0 + c1 / s as f64) / h
}

/// Matching floor `1.443 * (1 + c1/s)`: even perfect pivots cost
/// `n*log2(n)` partition comparisons, plus the selection overhead.
pub fn tbfprt_worst_coeff_lower(s: usize, c1: f64) -> f64 {
    assert!(s >= 1, "thinning factor must be positive");
    1.443 * (1.0 + c1 / s as f64)
}

/// Expected total cost of the layered ninther pivots across one sort:
/// `s * n^(1 - log3(2)) * ln(n)`, sublinear in n for every fixed s.
pub fn pmed3l_depth_estimate(n: f64, s: usize) -> f64 {
    assert!(s >= 1, "thinning factor must be positive");
    let exponent = 1.0 - 2f64.ln() / 3f64.ln();
    s as f64 * n.powf(exponent) * n.ln()
}

/// Best-case comparison coefficient for the layered ninther:
/// `1.443 + 1.924/s`.
pub fn pmed3l_best_coeff(s: usize) -> f64 {
    assert!(s >= 1, "thinning factor must be positive");
    1.443 + 1.924 / s as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments() {
        let (m, v) = mean_unbiased_variance(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-12);
        let (_, v) = mean_unbiased_variance(&[7.0, 7.0]).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(
            mean_unbiased_variance(&[1.0]),
            Err(AnalysisError::InsufficientData { needed: 2, got: 1 })
        );
    }

    #[test]
    fn fit_recovers_exact_coefficients() {
        let points: Vec<(f64, f64)> = (10..18)
            .map(|e| {
                let n = (1u64 << e) as f64;
                (n, 2.0 * n * n.ln() - 3.0 * n)
            })
            .collect();
        let fit = fit_nlnn(&points).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-9 * 2.0, "a = {}", fit.a);
        assert!((fit.b + 3.0).abs() < 1e-9 * 3.0, "b = {}", fit.b);
        assert!(fit.residual_rms < 1e-6);
        assert!(fit.a_stderr < 1e-6 && fit.b_stderr < 1e-6);
    }

    #[test]
    fn fit_recovers_noisy_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut points = Vec::new();
        for e in 10..21 {
            let n = (1u64 << e) as f64;
            for _ in 0..20 {
                let noise = (rng.random::<f64>() - 0.5) * 0.02 * n;
                points.push((n, 1.7 * n * n.ln() - 1.2 * n + noise));
            }
        }
        let fit = fit_nlnn(&points).unwrap();
        assert!((fit.a - 1.7).abs() < 0.01, "a = {}", fit.a);
        assert!((fit.b + 1.2).abs() < 0.1, "b = {}", fit.b);
        assert!(fit.a_stderr > 0.0 && fit.b_stderr > 0.0);
    }

    #[test]
    fn fit_interpolates_two_distinct_sizes() {
        // A repeated point keeps the design tall while only two sizes differ.
        let y = |n: f64| n * n.ln();
        let points = [(64.0, y(64.0)), (128.0, y(128.0)), (128.0, y(128.0))];
        let fit = fit_nlnn(&points).unwrap();
        assert!((fit.a - 1.0).abs() < 1e-9);
        assert!(fit.b.abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_degenerate_designs() {
        assert_eq!(
            fit_nlnn(&[(64.0, 1.0)]),
            Err(AnalysisError::InsufficientData { needed: 2, got: 1 })
        );
        assert_eq!(
            fit_nlnn(&[(64.0, 1.0), (64.0, 2.0), (64.0, 3.0)]),
            Err(AnalysisError::DegenerateDesign)
        );
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!((entropy(0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((entropy(0.0075).unwrap() - 0.044168196).abs() < 1e-8);
        assert!(entropy(-0.1).is_err());
        assert!(entropy(1.1).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn worst_case_bounds() {
        assert!((tbfprt_worst_coeff_upper(40, 0.0) - 22.640725).abs() < 1e-5);
        assert!((tbfprt_worst_coeff_upper(40, 1.0) - 23.206743).abs() < 1e-5);
        assert!((tbfprt_worst_coeff_upper(1, 0.0) - 1.6370248).abs() < 1e-6);
        assert!((tbfprt_worst_coeff_lower(1, 1.0) - 2.886).abs() < 1e-12);
        assert!((tbfprt_worst_coeff_lower(40, 1.0) - 1.479075).abs() < 1e-9);
        for s in [1usize, 2, 5, 10, 40] {
            for c1 in [0.0, 0.5, 1.0, 2.0] {
                assert!(
                    tbfprt_worst_coeff_upper(s, c1) > tbfprt_worst_coeff_lower(s, c1),
                    "bounds crossed at s={} c1={}",
                    s,
                    c1
                );
            }
        }
    }

    #[test]
    fn layered_ninther_estimates() {
        let e = std::f64::consts::E;
        assert!((pmed3l_depth_estimate(e, 1) - 1.4463892).abs() < 1e-6);
        let big = pmed3l_depth_estimate(1e6, 40);
        assert!((big - 90541.65).abs() < 0.5, "depth estimate = {}", big);
        assert!((pmed3l_best_coeff(1) - 3.367).abs() < 1e-12);
        assert!((pmed3l_best_coeff(40) - 1.4911).abs() < 1e-9);
        // The overhead estimate stays sublinear: a million keys at s=1 cost
        // far fewer selection comparisons than one pass over the data.
        assert!(pmed3l_depth_estimate(1e6, 1) < 1e6 / 40.0);
    }
}
