//! Small numeric helpers shared across modules.

/// Sum a slice by a pairwise tree in index order. The reduction order is
/// fixed, so serial and parallel producers of `terms` agree bitwise.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2);
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Slope of `log y` against `log x`, the convergence-order estimator used by
/// all ladder checks. Entries with `y <= floor` are dropped to keep fits from
/// being poisoned by values at the noise level.
pub fn loglog_slope(x: &[f64], y: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > floor)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Some(ls_slope(&xs, &ys))
}

/// Fit `y ≈ c·x^p` for known `p` and return `c` by least squares in `c`.
pub fn power_coefficient(x: &[f64], y: &[f64], p: f64) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| a.powf(p) * b).sum();
    let den: f64 = x.iter().map(|a| a.powf(2.0 * p)).sum();
    num / den
}

/// Fit `y ≈ c1·x^p + c2·x^q` (two-term ladder extrapolation); returns `(c1, c2)`.
pub fn two_term_fit(x: &[f64], y: &[f64], p: f64, q: f64) -> (f64, f64) {
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let u = xi.powf(p);
        let v = xi.powf(q);
        a11 += u * u;
        a12 += u * v;
        a22 += v * v;
        b1 += u * yi;
        b2 += v * yi;
    }
    let det = a11 * a22 - a12 * a12;
    ((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pairwise_matches_naive() {
        let terms: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 - 5.0).collect();
        let naive: f64 = terms.iter().sum();
        assert_relative_eq!(pairwise_sum(&terms), naive, epsilon = 1e-9);
    }

    #[test]
    fn slope_recovers_power_law() {
        let x = [0.4, 0.2, 0.1, 0.05];
        let y: Vec<f64> = x.iter().map(|&h| 3.0 * h * h * h).collect();
        let s = loglog_slope(&x, &y, 0.0).unwrap();
        assert_relative_eq!(s, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn two_term_fit_exact() {
        let x = [0.4f64, 0.2, 0.1, 0.05];
        let y: Vec<f64> = x.iter().map(|&h| 2.0 * h.powi(2) + 5.0 * h.powi(4)).collect();
        let (c1, c2) = two_term_fit(&x, &y, 2.0, 4.0);
        assert_relative_eq!(c1, 2.0, epsilon = 1e-8);
        assert_relative_eq!(c2, 5.0, epsilon = 1e-6);
    }
}
