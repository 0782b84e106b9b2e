//! Gauss–Kronrod 7–15 rule, the panel workhorse.

/// Kronrod abscissae on [0,1] half-interval (positive half, descending),
/// last entry is the midpoint node.
pub const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
pub const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights; the Gauss nodes are `XGK[1], XGK[3], XGK[5], XGK[7]`.
pub const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// The 15 Kronrod nodes and weights mapped to `[a, b]`, plus the embedded
/// Gauss weight for each node (zero when the node is Kronrod-only).
pub fn nodes_on(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    let mut k = 0;
    for j in 0..8 {
        // Odd-indexed Kronrod abscissae are the embedded Gauss nodes.
        let wg = if j % 2 == 1 { WG[j / 2] * h } else { 0.0 };
        let wk = WGK[j] * h;
        if j == 7 {
            out[k] = (c, wk, wg);
            k += 1;
        } else {
            out[k] = (c - h * XGK[j], wk, wg);
            k += 1;
            out[k] = (c + h * XGK[j], wk, wg);
            k += 1;
        }
    }
    out
}

/// Evaluate the GK 7–15 pair for `f` on `[a, b]`; returns (kronrod, |k-g|).
pub fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mut k_sum = 0.0;
    let mut g_sum = 0.0;
    for (x, wk, wg) in nodes_on(a, b) {
        let v = f(x);
        k_sum += wk * v;
        g_sum += wg * v;
    }
    (k_sum, (k_sum - g_sum).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_interval_length() {
        let wk: f64 = WGK[..7].iter().map(|w| 2.0 * w).sum::<f64>() + WGK[7];
        assert_relative_eq!(wk, 2.0, epsilon = 1e-14);
        let wg: f64 = WG[..3].iter().map(|w| 2.0 * w).sum::<f64>() + WG[3];
        assert_relative_eq!(wg, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_degree_14_polynomial_exactly() {
        // Kronrod 15 is exact through degree 22, Gauss 7 through 13.
        let mut f = |x: f64| x.powi(14) + 3.0 * x.powi(5) - x;
        let (k, _) = gk15(&mut f, 0.0, 1.0);
        assert_relative_eq!(k, 1.0 / 15.0 + 0.5 - 0.5, epsilon = 1e-14);
    }

    #[test]
    fn error_estimate_bounds_true_error_on_smooth_function() {
        let mut f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let (k, e) = gk15(&mut f, 0.0, 1.0);
        // ∫₀¹ sin(3x)e^{-x} dx = [(-sin3x - 3cos3x) e^{-x}/10]₀¹ + ...
        let exact = (3.0 - ((3.0f64).sin() + 3.0 * (3.0f64).cos()) * (-1.0f64).exp()) / 10.0;
        assert!((k - exact).abs() <= e.max(1e-12));
    }
}
