//! Derivative data of the holomorphic extension of the regular part at 0.
//!
//! Writing `H(x,p) = c₀(p) + Σ_{k≥1} Re(ψ_k(p) x^k)` (harmonic in x), each
//! coefficient `ψ_k` is itself harmonic in `p`, so `ψ_k(p) = a_k +
//! Σ_{m≥1}(u_{km} p^m + v_{km} p̄^m)`. The sum over the α-roots of `b`
//! retains only the constant and the `m = α` pair:
//!
//! ```text
//!   Σ_i ψ_k(β_i) = α (a_k + u_{kα} b + v_{kα} b̄) + O(|b|²).
//! ```
//!
//! Coefficients are extracted by Fourier analysis on small circles (nested in
//! `p` for the mixed terms), with a two-radius agreement check monitoring the
//! conditioning. Both mixed families are kept: the `b̄` family is what
//! survives on disks, where the p-dependence of `H` is anti-holomorphic.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::kernels::GreensFunction;
use crate::error::Error;
use crate::Result;

/// Taylor data of `H̃` at `(0,0)`: `holo_dx[k-1] = d^k H̃/dx^k(0,0)` and the
/// mixed α-th p-derivatives `mixed_b[k-1] = ∂^{k+α} H̃/∂p^α ∂x^k(0,0)`
/// together with their `b̄`-family companions (`k = 1..=α`).
#[derive(Debug, Clone)]
pub struct KernelData {
    pub alpha: u32,
    /// Robin value H(0,0).
    pub robin0: f64,
    /// dH̃/dx(0,0) = ∂₁H(0,0) - i ∂₂H(0,0) for H(·,0).
    pub grad_h00: Complex64,
    pub holo_dx: Vec<Complex64>,
    pub mixed_b: Vec<Complex64>,
    pub mixed_bbar: Vec<Complex64>,
    /// Worst relative two-radius disagreement seen during extraction.
    pub conditioning: f64,
}

impl KernelData {
    /// Taylor coefficient `a_k` of `H(x,0) - H(0,0) = Σ Re(a_k x^k)`.
    pub fn taylor_coefficient(&self, k: usize) -> Complex64 {
        self.holo_dx[k - 1] / factorial(k)
    }

    /// The closed-form side of the root-sum expansion
    /// `Σ_i (H(x,β_i) - H(0,β_i))`, truncated at order `α` in `x` and first
    /// order in `b`.
    pub fn root_sum_model(&self, b: Complex64, x: Complex64) -> f64 {
        let alpha = self.alpha as usize;
        let af = self.alpha as f64;
        let fam1 = factorial(alpha - 1);
        let mut s = 0.0;
        let mut xk = Complex64::new(1.0, 0.0);
        for k in 1..=alpha {
            xk *= x;
            let kf = factorial(k);
            s += af * (self.holo_dx[k - 1] * xk).re / kf;
            s += ((self.mixed_b[k - 1] * b + self.mixed_bbar[k - 1] * b.conj()) * xk).re
                / (fam1 * kf);
        }
        s
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// DFT mode `e^{i k θ}` of regularly sampled values.
fn dft_mode(samples: &[f64], k: i64) -> Complex64 {
    let n = samples.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &v) in samples.iter().enumerate() {
        acc += v * Complex64::from_polar(1.0, -TAU * k as f64 * j as f64 / n);
    }
    acc / n
}

/// Coefficients `a_k`, k = 1..=k_max, of a harmonic function sampled on the
/// circle of radius `r` (u = a₀ + Σ Re(a_k x^k) ⇒ a_k = 2·ĉ_k/r^k).
fn circle_coefficients(
    values: &[f64],
    radius: f64,
    k_max: usize,
) -> Vec<Complex64> {
    (1..=k_max)
        .map(|k| 2.0 * dft_mode(values, k as i64) / radius.powi(k as i32))
        .collect()
}

/// Extract `KernelData` for the given domain.
///
/// `k_max ≥ 2` controls how many pure x-derivatives are produced (at least α
/// are always produced since the root-sum model needs them).
pub fn holomorphic_derivatives(
    gf: &GreensFunction,
    k_max: usize,
    alpha: u32,
) -> Result<KernelData> {
    if k_max < 2 {
        return Err(Error::invalid("k_max must be at least 2"));
    }
    let a = alpha as usize;
    let keep = k_max.max(a);
    let zero = Complex64::new(0.0, 0.0);
    let robin0 = gf.robin(zero)?;

    if let Some(radius) = gf.domain.disk_radius() {
        // H(x,p) = (1/2π)(log R + Re log(1 - x p̄ / R²)): pure b̄ family.
        let mut mixed_bbar = vec![zero; a];
        let v_aa = -1.0 / (TAU * a as f64 * radius.powi(2 * a as i32));
        mixed_bbar[a - 1] = Complex64::new(factorial(a) * factorial(a) * v_aa, 0.0);
        return Ok(KernelData {
            alpha,
            robin0,
            grad_h00: zero,
            holo_dx: vec![zero; keep],
            mixed_b: vec![zero; a],
            mixed_bbar,
            conditioning: 0.0,
        });
    }

    let rin = gf.domain.inradius();
    let n_theta = 256usize;
    let sample_circle = |r: f64, p: Complex64| -> Result<Vec<f64>> {
        (0..n_theta)
            .map(|j| {
                let th = TAU * j as f64 / n_theta as f64;
                gf.regular_part(Complex64::from_polar(r, th), p)
            })
            .collect()
    };

    // Pure x-derivatives at two radii.
    let r1 = 0.40 * rin;
    let r2 = 0.55 * rin;
    let c1 = circle_coefficients(&sample_circle(r1, zero)?, r1, keep);
    let c2 = circle_coefficients(&sample_circle(r2, zero)?, r2, keep);
    let mut conditioning = 0.0f64;
    let mut holo_dx = Vec::with_capacity(keep);
    for k in 1..=keep {
        let ak = 0.5 * (c1[k - 1] + c2[k - 1]);
        let dis = (c1[k - 1] - c2[k - 1]).norm() / ak.norm().max(1e-3);
        conditioning = conditioning.max(dis);
        holo_dx.push(ak * factorial(k));
    }
    if conditioning > 1e-5 {
        return Err(Error::IllConditioned(format!(
            "two-radius disagreement {conditioning:.3e} in x-derivative extraction"
        )));
    }

    // Mixed derivatives: expand ψ_k(p) over a p-circle. The m-th p-mode of
    // Re-coefficients needs care: ψ_k(p) is complex, so sample its value via
    // the x-circle DFT for every p on the p-circle, then take p-modes ±α.
    let n_phi = 64usize;
    let extract_mixed = |r_x: f64, r_p: f64| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let mut psi_k: Vec<Vec<Complex64>> = vec![Vec::with_capacity(n_phi); a];
        for j in 0..n_phi {
            let phi = TAU * j as f64 / n_phi as f64;
            let p = Complex64::from_polar(r_p, phi);
            let vals = sample_circle(r_x, p)?;
            let cs = circle_coefficients(&vals, r_x, a);
            for k in 1..=a {
                psi_k[k - 1].push(cs[k - 1]);
            }
        }
        let mut mb = Vec::with_capacity(a);
        let mut mbb = Vec::with_capacity(a);
        for k in 1..=a {
            // ψ_k(p) = a_k + Σ_m (u_{km} p^m + v_{km} p̄^m): complex DFT in φ.
            let n = n_phi as f64;
            let mut u = Complex64::new(0.0, 0.0);
            let mut v = Complex64::new(0.0, 0.0);
            for (j, val) in psi_k[k - 1].iter().enumerate() {
                let ang = TAU * a as f64 * j as f64 / n;
                u += val * Complex64::from_polar(1.0, -ang);
                v += val * Complex64::from_polar(1.0, ang);
            }
            u /= n * r_p.powi(a as i32);
            v /= n * r_p.powi(a as i32);
            mb.push(u * factorial(a) * factorial(k));
            mbb.push(v * factorial(a) * factorial(k));
        }
        Ok((mb, mbb))
    };

    let (mb1, mbb1) = extract_mixed(0.40 * rin, 0.30 * rin)?;
    let (mb2, mbb2) = extract_mixed(0.50 * rin, 0.38 * rin)?;
    let mut mixed_b = Vec::with_capacity(a);
    let mut mixed_bbar = Vec::with_capacity(a);
    for k in 0..a {
        let scale = mb1[k].norm().max(mbb1[k].norm()).max(1e-2);
        conditioning = conditioning.max((mb1[k] - mb2[k]).norm() / scale);
        conditioning = conditioning.max((mbb1[k] - mbb2[k]).norm() / scale);
        mixed_b.push(0.5 * (mb1[k] + mb2[k]));
        mixed_bbar.push(0.5 * (mbb1[k] + mbb2[k]));
    }
    if conditioning > 1e-4 {
        return Err(Error::IllConditioned(format!(
            "two-radius disagreement {conditioning:.3e} in mixed-derivative extraction"
        )));
    }

    let grad_h00 = gf.regular_part_gradient(zero, zero)?;

    Ok(KernelData {
        alpha,
        robin0,
        grad_h00,
        holo_dx,
        mixed_b,
        mixed_bbar,
        conditioning,
    })
}
