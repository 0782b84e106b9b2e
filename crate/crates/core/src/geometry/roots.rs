//! The α-roots of the shift parameter and the root-sum expansion check.

use num_complex::Complex64;

use super::holo::KernelData;
use super::kernels::GreensFunction;
use crate::error::Error;
use crate::Result;

/// The α complex roots of `β^α = b`, ordered by increasing principal
/// argument so runs are reproducible. `b = 0` yields the α-fold root 0.
pub fn roots_of_b(b: Complex64, alpha: u32) -> Vec<Complex64> {
    assert!(alpha >= 1);
    if b.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); alpha as usize];
    }
    let modulus = b.norm().powf(1.0 / alpha as f64);
    let base = b.arg() / alpha as f64;
    let mut roots: Vec<Complex64> = (0..alpha)
        .map(|j| {
            Complex64::from_polar(
                modulus,
                base + std::f64::consts::TAU * j as f64 / alpha as f64,
            )
        })
        .collect();
    roots.sort_by(|a, c| a.arg().total_cmp(&c.arg()));
    roots
}

/// Residual of the expansion of `Σ_i (H(x,β_i) - H(0,β_i))` against the
/// Taylor/mixed-derivative model carried by `KernelData`; scales like
/// `O(|b|²|x|) + O(|x|^{α+1})`.
pub fn sum_over_roots_expansion_check(
    gf: &GreensFunction,
    kd: &KernelData,
    b: Complex64,
    x: Complex64,
) -> Result<f64> {
    let alpha = kd.alpha;
    let rin = gf.domain.inradius();
    if b.norm() > 0.1 * rin.powi(alpha as i32) {
        return Err(Error::invalid(format!(
            "|b| = {:.3e} too large for the root expansion (limit {:.3e})",
            b.norm(),
            0.1 * rin.powi(alpha as i32)
        )));
    }
    let roots = roots_of_b(b, alpha);
    let zero = Complex64::new(0.0, 0.0);
    let direct =
        gf.sum_regular_over_roots(x, &roots)? - gf.sum_regular_over_roots(zero, &roots)?;
    Ok((direct - kd.root_sum_model(b, x)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{holomorphic_derivatives, DomainModel};
    use approx::assert_relative_eq;

    #[test]
    fn square_roots_of_unity() {
        // Ordered by increasing principal argument: +1 (arg 0) before -1 (arg π).
        let r = roots_of_b(Complex64::new(1.0, 0.0), 2);
        assert_relative_eq!(r[0].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(r[1].re, -1.0, epsilon = 1e-15);
        for root in &r {
            assert!((root.powu(2) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_gives_multiple_root() {
        let r = roots_of_b(Complex64::new(0.0, 0.0), 3);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn roots_of_i() {
        let r = roots_of_b(Complex64::new(0.0, 1.0), 2);
        // {e^{iπ/4}, e^{i5π/4}} sorted by principal argument.
        assert_relative_eq!(r[1].arg(), std::f64::consts::FRAC_PI_4, epsilon = 1e-14);
        assert_relative_eq!(
            r[0].arg(),
            std::f64::consts::FRAC_PI_4 - std::f64::consts::PI,
            epsilon = 1e-14
        );
        for root in &r {
            assert!((root.powu(2) - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn expansion_residual_orders() {
        // On the unit disk the root sum is (1/2π) log|1 - b̄ x^α| exactly, so
        // the residual orders can be checked tightly.
        let gf = GreensFunction::new(DomainModel::unit_disk()).unwrap();
        let alpha = 2;
        let kd = holomorphic_derivatives(&gf, 3, alpha).unwrap();

        // x = 0: both sides zero.
        let r0 = sum_over_roots_expansion_check(
            &gf,
            &kd,
            Complex64::new(1e-3, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        assert!(r0 < 1e-14);

        // |b|-ladder at fixed x: O(|b|²).
        let x = Complex64::new(0.2, 0.0);
        let bs = [2e-2, 1e-2, 5e-3];
        let res: Vec<f64> = bs
            .iter()
            .map(|&bb| {
                sum_over_roots_expansion_check(&gf, &kd, Complex64::new(bb, 0.0), x).unwrap()
            })
            .collect();
        let slope = crate::util::loglog_slope(&bs, &res, 1e-15).unwrap();
        assert!(slope > 1.7, "b-ladder slope {slope}");

        // b = 0 reduces to the α-term Taylor model: residual O(|x|^{α+1}).
        // On the disk H ≡ 0 so it is exactly zero.
        let r = sum_over_roots_expansion_check(
            &gf,
            &kd,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.3, 0.1),
        )
        .unwrap();
        assert!(r < 1e-13);
    }

    #[test]
    fn expansion_residual_orders_on_flower() {
        let gf = GreensFunction::new(DomainModel::flower(3, 0.1)).unwrap();
        let alpha = 2;
        let kd = holomorphic_derivatives(&gf, 3, alpha).unwrap();

        // x-ladder at b = 0: O(|x|^{α+1}) = O(|x|³).
        let xs = [0.2, 0.1, 0.05];
        let res: Vec<f64> = xs
            .iter()
            .map(|&r| {
                sum_over_roots_expansion_check(
                    &gf,
                    &kd,
                    Complex64::new(0.0, 0.0),
                    Complex64::from_polar(r, 0.4),
                )
                .unwrap()
            })
            .collect();
        let slope = crate::util::loglog_slope(&xs, &res, 1e-13).unwrap();
        assert!(slope > 2.6, "x-ladder slope {slope} (want ≈ α+1 = 3)");

        // Isolate the b-sensitivity from the O(|x|^{α+1}) floor: the change of
        // the direct sum relative to b = 0 must match the model's b-part to
        // O(|b|²).
        let x = Complex64::new(0.15, 0.1);
        let zero = Complex64::new(0.0, 0.0);
        let direct_diff = |b: Complex64| -> f64 {
            let roots = roots_of_b(b, alpha);
            let d_b = gf.sum_regular_over_roots(x, &roots).unwrap()
                - gf.sum_regular_over_roots(zero, &roots).unwrap();
            let roots0 = roots_of_b(zero, alpha);
            let d_0 = gf.sum_regular_over_roots(x, &roots0).unwrap()
                - gf.sum_regular_over_roots(zero, &roots0).unwrap();
            d_b - d_0
        };
        let bs = [4e-2, 2e-2, 1e-2];
        let res: Vec<f64> = bs
            .iter()
            .map(|&bb| {
                let b = Complex64::new(bb, bb);
                (direct_diff(b) - (kd.root_sum_model(b, x) - kd.root_sum_model(zero, x))).abs()
            })
            .collect();
        let slope = crate::util::loglog_slope(&bs, &res, 1e-13).unwrap();
        assert!(slope > 1.6, "b-ladder slope {slope} (want ≈ 2): {res:?}");
    }
}
