//! One-dimensional radial quadrature: `2π ∫₀^∞ ρ^{1+s} g(ρ) dρ`.
//!
//! This is the independent oracle used to cross-check [`super::integrate_plane`]
//! on radial integrands, so it deliberately shares no panel machinery with the
//! 2-D path beyond the raw Gauss–Kronrod rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use super::gk;
use crate::error::Error;
use crate::util::pairwise_sum;
use crate::Result;

/// Truncation radius and analytic tail for `∫_R^∞ ρ^{1+s} g dρ`, fitted from
/// the measured decay of `g`. Fails if the measured decay is not integrable.
fn pick_tail(g: &impl Fn(f64) -> f64, s: f64, tol: f64) -> Result<(f64, f64)> {
    let mut radius = 8.0f64;
    loop {
        let g1 = g(radius);
        let g2 = g(1.5 * radius);
        if g1.abs() < 1e-280 && g2.abs() < 1e-280 {
            return Ok((radius, 0.0));
        }
        if g2.abs() > 0.0 && g1.abs() > 0.0 {
            let p_eff = (g1.abs() / g2.abs()).ln() / 1.5f64.ln();
            if p_eff > s + 2.05 {
                // tail ≈ g(R) R^{2+s} / (p - s - 2) assuming g ~ ρ^{-p}.
                let tail = g1 * radius.powf(2.0 + s) / (p_eff - s - 2.0);
                if TAU * tail.abs() <= tol / 10.0 {
                    return Ok((radius, TAU * tail));
                }
            } else if radius > 1e7 {
                return Err(Error::DivergentTail {
                    measured_power: p_eff,
                });
            }
        }
        radius *= 2.0;
        if radius > 1e12 {
            return Err(Error::DivergentTail { measured_power: 0.0 });
        }
    }
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    id: u64,
}

struct Entry {
    error: f64,
    id: u64,
    index: usize,
}
impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error && self.id == o.id
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then_with(|| o.id.cmp(&self.id))
    }
}

/// `2π ∫₀^∞ ρ^{1+s} g(ρ) dρ` to absolute tolerance `tol`.
pub fn integrate_radial(g: impl Fn(f64) -> f64, s: f64, tol: f64) -> Result<f64> {
    if !(s > -2.0) {
        return Err(Error::invalid(format!(
            "moment exponent must satisfy s > -2, got {s}"
        )));
    }
    let (radius, tail) = pick_tail(&g, s, tol)?;
    let mut h = |rho: f64| if rho == 0.0 { 0.0 } else { rho.powf(1.0 + s) * g(rho) };

    // Geometric initial grading toward 0 handles fractional moments.
    let mut knots = vec![0.0];
    let mut r = radius * 0.5f64.powi(24);
    while r < radius * 0.999 {
        knots.push(r);
        r *= 2.0;
    }
    knots.push(radius);

    let mut ivals: Vec<Interval> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut next_id = 0u64;
    for w in knots.windows(2) {
        let (value, error) = gk::gk15(&mut h, w[0], w[1]);
        ivals.push(Interval {
            a: w[0],
            b: w[1],
            value,
            error,
            id: next_id,
        });
        heap.push(Entry {
            error,
            id: next_id,
            index: ivals.len() - 1,
        });
        next_id += 1;
    }

    let inner_tol = (tol / TAU) * 0.5;
    loop {
        let total: f64 = pairwise_sum(&ivals.iter().map(|i| i.error).collect::<Vec<_>>());
        if total <= inner_tol {
            break;
        }
        if ivals.len() > 200_000 {
            return Err(Error::QuadratureNonConvergence {
                value: TAU * pairwise_sum(&ivals.iter().map(|i| i.value).collect::<Vec<_>>()),
                error_estimate: TAU * total,
                tol,
                cells: ivals.len(),
            });
        }
        let worst = loop {
            match heap.pop() {
                Some(e) if ivals[e.index].id == e.id => break e.index,
                Some(_) => continue,
                None => unreachable!("heap drained while error above tolerance"),
            }
        };
        let (a, b) = (ivals[worst].a, ivals[worst].b);
        let m = 0.5 * (a + b);
        let (vl, el) = gk::gk15(&mut h, a, m);
        let (vr, er) = gk::gk15(&mut h, m, b);
        ivals[worst] = Interval {
            a,
            b: m,
            value: vl,
            error: el,
            id: next_id,
        };
        heap.push(Entry {
            error: el,
            id: next_id,
            index: worst,
        });
        next_id += 1;
        ivals.push(Interval {
            a: m,
            b,
            value: vr,
            error: er,
            id: next_id,
        });
        heap.push(Entry {
            error: er,
            id: next_id,
            index: ivals.len() - 1,
        });
        next_id += 1;
    }

    let vals: Vec<f64> = ivals.iter().map(|i| i.value).collect();
    Ok(TAU * pairwise_sum(&vals) + tail)
}
