//! Worst-error-first adaptive panel subdivision on a rectangle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gk;
use crate::error::Error;
use crate::util::pairwise_sum;
use crate::Result;

pub struct AdaptiveOptions<'a> {
    pub tol: f64,
    pub max_panels: usize,
    /// Initial partition of the u-axis (must start/end at the bounds).
    pub u_knots: Vec<f64>,
    /// Initial partition of the v-axis.
    pub v_knots: Vec<f64>,
    /// Physical extent of a panel `(u0,u1)×(v0,v1)`, used to pick the split
    /// direction. For polar coordinates this accounts for the arc length.
    pub extent: Box<dyn Fn(f64, f64, f64, f64) -> (f64, f64) + 'a>,
}

struct Panel {
    id: u64,
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
    value: f64,
    error: f64,
}

struct QueueEntry {
    error: f64,
    id: u64,
    index: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.id == other.id
    }
}
impl Eq for QueueEntry {}
impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on error; lower id wins ties so refinement order is fixed.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Tensor GK 7–15 evaluation of `f` over one panel. Returns the Kronrod value
/// and the difference against the embedded Gauss rule as error indicator.
fn eval_panel<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
) -> (f64, f64) {
    let un = gk::nodes_on(u0, u1);
    let vn = gk::nodes_on(v0, v1);
    let mut k_sum = 0.0;
    let mut g_sum = 0.0;
    for &(u, wku, wgu) in &un {
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        for &(v, wkv, wgv) in &vn {
            let fv = f(u, v);
            row_k += wkv * fv;
            row_g += wgv * fv;
        }
        k_sum += wku * row_k;
        g_sum += wgu * row_g;
    }
    (k_sum, (k_sum - g_sum).abs())
}

/// Adaptive integration of `f(u,v)` (the Jacobian must already be folded into
/// `f`) over the rectangle spanned by the knot vectors.
pub fn adaptive_rectangle<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    opts: &AdaptiveOptions<'_>,
) -> Result<(f64, f64, usize)> {
    let mut panels: Vec<Panel> = Vec::new();
    let mut heap: BinaryHeap<QueueEntry> = BinaryHeap::new();
    let mut next_id: u64 = 0;

    macro_rules! new_panel {
        ($u0:expr, $u1:expr, $v0:expr, $v1:expr) => {{
            let (value, error) = eval_panel(&mut f, $u0, $u1, $v0, $v1);
            let id = next_id;
            next_id += 1;
            panels.push(Panel {
                id,
                u0: $u0,
                u1: $u1,
                v0: $v0,
                v1: $v1,
                value,
                error,
            });
            heap.push(QueueEntry {
                error,
                id,
                index: panels.len() - 1,
            });
            error
        }};
    }

    let mut total_error = 0.0;
    for iu in 0..opts.u_knots.len() - 1 {
        for iv in 0..opts.v_knots.len() - 1 {
            total_error += new_panel!(
                opts.u_knots[iu],
                opts.u_knots[iu + 1],
                opts.v_knots[iv],
                opts.v_knots[iv + 1]
            );
        }
    }

    let mut since_resync = 0usize;
    while total_error > opts.tol {
        if panels.len() >= opts.max_panels {
            let value = pairwise_sum(&panels.iter().map(|p| p.value).collect::<Vec<_>>());
            let err = pairwise_sum(&panels.iter().map(|p| p.error).collect::<Vec<_>>());
            return Err(Error::QuadratureNonConvergence {
                value,
                error_estimate: err,
                tol: opts.tol,
                cells: panels.len(),
            });
        }
        // Pop the worst live panel, skipping stale entries.
        let worst = loop {
            match heap.pop() {
                Some(e) if panels[e.index].id == e.id => break e.index,
                Some(_) => continue,
                None => {
                    let value =
                        pairwise_sum(&panels.iter().map(|p| p.value).collect::<Vec<_>>());
                    let err = pairwise_sum(&panels.iter().map(|p| p.error).collect::<Vec<_>>());
                    return Err(Error::QuadratureNonConvergence {
                        value,
                        error_estimate: err,
                        tol: opts.tol,
                        cells: panels.len(),
                    });
                }
            }
        };
        let Panel {
            u0,
            u1,
            v0,
            v1,
            error: old_error,
            ..
        } = panels[worst];
        let (eu, ev) = (opts.extent)(u0, u1, v0, v1);
        let (lu0, lu1, lv0, lv1, ru0, ru1, rv0, rv1);
        if eu >= ev {
            let um = 0.5 * (u0 + u1);
            (lu0, lu1, lv0, lv1) = (u0, um, v0, v1);
            (ru0, ru1, rv0, rv1) = (um, u1, v0, v1);
        } else {
            let vm = 0.5 * (v0 + v1);
            (lu0, lu1, lv0, lv1) = (u0, u1, v0, vm);
            (ru0, ru1, rv0, rv1) = (u0, u1, vm, v1);
        }
        // Left child replaces the parent slot, right child is appended.
        let (val_l, err_l) = eval_panel(&mut f, lu0, lu1, lv0, lv1);
        let id_l = next_id;
        next_id += 1;
        {
            let p = &mut panels[worst];
            *p = Panel {
                id: id_l,
                u0: lu0,
                u1: lu1,
                v0: lv0,
                v1: lv1,
                value: val_l,
                error: err_l,
            };
        }
        heap.push(QueueEntry {
            error: err_l,
            id: id_l,
            index: worst,
        });
        let err_r = new_panel!(ru0, ru1, rv0, rv1);
        total_error += err_l + err_r - old_error;

        // The incremental total drifts; resync it periodically.
        since_resync += 1;
        if since_resync >= 256 {
            since_resync = 0;
            total_error = pairwise_sum(&panels.iter().map(|p| p.error).collect::<Vec<_>>());
        }
    }

    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.error).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&errors), panels.len()))
}
