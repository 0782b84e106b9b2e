//! Deterministic direct factorization for the ring-structured systems.
//!
//! Interior dofs group into blocks: block 0 is the center node plus ring 1,
//! block i ≥ 1 is ring i+1. P1 elements on the polar mesh couple only
//! adjacent rings, so the matrix is block tridiagonal and a block LU sweep
//! factors it without any ordering heuristics.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::Result;

pub struct BlockTriFactor {
    n_theta: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    lus: Vec<nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
    lowers: Vec<DMatrix<f64>>,
    uppers: Vec<DMatrix<f64>>,
    pub smallest_pivot: f64,
}

#[inline]
fn dof_block(d: usize, n_theta: usize) -> (usize, usize) {
    if d == 0 {
        (0, 0)
    } else {
        let ring = (d - 1) / n_theta + 1;
        let off = (d - 1) % n_theta;
        if ring == 1 {
            (0, off + 1)
        } else {
            (ring - 1, off)
        }
    }
}

impl BlockTriFactor {
    /// Factor the interior operator given by (possibly duplicated) triplets
    /// over interior dofs `0..n_interior`.
    pub fn new(n_interior: usize, n_theta: usize, triplets: &[(u32, u32, f64)]) -> Result<Self> {
        assert_eq!((n_interior - 1) % n_theta, 0);
        let n_rings_int = (n_interior - 1) / n_theta;
        let nb = n_rings_int.max(1);
        let mut sizes = vec![n_theta; nb];
        sizes[0] = n_theta + 1;
        let mut offsets = vec![0usize; nb + 1];
        for i in 0..nb {
            offsets[i + 1] = offsets[i] + sizes[i];
        }

        let mut diag: Vec<DMatrix<f64>> =
            sizes.iter().map(|&s| DMatrix::zeros(s, s)).collect();
        let mut lowers: Vec<DMatrix<f64>> = (1..nb)
            .map(|i| DMatrix::zeros(sizes[i], sizes[i - 1]))
            .collect();
        let mut uppers: Vec<DMatrix<f64>> = (1..nb)
            .map(|i| DMatrix::zeros(sizes[i - 1], sizes[i]))
            .collect();

        for &(i, j, v) in triplets {
            let (bi, oi) = dof_block(i as usize, n_theta);
            let (bj, oj) = dof_block(j as usize, n_theta);
            if bi == bj {
                diag[bi][(oi, oj)] += v;
            } else if bi == bj + 1 {
                lowers[bj][(oi, oj)] += v;
            } else if bj == bi + 1 {
                uppers[bi][(oi, oj)] += v;
            } else {
                return Err(Error::LinearSolve(format!(
                    "entry ({i},{j}) couples non-adjacent rings {bi},{bj}"
                )));
            }
        }

        let mut lus = Vec::with_capacity(nb);
        let mut smallest_pivot = f64::INFINITY;
        let mut dtilde = diag[0].clone();
        for i in 0..nb {
            if i > 0 {
                let w = lus
                    .last()
                    .map(|lu: &nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>| {
                        lu.solve(&uppers[i - 1])
                    })
                    .unwrap()
                    .ok_or_else(|| Error::NearResonance { smallest: 0.0 })?;
                dtilde = &diag[i] - &lowers[i - 1] * w;
            }
            let lu = dtilde.clone().lu();
            let piv = (0..sizes[i])
                .map(|k| lu.u()[(k, k)].abs())
                .fold(f64::INFINITY, f64::min);
            smallest_pivot = smallest_pivot.min(piv);
            if piv == 0.0 {
                return Err(Error::NearResonance { smallest: 0.0 });
            }
            lus.push(lu);
        }

        Ok(BlockTriFactor {
            n_theta,
            sizes,
            offsets,
            lus,
            lowers,
            uppers,
            smallest_pivot,
        })
    }

    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Back-substitution; `b` is indexed by interior dof.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let nb = self.sizes.len();
        let n_theta = self.n_theta;
        // Gather dof vector into block layout.
        let mut g: Vec<DVector<f64>> =
            self.sizes.iter().map(|&s| DVector::zeros(s)).collect();
        for (d, &val) in b.iter().enumerate() {
            let (bi, oi) = dof_block(d, n_theta);
            g[bi][oi] = val;
        }
        // Forward sweep.
        for i in 1..nb {
            let prev = self.lus[i - 1].solve(&g[i - 1]).expect("factored block");
            let corr = &self.lowers[i - 1] * prev;
            g[i] -= corr;
        }
        // Backward sweep.
        let mut x: Vec<DVector<f64>> = vec![DVector::zeros(0); nb];
        x[nb - 1] = self.lus[nb - 1].solve(&g[nb - 1]).expect("factored block");
        for i in (0..nb - 1).rev() {
            let rhs = &g[i] - &self.uppers[i] * &x[i + 1];
            x[i] = self.lus[i].solve(&rhs).expect("factored block");
        }
        // Scatter back to dof order.
        let mut out = vec![0.0; b.len()];
        for (d, o) in out.iter_mut().enumerate() {
            let (bi, oi) = dof_block(d, n_theta);
            *o = x[bi][oi];
        }
        out
    }
}
