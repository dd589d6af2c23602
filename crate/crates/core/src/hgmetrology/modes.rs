use std::f64::consts::{PI, SQRT_2};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Highest mode index the recurrence is trusted for.
pub const MAX_MODE_INDEX: usize = 60;

/// `(2π)^{-1/4} exp(-(x-φ)²/4)`: unit-variance intensity centred on `φ`.
pub fn photon_wavefunction(x: f64, phi: f64) -> f64 {
    let d = x - phi;
    (2.0 * PI).powf(-0.25) * (-d * d / 4.0).exp()
}

/// Hermite-Gauss modes `h_0(x) .. h_{n-1}(x)` of width `sigma_h`.
///
/// Uses the three-term recurrence for normalized Hermite functions in
/// `u = x / (√2 σ_h)`, which never forms `H_q` or `2^q q!` explicitly.
pub fn hg_modes(n: usize, x: f64, sigma_h: f64) -> Result<Vec<f64>> {
    if n > MAX_MODE_INDEX + 1 {
        return Err(Error::ModeIndexTooLarge { q: n - 1, max: MAX_MODE_INDEX });
    }
    let mut out = Vec::with_capacity(n);
    fill_hg_modes(&mut out, n, x, sigma_h);
    Ok(out)
}

pub(crate) fn fill_hg_modes(out: &mut Vec<f64>, n: usize, x: f64, sigma_h: f64) {
    out.clear();
    if n == 0 {
        return;
    }
    let scale = SQRT_2 * sigma_h;
    let u = x / scale;
    let norm = 1.0 / scale.sqrt();
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-u * u / 2.0).exp();
    out.push(cur * norm);
    for q in 0..n - 1 {
        let qf = q as f64;
        let next = (2.0 / (qf + 1.0)).sqrt() * u * cur - (qf / (qf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur * norm);
    }
}

/// Single mode `h_q(x)`.
pub fn hg_mode(q: usize, x: f64, sigma_h: f64) -> Result<f64> {
    Ok(hg_modes(q + 1, x, sigma_h)?[q])
}

/// Gauss-Legendre rule mapped onto `[-half_width, half_width]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    half_width: f64,
}

impl Quadrature {
    pub fn new(n_nodes: usize, half_width: f64) -> Result<Self> {
        let n = NonZeroUsize::new(n_nodes)
            .ok_or_else(|| Error::InvalidParameter("quadrature needs at least one node".into()))?;
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!("quadrature half-width {half_width}")));
        }
        let rule = GaussLegendre::new(n);
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (x * half_width, w * half_width))
            .unzip();
        Ok(Self { nodes, weights, half_width })
    }

    /// Same range, twice the nodes.
    pub fn doubled(&self) -> Self {
        Self::new(2 * self.nodes.len(), self.half_width).expect("valid parameters")
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        crate::qmath::neumaier_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }
}

/// `∫ h_p h_q dx` for `p, q < n`.
pub fn mode_gram_matrix(n: usize, sigma_h: f64, quad: &Quadrature) -> Result<nalgebra::DMatrix<f64>> {
    let mut g = nalgebra::DMatrix::zeros(n, n);
    for (&x, &w) in quad.nodes().iter().zip(quad.weights()) {
        let h = hg_modes(n, x, sigma_h)?;
        for p in 0..n {
            for q in 0..=p {
                g[(p, q)] += w * h[p] * h[q];
            }
        }
    }
    for p in 0..n {
        for q in 0..p {
            g[(q, p)] = g[(p, q)];
        }
    }
    Ok(g)
}
