use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::su2::{EulerAngles, HalfInt};

/// Oversampling used when no other value is requested.
pub const DEFAULT_OVERSAMPLE: f64 = 1.5;

/// Product quadrature on SU(2) for integrands independent of `α`.
///
/// Gauss–Legendre in `cos β`, uniform nodes in `γ`, and the `α` integral taken
/// analytically as the factor `2π`. Nodes are ordered with `β` slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    j: HalfInt,
    oversample: f64,
    beta_nodes: Vec<f64>,
    beta_weights: Vec<f64>,
    gamma_nodes: Vec<f64>,
    alpha_factor: f64,
    exactness_degree: usize,
}

/// One quadrature node with its full group-volume weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridNode {
    pub omega: EulerAngles,
    pub weight: f64,
}

/// Grid for spin `j` with `ceil(os (2j+1))` β nodes and `ceil(os (4j+1))` γ nodes.
pub fn make_grid(j: HalfInt, oversample: f64) -> Result<QuadratureGrid> {
    if j.twice() < 0 {
        return domain(format!("negative spin {j}"));
    }
    if !(oversample.is_finite() && oversample > 0.0) {
        return domain(format!("oversample must be positive, got {oversample}"));
    }
    let n_beta = node_count(oversample, j.twice() + 1);
    let n_gamma = node_count(oversample, 2 * j.twice() + 1);
    let rule = GaussLegendre::new(NonZeroUsize::new(n_beta).expect("at least one node"));
    let (mut beta_nodes, mut beta_weights) = (Vec::with_capacity(n_beta), Vec::with_capacity(n_beta));
    for &(x, w) in rule.as_node_weight_pairs() {
        beta_nodes.push(x.clamp(-1.0, 1.0).acos());
        beta_weights.push(w);
    }
    let gamma_nodes = (0..n_gamma).map(|k| TAU * k as f64 / n_gamma as f64).collect();
    // Products D^L* D^L' with L, L' <= Λ are degree 2Λ in cos β and carry
    // frequencies |M - M'| <= 2Λ in γ.
    let exactness_degree = (n_beta - 1).min((n_gamma - 1) / 2);
    Ok(QuadratureGrid {
        j,
        oversample,
        beta_nodes,
        beta_weights,
        gamma_nodes,
        alpha_factor: TAU,
        exactness_degree,
    })
}

fn node_count(oversample: f64, base: i32) -> usize {
    ((oversample * f64::from(base)) - 1e-9).ceil().max(1.0) as usize
}

impl QuadratureGrid {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn oversample(&self) -> f64 {
        self.oversample
    }

    pub fn beta_nodes(&self) -> &[f64] {
        &self.beta_nodes
    }

    /// Gauss–Legendre weights in `cos β`; they sum to 2.
    pub fn beta_weights(&self) -> &[f64] {
        &self.beta_weights
    }

    pub fn gamma_nodes(&self) -> &[f64] {
        &self.gamma_nodes
    }

    pub fn alpha_factor(&self) -> f64 {
        self.alpha_factor
    }

    /// Largest `L` for which `∫ D^L* D^L'` is exact for all `L, L' <= L`.
    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn len(&self) -> usize {
        self.beta_nodes.len() * self.gamma_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, idx: usize) -> GridNode {
        let ng = self.gamma_nodes.len();
        let (ib, ig) = (idx / ng, idx % ng);
        GridNode {
            omega: EulerAngles::new(0.0, self.beta_nodes[ib], self.gamma_nodes[ig]),
            weight: self.beta_weights[ib] * (TAU / ng as f64) * self.alpha_factor,
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = GridNode> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    pub fn frames(&self) -> Vec<EulerAngles> {
        self.nodes().map(|n| n.omega).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.nodes().map(|n| n.weight).collect()
    }

    /// Total weight; `8π²` up to rounding.
    pub fn volume(&self) -> f64 {
        self.nodes().map(|n| n.weight).sum()
    }

    /// Whether `frames` are this grid's nodes in order, up to `1e-12` in β and γ.
    pub fn matches_frames(&self, frames: &[EulerAngles]) -> bool {
        frames.len() == self.len()
            && self.nodes().zip(frames).all(|(n, f)| {
                (n.omega.beta - f.beta).abs() < 1e-12 && angle_diff(n.omega.gamma, f.gamma) < 1e-12
            })
    }
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `8π²`.
pub const GROUP_VOLUME: f64 = 8.0 * PI * PI;
