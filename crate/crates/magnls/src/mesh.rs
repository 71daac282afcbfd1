//! Meshing of metric graphs and nodal fields on them.
//!
//! Piecewise-linear (P1) elements with mass-lumped trapezoid quadrature.
//! All edge endpoints meeting at a vertex share a single degree of freedom,
//! which enforces continuity exactly; half-lines are truncated to `[0, R]`
//! with a Dirichlet node pinned to zero at the far end.

use crate::graph::{EdgeKind, MetricGraph};
use num_complex::Complex64;
use std::io::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("spacing h={h} must be below the shortest finite edge length {min_len}")]
    SpacingTooCoarse { h: f64, min_len: f64 },
    #[error("truncation length R={r} too short for spacing h={h} (need R >= 3h)")]
    TruncationTooShort { r: f64, h: f64 },
    #[error("nonpositive mesh parameter")]
    NonpositiveParameter,
}

/// Nodes of one meshed edge. `nodes[0]` is the `from`-vertex DOF; the last
/// entry is the `to`-vertex DOF for finite edges or the Dirichlet terminal
/// DOF for truncated half-lines.
#[derive(Debug, Clone)]
pub struct EdgeMesh {
    pub edge: usize,
    /// Uniform spacing on this edge (nodes land exactly on vertices).
    pub spacing: f64,
    /// Meshed length: the edge length, or R for a half-line.
    pub meshed_len: f64,
    pub nodes: Vec<usize>,
}

/// A mesh over a metric graph with a global degree-of-freedom table.
#[derive(Debug)]
pub struct GraphMesh {
    pub graph: MetricGraph,
    pub edges: Vec<EdgeMesh>,
    pub n_dofs: usize,
    /// DOF index of each graph vertex (vertex v owns DOF v).
    pub n_vertex_dofs: usize,
    /// DOFs pinned to zero (half-line terminals).
    pub dirichlet: Vec<usize>,
    /// Lumped (trapezoid) mass weights per DOF.
    pub lumped_mass: Vec<f64>,
    /// Half-line truncation length used for this mesh.
    pub truncation: f64,
}

impl GraphMesh {
    pub fn is_dirichlet(&self, dof: usize) -> bool {
        self.dirichlet.contains(&dof)
    }

    /// Iterates all mesh intervals as `(edge index, dof_a, dof_b, h)`.
    pub fn intervals(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.edges.iter().flat_map(|em| {
            em.nodes
                .windows(2)
                .map(move |w| (em.edge, w[0], w[1], em.spacing))
        })
    }

    /// Arclength coordinate of node `k` on edge mesh `em`.
    pub fn node_x(&self, em: &EdgeMesh, k: usize) -> f64 {
        k as f64 * em.spacing
    }
}

/// Builds a mesh with spacing at most `h` per edge and half-lines truncated
/// at length `r`.
pub fn build_mesh(graph: &MetricGraph, h: f64, r: f64) -> Result<Arc<GraphMesh>, MeshError> {
    if !(h > 0.0) || !(r > 0.0) {
        return Err(MeshError::NonpositiveParameter);
    }
    if let Some(min_len) = graph.min_finite_length() {
        if h >= min_len {
            return Err(MeshError::SpacingTooCoarse { h, min_len });
        }
    }
    if graph.n_halflines() > 0 && r < 3.0 * h {
        return Err(MeshError::TruncationTooShort { r, h });
    }

    let mut edges = Vec::with_capacity(graph.edges().len());
    let mut next_dof = graph.n_vertices();
    let mut dirichlet = Vec::new();

    for (ei, e) in graph.edges().iter().enumerate() {
        let (len, is_half) = match e.kind {
            EdgeKind::Finite { length } => (length, false),
            EdgeKind::HalfLine => (r, true),
        };
        let n_iv = ((len / h).ceil() as usize).max(2);
        let spacing = len / n_iv as f64;
        let mut nodes = Vec::with_capacity(n_iv + 1);
        nodes.push(e.from);
        for _ in 1..n_iv {
            nodes.push(next_dof);
            next_dof += 1;
        }
        if is_half {
            nodes.push(next_dof);
            dirichlet.push(next_dof);
            next_dof += 1;
        } else {
            nodes.push(e.to);
        }
        edges.push(EdgeMesh { edge: ei, spacing, meshed_len: len, nodes });
    }

    let mut lumped_mass = vec![0.0; next_dof];
    for em in &edges {
        for w in em.nodes.windows(2) {
            lumped_mass[w[0]] += em.spacing / 2.0;
            lumped_mass[w[1]] += em.spacing / 2.0;
        }
    }

    Ok(Arc::new(GraphMesh {
        graph: graph.clone(),
        edges,
        n_dofs: next_dof,
        n_vertex_dofs: graph.n_vertices(),
        dirichlet,
        lumped_mass,
        truncation: r,
    }))
}

/// Nodal values on a graph mesh, real or complex.
#[derive(Debug, Clone)]
pub struct DiscreteField<T = f64> {
    pub mesh: Arc<GraphMesh>,
    pub values: Vec<T>,
}

impl<T: Copy + Default> DiscreteField<T> {
    pub fn zeros(mesh: &Arc<GraphMesh>) -> Self {
        DiscreteField { mesh: mesh.clone(), values: vec![T::default(); mesh.n_dofs] }
    }
}

impl DiscreteField<f64> {
    /// Mass `‖v‖₂²` by the trapezoid rule.
    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mesh.lumped_mass)
            .map(|(v, m)| m * v * v)
            .sum()
    }

    /// `‖v‖_p^p` by the trapezoid rule.
    pub fn lp_pow_p(&self, p: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.mesh.lumped_mass)
            .map(|(v, m)| m * v.abs().powf(p))
            .sum()
    }

    /// Max nodal absolute value.
    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// `‖v'‖₂²` from one-sided difference quotients per interval.
    pub fn grad_sq(&self) -> f64 {
        self.mesh
            .intervals()
            .map(|(_, a, b, h)| {
                let d = (self.values[b] - self.values[a]) / h;
                d * d * h
            })
            .sum()
    }

    /// Rescales to mass `mu` (no-op direction preserved).
    pub fn renormalize(&mut self, mu: f64) {
        let m = self.mass();
        if m > 0.0 {
            let s = (mu / m).sqrt();
            for v in self.values.iter_mut() {
                *v *= s;
            }
        }
    }

    /// Mass carried by the edges of one cycle.
    pub fn cycle_mass(&self, cycle: &crate::graph::Cycle) -> f64 {
        let mut total = 0.0;
        for em in &self.mesh.edges {
            if cycle.contains_edge(em.edge) {
                for w in em.nodes.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    total += em.spacing * (self.values[a].powi(2) + self.values[b].powi(2)) / 2.0;
                }
            }
        }
        total
    }

    /// Writes the profile as CSV rows `edge_id,arclength,value`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "edge_id,arclength,value")?;
        for em in &self.mesh.edges {
            let id = &self.mesh.graph.edges()[em.edge].id;
            for (k, &dof) in em.nodes.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{}",
                    id,
                    fmt_sig(self.mesh.node_x(em, k)),
                    fmt_sig(self.values[dof])
                )?;
            }
        }
        Ok(())
    }
}

impl DiscreteField<Complex64> {
    pub fn mass(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.mesh.lumped_mass)
            .map(|(v, m)| m * v.norm_sqr())
            .sum()
    }

    pub fn lp_pow_p(&self, p: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.mesh.lumped_mass)
            .map(|(v, m)| m * v.norm().powf(p))
            .sum()
    }

    /// Nodal modulus field `|u|`.
    pub fn modulus(&self) -> DiscreteField<f64> {
        DiscreteField {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|v| v.norm()).collect(),
        }
    }

    /// Writes the profile as CSV rows `edge_id,arclength,re,im`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "edge_id,arclength,re,im")?;
        for em in &self.mesh.edges {
            let id = &self.mesh.graph.edges()[em.edge].id;
            for (k, &dof) in em.nodes.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{}",
                    id,
                    fmt_sig(self.mesh.node_x(em, k)),
                    fmt_sig(self.values[dof].re),
                    fmt_sig(self.values[dof].im)
                )?;
            }
        }
        Ok(())
    }
}

/// Samples a per-edge profile `f(edge index, arclength) -> value` at the mesh
/// nodes. Continuity at vertices holds automatically when `f` is continuous.
pub fn interpolate<F>(mesh: &Arc<GraphMesh>, f: F) -> DiscreteField<f64>
where
    F: Fn(usize, f64) -> f64,
{
    let mut field = DiscreteField::zeros(mesh);
    for em in &mesh.edges {
        for (k, &dof) in em.nodes.iter().enumerate() {
            field.values[dof] = f(em.edge, mesh.node_x(em, k));
        }
    }
    field
}

/// Fixed 12-significant-digit float formatting for deterministic CSV output.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}
