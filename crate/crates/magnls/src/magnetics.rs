//! Flux functionals, the effective repulsive potential on cycles, and
//! gauge-phase reconstruction.
//!
//! A constant magnetic potential on the edges of a cycle acts on the energy
//! only through the flux `α_γ = (1/2π) ∫_γ A`. Minimizing over admissible
//! phases leaves the scalar repulsion
//! `Φ_γ = (4π²/|γ|²) · dist(α_γ, ℤ)²`
//! supported on the cycle, and the optimal phase turns any nonnegative
//! profile into a complex state with the same energy.

use crate::graph::{Cycle, MetricGraph};
use crate::mesh::{DiscreteField, GraphMesh};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Per-cycle flux data.
#[derive(Debug, Clone)]
pub struct FluxEntry {
    pub cycle: usize,
    pub length: f64,
    pub alpha: f64,
    pub nearest_int: i64,
    pub phi: f64,
}

/// Flux report over a cycle basis.
#[derive(Debug, Clone)]
pub struct FluxReport {
    pub entries: Vec<FluxEntry>,
}

impl FluxReport {
    pub fn new(graph: &MetricGraph, basis: &crate::graph::CycleBasis) -> Self {
        let entries = basis
            .cycles
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let alpha = flux(c, graph);
                FluxEntry {
                    cycle: i,
                    length: c.length,
                    alpha,
                    nearest_int: nearest_int_half_down(alpha),
                    phi: effective_potential(c, graph),
                }
            })
            .collect();
        FluxReport { entries }
    }
}

/// Dimensionless flux `α_γ = (1/2π) Σ_e sign_e · A_e · l_e`.
pub fn flux(cycle: &Cycle, graph: &MetricGraph) -> f64 {
    let raw: f64 = cycle
        .steps
        .iter()
        .map(|&(e, s)| {
            let edge = &graph.edges()[e];
            s as f64 * edge.magnetic_potential * edge.length().expect("cycle edge is finite")
        })
        .sum();
    raw / (2.0 * PI)
}

/// Nearest integer, ties resolved toward the smaller integer.
pub fn nearest_int_half_down(alpha: f64) -> i64 {
    let f = alpha.floor();
    let frac = alpha - f;
    if frac > 0.5 {
        f as i64 + 1
    } else {
        f as i64
    }
}

/// Distance from `alpha` to the nearest integer.
pub fn dist_to_int(alpha: f64) -> f64 {
    (alpha - nearest_int_half_down(alpha) as f64).abs()
}

/// Effective repulsion `Φ_γ = (4π²/|γ|²) dist(α_γ, ℤ)²`.
pub fn effective_potential(cycle: &Cycle, graph: &MetricGraph) -> f64 {
    let d = dist_to_int(flux(cycle, graph));
    4.0 * PI * PI / (cycle.length * cycle.length) * d * d
}

/// The field `W(x) = Σ_γ Φ_γ χ_γ(x)` as one constant per edge.
#[derive(Debug, Clone)]
pub struct EffectivePotential {
    /// Value per graph edge index; zero off all basis cycles.
    pub per_edge: Vec<f64>,
}

impl EffectivePotential {
    pub fn zero(graph: &MetricGraph) -> Self {
        EffectivePotential { per_edge: vec![0.0; graph.edges().len()] }
    }

    /// Overrides the potential on one edge (used by scans that prescribe Φ).
    pub fn with_edge(mut self, edge: usize, value: f64) -> Self {
        self.per_edge[edge] = value;
        self
    }

    pub fn max(&self) -> f64 {
        self.per_edge.iter().fold(0.0, |a: f64, &b| a.max(b))
    }

    /// Lumped node weights for `∫ W v²`: each node accumulates `(h/2)·W_e`
    /// from its adjacent intervals.
    pub fn lumped_weights(&self, mesh: &GraphMesh) -> Vec<f64> {
        let mut w = vec![0.0; mesh.n_dofs];
        for em in &mesh.edges {
            let we = self.per_edge[em.edge];
            if we == 0.0 {
                continue;
            }
            for pair in em.nodes.windows(2) {
                w[pair[0]] += we * em.spacing / 2.0;
                w[pair[1]] += we * em.spacing / 2.0;
            }
        }
        w
    }
}

/// Sums `Φ_γ` over all basis cycles containing each edge.
pub fn effective_field(graph: &MetricGraph, basis: &crate::graph::CycleBasis) -> EffectivePotential {
    let mut per_edge = vec![0.0; graph.edges().len()];
    for c in &basis.cycles {
        let phi = effective_potential(c, graph);
        for &(e, _) in &c.steps {
            per_edge[e] += phi;
        }
    }
    EffectivePotential { per_edge }
}

/// The flux-minimizing phase on one cycle.
///
/// Along the cycle's arclength `s ∈ [0, |γ|]` the phase satisfies
/// `dθ/ds = A(s) − η` with `η = 2π(α_γ − m)/|γ|`, so `θ(|γ|) − θ(0) = 2πm`
/// and `(A − θ')² ≡ Φ_γ` on the cycle. Off the cycle the phase integrates
/// `A` exactly (pure gauge).
#[derive(Debug, Clone)]
pub struct OptimalPhase {
    pub alpha: f64,
    pub nearest_int: i64,
    /// Constant residual `A − θ'` magnitude on the cycle.
    pub eta: f64,
    pub phi: f64,
    cycle: Cycle,
}

pub fn optimal_phase(cycle: &Cycle, graph: &MetricGraph) -> OptimalPhase {
    let alpha = flux(cycle, graph);
    let m = nearest_int_half_down(alpha);
    let eta = 2.0 * PI * (alpha - m as f64) / cycle.length;
    OptimalPhase {
        alpha,
        nearest_int: m,
        eta,
        phi: effective_potential(cycle, graph),
        cycle: cycle.clone(),
    }
}

impl OptimalPhase {
    /// Total phase increment around the cycle, `2π m`.
    pub fn theta_jump(&self) -> f64 {
        2.0 * PI * self.nearest_int as f64
    }

    /// Samples θ at every mesh node: the cycle formula on cycle edges and the
    /// plain line integral of `A` elsewhere.
    pub fn theta_field(&self, mesh: &Arc<GraphMesh>) -> DiscreteField<f64> {
        let graph = &mesh.graph;
        let mut theta = vec![0.0; mesh.n_dofs];
        let mut assigned_edge = vec![false; mesh.edges.len()];
        let mut vertex_theta: Vec<Option<f64>> = vec![None; mesh.n_vertex_dofs];

        // walk the cycle, accumulating theta
        let start_vertex = match self.cycle.steps[0] {
            (e, 1) => graph.edges()[e].from,
            (e, _) => graph.edges()[e].to,
        };
        vertex_theta[start_vertex] = Some(0.0);
        let mut current = 0.0;
        for &(e, s) in &self.cycle.steps {
            let em_idx = mesh.edges.iter().position(|em| em.edge == e).unwrap();
            let em = &mesh.edges[em_idx];
            let a = graph.edges()[e].magnetic_potential;
            let len = em.meshed_len;
            let slope = a - s as f64 * self.eta; // dθ/dx in edge coordinates
            let entry_x = if s == 1 { 0.0 } else { len };
            let n = em.nodes.len();
            for (k, &dof) in em.nodes.iter().enumerate() {
                let x = k as f64 * em.spacing;
                let val = current + slope * (x - entry_x);
                // keep the walk single-valued at the closing vertex
                if dof < mesh.n_vertex_dofs {
                    if vertex_theta[dof].is_none() {
                        vertex_theta[dof] = Some(val);
                        theta[dof] = val;
                    }
                } else {
                    theta[dof] = val;
                }
                let _ = n;
            }
            let exit_x = if s == 1 { len } else { 0.0 };
            current += slope * (exit_x - entry_x);
            assigned_edge[em_idx] = true;
        }

        // propagate θ' = A over the remaining edgesticking from known vertices
        let mut changed = true;
        while changed {
            changed = false;
            for (em_idx, em) in mesh.edges.iter().enumerate() {
                if assigned_edge[em_idx] {
                    continue;
                }
                let e = &graph.edges()[em.edge];
                let a = e.magnetic_potential;
                let len = em.meshed_len;
                let from_known = vertex_theta[e.from];
                let to_known = if e.is_halfline() { None } else { vertex_theta[e.to] };
                let (anchor_x, anchor_val) = match (from_known, to_known) {
                    (Some(t), _) => (0.0, t),
                    (None, Some(t)) => (len, t),
                    (None, None) => continue,
                };
                for (k, &dof) in em.nodes.iter().enumerate() {
                    let x = k as f64 * em.spacing;
                    let val = anchor_val + a * (x - anchor_x);
                    if dof < mesh.n_vertex_dofs {
                        if vertex_theta[dof].is_none() {
                            vertex_theta[dof] = Some(val);
                            theta[dof] = val;
                        }
                    } else {
                        theta[dof] = val;
                    }
                }
                assigned_edge[em_idx] = true;
                changed = true;
            }
        }

        DiscreteField { mesh: mesh.clone(), values: theta }
    }
}

/// Lifts a nonnegative profile to a complex state `u = v e^{iθ}`.
pub fn gauge_lift(v: &DiscreteField<f64>, theta: &DiscreteField<f64>) -> DiscreteField<Complex64> {
    assert_eq!(v.values.len(), theta.values.len(), "fields must share a mesh");
    DiscreteField {
        mesh: v.mesh.clone(),
        values: v
            .values
            .iter()
            .zip(&theta.values)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MetricGraph;
    use crate::mesh::build_mesh;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_loop(len: f64, a: f64) -> (MetricGraph, Cycle) {
        let g = MetricGraph::parse(&format!("vertex v\nedge l v v length={len} A={a}\n")).unwrap();
        let c = g.cycle_basis().cycles[0].clone();
        (g, c)
    }

    #[test]
    fn flux_examples() {
        let (g, c) = single_loop(2.0 * PI, 0.5);
        assert!((flux(&c, &g) - 0.5).abs() < 1e-12);
        let (g, c) = single_loop(2.0 * PI, 0.0);
        assert_eq!(flux(&c, &g), 0.0);
        let (g, c) = single_loop(1.0, 4.0 * PI);
        assert!((flux(&c, &g) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn effective_potential_examples() {
        let (g, c) = single_loop(2.0 * PI, 0.5);
        assert!((effective_potential(&c, &g) - 0.25).abs() < 1e-12);
        // integer flux: no magnetic influence
        let (g, c) = single_loop(1.0, 4.0 * PI);
        assert!(effective_potential(&c, &g).abs() < 1e-12);
        // |γ|=1, α=1/2 → π²
        let (g, c) = single_loop(1.0, PI);
        assert!((effective_potential(&c, &g) - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn periodicity_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let len = rng.gen_range(0.3..5.0);
            let a = rng.gen_range(-3.0..3.0);
            let k = rng.gen_range(-3i32..=3) as f64;
            let (g1, c1) = single_loop(len, a);
            let (g2, c2) = single_loop(len, a + 2.0 * PI * k / len);
            let p1 = effective_potential(&c1, &g1);
            let p2 = effective_potential(&c2, &g2);
            assert!((p1 - p2).abs() < 1e-10, "len={len} a={a} k={k}: {p1} vs {p2}");
        }
    }

    #[test]
    fn bounds_on_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let len = rng.gen_range(0.3..5.0);
            let a: f64 = rng.gen_range(-2.0..2.0);
            let (g, c) = single_loop(len, a);
            let phi = effective_potential(&c, &g);
            assert!(phi >= 0.0);
            assert!(phi <= PI * PI / (len * len) + 1e-12);
            // single constant A on the cycle
            assert!(phi <= a * a + 1e-12);
        }
    }

    #[test]
    fn effective_field_examples() {
        let g = MetricGraph::tadpole(PI, 0.0);
        let w = effective_field(&g, &g.cycle_basis());
        assert!(w.per_edge.iter().all(|&x| x == 0.0));

        let g = MetricGraph::tadpole(PI, 0.5);
        let w = effective_field(&g, &g.cycle_basis());
        assert!((w.per_edge[0] - 0.25).abs() < 1e-12);
        assert_eq!(w.per_edge[1], 0.0);

        // figure-eight with α=1/2 on each loop of length 2π
        let g = MetricGraph::figure_eight(2.0 * PI, 2.0 * PI, 0.5, 0.5);
        let w = effective_field(&g, &g.cycle_basis());
        assert!((w.per_edge[0] - 0.25).abs() < 1e-12);
        assert!((w.per_edge[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn optimal_phase_integer_flux_is_pure_gauge() {
        let (g, c) = single_loop(1.0, 4.0 * PI); // α = 2
        let ph = optimal_phase(&c, &g);
        assert_eq!(ph.nearest_int, 2);
        // A − θ' = η = 0
        assert!(ph.eta.abs() < 1e-12);
        assert!((ph.theta_jump() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn optimal_phase_half_flux() {
        let (g, c) = single_loop(2.0 * PI, 0.5); // α = 1/2, tie → m = 0
        let ph = optimal_phase(&c, &g);
        assert_eq!(ph.nearest_int, 0);
        // θ' = A − η ≡ 0, so A − θ' = 0.5 and (A−θ')² = Φ = 0.25
        assert!((ph.eta - 0.5).abs() < 1e-12);
        assert!((ph.eta * ph.eta - ph.phi).abs() < 1e-12);
        assert_eq!(ph.theta_jump(), 0.0);
    }

    #[test]
    fn theta_field_closes_with_2pi_m_jump() {
        // loop split in two edges with distinct A: θ varies along the cycle
        let text = "\
vertex a
vertex b
edge e1 a b length=1.3 A=2.1
edge e2 b a length=0.9 A=-0.4
halfline t a A=0.7
";
        let g = MetricGraph::parse(text).unwrap();
        let basis = g.cycle_basis();
        let c = &basis.cycles[0];
        let ph = optimal_phase(c, &g);
        let mesh = build_mesh(&g, 0.05, 2.0).unwrap();
        let theta = ph.theta_field(&mesh);
        // per-edge slope check: A_e − σ η on cycle edges, A_e on the tail
        for em in &mesh.edges {
            let e = &g.edges()[em.edge];
            let sign = c.steps.iter().find(|&&(ei, _)| ei == em.edge).map(|&(_, s)| s);
            let expected = match sign {
                Some(s) => e.magnetic_potential - s as f64 * ph.eta,
                None => e.magnetic_potential,
            };
            for w in em.nodes.windows(2) {
                let d = (theta.values[w[1]] - theta.values[w[0]]) / em.spacing;
                // skip the interval that carries the 2πm closure jump
                if (d - expected).abs() > 1e-9 {
                    let jump = d - expected;
                    assert!(
                        ((jump * em.spacing).abs() - ph.theta_jump().abs()).abs() < 1e-9,
                        "unexpected slope {d} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn gauge_lift_zero_phase_is_identity() {
        let g = MetricGraph::tadpole(1.0, 0.0);
        let mesh = build_mesh(&g, 0.1, 3.0).unwrap();
        let v = crate::mesh::interpolate(&mesh, |_, x| (1.0 + x).recip());
        let theta = DiscreteField::zeros(&mesh);
        let u = gauge_lift(&v, &theta);
        for (a, b) in v.values.iter().zip(&u.values) {
            assert_eq!(*a, b.re);
            assert_eq!(b.im, 0.0);
        }
    }
}
