//! Energies, gradients, Euler–Lagrange residuals, and inequality diagnostics.
//!
//! The reduced functional is `I(v) = ½∫|v'|² + ½∫W v² − (1/p)∫|v|^p` and the
//! magnetic functional is `E_A(u) = ½∫|Du|² − (1/p)∫|u|^p` with
//! `D = d/dx − iA`. The covariant derivative is discretized per interval as
//! the one-sided difference minus `i A_e` times the interval-averaged value,
//! which keeps both forms second-order consistent.

use crate::magnetics::EffectivePotential;
use crate::mesh::DiscreteField;
use num_complex::Complex64;

/// Term-by-term energy account.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `½∫|v'|²` (covariant for the magnetic form).
    pub kinetic: f64,
    /// `½∫W v²`; zero for the magnetic form, where the potential is part of
    /// the covariant kinetic term.
    pub magnetic: f64,
    /// `−(1/p)∫|v|^p`.
    pub nonlinear: f64,
    pub total: f64,
    pub mass: f64,
}

#[inline]
fn abs_pow(v: f64, p: f64) -> f64 {
    if p == 4.0 {
        let s = v * v;
        s * s
    } else {
        v.abs().powf(p)
    }
}

#[inline]
pub(crate) fn nonlin_term(v: f64, p: f64) -> f64 {
    if p == 4.0 {
        v * v * v
    } else {
        v.abs().powf(p - 2.0) * v
    }
}

/// Trapezoid-rule evaluation of the reduced energy.
pub fn energy_reduced(v: &DiscreteField<f64>, w: &EffectivePotential, p: f64) -> EnergyBreakdown {
    let mesh = &v.mesh;
    let kinetic = 0.5 * v.grad_sq();
    let wl = w.lumped_weights(mesh);
    let mut magnetic = 0.0;
    let mut nonlinear = 0.0;
    let mut mass = 0.0;
    for (j, &val) in v.values.iter().enumerate() {
        magnetic += 0.5 * wl[j] * val * val;
        nonlinear -= mesh.lumped_mass[j] * abs_pow(val, p) / p;
        mass += mesh.lumped_mass[j] * val * val;
    }
    EnergyBreakdown { kinetic, magnetic, nonlinear, total: kinetic + magnetic + nonlinear, mass }
}

/// Magnetic energy of a complex state; the per-edge potential comes from the
/// mesh's graph.
pub fn energy_magnetic(u: &DiscreteField<Complex64>, p: f64) -> EnergyBreakdown {
    let mesh = &u.mesh;
    let mut kinetic = 0.0;
    for em in &mesh.edges {
        let a = mesh.graph.edges()[em.edge].magnetic_potential;
        let h = em.spacing;
        for pair in em.nodes.windows(2) {
            let (ua, ub) = (u.values[pair[0]], u.values[pair[1]]);
            let du = (ub - ua) / h - Complex64::i() * a * (ua + ub) * 0.5;
            kinetic += 0.5 * h * du.norm_sqr();
        }
    }
    let mut nonlinear = 0.0;
    let mut mass = 0.0;
    for (j, val) in u.values.iter().enumerate() {
        let r = val.norm();
        nonlinear -= mesh.lumped_mass[j] * abs_pow(r, p) / p;
        mass += mesh.lumped_mass[j] * r * r;
    }
    EnergyBreakdown { kinetic, magnetic: 0.0, nonlinear, total: kinetic + nonlinear, mass }
}

/// Weak-form gradient of the reduced energy:
/// `K v + (MW)∘v − M∘(|v|^{p−2}v)`, with Dirichlet rows zeroed.
pub fn gradient_reduced(
    v: &DiscreteField<f64>,
    w: &EffectivePotential,
    p: f64,
) -> DiscreteField<f64> {
    let mesh = &v.mesh;
    let mut g = vec![0.0; mesh.n_dofs];
    for (_, a, b, h) in mesh.intervals() {
        let d = (v.values[b] - v.values[a]) / h;
        g[a] -= d;
        g[b] += d;
    }
    let wl = w.lumped_weights(mesh);
    for j in 0..mesh.n_dofs {
        g[j] += wl[j] * v.values[j] - mesh.lumped_mass[j] * nonlin_term(v.values[j], p);
    }
    for &d in &mesh.dirichlet {
        g[d] = 0.0;
    }
    DiscreteField { mesh: mesh.clone(), values: g }
}

/// Euler–Lagrange defect of a candidate state at multiplier `omega`.
#[derive(Debug, Clone, Copy)]
pub struct ElResidual {
    /// Max over interior nodes of `|−v'' − |v|^{p−2}v + Wv − ωv|`.
    pub interior: f64,
    /// Max over vertices of the summed outgoing slopes (three-point one-sided
    /// difference quotients).
    pub kirchhoff: f64,
}

pub fn el_residual(
    v: &DiscreteField<f64>,
    w: &EffectivePotential,
    p: f64,
    omega: f64,
) -> ElResidual {
    let mesh = &v.mesh;
    let mut interior: f64 = 0.0;
    for em in &mesh.edges {
        let we = w.per_edge[em.edge];
        let h = em.spacing;
        for k in 1..em.nodes.len() - 1 {
            let (a, c, b) = (em.nodes[k - 1], em.nodes[k], em.nodes[k + 1]);
            if c < mesh.n_vertex_dofs {
                continue; // loop edges can route through the vertex DOF
            }
            let vpp = (v.values[b] - 2.0 * v.values[c] + v.values[a]) / (h * h);
            let r = -vpp - nonlin_term(v.values[c], p) + we * v.values[c] - omega * v.values[c];
            interior = interior.max(r.abs());
        }
    }

    let mut sums = vec![0.0; mesh.n_vertex_dofs];
    for em in &mesh.edges {
        let n = em.nodes.len();
        let h = em.spacing;
        let start = em.nodes[0];
        if start < mesh.n_vertex_dofs {
            sums[start] += (-3.0 * v.values[em.nodes[0]] + 4.0 * v.values[em.nodes[1]]
                - v.values[em.nodes[2]])
                / (2.0 * h);
        }
        let end = em.nodes[n - 1];
        if end < mesh.n_vertex_dofs && !mesh.graph.edges()[em.edge].is_halfline() {
            sums[end] += (-3.0 * v.values[em.nodes[n - 1]] + 4.0 * v.values[em.nodes[n - 2]]
                - v.values[em.nodes[n - 3]])
                / (2.0 * h);
        }
    }
    let kirchhoff = sums.iter().fold(0.0, |acc: f64, s| acc.max(s.abs()));
    ElResidual { interior, kirchhoff }
}

/// Empirical Gagliardo–Nirenberg ratios; `None` when the gradient vanishes.
#[derive(Debug, Clone, Copy)]
pub struct GNReport {
    /// `‖u‖_p^p / (‖u‖₂^{p/2+1} ‖u'‖₂^{p/2−1})`.
    pub ratio_p: Option<f64>,
    /// `‖u‖_∞ / (‖u‖₂^{1/2} ‖u'‖₂^{1/2})`.
    pub ratio_inf: Option<f64>,
}

pub fn gn_report(v: &DiscreteField<f64>, p: f64) -> GNReport {
    let l2 = v.mass().sqrt();
    let grad = v.grad_sq().sqrt();
    if l2 == 0.0 || grad == 0.0 {
        return GNReport { ratio_p: None, ratio_inf: None };
    }
    let lp = v.lp_pow_p(p);
    GNReport {
        ratio_p: Some(lp / (l2.powf(p / 2.0 + 1.0) * grad.powf(p / 2.0 - 1.0))),
        ratio_inf: Some(v.linf() / (l2.sqrt() * grad.sqrt())),
    }
}

/// Diamagnetic comparison `∫|(|u|)'|² ≤ ∫|Du|²`.
#[derive(Debug, Clone, Copy)]
pub struct DiamagneticCheck {
    pub modulus_kinetic: f64,
    pub covariant_kinetic: f64,
    pub holds: bool,
}

pub fn diamagnetic_check(u: &DiscreteField<Complex64>) -> DiamagneticCheck {
    let lhs = u.modulus().grad_sq();
    let rhs = 2.0 * energy_magnetic(u, 4.0).kinetic;
    DiamagneticCheck {
        modulus_kinetic: lhs,
        covariant_kinetic: rhs,
        holds: lhs <= rhs + 1e-12 + 1e-8 * rhs.abs(),
    }
}
