//! Phase-diagram scans over the `(μ, Φ)` plane for the tadpole.
//!
//! The default verdict comes from the closed-form competitor certificate
//! (existence whenever `Φ < Φ*_direct(μ, L)`); the full-solver mode runs the
//! minimizer per cell and classifies by certificate and vanishing diagnosis.

use crate::closed_form;
use crate::graph::MetricGraph;
use crate::magnetics::EffectivePotential;
use crate::solver::{self, SolveStatus, SolverConfig};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ExistsByCertificate,
    NoWitness,
    SolverVanishing,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ExistsByCertificate => "exists-by-certificate",
            Verdict::NoWitness => "no-witness",
            Verdict::SolverVanishing => "solver-vanishing",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub mu_min: f64,
    pub mu_max: f64,
    pub mu_steps: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub l_half: f64,
    pub p: f64,
    pub full_solver: bool,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone)]
pub struct ScanCell {
    pub mu: f64,
    pub phi: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct ScanGrid {
    pub mus: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major: `cells[i_mu * phis.len() + i_phi]`.
    pub cells: Vec<ScanCell>,
    /// Per-μ thresholds `(direct, reference)`.
    pub thresholds: Vec<(f64, f64)>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("invalid range: {0}")]
    InvalidRange(&'static str),
    #[error(transparent)]
    ClosedForm(#[from] closed_form::ClosedFormError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
}

fn grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, ScanError> {
    if steps == 0 || !(min <= max) || !min.is_finite() || !max.is_finite() {
        return Err(ScanError::InvalidRange("need min <= max and steps >= 1"));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let d = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| min + d * i as f64).collect())
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanGrid, ScanError> {
    if !(cfg.l_half > 0.0) {
        return Err(ScanError::InvalidRange("L must be positive"));
    }
    if cfg.phi_min < 0.0 {
        return Err(ScanError::InvalidRange("phi must be nonnegative"));
    }
    if cfg.p != 4.0 && !cfg.full_solver {
        return Err(ScanError::InvalidRange("closed-form verdicts require p = 4"));
    }
    let mus = grid(cfg.mu_min, cfg.mu_max, cfg.mu_steps)?;
    let phis = grid(cfg.phi_min, cfg.phi_max, cfg.phi_steps)?;

    let thresholds: Vec<(f64, f64)> = mus
        .iter()
        .map(|&mu| {
            let th = closed_form::existence_threshold(mu, cfg.l_half)?;
            Ok((th.direct, th.reference))
        })
        .collect::<Result<_, ScanError>>()?;

    let jobs: Vec<(usize, usize)> = (0..mus.len())
        .flat_map(|i| (0..phis.len()).map(move |j| (i, j)))
        .collect();

    let cells: Vec<ScanCell> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (mu, phi) = (mus[i], phis[j]);
            let verdict = if cfg.full_solver {
                solver_verdict(mu, phi, cfg)
            } else {
                // certificate: the competitor beats the line soliton strictly
                if phi < thresholds[i].0 {
                    Verdict::ExistsByCertificate
                } else {
                    Verdict::NoWitness
                }
            };
            ScanCell { mu, phi, verdict }
        })
        .collect();

    Ok(ScanGrid { mus, phis, cells, thresholds })
}

fn solver_verdict(mu: f64, phi: f64, cfg: &ScanConfig) -> Verdict {
    let g = MetricGraph::tadpole(cfg.l_half, 0.0);
    let basis = g.cycle_basis();
    let w = EffectivePotential::zero(&g).with_edge(basis.cycles[0].steps[0].0, phi);
    let e_sol = match closed_form::soliton_energy(mu, cfg.p) {
        Ok(e) => e,
        Err(_) => return Verdict::NoWitness,
    };
    match solver::minimize_with_potential(&g, &w, mu, cfg.p, &cfg.solver) {
        Ok(r) => {
            let margin = 100.0 * cfg.solver.h * cfg.solver.h * e_sol.abs() + 1e-12;
            if r.energy.total < e_sol - margin {
                Verdict::ExistsByCertificate
            } else if r.status == SolveStatus::VanishingSuspected {
                Verdict::SolverVanishing
            } else {
                Verdict::NoWitness
            }
        }
        Err(_) => Verdict::NoWitness,
    }
}
