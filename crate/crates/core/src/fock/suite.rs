//! Gaussian-versus-Fock agreement checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    avg_qfi_fock, build_fock, encoded_fock, entropy_fock, fidelity_fock, negativity_fock, qfi_fock, FockRecipe,
};
use crate::channels::encoding_map;
use crate::error::Result;
use crate::metrology::{avg_qfi, gaussian_fidelity, qfi_theta, QfiConfig};
use crate::quantifiers::{log_negativity, von_neumann_entropy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub cutoff_single: usize,
    pub cutoff_two_mode: usize,
    pub tol_fidelity: f64,
    pub tol_entropy: f64,
    pub tol_negativity: f64,
    /// Relative.
    pub tol_qfi: f64,
    /// Encoding used for the fidelity checks.
    pub encode_epsilon: f64,
    pub encode_theta: f64,
    pub qfi_theta: f64,
    pub qfi_d_epsilon: f64,
    /// Phase nodes for the averaged-QFI check.
    pub avg_nodes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cutoff_single: 60,
            cutoff_two_mode: 40,
            tol_fidelity: 1e-6,
            tol_entropy: 1e-6,
            tol_negativity: 1e-4,
            tol_qfi: 1e-2,
            encode_epsilon: 0.1,
            encode_theta: 0.7,
            qfi_theta: 0.3,
            qfi_d_epsilon: 1e-2,
            avg_nodes: 16,
        }
    }
}

/// One row of the agreement report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub quantity: String,
    pub recipe: String,
    pub gaussian_value: Option<f64>,
    pub fock_value: Option<f64>,
    pub abs_diff: Option<f64>,
    pub cutoff: usize,
    pub tolerance: f64,
    pub relative: bool,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Copy)]
enum Quantity {
    Fidelity,
    PairFidelity(FockRecipe),
    Entropy,
    Negativity,
    Qfi,
    AvgQfi,
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Quantity::Fidelity => "fidelity",
            Quantity::PairFidelity(_) => "pair_fidelity",
            Quantity::Entropy => "entropy",
            Quantity::Negativity => "log_negativity",
            Quantity::Qfi => "qfi",
            Quantity::AvgQfi => "avg_qfi",
        }
    }
}

/// The recipe list: every entry has `n̄ ≤ 3` per mode.
pub fn default_recipes() -> Vec<FockRecipe> {
    let r1 = 1f64.asinh();
    vec![
        FockRecipe::Thermal { n_bar: 0.5 },
        FockRecipe::Thermal { n_bar: 2.0 },
        FockRecipe::Coherent { re: 1.0, im: 0.0 },
        FockRecipe::Coherent { re: 1.2, im: 0.9 },
        FockRecipe::SqueezedVacuum { r: r1 },
        FockRecipe::SqueezedVacuum { r: 0.5 },
        FockRecipe::SqueezedThermal { r: 0.4, nu: 2.0 },
        FockRecipe::Tmsv { r: r1 },
        FockRecipe::Tmsv { r: 0.5 },
    ]
}

fn plan() -> Vec<(Quantity, FockRecipe)> {
    let mut out = Vec::new();
    for recipe in default_recipes() {
        out.push((Quantity::Fidelity, recipe));
        out.push((Quantity::Entropy, recipe));
        out.push((Quantity::Qfi, recipe));
        if recipe.n_modes() == 2 {
            out.push((Quantity::Negativity, recipe));
        }
    }
    let pairs = [
        (
            FockRecipe::Coherent { re: 0.0, im: 0.0 },
            FockRecipe::Coherent { re: 1.0, im: 0.0 },
        ),
        (FockRecipe::Thermal { n_bar: 0.5 }, FockRecipe::Thermal { n_bar: 2.0 }),
        (
            FockRecipe::SqueezedVacuum { r: 0.5 },
            FockRecipe::Coherent { re: 0.5, im: -0.3 },
        ),
        (
            FockRecipe::SqueezedThermal { r: 0.4, nu: 2.0 },
            FockRecipe::Thermal { n_bar: 0.5 },
        ),
    ];
    for (a, b) in pairs {
        out.push((Quantity::PairFidelity(b), a));
    }
    out.push((Quantity::AvgQfi, FockRecipe::SqueezedVacuum { r: 1f64.asinh() }));
    out
}

fn evaluate(q: Quantity, recipe: &FockRecipe, cutoff: usize, cfg: &OracleConfig) -> Result<(f64, f64)> {
    let g = recipe.gaussian()?;
    let qfi_cfg = QfiConfig {
        d_epsilon: cfg.qfi_d_epsilon,
        theta_nodes: cfg.avg_nodes,
        richardson: true,
        base_epsilon: 0.0,
    };
    Ok(match q {
        Quantity::Fidelity => {
            let (eps, theta) = (cfg.encode_epsilon, cfg.encode_theta);
            let gauss = gaussian_fidelity(&g, &encoding_map(&g, eps, theta))?;
            let base = encoded_fock(recipe, cutoff, 0.0, theta)?;
            let moved = encoded_fock(recipe, cutoff, eps, theta)?;
            (gauss, fidelity_fock(&base, &moved)?)
        }
        Quantity::PairFidelity(other) => {
            let gauss = gaussian_fidelity(&g, &other.gaussian()?)?;
            let fock = fidelity_fock(&build_fock(recipe, cutoff)?, &build_fock(&other, cutoff)?)?;
            (gauss, fock)
        }
        Quantity::Entropy => (von_neumann_entropy(&g)?, entropy_fock(&build_fock(recipe, cutoff)?)?),
        Quantity::Negativity => (log_negativity(&g)?, negativity_fock(&build_fock(recipe, cutoff)?)?),
        Quantity::Qfi => (
            qfi_theta(&g, cfg.qfi_theta, &qfi_cfg)?,
            qfi_fock(recipe, cfg.qfi_theta, cutoff, &qfi_cfg)?,
        ),
        Quantity::AvgQfi => (avg_qfi(&g, &qfi_cfg)?, avg_qfi_fock(recipe, cutoff, &qfi_cfg)?),
    })
}

/// Runs every check in parallel; the report order is fixed.
pub fn oracle_suite(cfg: &OracleConfig) -> Vec<OracleCheck> {
    plan()
        .into_par_iter()
        .map(|(q, recipe)| {
            let cutoff = if recipe.n_modes() == 2 {
                cfg.cutoff_two_mode
            } else {
                cfg.cutoff_single
            };
            let (tolerance, relative) = match q {
                Quantity::Fidelity | Quantity::PairFidelity(_) => (cfg.tol_fidelity, false),
                Quantity::Entropy => (cfg.tol_entropy, false),
                Quantity::Negativity => (cfg.tol_negativity, false),
                Quantity::Qfi | Quantity::AvgQfi => (cfg.tol_qfi, true),
            };
            let label = match q {
                Quantity::PairFidelity(other) => format!("{} vs {}", recipe.label(), other.label()),
                _ => recipe.label(),
            };
            let mut check = OracleCheck {
                quantity: q.name().to_string(),
                recipe: label,
                gaussian_value: None,
                fock_value: None,
                abs_diff: None,
                cutoff,
                tolerance,
                relative,
                passed: false,
                error: None,
            };
            match evaluate(q, &recipe, cutoff, cfg) {
                Ok((g, f)) => {
                    let diff = (g - f).abs();
                    let scaled = if relative {
                        diff / g.abs().max(f64::MIN_POSITIVE)
                    } else {
                        diff
                    };
                    check.gaussian_value = Some(g);
                    check.fock_value = Some(f);
                    check.abs_diff = Some(diff);
                    check.passed = scaled < tolerance;
                }
                Err(e) => check.error = Some(e.to_string()),
            }
            check
        })
        .collect()
}
