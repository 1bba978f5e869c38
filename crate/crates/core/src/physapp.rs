//! Physical applications parameterized by the Bargmann index k: canonical
//! thermodynamics of the ladder E_n = hbar omega (n + k), the cutoff vacuum
//! energy density of cavity modes, the Stark-shifted effective index,
//! Landau levels and the two-isotope extraction of k.
//!
//! Thermodynamic quantities are in reduced units (energies in hbar omega,
//! inverse temperature as x = beta hbar omega). Everything else is SI, with
//! the constants collected in [`constants`].

use crate::error::{domain, Result};
use crate::repcore::BargmannIndex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// CODATA 2018 values, SI units.
pub mod constants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C: f64 = 299_792_458.0;
    pub const E_CHARGE: f64 = 1.602_176_634e-19;
    pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
    pub const ALPHA: f64 = 7.297_352_569_3e-3;
    pub const K_B: f64 = 1.380_649e-23;
    pub const EV: f64 = E_CHARGE;
    /// 4 keV cm^-3 expressed in J m^-3.
    pub const DARK_ENERGY_DENSITY: f64 = 4.0e3 * EV * 1.0e6;
}

use constants::*;

/// Canonical ensemble at x = beta hbar omega. F, U in units of hbar omega,
/// dE2 in (hbar omega)^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ThermoReport {
    pub Z: f64,
    pub F: f64,
    pub U: f64,
    pub dE2: f64,
    pub S_over_kB: f64,
    pub beta_hw: f64,
}

impl ThermoReport {
    /// S/k_B - ln Z - beta U.
    pub fn entropy_identity_residual(&self) -> f64 {
        self.S_over_kB - self.Z.ln() - self.beta_hw * self.U
    }
}

fn check_beta(beta_hw: f64) -> Result<()> {
    if beta_hw > 0.0 && beta_hw.is_finite() {
        Ok(())
    } else {
        domain(format!("beta*hbar*omega must be positive, got {beta_hw}"))
    }
}

/// ln Z = -x k - ln(1 - e^-x).
pub fn ln_partition(beta_hw: f64, k: f64) -> f64 {
    -beta_hw * k - (-(-beta_hw).exp_m1()).ln()
}

pub fn thermo(beta_hw: f64, k: BargmannIndex) -> Result<ThermoReport> {
    check_beta(beta_hw)?;
    let x = beta_hw;
    let k = k.value();
    let one_minus = -(-x).exp_m1();
    let bose = 1.0 / x.exp_m1();
    let ln_z = ln_partition(x, k);
    // e^x/(e^x-1)^2 written to stay finite for large x
    let de2 = (-x).exp() / (one_minus * one_minus);
    Ok(ThermoReport {
        Z: ln_z.exp(),
        F: k + one_minus.ln() / x,
        U: k + bose,
        dE2: de2,
        S_over_kB: -one_minus.ln() + x * bose,
        beta_hw: x,
    })
}

/// Occupation probability of level n; independent of k.
pub fn p_n(beta_hw: f64, n: usize) -> Result<f64> {
    check_beta(beta_hw)?;
    Ok((-beta_hw * n as f64).exp() * -(-beta_hw).exp_m1())
}

/// Vacuum energy density k hbar w^4 / (4 pi^2 c^3) for cutoff frequency w.
pub fn vacuum_energy_density(omega_hat: f64, k: f64) -> f64 {
    k * HBAR * omega_hat.powi(4) / (4.0 * PI * PI * C.powi(3))
}

/// Same density in terms of the length l = 2 pi c / w: 4 pi^2 k hbar c / l^4.
pub fn vacuum_energy_density_ell(ell: f64, k: f64) -> f64 {
    4.0 * PI * PI * k * HBAR * C / ell.powi(4)
}

pub fn cutoff_length(omega_hat: f64) -> f64 {
    2.0 * PI * C / omega_hat
}

/// Index k for which the cutoff density at length `ell` equals `target` (J m^-3).
pub fn solve_k_for_density(target: f64, ell: f64) -> f64 {
    target * ell.powi(4) / (4.0 * PI * PI * HBAR * C)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkShift {
    pub k_eff: f64,
    pub delta: f64,
    /// Set when k_eff <= 0, i.e. no admissible representation remains.
    pub nonpositive: bool,
}

/// Effective index k - delta for a charge Z e in a static field `e0` (V/m),
/// oscillator angular frequency `omega` and rest energy `rest_energy` (J).
pub fn stark_effective_k(k: f64, z_charge: i32, e0: f64, omega: f64, rest_energy: f64) -> StarkShift {
    let lambda = 2.0 * PI * C / omega;
    let z2 = (z_charge as f64).powi(2);
    let delta = ALPHA * z2 * EPSILON_0 * e0 * e0 * lambda.powi(3) / (4.0 * PI * PI * rest_energy);
    let k_eff = k - delta;
    StarkShift { k_eff, delta, nonpositive: k_eff <= 0.0 }
}

/// Ground-state shift -V0 = Z^2 e^2 E0^2 / (2 omega^2 M) in joules.
pub fn stark_energy_shift(z_charge: i32, e0: f64, omega: f64, rest_energy: f64) -> f64 {
    let q = z_charge as f64 * E_CHARGE;
    let mass = rest_energy / (C * C);
    q * q * e0 * e0 / (2.0 * omega * omega * mass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandauLevels {
    pub omega: f64,
    pub levels: Vec<f64>,
}

/// E_n = hbar (|qB|/m)(n + k) for n = 0..=n_max.
pub fn landau_levels(q_charge: f64, b: f64, mass: f64, k: BargmannIndex, n_max: usize, hbar: f64) -> Result<LandauLevels> {
    if q_charge * b == 0.0 {
        return domain("Landau levels need a nonzero field and charge");
    }
    if !(mass > 0.0) {
        return domain(format!("mass must be positive, got {mass}"));
    }
    let omega = (q_charge * b).abs() / mass;
    let levels = (0..=n_max).map(|n| hbar * omega * (n as f64 + k.value())).collect();
    Ok(LandauLevels { omega, levels })
}

/// Transition frequencies (omega_a1, omega_b2) from external levels E_a, E_b
/// into the ground states hbar omega_j k of two isotopes.
pub fn mulliken_forward(e_a: f64, e_b: f64, omega1: f64, omega2: f64, k: f64, hbar: f64) -> (f64, f64) {
    ((e_a - hbar * omega1 * k) / hbar, (e_b - hbar * omega2 * k) / hbar)
}

/// Solve omega_a1 - omega_b2 = (E_a - E_b)/hbar - k (omega1 - omega2) for k.
pub fn mulliken_extract_k(
    e_a: f64,
    e_b: f64,
    omega1: f64,
    omega2: f64,
    omega_a1: f64,
    omega_b2: f64,
    hbar: f64,
) -> Result<f64> {
    let d = omega1 - omega2;
    if d == 0.0 || d.abs() <= 1e-14 * omega1.abs().max(omega2.abs()) {
        return domain("isotope frequencies coincide, k is undetermined");
    }
    // grouped per isotope so each bracket is the ground energy omega_j k
    Ok(((e_a / hbar - omega_a1) - (e_b / hbar - omega_b2)) / d)
}

/// Cubic cavity of side `l` filled with a medium of relative constants
/// epsilon, mu; `m` labels the mode l = 2 pi m / L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub l: f64,
    pub epsilon: f64,
    pub mu: f64,
    pub m: [i64; 3],
}

impl CavitySpec {
    pub fn new(l: f64, epsilon: f64, mu: f64, m: [i64; 3]) -> Result<Self> {
        if !(l > 0.0) || !(epsilon > 0.0) || !(mu > 0.0) {
            return domain("cavity length and relative constants must be positive");
        }
        Ok(CavitySpec { l, epsilon, mu, m })
    }

    pub fn vacuum(l: f64, m: [i64; 3]) -> Self {
        CavitySpec { l, epsilon: 1.0, mu: 1.0, m }
    }

    pub fn refractive_index(&self) -> f64 {
        (self.epsilon * self.mu).sqrt()
    }

    pub fn wave_number(&self) -> f64 {
        let m2: f64 = self.m.iter().map(|&x| (x as f64).powi(2)).sum();
        2.0 * PI / self.l * m2.sqrt()
    }
}

/// Mode frequency omega = c |l| / n.
pub fn cavity_mode(spec: &CavitySpec) -> f64 {
    C * spec.wave_number() / spec.refractive_index()
}

/// Ground energy 2 k hbar sum(omega) over a finite mode list; the factor 2
/// counts the two polarizations.
pub fn ground_sum(k: f64, modes: &[CavitySpec]) -> f64 {
    2.0 * k * HBAR * modes.iter().map(cavity_mode).sum::<f64>()
}
