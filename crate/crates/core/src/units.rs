//! Physical constants and the internal eV / Å unit system.
//!
//! Everything inside the crate works in eV for energies and Å for lengths.
//! Public configuration surfaces (CLI, config files, CSV) speak meV and nm and
//! convert through the helpers at the bottom of this module.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Electron rest mass, kg (CODATA 2018).
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;

/// ħ²/2mₑ expressed in eV·Å² (≈ 3.8099821).
pub const HBAR2_OVER_2ME: f64 =
    HBAR_SI * HBAR_SI / (2.0 * ELECTRON_MASS_SI) / ELEMENTARY_CHARGE_SI * 1e20;

/// Effective-mass ratio of electrons in GaAs.
pub const GAAS_MASS_RATIO: f64 = 0.067;

pub const MEV_PER_EV: f64 = 1e3;
pub const ANGSTROM_PER_NM: f64 = 10.0;

#[inline]
pub fn mev_to_ev(mev: f64) -> f64 {
    mev / MEV_PER_EV
}

#[inline]
pub fn ev_to_mev(ev: f64) -> f64 {
    ev * MEV_PER_EV
}

#[inline]
pub fn nm_to_angstrom(nm: f64) -> f64 {
    nm * ANGSTROM_PER_NM
}

#[inline]
pub fn angstrom_to_nm(a: f64) -> f64 {
    a / ANGSTROM_PER_NM
}

/// Band parameters of the wire material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    mass_ratio: f64,
}

impl MaterialParams {
    pub fn new(mass_ratio: f64) -> Result<Self> {
        if !(mass_ratio.is_finite() && mass_ratio > 0.0) {
            return Err(Error::invalid(format!(
                "effective mass ratio must be positive, got {mass_ratio}"
            )));
        }
        Ok(Self { mass_ratio })
    }

    pub fn gaas() -> Self {
        Self {
            mass_ratio: GAAS_MASS_RATIO,
        }
    }

    pub fn mass_ratio(&self) -> f64 {
        self.mass_ratio
    }

    /// ħ²/2m* in eV·Å².
    pub fn kinetic_factor(&self) -> f64 {
        HBAR2_OVER_2ME / self.mass_ratio
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::gaas()
    }
}

/// ħ²/2m* in eV·Å² for a raw mass ratio.
pub fn kinetic_factor(mass_ratio: f64) -> Result<f64> {
    Ok(MaterialParams::new(mass_ratio)?.kinetic_factor())
}

/// Incident wavenumber k = √(ε/(ħ²/2m*)) in Å⁻¹.
pub fn incident_wavenumber(energy: f64, material: &MaterialParams) -> Result<f64> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::invalid(format!(
            "electron energy must be positive, got {energy} eV"
        )));
    }
    Ok((energy / material.kinetic_factor()).sqrt())
}

/// Wavenumber beyond the ramp, on the branch with Im q ≥ 0.
///
/// Real for ε > V₀, purely imaginary (decaying) for ε < V₀ and zero at threshold.
pub fn transmitted_wavenumber(energy: f64, v0: f64, material: &MaterialParams) -> Result<Complex64> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::invalid(format!(
            "electron energy must be positive, got {energy} eV"
        )));
    }
    let gap = (energy - v0) / material.kinetic_factor();
    Ok(if gap >= 0.0 {
        Complex64::new(gap.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-gap).sqrt())
    })
}

/// Derivative-jump strength 2m*J/ħ² in Å⁻¹ for a coupling J in eV·Å.
pub fn delta_strength(coupling: f64, material: &MaterialParams) -> f64 {
    coupling / material.kinetic_factor()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn hbar2_over_2me_matches_codata() {
        assert!((3.8099..=3.8101).contains(&HBAR2_OVER_2ME));
        assert!((HBAR2_OVER_2ME - 3.809_982_1).abs() < 1e-7);
    }

    #[test]
    fn kinetic_factor_examples() {
        assert!((kinetic_factor(1.0).unwrap() - 3.809_982_1).abs() < 1e-7);
        assert!((kinetic_factor(0.067).unwrap() - 56.8654).abs() < 1e-4);
        assert!(kinetic_factor(0.0).is_err());
        assert!(kinetic_factor(-1.0).is_err());
    }

    #[test]
    fn incident_wavenumber_examples() {
        let free = MaterialParams::new(1.0).unwrap();
        let k = incident_wavenumber(free.kinetic_factor(), &free).unwrap();
        assert!((k - 1.0).abs() < 1e-15);

        let gaas = MaterialParams::gaas();
        let k1 = incident_wavenumber(0.1, &gaas).unwrap();
        assert!((k1 - 0.041_934_9).abs() < 1e-7);
        let k4 = incident_wavenumber(0.4, &gaas).unwrap();
        assert!((k4 - 0.083_869_9).abs() < 1e-7);
        assert!(incident_wavenumber(0.0, &gaas).is_err());
        assert!(incident_wavenumber(-0.1, &gaas).is_err());
    }

    #[test]
    fn transmitted_wavenumber_branches() {
        let gaas = MaterialParams::gaas();
        let k = incident_wavenumber(0.1, &gaas).unwrap();
        let q = transmitted_wavenumber(0.1, 0.0, &gaas).unwrap();
        assert_eq!(q, Complex64::new(k, 0.0));

        let q = transmitted_wavenumber(0.1, 0.2, &gaas).unwrap();
        assert_eq!(q.re, 0.0);
        assert!((q.im - 0.041_934_9).abs() < 1e-7);

        let q = transmitted_wavenumber(0.1, 0.1, &gaas).unwrap();
        assert_eq!(q, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn delta_strength_examples() {
        let gaas = MaterialParams::gaas();
        assert_eq!(delta_strength(0.0, &gaas), 0.0);
        assert!((delta_strength(4.0, &gaas) - 0.070_341_54).abs() < 1e-7);
        let free = MaterialParams::new(1.0).unwrap();
        assert!((delta_strength(4.0, &free) - 1.049_875).abs() < 2e-6);
    }

    #[test]
    fn sqrt_energy_scaling() {
        let gaas = MaterialParams::gaas();
        for i in 0..60 {
            let e = 1e-4 * 10f64.powf(i as f64 / 10.0);
            let k1 = incident_wavenumber(e, &gaas).unwrap();
            let k4 = incident_wavenumber(4.0 * e, &gaas).unwrap();
            assert!(rel(k4, 2.0 * k1) < 1e-12);
        }
    }

    #[test]
    fn threshold_continuity_of_q() {
        let gaas = MaterialParams::gaas();
        let below = transmitted_wavenumber(0.1, 0.1 - 1e-12, &gaas).unwrap();
        let above = transmitted_wavenumber(0.1, 0.1 + 1e-12, &gaas).unwrap();
        assert!(below.norm() < 1e-6 && above.norm() < 1e-6);
        assert!(above.im >= 0.0);
    }

    #[test]
    fn mass_scaling_of_kinetic_factor() {
        for (m1, m2) in [(0.067, 1.0), (0.2, 3.5), (1e-3, 0.9)] {
            let a = kinetic_factor(m1).unwrap() * m1;
            let b = kinetic_factor(m2).unwrap() * m2;
            assert!(rel(a, b) < 1e-15);
        }
    }
}
