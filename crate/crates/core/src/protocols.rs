//! Post-selected impurity states and their concurrence.
//!
//! After scattering, the impurity pair is entangled with the electron. What we
//! learn about the electron decides which impurity state remains:
//! spin and side (spin-charge), side only (charge), or nothing (none).

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_sqrt, singular_values, CMatrix};
use crate::scattering::WaveCoefficients;
use crate::spin::{IncomingSpinor, Spin, SpinChannelBasis};

/// Below this probability an outcome is treated as impossible.
pub const MIN_PROBABILITY: f64 = 1e-14;
/// Concurrences down to −this are clamped to zero.
pub const CONCURRENCE_CLAMP: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

/// Two-impurity density matrix in the order |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpurityDensityMatrix {
    rho: CMatrix,
}

impl ImpurityDensityMatrix {
    /// Checks size, hermiticity, unit trace and positivity.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::invalid(format!("density matrix must be 4×4, got {}×{}", rho.dim(), rho.dim())));
        }
        if !rho.is_finite() || !rho.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::invalid("density matrix must be finite and Hermitian"));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        if min < PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(Self { rho })
    }

    /// Divides by the trace first.
    pub fn normalized(rho: CMatrix) -> Result<Self> {
        let tr = rho.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::invalid("density matrix has non-positive trace"));
        }
        Self::new(rho.scale(1.0 / tr))
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) pure state.
    pub fn pure(state: &[Complex64; 4]) -> Result<Self> {
        let mut m = CMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = state[i] * state[j].conj();
            }
        }
        Self::normalized(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rho[(i, j)]
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }
}

impl fmt::Display for ImpurityDensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            let row: Vec<String> = (0..4).map(|j| format!("{:.6}", self.rho[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    SpinCharge,
    Charge,
    None,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::SpinCharge, Protocol::Charge, Protocol::None];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::SpinCharge => "spin_charge",
            Protocol::Charge => "charge",
            Protocol::None => "none",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown protocol '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Transmitted,
    Reflected,
    Unconditioned,
}

/// Which channels carry a flipped electron spin relative to the incoming one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinFlipProjection {
    pub flipped: [bool; 3],
}

impl SpinFlipProjection {
    pub fn new(basis: &SpinChannelBasis, incoming: &IncomingSpinor) -> Result<Self> {
        let j0 = (0..3)
            .find(|&j| incoming.is_channel(j))
            .ok_or_else(|| Error::invalid("spin-resolved post-selection needs a single-channel incoming spinor"))?;
        let e0 = basis.labels()[j0].electron;
        Ok(Self {
            flipped: std::array::from_fn(|j| basis.labels()[j].electron != e0),
        })
    }

    pub fn flipped_channels(&self) -> Vec<usize> {
        (0..3).filter(|&j| self.flipped[j]).collect()
    }

    pub fn unflipped_channels(&self) -> Vec<usize> {
        (0..3).filter(|&j| !self.flipped[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub protocol: Protocol,
    pub outcome: Outcome,
    /// `None` when the outcome is infeasible.
    pub concurrence: Option<f64>,
    pub success_probability: f64,
    pub rho: Option<ImpurityDensityMatrix>,
}

impl ProtocolResult {
    pub fn feasible(&self) -> bool {
        self.concurrence.is_some()
    }

    fn infeasible(protocol: Protocol, outcome: Outcome, probability: f64) -> Self {
        Self {
            protocol,
            outcome,
            concurrence: None,
            success_probability: probability,
            rho: None,
        }
    }

    fn from_unnormalized(protocol: Protocol, outcome: Outcome, m: CMatrix) -> Result<Self> {
        let p = m.trace().re;
        if p < MIN_PROBABILITY {
            return Ok(Self::infeasible(protocol, outcome, p.max(0.0)));
        }
        let rho = ImpurityDensityMatrix::normalized(m)?;
        Ok(Self {
            protocol,
            outcome,
            concurrence: Some(concurrence_analytic(&rho)?),
            success_probability: p.min(1.0),
            rho: Some(rho),
        })
    }
}

/// Adds |φ⟩⟨φ| where φ = Σ_j amp_j |impurity state of channel j⟩ over `channels`.
fn add_projector(m: &mut CMatrix, basis: &SpinChannelBasis, amps: &[Complex64; 3], channels: &[usize]) {
    for &j in channels {
        let a = basis.labels()[j].impurity_index();
        for &l in channels {
            let b = basis.labels()[l].impurity_index();
            m[(a, b)] += amps[j] * amps[l].conj();
        }
    }
}

/// Electron spin unobserved: one incoherent term per electron spin value.
fn add_spin_traced(m: &mut CMatrix, basis: &SpinChannelBasis, amps: &[Complex64; 3]) {
    for spin in [Spin::Up, Spin::Down] {
        let chans: Vec<usize> = (0..3).filter(|&j| basis.labels()[j].electron == spin).collect();
        add_projector(m, basis, amps, &chans);
    }
}

fn side_amplitudes(coeffs: &WaveCoefficients, outcome: Outcome) -> Result<&[Complex64; 3]> {
    match outcome {
        Outcome::Transmitted => Ok(&coeffs.t),
        Outcome::Reflected => Ok(&coeffs.r),
        Outcome::Unconditioned => Err(Error::invalid("a side must be chosen for this protocol")),
    }
}

/// Electron detected on one side with its spin flipped.
pub fn protocol_spin_charge(coeffs: &WaveCoefficients, outcome: Outcome) -> Result<ProtocolResult> {
    let amps = side_amplitudes(coeffs, outcome)?;
    let proj = SpinFlipProjection::new(&coeffs.basis, &coeffs.incoming)?;
    let mut m = CMatrix::zeros(4);
    add_projector(&mut m, &coeffs.basis, amps, &proj.flipped_channels());
    ProtocolResult::from_unnormalized(Protocol::SpinCharge, outcome, m)
}

/// Electron detected on one side, spin not measured.
pub fn protocol_charge(coeffs: &WaveCoefficients, outcome: Outcome) -> Result<ProtocolResult> {
    let amps = side_amplitudes(coeffs, outcome)?;
    let mut m = CMatrix::zeros(4);
    add_spin_traced(&mut m, &coeffs.basis, amps);
    ProtocolResult::from_unnormalized(Protocol::Charge, outcome, m)
}

/// Electron not observed at all.
pub fn protocol_none(coeffs: &WaveCoefficients) -> Result<ProtocolResult> {
    let mut m = CMatrix::zeros(4);
    add_spin_traced(&mut m, &coeffs.basis, &coeffs.r);
    add_spin_traced(&mut m, &coeffs.basis, &coeffs.t);
    ProtocolResult::from_unnormalized(Protocol::None, Outcome::Unconditioned, m)
}

/// All five protocol/outcome combinations in a fixed order:
/// spin-charge T, spin-charge R, charge T, charge R, none.
pub fn all_protocols(coeffs: &WaveCoefficients) -> Result<[ProtocolResult; 5]> {
    Ok([
        protocol_spin_charge(coeffs, Outcome::Transmitted)?,
        protocol_spin_charge(coeffs, Outcome::Reflected)?,
        protocol_charge(coeffs, Outcome::Transmitted)?,
        protocol_charge(coeffs, Outcome::Reflected)?,
        protocol_none(coeffs)?,
    ])
}

fn clamp_concurrence(c: f64) -> f64 {
    if (-CONCURRENCE_CLAMP..0.0).contains(&c) {
        0.0
    } else {
        c.clamp(0.0, 1.0)
    }
}

/// σ_y ⊗ σ_y in the computational basis.
fn spin_flip() -> CMatrix {
    let mut s = CMatrix::zeros(4);
    s[(0, 3)] = (-1.0).into();
    s[(1, 2)] = 1.0.into();
    s[(2, 1)] = 1.0.into();
    s[(3, 0)] = (-1.0).into();
    s
}

/// General two-qubit concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄), with λ the
/// square roots of the eigenvalues of √ρ ρ̃ √ρ, ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y).
pub fn concurrence_wootters(rho: &ImpurityDensityMatrix) -> Result<f64> {
    let s = psd_sqrt(rho.matrix())?;
    // √ρ ρ̃ √ρ = A A† with A = √ρ Σ (√ρ)*, so the λ are singular values of A.
    let a = &(&s * &spin_flip()) * &s.conj();
    let mut lambda = singular_values(&a);
    lambda.sort_by(|x, y| y.total_cmp(x));
    Ok(clamp_concurrence(lambda[0] - lambda[1] - lambda[2] - lambda[3]))
}

/// Closed form 2|ρ_{↑↓,↓↑}| for states whose only coherence is between
/// |↑↓⟩ and |↓↑⟩ and with at most one of |↑↑⟩, |↓↓⟩ populated.
pub fn concurrence_analytic(rho: &ImpurityDensityMatrix) -> Result<f64> {
    let tol = 1e-14;
    for i in 0..4 {
        for j in 0..4 {
            let allowed = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
            if !allowed && rho.get(i, j).norm() > tol {
                return Err(Error::FormMismatch(format!("entry ({i}, {j}) = {} is nonzero", rho.get(i, j))));
            }
        }
    }
    if rho.get(0, 0).re * rho.get(3, 3).re > tol {
        return Err(Error::FormMismatch("both |↑↑⟩ and |↓↓⟩ are populated".into()));
    }
    Ok(clamp_concurrence(2.0 * rho.get(1, 2).norm()))
}
