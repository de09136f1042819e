//! Boundary-matching solver for the three coupled spin channels.
//!
//! Regions: free propagation for x < 0, a linear ramp V(x) = V₀x/x₀ on
//! [0, x₀] whose solutions are Airy functions, and a constant V₀ beyond x₀.
//! The exchange deltas at x = 0 and x = x₀ couple the channels through the
//! derivative jumps. Per channel that gives four conditions on the unknowns
//! (r, b, c, τ̃), with τ̃ = τ·e^{iqx₀} the transmitted amplitude at x₀.

use num_complex::Complex64;

use crate::airy::{airy_eval, airy_eval_scaled, zeta};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, LuFactors};
use crate::spin::{exchange_matrix, ExchangeMatrix, Impurity, IncomingSpinor, SpinChannelBasis};
use crate::units::{self, MaterialParams};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this |V₀| (eV) the ramp is replaced by free plane waves.
pub const DEGENERATE_RAMP: f64 = 1e-6;
/// |ε − V₀| (eV) below which the problem is treated as exactly at threshold.
pub const THRESHOLD_WINDOW: f64 = 1e-9;
/// Solves whose equilibrated condition number exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Acceptable |Σ|r|² + Σ|t|² − 1| for a solve.
pub const FLUX_TOLERANCE: f64 = 1e-8;

/// Full physical configuration, internal units (eV, Å).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringProblem {
    /// Ballistic electron energy ε, eV.
    pub energy: f64,
    /// Ramp height V₀, eV (either sign).
    pub v0: f64,
    /// Impurity separation x₀, Å.
    pub x0: f64,
    /// Exchange coupling J, eV·Å.
    pub coupling: f64,
    pub material: MaterialParams,
    pub incoming: IncomingSpinor,
    pub basis: SpinChannelBasis,
}

impl ScatteringProblem {
    /// GaAs, incoming |↓↑↑⟩, m_T = +1/2.
    pub fn new(energy: f64, v0: f64, x0: f64, coupling: f64) -> Result<Self> {
        let p = Self {
            energy,
            v0,
            x0,
            coupling,
            material: MaterialParams::gaas(),
            incoming: IncomingSpinor::default(),
            basis: SpinChannelBasis::standard(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`ScatteringProblem::new`] with ε, V₀ in meV and x₀ in nm.
    pub fn from_lab_units(epsilon_mev: f64, v0_mev: f64, x0_nm: f64, coupling_ev_angstrom: f64) -> Result<Self> {
        Self::new(
            units::mev_to_ev(epsilon_mev),
            units::mev_to_ev(v0_mev),
            units::nm_to_angstrom(x0_nm),
            coupling_ev_angstrom,
        )
    }

    pub fn with_material(mut self, material: MaterialParams) -> Self {
        self.material = material;
        self
    }

    pub fn with_incoming(mut self, incoming: IncomingSpinor) -> Self {
        self.incoming = incoming;
        self
    }

    pub fn with_basis(mut self, basis: SpinChannelBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn with_v0(mut self, v0: f64) -> Self {
        self.v0 = v0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.energy.is_finite() && self.energy > 0.0) {
            return Err(Error::invalid(format!("energy must be positive, got {} eV", self.energy)));
        }
        if !(self.x0.is_finite() && self.x0 > 0.0) {
            return Err(Error::invalid(format!("impurity separation must be positive, got {} Å", self.x0)));
        }
        if !self.v0.is_finite() || !self.coupling.is_finite() {
            return Err(Error::invalid("V₀ and J must be finite"));
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        let gap = self.energy - self.v0;
        if gap.abs() < THRESHOLD_WINDOW {
            Regime::Threshold
        } else if gap > 0.0 {
            Regime::Propagating
        } else {
            Regime::Evanescent
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x <= self.x0 {
            self.v0 * x / self.x0
        } else {
            self.v0
        }
    }

    fn wavenumbers(&self) -> Result<(f64, Complex64)> {
        let k = units::incident_wavenumber(self.energy, &self.material)?;
        let q = match self.regime() {
            Regime::Threshold => ZERO,
            _ => units::transmitted_wavenumber(self.energy, self.v0, &self.material)?,
        };
        Ok((k, q))
    }
}

/// Character of the transmitted region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// ε > V₀: real q, transmitted flux.
    Propagating,
    /// |ε − V₀| below [`THRESHOLD_WINDOW`]: q = 0, no flux.
    Threshold,
    /// ε < V₀: q = iκ, decaying tail, total reflection.
    Evanescent,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Propagating => "propagating",
            Regime::Threshold => "threshold",
            Regime::Evanescent => "tunneling",
        }
    }
}

/// Parametrization of the two independent solutions on the ramp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RampBasis {
    /// |V₀| below [`DEGENERATE_RAMP`]: e^{ikx}, e^{−ikx}.
    Free { k: f64 },
    /// Ai(u), Bi(u)·e^{−bi_exponent} with u = alpha·(slope·x − ε).
    Airy {
        alpha: f64,
        slope: f64,
        energy: f64,
        bi_exponent: f64,
    },
}

impl RampBasis {
    pub fn for_problem(problem: &ScatteringProblem) -> Result<Self> {
        if problem.v0.abs() < DEGENERATE_RAMP {
            return Ok(RampBasis::Free {
                k: units::incident_wavenumber(problem.energy, &problem.material)?,
            });
        }
        let kf = problem.material.kinetic_factor();
        let alpha = (problem.x0 * problem.x0 / (kf * problem.v0 * problem.v0)).cbrt();
        let slope = problem.v0 / problem.x0;
        let u_end = alpha * (problem.v0 - problem.energy);
        Ok(RampBasis::Airy {
            alpha,
            slope,
            energy: problem.energy,
            bi_exponent: zeta(u_end.max(0.0)),
        })
    }

    /// Airy argument at x, if the ramp is not degenerate.
    pub fn u_at(&self, x: f64) -> Option<f64> {
        match *self {
            RampBasis::Free { .. } => None,
            RampBasis::Airy {
                alpha, slope, energy, ..
            } => Some(alpha * (slope * x - energy)),
        }
    }

    /// The factor e^{−bi_exponent} applied to the Bi column, as an exponent.
    pub fn bi_exponent(&self) -> f64 {
        match *self {
            RampBasis::Free { .. } => 0.0,
            RampBasis::Airy { bi_exponent, .. } => bi_exponent,
        }
    }
}

/// Two independent ramp solutions and their x-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiddleBasis {
    pub f1: Complex64,
    pub f1_prime: Complex64,
    pub f2: Complex64,
    pub f2_prime: Complex64,
}

impl MiddleBasis {
    pub fn wronskian(&self) -> Complex64 {
        self.f1 * self.f2_prime - self.f1_prime * self.f2
    }
}

/// Ramp solutions at x (0 ≤ x ≤ x₀ physically, any x mathematically).
pub fn middle_basis(x: f64, problem: &ScatteringProblem) -> Result<MiddleBasis> {
    RampBasis::for_problem(problem)?.eval(x)
}

impl RampBasis {
    pub fn eval(&self, x: f64) -> Result<MiddleBasis> {
        match *self {
            RampBasis::Free { k } => {
                let e = (I * k * x).exp();
                let em = (-I * k * x).exp();
                Ok(MiddleBasis {
                    f1: e,
                    f1_prime: I * k * e,
                    f2: em,
                    f2_prime: -I * k * em,
                })
            }
            RampBasis::Airy {
                alpha,
                slope,
                energy,
                bi_exponent,
            } => {
                let u = alpha * (slope * x - energy);
                let du = alpha * slope;
                let (ai, aip, bi, bip) = if u >= 0.0 {
                    let s = airy_eval_scaled(u)?;
                    let down = (-s.zeta).exp();
                    let up = (s.zeta - bi_exponent).exp();
                    (s.ai * down, s.ai_prime * down, s.bi * up, s.bi_prime * up)
                } else {
                    let v = airy_eval(u)?;
                    let down = (-bi_exponent).exp();
                    (v.ai, v.ai_prime, v.bi * down, v.bi_prime * down)
                };
                Ok(MiddleBasis {
                    f1: ai.into(),
                    f1_prime: (aip * du).into(),
                    f2: bi.into(),
                    f2_prime: (bip * du).into(),
                })
            }
        }
    }
}

/// The 12×12 boundary-matching system and the quantities it was built from.
#[derive(Debug, Clone)]
pub struct BoundarySystem {
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
    pub k: f64,
    pub q: Complex64,
    pub ramp: RampBasis,
}

/// Column of unknown `kind` (0 = r, 1 = b, 2 = c, 3 = τ̃) for channel j.
pub const fn unknown_index(kind: usize, channel: usize) -> usize {
    3 * kind + channel
}

/// Row of condition `cond` (0 = ψ at 0, 1 = jump at 0, 2 = ψ at x₀, 3 = jump at x₀).
pub const fn equation_index(cond: usize, channel: usize) -> usize {
    4 * channel + cond
}

pub fn assemble_system(problem: &ScatteringProblem) -> Result<BoundarySystem> {
    problem.validate()?;
    let (k, q) = problem.wavenumbers()?;
    let ramp = RampBasis::for_problem(problem)?;
    let at0 = ramp.eval(0.0)?;
    let at1 = ramp.eval(problem.x0)?;
    let s = units::delta_strength(problem.coupling, &problem.material);
    let m1 = exchange_matrix(Impurity::First, &problem.basis);
    let m2 = exchange_matrix(Impurity::Second, &problem.basis);
    let a = problem.incoming.amplitudes();

    let mut mat = CMatrix::zeros(12);
    let mut rhs = vec![ZERO; 12];
    let (r, b, c, t) = (0, 1, 2, 3);
    let ik = I * k;
    for j in 0..3 {
        // ψ continuous at 0: r_j − b_j f₁(0) − c_j f₂(0) = −a_j
        let e = equation_index(0, j);
        mat[(e, unknown_index(r, j))] = 1.0.into();
        mat[(e, unknown_index(b, j))] = -at0.f1;
        mat[(e, unknown_index(c, j))] = -at0.f2;
        rhs[e] = -a[j];

        // ψ′(0⁺) − ψ′(0⁻) = s·M₁ψ(0)
        let e = equation_index(1, j);
        mat[(e, unknown_index(b, j))] = at0.f1_prime;
        mat[(e, unknown_index(c, j))] = at0.f2_prime;
        mat[(e, unknown_index(r, j))] += ik;
        for l in 0..3 {
            mat[(e, unknown_index(r, l))] -= s * m1.get(j, l);
        }
        rhs[e] = ik * a[j] + s * (0..3).map(|l| a[l] * m1.get(j, l)).sum::<Complex64>();

        // ψ continuous at x₀: b_j f₁(x₀) + c_j f₂(x₀) − τ̃_j = 0
        let e = equation_index(2, j);
        mat[(e, unknown_index(b, j))] = at1.f1;
        mat[(e, unknown_index(c, j))] = at1.f2;
        mat[(e, unknown_index(t, j))] = (-1.0).into();

        // ψ′(x₀⁺) − ψ′(x₀⁻) = s·M₂ψ(x₀)
        let e = equation_index(3, j);
        mat[(e, unknown_index(t, j))] = I * q;
        mat[(e, unknown_index(b, j))] = -at1.f1_prime;
        mat[(e, unknown_index(c, j))] = -at1.f2_prime;
        for l in 0..3 {
            mat[(e, unknown_index(t, l))] -= s * m2.get(j, l);
        }
    }
    Ok(BoundarySystem {
        matrix: mat,
        rhs,
        k,
        q,
        ramp,
    })
}

/// Solved amplitudes. Ramp coefficients are stored as mantissas: the Bi
/// coefficient of channel j is `c[j]·e^{c_exponent}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveCoefficients {
    pub r: [Complex64; 3],
    pub b: [Complex64; 3],
    pub c: [Complex64; 3],
    pub c_exponent: f64,
    /// Raw transmitted amplitudes of e^{iqx}.
    pub tau: [Complex64; 3],
    /// Flux-normalized transmission √(q/k)·τ; zero without transmitted flux.
    pub t: [Complex64; 3],
    pub k: f64,
    pub q: Complex64,
    pub regime: Regime,
    pub flux_residual: f64,
    pub condition: f64,
    pub ramp: RampBasis,
    pub basis: SpinChannelBasis,
    pub incoming: IncomingSpinor,
}

impl WaveCoefficients {
    pub fn reflection_probability(&self) -> f64 {
        self.r.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn transmission_probability(&self) -> f64 {
        self.t.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Full Bi coefficient; may underflow to zero deep in the barrier.
    pub fn c_value(&self, j: usize) -> Complex64 {
        self.c[j] * self.c_exponent.exp()
    }

    fn tau_at_x0(&self, x0: f64) -> [Complex64; 3] {
        let phase = (I * self.q * x0).exp();
        self.tau.map(|t| t * phase)
    }
}

pub fn solve(problem: &ScatteringProblem) -> Result<WaveCoefficients> {
    let sys = assemble_system(problem)?;
    let lu = LuFactors::new(&sys.matrix).map_err(|e| match e {
        Error::Singular { .. } => Error::IllConditioned {
            regime: problem.regime().name().to_string(),
            estimate: f64::INFINITY,
        },
        other => other,
    })?;
    let condition = lu.equilibrated_condition(&sys.matrix);
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned {
            regime: problem.regime().name().to_string(),
            estimate: condition,
        });
    }
    let x = lu.solve(&sys.rhs);
    let pick = |kind: usize| -> [Complex64; 3] { std::array::from_fn(|j| x[unknown_index(kind, j)]) };
    let r = pick(0);
    let b = pick(1);
    let c = pick(2);
    let tau_x0 = pick(3);

    let regime = problem.regime();
    let (k, q) = (sys.k, sys.q);
    let back = (-I * q * problem.x0).exp();
    let tau = tau_x0.map(|t| t * back);
    let t = match regime {
        Regime::Propagating => {
            let f = (q.re / k).sqrt();
            tau.map(|z| z * f)
        }
        _ => [ZERO; 3],
    };

    let incident = problem.incoming.norm_sqr();
    let refl: f64 = r.iter().map(|z| z.norm_sqr()).sum();
    let trans = if regime == Regime::Propagating {
        q.re / k * tau.iter().map(|z| z.norm_sqr()).sum::<f64>()
    } else {
        0.0
    };
    let flux_residual = (refl + trans - incident).abs();

    Ok(WaveCoefficients {
        r,
        b,
        c,
        c_exponent: -sys.ramp.bi_exponent(),
        tau,
        t,
        k,
        q,
        regime,
        flux_residual,
        condition,
        ramp: sys.ramp,
        basis: problem.basis,
        incoming: problem.incoming,
    })
}

/// Spatial region of the wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Incident,
    Ramp,
    Transmitted,
}

impl Region {
    pub fn of(x: f64, x0: f64) -> Self {
        if x < 0.0 {
            Region::Incident
        } else if x <= x0 {
            Region::Ramp
        } else {
            Region::Transmitted
        }
    }
}

/// ψ_j and ψ_j′ at x using the formula of a given region (which may be
/// evaluated slightly outside it, e.g. for one-sided limits).
pub fn evaluate_in_region(
    coeffs: &WaveCoefficients,
    problem: &ScatteringProblem,
    region: Region,
    x: f64,
) -> Result<([Complex64; 3], [Complex64; 3])> {
    let a = problem.incoming.amplitudes();
    let k = coeffs.k;
    Ok(match region {
        Region::Incident => {
            let ep = (I * k * x).exp();
            let em = (-I * k * x).exp();
            (
                std::array::from_fn(|j| a[j] * ep + coeffs.r[j] * em),
                std::array::from_fn(|j| I * k * (a[j] * ep - coeffs.r[j] * em)),
            )
        }
        Region::Ramp => {
            let m = coeffs.ramp.eval(x)?;
            (
                std::array::from_fn(|j| coeffs.b[j] * m.f1 + coeffs.c[j] * m.f2),
                std::array::from_fn(|j| coeffs.b[j] * m.f1_prime + coeffs.c[j] * m.f2_prime),
            )
        }
        Region::Transmitted => {
            let at_x0 = coeffs.tau_at_x0(problem.x0);
            let e = (I * coeffs.q * (x - problem.x0)).exp();
            (
                at_x0.map(|t| t * e),
                at_x0.map(|t| I * coeffs.q * t * e),
            )
        }
    })
}

/// ψ_j(x) for the three spin channels.
pub fn evaluate_wavefunction(
    coeffs: &WaveCoefficients,
    problem: &ScatteringProblem,
    x: f64,
) -> Result<[Complex64; 3]> {
    Ok(evaluate_in_region(coeffs, problem, Region::of(x, problem.x0), x)?.0)
}

/// ψ_j′(x); one-sided (from the right) at the delta positions.
pub fn evaluate_wavefunction_derivative(
    coeffs: &WaveCoefficients,
    problem: &ScatteringProblem,
    x: f64,
) -> Result<[Complex64; 3]> {
    Ok(evaluate_in_region(coeffs, problem, Region::of(x, problem.x0), x)?.1)
}

/// Exchange matrices in the problem's basis, for callers that need them.
pub fn exchange_pair(problem: &ScatteringProblem) -> (ExchangeMatrix, ExchangeMatrix) {
    (
        exchange_matrix(Impurity::First, &problem.basis),
        exchange_matrix(Impurity::Second, &problem.basis),
    )
}
