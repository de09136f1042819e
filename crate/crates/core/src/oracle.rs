//! Brute-force reference solver: the ramp is cut into N constant-potential
//! slices whose exact propagators are multiplied together, with the two
//! exchange deltas applied as derivative kicks at the ends.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, CMatrix};
use crate::scattering::{Regime, ScatteringProblem, WaveCoefficients, RampBasis};
use crate::spin::{exchange_matrix, ExchangeMatrix, Impurity};
use crate::units::{self, MaterialParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest ramp-end Airy argument for which the oracle is trusted.
pub const ORACLE_U_MAX: f64 = 15.0;

/// Midpoint discretization of the ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceStack {
    pub potentials: Vec<f64>,
    pub width: f64,
}

impl SliceStack {
    pub fn midpoint(problem: &ScatteringProblem, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("slice count must be at least 1"));
        }
        let width = problem.x0 / n as f64;
        let potentials = (0..n)
            .map(|m| problem.v0 * (m as f64 + 0.5) / n as f64)
            .collect();
        Ok(Self { potentials, width })
    }

    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }

    pub fn total_width(&self) -> f64 {
        self.width * self.len() as f64
    }
}

/// Propagator of (ψ, ψ′) for one channel through constant potential.
pub fn scalar_slice_transfer(v_slice: f64, width: f64, energy: f64, material: &MaterialParams) -> [[f64; 2]; 2] {
    let d = (energy - v_slice) / material.kinetic_factor();
    if d > 0.0 {
        let k = d.sqrt();
        let (s, c) = (k * width).sin_cos();
        [[c, s / k], [-k * s, c]]
    } else if d < 0.0 {
        let kappa = (-d).sqrt();
        let (s, c) = ((kappa * width).sinh(), (kappa * width).cosh());
        [[c, s / kappa], [kappa * s, c]]
    } else {
        [[1.0, width], [0.0, 1.0]]
    }
}

fn mul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// 6×6 map on (ψ₁, ψ₂, ψ₃, ψ₁′, ψ₂′, ψ₃′).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTransferMatrix(pub CMatrix);

impl ChannelTransferMatrix {
    pub fn identity() -> Self {
        Self(CMatrix::identity(6))
    }

    /// Same scalar propagator on every channel.
    pub fn from_scalar(p: &[[f64; 2]; 2]) -> Self {
        let mut m = CMatrix::zeros(6);
        for j in 0..3 {
            for (a, row) in p.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    m[(3 * a + j, 3 * b + j)] = v.into();
                }
            }
        }
        Self(m)
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Self) -> Self {
        Self(&self.0 * &first.0)
    }

    pub fn apply(&self, state: &[Complex64; 6]) -> [Complex64; 6] {
        let v = self.0.mul_vec(state);
        std::array::from_fn(|i| v[i])
    }
}

/// (ψ, ψ′) ↦ (ψ, ψ′ + strength·Mψ).
pub fn delta_transfer(m: &ExchangeMatrix, strength: f64) -> ChannelTransferMatrix {
    let mut t = CMatrix::identity(6);
    for j in 0..3 {
        for l in 0..3 {
            t[(3 + j, l)] = (strength * m.get(j, l)).into();
        }
    }
    ChannelTransferMatrix(t)
}

pub fn slice_transfer(v_slice: f64, width: f64, energy: f64, material: &MaterialParams) -> Result<ChannelTransferMatrix> {
    if width.is_nan() || width <= 0.0 {
        return Err(Error::invalid("slice width must be positive"));
    }
    Ok(ChannelTransferMatrix::from_scalar(&scalar_slice_transfer(v_slice, width, energy, material)))
}

/// Product of all slice propagators, scalar form.
pub fn stack_transfer(stack: &SliceStack, energy: f64, material: &MaterialParams) -> [[f64; 2]; 2] {
    stack.potentials.iter().fold([[1.0, 0.0], [0.0, 1.0]], |acc, &v| {
        mul2(&scalar_slice_transfer(v, stack.width, energy, material), &acc)
    })
}

/// Airy argument at the ramp end, or `None` for a flat ramp.
pub fn ramp_end_argument(problem: &ScatteringProblem) -> Result<Option<f64>> {
    let ramp = RampBasis::for_problem(problem)?;
    Ok(ramp.u_at(problem.x0))
}

pub fn is_applicable(problem: &ScatteringProblem) -> Result<bool> {
    Ok(ramp_end_argument(problem)?.is_none_or(|u| u <= ORACLE_U_MAX))
}

/// Reference amplitudes from `n` slices. Only `r`, `tau`, `t`, `k`, `q`,
/// `regime` and `flux_residual` are meaningful; ramp coefficients are zero.
pub fn oracle_solve(problem: &ScatteringProblem, n: usize) -> Result<WaveCoefficients> {
    problem.validate()?;
    if let Some(u) = ramp_end_argument(problem)? {
        if u > ORACLE_U_MAX {
            return Err(Error::OutOfRange {
                what: "oracle ramp-end Airy argument",
                arg: u,
            });
        }
    }
    let stack = SliceStack::midpoint(problem, n)?;
    let p = stack_transfer(&stack, problem.energy, &problem.material);

    let k = units::incident_wavenumber(problem.energy, &problem.material)?;
    let regime = problem.regime();
    let q = match regime {
        Regime::Threshold => Complex64::new(0.0, 0.0),
        _ => units::transmitted_wavenumber(problem.energy, problem.v0, &problem.material)?,
    };
    let s = units::delta_strength(problem.coupling, &problem.material);
    let m1 = exchange_matrix(Impurity::First, &problem.basis);
    let m2 = exchange_matrix(Impurity::Second, &problem.basis);
    let a = problem.incoming.amplitudes();

    // Just right of x = 0: ψ = a + r, ψ′ = D a + E r.
    let d = |j: usize, l: usize| s * m1.get(j, l) + if j == l { I * k } else { 0.0.into() };
    let e = |j: usize, l: usize| s * m1.get(j, l) - if j == l { I * k } else { 0.0.into() };
    let delta = |j: usize, l: usize| if j == l { 1.0 } else { 0.0 };

    // Unknowns (r, τ̃) with τ̃ the transmitted amplitude at x₀.
    let mut mat = CMatrix::zeros(6);
    let mut rhs = vec![Complex64::new(0.0, 0.0); 6];
    for j in 0..3 {
        for l in 0..3 {
            // ψ(x₀) = P₀₀ψ(0) + P₀₁ψ′(0) must equal τ̃.
            mat[(j, l)] = p[0][0] * delta(j, l) + p[0][1] * e(j, l);
            rhs[j] -= (p[0][0] * delta(j, l) + p[0][1] * d(j, l)) * a[l];
            // ψ′(x₀⁻) + s·M₂τ̃ must equal iqτ̃.
            mat[(3 + j, l)] = p[1][0] * delta(j, l) + p[1][1] * e(j, l);
            rhs[3 + j] -= (p[1][0] * delta(j, l) + p[1][1] * d(j, l)) * a[l];
            mat[(3 + j, 3 + l)] = s * m2.get(j, l) - I * q * delta(j, l);
        }
        mat[(j, 3 + j)] = (-1.0).into();
    }
    let x = lu_solve(&mat, &rhs)?;
    let r: [Complex64; 3] = std::array::from_fn(|j| x[j]);
    let back = (-I * q * problem.x0).exp();
    let tau: [Complex64; 3] = std::array::from_fn(|j| x[3 + j] * back);
    let t = match regime {
        Regime::Propagating => {
            let f = (q.re / k).sqrt();
            tau.map(|z| z * f)
        }
        _ => [Complex64::new(0.0, 0.0); 3],
    };
    let refl: f64 = r.iter().map(|z| z.norm_sqr()).sum();
    let trans: f64 = t.iter().map(|z| z.norm_sqr()).sum();
    let zero = [Complex64::new(0.0, 0.0); 3];
    Ok(WaveCoefficients {
        r,
        b: zero,
        c: zero,
        c_exponent: 0.0,
        tau,
        t,
        k,
        q,
        regime,
        flux_residual: (refl + trans - problem.incoming.norm_sqr()).abs(),
        condition: f64::NAN,
        ramp: RampBasis::for_problem(problem)?,
        basis: problem.basis,
        incoming: problem.incoming,
    })
}

/// Largest entrywise difference of r and t between two solutions.
pub fn amplitude_deviation(a: &WaveCoefficients, b: &WaveCoefficients) -> f64 {
    a.r.iter()
        .zip(&b.r)
        .chain(a.t.iter().zip(&b.t))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
