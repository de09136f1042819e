//! Real-argument Airy functions Ai, Bi and their derivatives.
//!
//! Three evaluation regimes:
//! - |u| ≤ 3: Maclaurin series of the two standard solutions f, g;
//! - 3 < |u| ≤ 10: Bessel functions of order 1/3 and 2/3 at ζ = ⅔|u|^{3/2}
//!   via Steed / Temme continued fractions (CF1 + CF2);
//! - |u| > 10: asymptotic expansions, exponential form for u > 0 and
//!   modulus/phase form for u < 0.
//!
//! The series alone loses about ln(Bi/Ai) digits for positive u through
//! cancellation, which is why the middle regime exists.
//!
//! [`airy_eval_scaled`] returns exponent-free mantissas for u ≥ 0 so the
//! deep-tunneling regime never overflows.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest argument accepted by [`airy_eval`]; Bi(30) ≈ 2e47·e^{62}.
pub const UNSCALED_U_MAX: f64 = 30.0;

const SERIES_LIMIT: f64 = 3.0;
const ASYMPTOTIC_LIMIT: f64 = 10.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// Ai, Bi and their derivatives at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryValues {
    /// Ai·Bi′ − Ai′·Bi, equal to 1/π.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Mantissas with Ai = ai·e^{−ζ}, Bi = bi·e^{+ζ} (derivatives likewise),
/// where ζ = ⅔u^{3/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiryValues {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
    pub zeta: f64,
}

impl ScaledAiryValues {
    /// Exponents cancel, so this is 1/π as well.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }

    pub fn unscale(&self) -> AiryValues {
        let down = (-self.zeta).exp();
        let up = self.zeta.exp();
        AiryValues {
            ai: self.ai * down,
            bi: self.bi * up,
            ai_prime: self.ai_prime * down,
            bi_prime: self.bi_prime * up,
        }
    }
}

/// ζ(u) = ⅔|u|^{3/2}.
pub fn zeta(u: f64) -> f64 {
    let a = u.abs();
    2.0 / 3.0 * a * a.sqrt()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0 by the Lanczos approximation (g = 7, 9 terms).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Values at the origin, derived from Γ(1/3) and the reflection formula.
#[derive(Debug, Clone, Copy)]
struct Origin {
    ai: f64,
    ai_prime: f64,
}

fn origin() -> &'static Origin {
    static ORIGIN: OnceLock<Origin> = OnceLock::new();
    ORIGIN.get_or_init(|| {
        let g13 = gamma(1.0 / 3.0);
        // Γ(1/3)Γ(2/3) = π / sin(π/3)
        let g23 = 2.0 * PI / (3f64.sqrt() * g13);
        Origin {
            ai: 3f64.powf(-2.0 / 3.0) / g23,
            ai_prime: -(3f64.powf(-1.0 / 3.0)) / g13,
        }
    })
}

/// Evaluate Ai, Bi, Ai′, Bi′ at a real argument u ≤ [`UNSCALED_U_MAX`].
pub fn airy_eval(u: f64) -> Result<AiryValues> {
    if !u.is_finite() || u > UNSCALED_U_MAX {
        return Err(Error::OutOfRange {
            what: "unscaled Airy evaluation",
            arg: u,
        });
    }
    if u.abs() <= SERIES_LIMIT {
        Ok(series(u))
    } else if u < -ASYMPTOTIC_LIMIT {
        Ok(asymptotic_negative(-u))
    } else if u < 0.0 {
        Ok(bessel_negative(-u))
    } else {
        Ok(positive_scaled(u).unscale())
    }
}

/// Exponent-scaled evaluation for u ≥ 0.
pub fn airy_eval_scaled(u: f64) -> Result<ScaledAiryValues> {
    if !u.is_finite() || u < 0.0 {
        return Err(Error::OutOfRange {
            what: "scaled Airy evaluation (u ≥ 0)",
            arg: u,
        });
    }
    if u <= SERIES_LIMIT {
        let v = series(u);
        let z = zeta(u);
        let (up, down) = (z.exp(), (-z).exp());
        Ok(ScaledAiryValues {
            ai: v.ai * up,
            bi: v.bi * down,
            ai_prime: v.ai_prime * up,
            bi_prime: v.bi_prime * down,
            zeta: z,
        })
    } else {
        Ok(positive_scaled(u))
    }
}

fn positive_scaled(u: f64) -> ScaledAiryValues {
    if u > ASYMPTOTIC_LIMIT {
        asymptotic_positive(u)
    } else {
        bessel_positive(u)
    }
}

/// Maclaurin series: Ai = c₁f − c₂g, Bi = √3(c₁f + c₂g).
fn series(u: f64) -> AiryValues {
    let o = origin();
    let u2 = u * u;
    let u3 = u2 * u;

    let (mut f, mut fp) = (1.0, 0.0);
    let (mut g, mut gp) = (u, 1.0);
    let mut tf = 1.0;
    let mut tg = u;
    for k in 1..60 {
        let k3 = 3.0 * k as f64;
        // f′ picks up t_{k−1}u²/(3k−1), g′ picks up s_{k−1}u²/(3k).
        let dfp = tf * u2 / (k3 - 1.0);
        let dgp = tg * u2 / k3;
        tf *= u3 / (k3 * (k3 - 1.0));
        tg *= u3 / ((k3 + 1.0) * k3);
        f += tf;
        fp += dfp;
        g += tg;
        gp += dgp;
        let small = |t: f64, s: f64| t.abs() <= EPS * s.abs().max(FPMIN);
        if small(tf, f) && small(tg, g) && small(dfp, fp) && small(dgp, gp) {
            break;
        }
    }

    let c1 = o.ai;
    let c2 = -o.ai_prime;
    let s3 = 3f64.sqrt();
    AiryValues {
        ai: c1 * f - c2 * g,
        bi: s3 * (c1 * f + c2 * g),
        ai_prime: c1 * fp - c2 * gp,
        bi_prime: s3 * (c1 * fp + c2 * gp),
    }
}

fn bessel_positive(u: f64) -> ScaledAiryValues {
    let z = zeta(u);
    let root = u.sqrt();
    let inv_s3 = 1.0 / 3f64.sqrt();
    let twice = (-2.0 * z).exp();
    let third = bessel_ik_scaled(z, 1.0 / 3.0);
    let two_thirds = bessel_ik_scaled(z, 2.0 / 3.0);
    ScaledAiryValues {
        ai: root * inv_s3 * third.k / PI,
        bi: root * (third.k * twice / PI + 2.0 * inv_s3 * third.i),
        ai_prime: -u * inv_s3 * two_thirds.k / PI,
        bi_prime: u * (two_thirds.k * twice / PI + 2.0 * inv_s3 * two_thirds.i),
        zeta: z,
    }
}

fn bessel_negative(x: f64) -> AiryValues {
    let z = zeta(x);
    let root = x.sqrt();
    let inv_s3 = 1.0 / 3f64.sqrt();
    let third = bessel_jy(z, 1.0 / 3.0);
    let two_thirds = bessel_jy(z, 2.0 / 3.0);
    AiryValues {
        ai: 0.5 * root * (third.j - inv_s3 * third.y),
        bi: -0.5 * root * (third.y + inv_s3 * third.j),
        ai_prime: 0.5 * x * (inv_s3 * two_thirds.y + two_thirds.j),
        bi_prime: 0.5 * x * (inv_s3 * two_thirds.j - two_thirds.y),
    }
}

/// Coefficients u_k, v_k of the large-argument expansions.
fn asymptotic_coefficients() -> &'static ([f64; 40], [f64; 40]) {
    static COEFFS: OnceLock<([f64; 40], [f64; 40])> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut u = [0.0; 40];
        let mut v = [0.0; 40];
        u[0] = 1.0;
        v[0] = 1.0;
        for k in 1..40 {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

/// Σ sign^k c_k / ζ^k, truncated at convergence or the smallest term.
fn asymptotic_sum(c: &[f64; 40], z: f64, alternating: bool) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        let sign = if alternating && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * ck * pow;
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() <= EPS * sum.abs() {
            break;
        }
        last = term.abs();
        pow /= z;
    }
    sum
}

fn asymptotic_positive(u: f64) -> ScaledAiryValues {
    let z = zeta(u);
    let (uc, vc) = asymptotic_coefficients();
    let q = u.powf(0.25);
    let sp = PI.sqrt();
    ScaledAiryValues {
        ai: asymptotic_sum(uc, z, true) / (2.0 * sp * q),
        bi: asymptotic_sum(uc, z, false) / (sp * q),
        ai_prime: -q * asymptotic_sum(vc, z, true) / (2.0 * sp),
        bi_prime: q * asymptotic_sum(vc, z, false) / sp,
        zeta: z,
    }
}

/// Even and odd parts Σ(−1)^k c_{2k}/ζ^{2k}, Σ(−1)^k c_{2k+1}/ζ^{2k+1}.
fn oscillatory_sums(c: &[f64; 40], z: f64) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        let sign = if (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * ck * pow;
        if term.abs() > last {
            break;
        }
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
        if term.abs() <= EPS * even.abs() {
            break;
        }
        last = term.abs();
        pow /= z;
    }
    (even, odd)
}

fn asymptotic_negative(x: f64) -> AiryValues {
    let z = zeta(x);
    let (uc, vc) = asymptotic_coefficients();
    let (pu, qu) = oscillatory_sums(uc, z);
    let (pv, qv) = oscillatory_sums(vc, z);
    let chi = z - PI / 4.0;
    let (s, c) = chi.sin_cos();
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    AiryValues {
        ai: (c * pu + s * qu) / (sp * q),
        bi: (c * qu - s * pu) / (sp * q),
        ai_prime: q * (s * pv - c * qv) / sp,
        bi_prime: q * (c * pv + s * qv) / sp,
    }
}

struct ScaledIk {
    i: f64,
    k: f64,
}

/// I_ν(x)e^{−x} and K_ν(x)e^{x} for x ≥ 2, 0 ≤ ν < 1.5.
///
/// CF1 for I′/I, Steed's CF2 for K (Temme's normalization), Wronskian for I.
fn bessel_ik_scaled(x: f64, nu: f64) -> ScaledIk {
    debug_assert!(x >= 2.0 && nu >= 0.0);
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAXIT {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let mut rkmu = (PI / (2.0 * x)).sqrt() / s;
    let mut rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    for i in 1..=nl {
        let rktemp = (xmu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    ScaledIk { i: ri, k: rkmu }
}

struct Jy {
    j: f64,
    y: f64,
}

/// J_ν(x), Y_ν(x) for x ≥ 2 by Steed's method (CF1 + complex CF2).
fn bessel_jy(x: f64, nu: f64) -> Jy {
    debug_assert!(x >= 2.0 && nu >= 0.0);
    let nl = ((nu - x + 1.5) as i64).max(0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;
    let j = rjl1 * (rjmu / rjl);
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    Jy { j, y: rymu }
}

/// Integrate y″ = u·y from `u_from` to `u_to` with an adaptive
/// Dormand–Prince 5(4) scheme at relative tolerance 1e−10.
pub fn ode_reference(u_from: f64, u_to: f64, y0: f64, y0_prime: f64) -> Result<(f64, f64)> {
    ode_reference_with_tolerance(u_from, u_to, y0, y0_prime, 1e-10)
}

pub fn ode_reference_with_tolerance(
    u_from: f64,
    u_to: f64,
    y0: f64,
    y0_prime: f64,
    rtol: f64,
) -> Result<(f64, f64)> {
    integrate_linear(u_from, u_to, [y0, y0_prime], rtol, |u| u)
}

/// Adaptive DP5(4) for y″ = w(u)·y, shared with the scattering module's
/// wavefunction checks.
pub(crate) fn integrate_linear(
    from: f64,
    to: f64,
    init: [f64; 2],
    rtol: f64,
    weight: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::invalid("ODE interval must be finite"));
    }
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let span = to - from;
    if span == 0.0 {
        return Ok((init[0], init[1]));
    }
    let dir = span.signum();
    let rhs = |u: f64, y: [f64; 2]| [y[1], weight(u) * y[0]];

    let mut u = from;
    let mut y = init;
    let mut h = dir * (span.abs() / 100.0).min(0.01);
    let min_step = 1e-14 * span.abs().max(1.0);

    while (to - u) * dir > 0.0 {
        if (u + h - to) * dir > 0.0 {
            h = to - u;
        }
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = rhs(u + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut err = [0.0; 2];
        for s in 0..7 {
            for c in 0..2 {
                y5[c] += h * B5[s] * k[s][c];
                err[c] += h * (B5[s] - B4[s]) * k[s][c];
            }
        }
        let scale = |c: usize| rtol * y[c].abs().max(y5[c].abs()) + 1e-300;
        let ratio = (err[0].abs() / scale(0)).max(err[1].abs() / scale(1));
        if ratio <= 1.0 || !ratio.is_finite() && err[0] == 0.0 && err[1] == 0.0 {
            u += h;
            y = y5;
        }
        let factor = if ratio == 0.0 || !ratio.is_finite() {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < min_step {
            return Err(Error::StepUnderflow { at: u });
        }
    }
    Ok((y[0], y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn origin_values_from_gamma() {
        let v = airy_eval(0.0).unwrap();
        assert!((v.ai - 0.355_028_053_887_817_2).abs() < 1e-15);
        assert!((v.bi - 0.614_926_627_446_000_7).abs() < 1e-15);
        assert!((v.ai_prime + 0.258_819_403_792_806_8).abs() < 1e-15);
        assert!((v.bi_prime - 0.448_288_357_353_826_4).abs() < 1e-15);
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(5.0), 24.0) < 1e-14);
        assert!(rel(gamma(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.0 / 3.0), 2.678_938_534_707_747_6) < 1e-14);
    }

    #[test]
    fn first_zero_of_ai() {
        // Bisection on the evaluated function brackets the zero.
        let (mut lo, mut hi) = (-2.4, -2.3);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if airy_eval(mid).unwrap().ai > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo + 2.338_107_410_459_767).abs() < 1e-12);
        assert!(airy_eval(-2.338_107_41).unwrap().ai.abs() < 1e-8);
    }

    #[test]
    fn known_values() {
        // Reference values to 16 digits (DLMF tables).
        let v = airy_eval(1.0).unwrap();
        assert!(rel(v.ai, 0.135_292_416_312_881_4) < 1e-13);
        assert!(rel(v.bi, 1.207_423_594_952_871_3) < 1e-13);
        let v = airy_eval(5.0).unwrap();
        assert!(rel(v.ai, 1.083_444_281_360_744e-4) < 1e-12);
        assert!(rel(v.bi, 657.792_044_171_171_9) < 1e-12);
        let v = airy_eval(-5.0).unwrap();
        assert!(rel(v.ai, 0.350_761_009_024_114_2) < 1e-12);
        assert!(rel(v.bi, -0.138_369_134_901_600_6) < 1e-11);
        let v = airy_eval(10.0).unwrap();
        assert!(rel(v.ai, 1.104_753_255_289_868_7e-10) < 1e-12);
    }

    #[test]
    fn wronskian_at_five() {
        assert!(rel(airy_eval(5.0).unwrap().wronskian(), 1.0 / PI) < 1e-12);
    }

    #[test]
    fn range_errors() {
        assert!(airy_eval(30.5).is_err());
        assert!(airy_eval(f64::NAN).is_err());
        assert!(airy_eval(-1e4).is_ok());
        assert!(airy_eval_scaled(-0.1).is_err());
    }

    #[test]
    fn scaled_at_zero_matches_unscaled() {
        let s = airy_eval_scaled(0.0).unwrap();
        let v = airy_eval(0.0).unwrap();
        assert_eq!(s.zeta, 0.0);
        assert_eq!((s.ai, s.bi, s.ai_prime, s.bi_prime), (v.ai, v.bi, v.ai_prime, v.bi_prime));
    }

    #[test]
    fn scaled_unscales_to_direct() {
        for i in 0..=300 {
            let u = i as f64 * 0.1;
            let s = airy_eval_scaled(u).unwrap().unscale();
            let v = airy_eval(u).unwrap();
            assert!(rel(s.ai, v.ai) < 1e-10, "u={u}");
            assert!(rel(s.bi, v.bi) < 1e-10, "u={u}");
            assert!(rel(s.ai_prime, v.ai_prime) < 1e-10, "u={u}");
            assert!(rel(s.bi_prime, v.bi_prime) < 1e-10, "u={u}");
        }
    }

    #[test]
    fn scaled_at_ten_matches_ode() {
        // Tabulated Ai(10).
        let s = airy_eval_scaled(10.0).unwrap();
        let ai = s.ai * (-s.zeta).exp();
        assert!(rel(ai, 1.104_753_255_289_868_7e-10) < 1e-10);
    }

    #[test]
    fn scaled_mantissas_bounded_and_wronskian() {
        for i in 0..=2000 {
            let u = i as f64 * 0.1;
            let s = airy_eval_scaled(u).unwrap();
            assert!(rel(s.wronskian(), 1.0 / PI) < 1e-10, "u={u}");
            for m in [s.ai, s.bi, s.ai_prime.abs(), s.bi_prime] {
                assert!((1e-3..=1e3).contains(&m.abs()) || u == 0.0, "u={u} m={m}");
            }
        }
    }

    #[test]
    fn monotone_for_positive_argument() {
        let mut prev = airy_eval(0.0).unwrap();
        for i in 1..=600 {
            let v = airy_eval(i as f64 * 0.05).unwrap();
            assert!(v.ai > 0.0 && v.ai < prev.ai);
            assert!(v.bi > prev.bi);
            prev = v;
        }
    }

    #[test]
    fn branch_overlap_windows() {
        for &centre in &[-10.0, -3.0, 3.0, 10.0] {
            for i in 0..=100 {
                let u: f64 = centre - 0.5 + i as f64 * 0.01;
                let (a, b) = if centre.abs() == 3.0 {
                    let b = if u < 0.0 { bessel_negative(-u) } else { bessel_positive(u).unscale() };
                    (series(u), b)
                } else if u < 0.0 {
                    (bessel_negative(-u), asymptotic_negative(-u))
                } else {
                    (bessel_positive(u).unscale(), asymptotic_positive(u).unscale())
                };
                let scale_a = a.ai.hypot(a.bi);
                let scale_d = a.ai_prime.hypot(a.bi_prime);
                assert!((a.ai - b.ai).abs() <= 1e-9 * if u > 0.0 { a.ai.abs() } else { scale_a }, "ai u={u}");
                assert!((a.bi - b.bi).abs() <= 1e-9 * scale_a, "bi u={u}");
                assert!((a.ai_prime - b.ai_prime).abs() <= 1e-9 * if u > 0.0 { a.ai_prime.abs() } else { scale_d }, "ai' u={u}");
                assert!((a.bi_prime - b.bi_prime).abs() <= 1e-9 * scale_d, "bi' u={u}");
            }
        }
    }

    #[test]
    fn ode_reference_examples() {
        let o = airy_eval(0.0).unwrap();
        let (y, _) = ode_reference(0.0, 1.0, o.ai, o.ai_prime).unwrap();
        assert!((y - 0.135_292_416_3).abs() < 1e-9);

        let (y, _) = ode_reference(0.0, -5.0, o.bi, o.bi_prime).unwrap();
        assert!((y - airy_eval(-5.0).unwrap().bi).abs() < 1e-8);

        assert_eq!(ode_reference(0.0, 3.0, 0.0, 0.0).unwrap(), (0.0, 0.0));
    }
}
