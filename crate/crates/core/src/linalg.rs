//! Small dense complex linear algebra.
//!
//! Sizes here are tiny (the boundary-matching system is 12×12, density
//! matrices 4×4), so everything is a straightforward row-major `Vec`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Pivots below this magnitude are treated as exact zeros.
pub const SINGULAR_PIVOT: f64 = 1e-300;

/// Square dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Panics unless every row has `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    /// Determinant by LU (no equilibration); used by tests and diagnostics.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = C1;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap();
            if a[(p, k)] == C0 {
                return C0;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                }
                det = -det;
            }
            let piv = a[(k, k)];
            det *= piv;
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>12.5e}{:+.5e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Row-equilibrated LU factors with partial pivoting: P·D·A = L·U.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
    row_scale: Vec<f64>,
}

impl LuFactors {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let n = a.dim();
        if !a.is_finite() {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let mut lu = a.clone();
        let mut row_scale = vec![1.0; n];
        for (i, s) in row_scale.iter_mut().enumerate() {
            let norm = lu.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if norm < SINGULAR_PIVOT {
                return Err(Error::Singular {
                    column: i,
                    pivot: norm,
                });
            }
            *s = 1.0 / norm;
            for j in 0..n {
                lu[(i, j)] *= *s;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[(x, k)].norm().total_cmp(&lu[(y, k)].norm()))
                .unwrap();
            let pivot = lu[(p, k)].norm();
            if pivot < SINGULAR_PIVOT {
                return Err(Error::Singular { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(p * n + j, k * n + j);
                }
                perm.swap(p, k);
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f == C0 {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            row_scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side is not conformable");
        let mut x: Vec<Complex64> = self
            .perm
            .iter()
            .map(|&src| b[src] * self.row_scale[src])
            .collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// A⁻¹ from the stored factors.
    pub fn inverse(&self) -> CMatrix {
        let n = self.dim();
        let mut inv = CMatrix::zeros(n);
        let mut e = vec![C0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = C0);
            e[j] = C1;
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }

    /// κ∞ of the row-equilibrated matrix D·A that was actually factored.
    /// Its rows have unit ∞-norm up to a factor n, so this is ‖(DA)⁻¹‖∞·‖DA‖∞.
    pub fn equilibrated_condition(&self, a: &CMatrix) -> f64 {
        let n = self.dim();
        let mut da = a.clone();
        for i in 0..n {
            for j in 0..n {
                da[(i, j)] *= self.row_scale[i];
            }
        }
        let inv_da = {
            let mut inv = self.inverse();
            // (DA)⁻¹ = A⁻¹ D⁻¹
            for i in 0..n {
                for j in 0..n {
                    inv[(i, j)] /= self.row_scale[j];
                }
            }
            inv
        };
        da.norm_inf() * inv_da.norm_inf()
    }
}

/// Solve A·x = b with row equilibration and partial pivoting.
pub fn lu_solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if b.len() != a.dim() {
        return Err(Error::invalid(format!(
            "right-hand side has length {}, matrix is {}x{}",
            b.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(LuFactors::new(a)?.solve(b))
}

/// κ∞(A) = ‖A‖∞·‖A⁻¹‖∞, with the inverse formed explicitly from the LU
/// factors. Exact up to rounding for the small systems used here.
pub fn condition_estimate(a: &CMatrix) -> Result<f64> {
    let f = LuFactors::new(a)?;
    Ok(a.norm_inf() * f.inverse().norm_inf())
}

/// Eigenvalues (descending) and column eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. The input is symmetrized as (H + H†)/2 first.
pub fn hermitian_eigen(h: &CMatrix) -> HermitianEigen {
    let n = h.dim();
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = 0.5 * (h[(i, j)] + h[(j, i)].conj());
        }
    }
    let mut v = CMatrix::identity(n);
    let frob: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = f64::EPSILON * 1e-2 * frob;

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_c = phase.conj();

                // Columns: A ← A·U with U = [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]].
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph_c * s;
                    a[(k, q)] = akp * s + akq * ph_c * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * ph_c * s;
                    v[(k, q)] = vkp * s + vkq * ph_c * c;
                }
                // Rows: A ← U†·A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = C0;
                a[(q, p)] = C0;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    HermitianEigen { values, vectors }
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    hermitian_eigen(h).values
}

/// Eigenvalues above this are clamped to zero; below is an error.
pub const PSD_CLAMP: f64 = -1e-12;
pub const PSD_REJECT: f64 = -1e-8;

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn psd_sqrt(h: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(h);
    let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < PSD_REJECT {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let n = h.dim();
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let mut s = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = (0..n)
                .map(|k| eig.vectors[(i, k)] * roots[k] * eig.vectors[(j, k)].conj())
                .sum();
        }
    }
    // Enforce exact Hermitian symmetry.
    for i in 0..n {
        s[(i, i)].im = 0.0;
        for j in 0..i {
            let avg = 0.5 * (s[(i, j)] + s[(j, i)].conj());
            s[(i, j)] = avg;
            s[(j, i)] = avg.conj();
        }
    }
    Ok(s)
}

/// Singular values (descending) of a square complex matrix, read off as the
/// non-negative eigenvalues of the Hermitian dilation [[0, T], [T†, 0]].
/// Small singular values keep absolute accuracy ~ε‖T‖, unlike √eig(T†T).
pub fn singular_values(t: &CMatrix) -> Vec<f64> {
    let n = t.dim();
    let mut d = CMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            d[(i, n + j)] = t[(i, j)];
            d[(n + j, i)] = t[(i, j)].conj();
        }
    }
    let mut s: Vec<f64> = hermitian_eigenvalues(&d).into_iter().take(n).map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let m = random_matrix(rng, n);
        let mut h = &m + &m.adjoint();
        h = h.scale(0.5);
        h
    }

    impl std::ops::Add for &CMatrix {
        type Output = CMatrix;
        fn add(self, rhs: &CMatrix) -> CMatrix {
            CMatrix {
                n: self.n,
                data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            }
        }
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0)];
        assert_eq!(lu_solve(&CMatrix::identity(3), &b).unwrap(), b);

        let a = CMatrix::from_diagonal(&[c(2.0, 0.0), c(0.0, 4.0)]);
        let x = lu_solve(&a, &[c(2.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn recovers_known_solution_of_random_12x12() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut a = random_matrix(&mut rng, 12);
            for i in 0..12 {
                a[(i, i)] += c(6.0, 0.0);
            }
            let x: Vec<_> = (0..12).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let b = a.mul_vec(&x);
            let got = lu_solve(&a, &b).unwrap();
            let err = got.iter().zip(&x).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            let xmax = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err <= 1e-10 * xmax);
            let res = a.mul_vec(&got);
            let r = res.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            let bmax = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(r <= 1e-10 * (a.norm_inf() * xmax + bmax));
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(matches!(lu_solve(&a, &[c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::Singular { .. })));
        assert!(lu_solve(&a, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn condition_of_simple_matrices() {
        assert!((condition_estimate(&CMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-14);
        let k = condition_estimate(&CMatrix::from_real_diagonal(&[1.0, 1e-8])).unwrap();
        assert!((1e7..=1e9).contains(&k));
    }

    #[test]
    fn eigenvalues_of_diagonal_and_identity() {
        assert_eq!(hermitian_eigenvalues(&CMatrix::identity(4)), vec![1.0; 4]);
        let h = CMatrix::from_real_diagonal(&[2.0, 4.0, 1.0, 3.0]);
        assert_eq!(hermitian_eigenvalues(&h), vec![4.0, 3.0, 2.0, 1.0]);
    }

    /// Roots of the characteristic polynomial by Newton deflation with the
    /// coefficients from Faddeev–LeVerrier; independent of the Jacobi path.
    fn charpoly_roots(h: &CMatrix) -> Vec<f64> {
        let n = h.dim();
        let mut coeffs = vec![C1]; // monic: λⁿ + c₁λⁿ⁻¹ + …
        let mut m = CMatrix::identity(n);
        for k in 1..=n {
            let am = h * &m;
            let ck = -am.trace() / k as f64;
            coeffs.push(ck);
            m = am;
            for i in 0..n {
                m[(i, i)] += ck;
            }
        }
        let mut poly: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
        let mut roots = Vec::new();
        let bound = 1.0 + poly.iter().skip(1).map(|x| x.abs()).fold(0.0, f64::max);
        while poly.len() > 1 {
            let eval = |p: &[f64], x: f64| {
                p.iter().fold((0.0, 0.0), |(v, d), &a| (v * x + a, d * x + v))
            };
            // Largest root: start above the Cauchy bound, Newton decreases monotonically.
            let mut x = bound;
            for _ in 0..500 {
                let (v, d) = eval(&poly, x);
                if d == 0.0 {
                    break;
                }
                let step = v / d;
                x -= step;
                if step.abs() < 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            roots.push(x);
            let mut q = Vec::with_capacity(poly.len() - 1);
            let mut acc = 0.0;
            for &a in &poly[..poly.len() - 1] {
                acc = acc * x + a;
                q.push(acc);
            }
            poly = q;
        }
        roots
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 4);
            let ev = hermitian_eigenvalues(&h);
            let roots = charpoly_roots(&h);
            for (a, b) in ev.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-9, "{ev:?} vs {roots:?}");
            }
        }
    }

    #[test]
    fn eigen_reconstruction_trace_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 4, 8] {
            for _ in 0..20 {
                let h = random_hermitian(&mut rng, n);
                let e = hermitian_eigen(&h);
                let d = CMatrix::from_real_diagonal(&e.values);
                let rec = &(&e.vectors * &d) * &e.vectors.adjoint();
                assert!(rec.max_abs_diff(&h) < 1e-11);
                let sum: f64 = e.values.iter().sum();
                assert!((sum - h.trace().re).abs() < 1e-11);
                let prod: f64 = e.values.iter().product();
                let det = h.determinant().re;
                assert!((prod - det).abs() <= 1e-9 * det.abs().max(1e-3));
                assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert!(psd_sqrt(&CMatrix::identity(4)).unwrap().max_abs_diff(&CMatrix::identity(4)) < 1e-15);
        let s = psd_sqrt(&CMatrix::from_real_diagonal(&[4.0, 9.0, 0.0, 1.0])).unwrap();
        assert!(s.max_abs_diff(&CMatrix::from_real_diagonal(&[2.0, 3.0, 0.0, 1.0])) < 1e-15);
        let neg = CMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPositiveSemidefinite { .. })));
        assert!(psd_sqrt(&CMatrix::from_real_diagonal(&[1.0, -1e-13])).is_ok());
    }

    #[test]
    fn sqrt_of_pure_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let psi: Vec<_> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mut rho = CMatrix::zeros(4);
            for i in 0..4 {
                for j in 0..4 {
                    rho[(i, j)] = psi[i] * psi[j].conj() / (norm * norm);
                }
            }
            let s = psd_sqrt(&rho).unwrap();
            assert!((&s * &s).max_abs_diff(&rho) < 1e-10);
            assert!(s.is_hermitian(0.0));
        }
    }

    #[test]
    fn sqrt_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 4);
            let h = &m * &m.adjoint();
            let s = psd_sqrt(&h).unwrap();
            for cval in [0.5, 2.0, 3.0] {
                let s2 = psd_sqrt(&h.scale(cval * cval)).unwrap();
                assert!(s2.max_abs_diff(&s.scale(cval)) < 1e-11);
            }
        }
    }

    #[test]
    fn singular_values_of_diagonal_and_rank_one() {
        let t = CMatrix::from_diagonal(&[c(0.0, -3.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let s = singular_values(&t);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14 && s[2].abs() < 1e-14);
    }
}
