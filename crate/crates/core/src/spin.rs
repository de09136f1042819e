//! Three-spin channel basis (electron, impurity 1, impurity 2) and the
//! Heisenberg exchange operators Ŝₑ·Ŝᵢ restricted to a fixed-m_T subspace.
//!
//! [`exchange_matrix`] works directly on product-state labels with the ladder
//! form SᶻSᶻ + ½(S⁺S⁻ + S⁻S⁺). [`full_space_oracle`] builds the same operator
//! from Kronecker products of Pauli matrices on (C²)⊗³ and is used to check it.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Sᶻ eigenvalue in units of ħ.
    pub fn sz(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    fn arrow(self) -> char {
        match self {
            Spin::Up => '↑',
            Spin::Down => '↓',
        }
    }
}

/// Product state |sₑ s₁ s₂⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinLabel {
    pub electron: Spin,
    pub impurity1: Spin,
    pub impurity2: Spin,
}

impl SpinLabel {
    pub const fn new(electron: Spin, impurity1: Spin, impurity2: Spin) -> Self {
        Self {
            electron,
            impurity1,
            impurity2,
        }
    }

    pub fn total_sz(&self) -> f64 {
        self.electron.sz() + self.impurity1.sz() + self.impurity2.sz()
    }

    pub fn flipped(&self) -> Self {
        Self::new(
            self.electron.flipped(),
            self.impurity1.flipped(),
            self.impurity2.flipped(),
        )
    }

    pub fn impurity(&self, which: Impurity) -> Spin {
        match which {
            Impurity::First => self.impurity1,
            Impurity::Second => self.impurity2,
        }
    }

    fn with_impurity(mut self, which: Impurity, s: Spin) -> Self {
        match which {
            Impurity::First => self.impurity1 = s,
            Impurity::Second => self.impurity2 = s,
        }
        self
    }

    /// Index into the 8-dimensional product space, electron as the most
    /// significant factor and ↑ before ↓.
    pub fn product_index(&self) -> usize {
        (self.electron.bit() << 2) | (self.impurity1.bit() << 1) | self.impurity2.bit()
    }

    /// Index of the impurity pair in the two-qubit basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
    pub fn impurity_index(&self) -> usize {
        (self.impurity1.bit() << 1) | self.impurity2.bit()
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|{}{}{}⟩",
            self.electron.arrow(),
            self.impurity1.arrow(),
            self.impurity2.arrow()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Impurity {
    First,
    Second,
}

impl Impurity {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Impurity::First),
            2 => Ok(Impurity::Second),
            _ => Err(Error::invalid(format!(
                "impurity index must be 1 or 2, got {i}"
            ))),
        }
    }
}

/// Total spin projection of the three-spin system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    /// m_T = +1/2
    PlusHalf,
    /// m_T = −1/2
    MinusHalf,
}

impl Subspace {
    pub fn m_total(self) -> f64 {
        match self {
            Subspace::PlusHalf => 0.5,
            Subspace::MinusHalf => -0.5,
        }
    }
}

/// Ordered channel basis j = 1, 2, 3. For m_T = +1/2 the order is
/// |↑↑↓⟩, |↑↓↑⟩, |↓↑↑⟩; the mirrored basis flips every arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinChannelBasis {
    subspace: Subspace,
    labels: [SpinLabel; 3],
}

impl SpinChannelBasis {
    pub fn standard() -> Self {
        use Spin::{Down, Up};
        Self {
            subspace: Subspace::PlusHalf,
            labels: [
                SpinLabel::new(Up, Up, Down),
                SpinLabel::new(Up, Down, Up),
                SpinLabel::new(Down, Up, Up),
            ],
        }
    }

    pub fn for_subspace(subspace: Subspace) -> Self {
        match subspace {
            Subspace::PlusHalf => Self::standard(),
            Subspace::MinusHalf => mirror_basis(&Self::standard()),
        }
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn labels(&self) -> &[SpinLabel; 3] {
        &self.labels
    }

    /// Zero-based position of a label, if it belongs to the basis.
    pub fn position(&self, label: &SpinLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl Default for SpinChannelBasis {
    fn default() -> Self {
        Self::standard()
    }
}

/// Global spin flip of every basis label (m_T → −m_T), order preserved.
pub fn mirror_basis(basis: &SpinChannelBasis) -> SpinChannelBasis {
    SpinChannelBasis {
        subspace: match basis.subspace {
            Subspace::PlusHalf => Subspace::MinusHalf,
            Subspace::MinusHalf => Subspace::PlusHalf,
        },
        labels: basis.labels.map(|l| l.flipped()),
    }
}

/// Ŝₑ·Ŝᵢ restricted to a three-channel basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeMatrix {
    pub impurity: Impurity,
    pub entries: [[f64; 3]; 3],
}

impl ExchangeMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn apply(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        std::array::from_fn(|j| (0..3).map(|l| v[l] * self.entries[j][l]).sum())
    }
}

/// Matrix of Ŝₑ·Ŝᵢ between the basis labels, evaluated with ladder operators.
pub fn exchange_matrix(impurity: Impurity, basis: &SpinChannelBasis) -> ExchangeMatrix {
    let mut entries = [[0.0; 3]; 3];
    for (col, label) in basis.labels.iter().enumerate() {
        let se = label.electron;
        let si = label.impurity(impurity);
        entries[col][col] += se.sz() * si.sz();
        if se != si {
            // ½(S⁺S⁻ + S⁻S⁺) swaps antiparallel spins with amplitude ½.
            let swapped = SpinLabel {
                electron: si,
                ..label.with_impurity(impurity, se)
            };
            let row = basis
                .position(&swapped)
                .expect("exchange conserves total Sz, so the swapped label stays in the basis");
            entries[row][col] += 0.5;
        }
    }
    ExchangeMatrix { impurity, entries }
}

/// Dense operator on the 8-dimensional three-spin product space.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSpaceOperator {
    pub entries: [[f64; 8]; 8],
}

impl FullSpaceOperator {
    pub fn trace(&self) -> f64 {
        (0..8).map(|i| self.entries[i][i]).sum()
    }

    pub fn matmul(&self, other: &FullSpaceOperator) -> FullSpaceOperator {
        let mut entries = [[0.0; 8]; 8];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..8).map(|k| self.entries[i][k] * other.entries[k][j]).sum();
            }
        }
        FullSpaceOperator { entries }
    }
}

/// Unprojected Ŝₑ·Ŝᵢ together with the 8×3 isometry onto a channel basis.
#[derive(Debug, Clone)]
pub struct FullSpaceOracle {
    pub operator: FullSpaceOperator,
    pub isometry: [[f64; 3]; 8],
}

impl FullSpaceOracle {
    /// Pᵀ O P.
    pub fn projected(&self) -> [[f64; 3]; 3] {
        let p = &self.isometry;
        let o = &self.operator.entries;
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = 0.0;
                for i in 0..8 {
                    for j in 0..8 {
                        s += p[i][a] * o[i][j] * p[j][b];
                    }
                }
                s
            })
        })
    }
}

type C2 = [[Complex64; 2]; 2];

fn pauli() -> [C2; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[z, one], [one, z]],
        [[z, -i], [i, z]],
        [[one, z], [z, -one]],
    ]
}

fn kron3(a: &C2, b: &C2, c: &C2) -> [[Complex64; 8]; 8] {
    let mut out = [[Complex64::new(0.0, 0.0); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            out[i][j] = a[i >> 2][j >> 2] * b[(i >> 1) & 1][(j >> 1) & 1] * c[i & 1][j & 1];
        }
    }
    out
}

/// Σₐ (σₐ/2)ₑ ⊗ (σₐ/2)ᵢ on (C²)⊗³ plus the isometry onto `basis`.
pub fn full_space_oracle(impurity: Impurity, basis: &SpinChannelBasis) -> FullSpaceOracle {
    let id: C2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let mut acc = [[Complex64::new(0.0, 0.0); 8]; 8];
    for s in pauli().iter() {
        let half: C2 = s.map(|row| row.map(|v| v * 0.5));
        let term = match impurity {
            Impurity::First => kron3(&half, &half, &id),
            Impurity::Second => kron3(&half, &id, &half),
        };
        for i in 0..8 {
            for j in 0..8 {
                acc[i][j] += term[i][j];
            }
        }
    }
    let entries = acc.map(|row| {
        row.map(|v| {
            debug_assert!(v.im == 0.0);
            v.re
        })
    });
    let mut isometry = [[0.0; 3]; 8];
    for (col, label) in basis.labels.iter().enumerate() {
        isometry[label.product_index()][col] = 1.0;
    }
    FullSpaceOracle {
        operator: FullSpaceOperator { entries },
        isometry,
    }
}

/// Total Sᶻ on the product space.
pub fn total_sz_operator() -> FullSpaceOperator {
    let mut entries = [[0.0; 8]; 8];
    for e in [Spin::Up, Spin::Down] {
        for a in [Spin::Up, Spin::Down] {
            for b in [Spin::Up, Spin::Down] {
                let l = SpinLabel::new(e, a, b);
                entries[l.product_index()][l.product_index()] = l.total_sz();
            }
        }
    }
    FullSpaceOperator { entries }
}

/// Amplitudes aⱼ of the incoming electron-impurity spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncomingSpinor {
    amplitudes: [Complex64; 3],
}

impl IncomingSpinor {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(amplitudes: [Complex64; 3]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::invalid(format!(
                "incoming spinor must be normalized, got Σ|a|² = {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Unnormalized amplitudes; only meaningful for linearity checks.
    pub fn unnormalized(amplitudes: [Complex64; 3]) -> Self {
        Self { amplitudes }
    }

    /// Pure channel state, zero-based index.
    pub fn channel(j: usize) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); 3];
        amplitudes[j] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 3] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_channel(&self, j: usize) -> bool {
        self.amplitudes
            .iter()
            .enumerate()
            .all(|(i, a)| if i == j { (a.norm() - 1.0).abs() < 1e-12 } else { *a == Complex64::new(0.0, 0.0) })
    }
}

impl Default for IncomingSpinor {
    /// |↓↑↑⟩, the third channel.
    fn default() -> Self {
        Self::channel(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
    }

    #[test]
    fn exchange_matrix_first_impurity() {
        let m = exchange_matrix(Impurity::First, &SpinChannelBasis::standard());
        assert_eq!(
            m.entries,
            [[0.25, 0.0, 0.0], [0.0, -0.25, 0.5], [0.0, 0.5, -0.25]]
        );
    }

    #[test]
    fn exchange_matrix_second_impurity() {
        let m = exchange_matrix(Impurity::Second, &SpinChannelBasis::standard());
        assert_eq!(
            m.entries,
            [[-0.25, 0.0, 0.5], [0.0, 0.25, 0.0], [0.5, 0.0, -0.25]]
        );
    }

    #[test]
    fn projection_matches_ladder_construction() {
        for basis in [SpinChannelBasis::standard(), mirror_basis(&SpinChannelBasis::standard())] {
            for imp in [Impurity::First, Impurity::Second] {
                let oracle = full_space_oracle(imp, &basis);
                assert_eq!(oracle.projected(), exchange_matrix(imp, &basis).entries);
            }
        }
    }

    #[test]
    fn full_space_operator_is_traceless_and_conserves_sz() {
        let sz = total_sz_operator();
        for imp in [Impurity::First, Impurity::Second] {
            let o = full_space_oracle(imp, &SpinChannelBasis::standard()).operator;
            assert_eq!(o.trace(), 0.0);
            let a = o.matmul(&sz);
            let b = sz.matmul(&o);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn triplet_singlet_structure() {
        // (M − ¼)(M + ¾) = 0 for both impurities.
        for imp in [Impurity::First, Impurity::Second] {
            let m = exchange_matrix(imp, &SpinChannelBasis::standard()).entries;
            let mut a = m;
            let mut b = m;
            for i in 0..3 {
                a[i][i] -= 0.25;
                b[i][i] += 0.75;
            }
            assert_eq!(matmul3(&a, &b), [[0.0; 3]; 3]);
            // Trace 1/4 + 1/4 − 3/4 and Tr M² = 1/16 + 1/16 + 9/16.
            let tr: f64 = (0..3).map(|i| m[i][i]).sum();
            let tr2: f64 = (0..3).map(|i| matmul3(&m, &m)[i][i]).sum();
            assert_eq!(tr, -0.25);
            assert_eq!(tr2, 11.0 / 16.0);
        }
    }

    #[test]
    fn impurity_relabeling_symmetry() {
        let basis = SpinChannelBasis::standard();
        let m1 = exchange_matrix(Impurity::First, &basis).entries;
        let m2 = exchange_matrix(Impurity::Second, &basis).entries;
        let p = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(matmul3(&matmul3(&p, &m1), &p), m2);
    }

    #[test]
    fn mirror_basis_properties() {
        let basis = SpinChannelBasis::standard();
        let mirrored = mirror_basis(&basis);
        assert_eq!(mirrored.subspace(), Subspace::MinusHalf);
        assert_eq!(mirrored.labels()[2].to_string(), "|↑↓↓⟩");
        assert_eq!(mirror_basis(&mirrored), basis);
        for l in mirrored.labels() {
            assert_eq!(l.total_sz(), -0.5);
        }
        for imp in [Impurity::First, Impurity::Second] {
            assert_eq!(exchange_matrix(imp, &mirrored), exchange_matrix(imp, &basis));
        }
    }

    #[test]
    fn basis_labels_have_fixed_total_sz() {
        let basis = SpinChannelBasis::standard();
        let names: Vec<_> = basis.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(names, ["|↑↑↓⟩", "|↑↓↑⟩", "|↓↑↑⟩"]);
        for l in basis.labels() {
            assert_eq!(l.total_sz(), 0.5);
        }
    }

    #[test]
    fn invalid_impurity_index() {
        assert!(Impurity::from_index(0).is_err());
        assert!(Impurity::from_index(3).is_err());
        assert_eq!(Impurity::from_index(2).unwrap(), Impurity::Second);
    }

    #[test]
    fn incoming_spinor_normalization() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(IncomingSpinor::new([
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, 0.0)
        ])
        .is_ok());
        assert!(IncomingSpinor::new([Complex64::new(1.0, 0.0); 3]).is_err());
        assert!(IncomingSpinor::default().is_channel(2));
    }
}
