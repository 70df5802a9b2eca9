//! Superqubit states, UOSp(1|2) group elements and Grassmann-valued
//! transition probabilities.
//!
//! Basis storage order is `(•, 0, 1)`; `|•⟩` is odd, `|0⟩` and `|1⟩` are even.
//! Coefficients are written to the left of basis kets. An operator acts on a
//! coefficient column by ordinary matrix multiplication with its entries
//! placed to the left of the coefficients (`c' = Z·c`). For two superqubits
//! Alice's matrix is applied first, then Bob's, each on the left of the
//! current coefficient.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::HilbertError;
use crate::grassmann::{Generator, Parity, Party, Supernumber};

/// Tolerance on `|α|² + |β|² = 1` for [`superqubit_state`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Coefficients at or below this modulus are ignored when checking gradings.
pub const GRADING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    Dot,
    Zero,
    One,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 3] = [BasisLabel::Dot, BasisLabel::Zero, BasisLabel::One];

    pub fn index(self) -> usize {
        match self {
            BasisLabel::Dot => 0,
            BasisLabel::Zero => 1,
            BasisLabel::One => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// 1 for the odd ket `|•⟩`, 0 otherwise.
    pub fn grade(self) -> u8 {
        matches!(self, BasisLabel::Dot) as u8
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BasisLabel::Dot => "•",
            BasisLabel::Zero => "0",
            BasisLabel::One => "1",
        }
    }
}

fn grade(i: usize) -> u8 {
    (i == 0) as u8
}

/// How `U(angle)` realizes `(α, β)`. The game uses [`AngleConvention::FROZEN`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleConvention {
    /// `α = cos a`, `β = sin a`.
    Full,
    /// `α = cos a`, `β = -sin a`.
    FullNegatedBeta,
    /// `α = cos(a/2)`, `β = sin(a/2)`.
    Half,
    /// `α = cos(a/2)`, `β = -sin(a/2)`.
    HalfNegatedBeta,
}

impl AngleConvention {
    /// The only candidate that reproduces the published game value at the
    /// published parameters.
    pub const FROZEN: AngleConvention = AngleConvention::Full;

    pub const ALL: [AngleConvention; 4] = [
        AngleConvention::Full,
        AngleConvention::FullNegatedBeta,
        AngleConvention::Half,
        AngleConvention::HalfNegatedBeta,
    ];

    pub fn alpha_beta(self, angle: f64) -> (f64, f64) {
        match self {
            AngleConvention::Full => (angle.cos(), angle.sin()),
            AngleConvention::FullNegatedBeta => (angle.cos(), -angle.sin()),
            AngleConvention::Half => ((angle / 2.0).cos(), (angle / 2.0).sin()),
            AngleConvention::HalfNegatedBeta => ((angle / 2.0).cos(), -(angle / 2.0).sin()),
        }
    }
}

/// Born rule used to turn an amplitude into a Grassmann probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BornRule {
    /// `(-1)^{|m||n|} c c^#`; factorizes over product states.
    Graded,
    /// `c c^#` for every cell. Breaks bipartite normalization on the `(••)`
    /// cell; kept for mutation checks.
    Ungraded,
}

/// Single-superqubit state, components in order `(•, 0, 1)`.
#[derive(Clone, Copy, PartialEq)]
pub struct SuperKet3 {
    pub components: [Supernumber; 3],
    pub party: Party,
}

/// Graded adjoint of a [`SuperKet3`].
#[derive(Clone, Copy, PartialEq)]
pub struct SuperBra3 {
    pub components: [Supernumber; 3],
    pub party: Party,
}

impl SuperKet3 {
    pub fn basis(label: BasisLabel, party: Party) -> Self {
        let mut components = [Supernumber::zero(); 3];
        components[label.index()] = Supernumber::one();
        Self { components, party }
    }

    pub fn component(&self, label: BasisLabel) -> &Supernumber {
        &self.components[label.index()]
    }

    /// `c · c^#` for the amplitude on `label`.
    pub fn grassmann_prob(&self, label: BasisLabel) -> Supernumber {
        let c = self.components[label.index()];
        c * c.involution()
    }

    /// `Σ_m p_G(m, ψ)`; equals 1 for physical states.
    pub fn total_probability(&self) -> Supernumber {
        BasisLabel::ALL.iter().map(|&m| self.grassmann_prob(m)).sum()
    }

    /// Supertranspose followed by the involution; a ket maps to a bra.
    pub fn graded_adjoint(&self) -> SuperBra3 {
        let mut components = [Supernumber::zero(); 3];
        for (i, c) in self.components.iter().enumerate() {
            // column vector: (X^ST)_{0i} = (-1)^{|X_i|+|i|)|i|} X_i on each homogeneous piece
            components[i] = graded_sign_split(c, |piece_grade| {
                let vector_grade = (piece_grade + grade(i)) % 2;
                vector_grade * grade(i)
            })
            .involution();
        }
        SuperBra3 {
            components,
            party: self.party,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

impl SuperBra3 {
    pub fn graded_adjoint(&self) -> SuperKet3 {
        let mut components = [Supernumber::zero(); 3];
        for (i, c) in self.components.iter().enumerate() {
            // row vector: (Y^ST)_{i0} = (-1)^{(|i|+|Y|)|i|} Y_i
            components[i] = graded_sign_split(c, |piece_grade| {
                let vector_grade = (piece_grade + grade(i)) % 2;
                (grade(i) + vector_grade) * grade(i)
            })
            .involution();
        }
        SuperKet3 {
            components,
            party: self.party,
        }
    }
}

impl fmt::Debug for SuperKet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperKet3[{:?}]", self.party)?;
        for label in BasisLabel::ALL {
            writeln!(f, "  |{}⟩: {:?}", label.symbol(), self.component(label))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SuperBra3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperBra3[{:?}]", self.party)?;
        for label in BasisLabel::ALL {
            writeln!(f, "  ⟨{}|: {:?}", label.symbol(), self.components[label.index()])?;
        }
        Ok(())
    }
}

/// Splits `x` into even and odd pieces and multiplies each by `(-1)^{exponent(grade)}`.
fn graded_sign_split(x: &Supernumber, exponent: impl Fn(u8) -> u8) -> Supernumber {
    let (even, odd) = x.split();
    let sign = |g: u8| if exponent(g).is_multiple_of(2) { 1.0 } else { -1.0 };
    even * sign(0) + odd * sign(1)
}

/// 3×3 supermatrix, rows and columns in basis order `(•, 0, 1)`.
#[derive(Clone, Copy, PartialEq)]
pub struct SuperMatrix {
    pub entries: [[Supernumber; 3]; 3],
}

impl SuperMatrix {
    pub fn zero() -> Self {
        Self {
            entries: [[Supernumber::zero(); 3]; 3],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.entries[i][i] = Supernumber::one();
        }
        m
    }

    pub fn entry(&self, row: BasisLabel, col: BasisLabel) -> &Supernumber {
        &self.entries[row.index()][col.index()]
    }

    pub fn matmul(&self, rhs: &SuperMatrix) -> SuperMatrix {
        let mut out = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.entries[i][j] = (0..3)
                    .map(|k| self.entries[i][k] * rhs.entries[k][j])
                    .sum();
            }
        }
        out
    }

    /// `Z·ψ` with matrix entries to the left of the coefficients.
    pub fn apply(&self, ket: &SuperKet3) -> SuperKet3 {
        let mut components = [Supernumber::zero(); 3];
        for (i, out) in components.iter_mut().enumerate() {
            *out = (0..3)
                .map(|k| self.entries[i][k] * ket.components[k])
                .sum();
        }
        SuperKet3 {
            components,
            party: ket.party,
        }
    }

    /// Even supermatrix: entry `(i, j)` has parity `|i| + |j|` (or is zero).
    pub fn is_even(&self) -> bool {
        self.first_grading_violation(0).is_none()
    }

    /// Odd supermatrix: entry `(i, j)` has parity `|i| + |j| + 1` (or is zero).
    pub fn is_odd(&self) -> bool {
        self.first_grading_violation(1).is_none()
    }

    fn first_grading_violation(&self, matrix_grade: u8) -> Option<(usize, usize)> {
        for i in 0..3 {
            for j in 0..3 {
                let want = (grade(i) + grade(j) + matrix_grade) % 2;
                let ok = match self.entries[i][j].parity_tol(GRADING_TOL) {
                    Parity::Zero => true,
                    Parity::Even => want == 0,
                    Parity::Odd => want == 1,
                    Parity::Mixed => false,
                };
                if !ok {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn ensure_even(&self) -> Result<(), HilbertError> {
        match self.first_grading_violation(0) {
            None => Ok(()),
            Some((row, col)) => Err(HilbertError::NotEvenSupermatrix { row, col }),
        }
    }

    /// Supertranspose with respect to the `(odd, even, even)` grading.
    ///
    /// For a homogeneous matrix of parity `|X|`,
    /// `(X^ST)_{ij} = (-1)^{(|i|+|X|)(|i|+|j|)} X_{ji}`. Mixed matrices are
    /// handled by splitting every entry into its even and odd pieces.
    pub fn supertranspose(&self) -> SuperMatrix {
        let mut out = SuperMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                let (gi, gj) = (grade(i), grade(j));
                out.entries[i][j] = graded_sign_split(&self.entries[j][i], |piece| {
                    let matrix_grade = (piece + gi + gj) % 2;
                    (gi + matrix_grade) * (gi + gj)
                });
            }
        }
        out
    }

    /// `X^‡ = (X^ST)^#`.
    pub fn graded_adjoint(&self) -> SuperMatrix {
        let mut out = self.supertranspose();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.involution();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max(self.entries[i][j].max_abs_diff(&other.entries[i][j]));
            }
        }
        worst
    }

    pub fn scale_real(&self, k: f64) -> SuperMatrix {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.scale_real(k);
            }
        }
        out
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix")?;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                writeln!(f, "  [{},{}] {:?}", i, j, e)?;
            }
        }
        Ok(())
    }
}

/// `S(η)` with `η = 2 r θ_party`.
pub fn s_element(r: f64, party: Party) -> SuperMatrix {
    let theta = Supernumber::generator(Generator::new(party, false));
    let theta_hash = Supernumber::generator(Generator::new(party, true));
    // ηη^# = 4 r² θθ^#
    let paired = Supernumber::paired(party) * (r * r);
    let mut m = SuperMatrix::zero();
    m.entries[0][0] = Supernumber::one() + paired;
    m.entries[0][1] = theta * -r;
    m.entries[0][2] = theta_hash * r;
    m.entries[1][0] = theta_hash * -r;
    m.entries[1][1] = Supernumber::one() - paired * 0.5;
    m.entries[2][0] = theta * -r;
    m.entries[2][2] = Supernumber::one() - paired * 0.5;
    m
}

/// `U(α, β)` with real `(α, β)` from the frozen angle convention.
pub fn u_element(angle: f64) -> SuperMatrix {
    u_element_with(angle, AngleConvention::FROZEN)
}

pub fn u_element_with(angle: f64, convention: AngleConvention) -> SuperMatrix {
    let (alpha, beta) = convention.alpha_beta(angle);
    u_from_complex(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
}

/// `U(α, β)` for complex `α, β`; `α^#` and `β^#` are complex conjugates.
pub fn u_from_complex(alpha: Complex64, beta: Complex64) -> SuperMatrix {
    let mut m = SuperMatrix::zero();
    m.entries[0][0] = Supernumber::one();
    m.entries[1][1] = alpha.into();
    m.entries[1][2] = Supernumber::from(-beta.conj());
    m.entries[2][1] = beta.into();
    m.entries[2][2] = alpha.conj().into();
    m
}

/// Local rotation `Z = S(2 r θ_party) U(angle)`.
pub fn local_rotation(r: f64, angle: f64, party: Party) -> SuperMatrix {
    s_element(r, party).matmul(&u_element(angle))
}

/// `(1 - r²/2 θθ^#)(α|0⟩ + β|1⟩) + r(-αθ + βθ^#)|•⟩`.
pub fn superqubit_state(
    alpha: Complex64,
    beta: Complex64,
    r: f64,
    party: Party,
) -> Result<SuperKet3, HilbertError> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL || !r.is_finite() {
        return Err(HilbertError::NotNormalized { norm });
    }
    let theta = Supernumber::generator(Generator::new(party, false));
    let theta_hash = Supernumber::generator(Generator::new(party, true));
    let damping = Supernumber::one() - Supernumber::paired(party) * (0.5 * r * r);
    let dot = (theta * -alpha + theta_hash * beta) * r;
    Ok(SuperKet3 {
        components: [dot, damping * alpha, damping * beta],
        party,
    })
}

/// Two-superqubit state; `components[m][n]` is the coefficient of `|m_A n_B⟩`.
#[derive(Clone, Copy, PartialEq)]
pub struct SuperKet9 {
    pub components: [[Supernumber; 3]; 3],
}

impl SuperKet9 {
    pub fn zero() -> Self {
        Self {
            components: [[Supernumber::zero(); 3]; 3],
        }
    }

    pub fn basis(m: BasisLabel, n: BasisLabel) -> Self {
        let mut s = Self::zero();
        s.components[m.index()][n.index()] = Supernumber::one();
        s
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut s = Self::zero();
        s.components[1][1] = Supernumber::real(h);
        s.components[2][2] = Supernumber::real(h);
        s
    }

    /// `ψ_A ⊗ ψ_B` with the graded sign from moving `ψ_B`'s coefficient past `|m_A⟩`.
    pub fn product(a: &SuperKet3, b: &SuperKet3) -> Self {
        let mut s = Self::zero();
        for m in 0..3 {
            for n in 0..3 {
                let (_, odd) = b.components[n].split();
                let (even, _) = b.components[n].split();
                let moved = if grade(m) == 1 { even - odd } else { even + odd };
                s.components[m][n] = a.components[m] * moved;
            }
        }
        s
    }

    pub fn amplitude(&self, m: BasisLabel, n: BasisLabel) -> &Supernumber {
        &self.components[m.index()][n.index()]
    }

    /// Applies `Z_A ⊗ Z_B`; both must be even supermatrices.
    pub fn apply_local(&self, za: &SuperMatrix, zb: &SuperMatrix) -> Result<SuperKet9, HilbertError> {
        za.ensure_even()?;
        zb.ensure_even()?;
        Ok(self.apply_local_unchecked(za, zb))
    }

    /// [`SuperKet9::apply_local`] without the grading check.
    pub fn apply_local_unchecked(&self, za: &SuperMatrix, zb: &SuperMatrix) -> SuperKet9 {
        let mut mid = SuperKet9::zero();
        for mp in 0..3 {
            for n in 0..3 {
                mid.components[mp][n] = (0..3)
                    .map(|m| za.entries[mp][m] * self.components[m][n])
                    .sum();
            }
        }
        let mut out = SuperKet9::zero();
        for mp in 0..3 {
            for np in 0..3 {
                out.components[mp][np] = (0..3)
                    .map(|n| zb.entries[np][n] * mid.components[mp][n])
                    .sum();
            }
        }
        out
    }

    pub fn grassmann_prob(&self, m: BasisLabel, n: BasisLabel) -> Supernumber {
        self.grassmann_prob_with(m, n, BornRule::Graded)
    }

    pub fn grassmann_prob_with(&self, m: BasisLabel, n: BasisLabel, rule: BornRule) -> Supernumber {
        let c = self.amplitude(m, n);
        let p = c * &c.involution();
        match rule {
            BornRule::Graded if m.grade() * n.grade() == 1 => -p,
            _ => p,
        }
    }

    /// All nine Grassmann probabilities, indexed `[m][n]`.
    pub fn prob_table(&self) -> [[Supernumber; 3]; 3] {
        self.prob_table_with(BornRule::Graded)
    }

    pub fn prob_table_with(&self, rule: BornRule) -> [[Supernumber; 3]; 3] {
        let mut t = [[Supernumber::zero(); 3]; 3];
        for m in BasisLabel::ALL {
            for n in BasisLabel::ALL {
                t[m.index()][n.index()] = self.grassmann_prob_with(m, n, rule);
            }
        }
        t
    }

    pub fn total_probability(&self) -> Supernumber {
        self.prob_table().iter().flatten().copied().sum()
    }
}

impl fmt::Debug for SuperKet9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperKet9")?;
        for m in BasisLabel::ALL {
            for n in BasisLabel::ALL {
                writeln!(f, "  |{}{}⟩: {:?}", m.symbol(), n.symbol(), self.amplitude(m, n))?;
            }
        }
        Ok(())
    }
}

/// `(1 + X/2 + 3X²/8)[(|00⟩+|11⟩)/√2 + (p/√2)θ_A|•1⟩ + (q/√2)θ_B|1•⟩]`
/// with `X = -(p²/2)θ_Aθ_A^# - (q²/2)θ_Bθ_B^#`.
pub fn gamma_state(p: f64, q: f64) -> SuperKet9 {
    let x = gamma_x(p, q);
    let prefactor = Supernumber::one() + x * 0.5 + (x * x) * 0.375;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut s = SuperKet9::zero();
    s.components[1][1] = prefactor * h;
    s.components[2][2] = prefactor * h;
    s.components[0][2] = prefactor * Supernumber::generator(Generator::THETA_A) * (p * h);
    s.components[2][0] = prefactor * Supernumber::generator(Generator::THETA_B) * (q * h);
    s
}

/// The nilpotent `X` in the prefactor of [`gamma_state`].
pub fn gamma_x(p: f64, q: f64) -> Supernumber {
    Supernumber::paired(Party::A) * (-0.5 * p * p) + Supernumber::paired(Party::B) * (-0.5 * q * q)
}

/// The ten real game variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameParameters {
    pub p: f64,
    pub q: f64,
    pub r0: f64,
    pub r1: f64,
    pub s0: f64,
    pub s1: f64,
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
}

impl GameParameters {
    pub const DIM: usize = 10;
    pub const NAMES: [&'static str; 10] = ["p", "q", "r0", "r1", "s0", "s1", "a0", "a1", "b0", "b1"];

    pub fn zero() -> Self {
        Self::from_array([0.0; 10])
    }

    /// Published winning parameters, angles read as exact multiples of π.
    pub fn paper() -> Self {
        use std::f64::consts::PI;
        Self {
            p: 0.7476,
            q: -1.0949,
            r0: 0.7476,
            r1: 0.0,
            s0: 0.6329,
            s1: 0.6329,
            a0: -PI / 2.0,
            a1: PI / 4.0,
            b0: PI / 4.0,
            b1: 3.0 * PI / 4.0,
        }
    }

    /// Angles only, all Grassmann scales zero.
    pub fn angles(a0: f64, a1: f64, b0: f64, b1: f64) -> Self {
        Self {
            a0,
            a1,
            b0,
            b1,
            ..Self::zero()
        }
    }

    pub fn to_array(&self) -> [f64; 10] {
        [
            self.p, self.q, self.r0, self.r1, self.s0, self.s1, self.a0, self.a1, self.b0, self.b1,
        ]
    }

    pub fn from_array(x: [f64; 10]) -> Self {
        Self {
            p: x[0],
            q: x[1],
            r0: x[2],
            r1: x[3],
            s0: x[4],
            s1: x[5],
            a0: x[6],
            a1: x[7],
            b0: x[8],
            b1: x[9],
        }
    }

    pub fn r(&self, i: usize) -> f64 {
        [self.r0, self.r1][i]
    }

    pub fn s(&self, j: usize) -> f64 {
        [self.s0, self.s1][j]
    }

    pub fn a(&self, i: usize) -> f64 {
        [self.a0, self.a1][i]
    }

    pub fn b(&self, j: usize) -> f64 {
        [self.b0, self.b1][j]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Sets a field by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), HilbertError> {
        let idx = Self::NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| HilbertError::UnknownParameter(name.to_string()))?;
        let mut x = self.to_array();
        x[idx] = value;
        *self = Self::from_array(x);
        Ok(())
    }

    /// Clamps `r_i` to `[-r_max, r_max]` and `s_j` to `[-s_max, s_max]`.
    pub fn clamped(&self, r_max: f64, s_max: f64) -> Self {
        Self {
            r0: self.r0.clamp(-r_max, r_max),
            r1: self.r1.clamp(-r_max, r_max),
            s0: self.s0.clamp(-s_max, s_max),
            s1: self.s1.clamp(-s_max, s_max),
            ..*self
        }
    }

    /// `(Z_iA, Z_jB)` for the referee's questions `(i, j)`.
    pub fn rotations(&self, i: usize, j: usize) -> (SuperMatrix, SuperMatrix) {
        (
            local_rotation(self.r(i), self.a(i), Party::A),
            local_rotation(self.s(j), self.b(j), Party::B),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn s_element_zero_is_identity() {
        assert!(s_element(0.0, Party::A).max_abs_diff(&SuperMatrix::identity()) < TOL);
        assert!(s_element(0.4, Party::B).is_even());
    }

    #[test]
    fn s_element_on_zero_ket() {
        let r = 0.37;
        let out = s_element(r, Party::A).apply(&SuperKet3::basis(BasisLabel::Zero, Party::A));
        let expected_zero = Supernumber::one() - Supernumber::paired(Party::A) * (r * r / 2.0);
        let expected_dot = Supernumber::generator(Generator::THETA_A) * -r;
        assert!(out.component(BasisLabel::Zero).approx_eq(&expected_zero, TOL));
        assert!(out.component(BasisLabel::Dot).approx_eq(&expected_dot, TOL));
        assert!(out.component(BasisLabel::One).is_zero());
        let p_dot = out.grassmann_prob(BasisLabel::Dot);
        assert!(p_dot.approx_eq(&(Supernumber::paired(Party::A) * (r * r)), TOL));
    }

    #[test]
    fn u_element_examples() {
        assert!(u_element(0.0).max_abs_diff(&SuperMatrix::identity()) < TOL);
        let u = u_element(PI / 2.0);
        let zero = u.apply(&SuperKet3::basis(BasisLabel::Zero, Party::A));
        let one = u.apply(&SuperKet3::basis(BasisLabel::One, Party::A));
        let dot = u.apply(&SuperKet3::basis(BasisLabel::Dot, Party::A));
        assert!(zero.max_abs_diff(&SuperKet3::basis(BasisLabel::One, Party::A)) < TOL);
        let minus_zero = SuperKet3 {
            components: [Supernumber::zero(), Supernumber::real(-1.0), Supernumber::zero()],
            party: Party::A,
        };
        assert!(one.max_abs_diff(&minus_zero) < TOL);
        assert!(dot.max_abs_diff(&SuperKet3::basis(BasisLabel::Dot, Party::A)) < TOL);
    }

    #[test]
    fn u_element_composes_like_rotations() {
        for (a, b) in [(0.3, 1.1), (-2.0, 0.7), (3.0, 3.0)] {
            let lhs = u_element(a).matmul(&u_element(b));
            assert!(lhs.max_abs_diff(&u_element(a + b)) < TOL);
        }
    }

    #[test]
    fn superqubit_state_examples() {
        let psi = superqubit_state(c(1.0), c(0.0), 0.0, Party::A).unwrap();
        assert!(psi.max_abs_diff(&SuperKet3::basis(BasisLabel::Zero, Party::A)) < TOL);

        let (alpha, beta, r) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), 0.45);
        let psi = superqubit_state(alpha, beta, r, Party::A).unwrap();
        let damp = Supernumber::one() - Supernumber::paired(Party::A) * (r * r);
        assert!(psi
            .grassmann_prob(BasisLabel::Zero)
            .approx_eq(&(damp * alpha.norm_sqr()), TOL));
        assert!(psi
            .grassmann_prob(BasisLabel::One)
            .approx_eq(&(damp * beta.norm_sqr()), TOL));
        assert!(psi
            .grassmann_prob(BasisLabel::Dot)
            .approx_eq(&(Supernumber::paired(Party::A) * (r * r)), TOL));
        assert!(psi.total_probability().approx_eq(&Supernumber::one(), TOL));
    }

    #[test]
    fn superqubit_state_rejects_unnormalized() {
        let err = superqubit_state(c(1.0), c(0.5), 0.1, Party::A).unwrap_err();
        assert!(matches!(err, HilbertError::NotNormalized { .. }));
    }

    #[test]
    fn graded_adjoint_identity_and_double_application() {
        let id = SuperMatrix::identity();
        assert!(id.graded_adjoint().max_abs_diff(&id) < TOL);

        let z = local_rotation(0.6, 0.9, Party::B);
        assert!(z.is_even());
        assert!(z.graded_adjoint().graded_adjoint().max_abs_diff(&z) < TOL);

        // odd matrix: odd entries on even blocks, even entries on odd blocks
        let mut odd = SuperMatrix::zero();
        let t = Supernumber::generator(Generator::THETA_A);
        let th = Supernumber::generator(Generator::THETA_A_HASH);
        odd.entries[0][0] = t * 0.5;
        odd.entries[1][1] = th * Complex64::new(0.0, 1.0);
        odd.entries[2][1] = t * 2.0;
        odd.entries[0][1] = Supernumber::real(1.5);
        odd.entries[2][0] = Supernumber::scalar(Complex64::new(0.3, -0.2)) + t * th;
        assert!(odd.is_odd());
        let twice = odd.graded_adjoint().graded_adjoint();
        assert!(twice.max_abs_diff(&odd.scale_real(-1.0)) < TOL);
    }

    #[test]
    fn graded_adjoint_of_even_matrix_is_ordinary_adjoint_on_bodies() {
        let u = u_from_complex(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let adj = u.graded_adjoint();
        for i in 0..3 {
            for j in 0..3 {
                let want = u.entries[j][i].body().conj();
                assert!((adj.entries[i][j].body() - want).norm() < TOL);
            }
        }
    }

    #[test]
    fn ket_adjoint_round_trip() {
        let psi = superqubit_state(c(0.8), c(0.6), 0.3, Party::A).unwrap();
        let back = psi.graded_adjoint().graded_adjoint();
        assert!(back.max_abs_diff(&psi) < TOL);
    }

    #[test]
    fn gamma_reduces_to_bell() {
        let g = gamma_state(0.0, 0.0);
        for m in 0..3 {
            for n in 0..3 {
                assert!(g.components[m][n].approx_eq(&SuperKet9::bell().components[m][n], TOL));
            }
        }
        let p00 = SuperKet9::bell().grassmann_prob(BasisLabel::Zero, BasisLabel::Zero);
        assert!(p00.approx_eq(&Supernumber::real(0.5), TOL));
    }

    #[test]
    fn gamma_x_cubed_vanishes() {
        let x = gamma_x(1.3, -0.4);
        assert!((x * x * x).is_zero());
    }

    #[test]
    fn gamma_normalization() {
        let g = gamma_state(0.5, 0.5);
        assert!((g.total_probability().rogers() - 1.0).norm() < TOL);
        assert!(g.total_probability().approx_eq(&Supernumber::one(), TOL));
    }

    #[test]
    fn apply_local_identity() {
        let g = gamma_state(0.3, -0.8);
        let out = g.apply_local(&SuperMatrix::identity(), &SuperMatrix::identity()).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn apply_local_single_party_reduction() {
        let r = 0.55;
        let state = SuperKet9::basis(BasisLabel::Zero, BasisLabel::Zero);
        let out = state
            .apply_local(&s_element(r, Party::A), &SuperMatrix::identity())
            .unwrap();
        let p = out.grassmann_prob(BasisLabel::Dot, BasisLabel::Zero);
        assert!(p.approx_eq(&(Supernumber::paired(Party::A) * (r * r)), TOL));
    }

    #[test]
    fn apply_local_rejects_odd_entries_in_even_blocks() {
        let mut bad = SuperMatrix::identity();
        bad.entries[1][1] = Supernumber::generator(Generator::THETA_A);
        let err = SuperKet9::bell().apply_local(&bad, &SuperMatrix::identity()).unwrap_err();
        assert!(matches!(err, HilbertError::NotEvenSupermatrix { row: 1, col: 1 }));
    }

    #[test]
    fn product_state_probabilities_factorize() {
        let a = superqubit_state(c(0.6), c(0.8), 0.4, Party::A).unwrap();
        let b = superqubit_state(c(0.28), c(0.96), -0.7, Party::B).unwrap();
        let ab = SuperKet9::product(&a, &b);
        for m in BasisLabel::ALL {
            for n in BasisLabel::ALL {
                let want = a.grassmann_prob(m) * b.grassmann_prob(n);
                assert!(ab.grassmann_prob(m, n).approx_eq(&want, TOL), "{m:?}{n:?}");
            }
        }
    }

    #[test]
    fn ungraded_born_rule_breaks_normalization() {
        let (za, zb) = (local_rotation(0.5, 0.2, Party::A), local_rotation(0.7, 1.0, Party::B));
        let out = gamma_state(0.6, -0.9).apply_local(&za, &zb).unwrap();
        let total: Supernumber = out.prob_table_with(BornRule::Ungraded).iter().flatten().copied().sum();
        assert!(!total.approx_eq(&Supernumber::one(), 1e-6));
        assert!(out.total_probability().approx_eq(&Supernumber::one(), TOL));
    }

    #[test]
    fn parameters_by_name() {
        let mut p = GameParameters::zero();
        p.set("s1", 0.25).unwrap();
        assert_eq!(p.s1, 0.25);
        assert!(p.set("zz", 1.0).is_err());
        let x = GameParameters::paper().to_array();
        assert_eq!(GameParameters::from_array(x), GameParameters::paper());
    }
}
