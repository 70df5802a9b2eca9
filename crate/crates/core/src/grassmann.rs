//! Complex Grassmann algebra on four ordered generators.
//!
//! The generators are `θ_A, θ_A^#, θ_B, θ_B^#`, in that canonical order. An
//! element is stored densely as 16 complex coefficients indexed by a 4-bit
//! monomial mask, bit `k` standing for generator `k`. Products of monomials
//! pick up the sign of the permutation that sorts the concatenated generator
//! list, which reduces to counting inversions with bit arithmetic.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Number of generators.
pub const GENERATORS: usize = 4;
/// Number of monomials (`2^GENERATORS`).
pub const MONOMIALS: usize = 1 << GENERATORS;

/// Paired monomial `θ_A θ_A^#`.
pub const MASK_AA: usize = 0b0011;
/// Paired monomial `θ_B θ_B^#`.
pub const MASK_BB: usize = 0b1100;
/// Top monomial `θ_A θ_A^# θ_B θ_B^#`.
pub const MASK_TOP: usize = 0b1111;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Party {
    A,
    B,
}

/// One of the four odd generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(u8);

impl Generator {
    pub const THETA_A: Generator = Generator(0);
    pub const THETA_A_HASH: Generator = Generator(1);
    pub const THETA_B: Generator = Generator(2);
    pub const THETA_B_HASH: Generator = Generator(3);

    pub const ALL: [Generator; GENERATORS] = [
        Self::THETA_A,
        Self::THETA_A_HASH,
        Self::THETA_B,
        Self::THETA_B_HASH,
    ];

    pub fn from_index(index: usize) -> Option<Self> {
        (index < GENERATORS).then_some(Generator(index as u8))
    }

    /// `θ_party`, or `θ_party^#` when `hashed`.
    pub fn new(party: Party, hashed: bool) -> Self {
        let base = match party {
            Party::A => 0,
            Party::B => 2,
        };
        Generator(base + hashed as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn party(self) -> Party {
        if self.0 < 2 {
            Party::A
        } else {
            Party::B
        }
    }

    pub fn hashed(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn mask(self) -> usize {
        1 << self.0
    }

    fn name(self) -> &'static str {
        ["tA", "tA#", "tB", "tB#"][self.index()]
    }
}

/// Grading of a supernumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    /// Only the zero element.
    Zero,
}

const fn monomial_sign(a: usize, b: usize) -> i8 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut j = 0;
    while j < GENERATORS {
        if b >> j & 1 == 1 {
            inversions += (a >> (j + 1)).count_ones();
        }
        j += 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

const fn build_sign_table() -> [[i8; MONOMIALS]; MONOMIALS] {
    let mut table = [[0i8; MONOMIALS]; MONOMIALS];
    let mut a = 0;
    while a < MONOMIALS {
        let mut b = 0;
        while b < MONOMIALS {
            table[a][b] = monomial_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    table
}

/// `SIGN[a][b]` is the sign of `m_a · m_b` in canonical order, or 0 if they share a generator.
const SIGN: [[i8; MONOMIALS]; MONOMIALS] = build_sign_table();

// θ → θ^#, θ^# → -θ on one party's 2-bit block. Blocks never interleave, so
// substituting in place leaves the monomial canonical up to the block sign.
const fn block_involution(bits: usize) -> (usize, i8) {
    match bits {
        0b00 => (0b00, 1),
        0b01 => (0b10, 1),
        0b10 => (0b01, -1),
        // θ θ^# ↦ θ^# (-θ) = θ θ^#
        _ => (0b11, 1),
    }
}

const fn build_involution_table() -> [(usize, i8); MONOMIALS] {
    let mut table = [(0usize, 0i8); MONOMIALS];
    let mut m = 0;
    while m < MONOMIALS {
        let (lo, s_lo) = block_involution(m & 0b11);
        let (hi, s_hi) = block_involution(m >> 2);
        table[m] = (lo | hi << 2, s_lo * s_hi);
        m += 1;
    }
    table
}

const INVOLUTION: [(usize, i8); MONOMIALS] = build_involution_table();

/// Element of the complex Grassmann algebra.
#[derive(Clone, Copy, PartialEq)]
pub struct Supernumber {
    coeffs: [Complex64; MONOMIALS],
}

impl Default for Supernumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl Supernumber {
    pub const fn zero() -> Self {
        Self {
            coeffs: [Complex64::new(0.0, 0.0); MONOMIALS],
        }
    }

    pub fn one() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(value: Complex64) -> Self {
        let mut s = Self::zero();
        s.coeffs[0] = value;
        s
    }

    pub fn real(value: f64) -> Self {
        Self::scalar(Complex64::new(value, 0.0))
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(g.mask(), Complex64::new(1.0, 0.0))
    }

    /// `value · m`, where `mask` names a canonically ordered monomial.
    pub fn monomial(mask: usize, value: Complex64) -> Self {
        assert!(mask < MONOMIALS, "monomial mask out of range");
        let mut s = Self::zero();
        s.coeffs[mask] = value;
        s
    }

    /// Ordered product of generators, with the anticommutation sign applied.
    pub fn product_of(gens: &[Generator]) -> Self {
        gens.iter()
            .fold(Self::one(), |acc, &g| acc * Self::generator(g))
    }

    /// `θ_P θ_P^#`.
    pub fn paired(party: Party) -> Self {
        match party {
            Party::A => Self::monomial(MASK_AA, Complex64::new(1.0, 0.0)),
            Party::B => Self::monomial(MASK_BB, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn from_coeffs(coeffs: [Complex64; MONOMIALS]) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64; MONOMIALS] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn set_coeff(&mut self, mask: usize, value: Complex64) {
        self.coeffs[mask] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Modified Rogers functional: the Berezin integral of `Π_P exp(θ_P θ_P^#) τ`
    /// oriented by `θ_A θ_A^# θ_B θ_B^#`. In closed form this sums the
    /// coefficients of `1, θ_Aθ_A^#, θ_Bθ_B^#, θ_Aθ_A^#θ_Bθ_B^#`.
    pub fn rogers(&self) -> Complex64 {
        self.coeffs[0] + self.coeffs[MASK_AA] + self.coeffs[MASK_BB] + self.coeffs[MASK_TOP]
    }

    /// Graded involution `#`: conjugates coefficients and substitutes
    /// `θ → θ^#`, `θ^# → -θ` without reversing factor order.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            let (target, sign) = INVOLUTION[m];
            out.coeffs[target] = c.conj() * f64::from(sign);
        }
        out
    }

    pub fn parity(&self) -> Parity {
        self.parity_tol(0.0)
    }

    /// Parity ignoring coefficients with modulus at or below `tol`.
    pub fn parity_tol(&self, tol: f64) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.norm() > tol {
                if (m as u32).count_ones().is_multiple_of(2) {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (false, false) => Parity::Zero,
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Even and odd components.
    pub fn split(&self) -> (Self, Self) {
        let mut even = Self::zero();
        let mut odd = Self::zero();
        for (m, c) in self.coeffs.iter().enumerate() {
            if (m as u32).count_ones().is_multiple_of(2) {
                even.coeffs[m] = *c;
            } else {
                odd.coeffs[m] = *c;
            }
        }
        (even, odd)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= k);
        out
    }

    pub fn scale_real(&self, k: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= k);
        out
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest imaginary part over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

impl Mul for Supernumber {
    type Output = Supernumber;

    #[allow(clippy::op_ref)]
    fn mul(self, rhs: Supernumber) -> Supernumber {
        &self * &rhs
    }
}

impl Mul for &Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: &Supernumber) -> Supernumber {
        let zero = Complex64::new(0.0, 0.0);
        let mut out = Supernumber::zero();
        for (a, ca) in self.coeffs.iter().enumerate() {
            if *ca == zero {
                continue;
            }
            for (b, cb) in rhs.coeffs.iter().enumerate() {
                let sign = SIGN[a][b];
                if sign == 0 || *cb == zero {
                    continue;
                }
                out.coeffs[a | b] += ca * cb * f64::from(sign);
            }
        }
        out
    }
}

impl Mul<Complex64> for Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: Complex64) -> Supernumber {
        self.scale(rhs)
    }
}

impl Mul<f64> for Supernumber {
    type Output = Supernumber;

    fn mul(self, rhs: f64) -> Supernumber {
        self.scale_real(rhs)
    }
}

impl Mul<Supernumber> for f64 {
    type Output = Supernumber;

    fn mul(self, rhs: Supernumber) -> Supernumber {
        rhs.scale_real(self)
    }
}

impl Add for Supernumber {
    type Output = Supernumber;

    fn add(mut self, rhs: Supernumber) -> Supernumber {
        self += rhs;
        self
    }
}

impl AddAssign for Supernumber {
    fn add_assign(&mut self, rhs: Supernumber) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Supernumber {
    type Output = Supernumber;

    fn sub(mut self, rhs: Supernumber) -> Supernumber {
        self -= rhs;
        self
    }
}

impl SubAssign for Supernumber {
    fn sub_assign(&mut self, rhs: Supernumber) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Supernumber {
    type Output = Supernumber;

    fn neg(self) -> Supernumber {
        self.scale_real(-1.0)
    }
}

impl std::iter::Sum for Supernumber {
    fn sum<I: Iterator<Item = Supernumber>>(iter: I) -> Self {
        iter.fold(Supernumber::zero(), |acc, x| acc + x)
    }
}

impl From<f64> for Supernumber {
    fn from(value: f64) -> Self {
        Supernumber::real(value)
    }
}

impl From<Complex64> for Supernumber {
    fn from(value: Complex64) -> Self {
        Supernumber::scalar(value)
    }
}

impl From<Generator> for Supernumber {
    fn from(g: Generator) -> Self {
        Supernumber::generator(g)
    }
}

/// Prints nonzero monomials in canonical order, e.g. `(1+0i) + (-0.25+0i)·tA tA# `.
impl fmt::Debug for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            if m != 0 {
                f.write_str("·")?;
                for g in Generator::ALL.iter().filter(|g| m & g.mask() != 0) {
                    write!(f, "{} ", g.name())?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Supernumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
