//! Ordinary two-qubit CHSH simulator on plain complex 2×2 matrices.
//!
//! Shares no code with the Grassmann path; used as the oracle for the body
//! sector of the superqubit game.

use num_complex::Complex64;

type Mat2 = [[Complex64; 2]; 2];
type Vec4 = [Complex64; 4];

fn rotation(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    let z = |v: f64| Complex64::new(v, 0.0);
    [[z(c), z(-s)], [z(s), z(c)]]
}

fn bell() -> Vec4 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let o = Complex64::new(0.0, 0.0);
    // |00⟩, |01⟩, |10⟩, |11⟩
    [h, o, o, h]
}

fn kron_apply(a: &Mat2, b: &Mat2, psi: &Vec4) -> Vec4 {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + j] += a[i][k] * b[j][l] * psi[2 * k + l];
                }
            }
        }
    }
    out
}

/// `P(x, y)` for the Bell state after `R(alice) ⊗ R(bob)`, `x, y ∈ {0, 1}`.
pub fn qubit_table(alice: f64, bob: f64) -> [[f64; 2]; 2] {
    let psi = kron_apply(&rotation(alice), &rotation(bob), &bell());
    [[psi[0].norm_sqr(), psi[1].norm_sqr()], [psi[2].norm_sqr(), psi[3].norm_sqr()]]
}

/// Same table embedded in the `(•, 0, 1)` layout with a zero `•` row and column.
pub fn embedded_table(alice: f64, bob: f64) -> [[f64; 3]; 3] {
    let t = qubit_table(alice, bob);
    let mut out = [[0.0; 3]; 3];
    for x in 0..2 {
        for y in 0..2 {
            out[x + 1][y + 1] = t[x][y];
        }
    }
    out
}

/// CHSH winning probability with Alice angles `a` and Bob angles `b`.
pub fn chsh_value(a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let t = qubit_table(a[i], b[j]);
            let agree = t[0][0] + t[1][1];
            total += if i & j == 1 { 1.0 - agree } else { agree };
        }
    }
    total / 4.0
}
