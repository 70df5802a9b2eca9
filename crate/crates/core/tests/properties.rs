use num_complex::Complex64;
use proptest::prelude::*;
use superchsh::grassmann::MONOMIALS;
use superchsh::hilbert::{local_rotation, BornRule};
use superchsh::{
    gamma_state, outcome_tables, superqubit_state, BasisLabel, GameParameters, MapKind, Parity, Party, Supernumber,
};

const TOL: f64 = 1e-11;

fn supernumber() -> impl Strategy<Value = Supernumber> {
    prop::array::uniform32(-2.0f64..2.0).prop_map(|x| {
        let mut c = [Complex64::new(0.0, 0.0); MONOMIALS];
        for (k, v) in c.iter_mut().enumerate() {
            *v = Complex64::new(x[2 * k], x[2 * k + 1]);
        }
        Supernumber::from_coeffs(c)
    })
}

fn homogeneous() -> impl Strategy<Value = Supernumber> {
    (supernumber(), any::<bool>()).prop_map(|(x, odd)| {
        let (even, o) = x.split();
        if odd {
            o
        } else {
            even
        }
    })
}

fn params() -> impl Strategy<Value = GameParameters> {
    prop::array::uniform10(-1.5f64..1.5).prop_map(|mut x| {
        for v in &mut x[6..] {
            *v *= 2.0;
        }
        GameParameters::from_array(x)
    })
}

fn sign(a: &Supernumber, b: &Supernumber) -> f64 {
    if a.parity() == Parity::Odd && b.parity() == Parity::Odd {
        -1.0
    } else {
        1.0
    }
}

proptest! {
    #[test]
    fn product_is_associative(a in supernumber(), b in supernumber(), c in supernumber()) {
        let lhs = (a * b) * c;
        let rhs = a * (b * c);
        prop_assert!(lhs.approx_eq(&rhs, TOL * 100.0));
    }

    #[test]
    fn homogeneous_elements_graded_commute(a in homogeneous(), b in homogeneous()) {
        let ab = a * b;
        let ba = (b * a).scale_real(sign(&a, &b));
        prop_assert!(ab.approx_eq(&ba, TOL * 10.0));
    }

    #[test]
    fn soul_is_nilpotent(a in supernumber()) {
        let mut soul = a;
        soul.set_coeff(0, Complex64::new(0.0, 0.0));
        let fifth = soul * soul * soul * soul * soul;
        prop_assert!(fifth.is_zero());
    }

    #[test]
    fn involution_is_multiplicative(a in supernumber(), b in supernumber()) {
        let lhs = (a * b).involution();
        let rhs = a.involution() * b.involution();
        prop_assert!(lhs.approx_eq(&rhs, TOL * 10.0));
    }

    #[test]
    fn rogers_is_linear(a in supernumber(), b in supernumber(), k in -3.0f64..3.0) {
        let lhs = (a + b.scale_real(k)).rogers();
        let rhs = a.rogers() + b.rogers() * k;
        prop_assert!((lhs - rhs).norm() < TOL);
    }

    #[test]
    fn single_superqubit_is_normalized(a in -3.2f64..3.2, phase in -3.2f64..3.2, r in -2.0f64..2.0, r2 in -2.0f64..2.0, t in -3.2f64..3.2) {
        let alpha = Complex64::from_polar(a.cos(), phase);
        let beta = Complex64::new(a.sin(), 0.0);
        let ket = superqubit_state(alpha, beta, r, Party::A).unwrap();
        let rotated = local_rotation(r2, t, Party::A).apply(&ket);
        prop_assert!(rotated.total_probability().approx_eq(&Supernumber::one(), TOL));
    }

    #[test]
    fn rotated_gamma_is_normalized(p in params()) {
        let gamma = gamma_state(p.p, p.q);
        for i in 0..2 {
            for j in 0..2 {
                let (za, zb) = p.rotations(i, j);
                let state = gamma.apply_local(&za, &zb).unwrap();
                prop_assert!(state.total_probability().approx_eq(&Supernumber::one(), TOL));
            }
        }
    }

    #[test]
    fn ungraded_rule_breaks_normalization_when_deformed(p in 0.3f64..1.5, r in 0.3f64..1.5, s in 0.3f64..1.5) {
        let params = GameParameters { p, r0: r, s0: s, ..GameParameters::zero() };
        let (za, zb) = params.rotations(0, 0);
        let state = gamma_state(p, 0.0).apply_local(&za, &zb).unwrap();
        let total: Supernumber = BasisLabel::ALL
            .iter()
            .flat_map(|&m| BasisLabel::ALL.iter().map(move |&n| (m, n)))
            .map(|(m, n)| state.grassmann_prob_with(m, n, BornRule::Ungraded))
            .sum();
        prop_assert!(!total.approx_eq(&Supernumber::one(), 1e-6));
    }

    #[test]
    fn extracted_tables_sum_to_one(p in params()) {
        for map in [MapKind::DeWitt, MapKind::ModifiedRogers] {
            let tables = outcome_tables(&p, map).unwrap();
            for t in tables {
                let s: f64 = t.iter().flatten().sum();
                prop_assert!((s - 1.0).abs() < TOL);
            }
        }
    }

    #[test]
    fn dewitt_ignores_grassmann_parameters(p in params()) {
        let bare = GameParameters::angles(p.a0, p.a1, p.b0, p.b1);
        let lhs = outcome_tables(&p, MapKind::DeWitt).unwrap();
        let rhs = outcome_tables(&bare, MapKind::DeWitt).unwrap();
        for (x, y) in lhs.iter().flatten().flatten().zip(rhs.iter().flatten().flatten()) {
            prop_assert!((x - y).abs() < TOL);
        }
    }
}
