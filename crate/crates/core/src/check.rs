//! Seeded invariant suites shared by the `check` command and the tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::game::{grassmann_tables, outcome_tables};
use crate::grassmann::{Parity, Party, Supernumber, MASK_AA, MASK_BB, MASK_TOP, MONOMIALS};
use crate::hilbert::{gamma_state, local_rotation, superqubit_state, BornRule, GameParameters};
use crate::maps::MapKind;
use crate::reference;

/// Per-coefficient tolerance for exact algebraic identities.
pub const LAW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random element with every coefficient in the unit square.
pub fn random_supernumber(rng: &mut impl Rng) -> Supernumber {
    let mut x = Supernumber::zero();
    for m in 0..MONOMIALS {
        x.set_coeff(m, coeff(rng));
    }
    x
}

/// Random element of the given parity (`Even` or `Odd`).
pub fn random_homogeneous(rng: &mut impl Rng, parity: Parity) -> Supernumber {
    let want = match parity {
        Parity::Odd => 1,
        _ => 0,
    };
    let mut x = Supernumber::zero();
    for m in 0..MONOMIALS {
        if (m as u32).count_ones() % 2 == want {
            x.set_coeff(m, coeff(rng));
        }
    }
    x
}

fn random_parity(rng: &mut impl Rng) -> Parity {
    if rng.random::<bool>() {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn grade(p: Parity) -> i32 {
    (p == Parity::Odd) as i32
}

/// Largest law defect observed, per law.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LawDefects {
    pub associativity: f64,
    pub graded_commutativity: f64,
    pub nilpotency: f64,
    pub involution_multiplicative: f64,
    pub double_involution: f64,
    pub rogers_linearity: f64,
    pub rogers_body: f64,
}

impl LawDefects {
    pub fn worst(&self) -> f64 {
        [
            self.associativity,
            self.graded_commutativity,
            self.nilpotency,
            self.involution_multiplicative,
            self.double_involution,
            self.rogers_linearity,
            self.rogers_body,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn algebra_law_defects(samples: usize, seed: u64) -> LawDefects {
    let mut rng = rng(seed);
    let mut d = LawDefects::default();
    for _ in 0..samples {
        let a = random_supernumber(&mut rng);
        let b = random_supernumber(&mut rng);
        let c = random_supernumber(&mut rng);
        d.associativity = d.associativity.max(((a * b) * c).max_abs_diff(&(a * (b * c))));

        let (pa, pb) = (random_parity(&mut rng), random_parity(&mut rng));
        let ha = random_homogeneous(&mut rng, pa);
        let hb = random_homogeneous(&mut rng, pb);
        let sign = if grade(pa) * grade(pb) == 1 { -1.0 } else { 1.0 };
        d.graded_commutativity = d
            .graded_commutativity
            .max((ha * hb).max_abs_diff(&((hb * ha) * sign)));

        let odd = random_homogeneous(&mut rng, Parity::Odd);
        d.nilpotency = d.nilpotency.max((odd * odd).max_abs_diff(&Supernumber::zero()));

        d.involution_multiplicative = d
            .involution_multiplicative
            .max((a * b).involution().max_abs_diff(&(a.involution() * b.involution())));

        let (even, odd_part) = a.split();
        let twice = a.involution().involution();
        d.double_involution = d.double_involution.max(twice.max_abs_diff(&(even - odd_part)));

        let (k1, k2) = (coeff(&mut rng), coeff(&mut rng));
        let lhs = (a.scale(k1) + b.scale(k2)).rogers();
        let rhs = a.rogers() * k1 + b.rogers() * k2;
        d.rogers_linearity = d.rogers_linearity.max((lhs - rhs).norm());

        let mut stripped = a;
        for m in [MASK_AA, MASK_BB, MASK_TOP] {
            stripped.set_coeff(m, Complex64::new(0.0, 0.0));
        }
        d.rogers_body = d.rogers_body.max((stripped.rogers() - stripped.body()).norm());
    }
    d.rogers_body = d.rogers_body.max((Supernumber::one().rogers() - 1.0).norm());
    d
}

pub fn algebra_laws(samples: usize, seed: u64) -> CheckOutcome {
    let d = algebra_law_defects(samples, seed);
    CheckOutcome::new(
        "algebra-laws",
        d.worst() <= LAW_TOL,
        format!("{samples} samples, worst defect {:.3e} ({d:?})", d.worst()),
    )
}

fn random_unit_pair(rng: &mut impl Rng) -> (Complex64, Complex64) {
    let theta = rng.random_range(0.0..PI);
    let (pa, pb) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
    (
        Complex64::from_polar(theta.cos(), pa),
        Complex64::from_polar(theta.sin(), pb),
    )
}

/// Worst `|Σ_m p_G(m, Zψ) - 1|` over random single superqubits and rotations.
pub fn single_normalization_defect(samples: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (alpha, beta) = random_unit_pair(&mut rng);
        let r = rng.random_range(-1.5..1.5);
        let psi = superqubit_state(alpha, beta, r, Party::A).expect("unit pair");
        let z = local_rotation(rng.random_range(-1.5..1.5), rng.random_range(-PI..PI), Party::A);
        let total = z.apply(&psi).total_probability();
        worst = worst.max(total.max_abs_diff(&Supernumber::one()));
    }
    worst
}

fn random_params(rng: &mut impl Rng) -> GameParameters {
    let mut x = [0.0; 10];
    for (k, v) in x.iter_mut().enumerate() {
        *v = if k >= 6 {
            rng.random_range(-PI..PI)
        } else {
            rng.random_range(-1.5..1.5)
        };
    }
    GameParameters::from_array(x)
}

/// Worst `|Σ_{mn} p_G - 1|` over random rotated Γ states.
pub fn bipartite_normalization_defect(samples: usize, seed: u64, rule: BornRule) -> f64 {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let params = random_params(&mut rng);
        let gamma = gamma_state(params.p, params.q);
        let (i, j) = (rng.random_range(0..2), rng.random_range(0..2));
        let (za, zb) = params.rotations(i, j);
        let state = gamma.apply_local(&za, &zb).expect("even rotations");
        let total: Supernumber = state.prob_table_with(rule).iter().flatten().copied().sum();
        worst = worst.max(total.max_abs_diff(&Supernumber::one()));
    }
    worst
}

pub fn normalization(samples: usize, seed: u64) -> CheckOutcome {
    let single = single_normalization_defect(samples, seed);
    let bipartite = bipartite_normalization_defect(samples, seed ^ 0x5eed, BornRule::Graded);
    CheckOutcome::new(
        "normalization",
        single <= LAW_TOL && bipartite <= LAW_TOL,
        format!("{samples} samples each, single {single:.3e}, bipartite {bipartite:.3e}"),
    )
}

/// Mutation check: the ungraded Born rule must visibly break normalization.
pub fn mutation_detected(samples: usize, seed: u64) -> CheckOutcome {
    let defect = bipartite_normalization_defect(samples, seed, BornRule::Ungraded);
    CheckOutcome::new(
        "mutation-ungraded-born-rule",
        defect > 1e-6,
        format!("ungraded rule defect {defect:.3e} (must be detected)"),
    )
}

/// Worst deviation between the body sector and the ordinary two-qubit simulator.
pub fn body_sector_defect(samples: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let params = GameParameters::angles(
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        );
        for map in MapKind::ALL {
            if map == MapKind::Trigonometric {
                continue;
            }
            let tables = outcome_tables(&params, map).expect("pure angles");
            for (k, t) in tables.iter().enumerate() {
                let (i, j) = (k / 2, k % 2);
                let oracle = reference::embedded_table(params.a(i), params.b(j));
                for m in 0..3 {
                    for n in 0..3 {
                        worst = worst.max((t[m][n] - oracle[m][n]).abs());
                    }
                }
            }
        }
    }
    worst
}

pub fn body_sector(samples: usize, seed: u64) -> CheckOutcome {
    let d = body_sector_defect(samples, seed);
    CheckOutcome::new(
        "body-sector-oracle",
        d <= LAW_TOL,
        format!("{samples} angle sets, worst deviation {d:.3e}"),
    )
}

/// Deterministic grid search for a parameter set with a negative
/// modified-Rogers probability.
pub fn negative_rogers_witness() -> Option<(GameParameters, f64)> {
    for step in 0..=30 {
        let r0 = step as f64 * 0.1;
        let params = GameParameters { r0, ..GameParameters::zero() };
        let tables = outcome_tables(&params, MapKind::ModifiedRogers).ok()?;
        let min = tables.iter().flatten().flatten().copied().fold(f64::INFINITY, f64::min);
        if min < 0.0 {
            return Some((params, min));
        }
    }
    None
}

pub fn negative_witness() -> CheckOutcome {
    match negative_rogers_witness() {
        Some((params, min)) => CheckOutcome::new(
            "rogers-negative-witness",
            true,
            format!("r0 = {} gives min probability {min:.4}", params.r0),
        ),
        None => CheckOutcome::new("rogers-negative-witness", false, "no witness on the grid".into()),
    }
}

/// Every Grassmann probability is even with real paired coefficients.
pub fn probability_shape(samples: usize, seed: u64) -> CheckOutcome {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let tables = grassmann_tables(&random_params(&mut rng)).expect("finite");
        for pg in tables.iter().flatten().flatten() {
            let (_, odd) = pg.split();
            worst = worst.max(odd.max_abs_diff(&Supernumber::zero()));
            for m in [0, MASK_AA, MASK_BB, MASK_TOP] {
                worst = worst.max(pg.coeff(m).im.abs());
            }
        }
    }
    CheckOutcome::new(
        "probability-shape",
        worst <= LAW_TOL,
        format!("{samples} samples, worst odd/imaginary residue {worst:.3e}"),
    )
}

/// The full suite run by the `check` command.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        algebra_laws(10_000, seed),
        normalization(1_000, seed.wrapping_add(1)),
        body_sector(100, seed.wrapping_add(2)),
        probability_shape(200, seed.wrapping_add(3)),
        negative_witness(),
        mutation_detected(50, seed.wrapping_add(4)),
    ]
}
