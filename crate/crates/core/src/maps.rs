//! Grassmann-valued probabilities to real numbers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, MapError};
use crate::grassmann::{Party, Supernumber, MASK_AA, MASK_BB, MASK_TOP};
use crate::hilbert::{superqubit_state, BasisLabel};

/// Allowed imaginary or odd residue on a well-formed probability.
pub const RESIDUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    /// Keep the body only.
    #[serde(rename = "dewitt")]
    DeWitt,
    /// `r²θθ^# ↦ cos² r` on each party.
    #[serde(rename = "trig")]
    Trigonometric,
    /// Berezin integral against `Π exp(θθ^#)`.
    #[serde(rename = "rogers")]
    ModifiedRogers,
}

impl MapKind {
    pub const ALL: [MapKind; 3] = [MapKind::DeWitt, MapKind::Trigonometric, MapKind::ModifiedRogers];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::DeWitt => "dewitt",
            MapKind::Trigonometric => "trig",
            MapKind::ModifiedRogers => "rogers",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dewitt" => Ok(MapKind::DeWitt),
            "trig" | "trigonometric" => Ok(MapKind::Trigonometric),
            "rogers" | "modified-rogers" => Ok(MapKind::ModifiedRogers),
            other => Err(format!("unknown map `{other}` (expected dewitt, trig or rogers)")),
        }
    }
}

/// Per-party substitution scales for the trigonometric map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigContext {
    pub rho_a: f64,
    pub rho_b: f64,
}

impl TrigContext {
    pub fn new(rho_a: f64, rho_b: f64) -> Self {
        Self { rho_a, rho_b }
    }

    pub fn uniform(rho: f64) -> Self {
        Self::new(rho, rho)
    }
}

fn real_part(z: Complex64) -> Result<f64, MapError> {
    if z.im.abs() > RESIDUE_TOL {
        return Err(MapError::ImaginaryResidue { residue: z.im.abs() });
    }
    Ok(z.re)
}

fn check_even(pg: &Supernumber) -> Result<(), MapError> {
    let (_, odd) = pg.split();
    let odd_part = odd.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if odd_part > RESIDUE_TOL {
        return Err(MapError::NotEven { odd_part });
    }
    Ok(())
}

// (b/ρ²) cos²ρ: the substitution ρ²θθ^# ↦ cos²ρ applied to b θθ^#.
fn trig_term(coeff: f64, rho: f64, party: char) -> Result<f64, MapError> {
    if coeff == 0.0 {
        return Ok(0.0);
    }
    if rho == 0.0 {
        if coeff.abs() <= RESIDUE_TOL {
            return Ok(0.0);
        }
        return Err(MapError::UndefinedTrigSubstitution { party });
    }
    Ok(coeff / (rho * rho) * rho.cos().powi(2))
}

/// Real probability from a Grassmann-valued one.
pub fn extract(kind: MapKind, pg: &Supernumber, ctx: Option<&TrigContext>) -> Result<f64, MapError> {
    check_even(pg)?;
    match kind {
        MapKind::DeWitt => real_part(pg.body()),
        MapKind::ModifiedRogers => real_part(pg.rogers()),
        MapKind::Trigonometric => {
            let ctx = ctx.ok_or(MapError::MissingTrigContext)?;
            let a = real_part(pg.body())?;
            let b_a = real_part(pg.coeff(MASK_AA))?;
            let b_b = real_part(pg.coeff(MASK_BB))?;
            let c = real_part(pg.coeff(MASK_TOP))?;
            // c θAθA#θBθB# = (c/ρA²ρB²)(ρA²θAθA#)(ρB²θBθB#)
            let top = match (ctx.rho_a == 0.0, ctx.rho_b == 0.0) {
                _ if c == 0.0 => 0.0,
                (false, false) => trig_term(c, ctx.rho_a, 'A')? * trig_term(1.0, ctx.rho_b, 'B')?,
                _ if c.abs() <= RESIDUE_TOL => 0.0,
                (true, _) => return Err(MapError::UndefinedTrigSubstitution { party: 'A' }),
                (false, true) => return Err(MapError::UndefinedTrigSubstitution { party: 'B' }),
            };
            Ok(a + trig_term(b_a, ctx.rho_a, 'A')? + trig_term(b_b, ctx.rho_b, 'B')? + top)
        }
    }
}

/// Element-wise [`extract`] over a 3×3 outcome table.
pub fn extract_table(
    kind: MapKind,
    table: &[[Supernumber; 3]; 3],
    ctx: Option<&TrigContext>,
) -> Result<[[f64; 3]; 3], MapError> {
    let mut out = [[0.0; 3]; 3];
    for m in 0..3 {
        for n in 0..3 {
            out[m][n] = extract(kind, &table[m][n], ctx).map_err(|e| MapError::AtOutcome {
                m,
                n,
                source: Box::new(e),
            })?;
        }
    }
    Ok(out)
}

/// Real outcome probabilities of one superqubit, in the order `(0, 1, •)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleOutcome {
    pub p0: f64,
    pub p1: f64,
    pub p_dot: f64,
}

impl SingleOutcome {
    pub fn sum(&self) -> f64 {
        self.p0 + self.p1 + self.p_dot
    }
}

/// Builds the single-superqubit state for `(α, β, r)` and maps its three
/// Grassmann probabilities. The trigonometric map uses `ρ = r`.
pub fn single_superqubit(
    kind: MapKind,
    alpha: Complex64,
    beta: Complex64,
    r: f64,
) -> Result<SingleOutcome, SingleError> {
    let psi = superqubit_state(alpha, beta, r, Party::A)?;
    let ctx = TrigContext::new(r, 0.0);
    let get = |label| extract(kind, &psi.grassmann_prob(label), Some(&ctx));
    Ok(SingleOutcome {
        p0: get(BasisLabel::Zero)?,
        p1: get(BasisLabel::One)?,
        p_dot: get(BasisLabel::Dot)?,
    })
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SingleError {
    #[error(transparent)]
    State(#[from] HilbertError),
    #[error(transparent)]
    Map(#[from] MapError),
}
