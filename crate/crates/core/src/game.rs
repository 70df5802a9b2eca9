//! The CHSH game played with two superqubits.
//!
//! A local outcome `|0⟩` is announced as bit 0; `|1⟩` and `|•⟩` are both
//! announced as bit 1. The referee's question pairs `(i, j)` are stored in the
//! order `00, 01, 10, 11` and each 3×3 outcome table in the order `(•, 0, 1)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::grassmann::Supernumber;
use crate::hilbert::{gamma_state, GameParameters};
use crate::maps::{extract_table, MapKind, TrigContext};

pub type OutcomeTable = [[f64; 3]; 3];
pub type Tables = [OutcomeTable; 4];
pub type GrassmannTables = [[[Supernumber; 3]; 3]; 4];

/// Classical CHSH bound.
pub const CLASSICAL_BOUND: f64 = 0.75;
/// PR-box winning probability, reported as a reference constant only.
pub const PR_BOX: f64 = 1.0;
/// Allowed distance outside `[0, 1]` for a feasible outcome probability.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// `cos²(π/8)`.
pub fn tsirelson_bound() -> f64 {
    (PI / 8.0).cos().powi(2)
}

/// `(3 + √6)/6`, the communication-complexity triviality threshold.
pub fn comm_complexity_bound() -> f64 {
    (3.0 + 6f64.sqrt()) / 6.0
}

/// Standard angle set reaching `cos²(π/8)` on the Bell state: Alice `{0, π/4}`, Bob `{π/8, -π/8}`.
pub fn standard_chsh_angles() -> GameParameters {
    GameParameters::angles(0.0, PI / 4.0, PI / 8.0, -PI / 8.0)
}

/// Referee's question pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SettingPair {
    pub i: u8,
    pub j: u8,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] = [
        SettingPair { i: 0, j: 0 },
        SettingPair { i: 0, j: 1 },
        SettingPair { i: 1, j: 0 },
        SettingPair { i: 1, j: 1 },
    ];

    pub fn index(self) -> usize {
        (self.i * 2 + self.j) as usize
    }

    /// Each pair is asked with probability 1/4.
    pub fn weight(self) -> f64 {
        0.25
    }
}

const DOT: usize = 0;
const ZERO: usize = 1;
const ONE: usize = 2;

const fn cells(list: &[(usize, usize)]) -> [[bool; 3]; 3] {
    let mut mask = [[false; 3]; 3];
    let mut k = 0;
    while k < list.len() {
        mask[list[k].0][list[k].1] = true;
        k += 1;
    }
    mask
}

const AGREE: [[bool; 3]; 3] = cells(&[(ZERO, ZERO), (ONE, ONE), (ONE, DOT), (DOT, ONE), (DOT, DOT)]);
const DISAGREE: [[bool; 3]; 3] = cells(&[(ZERO, ONE), (ONE, ZERO), (ZERO, DOT), (DOT, ZERO)]);

/// Winning cells per question pair, transcribed cell by cell from the payoff sum.
pub const WINNING_MASK: [[[bool; 3]; 3]; 4] = [AGREE, AGREE, AGREE, DISAGREE];

/// Announced bit for a local outcome index.
pub fn announced_bit(outcome: usize) -> u8 {
    (outcome != ZERO) as u8
}

/// Where the trigonometric map takes its per-party scales from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigScale {
    /// `ρ_A = r_i`, `ρ_B = s_j`.
    #[default]
    Rotation,
    /// `ρ_A = p`, `ρ_B = q`.
    State,
}

impl TrigScale {
    pub fn context(self, params: &GameParameters, pair: SettingPair) -> TrigContext {
        match self {
            TrigScale::Rotation => TrigContext::new(params.r(pair.i as usize), params.s(pair.j as usize)),
            TrigScale::State => TrigContext::new(params.p, params.q),
        }
    }
}

/// Grassmann probabilities `p_G^{(ij)}_{mn}` for every setting.
pub fn grassmann_tables(params: &GameParameters) -> Result<GrassmannTables, GameError> {
    if !params.is_finite() {
        return Err(GameError::NonFinite);
    }
    let gamma = gamma_state(params.p, params.q);
    let mut out = [[[Supernumber::zero(); 3]; 3]; 4];
    for pair in SettingPair::ALL {
        let (za, zb) = params.rotations(pair.i as usize, pair.j as usize);
        out[pair.index()] = gamma.apply_local(&za, &zb)?.prob_table();
    }
    Ok(out)
}

/// Real outcome tables under `map`, trigonometric scales from the rotations.
pub fn outcome_tables(params: &GameParameters, map: MapKind) -> Result<Tables, GameError> {
    outcome_tables_with(params, map, TrigScale::default())
}

pub fn outcome_tables_with(params: &GameParameters, map: MapKind, trig: TrigScale) -> Result<Tables, GameError> {
    let grassmann = grassmann_tables(params)?;
    let mut tables = [[[0.0; 3]; 3]; 4];
    for pair in SettingPair::ALL {
        let ctx = trig.context(params, pair);
        tables[pair.index()] = extract_table(map, &grassmann[pair.index()], Some(&ctx)).map_err(|source| {
            GameError::Extraction {
                i: pair.i as usize,
                j: pair.j as usize,
                source,
            }
        })?;
    }
    Ok(tables)
}

/// `(1/4) Σ_{ij} Σ_{winning mn} p^{(ij)}_{mn}`.
pub fn win_probability(tables: &Tables) -> f64 {
    SettingPair::ALL
        .iter()
        .map(|pair| {
            let mask = &WINNING_MASK[pair.index()];
            let table = &tables[pair.index()];
            let won: f64 = (0..3)
                .flat_map(|m| (0..3).map(move |n| (m, n)))
                .filter(|&(m, n)| mask[m][n])
                .map(|(m, n)| table[m][n])
                .sum();
            pair.weight() * won
        })
        .sum()
}

/// Largest distance of any entry outside `[0, 1]`.
pub fn worst_violation(tables: &Tables) -> f64 {
    tables
        .iter()
        .flatten()
        .flatten()
        .map(|&v| if v < 0.0 { -v } else if v > 1.0 { v - 1.0 } else { 0.0 })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub map: MapKind,
    pub params: GameParameters,
    pub tables: Tables,
    pub p_win: f64,
    pub feasible: bool,
    pub worst_violation: f64,
}

impl GameReport {
    pub fn from_tables(map: MapKind, params: GameParameters, tables: Tables) -> Self {
        let worst = worst_violation(&tables);
        Self {
            map,
            params,
            tables,
            p_win: win_probability(&tables),
            feasible: worst <= FEASIBILITY_TOL,
            worst_violation: worst,
        }
    }
}

pub fn play(params: &GameParameters, map: MapKind) -> Result<GameReport, GameError> {
    play_with(params, map, TrigScale::default())
}

pub fn play_with(params: &GameParameters, map: MapKind, trig: TrigScale) -> Result<GameReport, GameError> {
    let tables = outcome_tables_with(params, map, trig)?;
    Ok(GameReport::from_tables(map, *params, tables))
}

/// Deterministic classical strategy: `answer[x]` is the bit sent on question `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalStrategy {
    pub alice: [u8; 2],
    pub bob: [u8; 2],
}

impl ClassicalStrategy {
    pub fn value(&self) -> f64 {
        let wins = SettingPair::ALL
            .iter()
            .filter(|pr| (self.alice[pr.i as usize] ^ self.bob[pr.j as usize]) == (pr.i & pr.j))
            .count();
        wins as f64 / 4.0
    }

    /// All 16 deterministic strategies.
    pub fn all() -> impl Iterator<Item = ClassicalStrategy> {
        (0u8..16).map(|k| ClassicalStrategy {
            alice: [k & 1, (k >> 1) & 1],
            bob: [(k >> 2) & 1, (k >> 3) & 1],
        })
    }
}

/// Best classical value by enumeration.
pub fn classical_best() -> f64 {
    ClassicalStrategy::all().map(|s| s.value()).fold(f64::MIN, f64::max)
}

/// DeWitt game value of the Bell state at the standard angle set.
pub fn quantum_baseline() -> f64 {
    let tables = outcome_tables(&standard_chsh_angles(), MapKind::DeWitt).expect("finite angles");
    win_probability(&tables)
}
