//! Superqubits and the CHSH game.
//!
//! A four-generator complex Grassmann algebra ([`grassmann`]), UOSp(1|2)
//! superqubit states and rotations ([`hilbert`]), three maps from
//! Grassmann-valued to real probabilities ([`maps`]), the two-superqubit CHSH
//! game ([`game`]) and a penalized random-restart optimizer over its ten real
//! parameters ([`optimizer`]).

pub mod check;
pub mod error;
pub mod game;
pub mod grassmann;
pub mod hilbert;
pub mod maps;
pub mod optimizer;
pub mod reference;

pub use error::{GameError, HilbertError, MapError, OptError};
pub use game::{
    classical_best, comm_complexity_bound, outcome_tables, play, quantum_baseline, tsirelson_bound,
    win_probability, GameReport, SettingPair, Tables, TrigScale,
};
pub use grassmann::{Generator, Parity, Party, Supernumber};
pub use hilbert::{
    gamma_state, s_element, superqubit_state, u_element, AngleConvention, BasisLabel, GameParameters, SuperKet3,
    SuperKet9, SuperMatrix,
};
pub use maps::{extract, extract_table, MapKind, TrigContext};
pub use optimizer::{evaluate_paper_params, feasibility, optimize, OptConfig, OptResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
