//! Exact simulation of the Goldilocks quantum cellular automaton on a
//! one-dimensional qubit chain, its dual domain-wall signals, the phase
//! ledger of general gates, coarse-graining channels and spacetime records.
//!
//! Everything numeric is generic over [`Real`]; the aliases below fix the
//! scalar to `f64` or `f32`.

pub mod cli;
pub mod coarse;
pub mod dirac;
pub mod dual;
pub mod error;
pub mod gauge;
pub mod linalg;
pub mod num;
pub mod qca;
pub mod record;
pub mod render;
pub mod stokes;

pub use coarse::{
    max_coherence, renormalization_experiment, ChoiMatrix, CoarseChannel, CoarsePartition,
    DensityMatrix, MaxCoherence, RenormMode, RenormReport,
};
pub use dirac::{convergence_study, dirac_reference, ConvergenceRow, DiracField};
pub use dual::{
    embed_single_signal, extract_walker, signals_between, spatial_signals, walk, walker_step,
    walls, Chirality, Gauge, SignalConfig, WalkerBoundary, WalkerState, Wall,
};
pub use error::{GqcaError, Result};
pub use gauge::{
    crossing_phase_check, general_gate, trajectory_phase_shift, verify_color_blindness,
    wall_pair_phase_check, ColorBlindnessReport, PhaseLedger,
};
pub use linalg::{CMatrix, Unitary2};
pub use num::{Real, C};
pub use qca::{
    build_local_gate, evolve, evolve_async, flip_state, BasisConfig, BoundaryCondition, Capacity,
    GateParams, PureState, UpdateSchedule,
};
pub use record::{MarginalRecord, Record, SpacetimeRecord, Vertex};
pub use render::{render_diagram, render_ppm, render_text, Overlay, Style};
pub use stokes::{
    exhaustive_stokes_check, invisible_pair_demo, verify_stokes, LatticePath, ProbeLattice,
};

pub type PureState64 = PureState<f64>;
pub type PureState32 = PureState<f32>;
pub type GateParams64 = GateParams<f64>;
pub type GateParams32 = GateParams<f32>;
pub type WalkerState64 = WalkerState<f64>;
pub type DiracField64 = DiracField<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type CoarseChannel64 = CoarseChannel<f64>;
pub type ChoiMatrix64 = ChoiMatrix<f64>;
pub type Unitary2_64 = Unitary2<f64>;
pub type PhaseLedger64 = PhaseLedger<f64>;
/// Phase ledger with exact rational phases (in units of `pi`, say).
pub type ExactPhaseLedger = PhaseLedger<num_rational::Rational64>;
