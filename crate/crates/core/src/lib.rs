//! Entanglement dynamics of two qubits, each coupled to its own leaky
//! cavity, with bipartite negativities and the genuine four-partite
//! negativity of the joint qubit-cavity state.

pub mod amplitude;
pub mod error;
pub mod emit;
pub mod events;
pub mod evolution;
pub mod gme;
pub mod linalg;
pub mod negativity;
pub mod sdp;
pub mod state;
pub mod sweep;

pub use amplitude::{AmplitudeModel, Regime};
pub use error::{Error, Result};
pub use evolution::{evolve, EvolvedPair};
pub use gme::{genuine_negativity, solve_gme, GmeOptions, GmeProblem, GmeSolution};
pub use negativity::{negativity, negativity_xstate, EntanglementValue, Method};
pub use state::{Bipartition, DensityMatrix, XState};
pub use events::{detect_events, EventReport};
pub use sweep::{run_sweep, InitialState, Measure, SweepConfig, SweepRow, SweepTable, Tolerances};
