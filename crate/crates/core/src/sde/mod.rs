//! Stochastic integration of the phase-space systems.

mod ensemble;
mod heun;
mod path;
mod system;
mod systems;
mod wiener;

pub use ensemble::{fold_paths, heun_integrate, reduce_paths, run_path, simulate_ensemble, Sampling};
pub use heun::{heun_step, integrate};
pub use path::{moving_average, read_phase_csv, write_phase_csv, PathEnsemble, PathMetadata, PhasePath};
pub use system::{FnSystem, SdeSystem};
pub use systems::{
    coherent_system, cooling_trajectory, ground_state_system, ou_system, ClassicalTrajectory, CoherentSystem,
    GroundStateSystem, OrbitPoint, OuSystem,
};
pub use wiener::{StreamId, WienerStream, DEFAULT_SEED};
