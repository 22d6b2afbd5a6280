//! Classical side: Hamiltonians, driven-oscillator solutions, the two
//! canonical maps, and the RK4 oracle that certifies them.

pub mod drive;
pub mod driven;
pub mod equivalence;
pub mod hamiltonians;
pub mod maps;
pub mod oracle;
pub mod state;

pub use drive::{Drive, SampledDrive, Sinusoid};
pub use driven::{driven_path, solve_driven, DrivenPath, DrivenSolution, PathPoint, QuadratureSpec};
pub use equivalence::{equivalence_report, EquivalenceConfig, EquivalenceReport, EquivalenceSample};
pub use hamiltonians::{eval_h1, eval_h2, eval_h3, StaticField};
pub use maps::{ct1, ct2, CanonicalMap, Ct1, Ct2};
pub use oracle::{rk4_oracle, rk4_trajectory};
pub use state::PhaseState;
