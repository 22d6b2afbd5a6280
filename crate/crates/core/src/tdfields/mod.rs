//! Time-dependent magnetic fields: fixed direction with varying magnitude,
//! and a field rotating about ẑ. Both reduce to Hill-type equations, which
//! are analysed through their monodromy matrices.

pub mod case1;
pub mod hill;
pub mod rotating;
pub mod signal;

pub use case1::{eval_h4, rotation_case1, rotation_case1_ode, FixedAxisField};
pub use hill::{
    bisect, frozen_coefficient_monodromy, hill_monodromy, hill_monodromy_default, hill_monodromy_with, mathieu_boundary,
    stability_map, HillSystem, MonodromyReport, Stability, StabilityRow, VectorHillSystem, VectorMonodromy,
};
pub use rotating::{ct3_reduce, ct4_reduce, Ct3, Ct4, RotatingField, H5, H6};
pub use signal::Signal;
