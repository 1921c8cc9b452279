//! Concrete ordered vector spaces over the rationals: vectors, the positive
//! cone, ideals and positive functionals.

mod cone;
mod functional;
mod ideal;
mod lp;
mod periodic;
mod space;
mod vector;

pub use cone::{check_proper, cone_coefficients, cone_leq, is_positive, is_proper_cone, is_strictly_positive};
pub use functional::{functional_eval, FunctionalSpec, FunctionalWire};
pub use ideal::{ideal_contains, IdealCertificate};
pub use lp::nonneg_solution;
pub use periodic::PeriodicZ;
pub use space::{PolyConeSpec, Space, MAX_FINITE_COORDS};
pub use vector::{format_point, parse_point, Data, Vector};
