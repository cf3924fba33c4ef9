//! Exact rational geometry: arithmetic, linear programming, polyhedra and
//! Fourier–Motzkin elimination.

pub mod cone;
pub mod fm;
pub mod hull;
pub mod integer;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod system;

pub use fm::{elimination_chain, fm_eliminate_general, variable_interval};
pub use hull::{convex_hull, enumerate_vertices, hull_membership, HRep, Membership, Polytope};
pub use integer::{find_integer_point, InfeasibilityProof, IntegerFeasibility};
pub use lp::{feasible_point, lp_solve, LpOutcome, Sense};
pub use rational::{ceil_int, floor_int, int_rat, rat, ratio, Rational, RationalVector};
pub use system::{InequalitySystem, Row};
