//! Independent numerical oracles for the test suites.
//!
//! Nothing here touches the main crate: the Heston pricer uses the textbook
//! closed-form Riccati solution with a P1/P2 probability representation and
//! adaptive Simpson integration, and the constrained-KL solver works directly
//! on the primal over the simplex. Both exist so the production code paths
//! can be checked against genuinely different routes.

pub mod heston;
pub mod primal;

pub use heston::{heston_call, heston_cf, heston_riccati_d, HestonParams};
pub use primal::{solve_primal, PrimalProblem};
