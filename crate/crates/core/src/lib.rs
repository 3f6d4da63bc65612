//! Exact-arithmetic tools for simplicial contextuality scenarios.
//!
//! Measurement spaces are graphs and two-dimensional scenarios glued from
//! triangles. Distributions are stored in edge coordinates as exact
//! rationals. The crate decides contextuality (linear programming and circle
//! inequalities), enumerates polytope vertices, runs Fourier–Motzkin
//! elimination, and transports distributions and Bell inequalities along
//! collapsing maps.
//!
//! ```
//! use ctxlab::{bell, distribution::Verdict, polytope};
//!
//! let pr = bell::pr_box(4, &[true, false, false, false]).unwrap();
//! let cert = polytope::is_noncontextual_lp(&pr).unwrap();
//! assert_eq!(cert.verdict, Verdict::Contextual);
//! assert!(!pr.satisfies(cert.separating.as_ref().unwrap()).unwrap());
//! ```

pub mod bell;
pub mod collapse;
pub mod distribution;
pub mod error;
pub mod fm;
pub mod gf2;
pub mod graph;
pub mod inequality;
pub mod limits;
pub mod polytope;
pub mod rational;
pub mod scenario;

pub use collapse::{collapse, CollapseMap};
pub use distribution::{EdgeDistribution, OutcomeAssignment, TriangleTable, Verdict};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use inequality::{LinearInequality, Mode};
pub use rational::Rational;
pub use scenario::{Scenario, Triangle};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/scenarios.md")]
mod book_scenarios {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/distributions.md")]
mod book_distributions {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/contextuality.md")]
mod book_contextuality {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/elimination.md")]
mod book_elimination {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/collapsing.md")]
mod book_collapsing {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
