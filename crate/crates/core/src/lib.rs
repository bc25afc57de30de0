//! Dimensions of linear systems on surfaces obtained by blowing up the
//! pencil at infinity of a curve with one place at infinity, and the
//! regularity bounds for generic fat points that follow from them.
//!
//! Modules, bottom up:
//! - [`proximity`]: proximity graphs, excesses and unloading;
//! - [`ams`]: delta-sequences and the recipe graphs `G(n_1, ..., n_r)`;
//! - [`surface`]: the Picard lattice and the `h^0`/`h^1` engine;
//! - [`regularity`]: expected dimension, exact regularity, the `beta` bound;
//! - [`oracle`]: interpolation ranks at random points, for cross-checks.

pub mod ams;
pub mod arith;
pub mod error;
pub mod oracle;
pub mod proximity;
pub mod regularity;
pub mod surface;

pub use ams::{build_graph, validate_delta_sequence, DeltaSequence, GraphRecipe};
pub use arith::Int;
pub use error::{Error, Result};
pub use proximity::{MultiplicitySystem, ProximityGraph};
pub use regularity::{beta_bound, best_beta, BoundReport, RegularityVerdict};
pub use surface::{DivisorClass, SurfaceModel};
