//! Pivot-rule laboratory for acyclic unique sink orientations (AUSOs) of simple
//! polytopes: instance generation, Random-Edge walks with exact expectations,
//! reach structures on cubes, and the upper bounds they feed.

pub mod bounds;
pub mod error;
pub mod numerics;
pub mod orientations;
pub mod polytopes;
pub mod reach;
pub mod walks;

pub use error::{Error, Result};
pub use numerics::{Rational, RngStream};
pub use orientations::{Auso, HVector, ObjectiveValues};
pub use polytopes::{CubeFace, GraphKind, PolytopeGraph, StackedGeometry};
