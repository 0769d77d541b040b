//! Homotopy lattice gauge fields.
//!
//! The crate models gauge fields on a triangulated base as functors from
//! globes of paths to the gauge group: [`complex`] holds the base,
//! [`globes`] the free globe algebra, [`gauge_group`] the group-side
//! arithmetic, [`field`] trivialized fields and their evaluation, [`charge`]
//! topological charges, and [`continuum`] the cutoff map from numerically
//! presented smooth connections.

pub mod complex;
pub mod gauge_group;
pub mod globes;
pub mod field;
pub mod continuum;
pub mod charge;
pub mod format;
pub mod laws;
