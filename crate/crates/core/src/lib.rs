//! Lines and flats tangent to quadrics: exact Plücker algebra, the closed
//! form for 32 real common tangents to four quadrics in 3-space, and a
//! homotopy path tracker for general line-tangency systems.

pub mod error;
pub mod exactnum;
pub mod grassmann;
pub mod quadrics;
pub mod tetra32;
pub mod tracker;

pub use error::{Error, Result};
