//! Brauer relations, regulator constants and their arithmetic consequences,
//! computed exactly over the integers.

pub mod cohomology;
pub mod error;
pub mod gmodules;
pub mod groups;
pub mod inertial;
pub mod json;
pub mod linalg;
pub mod regconst;
pub mod relations;
pub mod verify;

pub use error::{Error, Result};
