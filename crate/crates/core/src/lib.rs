//! Mackey functors, box products, norms and Tambara functors for cyclic
//! p-groups.

pub mod boxprod;
pub mod diagram;
pub mod error;
pub mod group;
pub mod gset;
pub mod abgroup;
pub mod iso;
pub mod json;
pub mod mackey;
pub mod norm;
pub mod matrix;
pub mod reciprocity;
pub mod tambara;

pub use error::{Error, Result};
pub use group::{GroupCtx, Level};
