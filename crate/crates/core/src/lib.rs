pub mod boolalg;
pub mod corpus;
pub mod diagram;
pub mod domain;
pub mod error;
pub mod json;
pub mod lattice;
pub mod limits;
pub mod orient;
pub mod pba;
pub mod verify;

pub use boolalg::{BoolHom, Elem, FinBool};
pub use diagram::{DiagramMorphism, PBDiagram};
pub use error::{Error, Result};
pub use lattice::{FinPoset, Lattice, Partition};
pub use orient::Orientation;
pub use pba::{PieceBool, PieceBoolHom};
