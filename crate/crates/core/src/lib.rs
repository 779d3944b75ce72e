pub mod affine_weyl;
pub mod characters;
pub mod error;
pub mod exec;
pub mod ext_multiplicity;
pub mod kl;
pub mod linalg;
pub mod polynomial;
pub mod root_system;

pub use error::{Error, Result};
pub use root_system::{RootSystem, Series, Weight};
pub use characters::{CharacterMap, Characters};
pub use exec::Execution;
pub use ext_multiplicity::{ExtEngine, MultiplicityQuery, MultiplicityTable, Variant};
pub use kl::KlTable;
pub use polynomial::IntPolynomial;
