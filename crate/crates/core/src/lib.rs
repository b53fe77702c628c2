pub mod error;
pub mod sta;
pub mod diffops;
pub mod fields;
pub mod spinor;
pub mod spectrum;
pub mod verify;
pub mod report;
