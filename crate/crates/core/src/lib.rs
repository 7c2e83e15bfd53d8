pub mod construct;
pub mod discover;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod inequalities;
pub mod order;
pub mod verify;
