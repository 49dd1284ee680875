pub mod analysis;
pub mod cli;
pub mod dimension_models;
pub mod error;
pub mod ghost_core;
pub mod newton;
pub mod rational;
pub mod weightspace;
