pub mod config;
pub mod error;
pub mod forms;
pub mod liealg;
pub mod linalg;
pub mod matexp;
pub mod sampling;
pub mod scalars;
pub mod reduction;
pub mod liegroup;
pub mod catalog;
pub mod io;
pub mod pfaffian;
