pub mod algebra;
pub mod arrows;
pub mod domain;
pub mod jetcore;
pub mod spencer;
pub mod expr;
pub mod field;
pub mod forms;
pub mod frames;
pub mod catalog;
pub mod liepair;
pub mod io;
pub mod checks;
pub mod cli;
