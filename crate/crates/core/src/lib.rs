pub mod catalog;
pub mod cohomology;
pub mod comm;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod kaehler;
pub mod current;
pub mod locality;
pub mod document;
pub mod cli;
