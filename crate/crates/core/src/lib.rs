pub mod assets;
pub mod checker;
pub mod cli;
pub mod fh;
pub mod model;
pub mod proof;
pub mod syntax;
