pub mod arithmetic;
pub mod cli;
pub mod linalg;
pub mod model;
pub mod operator;
pub mod spectra;
pub mod symbols;
