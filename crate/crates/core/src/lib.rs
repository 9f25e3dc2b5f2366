pub mod bounds;
pub mod cli;
pub mod movegraph;
pub mod moves;
pub mod oracle;
pub mod surface;
pub mod triangulation;
