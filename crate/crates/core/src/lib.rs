pub mod arith;
pub mod circuit;
pub mod cli;
pub mod equiv;
pub mod lang;
pub mod selftest;
pub mod sim;
pub mod synth;
pub mod tgraph;
