//! Experiment plumbing shared by the command-line driver and the acceptance
//! suite: fixed circuits, instance generators and the matrix file format.

mod circuit;
mod instances;
mod matrix_file;

pub use circuit::{build_example2_circuit, cnot, gate_library, hadamard, Gate};
pub use instances::{example1_instance, example2_probe_state, ExampleInstance};
pub use matrix_file::MatrixFile;
