use crate::error::Result;
use crate::matkit::{random_density, random_unitary, ComplexMatrix};
use crate::search::{exact_instance, ChannelInstance};

/// A generated instance together with the unitary that produced it.
#[derive(Debug, Clone)]
pub struct ExampleInstance {
    pub hidden: ComplexMatrix,
    pub instance: ChannelInstance,
}

/// Exact instance with a random hidden unitary and `pairs` random densities.
/// Pair `k` uses density seed `seed + k`, so the first pair does not depend
/// on `pairs`.
pub fn example1_instance(n: usize, seed: u64, pairs: usize) -> Result<ExampleInstance> {
    let hidden = random_unitary(n, seed);
    let rhos = (0..pairs as u64)
        .map(|k| random_density(n, seed.wrapping_add(k)))
        .collect();
    let instance = exact_instance(&hidden, rhos)?;
    Ok(ExampleInstance { hidden, instance })
}

/// Probe state for the circuit reconstruction runs.
pub fn example2_probe_state(seed: u64) -> ComplexMatrix {
    random_density(8, seed)
}
