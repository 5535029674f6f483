//! Seeded fixtures shared by the benchmarks.

use conegap::sampling::{random_condition_matrix, random_interior};
use conegap::{ComplexMatrix, ComplexVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SIZES: [usize; 4] = [2, 4, 8, 12];

pub fn matrix(n: usize) -> ComplexMatrix {
    random_condition_matrix(n, 0.5, &mut ChaCha8Rng::seed_from_u64(n as u64))
}

pub fn pairs(n: usize, count: usize) -> Vec<(ComplexVector, ComplexVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + n as u64);
    (0..count)
        .map(|_| (random_interior(n, &mut rng), random_interior(n, &mut rng)))
        .collect()
}
