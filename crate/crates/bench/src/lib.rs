//! Seeded inputs shared by the benchmarks in `benches/`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solspace::constructions::{fixtures, simplicial_to_vertexset};
use solspace::{IntegerMatrix, VertexSet};

/// Each vertex of `{0,1}^d` kept independently with probability `density`.
pub fn random_vertex_set(d: usize, density: f64, seed: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VertexSet::from_vertices(d, (0..1u64 << d).filter(|_| rng.random_bool(density))).expect("d within range")
}

/// Realized 6-vertex projective plane: a 6-dimensional vertex set with 2-torsion.
pub fn projective_plane() -> VertexSet {
    simplicial_to_vertexset(&fixtures::projective_plane()).expect("fixture realizes")
}

/// Dense `n x n` matrix with entries in `-range..=range`.
pub fn random_matrix(n: usize, range: i64, seed: u64) -> IntegerMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-range..=range)).collect()).collect();
    IntegerMatrix::from_rows(&rows).expect("rectangular")
}
