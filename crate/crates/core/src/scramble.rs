//! Seeded anonymization of scheme data: a random vertex order and random
//! names for the non-identity classes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scheme::SchemeMatrix;

/// Both permutations are kept so a caller can undo or compose them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scramble {
    pub seed: u64,
    /// Vertex `x` moves to `vertex_perm[x]`.
    pub vertex_perm: Vec<usize>,
    /// Class `k` is renamed `class_perm[k]`; `class_perm[0] == 0`.
    pub class_perm: Vec<usize>,
}

impl Scramble {
    pub fn new(seed: u64, n: usize, d: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vertex_perm: Vec<usize> = (0..n).collect();
        vertex_perm.shuffle(&mut rng);
        let mut class_perm: Vec<usize> = (0..=d).collect();
        class_perm[1..].shuffle(&mut rng);
        Self { seed, vertex_perm, class_perm }
    }

    pub fn apply(&self, m: &SchemeMatrix) -> SchemeMatrix {
        m.permute_vertices(&self.vertex_perm).relabel_classes(&self.class_perm).expect("class permutation fixes 0")
    }

    /// Vertex shuffle only, leaving class names intact.
    pub fn apply_vertices(&self, m: &SchemeMatrix) -> SchemeMatrix {
        m.permute_vertices(&self.vertex_perm)
    }
}

pub fn scramble(m: &SchemeMatrix, seed: u64) -> (SchemeMatrix, Scramble) {
    let s = Scramble::new(seed, m.order(), m.num_classes());
    (s.apply(m), s)
}
