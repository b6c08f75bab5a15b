//! Seeded random tanglegrams.
//!
//! Random numbers come from ChaCha8 keyed by the 64-bit seed. The sample with
//! index `i` of size `n` reads from stream `(n << 32) | i`, so samples are
//! independent of each other, of generation order, and of the platform.
//!
//! Neither distribution here is uniform over tanglegram isomorphism classes.
//! Both draw the two trees independently and the matching uniformly:
//!
//! * `shape-uniform-substitute`: each tree uniform over the `(2n-3)!!`
//!   leaf-labeled rooted binary trees (random edge grafting);
//! * `plane-uniform`: each tree uniform over plane binary trees with `n`
//!   leaves (Rémy's algorithm: grafting plus a random side).
//!
//! After the uniform matching is applied, both induce the same distribution on
//! unlabeled tree shapes (each shape weighted by the inverse of its
//! automorphism count); they differ in the stored child orders and in how
//! many random draws they consume.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tanglegram::Tanglegram;
use crate::tree::{BinaryTree, TreeBuilder};

/// Name of the generator family, recorded in experiment metadata.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Distribution {
    PlaneUniform,
    #[default]
    ShapeUniformSubstitute,
}

impl Distribution {
    pub fn name(&self) -> &'static str {
        match self {
            Distribution::PlaneUniform => "plane-uniform",
            Distribution::ShapeUniformSubstitute => "shape-uniform-substitute",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane-uniform" => Ok(Distribution::PlaneUniform),
            "shape-uniform-substitute" => Ok(Distribution::ShapeUniformSubstitute),
            other => Err(Error::InvalidArgument(format!(
                "unknown distribution `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    pub distribution: Distribution,
}

impl SampleConfig {
    pub fn new(n: usize, seed: u64, count: usize) -> Self {
        Self {
            n,
            seed,
            count,
            distribution: Distribution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument(
                "sample size n must be at least 1".into(),
            ));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument(
                "sample count must be at least 1".into(),
            ));
        }
        if self.n > u32::MAX as usize || self.count > u32::MAX as usize {
            return Err(Error::InvalidArgument(
                "n and count must fit in 32 bits".into(),
            ));
        }
        Ok(())
    }
}

/// Generator for sample `index` of size `n` under `seed`.
pub fn sample_rng(seed: u64, n: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | index as u64);
    rng
}

/// Uniform index below `bound`, drawn as a `u64` so that the stream does not
/// depend on the width of `usize`.
fn below<R: Rng + ?Sized>(rng: &mut R, bound: usize) -> usize {
    rng.gen_range(0..bound as u64) as usize
}

fn grafted<R: Rng + ?Sized>(n: usize, rng: &mut R, random_side: bool) -> Result<BinaryTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("random tree needs n >= 1".into()));
    }
    let mut b = TreeBuilder::new();
    b.leaf("1");
    for i in 2..=n {
        // 2i-3 nodes so far, each with the edge above it (virtual for the root).
        let at = below(rng, b.len());
        let leaf_first = random_side && rng.gen::<bool>();
        b.graft(at, i.to_string(), leaf_first);
    }
    b.build()
}

/// Uniformly random leaf-labeled rooted binary tree on `n` leaves labeled
/// `1..=n`: leaf `i + 1` is grafted onto a uniformly chosen edge, including
/// the edge above the root.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BinaryTree> {
    grafted(n, rng, false)
}

/// Uniformly random plane binary tree on `n` leaves (Rémy's algorithm).
pub fn random_plane_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BinaryTree> {
    grafted(n, rng, true)
}

/// Uniform permutation of `0..n` (Fisher-Yates with `u64` draws).
fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(rng, i + 1);
        p.swap(i, j);
    }
    p
}

/// Sample `index` of the configured stream: two independent random trees and
/// a uniformly random matching.
pub fn random_tanglegram(cfg: &SampleConfig, index: usize) -> Result<Tanglegram> {
    cfg.validate()?;
    let mut rng = sample_rng(cfg.seed, cfg.n, index);
    let tree = match cfg.distribution {
        Distribution::ShapeUniformSubstitute => random_tree::<ChaCha8Rng>,
        Distribution::PlaneUniform => random_plane_tree::<ChaCha8Rng>,
    };
    let left = tree(cfg.n, &mut rng)?;
    let right = tree(cfg.n, &mut rng)?;
    let matching = permutation(cfg.n, &mut rng);
    Tanglegram::new(left, right, matching)
}

/// Samples `0..cfg.count`, generated in parallel.
pub fn samples(cfg: &SampleConfig) -> Result<Vec<Tanglegram>> {
    cfg.validate()?;
    (0..cfg.count)
        .into_par_iter()
        .map(|i| random_tanglegram(cfg, i))
        .collect()
}
