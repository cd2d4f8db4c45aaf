//! Seeded path generation.
//!
//! Every sample is drawn from its own ChaCha8 stream: the master seed selects
//! the key and the sample index selects the stream, so a path depends only
//! on `(seed, index)` and never on how samples are spread over threads.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::combinatorics::check_joint_lengths;
use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// Increment law of a walk.
#[derive(Clone, Debug, PartialEq)]
pub enum WalkLaw {
    /// i.i.d. standard Gaussian vectors.
    SymmetricGaussian,
    /// `shift + scale * N(0, I)`; exchangeable but not sign-symmetric unless
    /// the shift vanishes.
    ShiftedGaussian { shift: Vec<f64>, scale: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec {
    pub n: usize,
    pub d: usize,
    pub law: WalkLaw,
}

impl WalkSpec {
    pub fn symmetric(n: usize, d: usize) -> Result<Self> {
        let spec = WalkSpec { n, d, law: WalkLaw::SymmetricGaussian };
        spec.validate()?;
        Ok(spec)
    }

    pub fn shifted(n: usize, shift: Vec<f64>, scale: f64) -> Result<Self> {
        let spec = WalkSpec { n, d: shift.len(), law: WalkLaw::ShiftedGaussian { shift, scale } };
        spec.validate()?;
        Ok(spec)
    }

    /// The law `1 + t * N(0, I)` with all-ones drift.
    pub fn nonsymmetric(n: usize, d: usize, t: f64) -> Result<Self> {
        Self::shifted(n, vec![1.0; d], t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("walk length must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if let WalkLaw::ShiftedGaussian { shift, scale } = &self.law {
            if shift.len() != self.d {
                return Err(Error::InvalidArgument(format!(
                    "shift has length {} but dimension is {}",
                    shift.len(),
                    self.d
                )));
            }
            if !(*scale > 0.0 && scale.is_finite()) {
                return Err(Error::InvalidArgument(format!("noise scale must be positive, got {scale}")));
            }
            if shift.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("shift must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.law, WalkLaw::SymmetricGaussian)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BridgeSpec {
    pub m: usize,
    pub d: usize,
}

impl BridgeSpec {
    pub fn new(m: usize, d: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument("bridge length must be at least 2".into()));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(BridgeSpec { m, d })
    }
}

/// A collection of independent symmetric walks and bridges in a common
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointSpec {
    pub d: usize,
    pub walks: Vec<usize>,
    pub bridges: Vec<usize>,
}

impl JointSpec {
    pub fn new(d: usize, walks: Vec<usize>, bridges: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        check_joint_lengths(&walks, &bridges)?;
        Ok(JointSpec { d, walks, bridges })
    }

    /// Total number of increments over all paths.
    pub fn total_steps(&self) -> usize {
        self.walks.iter().sum::<usize>() + self.bridges.iter().sum::<usize>()
    }
}

/// Generator for sample `stream` of a run with master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Partial sums `S_0 = 0, S_1, ..., S_n` of the given increments.
fn partial_sums(d: usize, increments: &[Vec<f64>]) -> Vec<f64> {
    let mut coords = vec![0.0; d * (increments.len() + 1)];
    for (i, step) in increments.iter().enumerate() {
        for j in 0..d {
            coords[(i + 1) * d + j] = coords[i * d + j] + step[j];
        }
    }
    coords
}

pub fn walk_increments<R: Rng + ?Sized>(spec: &WalkSpec, rng: &mut R) -> Vec<Vec<f64>> {
    (0..spec.n)
        .map(|_| {
            let z = gaussian_vector(rng, spec.d);
            match &spec.law {
                WalkLaw::SymmetricGaussian => z,
                WalkLaw::ShiftedGaussian { shift, scale } => {
                    shift.iter().zip(z).map(|(m, x)| m + scale * x).collect()
                }
            }
        })
        .collect()
}

/// Centered Gaussian increments `xi_i - mean(xi)`.
pub fn bridge_increments<R: Rng + ?Sized>(spec: &BridgeSpec, rng: &mut R) -> Vec<Vec<f64>> {
    let raw: Vec<Vec<f64>> = (0..spec.m).map(|_| gaussian_vector(rng, spec.d)).collect();
    let mean: Vec<f64> = (0..spec.d).map(|j| raw.iter().map(|x| x[j]).sum::<f64>() / spec.m as f64).collect();
    raw.into_iter().map(|x| x.iter().zip(&mean).map(|(a, b)| a - b).collect()).collect()
}

pub fn sample_walk_with<R: Rng + ?Sized>(spec: &WalkSpec, rng: &mut R) -> PointSet {
    let inc = walk_increments(spec, rng);
    PointSet::from_flat(spec.d, partial_sums(spec.d, &inc)).expect("walk has n + 1 >= 2 points")
}

/// Path `S_0 = 0, ..., S_m`, with `S_m` set to exactly zero to absorb the
/// rounding left by centering.
pub fn sample_bridge_with<R: Rng + ?Sized>(spec: &BridgeSpec, rng: &mut R) -> PointSet {
    let inc = bridge_increments(spec, rng);
    let mut coords = partial_sums(spec.d, &inc);
    let last = spec.m * spec.d;
    coords[last..].iter_mut().for_each(|x| *x = 0.0);
    PointSet::from_flat(spec.d, coords).expect("bridge has m + 1 >= 3 points")
}

/// Walks first, then bridges, in the order listed by the spec.
pub fn sample_joint_with<R: Rng + ?Sized>(spec: &JointSpec, rng: &mut R) -> Vec<PointSet> {
    let walks = spec.walks.iter().map(|&n| WalkSpec { n, d: spec.d, law: WalkLaw::SymmetricGaussian });
    let mut out: Vec<PointSet> = walks.map(|w| sample_walk_with(&w, rng)).collect();
    for &m in &spec.bridges {
        out.push(sample_bridge_with(&BridgeSpec { m, d: spec.d }, rng));
    }
    out
}

pub fn sample_walk(spec: &WalkSpec, seed: u64) -> PointSet {
    sample_walk_with(spec, &mut stream_rng(seed, 0))
}

pub fn sample_bridge(spec: &BridgeSpec, seed: u64) -> PointSet {
    sample_bridge_with(spec, &mut stream_rng(seed, 0))
}

pub fn sample_joint(spec: &JointSpec, seed: u64) -> Vec<PointSet> {
    sample_joint_with(spec, &mut stream_rng(seed, 0))
}

/// Walk with increments `1 + t * N(0, I)`.
pub fn sample_nonsymmetric_walk(n: usize, d: usize, t: f64, seed: u64) -> Result<PointSet> {
    Ok(sample_walk(&WalkSpec::nonsymmetric(n, d, t)?, seed))
}
