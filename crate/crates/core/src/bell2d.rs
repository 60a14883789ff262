//! Bell's non-contextual hidden-variable model for a single spin-½.
//!
//! The state is the spin-up state along a unit vector `n`; the hidden
//! variable is a second unit vector `m` drawn uniformly on the sphere. An
//! observable `a0 + a·σ` takes the value `a0 + |a|` when `(m + n)·a > 0`
//! and `a0 − |a|` when it is negative.
//!
//! Monte Carlo runs are split into fixed chunks of [`CHUNK`] samples. Chunk
//! `k` draws from a ChaCha8 stream seeded with `seed` and switched to stream
//! `k`, so results do not depend on the thread count. Each chunk is summed
//! with Kahan compensation and the chunk sums are combined in chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type Vec3 = [f64; 3];

pub const CHUNK: u64 = 1 << 16;
const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("{what} is not a unit vector (|v| = {norm})")]
    NotUnit { what: &'static str, norm: f64 },
    #[error("sample count must be at least 1")]
    NoSamples,
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn check_unit(what: &'static str, v: Vec3) -> Result<(), ModelError> {
    let n = norm(v);
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(ModelError::NotUnit { what, norm: n });
    }
    Ok(())
}

/// `A = a0 + a·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable2D {
    pub a0: f64,
    pub a: Vec3,
}

impl Observable2D {
    pub fn new(a0: f64, a: Vec3) -> Self {
        Observable2D { a0, a }
    }

    pub fn sigma_x() -> Self {
        Self::new(0.0, [1.0, 0.0, 0.0])
    }

    pub fn sigma_y() -> Self {
        Self::new(0.0, [0.0, 1.0, 0.0])
    }

    pub fn sigma_z() -> Self {
        Self::new(0.0, [0.0, 0.0, 1.0])
    }

    pub fn magnitude(&self) -> f64 {
        norm(self.a)
    }

    /// The two eigenvalues `a0 − |a|`, `a0 + |a|`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        [self.a0 - self.magnitude(), self.a0 + self.magnitude()]
    }

    /// Quantum expectation in the spin-up state along `n`.
    pub fn quantum_mean(&self, n: Vec3) -> f64 {
        self.a0 + dot(self.a, n)
    }

    pub fn plus(&self, other: &Observable2D) -> Observable2D {
        Observable2D::new(self.a0 + other.a0, [0, 1, 2].map(|i| self.a[i] + other.a[i]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HiddenConfig {
    n: Vec3,
    m: Vec3,
}

impl HiddenConfig {
    pub fn new(n: Vec3, m: Vec3) -> Result<Self, ModelError> {
        check_unit("state direction n", n)?;
        check_unit("hidden direction m", m)?;
        Ok(HiddenConfig { n, m })
    }

    pub fn n(&self) -> Vec3 {
        self.n
    }

    pub fn m(&self) -> Vec3 {
        self.m
    }

    pub fn sample<R: Rng + ?Sized>(n: Vec3, rng: &mut R) -> Result<Self, ModelError> {
        check_unit("state direction n", n)?;
        Ok(HiddenConfig { n, m: uniform_on_sphere(rng) })
    }
}

/// Uniform direction: `cos θ` uniform on [−1, 1], azimuth uniform on [0, 2π).
pub fn uniform_on_sphere<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let c: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - c * c).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), c]
}

/// Value assigned to `obs` in configuration `cfg`.
///
/// `None` on the measure-zero boundary `(m + n)·a = 0`; callers resample
/// `m`. A pure scalar (`a = 0`) has the single value `a0`.
pub fn value(obs: &Observable2D, cfg: &HiddenConfig) -> Option<f64> {
    let mag = obs.magnitude();
    if mag == 0.0 {
        return Some(obs.a0);
    }
    let s = dot([0, 1, 2].map(|i| cfg.m[i] + cfg.n[i]), obs.a);
    if s > 0.0 {
        Some(obs.a0 + mag)
    } else if s < 0.0 {
        Some(obs.a0 - mag)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

/// Draws one RNG per chunk as described in the module docs.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Monte Carlo estimate of `K` per-sample quantities that share each draw of `m`.
///
/// `f` returns `None` to request a fresh `m` (boundary case).
pub fn mc_estimate<const K: usize, F>(n: Vec3, samples: u64, seed: u64, f: F) -> Result<[Estimate; K], ModelError>
where
    F: Fn(&HiddenConfig) -> Option<[f64; K]> + Sync,
{
    check_unit("state direction n", n)?;
    if samples == 0 {
        return Err(ModelError::NoSamples);
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<([Kahan; K], [Kahan; K])> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed, k);
            let len = CHUNK.min(samples - k * CHUNK);
            let mut s = [Kahan::default(); K];
            let mut s2 = [Kahan::default(); K];
            for _ in 0..len {
                let vals = loop {
                    let cfg = HiddenConfig { n, m: uniform_on_sphere(&mut rng) };
                    if let Some(v) = f(&cfg) {
                        break v;
                    }
                };
                for i in 0..K {
                    s[i].add(vals[i]);
                    s2[i].add(vals[i] * vals[i]);
                }
            }
            (s, s2)
        })
        .collect();
    let nf = samples as f64;
    Ok(std::array::from_fn(|i| {
        let mut sum = Kahan::default();
        let mut sq = Kahan::default();
        for (s, s2) in &partial {
            sum.add(s[i].sum);
            sq.add(s2[i].sum);
        }
        let mean = sum.sum / nf;
        let var = (sq.sum / nf - mean * mean).max(0.0);
        Estimate { mean, std_err: (var / nf).sqrt() }
    }))
}

/// Mean of `obs` over uniformly drawn hidden directions.
pub fn mc_mean(obs: &Observable2D, n: Vec3, samples: u64, seed: u64) -> Result<f64, ModelError> {
    let [e] = mc_estimate(n, samples, seed, |cfg| value(obs, cfg).map(|v| [v]))?;
    Ok(e.mean)
}

/// Pointwise failure and ensemble validity of additivity for σx, σy and σx + σy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VonNeumannReport {
    pub n: Vec3,
    pub m: Vec3,
    pub v_x: f64,
    pub v_y: f64,
    pub v_x_plus_v_y: f64,
    pub v_of_sum: f64,
    pub sum_in_allowed_set: bool,
    pub value_of_sum_is_pm_sqrt2: bool,
    pub additive_pointwise: bool,
    pub samples: u64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub mean_of_sum: f64,
    /// `mean_x + mean_y − mean_of_sum`.
    pub additivity_gap: f64,
    /// Four standard errors of the per-sample gap.
    pub gap_tolerance: f64,
    pub means_additive: bool,
}

pub fn von_neumann_demo(n: Vec3, seed: u64, samples: u64) -> Result<VonNeumannReport, ModelError> {
    let (sx, sy) = (Observable2D::sigma_x(), Observable2D::sigma_y());
    let sum_obs = sx.plus(&sy);
    let values = |cfg: &HiddenConfig| -> Option<[f64; 3]> {
        Some([value(&sx, cfg)?, value(&sy, cfg)?, value(&sum_obs, cfg)?])
    };

    // One configuration drawn from a dedicated stream past the Monte Carlo chunks.
    let mut rng = chunk_rng(seed, u64::MAX);
    let (cfg, [v_x, v_y, v_of_sum]) = loop {
        let cfg = HiddenConfig::sample(n, &mut rng)?;
        if let Some(v) = values(&cfg) {
            break (cfg, v);
        }
    };
    let v_sum = v_x + v_y;
    let sqrt2 = std::f64::consts::SQRT_2;

    let [ex, ey, es, gap] = mc_estimate(n, samples, seed, |cfg| {
        let [a, b, c] = values(cfg)?;
        Some([a, b, c, a + b - c])
    })?;
    let gap_tolerance = 4.0 * gap.std_err;
    Ok(VonNeumannReport {
        n,
        m: cfg.m,
        v_x,
        v_y,
        v_x_plus_v_y: v_sum,
        v_of_sum,
        sum_in_allowed_set: [-2.0, 0.0, 2.0].contains(&v_sum),
        value_of_sum_is_pm_sqrt2: (v_of_sum.abs() - sqrt2).abs() < 1e-12,
        additive_pointwise: (v_sum - v_of_sum).abs() < 1e-12,
        samples,
        mean_x: ex.mean,
        mean_y: ey.mean,
        mean_of_sum: es.mean,
        additivity_gap: gap.mean,
        gap_tolerance,
        means_additive: gap.mean.abs() <= gap_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: Vec3 = [0.0, 0.0, 1.0];

    #[test]
    fn eigenstate_value() {
        let cfg = HiddenConfig::new(Z, [0.6, 0.0, 0.8]).unwrap();
        assert_eq!(value(&Observable2D::sigma_z(), &cfg), Some(1.0));
    }

    #[test]
    fn sigma_x_follows_m_x() {
        let sx = Observable2D::sigma_x();
        assert_eq!(value(&sx, &HiddenConfig::new(Z, [1.0, 0.0, 0.0]).unwrap()), Some(1.0));
        assert_eq!(value(&sx, &HiddenConfig::new(Z, [-1.0, 0.0, 0.0]).unwrap()), Some(-1.0));
    }

    #[test]
    fn boundary_requests_resample() {
        let cfg = HiddenConfig::new(Z, [0.0, 0.0, -1.0]).unwrap();
        assert_eq!(value(&Observable2D::sigma_z(), &cfg), None);
        assert_eq!(value(&Observable2D::new(2.5, [0.0; 3]), &cfg), Some(2.5));
    }

    #[test]
    fn antiparallel_take_opposite_branches() {
        let a = Observable2D::new(0.0, [0.0, 0.0, 2.0]);
        let b = Observable2D::new(0.0, [0.0, 0.0, -3.0]);
        let mut rng = chunk_rng(7, 0);
        for _ in 0..1000 {
            let n = uniform_on_sphere(&mut rng);
            let cfg = HiddenConfig::sample(n, &mut rng).unwrap();
            let (va, vb) = (value(&a, &cfg).unwrap(), value(&b, &cfg).unwrap());
            assert_eq!(va.signum(), -vb.signum());
        }
    }

    #[test]
    fn rejects_non_unit() {
        assert!(HiddenConfig::new([0.0, 0.0, 2.0], Z).is_err());
        assert!(mc_mean(&Observable2D::sigma_z(), [1.0, 1.0, 0.0], 10, 0).is_err());
        assert_eq!(mc_mean(&Observable2D::sigma_z(), Z, 0, 0), Err(ModelError::NoSamples));
    }

    #[test]
    fn eigenstate_mean_is_exact() {
        for seed in [0, 1, 99] {
            assert_eq!(mc_mean(&Observable2D::sigma_z(), Z, 10_000, seed).unwrap(), 1.0);
        }
    }

    #[test]
    fn seeded_runs_are_bit_identical() {
        let obs = Observable2D::new(0.3, [0.2, -0.7, 0.4]);
        let a = mc_mean(&obs, Z, 200_000, 42).unwrap();
        let b = mc_mean(&obs, Z, 200_000, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(a.to_bits(), mc_mean(&obs, Z, 200_000, 43).unwrap().to_bits());
    }

    #[test]
    fn sphere_samples_are_unit() {
        let mut rng = chunk_rng(3, 1);
        for _ in 0..1000 {
            assert!((norm(uniform_on_sphere(&mut rng)) - 1.0).abs() < 1e-12);
        }
    }
}
