use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    /// angle * (1 + u)
    #[default]
    Multiplicative,
    /// angle + u, with u in radians
    Additive,
}

/// Random over/under rotation with `u` uniform in `[-cap, cap]`.
///
/// Owns its own RNG stream so enabling noise never shifts the measurement
/// stream of a trajectory. A zero cap draws nothing and returns angles
/// unchanged.
#[derive(Clone, Debug)]
pub struct RotationNoise {
    cap: f64,
    mode: NoiseMode,
    rng: ChaCha8Rng,
}

impl RotationNoise {
    pub fn new(cap: f64, mode: NoiseMode, seed: u64) -> Self {
        assert!(cap >= 0.0 && cap.is_finite(), "noise cap must be finite and >= 0");
        RotationNoise {
            cap,
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Noise on an explicit stream of a shared seed.
    pub fn with_stream(cap: f64, mode: NoiseMode, seed: u64, stream: u64) -> Self {
        let mut noise = Self::new(cap, mode, seed);
        noise.rng.set_stream(stream);
        noise
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn perturb(&mut self, angle: f64) -> f64 {
        if self.cap == 0.0 {
            return angle;
        }
        let u = self.rng.random_range(-self.cap..=self.cap);
        match self.mode {
            NoiseMode::Multiplicative => angle * (1.0 + u),
            NoiseMode::Additive => angle + u,
        }
    }
}

/// Applies `noise` if present.
pub(crate) fn perturb(noise: &mut Option<&mut RotationNoise>, angle: f64) -> f64 {
    match noise {
        Some(n) => n.perturb(angle),
        None => angle,
    }
}
