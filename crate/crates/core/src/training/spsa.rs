//! Simultaneous perturbation stochastic approximation.
//!
//! Each gradient estimate perturbs every coordinate at once by `+-c_k` and needs
//! exactly two objective evaluations, independent of the dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::real::Real;

/// RNG stream ids derived from the training seed.
pub(crate) const INIT_STREAM: u64 = 0;
pub(crate) const BATCH_STREAM: u64 = 1;
pub(crate) const DELTA_STREAM: u64 = 2;

/// Optimizer and training-loop hyperparameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SpsaConfig {
    pub a: f64,
    pub c: f64,
    /// Stability constant `A` of the gain schedule.
    pub big_a: f64,
    pub alpha: f64,
    /// Decay exponent of the perturbation schedule.
    pub gamma_exp: f64,
    /// Independent perturbation draws averaged per update.
    pub grad_averages: usize,
    pub epochs: usize,
    pub batches_per_epoch: usize,
    pub batch_size: usize,
    /// Weight of the residual-magnitude penalty.
    pub lambda: f64,
    pub init_std: f64,
    pub seed: u64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            a: 0.05,
            c: 0.1,
            big_a: 80.0,
            alpha: 0.602,
            gamma_exp: 0.101,
            grad_averages: 2,
            epochs: 100,
            batches_per_epoch: 200,
            batch_size: 32,
            lambda: 1e-4,
            init_std: 0.05,
            seed: 0,
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a", self.a),
            ("c", self.c),
            ("A", self.big_a),
            ("alpha", self.alpha),
            ("gamma", self.gamma_exp),
            ("lambda", self.lambda),
            ("init_std", self.init_std),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid_argument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grad_averages == 0 || self.batches_per_epoch == 0 || self.batch_size == 0 {
            return Err(Error::invalid_argument(
                "grad_averages, batches_per_epoch and batch_size must be at least 1",
            ));
        }
        Ok(())
    }

    /// Step size `a_k = a / (A + k)^alpha`.
    pub fn gain(&self, k: u64) -> f64 {
        self.a / (self.big_a + k as f64).powf(self.alpha)
    }

    /// Perturbation scale `c_k = c / k^gamma`.
    pub fn perturbation(&self, k: u64) -> f64 {
        self.c / (k as f64).powf(self.gamma_exp)
    }
}

/// Outcome of one SPSA update.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub gain: f64,
    pub perturbation: f64,
    /// `(L+, L-)` per perturbation draw.
    pub losses: Vec<(f64, f64)>,
    pub evaluations: usize,
}

impl StepReport {
    /// Mean of all objective values seen during the step.
    pub fn mean_loss(&self) -> f64 {
        let n = self.losses.len().max(1) as f64;
        self.losses.iter().map(|(p, m)| 0.5 * (p + m)).sum::<f64>() / n
    }
}

/// Stateful optimizer: owns the Rademacher stream.
#[derive(Clone, Debug)]
pub struct Spsa {
    cfg: SpsaConfig,
    rng: ChaCha8Rng,
}

impl Spsa {
    pub fn new(cfg: SpsaConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(DELTA_STREAM);
        Ok(Self { cfg, rng })
    }

    pub fn config(&self) -> &SpsaConfig {
        &self.cfg
    }

    fn rademacher<R: Real>(&mut self, n: usize) -> Vec<R> {
        (0..n)
            .map(|_| if self.rng.random::<bool>() { R::one() } else { -R::one() })
            .collect()
    }

    /// Updates `theta` in place at iteration `k >= 1`. The two evaluations of each
    /// draw run concurrently.
    pub fn step<R, F>(&mut self, theta: &mut [R], k: u64, objective: F) -> Result<StepReport>
    where
        R: Real,
        F: Fn(&[R]) -> Result<R> + Sync,
    {
        if k == 0 {
            return Err(Error::invalid_argument("SPSA iteration counter starts at 1"));
        }
        let gain = self.cfg.gain(k);
        let ck = self.cfg.perturbation(k);
        let ck_r = R::lit(ck);
        let draws = self.cfg.grad_averages;
        let mut grad = vec![R::zero(); theta.len()];
        let mut losses = Vec::with_capacity(draws);
        for _ in 0..draws {
            let delta: Vec<R> = self.rademacher(theta.len());
            let plus: Vec<R> = theta.iter().zip(&delta).map(|(&t, &d)| t + ck_r * d).collect();
            let minus: Vec<R> = theta.iter().zip(&delta).map(|(&t, &d)| t - ck_r * d).collect();
            let (lp, lm) = rayon::join(|| objective(&plus), || objective(&minus));
            let (lp, lm) = (lp?, lm?);
            if !(lp.is_finite() && lm.is_finite()) {
                return Err(Error::Numerical(format!(
                    "non-finite loss at iteration {k}: L+ = {lp}, L- = {lm}"
                )));
            }
            let scale = (lp - lm) / (R::lit(2.0) * ck_r);
            for (g, &d) in grad.iter_mut().zip(&delta) {
                *g = *g + scale * d;
            }
            losses.push((lp.as_f64(), lm.as_f64()));
        }
        let step = R::lit(gain) / R::from_usize(draws).unwrap();
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t = *t - step * *g;
        }
        Ok(StepReport {
            gain,
            perturbation: ck,
            evaluations: 2 * draws,
            losses,
        })
    }
}
