//! Multi-modal decoder: one circuit, many phase-shifted readouts.
//!
//! The latent `z` is loaded with `R_y(z_i) R_z(gamma_i)` and spread by a ladder of
//! `CX(i -> i+1) R_y(gamma_i) CX(i -> i+1)`. Mode `m` applies a global
//! `R_z((m+1) pi / M)` layer to a copy of that state and turns amplitudes
//! `1..=B` into a truncated Fourier residual: real parts weight
//! `cos(j pi t / (T+1))` along x, imaginary parts weight `sin(j pi t / (T+1))`
//! along y. Confidences come from the DFT magnitudes of `z` zero-padded to `M`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qsim::{rotated_zero, Axis, Statevector};
use crate::real::Real;
use crate::N_QUBITS;

/// Output-shape knobs of the decoder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoderConfig {
    /// Number of modes `M`.
    pub modes: usize,
    /// Truncation order `B`.
    pub fourier_order: usize,
    /// Residual scale `S_r`.
    pub residual_scale: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            modes: 16,
            fourier_order: 8,
            residual_scale: 1.5,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modes < N_QUBITS {
            return Err(Error::invalid_argument(format!(
                "mode count {} must be at least the latent size {N_QUBITS}",
                self.modes
            )));
        }
        if self.fourier_order == 0 || self.fourier_order >= 1 << N_QUBITS {
            return Err(Error::invalid_argument(format!(
                "fourier order {} outside 1..{}",
                self.fourier_order,
                1 << N_QUBITS
            )));
        }
        if !(self.residual_scale.is_finite() && self.residual_scale > 0.0) {
            return Err(Error::invalid_argument("residual scale must be positive"));
        }
        Ok(())
    }
}

/// `M` hypotheses in normalized lane-frame units.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet<R> {
    /// `trajectories[m][t] = baseline[t] + residuals[m][t]`.
    pub trajectories: Vec<Vec<[R; 2]>>,
    pub residuals: Vec<Vec<[R; 2]>>,
    /// Sums to one.
    pub confidences: Vec<R>,
}

impl<R: Real> ModeSet<R> {
    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// Mode indices by descending confidence, ties to the lower index.
    pub fn ranking(&self) -> Vec<usize> {
        rank_by_confidence(&self.confidences)
    }
}

/// Indices sorted by descending confidence, ties broken by lower index.
pub fn rank_by_confidence<R: Real>(confidences: &[R]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..confidences.len()).collect();
    order.sort_by(|&a, &b| {
        confidences[b]
            .partial_cmp(&confidences[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Phase offset of mode `m` (1-based): `(m + 1) pi / M`.
pub fn mode_phase<R: Real>(m: usize, modes: usize) -> R {
    R::from_usize(m + 1).unwrap() * R::PI() / R::from_usize(modes).unwrap()
}

/// Shared base state `|Psi(z)>`.
pub fn decoder_state<R: Real>(z: &[R; N_QUBITS], gamma: &[R]) -> Result<Statevector<R>> {
    if gamma.len() != N_QUBITS {
        return Err(Error::invalid_argument(format!(
            "decoder expects {N_QUBITS} angles, got {}",
            gamma.len()
        )));
    }
    let wires: Vec<_> = (0..N_QUBITS)
        .map(|i| rotated_zero(&[(Axis::Y, z[i]), (Axis::Z, gamma[i])]))
        .collect();
    let mut state = Statevector::from_product(&wires)?;
    for i in 0..N_QUBITS - 1 {
        state.apply_cx(i, i + 1)?;
        state.apply_rotation(Axis::Y, i + 1, gamma[i])?;
        state.apply_cx(i, i + 1)?;
    }
    Ok(state)
}

/// Truncated Fourier residual from amplitudes `1..=order` (amplitude 0 ignored).
pub fn fourier_residuals<R: Real>(amps: &[Complex<R>], order: usize, horizon: usize, scale: R) -> Vec<[R; 2]> {
    let denom = R::from_usize(horizon + 1).unwrap();
    (1..=horizon)
        .map(|t| {
            let tt = R::from_usize(t).unwrap();
            let (mut dx, mut dy) = (R::zero(), R::zero());
            for (j, a) in amps.iter().enumerate().take(order + 1).skip(1) {
                let arg = R::from_usize(j).unwrap() * R::PI() * tt / denom;
                dx = dx + a.re * arg.cos();
                dy = dy + a.im * arg.sin();
            }
            [scale * dx, scale * dy]
        })
        .collect()
}

/// Forward DFT `X_k = sum_n x_n exp(-2 pi i k n / N)`, no normalization.
pub fn dft<R: Real>(signal: &[R]) -> Vec<Complex<R>> {
    let n = signal.len();
    let nn = R::from_usize(n).unwrap();
    (0..n)
        .map(|k| {
            signal.iter().enumerate().fold(Complex::new(R::zero(), R::zero()), |acc, (i, &x)| {
                // reduce k*i mod n before converting to keep the angle small
                let idx = R::from_usize((k * i) % n).unwrap();
                let angle = -R::lit(2.0) * R::PI() * idx / nn;
                acc + Complex::from_polar(x, angle)
            })
        })
        .collect()
}

/// Mode confidences: DFT magnitudes of `z` zero-padded to `modes`, mode `m` reading bin `m - 1`.
/// An all-zero spectrum yields the uniform distribution.
pub fn confidences<R: Real>(z: &[R; N_QUBITS], modes: usize) -> Result<Vec<R>> {
    if modes < N_QUBITS {
        return Err(Error::invalid_argument(format!(
            "cannot zero-pad a {N_QUBITS}-vector to {modes}"
        )));
    }
    let mut padded = vec![R::zero(); modes];
    padded[..N_QUBITS].copy_from_slice(z);
    let mags: Vec<R> = dft(&padded).iter().map(|c| c.norm()).collect();
    let total: R = mags.iter().copied().sum();
    if !(total > R::zero()) {
        let u = R::one() / R::from_usize(modes).unwrap();
        return Ok(vec![u; modes]);
    }
    Ok(mags.into_iter().map(|c| c / total).collect())
}

/// Bookkeeping for one decode call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub base_states_built: usize,
    pub phase_layers_applied: usize,
}

/// Decodes `z` into `M` trajectories around `baseline` plus confidences.
pub fn decode<R: Real>(z: &[R; N_QUBITS], baseline: &[[R; 2]], gamma: &[R], cfg: &DecoderConfig) -> Result<ModeSet<R>> {
    decode_with_stats(z, baseline, gamma, cfg).map(|(m, _)| m)
}

pub fn decode_with_stats<R: Real>(
    z: &[R; N_QUBITS],
    baseline: &[[R; 2]],
    gamma: &[R],
    cfg: &DecoderConfig,
) -> Result<(ModeSet<R>, DecodeStats)> {
    cfg.validate()?;
    let mut stats = DecodeStats::default();
    let base = decoder_state(z, gamma)?;
    stats.base_states_built += 1;
    let scale = R::lit(cfg.residual_scale);
    let horizon = baseline.len();

    let mut trajectories = Vec::with_capacity(cfg.modes);
    let mut residuals = Vec::with_capacity(cfg.modes);
    for m in 1..=cfg.modes {
        let mut state = base.clone();
        state.apply_phase_layer(mode_phase::<R>(m, cfg.modes));
        stats.phase_layers_applied += 1;
        let res = fourier_residuals(state.amps(), cfg.fourier_order, horizon, scale);
        let traj = baseline
            .iter()
            .zip(&res)
            .map(|(b, r)| [b[0] + r[0], b[1] + r[1]])
            .collect();
        trajectories.push(traj);
        residuals.push(res);
    }
    let confidences = confidences(z, cfg.modes)?;
    Ok((
        ModeSet {
            trajectories,
            residuals,
            confidences,
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn straight_baseline() -> Vec<[f64; 2]> {
        (1..=20).map(|t| [0.1 * t as f64, 0.0]).collect()
    }

    #[test]
    fn zero_latent_zero_params_returns_baseline() {
        let b = straight_baseline();
        let modes = decode(&[0.0; 9], &b, &[0.0; 9], &DecoderConfig::default()).unwrap();
        assert_eq!(modes.len(), 16);
        for traj in &modes.trajectories {
            assert_eq!(traj, &b);
        }
        assert!(modes.residuals.iter().flatten().all(|r| *r == [0.0, 0.0]));
    }

    #[test]
    fn single_amplitude_fourier() {
        let mut amps = vec![Complex::new(0.0, 0.0); 512];
        amps[1] = Complex::new(1.0, 0.0);
        let r = fourier_residuals(&amps, 8, 20, 1.5);
        for (t, p) in r.iter().enumerate() {
            let tt = (t + 1) as f64;
            assert!((p[0] - 1.5 * (PI * tt / 21.0).cos()).abs() < 1e-15);
            assert_eq!(p[1], 0.0);
        }
    }

    #[test]
    fn amplitude_zero_is_ignored() {
        let mut amps = vec![Complex::new(0.0, 0.0); 512];
        amps[0] = Complex::new(1.0, 0.0);
        amps[9] = Complex::new(0.5, 0.5);
        assert!(fourier_residuals(&amps, 8, 20, 1.5).iter().all(|p| *p == [0.0, 0.0]));
    }

    #[test]
    fn mode_phases() {
        assert!((mode_phase::<f64>(1, 16) - PI / 8.0).abs() < 1e-15);
        assert!((mode_phase::<f64>(16, 16) - 17.0 * PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_confidence_fallbacks() {
        let u = confidences(&[0.0f64; 9], 16).unwrap();
        assert!(u.iter().all(|&c| c == 1.0 / 16.0));
        let mut impulse = [0.0f64; 9];
        impulse[0] = 1.0;
        let c = confidences(&impulse, 16).unwrap();
        assert!(c.iter().all(|&v| (v - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn dirichlet_kernel_confidences() {
        // closed form |sin(9 pi k / 16) / sin(pi k / 16)|, 9 at k = 0
        let raw: Vec<f64> = (0..16)
            .map(|k| {
                if k == 0 {
                    9.0
                } else {
                    let a = PI * k as f64 / 16.0;
                    ((9.0 * a).sin() / a.sin()).abs()
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let c = confidences(&[1.0f64; 9], 16).unwrap();
        for (got, r) in c.iter().zip(&raw) {
            assert!((got - r / total).abs() < 1e-14);
        }
        assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(rank_by_confidence(&c)[0], 0);
    }

    #[test]
    fn single_base_state_per_decode() {
        let z = [0.3, -0.2, 0.5, 0.1, 0.0, 0.7, -0.4, 0.2, 0.6];
        let gamma = [0.2, -0.1, 0.4, 0.3, -0.5, 0.1, 0.2, -0.3, 0.05];
        let (_, stats) = decode_with_stats(&z, &straight_baseline(), &gamma, &DecoderConfig::default()).unwrap();
        assert_eq!(
            stats,
            DecodeStats {
                base_states_built: 1,
                phase_layers_applied: 16
            }
        );
    }

    #[test]
    fn ranking_ties_prefer_lower_index() {
        assert_eq!(rank_by_confidence(&[0.2, 0.5, 0.3]), vec![1, 2, 0]);
        assert_eq!(rank_by_confidence(&[0.25; 4]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn config_validation() {
        let bad = DecoderConfig {
            modes: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DecoderConfig {
            fourier_order: 512,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
