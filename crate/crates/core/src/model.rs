//! Full forward pass: encoder -> feedforward stack -> decoder.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::encoder::{self, encode_attention, EncoderParams};
use crate::error::{Error, Result};
use crate::qdecoder::{decode, DecoderConfig, ModeSet};
use crate::qffn::{self, ffn_forward, FfnParams};
use crate::real::Real;
use crate::scenario::Example;
use crate::N_QUBITS;

/// Architecture constants. Defaults: 6 attention layers, 64 feedforward layers,
/// 16 modes, Fourier order 8, residual scale 1.5, horizon 20.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Architecture {
    pub attn_layers: usize,
    pub ff_layers: usize,
    pub decoder: DecoderConfig,
    pub horizon: usize,
}

impl Default for Architecture {
    fn default() -> Self {
        Self {
            attn_layers: 6,
            ff_layers: 64,
            decoder: DecoderConfig::default(),
            horizon: 20,
        }
    }
}

impl Architecture {
    pub fn encoder_len(&self) -> usize {
        self.attn_layers * encoder::ANGLES_PER_LAYER
    }

    pub fn ffn_len(&self) -> usize {
        self.ff_layers * qffn::ANGLES_PER_LAYER
    }

    pub fn decoder_len(&self) -> usize {
        N_QUBITS
    }

    /// Total trainable angles (1209 for the defaults).
    pub fn param_count(&self) -> usize {
        self.encoder_len() + self.ffn_len() + self.decoder_len()
    }

    pub fn modes(&self) -> usize {
        self.decoder.modes
    }

    pub fn validate(&self) -> Result<()> {
        self.decoder.validate()?;
        if self.horizon == 0 {
            return Err(Error::invalid_argument("horizon must be at least one step"));
        }
        Ok(())
    }

    fn split<'a, R>(&self, params: &'a [R]) -> Result<(&'a [R], &'a [R], &'a [R])> {
        if params.len() != self.param_count() {
            return Err(Error::invalid_argument(format!(
                "parameter vector has {} angles, architecture needs {}",
                params.len(),
                self.param_count()
            )));
        }
        let (enc, rest) = params.split_at(self.encoder_len());
        let (ffn, dec) = rest.split_at(self.ffn_len());
        Ok((enc, ffn, dec))
    }

    /// Latent vector `z` for a history.
    pub fn latent<R: Real>(&self, params: &[R], h: &[[R; N_QUBITS]]) -> Result<[R; N_QUBITS]> {
        let (enc, ffn, _) = self.split(params)?;
        let x = encode_attention(h, EncoderParams::new(enc)?)?;
        ffn_forward(&x, FfnParams::new(ffn)?)
    }

    /// All modes and confidences for one history and baseline.
    pub fn forward<R: Real>(&self, params: &[R], h: &[[R; N_QUBITS]], baseline: &[[R; 2]]) -> Result<ModeSet<R>> {
        let (_, _, dec) = self.split(params)?;
        let z = self.latent(params, h)?;
        decode(&z, baseline, dec, &self.decoder)
    }

    pub fn forward_example<R: Real>(&self, params: &[R], example: &Example<R>) -> Result<ModeSet<R>> {
        self.forward(params, &example.h, &example.baseline)
    }
}

/// Flat trainable angles laid out as `[encoder | feedforward | decoder]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector<R> {
    values: Vec<R>,
    arch: Architecture,
}

impl<R: Real> ParamVector<R> {
    pub fn zeros(arch: Architecture) -> Self {
        Self {
            values: vec![R::zero(); arch.param_count()],
            arch,
        }
    }

    pub fn from_values(arch: Architecture, values: Vec<R>) -> Result<Self> {
        if values.len() != arch.param_count() {
            return Err(Error::invalid_argument(format!(
                "expected {} parameters, got {}",
                arch.param_count(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_argument("non-finite parameter"));
        }
        Ok(Self { values, arch })
    }

    /// I.i.d. `N(0, std^2)` angles.
    pub fn random_normal<G: Rng + ?Sized>(arch: Architecture, std: f64, rng: &mut G) -> Result<Self> {
        let dist = Normal::new(0.0, std)
            .map_err(|e| Error::invalid_argument(format!("init std {std}: {e}")))?;
        let values = (0..arch.param_count()).map(|_| R::lit(dist.sample(rng))).collect();
        Ok(Self { values, arch })
    }

    pub fn architecture(&self) -> &Architecture {
        &self.arch
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[R] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [R] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<R> {
        self.values
    }

    pub fn encoder(&self) -> &[R] {
        &self.values[..self.arch.encoder_len()]
    }

    pub fn ffn(&self) -> &[R] {
        let start = self.arch.encoder_len();
        &self.values[start..start + self.arch.ffn_len()]
    }

    pub fn decoder(&self) -> &[R] {
        &self.values[self.arch.encoder_len() + self.arch.ffn_len()..]
    }

    pub fn forward(&self, example: &Example<R>) -> Result<ModeSet<R>> {
        self.arch.forward_example(&self.values, example)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_parameter_count() {
        let arch = Architecture::default();
        assert_eq!(arch.encoder_len(), 48);
        assert_eq!(arch.ffn_len(), 1152);
        assert_eq!(arch.decoder_len(), 9);
        assert_eq!(arch.param_count(), 1209);
        let p = ParamVector::<f64>::zeros(arch);
        assert_eq!((p.encoder().len(), p.ffn().len(), p.decoder().len()), (48, 1152, 9));
    }

    #[test]
    fn partitions_are_contiguous() {
        let arch = Architecture::default();
        let values: Vec<f64> = (0..1209).map(|i| i as f64).collect();
        let p = ParamVector::from_values(arch, values).unwrap();
        assert_eq!(p.encoder()[47], 47.0);
        assert_eq!(p.ffn()[0], 48.0);
        assert_eq!(p.ffn()[1151], 1199.0);
        assert_eq!(p.decoder(), &[1200., 1201., 1202., 1203., 1204., 1205., 1206., 1207., 1208.]);
    }

    #[test]
    fn wrong_length_rejected() {
        let arch = Architecture::default();
        assert!(ParamVector::from_values(arch, vec![0.0f64; 1208]).is_err());
        let h = [[0.0f64; 9]; 11];
        assert!(arch.forward(&[0.0f64; 10], &h, &[[0.0, 0.0]; 20]).is_err());
    }
}
