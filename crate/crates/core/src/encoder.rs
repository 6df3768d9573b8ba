//! Attention-style encoder circuit: history -> context vector in `[-1, 1]^9`.
//!
//! Query, key and value are the current state, the mean of the ten past states
//! and the last one-step change. They are squashed with `pi * tanh`, loaded once
//! as `R_x(v) R_z(k) R_y(q)` on each qubit, then mixed by `layers` blocks of
//! `CX(i -> i+1) R_z(theta) CX(i -> i+1)` on neighbouring wires.

use crate::error::{Error, Result};
use crate::qsim::{rotated_zero, Axis, Statevector};
use crate::real::Real;
use crate::N_QUBITS;

/// Trainable angles per attention layer (one per neighbouring pair).
pub const ANGLES_PER_LAYER: usize = N_QUBITS - 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Qkv<R> {
    pub q: [R; N_QUBITS],
    pub k: [R; N_QUBITS],
    pub v: [R; N_QUBITS],
}

/// Borrowed view of the encoder angles, `layers x 8`, layer-major.
#[derive(Clone, Copy, Debug)]
pub struct EncoderParams<'a, R> {
    theta: &'a [R],
}

impl<'a, R: Real> EncoderParams<'a, R> {
    pub fn new(theta: &'a [R]) -> Result<Self> {
        if !theta.len().is_multiple_of(ANGLES_PER_LAYER) {
            return Err(Error::invalid_argument(format!(
                "encoder expects a multiple of {ANGLES_PER_LAYER} angles, got {}",
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid_argument("non-finite encoder angle"));
        }
        Ok(Self { theta })
    }

    pub fn layers(&self) -> usize {
        self.theta.len() / ANGLES_PER_LAYER
    }

    pub fn layer(&self, l: usize) -> &'a [R] {
        &self.theta[l * ANGLES_PER_LAYER..(l + 1) * ANGLES_PER_LAYER]
    }
}

/// Query/key/value from the `11 x 9` history, squashed into `(-pi, pi)`.
pub fn derive_qkv<R: Real>(h: &[[R; N_QUBITS]]) -> Result<Qkv<R>> {
    if h.len() != 11 {
        return Err(Error::invalid_input(format!("history must have 11 rows, got {}", h.len())));
    }
    let current = h[10];
    let previous = h[9];
    let ten = R::lit(10.0);
    let squash = |x: R| R::PI() * x.tanh();
    let mut out = Qkv {
        q: [R::zero(); N_QUBITS],
        k: [R::zero(); N_QUBITS],
        v: [R::zero(); N_QUBITS],
    };
    for i in 0..N_QUBITS {
        let mean = h[..10].iter().map(|row| row[i]).fold(R::zero(), |a, b| a + b) / ten;
        out.q[i] = squash(current[i]);
        out.k[i] = squash(mean);
        out.v[i] = squash(current[i] - previous[i]);
    }
    Ok(out)
}

/// Pre-measurement encoder state.
pub fn encoder_state<R: Real>(h: &[[R; N_QUBITS]], params: EncoderParams<'_, R>) -> Result<Statevector<R>> {
    let qkv = derive_qkv(h)?;
    let wires: Vec<_> = (0..N_QUBITS)
        .map(|i| rotated_zero(&[(Axis::Y, qkv.q[i]), (Axis::Z, qkv.k[i]), (Axis::X, qkv.v[i])]))
        .collect();
    let mut state = Statevector::from_product(&wires)?;
    for l in 0..params.layers() {
        for (i, &theta) in params.layer(l).iter().enumerate() {
            state.apply_cx(i, i + 1)?;
            state.apply_rotation(Axis::Z, i + 1, theta)?;
            state.apply_cx(i, i + 1)?;
        }
    }
    Ok(state)
}

/// Context vector `x = (<Z_1>, ..., <Z_9>)`.
pub fn encode_attention<R: Real>(h: &[[R; N_QUBITS]], params: EncoderParams<'_, R>) -> Result<[R; N_QUBITS]> {
    let z = encoder_state(h, params)?.expect_z_all();
    let mut x = [R::zero(); N_QUBITS];
    x.copy_from_slice(&z);
    Ok(x)
}
