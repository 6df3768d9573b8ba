//! Feedforward stack: a chain of independent 9-qubit circuits.
//!
//! Layer `l` prepares a fresh register, loads `x^(l-1)` with `R_y`, applies the
//! trainable `R_z(phi) R_y(psi)` on each wire, entangles with the fixed CX ring
//! `1->2, 2->3, ..., 8->9, 9->1` and reads `x^(l)` back as Pauli-Z expectations.
//! The latent vector is `tanh(x^(L))`.

use crate::error::{Error, Result};
use crate::qsim::{rotated_zero, Axis, Statevector};
use crate::real::Real;
use crate::N_QUBITS;

/// `phi_1..phi_9` followed by `psi_1..psi_9`.
pub const ANGLES_PER_LAYER: usize = 2 * N_QUBITS;

/// Borrowed view of the feedforward angles, layer-major.
#[derive(Clone, Copy, Debug)]
pub struct FfnParams<'a, R> {
    angles: &'a [R],
}

impl<'a, R: Real> FfnParams<'a, R> {
    pub fn new(angles: &'a [R]) -> Result<Self> {
        if !angles.len().is_multiple_of(ANGLES_PER_LAYER) {
            return Err(Error::invalid_argument(format!(
                "feedforward expects a multiple of {ANGLES_PER_LAYER} angles, got {}",
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid_argument("non-finite feedforward angle"));
        }
        Ok(Self { angles })
    }

    pub fn layers(&self) -> usize {
        self.angles.len() / ANGLES_PER_LAYER
    }

    pub fn phi(&self, l: usize) -> &'a [R] {
        let base = l * ANGLES_PER_LAYER;
        &self.angles[base..base + N_QUBITS]
    }

    pub fn psi(&self, l: usize) -> &'a [R] {
        let base = l * ANGLES_PER_LAYER + N_QUBITS;
        &self.angles[base..base + N_QUBITS]
    }
}

/// State of one layer before measurement. `ring = false` drops the CX ring.
pub fn ffn_layer_state<R: Real>(x: &[R; N_QUBITS], phi: &[R], psi: &[R], ring: bool) -> Result<Statevector<R>> {
    let wires: Vec<_> = (0..N_QUBITS)
        .map(|i| rotated_zero(&[(Axis::Y, x[i]), (Axis::Z, phi[i]), (Axis::Y, psi[i])]))
        .collect();
    let mut state = Statevector::from_product(&wires)?;
    if ring {
        for i in 0..N_QUBITS - 1 {
            state.apply_cx(i, i + 1)?;
        }
        state.apply_cx(N_QUBITS - 1, 0)?;
    }
    Ok(state)
}

pub fn ffn_layer<R: Real>(x: &[R; N_QUBITS], phi: &[R], psi: &[R], ring: bool) -> Result<[R; N_QUBITS]> {
    let z = ffn_layer_state(x, phi, psi, ring)?.expect_z_all();
    let mut out = [R::zero(); N_QUBITS];
    out.copy_from_slice(&z);
    Ok(out)
}

/// Every intermediate `x^(l)`, `l = 1..=L` (before the final `tanh`).
pub fn ffn_trace<R: Real>(x0: &[R; N_QUBITS], params: FfnParams<'_, R>) -> Result<Vec<[R; N_QUBITS]>> {
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid_argument("non-finite feedforward input"));
    }
    let mut trace = Vec::with_capacity(params.layers());
    let mut x = *x0;
    for l in 0..params.layers() {
        x = ffn_layer(&x, params.phi(l), params.psi(l), true)?;
        trace.push(x);
    }
    Ok(trace)
}

/// Latent vector `z = tanh(x^(L))`.
pub fn ffn_forward<R: Real>(x0: &[R; N_QUBITS], params: FfnParams<'_, R>) -> Result<[R; N_QUBITS]> {
    let last = ffn_trace(x0, params)?.pop().unwrap_or(*x0);
    Ok(last.map(|v| v.tanh()))
}
