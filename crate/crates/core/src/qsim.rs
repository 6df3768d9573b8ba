//! Dense statevector simulator with the gate set used by the forecasting circuits.
//!
//! Qubit `i` is bit `i` of the computational-basis index (qubit 0 is the least
//! significant bit), so amplitude `j` corresponds to the basis state
//! `|b_{n-1} ... b_1 b_0>` with `j = sum_i b_i 2^i`. Rotations use the half-angle
//! convention `R_a(theta) = exp(-i theta sigma_a / 2)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest register this simulator accepts.
pub const MAX_QUBITS: usize = 12;

/// Single-qubit gate as a row-major 2x2 complex matrix.
pub type Gate2<R> = [[Complex<R>; 2]; 2];

/// Rotation axis of a single-qubit rotation gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Matrix of `R_axis(angle)`.
pub fn rotation_matrix<R: Real>(axis: Axis, angle: R) -> Gate2<R> {
    let half = angle / R::lit(2.0);
    let (s, c) = half.sin_cos();
    let zero = R::zero();
    match axis {
        Axis::X => [
            [Complex::new(c, zero), Complex::new(zero, -s)],
            [Complex::new(zero, -s), Complex::new(c, zero)],
        ],
        Axis::Y => [
            [Complex::new(c, zero), Complex::new(-s, zero)],
            [Complex::new(s, zero), Complex::new(c, zero)],
        ],
        Axis::Z => [
            [Complex::new(c, -s), Complex::new(zero, zero)],
            [Complex::new(zero, zero), Complex::new(c, s)],
        ],
    }
}

/// Applies `gate` to a single-qubit state.
pub fn apply_to_qubit<R: Real>(gate: &Gate2<R>, q: [Complex<R>; 2]) -> [Complex<R>; 2] {
    [
        gate[0][0] * q[0] + gate[0][1] * q[1],
        gate[1][0] * q[0] + gate[1][1] * q[1],
    ]
}

/// Single-qubit state obtained by applying `rotations` in order to `|0>`.
pub fn rotated_zero<R: Real>(rotations: &[(Axis, R)]) -> [Complex<R>; 2] {
    rotations.iter().fold(
        [Complex::new(R::one(), R::zero()), Complex::new(R::zero(), R::zero())],
        |q, &(axis, angle)| apply_to_qubit(&rotation_matrix(axis, angle), q),
    )
}

/// Pure state of an `n`-qubit register stored as `2^n` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector<R> {
    n_qubits: usize,
    amps: Vec<Complex<R>>,
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::invalid_argument(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl<R: Real> Statevector<R> {
    /// `|0...0>` on `n` qubits.
    pub fn new_zero(n: usize) -> Result<Self> {
        check_register(n)?;
        let mut amps = vec![Complex::new(R::zero(), R::zero()); 1 << n];
        amps[0] = Complex::new(R::one(), R::zero());
        Ok(Self { n_qubits: n, amps })
    }

    /// Tensor product of per-qubit states; `qubits[i]` lands on qubit `i`.
    ///
    /// Equivalent to preparing `|0...0>` and applying, on each wire, the
    /// single-qubit gates that produced `qubits[i]`.
    pub fn from_product(qubits: &[[Complex<R>; 2]]) -> Result<Self> {
        let n = qubits.len();
        check_register(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        amps.push(Complex::new(R::one(), R::zero()));
        for q in qubits {
            // doubling: the new qubit is the current most significant bit
            let len = amps.len();
            for j in 0..len {
                let a = amps[j];
                amps.push(a * q[1]);
                amps[j] = a * q[0];
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Builds a state from raw amplitudes. The vector must have length `2^n` and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex<R>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::invalid_argument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_register(n)?;
        let norm: R = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - R::one()).abs() > R::lit(1e-6) {
            return Err(Error::invalid_argument(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Borrowed view of the amplitudes in computational-basis order.
    pub fn amps(&self) -> &[Complex<R>] {
        &self.amps
    }

    /// Copy of the amplitudes in computational-basis order.
    pub fn amplitudes(&self) -> Vec<Complex<R>> {
        self.amps.clone()
    }

    pub fn probabilities(&self) -> Vec<R> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> R {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::invalid_argument(format!(
                "qubit {qubit} out of range for {}-qubit register",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Applies an arbitrary single-qubit gate on `qubit`.
    pub fn apply_gate(&mut self, qubit: usize, gate: &Gate2<R>) -> Result<()> {
        self.check_qubit(qubit)?;
        let stride = 1usize << qubit;
        let [[m00, m01], [m10, m11]] = *gate;
        for base in (0..self.amps.len()).step_by(stride << 1) {
            for j in base..base + stride {
                let a0 = self.amps[j];
                let a1 = self.amps[j + stride];
                self.amps[j] = m00 * a0 + m01 * a1;
                self.amps[j + stride] = m10 * a0 + m11 * a1;
            }
        }
        Ok(())
    }

    pub fn apply_rotation(&mut self, axis: Axis, qubit: usize, angle: R) -> Result<()> {
        if !angle.is_finite() {
            return Err(Error::invalid_argument(format!(
                "non-finite rotation angle {angle}"
            )));
        }
        self.apply_gate(qubit, &rotation_matrix(axis, angle))
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::invalid_argument(format!(
                "CX control and target are both qubit {control}"
            )));
        }
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for j in 0..self.amps.len() {
            if j & cmask != 0 && j & tmask == 0 {
                self.amps.swap(j, j | tmask);
            }
        }
        Ok(())
    }

    /// `R_z(angle)` on every qubit. Basis state `|j>` picks up
    /// `exp(i angle (2 popcount(j) - n) / 2)`.
    pub fn apply_phase_layer(&mut self, angle: R) {
        let n = self.n_qubits;
        let two = R::lit(2.0);
        let phases: Vec<Complex<R>> = (0..=n)
            .map(|ones| {
                let k = R::from_usize(2 * ones).unwrap() - R::from_usize(n).unwrap();
                Complex::from_polar(R::one(), angle * k / two)
            })
            .collect();
        for (j, a) in self.amps.iter_mut().enumerate() {
            *a = *a * phases[j.count_ones() as usize];
        }
    }

    /// `<Z_qubit>`, in `[-1, 1]`.
    pub fn expect_z(&self, qubit: usize) -> Result<R> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        let value = self
            .amps
            .iter()
            .enumerate()
            .fold(R::zero(), |acc, (j, a)| {
                if j & mask == 0 {
                    acc + a.norm_sqr()
                } else {
                    acc - a.norm_sqr()
                }
            });
        Ok(value.max(-R::one()).min(R::one()))
    }

    /// `<Z_i>` for every qubit in one pass over the amplitudes.
    pub fn expect_z_all(&self) -> Vec<R> {
        let mut out = vec![R::zero(); self.n_qubits];
        for (j, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, e) in out.iter_mut().enumerate() {
                if (j >> q) & 1 == 0 {
                    *e = *e + p;
                } else {
                    *e = *e - p;
                }
            }
        }
        out.into_iter()
            .map(|e| e.max(-R::one()).min(R::one()))
            .collect()
    }
}
