//! Dense-matrix reference simulator and helpers shared by the integration tests.
//!
//! Every gate is expanded to a full `2^n x 2^n` operator with Kronecker products
//! of explicit Pauli matrices and applied by matrix-vector multiplication. Qubit 0
//! is the least significant bit, so the rightmost Kronecker factor acts on it.

#![allow(dead_code)]

use num_complex::Complex;

pub type C = Complex<f64>;

/// Square matrix in row-major order.
#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<C>,
}

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

impl Mat {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn from_2x2(m: [[C; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn at(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let dim = self.dim * other.dim;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.at(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        data[(i * other.dim + k) * dim + j * other.dim + l] = a * other.at(k, l);
                    }
                }
            }
        }
        Mat { dim, data }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }
}

pub fn pauli(which: char) -> Mat {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    Mat::from_2x2(match which {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => panic!("unknown Pauli {which}"),
    })
}

/// `exp(-i theta P / 2) = cos(theta/2) I - i sin(theta/2) P`.
pub fn rotation(axis: char, theta: f64) -> Mat {
    pauli('I')
        .scale(c((theta / 2.0).cos(), 0.0))
        .add(&pauli(axis).scale(c(0.0, -(theta / 2.0).sin())))
}

/// `ops[q]` acts on qubit `q`; the full operator is `ops[n-1] (x) ... (x) ops[0]`.
pub fn tensor(ops: &[Mat]) -> Mat {
    ops.iter().rev().skip(1).fold(ops.last().unwrap().clone(), |acc, m| acc.kron(m))
}

pub fn single(n: usize, q: usize, g: &Mat) -> Mat {
    let ops: Vec<Mat> = (0..n).map(|k| if k == q { g.clone() } else { pauli('I') }).collect();
    tensor(&ops)
}

/// `|0><0|_c (x) I + |1><1|_c (x) X_t`.
pub fn cx(n: usize, control: usize, target: usize) -> Mat {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let p0 = Mat::from_2x2([[o, z], [z, z]]);
    let p1 = Mat::from_2x2([[z, z], [z, o]]);
    let idle: Vec<Mat> = (0..n).map(|k| if k == control { p0.clone() } else { pauli('I') }).collect();
    let flip: Vec<Mat> = (0..n)
        .map(|k| {
            if k == control {
                p1.clone()
            } else if k == target {
                pauli('X')
            } else {
                pauli('I')
            }
        })
        .collect();
    tensor(&idle).add(&tensor(&flip))
}

/// `R_z(theta)` on every qubit.
pub fn phase_layer(n: usize, theta: f64) -> Mat {
    tensor(&vec![rotation('Z', theta); n])
}

pub fn zero_state(n: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

/// `<psi| Z_q |psi>`.
pub fn expect_z(n: usize, state: &[C], q: usize) -> f64 {
    let zs = single(n, q, &pauli('Z')).apply(state);
    state.iter().zip(&zs).map(|(a, b)| (a.conj() * b).re).sum()
}

#[derive(Clone, Copy, Debug)]
pub enum Op {
    Rot(char, usize, f64),
    Cx(usize, usize),
    Phase(f64),
}

/// Runs a circuit from `|0...0>` with dense operators.
pub fn run(n: usize, ops: &[Op]) -> Vec<C> {
    run_from(n, zero_state(n), ops)
}

pub fn run_from(n: usize, mut state: Vec<C>, ops: &[Op]) -> Vec<C> {
    for op in ops {
        let m = match *op {
            Op::Rot(a, q, t) => single(n, q, &rotation(a, t)),
            Op::Cx(ctl, t) => cx(n, ctl, t),
            Op::Phase(t) => phase_layer(n, t),
        };
        state = m.apply(&state);
    }
    state
}

pub const N: usize = 9;

/// Encoder gate list: per-wire `R_y(q) R_z(k) R_x(v)`, then the CX-R_z-CX blocks.
pub fn encoder_ops(h: &[[f64; N]; 11], theta: &[f64]) -> Vec<Op> {
    let squash = |x: f64| std::f64::consts::PI * x.tanh();
    let mut ops = Vec::new();
    for i in 0..N {
        let q = squash(h[10][i]);
        let k = squash((0..10).map(|t| h[t][i]).sum::<f64>() / 10.0);
        let v = squash(h[10][i] - h[9][i]);
        ops.extend([Op::Rot('Y', i, q), Op::Rot('Z', i, k), Op::Rot('X', i, v)]);
    }
    for layer in theta.chunks(N - 1) {
        for (i, &t) in layer.iter().enumerate() {
            ops.extend([Op::Cx(i, i + 1), Op::Rot('Z', i + 1, t), Op::Cx(i, i + 1)]);
        }
    }
    ops
}

pub fn ffn_layer_ops(x: &[f64; N], phi: &[f64], psi: &[f64]) -> Vec<Op> {
    let mut ops = Vec::new();
    for i in 0..N {
        ops.extend([Op::Rot('Y', i, x[i]), Op::Rot('Z', i, phi[i]), Op::Rot('Y', i, psi[i])]);
    }
    for i in 0..N - 1 {
        ops.push(Op::Cx(i, i + 1));
    }
    ops.push(Op::Cx(N - 1, 0));
    ops
}

pub fn decoder_ops(z: &[f64; N], gamma: &[f64]) -> Vec<Op> {
    let mut ops = Vec::new();
    for i in 0..N {
        ops.extend([Op::Rot('Y', i, z[i]), Op::Rot('Z', i, gamma[i])]);
    }
    for i in 0..N - 1 {
        ops.extend([Op::Cx(i, i + 1), Op::Rot('Y', i + 1, gamma[i]), Op::Cx(i, i + 1)]);
    }
    ops
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Truncated series `S sum_{j=1..B} (Re a_j cos(j pi t/(T+1)), Im a_j sin(j pi t/(T+1)))`.
pub fn fourier_series(amps: &[C], order: usize, horizon: usize, scale: f64) -> Vec<[f64; 2]> {
    (1..=horizon)
        .map(|t| {
            let mut p = [0.0, 0.0];
            for (j, a) in amps.iter().enumerate().take(order + 1).skip(1) {
                let w = j as f64 * std::f64::consts::PI * t as f64 / (horizon as f64 + 1.0);
                p[0] += a.re * w.cos();
                p[1] += a.im * w.sin();
            }
            [scale * p[0], scale * p[1]]
        })
        .collect()
}

/// Seeded RNG for test fixtures.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
