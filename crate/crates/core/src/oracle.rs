//! Diagram-free reference dynamics.
//!
//! For input `|n,0>` the interaction only couples the states `|n-2v, v>`,
//! `0 <= v <= n/2`, and is tridiagonal in `v` with zero diagonal. The squared
//! coupling between `v` and `v+1` is `w_v = (n-2v)(n-2v-1)(v+1)`.
//!
//! The exact Taylor route rescales basis vector `v` by `d_v = prod_{u<v} sqrt(w_u)`.
//! In the rescaled basis the matrix is integer (subdiagonal 1, superdiagonal
//! `w_v`), so its powers are exact, and `d_v^2` is an integer that restores
//! the probabilities.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::fock::{factorial, ExactRational};

/// `H / gamma` restricted to the invariant subspace of `|n,0>`, ordered by `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TridiagonalHamiltonian {
    pub origin_n: u32,
    pub dimension: usize,
    /// `w_v` for `v = 0 .. dimension - 2`.
    pub squared_couplings: Vec<BigInt>,
}

impl TridiagonalHamiltonian {
    /// Symmetric matrix with off-diagonal entries `sqrt(w_v)`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dimension, self.dimension);
        for (v, w) in self.squared_couplings.iter().enumerate() {
            let c = w.to_f64().unwrap_or(f64::INFINITY).sqrt();
            m[(v, v + 1)] = c;
            m[(v + 1, v)] = c;
        }
        m
    }

    /// `d_v^2 = prod_{u<v} w_u`.
    fn rescaling_squared(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.dimension);
        let mut acc = BigInt::one();
        out.push(acc.clone());
        for w in &self.squared_couplings {
            acc *= w;
            out.push(acc.clone());
        }
        out
    }

    /// One multiplication by the rescaled integer matrix.
    fn step(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.dimension)
            .map(|v| {
                let mut y = BigInt::zero();
                if v > 0 {
                    y += &x[v - 1];
                }
                if v + 1 < self.dimension {
                    y += &self.squared_couplings[v] * &x[v + 1];
                }
                y
            })
            .collect()
    }
}

pub fn subspace_hamiltonian(n: u32) -> TridiagonalHamiltonian {
    let dimension = (n / 2) as usize + 1;
    let squared_couplings = (0..dimension.saturating_sub(1) as u32)
        .map(|v| {
            let pump = i64::from(n) - 2 * i64::from(v);
            BigInt::from(pump) * BigInt::from(pump - 1) * BigInt::from(v + 1)
        })
        .collect();
    TridiagonalHamiltonian { origin_n: n, dimension, squared_couplings }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GaussianRational {
    re: ExactRational,
    im: ExactRational,
}

impl GaussianRational {
    fn zero() -> Self {
        Self { re: ExactRational::zero(), im: ExactRational::zero() }
    }

    /// `i^power * scale`
    fn i_power(power: u32, scale: ExactRational) -> Self {
        let zero = ExactRational::zero();
        match power % 4 {
            0 => Self { re: scale, im: zero },
            1 => Self { re: zero, im: scale },
            2 => Self { re: -scale, im: zero },
            _ => Self { re: zero, im: -scale },
        }
    }

    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Exact Taylor coefficients of `Pr(n - 2v', v'; gamma)` up to `gamma^max_order`,
/// keyed by `(v', power)`. Only nonzero coefficients are returned.
///
/// # Panics
///
/// Panics if a probability coefficient comes out with a nonzero imaginary
/// part, which would mean the arithmetic above is broken.
pub fn taylor_oracle(n: u32, max_order: u32) -> BTreeMap<(u32, u32), ExactRational> {
    let h = subspace_hamiltonian(n);
    let dim = h.dimension;
    let orders = max_order as usize + 1;

    // amplitude[v][R] = i^R / R! * (T^R)_{v,0}; the physical amplitude is d_v times this.
    let mut amplitude = vec![vec![GaussianRational::zero(); orders]; dim];
    let mut column: Vec<BigInt> = (0..dim).map(|v| if v == 0 { BigInt::one() } else { BigInt::zero() }).collect();
    for power in 0..orders {
        let inv_fact = ExactRational::new(BigInt::one(), factorial(power as u32));
        for (v, entry) in column.iter().enumerate() {
            if !entry.is_zero() {
                let scale = ExactRational::from_integer(entry.clone()) * &inv_fact;
                amplitude[v][power] = GaussianRational::i_power(power as u32, scale);
            }
        }
        column = h.step(&column);
    }

    let rescale = h.rescaling_squared();
    let mut out = BTreeMap::new();
    for v in 0..dim {
        let weight = ExactRational::from_integer(rescale[v].clone());
        for power in 0..orders {
            let mut acc = GaussianRational::zero();
            for a in 0..=power {
                let (x, y) = (&amplitude[v][a], &amplitude[v][power - a]);
                if x.re.is_zero() && x.im.is_zero() || y.re.is_zero() && y.im.is_zero() {
                    continue;
                }
                acc = acc + x * &y.conj();
            }
            assert!(acc.im.is_zero(), "complex probability coefficient at v={v}, R={power}");
            if !acc.re.is_zero() {
                out.insert((v as u32, power as u32), acc.re * &weight);
            }
        }
    }
    out
}

/// `|<v'| exp(i gamma M) |0>|^2` for every `v'`, by diagonalizing `M`.
pub fn float_evolve(n: u32, gamma: f64) -> Vec<f64> {
    let h = subspace_hamiltonian(n);
    if h.dimension == 1 {
        return vec![1.0];
    }
    let eig = SymmetricEigen::new(h.to_matrix());
    (0..h.dimension)
        .map(|v| {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..h.dimension {
                let weight = eig.eigenvectors[(v, k)] * eig.eigenvectors[(0, k)];
                let phase = gamma * eig.eigenvalues[k];
                re += weight * phase.cos();
                im += weight * phase.sin();
            }
            re * re + im * im
        })
        .collect()
}
