//! Elementary processes: alternating blocks of the two SHG vertices.
//!
//! A [`ProcessVector`] `(k1, k2, ..., kl)` applies `k1` copies of
//! `a1^2 a2^dag` to the ket, then `k2` copies of `(a1^dag)^2 a2`, and so on,
//! alternating. Odd (1-based) blocks create SH photons, even blocks
//! annihilate them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fock::{falling_factorial, radical_squared, ExactRational, RadicalAmplitude, TwoModeFock};

/// One application of the interaction Hamiltonian's two terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// `a1^2 a2^dag`: two pump photons become one SH photon.
    Creation,
    /// `(a1^dag)^2 a2`: one SH photon splits into two pump photons.
    Annihilation,
}

impl Vertex {
    pub fn other(self) -> Self {
        match self {
            Vertex::Creation => Vertex::Annihilation,
            Vertex::Annihilation => Vertex::Creation,
        }
    }

    /// Change in SH occupation.
    pub fn sh_step(self) -> i64 {
        match self {
            Vertex::Creation => 1,
            Vertex::Annihilation => -1,
        }
    }
}

/// Block-multiplicity vector of an elementary process. Empty means identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProcessVector(Vec<u32>);

impl ProcessVector {
    /// Every block must be at least 1.
    pub fn new(blocks: Vec<u32>) -> Result<Self> {
        if blocks.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "process blocks must be positive, got {blocks:?}"
            )));
        }
        Ok(Self(blocks))
    }

    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn blocks(&self) -> &[u32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Perturbative order `r = sum k_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of blocks `l`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Kind of vertex repeated in block `j` (1-based).
    pub fn block_vertex(j: usize) -> Vertex {
        if j % 2 == 1 {
            Vertex::Creation
        } else {
            Vertex::Annihilation
        }
    }

    /// Net SH photons `K_l` produced by the process.
    pub fn net_photons(&self) -> i64 {
        partial_sums(self).last().copied().unwrap_or(0)
    }

    /// Largest intermediate SH occupation, 0 for the identity.
    pub fn peak_photons(&self) -> i64 {
        partial_sums(self).iter().copied().max().unwrap_or(0).max(0)
    }

    /// Expands blocks into the operator word, in order of application.
    pub fn to_word(&self) -> Vec<Vertex> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(Self::block_vertex(i + 1), k as usize))
            .collect()
    }

    /// Run-length encodes a word. Returns `None` for words starting with an
    /// annihilation vertex, which have no block encoding.
    pub fn from_word(word: &[Vertex]) -> Option<Self> {
        let mut blocks: Vec<u32> = Vec::new();
        let mut current = Vertex::Creation;
        for (i, &vertex) in word.iter().enumerate() {
            if i == 0 {
                if vertex != Vertex::Creation {
                    return None;
                }
                blocks.push(1);
            } else if vertex == current {
                *blocks.last_mut().unwrap() += 1;
            } else {
                blocks.push(1);
            }
            current = vertex;
        }
        Some(Self(blocks))
    }
}

impl TryFrom<Vec<u32>> for ProcessVector {
    type Error = Error;

    fn try_from(blocks: Vec<u32>) -> Result<Self> {
        Self::new(blocks)
    }
}

impl fmt::Display for ProcessVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// Running net SH photon counts `K_j = sum_{q<=j} (-1)^(q-1) k_q`.
pub type PartialSums = Vec<i64>;

pub fn partial_sums(k: &ProcessVector) -> PartialSums {
    k.blocks()
        .iter()
        .enumerate()
        .scan(0i64, |acc, (i, &b)| {
            *acc += ProcessVector::block_vertex(i + 1).sh_step() * i64::from(b);
            Some(*acc)
        })
        .collect()
}

/// True iff the SH occupation never goes negative along the process.
pub fn is_admissible(k: &ProcessVector) -> bool {
    partial_sums(k).iter().all(|&s| s >= 0)
}

fn block_sum(k: &ProcessVector, j: usize) -> Result<(i64, i64)> {
    if j == 0 || j > k.len() {
        return Err(Error::InvalidParameter(format!(
            "block index {j} out of range for {k}"
        )));
    }
    let sums = partial_sums(k);
    Ok((sums[j - 1], i64::from(k.blocks()[j - 1])))
}

/// Squared SH-creation factor for odd block `j` (1-based):
/// `K_j!/(K_j - k_j)! * [n - 2(K_j - k_j)]!/(n - 2K_j)!`.
pub fn shc_factor(n: u32, j: usize, k: &ProcessVector) -> Result<ExactRational> {
    if j % 2 != 1 {
        return Err(Error::InvalidParameter(format!("shc factor needs an odd block, got {j}")));
    }
    let (big_k, kj) = block_sum(k, j)?;
    let before = big_k - kj;
    if before < 0 {
        return Ok(ExactRational::zero());
    }
    let sh = falling_factorial(big_k, kj as u32);
    let pump = falling_factorial(i64::from(n) - 2 * before, 2 * kj as u32);
    Ok(ExactRational::from_integer(sh * pump))
}

/// Squared SH-annihilation factor for even block `j` (1-based):
/// `(K_j + k_j)!/K_j! * (n - 2K_j)!/[n - 2(K_j + k_j)]!`.
pub fn sha_factor(n: u32, j: usize, k: &ProcessVector) -> Result<ExactRational> {
    if j % 2 != 0 {
        return Err(Error::InvalidParameter(format!("sha factor needs an even block, got {j}")));
    }
    let (big_k, kj) = block_sum(k, j)?;
    let before = big_k + kj;
    let sh = falling_factorial(before, kj as u32);
    let pump = falling_factorial(i64::from(n) - 2 * big_k, 2 * kj as u32);
    Ok(ExactRational::from_integer(sh * pump))
}

/// Squared amplitude `f_k(n, K_l)^2` as the product of all block factors.
pub fn squared_amplitude(k: &ProcessVector, n: u32) -> Result<ExactRational> {
    (1..=k.len()).try_fold(ExactRational::one(), |acc, j| {
        let factor = if j % 2 == 1 { shc_factor(n, j, k)? } else { sha_factor(n, j, k)? };
        Ok(acc * factor)
    })
}

fn exact_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let root = x.sqrt();
    (&root * &root == *x).then_some(root)
}

/// `f_k(n, v)` with `v = K_l`, as a cofactor over the radical shared by every
/// process from `|n,0>` to `|n-2v,v>`.
pub fn process_amplitude(k: &ProcessVector, n: u32) -> Result<RadicalAmplitude> {
    if !is_admissible(k) {
        return Err(Error::InadmissibleProcess(k.clone()));
    }
    let net_v = k.net_photons() as u32;
    let squared = squared_amplitude(k, n)?;
    if squared.is_zero() {
        return Ok(RadicalAmplitude::zero(n, net_v));
    }
    let ratio = squared / ExactRational::from_integer(radical_squared(n, net_v));
    let num = exact_sqrt(ratio.numer());
    let den = exact_sqrt(ratio.denom());
    match (num, den) {
        (Some(num), Some(den)) => RadicalAmplitude::new(n, net_v, ExactRational::new(num, den)),
        _ => Err(Error::IrrationalCofactor(k.clone(), n)),
    }
}

/// Applies `A_k` to `|n,0>`, returning `(f_k(n, K_l), |n - 2K_l, K_l>)`.
///
/// When the pump is too weak for the process the amplitude is zero and the
/// pump count of the returned state is clamped at zero.
pub fn apply_process(k: &ProcessVector, n: u32) -> Result<(RadicalAmplitude, TwoModeFock)> {
    let amplitude = process_amplitude(k, n)?;
    let v = amplitude.net_v;
    let state = TwoModeFock::converted(n, v).unwrap_or(TwoModeFock::new(0, v));
    Ok((amplitude, state))
}
