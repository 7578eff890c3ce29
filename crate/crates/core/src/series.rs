//! Assembly of the SH photon-number distribution from diagram terms, input
//! mixtures over pump Fock states, numeric evaluation and photon statistics.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diagram::{enumerate_pairs, value_from_amplitudes, DiagramPair};
use crate::error::{Error, Result};
use crate::fock::{ExactRational, RadicalAmplitude};
use crate::numeric::{pow10, truncate_significant};
use crate::process::{process_amplitude, ProcessVector};

/// Significant decimal digits carried by irrational mixture weights.
pub const DEFAULT_PRECISION: u32 = 50;

const MAX_CUTOFF: u32 = 100_000;

/// `(target_v, gamma_power)`.
pub type TermKey = (u32, u32);

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    Coherent { mean: ExactRational },
    Thermal { mean: ExactRational },
    Custom,
}

/// Diagonal pump weights `c_{n,n}` retained up to `cutoff_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputStateWeights {
    pub weights: Vec<(u32, ExactRational)>,
    pub cutoff_n: u32,
    /// `1 - sum of retained weights`; an upper bound on the discarded mass.
    pub tail_bound: ExactRational,
    pub source: WeightSource,
    /// Significant digits of the weights, `None` when they are exact.
    pub precision: Option<u32>,
}

impl InputStateWeights {
    /// User-supplied weights, taken as exact. Repeated `n` are summed.
    pub fn custom(weights: impl IntoIterator<Item = (u32, ExactRational)>) -> Result<Self> {
        let mut merged: BTreeMap<u32, ExactRational> = BTreeMap::new();
        for (n, w) in weights {
            if w.is_negative() {
                return Err(Error::InvalidParameter(format!("negative weight {w} for n={n}")));
            }
            *merged.entry(n).or_insert_with(ExactRational::zero) += w;
        }
        if merged.is_empty() {
            return Err(Error::EmptyWeights);
        }
        let total: ExactRational = merged.values().cloned().sum();
        if total > ExactRational::one() {
            return Err(Error::InvalidParameter(format!("weights sum to {total} > 1")));
        }
        let cutoff_n = *merged.keys().next_back().unwrap();
        Ok(Self {
            weights: merged.into_iter().collect(),
            cutoff_n,
            tail_bound: ExactRational::one() - total,
            source: WeightSource::Custom,
            precision: None,
        })
    }

    pub fn retained_mass(&self) -> ExactRational {
        self.weights.iter().map(|(_, w)| w.clone()).sum()
    }
}

fn validate_parameters(mean: &ExactRational, epsilon: f64) -> Result<ExactRational> {
    if !mean.is_positive() {
        return Err(Error::InvalidParameter(format!("mean photon number {mean} must be positive")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    Ok(ExactRational::from_float(epsilon).expect("finite epsilon"))
}

/// Lower bound on `exp(-x)` with relative error below `10^-digits`, `x > 0`.
fn exp_neg_lower_bound(x: &ExactRational, digits: u32) -> ExactRational {
    // exp(x) <= S_K + t_{K+1} / (1 - x/(K+2)) once K + 2 > x.
    let tolerance = pow10(-i64::from(digits) - 2);
    let mut partial = ExactRational::one();
    let mut term = ExactRational::one();
    let mut k: u32 = 0;
    loop {
        k += 1;
        term = term * x / ExactRational::from_integer(BigInt::from(k));
        partial += &term;
        let next = &term * x / ExactRational::from_integer(BigInt::from(k + 1));
        let ratio = x / ExactRational::from_integer(BigInt::from(k + 2));
        if ratio < ExactRational::one() {
            let remainder = next / (ExactRational::one() - ratio);
            if remainder <= &partial * &tolerance {
                let upper = partial + remainder;
                return truncate_significant(&upper.recip(), digits + 2);
            }
        }
    }
}

fn cut_tail(
    mut weight: impl FnMut(u32) -> ExactRational,
    epsilon: &ExactRational,
) -> Result<(Vec<(u32, ExactRational)>, ExactRational)> {
    let mut weights = Vec::new();
    let mut tail = ExactRational::one();
    for n in 0..=MAX_CUTOFF {
        let w = weight(n);
        tail -= &w;
        weights.push((n, w));
        if tail < *epsilon {
            return Ok((weights, tail));
        }
    }
    Err(Error::InvalidParameter(format!(
        "tail mass still above {epsilon} at n={MAX_CUTOFF}"
    )))
}

/// Poisson weights `e^-mean mean^n / n!`.
pub fn coherent_weights(mean: &ExactRational, epsilon: f64) -> Result<InputStateWeights> {
    coherent_weights_with_precision(mean, epsilon, DEFAULT_PRECISION)
}

/// As [`coherent_weights`], with `precision` significant digits for `e^-mean`.
///
/// The exponential is bounded from below, so the recorded tail bound is a
/// true upper bound on the discarded mass.
pub fn coherent_weights_with_precision(
    mean: &ExactRational,
    epsilon: f64,
    precision: u32,
) -> Result<InputStateWeights> {
    let eps = validate_parameters(mean, epsilon)?;
    let eps_digits = (-epsilon.log10()).ceil().max(0.0) as u32;
    let digits = precision.max(eps_digits + 5);
    let base = exp_neg_lower_bound(mean, digits);
    let mut power = ExactRational::one();
    let (weights, tail) = cut_tail(
        |n| {
            if n > 0 {
                power = &power * mean / ExactRational::from_integer(BigInt::from(n));
            }
            &base * &power
        },
        &eps,
    )?;
    Ok(InputStateWeights {
        cutoff_n: weights.last().map_or(0, |(n, _)| *n),
        weights,
        tail_bound: tail,
        source: WeightSource::Coherent { mean: mean.clone() },
        precision: Some(precision),
    })
}

/// Bose-Einstein weights `mean^n / (1 + mean)^(n+1)`, exact for rational means.
pub fn thermal_weights(mean: &ExactRational, epsilon: f64) -> Result<InputStateWeights> {
    let eps = validate_parameters(mean, epsilon)?;
    let ratio = mean / (ExactRational::one() + mean);
    let mut w = ExactRational::one() / (ExactRational::one() + mean);
    let (weights, tail) = cut_tail(
        |n| {
            if n > 0 {
                w = &w * &ratio;
            }
            w.clone()
        },
        &eps,
    )?;
    Ok(InputStateWeights {
        cutoff_n: weights.last().map_or(0, |(n, _)| *n),
        weights,
        tail_bound: tail,
        source: WeightSource::Thermal { mean: mean.clone() },
        precision: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputDescriptor {
    Fock(u32),
    Mixture(InputStateWeights),
}

/// Truncated expansion `Pr(v'; gamma) = sum_R c(v', R) gamma^R`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionExpansion {
    pub origin: InputDescriptor,
    pub max_order: u32,
    /// Nonzero coefficients; for mixtures these are marginal over the pump.
    pub terms: BTreeMap<TermKey, ExactRational>,
    /// Weighted per-origin coefficients of a mixture, keyed by pump `n`.
    /// Empty for a single Fock input.
    pub joint: BTreeMap<u32, BTreeMap<TermKey, ExactRational>>,
}

impl DistributionExpansion {
    pub fn coefficient(&self, target_v: u32, gamma_power: u32) -> ExactRational {
        self.terms
            .get(&(target_v, gamma_power))
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    /// Largest SH photon number that can carry probability.
    pub fn max_target_v(&self) -> u32 {
        match &self.origin {
            InputDescriptor::Fock(n) => n / 2,
            InputDescriptor::Mixture(_) => self.terms.keys().map(|(v, _)| *v).max().unwrap_or(0),
        }
    }

    /// `sum_v' c(v', R)`.
    pub fn order_sum(&self, gamma_power: u32) -> ExactRational {
        self.terms
            .iter()
            .filter(|((_, p), _)| *p == gamma_power)
            .map(|(_, c)| c.clone())
            .sum()
    }
}

/// Enumerated diagram pairs for every even order up to `max_order`, reusable
/// across pump photon numbers.
#[derive(Debug, Clone)]
pub struct FockAssembler {
    max_order: u32,
    pairs: Vec<DiagramPair>,
}

impl FockAssembler {
    pub fn new(max_order: u32) -> Result<Self> {
        if max_order % 2 != 0 {
            return Err(Error::OddOrder(max_order));
        }
        let mut pairs = Vec::new();
        for order in (0..=max_order).step_by(2) {
            pairs.extend(enumerate_pairs(order)?);
        }
        Ok(Self { max_order, pairs })
    }

    pub fn pairs(&self) -> &[DiagramPair] {
        &self.pairs
    }

    fn coefficients(&self, n: u32) -> Result<BTreeMap<TermKey, ExactRational>> {
        let mut amplitudes: HashMap<&ProcessVector, RadicalAmplitude> = HashMap::new();
        let mut terms: BTreeMap<TermKey, ExactRational> = BTreeMap::new();
        for pair in &self.pairs {
            for side in [&pair.left, &pair.right] {
                if !amplitudes.contains_key(side) {
                    amplitudes.insert(side, process_amplitude(side, n)?);
                }
            }
            let value = value_from_amplitudes(pair, &amplitudes[&pair.left], &amplitudes[&pair.right])?;
            if value.is_zero() {
                continue;
            }
            let key = (pair.net_photons(), pair.total_order());
            let contribution = value * ExactRational::from_integer(BigInt::from(pair.multiplicity));
            *terms.entry(key).or_insert_with(ExactRational::zero) += contribution;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(terms)
    }

    pub fn assemble(&self, n: u32) -> Result<DistributionExpansion> {
        Ok(DistributionExpansion {
            origin: InputDescriptor::Fock(n),
            max_order: self.max_order,
            terms: self.coefficients(n)?,
            joint: BTreeMap::new(),
        })
    }
}

/// Sums every diagram term up to `max_order` for the input `|n,0>`.
pub fn assemble_fock(n: u32, max_order: u32) -> Result<DistributionExpansion> {
    FockAssembler::new(max_order)?.assemble(n)
}

/// Weighted sum of single-Fock expansions over the retained pump numbers.
pub fn assemble_mixture(weights: &InputStateWeights, max_order: u32) -> Result<DistributionExpansion> {
    if weights.weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    let assembler = FockAssembler::new(max_order)?;
    let mut terms: BTreeMap<TermKey, ExactRational> = BTreeMap::new();
    let mut joint = BTreeMap::new();
    for (n, w) in &weights.weights {
        if w.is_zero() {
            continue;
        }
        let weighted: BTreeMap<TermKey, ExactRational> = assembler
            .coefficients(*n)?
            .into_iter()
            .map(|(key, c)| (key, c * w))
            .collect();
        for (key, c) in &weighted {
            *terms.entry(*key).or_insert_with(ExactRational::zero) += c;
        }
        joint.insert(*n, weighted);
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(DistributionExpansion {
        origin: InputDescriptor::Mixture(weights.clone()),
        max_order,
        terms,
        joint,
    })
}

/// One row of [`evaluate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub target_v: u32,
    pub probability: f64,
    /// Magnitude of the highest included order. A heuristic, not a bound.
    pub remainder_estimate: f64,
}

impl Evaluation {
    /// False when truncation pushed the value outside `[0, 1]`.
    pub fn in_range(&self) -> bool {
        (0.0..=1.0).contains(&self.probability)
    }
}

fn exact_probabilities(e: &DistributionExpansion, gamma: &ExactRational) -> Vec<(ExactRational, ExactRational)> {
    let mut rows = vec![(ExactRational::zero(), ExactRational::zero()); e.max_target_v() as usize + 1];
    for (&(v, power), c) in &e.terms {
        let contribution = c * num_traits::pow(gamma.clone(), power as usize);
        if power == e.max_order {
            rows[v as usize].1 += &contribution;
        }
        rows[v as usize].0 += contribution;
    }
    rows
}

/// Evaluates the truncated series at `gamma`. Values are not clamped.
pub fn evaluate(e: &DistributionExpansion, gamma: f64) -> Vec<Evaluation> {
    let g = ExactRational::from_float(gamma).unwrap_or_else(ExactRational::zero);
    exact_probabilities(e, &g)
        .into_iter()
        .enumerate()
        .map(|(v, (p, last))| Evaluation {
            target_v: v as u32,
            probability: p.to_f64().unwrap_or(f64::NAN),
            remainder_estimate: if e.max_order == 0 { 0.0 } else { last.abs().to_f64().unwrap_or(f64::NAN) },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    /// `(variance - mean) / mean`, `None` when the mean vanishes.
    pub mandel_q: Option<f64>,
}

impl Moments {
    pub fn q(&self) -> Result<f64> {
        self.mandel_q.ok_or(Error::UndefinedQ)
    }
}

/// Mean, variance and Mandel Q of the SH photon number of the truncated
/// (unnormalized) distribution at `gamma`.
pub fn moments(e: &DistributionExpansion, gamma: f64) -> Moments {
    let g = ExactRational::from_float(gamma).unwrap_or_else(ExactRational::zero);
    let probs = exact_probabilities(e, &g);
    let mut mean = ExactRational::zero();
    let mut second = ExactRational::zero();
    for (v, (p, _)) in probs.iter().enumerate() {
        let v = ExactRational::from_integer(BigInt::from(v));
        mean += &v * p;
        second += &v * &v * p;
    }
    let variance = second - &mean * &mean;
    let mandel_q = (!mean.is_zero()).then(|| ((&variance - &mean) / &mean).to_f64().unwrap_or(f64::NAN));
    Moments {
        mean: mean.to_f64().unwrap_or(f64::NAN),
        variance: variance.to_f64().unwrap_or(f64::NAN),
        mandel_q,
    }
}
