//! Double-sided diagrams: pairs of elementary processes acting on the ket and
//! the bra of `|n,0><n,0|`, and their exact contribution to the SH
//! photon-number distribution.
//!
//! Enumeration order is deterministic. Processes of a given order come out in
//! lexicographic order of their block vectors; pairs are sorted by
//! `(left order, left blocks, right order, right blocks)` and only the
//! canonical member of each conjugate pair (`left <= right`) is produced.

mod render;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{factorial, radical_mul, ExactRational, RadicalAmplitude};
use crate::process::{is_admissible, process_amplitude, ProcessVector};

pub use render::{render_ascii, render_latex, LATEX_PREAMBLE};

/// A process superposition `A_k (|n,0><n,0|) A_k'^dag` together with its
/// conjugate, when distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramPair {
    /// Process acting on the ket.
    pub left: ProcessVector,
    /// Process acting on the bra.
    pub right: ProcessVector,
    /// 1 when both sides coincide, otherwise 2 (the diagram plus its conjugate).
    pub multiplicity: u32,
}

impl DiagramPair {
    /// Validates both sides and sets the multiplicity. The given orientation
    /// is kept; see [`DiagramPair::canonical`].
    pub fn new(left: ProcessVector, right: ProcessVector) -> Result<Self> {
        for side in [&left, &right] {
            if !is_admissible(side) {
                return Err(Error::InadmissibleProcess(side.clone()));
            }
        }
        let (left_v, right_v) = (left.net_photons(), right.net_photons());
        if left_v != right_v {
            return Err(Error::InvalidPair { left, right, left_v, right_v });
        }
        let multiplicity = if left == right { 1 } else { 2 };
        Ok(Self { left, right, multiplicity })
    }

    pub fn left_order(&self) -> u32 {
        self.left.order()
    }

    pub fn right_order(&self) -> u32 {
        self.right.order()
    }

    /// `R = r + r'`.
    pub fn total_order(&self) -> u32 {
        self.left_order() + self.right_order()
    }

    /// Net SH photons created, identical on both sides.
    pub fn net_photons(&self) -> u32 {
        self.left.net_photons() as u32
    }

    pub fn is_canonical(&self) -> bool {
        canonical_key(&self.left) <= canonical_key(&self.right)
    }

    /// Same pair with sides ordered so that `left <= right` on `(order, blocks)`.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            self.clone()
        } else {
            self.swapped()
        }
    }

    /// The conjugate diagram.
    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
            multiplicity: self.multiplicity,
        }
    }
}

fn canonical_key(k: &ProcessVector) -> (u32, &[u32]) {
    (k.order(), k.blocks())
}

/// Rational coefficient of `gamma^R` for the output `|n - 2v', v'>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTerm {
    pub target_v: u32,
    pub gamma_power: u32,
    pub coefficient: ExactRational,
}

/// All admissible processes of order exactly `r`, in lexicographic order.
pub fn enumerate_processes(r: u32) -> Vec<ProcessVector> {
    fn extend(blocks: &mut Vec<u32>, remaining: u32, occupation: u32, out: &mut Vec<ProcessVector>) {
        if remaining == 0 {
            out.push(ProcessVector::new(blocks.clone()).expect("blocks are positive"));
            return;
        }
        let creating = blocks.len() % 2 == 0;
        let largest = if creating { remaining } else { remaining.min(occupation) };
        for size in 1..=largest {
            blocks.push(size);
            let next = if creating { occupation + size } else { occupation - size };
            extend(blocks, remaining - size, next, out);
            blocks.pop();
        }
    }

    let mut out = Vec::new();
    extend(&mut Vec::new(), r, 0, &mut out);
    out
}

/// Canonical diagram pairs of total order `R` whose sides output the same
/// state. Pairs with different net photon numbers are never built.
pub fn enumerate_pairs(total_order: u32) -> Result<Vec<DiagramPair>> {
    if total_order % 2 != 0 {
        return Err(Error::OddOrder(total_order));
    }
    let mut pairs = Vec::new();
    for r in 0..=total_order / 2 {
        let left_side = enumerate_processes(r);
        let mut by_photons: BTreeMap<i64, Vec<ProcessVector>> = BTreeMap::new();
        for k in enumerate_processes(total_order - r) {
            by_photons.entry(k.net_photons()).or_default().push(k);
        }
        for left in &left_side {
            let Some(partners) = by_photons.get(&left.net_photons()) else {
                continue;
            };
            for right in partners {
                if r == total_order - r && right < left {
                    continue;
                }
                let multiplicity = if left == right { 1 } else { 2 };
                pairs.push(DiagramPair { left: left.clone(), right: right.clone(), multiplicity });
            }
        }
    }
    Ok(pairs)
}

/// `(-1)^((r - r')/2) = i^r (-i)^r'`, for `r = r' mod 2`.
fn phase(r: u32, r_prime: u32) -> i64 {
    let diff = i64::from(r) - i64::from(r_prime);
    if (diff / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Value of one diagram (without its conjugate):
/// `i^r (-i)^r' / (r! r'!) * f_k(n,v) f_k'(n,v)`.
pub fn diagram_value(pair: &DiagramPair, n: u32) -> Result<ExactRational> {
    let left = process_amplitude(&pair.left, n)?;
    let right = process_amplitude(&pair.right, n)?;
    value_from_amplitudes(pair, &left, &right)
}

pub(crate) fn value_from_amplitudes(
    pair: &DiagramPair,
    left: &RadicalAmplitude,
    right: &RadicalAmplitude,
) -> Result<ExactRational> {
    if left.net_v != right.net_v {
        return Err(Error::InvalidPair {
            left: pair.left.clone(),
            right: pair.right.clone(),
            left_v: i64::from(left.net_v),
            right_v: i64::from(right.net_v),
        });
    }
    let overlap = radical_mul(left, right)?;
    if overlap.is_zero() {
        return Ok(overlap);
    }
    let (r, r_prime) = (pair.left_order(), pair.right_order());
    let weight = ExactRational::new(
        BigInt::from(phase(r, r_prime)),
        factorial(r) * factorial(r_prime),
    );
    Ok(weight * overlap)
}

/// Contribution of the pair, including the conjugate diagram when the sides differ.
pub fn diagram_term(pair: &DiagramPair, n: u32) -> Result<SeriesTerm> {
    let value = diagram_value(pair, n)?;
    Ok(SeriesTerm {
        target_v: pair.net_photons(),
        gamma_power: pair.total_order(),
        coefficient: value * ExactRational::from_integer(BigInt::from(pair.multiplicity)),
    })
}

/// `f_k(n,v)^2 / (r!)^2`: the probability-like `k = k'` term.
pub fn probability_term(k: &ProcessVector, n: u32) -> Result<SeriesTerm> {
    if !is_admissible(k) {
        return Err(Error::InadmissibleProcess(k.clone()));
    }
    let pair = DiagramPair { left: k.clone(), right: k.clone(), multiplicity: 1 };
    diagram_term(&pair, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn pv(blocks: &[u32]) -> ProcessVector {
        ProcessVector::new(blocks.to_vec()).unwrap()
    }

    fn rat(x: i64) -> ExactRational {
        ExactRational::from_integer(BigInt::from(x))
    }

    fn frac(a: i64, b: i64) -> ExactRational {
        ExactRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn order_two_processes() {
        assert_eq!(enumerate_processes(2), vec![pv(&[1, 1]), pv(&[2])]);
        assert_eq!(enumerate_processes(0), vec![ProcessVector::identity()]);
        assert_eq!(enumerate_processes(1), vec![pv(&[1])]);
    }

    #[test]
    fn process_counts_are_central_binomials() {
        let counts: Vec<usize> = (0..=8).map(|r| enumerate_processes(r).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 6, 10, 20, 35, 70]);
    }

    #[test]
    fn processes_are_sorted_and_admissible() {
        for r in 0..=10 {
            let ps = enumerate_processes(r);
            assert!(ps.windows(2).all(|w| w[0] < w[1]));
            assert!(ps.iter().all(|k| is_admissible(k) && k.order() == r));
        }
    }

    #[test]
    fn second_order_pairs() {
        let pairs = enumerate_pairs(2).unwrap();
        assert_eq!(
            pairs,
            vec![
                DiagramPair { left: ProcessVector::identity(), right: pv(&[1, 1]), multiplicity: 2 },
                DiagramPair { left: pv(&[1]), right: pv(&[1]), multiplicity: 1 },
            ]
        );
        assert!(!pairs.iter().any(|p| p.right == pv(&[2]) || p.left == pv(&[2])));

        let zeroth = enumerate_pairs(0).unwrap();
        assert_eq!(
            zeroth,
            vec![DiagramPair {
                left: ProcessVector::identity(),
                right: ProcessVector::identity(),
                multiplicity: 1
            }]
        );
        assert_eq!(enumerate_pairs(3), Err(Error::OddOrder(3)));
    }

    #[test]
    fn pairs_for_higher_orders_are_canonical_and_matched() {
        for big_r in (0..=10).step_by(2) {
            let pairs = enumerate_pairs(big_r).unwrap();
            for p in &pairs {
                assert!(p.is_canonical());
                assert_eq!(p.total_order(), big_r);
                assert_eq!(p.left.net_photons(), p.right.net_photons());
                assert_eq!(p.left_order() % 2, p.right_order() % 2);
                assert_eq!(p.multiplicity, if p.left == p.right { 1 } else { 2 });
            }
        }
        let twelve = enumerate_pairs(12).unwrap();
        let target = DiagramPair::new(pv(&[2, 1, 4, 1]), pv(&[4])).unwrap().canonical();
        assert!(twelve.contains(&target));
    }

    #[test]
    fn second_order_terms() {
        for n in 0..12i64 {
            let c = diagram_term(&DiagramPair::new(pv(&[1]), pv(&[1])).unwrap(), n as u32).unwrap();
            assert_eq!((c.target_v, c.gamma_power), (1, 2));
            assert_eq!(c.coefficient, rat(n * (n - 1).max(0)));

            let a = diagram_term(&DiagramPair::new(ProcessVector::identity(), pv(&[1, 1])).unwrap(), n as u32)
                .unwrap();
            assert_eq!((a.target_v, a.gamma_power), (0, 2));
            assert_eq!(a.coefficient, rat(-n * (n - 1).max(0)));
        }
    }

    #[test]
    fn worked_example_at_ten() {
        let pair = DiagramPair::new(pv(&[2, 1, 4, 1]), pv(&[4])).unwrap();
        assert_eq!(pair.multiplicity, 2);
        assert_eq!(diagram_value(&pair, 10).unwrap(), rat(50400));
        let term = diagram_term(&pair, 10).unwrap();
        assert_eq!((term.target_v, term.gamma_power), (4, 12));
        assert_eq!(term.coefficient, rat(100800));
        assert_eq!(diagram_term(&pair.swapped(), 10).unwrap(), term);
    }

    #[test]
    fn invalid_pairs_rejected() {
        assert!(matches!(
            DiagramPair::new(ProcessVector::identity(), pv(&[2])),
            Err(Error::InvalidPair { .. })
        ));
        assert!(matches!(
            DiagramPair::new(pv(&[1, 2]), pv(&[1, 2])),
            Err(Error::InadmissibleProcess(_))
        ));
        let bogus = DiagramPair { left: pv(&[1]), right: pv(&[2]), multiplicity: 2 };
        assert!(matches!(diagram_term(&bogus, 6), Err(Error::InvalidPair { .. })));
    }

    #[test]
    fn probability_term_examples() {
        let t = probability_term(&pv(&[1]), 4).unwrap();
        assert_eq!(t, SeriesTerm { target_v: 1, gamma_power: 2, coefficient: rat(12) });
        for n in 0..5 {
            let t = probability_term(&ProcessVector::identity(), n).unwrap();
            assert_eq!(t, SeriesTerm { target_v: 0, gamma_power: 0, coefficient: rat(1) });
        }
        let t = probability_term(&pv(&[1, 1, 1]), 2).unwrap();
        assert_eq!(t, SeriesTerm { target_v: 1, gamma_power: 6, coefficient: frac(2, 9) });
        assert!(probability_term(&pv(&[1, 2]), 4).is_err());
    }

    #[test]
    fn phase_values() {
        assert_eq!(phase(0, 0), 1);
        assert_eq!(phase(0, 2), -1);
        assert_eq!(phase(2, 0), -1);
        assert_eq!(phase(1, 3), -1);
        assert_eq!(phase(8, 4), 1);
        assert_eq!(phase(1, 5), 1);
    }

    proptest! {
        #[test]
        fn pair_terms_are_symmetric_and_vanish_below_peak(
            big_r in (0u32..=5).prop_map(|x| 2 * x), pick in any::<prop::sample::Index>(), n in 0u32..=12
        ) {
            let pairs = enumerate_pairs(big_r).unwrap();
            let pair = &pairs[pick.index(pairs.len())];
            let term = diagram_term(pair, n).unwrap();
            prop_assert_eq!(&term, &diagram_term(&pair.swapped(), n).unwrap());
            let peak = pair.left.peak_photons().max(pair.right.peak_photons());
            if i64::from(n) < 2 * peak {
                prop_assert!(term.coefficient.is_zero());
            }
            if pair.left == pair.right {
                prop_assert!(!term.coefficient.is_negative());
            }
        }
    }
}
