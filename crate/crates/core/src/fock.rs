//! Exact integer and rational primitives plus two-mode Fock ladder algebra.
//!
//! Amplitudes of ladder operators are square roots of integers. Everything
//! here works with squared amplitudes, or with [`RadicalAmplitude`], which
//! factors a process amplitude into a rational cofactor times a radical that
//! depends only on the input and output states.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type ExactRational = num_rational::BigRational;

/// `x (x-1) ... (x-len+1)`.
///
/// Returns 1 for `len == 0`. Returns 0 once the chain would step below zero,
/// including any negative `x`: annihilating past the vacuum gives nothing.
pub fn falling_factorial(x: i64, len: u32) -> BigInt {
    if len == 0 {
        return BigInt::one();
    }
    if x < 0 || i64::from(len) > x {
        return BigInt::zero();
    }
    (0..i64::from(len)).fold(BigInt::one(), |acc, i| acc * BigInt::from(x - i))
}

/// `x (x+1) ... (x+len-1)`, zero for negative `x`.
pub fn rising_factorial(x: i64, len: u32) -> BigInt {
    if len == 0 {
        return BigInt::one();
    }
    if x < 0 {
        return BigInt::zero();
    }
    falling_factorial(x + i64::from(len) - 1, len)
}

pub fn factorial(x: u32) -> BigInt {
    falling_factorial(i64::from(x), x)
}

/// `|pump, sh>` with photon counts in the fundamental and second-harmonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoModeFock {
    pub pump_count: u32,
    pub sh_count: u32,
}

impl TwoModeFock {
    pub fn new(pump_count: u32, sh_count: u32) -> Self {
        Self { pump_count, sh_count }
    }

    /// `|n, 0>`, the spontaneous SHG input.
    pub fn pump_only(n: u32) -> Self {
        Self::new(n, 0)
    }

    /// `|n - 2v, v>` reached from `|n, 0>` after `v` net conversions.
    /// `None` when fewer than `2v` pump photons are available.
    pub fn converted(n: u32, v: u32) -> Option<Self> {
        n.checked_sub(2 * v).map(|pump| Self::new(pump, v))
    }

    /// True when the state lies in the invariant subspace of `|n, 0>`.
    pub fn reachable_from(&self, n: u32) -> bool {
        u64::from(self.pump_count) + 2 * u64::from(self.sh_count) == u64::from(n)
    }

    fn count(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Pump => self.pump_count,
            Mode::SecondHarmonic => self.sh_count,
        }
    }

    fn with_count(self, mode: Mode, value: u32) -> Self {
        match mode {
            Mode::Pump => Self { pump_count: value, ..self },
            Mode::SecondHarmonic => Self { sh_count: value, ..self },
        }
    }
}

impl fmt::Display for TwoModeFock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}>", self.pump_count, self.sh_count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Pump,
    SecondHarmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

/// Applies `count` creation or annihilation operators on one mode.
///
/// Returns the squared prefactor and the shifted state. A zero prefactor means
/// the vacuum was annihilated; the returned state then has its count clamped
/// at zero and carries no physical meaning.
pub fn apply_ladder(
    state: TwoModeFock,
    mode: Mode,
    kind: Ladder,
    count: u32,
) -> (ExactRational, TwoModeFock) {
    let occupation = state.count(mode);
    match kind {
        Ladder::Create => (
            ExactRational::from_integer(rising_factorial(i64::from(occupation) + 1, count)),
            state.with_count(mode, occupation + count),
        ),
        Ladder::Annihilate => (
            ExactRational::from_integer(falling_factorial(i64::from(occupation), count)),
            state.with_count(mode, occupation.saturating_sub(count)),
        ),
    }
}

/// Squared radical shared by every process taking `|n,0>` to `|n-2v,v>`:
/// `v! * n!/(n-2v)!`. Zero when `n < 2v`.
pub fn radical_squared(origin_n: u32, net_v: u32) -> BigInt {
    factorial(net_v) * falling_factorial(i64::from(origin_n), 2 * net_v)
}

/// Exact amplitude `cofactor * sqrt(v! * n!/(n-2v)!)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalAmplitude {
    pub origin_n: u32,
    pub net_v: u32,
    pub cofactor: ExactRational,
}

impl RadicalAmplitude {
    /// Builds an amplitude, normalizing the cofactor to zero when the radical
    /// itself vanishes. Negative cofactors are rejected.
    pub fn new(origin_n: u32, net_v: u32, cofactor: ExactRational) -> Result<Self> {
        if cofactor.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "negative cofactor {cofactor} for a process amplitude"
            )));
        }
        let cofactor = if radical_squared(origin_n, net_v).is_zero() {
            ExactRational::zero()
        } else {
            cofactor
        };
        Ok(Self { origin_n, net_v, cofactor })
    }

    pub fn unit(origin_n: u32) -> Self {
        Self { origin_n, net_v: 0, cofactor: ExactRational::one() }
    }

    pub fn zero(origin_n: u32, net_v: u32) -> Self {
        Self { origin_n, net_v, cofactor: ExactRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.cofactor.is_zero()
    }

    pub fn radical_squared(&self) -> BigInt {
        radical_squared(self.origin_n, self.net_v)
    }

    /// Exact squared value `cofactor^2 * v! * n!/(n-2v)!`.
    pub fn squared(&self) -> ExactRational {
        &self.cofactor * &self.cofactor * ExactRational::from_integer(self.radical_squared())
    }

    /// Floating-point value, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let c = self.cofactor.to_f64().unwrap_or(f64::NAN);
        let r = ExactRational::from_integer(self.radical_squared())
            .to_f64()
            .unwrap_or(f64::NAN);
        c * r.sqrt()
    }
}

/// Product of two amplitudes leading to the same output state. The radicals
/// cancel, so the result is exactly rational.
pub fn radical_mul(a: &RadicalAmplitude, b: &RadicalAmplitude) -> Result<ExactRational> {
    if a.origin_n != b.origin_n || a.net_v != b.net_v {
        return Err(Error::MismatchedRadical {
            left_n: a.origin_n,
            left_v: a.net_v,
            right_n: b.origin_n,
            right_v: b.net_v,
        });
    }
    Ok(&a.cofactor * &b.cofactor * ExactRational::from_integer(a.radical_squared()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rat(x: i64) -> ExactRational {
        ExactRational::from_integer(int(x))
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(10, 4), int(10 * 9 * 8 * 7));
        assert_eq!(falling_factorial(5, 0), int(1));
        assert_eq!(falling_factorial(3, 4), int(0));
        assert_eq!(falling_factorial(3, 3), int(6));
        assert_eq!(falling_factorial(-2, 1), int(0));
        assert_eq!(falling_factorial(-2, 0), int(1));
    }

    #[test]
    fn rising_factorial_matches_product() {
        assert_eq!(rising_factorial(3, 3), int(3 * 4 * 5));
        assert_eq!(rising_factorial(0, 2), int(0));
        assert_eq!(rising_factorial(1, 4), int(24));
    }

    #[test]
    fn ladder_examples() {
        let (amp, out) =
            apply_ladder(TwoModeFock::new(4, 0), Mode::Pump, Ladder::Annihilate, 2);
        assert_eq!(amp, rat(12));
        assert_eq!(out, TwoModeFock::new(2, 0));

        for n in 0..6 {
            let (amp, out) =
                apply_ladder(TwoModeFock::new(n, 0), Mode::SecondHarmonic, Ladder::Create, 1);
            assert_eq!(amp, rat(1));
            assert_eq!(out, TwoModeFock::new(n, 1));
        }

        let (amp, out) =
            apply_ladder(TwoModeFock::new(2, 0), Mode::SecondHarmonic, Ladder::Annihilate, 1);
        assert!(amp.is_zero());
        assert_eq!(out.sh_count, 0);
    }

    #[test]
    fn creation_of_two_pump_photons() {
        let (amp, out) = apply_ladder(TwoModeFock::new(2, 1), Mode::Pump, Ladder::Create, 2);
        assert_eq!(amp, rat(3 * 4));
        assert_eq!(out, TwoModeFock::new(4, 1));
    }

    #[test]
    fn radical_mul_examples() {
        // k=(1) at n=4: f = sqrt(12), radical sqrt(1! * 4!/2!) = sqrt(12), cofactor 1.
        let f = RadicalAmplitude::new(4, 1, rat(1)).unwrap();
        assert_eq!(radical_mul(&f, &f).unwrap(), rat(12));

        let zero = RadicalAmplitude::zero(4, 1);
        assert!(radical_mul(&f, &zero).unwrap().is_zero());

        // k=(1,1,1) at n=2 is 2*sqrt(2); k=(1) at n=2 is sqrt(2).
        let a = RadicalAmplitude::new(2, 1, rat(2)).unwrap();
        let b = RadicalAmplitude::new(2, 1, rat(1)).unwrap();
        assert_eq!(radical_mul(&a, &b).unwrap(), rat(4));
    }

    #[test]
    fn radical_mul_rejects_orthogonal_outputs() {
        let a = RadicalAmplitude::new(6, 1, rat(1)).unwrap();
        let b = RadicalAmplitude::new(6, 2, rat(1)).unwrap();
        assert!(matches!(radical_mul(&a, &b), Err(Error::MismatchedRadical { .. })));
        let c = RadicalAmplitude::new(5, 1, rat(1)).unwrap();
        assert!(matches!(radical_mul(&a, &c), Err(Error::MismatchedRadical { .. })));
    }

    #[test]
    fn vanishing_radical_forces_zero_cofactor() {
        let a = RadicalAmplitude::new(3, 2, rat(7)).unwrap();
        assert!(a.is_zero());
        assert!(a.squared().is_zero());
        assert!(RadicalAmplitude::new(3, 1, rat(-1)).is_err());
    }

    #[test]
    fn reachability() {
        assert!(TwoModeFock::new(4, 3).reachable_from(10));
        assert!(!TwoModeFock::new(4, 2).reachable_from(10));
        assert_eq!(TwoModeFock::converted(5, 2), Some(TwoModeFock::new(1, 2)));
        assert_eq!(TwoModeFock::converted(3, 2), None);
    }

    proptest! {
        #[test]
        fn falling_factorial_splits(x in -5i64..=20, a in 0u32..=10, b in 0u32..=10) {
            prop_assert_eq!(
                falling_factorial(x, a + b),
                falling_factorial(x, a) * falling_factorial(x - i64::from(a), b)
            );
        }

        #[test]
        fn create_then_annihilate_round_trips(
            pump in 0u32..12, sh in 0u32..12, k in 0u32..6, on_pump in any::<bool>()
        ) {
            let mode = if on_pump { Mode::Pump } else { Mode::SecondHarmonic };
            let start = TwoModeFock::new(pump, sh);
            let (up, mid) = apply_ladder(start, mode, Ladder::Create, k);
            let (down, end) = apply_ladder(mid, mode, Ladder::Annihilate, k);
            prop_assert_eq!(end, start);
            prop_assert_eq!(&up, &down);
            let occ = i64::from(start.count(mode));
            let expected = rising_factorial(occ + 1, k) * falling_factorial(occ + i64::from(k), k);
            prop_assert_eq!(&up * &down, ExactRational::from_integer(expected));
            prop_assert!(!up.is_negative());
        }

        #[test]
        fn radical_mul_commutes(n in 0u32..16, v in 0u32..8, a in 0i64..20, b in 0i64..20) {
            let x = RadicalAmplitude::new(n, v, rat(a)).unwrap();
            let y = RadicalAmplitude::new(n, v, rat(b)).unwrap();
            let xy = radical_mul(&x, &y).unwrap();
            prop_assert_eq!(&xy, &radical_mul(&y, &x).unwrap());
            // (x y)^2 = x^2 y^2 and the root is the nonnegative product.
            prop_assert_eq!(&xy * &xy, x.squared() * y.squared());
            prop_assert!(!xy.is_negative());
        }
    }
}
