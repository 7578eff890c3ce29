//! Brute-force references shared by the integration tests. Nothing here goes
//! through block vectors, shc/sha factors or diagram pairing.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use shg_core::{apply_ladder, ExactRational, Ladder, Mode, TwoModeFock};

/// `true` is `a1^2 a2^dag`, `false` is `(a1^dag)^2 a2`.
pub type Word = Vec<bool>;

pub fn all_words(r: u32) -> impl Iterator<Item = Word> {
    (0u64..1 << r).map(move |bits| (0..r).map(|i| bits >> i & 1 == 1).collect())
}

/// Words whose running SH count never drops below zero.
pub fn running_count_ok(word: &[bool]) -> bool {
    let mut count = 0i64;
    for &create in word {
        count += if create { 1 } else { -1 };
        if count < 0 {
            return false;
        }
    }
    true
}

pub fn count_admissible_words(r: u32) -> usize {
    all_words(r).filter(|w| running_count_ok(w)).count()
}

/// Integer factorization by trial division (inputs here are tiny).
pub fn factorize(mut x: u64, into: &mut BTreeMap<u64, u32>) {
    let mut p = 2;
    while p * p <= x {
        while x % p == 0 {
            *into.entry(p).or_default() += 1;
            x /= p;
        }
        p += 1;
    }
    if x > 1 {
        *into.entry(x).or_default() += 1;
    }
}

/// `sqrt(prod p^e)` as `(a, b)` with `a * sqrt(b)`, `b` square-free.
pub fn split_root(exponents: &BTreeMap<u64, u32>) -> (BigInt, BigInt) {
    let mut a = BigInt::one();
    let mut b = BigInt::one();
    for (&p, &e) in exponents {
        a *= BigInt::from(p).pow(e / 2);
        if e % 2 == 1 {
            b *= BigInt::from(p);
        }
    }
    (a, b)
}

/// Square-free split of `sqrt(x)` for a positive integer `x`.
pub fn split_root_of(x: &BigInt) -> (BigInt, BigInt) {
    let mut exps = BTreeMap::new();
    let mut rest = x.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        while (&rest % &p).is_zero() {
            *exps.entry(u64::try_from(&p).unwrap()).or_default() += 1;
            rest /= &p;
        }
        p += 1;
    }
    let mut out = split_root(&exps);
    if rest > BigInt::one() {
        out.1 *= rest;
    }
    out
}

/// Applies one word to `|n,0>` step by step. Returns the output state and
/// the prime exponents of the squared amplitude, or `None` if it vanishes.
pub fn apply_word(word: &[bool], n: u32) -> Option<(TwoModeFock, BTreeMap<u64, u32>)> {
    let mut state = TwoModeFock::pump_only(n);
    let mut exps = BTreeMap::new();
    for &create in word {
        let steps = if create {
            [(Mode::Pump, Ladder::Annihilate), (Mode::Pump, Ladder::Annihilate), (Mode::SecondHarmonic, Ladder::Create)]
        } else {
            [(Mode::SecondHarmonic, Ladder::Annihilate), (Mode::Pump, Ladder::Create), (Mode::Pump, Ladder::Create)]
        };
        for (mode, kind) in steps {
            let (amp, next) = apply_ladder(state, mode, kind, 1);
            if amp.is_zero() {
                return None;
            }
            let value = u64::try_from(amp.to_integer()).unwrap();
            factorize(value, &mut exps);
            state = next;
        }
    }
    Some((state, exps))
}

/// `[a1^2 a2^dag + (a1^dag)^2 a2]^r |n,0>` as a map from output state and
/// square-free radical to the integer coefficient in front of it.
pub fn brute_force_power(r: u32, n: u32) -> BTreeMap<(TwoModeFock, BigInt), BigInt> {
    let mut out: BTreeMap<(TwoModeFock, BigInt), BigInt> = BTreeMap::new();
    for word in all_words(r) {
        if let Some((state, exps)) = apply_word(&word, n) {
            let (a, b) = split_root(&exps);
            *out.entry((state, b)).or_insert_with(BigInt::zero) += a;
        }
    }
    out.retain(|_, a| !a.is_zero());
    out
}

/// Amplitude series of `exp(i g M)|0>` from the brute-force words, squared
/// into probability coefficients. Gives the same numbers as the oracle module
/// through an unrelated route, and is only feasible for small orders.
pub fn brute_force_probability(n: u32, max_order: u32) -> BTreeMap<(u32, u32), ExactRational> {
    // amp[(v, b)][r] = coefficient of i^r g^r / r! * sqrt(b)
    let mut amp: BTreeMap<(u32, BigInt), Vec<BigInt>> = BTreeMap::new();
    for r in 0..=max_order {
        for ((state, b), a) in brute_force_power(r, n) {
            let row = amp
                .entry((state.sh_count, b))
                .or_insert_with(|| vec![BigInt::zero(); max_order as usize + 1]);
            row[r as usize] += a;
        }
    }
    let fact = |x: u32| -> BigInt { (1..=x).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) };
    let mut out: BTreeMap<(u32, u32), ExactRational> = BTreeMap::new();
    for ((v, b), row) in &amp {
        for (other_key, other_row) in &amp {
            if other_key.0 != *v {
                continue;
            }
            // sqrt(b) sqrt(b') is rational only when b = b'; otherwise the
            // cross terms must cancel in the sum, which we check below.
            if other_key.1 != *b {
                continue;
            }
            for r in 0..=max_order {
                for rp in 0..=(max_order - r) {
                    let (x, y) = (&row[r as usize], &other_row[rp as usize]);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    // i^r (-i)^rp
                    let diff = i64::from(r) - i64::from(rp);
                    assert!(diff % 2 == 0, "odd phase survived");
                    let sign = if (diff / 2).rem_euclid(2) == 0 { 1 } else { -1 };
                    let value = ExactRational::new(BigInt::from(sign) * x * y * b, fact(r) * fact(rp));
                    *out.entry((*v, r + rp)).or_insert_with(ExactRational::zero) += value;
                }
            }
        }
        let radicals: Vec<_> = amp.keys().filter(|(w, _)| w == v).collect();
        assert_eq!(radicals.len(), 1, "several radicals for one output state: {radicals:?}");
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Poisson factorial moment `sum_n w_n n (n-1)` by direct summation.
pub fn second_factorial_moment(weights: &[(u32, ExactRational)]) -> ExactRational {
    weights
        .iter()
        .map(|(n, w)| {
            let n = i64::from(*n);
            w * ExactRational::from_integer(BigInt::from(n * (n - 1)))
        })
        .sum()
}
