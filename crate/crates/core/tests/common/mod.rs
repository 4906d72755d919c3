#![allow(dead_code)]

use num_bigint::BigUint;
use ordlen::Ordinal;
use proptest::prelude::*;

/// Every `ω²·a + ω·b + c` with `a, b, c ≤ k`, in increasing order.
pub fn below_omega_cubed(k: u64) -> Vec<Ordinal> {
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k {
            for c in 0..=k {
                let parts = vec![
                    (Ordinal::finite(2u32), BigUint::from(a)),
                    (Ordinal::one(), BigUint::from(b)),
                    (Ordinal::zero(), BigUint::from(c)),
                ];
                out.push(Ordinal::from_summands(parts).0);
            }
        }
    }
    out.sort();
    out
}

/// Ordinals with exponents nested at most `depth` deep, up to three summands
/// per level, coefficients in `1..=max_coeff`.
pub fn ordinal(depth: u32, max_coeff: u64) -> BoxedStrategy<Ordinal> {
    let leaf = (0..=max_coeff).prop_map(Ordinal::finite).boxed();
    if depth == 0 {
        return leaf;
    }
    let exponent = ordinal(depth - 1, max_coeff);
    prop::collection::vec((exponent, 1..=max_coeff), 0..=3)
        .prop_map(|parts| {
            let parts = parts
                .into_iter()
                .map(|(e, c)| (e, BigUint::from(c)))
                .collect();
            Ordinal::from_summands(parts).0
        })
        .boxed()
}

pub fn limit(depth: u32, max_coeff: u64) -> BoxedStrategy<Ordinal> {
    (ordinal(depth, max_coeff), ordinal(depth - 1, max_coeff))
        .prop_filter_map("exponent must be positive", |(a, e)| {
            (!e.is_zero()).then(|| a.add(&Ordinal::omega_pow(e)))
        })
        .boxed()
}

/// The members of `below_omega_cubed(k)` with norm at most `k`.
pub fn normed_below_omega_cubed(k: u64) -> Vec<Ordinal> {
    below_omega_cubed(k)
        .into_iter()
        .filter(|a| a.norm() <= BigUint::from(k))
        .collect()
}
