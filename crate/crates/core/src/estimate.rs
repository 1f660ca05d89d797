//! Proportion of linear codes over a finite field generated by their
//! codewords of maximal Hamming support: an exact lower-bound formula and a
//! seeded Monte Carlo experiment to compare against it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ring::{ChainFactor, RingElem, RingSpec};

/// Exact value of the lower bound
/// `((q-1)^n (q^k - 1) - (q^n - 1) q^(k-1)) / ((q^n - 1)(q^k - q^(k-1) - 1))`
/// for the proportion of k-dimensional codes in `F_q^n` generated by their
/// maximal codewords. The fraction is kept unreduced alongside the reduced
/// rational; it may be negative (a trivially true bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimate {
    pub numerator: BigInt,
    pub denominator: BigInt,
    pub value: BigRational,
}

impl Estimate {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// `Some((p, m))` with `q = p^m`, `p` prime, `m >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut m = 0;
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            return if rest == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn big_pow(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

fn check_field_params(q: u64, n: u32, k: u32) -> Result<(u64, u32)> {
    let (p, m) = prime_power(q)
        .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    if k < 1 || k > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    Ok((p, m))
}

/// The closed-form lower bound. Undefined at `q = 2, k = 1`, where the
/// denominator factor `q^k - q^(k-1) - 1` vanishes.
pub fn estimate_maximal(q: u64, n: u32, k: u32) -> Result<Estimate> {
    check_field_params(q, n, k)?;
    if q == 2 && k == 1 {
        return Err(Error::InvalidInput(
            "the estimate denominator q^k - q^(k-1) - 1 vanishes at q=2, k=1".into(),
        ));
    }
    let qn1 = big_pow(q, n) - 1u32;
    let numerator = big_pow(q - 1, n) * (big_pow(q, k) - 1u32) - &qn1 * big_pow(q, k - 1);
    let denominator = &qn1 * (big_pow(q, k) - big_pow(q, k - 1) - 1u32);
    let value = BigRational::new(numerator.clone(), denominator.clone());
    Ok(Estimate {
        numerator,
        denominator,
        value,
    })
}

/// `F_q` as a ring: a prime residue ring for `m = 1`, a Galois field
/// otherwise (searching for an irreducible modulus when none is built in).
pub fn field_ring(q: u64) -> Result<RingSpec> {
    let (p, m) = prime_power(q)
        .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    if m == 1 {
        return RingSpec::zm(p);
    }
    if let Ok(factor) = ChainFactor::gf(p, m, None) {
        return RingSpec::product(vec![factor]);
    }
    // No built-in modulus: scan monic polynomials of degree m.
    let mut low = vec![0u64; m as usize];
    loop {
        let mut coeffs = low.clone();
        coeffs.push(1);
        if let Ok(factor) = ChainFactor::gf(p, m, Some(coeffs)) {
            return RingSpec::product(vec![factor]);
        }
        // Increment the low-degree coefficients in base p.
        let mut carry = true;
        for digit in low.iter_mut() {
            if !carry {
                break;
            }
            *digit += 1;
            if *digit == p {
                *digit = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            return Err(Error::Internal(format!(
                "no irreducible degree-{m} modulus found over F_{p}"
            )));
        }
    }
}

/// Result of the sampling experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub samples: u64,
    pub generated: u64,
    pub proportion: f64,
}

/// Sample `samples` uniform k-dimensional codes in `F_q^n` (row spaces of
/// uniform full-rank matrices, rejection-sampled) and report the fraction
/// generated by their codewords of maximal Hamming support.
///
/// Deterministic for a fixed seed: sample `i` draws from stream `i` of a
/// ChaCha generator seeded with `seed`, independent of thread count.
pub fn monte_carlo_maximal(
    q: u64,
    n: u32,
    k: u32,
    samples: u64,
    seed: u64,
    caps: &Caps,
) -> Result<MonteCarlo> {
    check_field_params(q, n, k)?;
    if n > 32 {
        return Err(Error::InvalidInput(format!(
            "sampling supports n <= 32, got {n}"
        )));
    }
    let mut code_size: u64 = 1;
    for _ in 0..k {
        code_size = code_size.saturating_mul(q);
    }
    caps.check(
        "sampled code size q^k",
        code_size,
        caps.submodule_words,
    )?;
    let ring = field_ring(q)?;
    let elems: Vec<RingElem> = ring.elements().collect();
    let generated = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let rows = sample_full_rank(&ring, &elems, n as usize, k as usize, &mut rng);
            u64::from(maximal_words_generate(&ring, &elems, &rows))
        })
        .sum();
    Ok(MonteCarlo {
        samples,
        generated,
        proportion: if samples == 0 {
            f64::NAN
        } else {
            generated as f64 / samples as f64
        },
    })
}

fn sample_full_rank(
    ring: &RingSpec,
    elems: &[RingElem],
    n: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<RingElem>> {
    loop {
        let rows: Vec<Vec<RingElem>> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| elems[rng.gen_range(0..elems.len())].clone())
                    .collect()
            })
            .collect();
        if rank(ring, rows.clone()) == k {
            return rows;
        }
    }
}

/// Rank over a field by Gaussian elimination.
pub(crate) fn rank(ring: &RingSpec, mut rows: Vec<Vec<RingElem>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(pivot) = (r..rows.len()).find(|&i| !ring.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = ring
            .inverse(&rows[r][col])
            .expect("nonzero field element is invertible");
        for i in r + 1..rows.len() {
            if ring.is_zero(&rows[i][col]) {
                continue;
            }
            let factor = ring.mul(&rows[i][col], &inv);
            for j in col..n {
                let sub = ring.mul(&factor, &rows[r][j]);
                rows[i][j] = ring.sub(&rows[i][j], &sub);
            }
        }
        r += 1;
    }
    r
}

/// Do the codewords of inclusion-maximal Hamming support span the row space?
fn maximal_words_generate(ring: &RingSpec, elems: &[RingElem], rows: &[Vec<RingElem>]) -> bool {
    let k = rows.len();
    let n = rows[0].len();
    // Enumerate all q^k codewords with their support masks.
    let q = elems.len();
    let mut words: Vec<(u64, Vec<RingElem>)> = Vec::new();
    let mut scalars = vec![0usize; k];
    loop {
        let mut w = vec![ring.zero(); n];
        for (i, &s) in scalars.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for j in 0..n {
                w[j] = ring.add(&w[j], &ring.mul(&elems[s], &rows[i][j]));
            }
        }
        let mask: u64 = w
            .iter()
            .enumerate()
            .filter(|(_, x)| !ring.is_zero(x))
            .map(|(j, _)| 1u64 << j)
            .sum();
        if mask != 0 {
            words.push((mask, w));
        }
        let mut carry = true;
        for digit in scalars.iter_mut() {
            if !carry {
                break;
            }
            *digit += 1;
            if *digit == q {
                *digit = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }
    let maximal: Vec<Vec<RingElem>> = words
        .iter()
        .filter(|(mask, _)| {
            !words
                .iter()
                .any(|(other, _)| other != mask && (other | mask) == *other)
        })
        .map(|(_, w)| w.clone())
        .collect();
    rank(ring, maximal) == k
}
