//! Monomial ideals attached to codes and their multigraded Betti numbers.
//!
//! The ideal of a code is generated by the monomials `x^sigma(v)` of its
//! minimal codewords. Betti numbers are computed strand by strand: for
//! each multidegree in the lcm lattice of the generators, the subsets of
//! generators sharing that lcm form a complex whose homology ranks are the
//! graded Betti numbers of the quotient. Ranks are taken by fraction-free
//! integer elimination (characteristic 0, the default) or by elimination
//! over a prime field.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::caps::Caps;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::support::Support;
use crate::weights::{min_codewords, Method, WeightProfile};

/// A monomial in u variables, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Componentwise comparison: `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A monomial ideal, kept as its unique minimal generating set sorted
/// lexicographically with the largest exponent vector first (x1-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
    u: usize,
}

impl MonomialIdeal {
    /// Reduce the given monomials to minimal generators. Rejects an empty
    /// family, a unit generator, and exponent vectors of the wrong width.
    pub fn new(u: usize, monomials: Vec<Monomial>) -> Result<MonomialIdeal> {
        for m in &monomials {
            if m.exponents.len() != u {
                return Err(Error::InvalidInput(format!(
                    "monomial has {} exponents, the ideal lives in {} variables",
                    m.exponents.len(),
                    u
                )));
            }
            if m.is_one() {
                return Err(Error::InvalidInput(
                    "the unit monomial generates the whole ring, not a proper ideal".into(),
                ));
            }
        }
        let mut gens = monomials;
        gens.sort();
        gens.dedup();
        let minimal: Vec<Monomial> = gens
            .iter()
            .filter(|m| !gens.iter().any(|o| o != *m && o.divides(m)))
            .cloned()
            .collect();
        if minimal.is_empty() {
            return Err(Error::InvalidInput(
                "a monomial ideal needs at least one generator".into(),
            ));
        }
        let mut gens = minimal;
        gens.sort_by(|a, b| b.exponents.cmp(&a.exponents));
        Ok(MonomialIdeal { gens, u })
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn u(&self) -> usize {
        self.u
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// The monomial ideal generated by `x^sigma(v)` over the nonzero
/// codewords; its minimal generators are exactly the supports of the
/// minimal codewords, one per support class.
pub fn ideal_of_code(code: &Code, support: &Support, caps: &Caps) -> Result<MonomialIdeal> {
    support.check_code(code)?;
    if code.is_zero() {
        return Err(Error::ZeroCode);
    }
    let min = min_codewords(code, support, caps)?;
    for class in &min.classes {
        if class.value.is_zero() {
            return Err(Error::InvalidInput(
                "a nonzero codeword has empty support; the associated ideal is the unit ideal"
                    .into(),
            ));
        }
    }
    let mons: Vec<Monomial> = min
        .classes
        .iter()
        .map(|c| Monomial::new(c.value.coords().to_vec()))
        .collect();
    let count = mons.len();
    let ideal = MonomialIdeal::new(support.u(), mons)?;
    // Distinct minimal support values are pairwise incomparable, so the
    // reduction must be a no-op; anything else is a bug upstream.
    if ideal.generators().len() != count {
        return Err(Error::Internal(
            "minimal codeword supports are not pairwise incomparable".into(),
        ));
    }
    Ok(ideal)
}

/// Graded Betti numbers of the quotient by a monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    /// (homological degree r >= 1, multidegree) -> rank; zero ranks omitted.
    pub multigraded: BTreeMap<(u32, Vec<u32>), u64>,
    /// (homological degree, total degree) -> rank; projection of the above.
    pub coarse: BTreeMap<(u32, u64), u64>,
    /// Projective dimension: the largest homological degree present.
    pub pd: u32,
    /// `min_shifts[r-1]` is the least total degree in homological degree r.
    pub min_shifts: Vec<u64>,
}

/// Betti numbers via strand homology over the lcm lattice of the
/// generators. `field_char` selects the coefficient field: 0 for exact
/// integer arithmetic (the rationals), a prime p for F_p.
pub fn betti(ideal: &MonomialIdeal, field_char: u64, caps: &Caps) -> Result<BettiTable> {
    let (_, betti) = strand_tables(ideal, field_char, caps)?;
    assemble_betti(betti)
}

fn assemble_betti(multigraded: BTreeMap<(u32, Vec<u32>), u64>) -> Result<BettiTable> {
    let mut coarse: BTreeMap<(u32, u64), u64> = BTreeMap::new();
    let mut pd = 0;
    for ((r, a), rank) in &multigraded {
        let total: u64 = a.iter().map(|&e| u64::from(e)).sum();
        *coarse.entry((*r, total)).or_insert(0) += rank;
        pd = pd.max(*r);
    }
    let mut min_shifts = Vec::with_capacity(pd as usize);
    for r in 1..=pd {
        let b = coarse
            .range((r, 0)..(r + 1, 0))
            .map(|(&(_, total), _)| total)
            .min()
            .ok_or_else(|| {
                Error::Internal(format!("no Betti numbers in homological degree {r}"))
            })?;
        min_shifts.push(b);
    }
    Ok(BettiTable {
        multigraded,
        coarse,
        pd,
        min_shifts,
    })
}

/// Per-(r, multidegree) count of Taylor-complex summands next to the
/// minimal Betti rank; the differences are the cancellations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cancellation {
    /// (r, multidegree) -> (taylor rank, minimal rank).
    pub multigraded: BTreeMap<(u32, Vec<u32>), (u64, u64)>,
    /// (r, total degree) -> (taylor rank, minimal rank).
    pub coarse: BTreeMap<(u32, u64), (u64, u64)>,
}

impl Cancellation {
    /// True when the Taylor complex is already minimal.
    pub fn is_minimal(&self) -> bool {
        self.multigraded.values().all(|&(t, b)| t == b)
    }
}

/// Compare the Taylor complex with the minimal resolution degree by
/// degree.
pub fn taylor_cancellation_report(
    ideal: &MonomialIdeal,
    field_char: u64,
    caps: &Caps,
) -> Result<Cancellation> {
    let (taylor, betti) = strand_tables(ideal, field_char, caps)?;
    if let Some(key) = betti.keys().find(|key| !taylor.contains_key(*key)) {
        return Err(Error::Internal(format!(
            "a minimal rank appears outside the Taylor complex at {key:?}"
        )));
    }
    let mut multigraded: BTreeMap<(u32, Vec<u32>), (u64, u64)> = BTreeMap::new();
    for (key, &t) in &taylor {
        let b = betti.get(key).copied().unwrap_or(0);
        multigraded.insert(key.clone(), (t, b));
    }
    let mut coarse: BTreeMap<(u32, u64), (u64, u64)> = BTreeMap::new();
    for ((r, a), &(t, b)) in &multigraded {
        let total: u64 = a.iter().map(|&e| u64::from(e)).sum();
        let entry = coarse.entry((*r, total)).or_insert((0, 0));
        entry.0 += t;
        entry.1 += b;
    }
    Ok(Cancellation {
        multigraded,
        coarse,
    })
}

/// Generalized weights read off the minimal resolution: M is the
/// projective dimension of the quotient and d_r its minimum shift in
/// homological degree r. With `allow_pseudo` the modularity hypothesis is
/// not enforced, so the result may legitimately disagree with the
/// definitional routes; no witnesses are produced either way.
pub fn weights_from_betti(
    code: &Code,
    support: &Support,
    allow_pseudo: bool,
    field_char: u64,
    caps: &Caps,
) -> Result<WeightProfile> {
    support.check_code(code)?;
    if !allow_pseudo {
        support.require_modular(caps)?;
    }
    if code.is_zero() {
        return Err(Error::ZeroCode);
    }
    let ideal = ideal_of_code(code, support, caps)?;
    let table = betti(&ideal, field_char, caps)?;
    if !allow_pseudo {
        let m = code.big_m(caps)?;
        if table.pd != m {
            return Err(Error::Internal(format!(
                "projective dimension {} differs from the invariant M = {m}",
                table.pd
            )));
        }
    }
    Ok(WeightProfile {
        m: table.pd,
        d: table.min_shifts.clone(),
        witnesses: vec![Vec::new(); table.pd as usize],
        method: Method::Betti,
    })
}

/// Taylor ranks and Betti ranks per (homological degree, multidegree).
fn strand_tables(
    ideal: &MonomialIdeal,
    field_char: u64,
    caps: &Caps,
) -> Result<(
    BTreeMap<(u32, Vec<u32>), u64>,
    BTreeMap<(u32, Vec<u32>), u64>,
)> {
    let t = ideal.gens.len();
    caps.check(
        "monomial ideal generators",
        t as u64,
        u64::from(caps.betti_generators),
    )?;
    if field_char != 0 && crate::estimate::prime_power(field_char) != Some((field_char, 1)) {
        return Err(Error::InvalidInput(format!(
            "the coefficient characteristic must be 0 or a prime, got {field_char}"
        )));
    }

    // Group the 2^t - 1 nonempty subsets by the lcm of their generators.
    let mut strands: BTreeMap<Vec<u32>, BTreeMap<u32, Vec<u64>>> = BTreeMap::new();
    for mask in 1u64..(1u64 << t) {
        let mut lcm = vec![0u32; ideal.u];
        for (i, gen) in ideal.gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (l, &e) in lcm.iter_mut().zip(&gen.exponents) {
                    *l = (*l).max(e);
                }
            }
        }
        strands
            .entry(lcm)
            .or_default()
            .entry(mask.count_ones())
            .or_default()
            .push(mask);
    }

    // Strand homologies are independent; compute them in parallel and
    // merge deterministically (strand order is fixed by the BTreeMap).
    let strands: Vec<(Vec<u32>, BTreeMap<u32, Vec<u64>>)> = strands.into_iter().collect();
    let homologies: Vec<BTreeMap<u32, u64>> = strands
        .par_iter()
        .map(|(_, by_size)| strand_homology(by_size, field_char))
        .collect::<Result<Vec<_>>>()?;

    let mut taylor: BTreeMap<(u32, Vec<u32>), u64> = BTreeMap::new();
    let mut betti: BTreeMap<(u32, Vec<u32>), u64> = BTreeMap::new();
    for ((degree, by_size), homology) in strands.into_iter().zip(homologies) {
        for (&r, masks) in &by_size {
            taylor.insert((r, degree.clone()), masks.len() as u64);
        }
        for (r, b) in homology {
            betti.insert((r, degree.clone()), b);
        }
    }
    Ok((taylor, betti))
}

/// Homology ranks of one strand: basis in homological degree r is the set
/// of r-element generator subsets with the strand's lcm; the differential
/// drops one generator at a time with alternating signs, keeping only
/// targets that stay in the strand.
fn strand_homology(by_size: &BTreeMap<u32, Vec<u64>>, field_char: u64) -> Result<BTreeMap<u32, u64>> {
    // Differential matrices, rank target x source, entries in {-1, 0, 1}.
    let mut mats: BTreeMap<u32, Vec<Vec<i64>>> = BTreeMap::new();
    for (&r, cols) in by_size {
        if r == 1 {
            continue; // the target of the first differential is outside the strand
        }
        let Some(rows) = by_size.get(&(r - 1)) else {
            continue;
        };
        let mut mat = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, &mask) in cols.iter().enumerate() {
            let mut k = 0;
            for i in 0..64 {
                if mask >> i & 1 == 1 {
                    k += 1;
                    let sub = mask & !(1u64 << i);
                    if let Ok(row) = rows.binary_search(&sub) {
                        mat[row][j] = if k % 2 == 1 { 1 } else { -1 };
                    }
                }
            }
        }
        mats.insert(r, mat);
    }

    // The squared differential must vanish; this pins the sign convention.
    for (&r, m2) in &mats {
        if let Some(m1) = mats.get(&(r - 1)) {
            for (row, m1_row) in m1.iter().enumerate() {
                for col in 0..m2[0].len() {
                    let mut acc: i64 = 0;
                    for (mid, m2_mid) in m2.iter().enumerate() {
                        acc += m1_row[mid] * m2_mid[col];
                    }
                    if acc != 0 {
                        return Err(Error::Internal(format!(
                            "squared strand differential is nonzero at ({row}, {col}), degree {r}"
                        )));
                    }
                }
            }
        }
    }

    let mut ranks: BTreeMap<u32, usize> = BTreeMap::new();
    for (&r, mat) in &mats {
        let rank = if field_char == 0 {
            rank_char0(mat)
        } else {
            rank_modp(mat, field_char)
        };
        ranks.insert(r, rank);
    }

    let mut betti = BTreeMap::new();
    let mut chain_euler: i64 = 0;
    let mut homology_euler: i64 = 0;
    for (&r, masks) in by_size {
        let dim = masks.len() as i64;
        let rk = *ranks.get(&r).unwrap_or(&0) as i64;
        let rk_next = *ranks.get(&(r + 1)).unwrap_or(&0) as i64;
        let b = dim - rk - rk_next;
        if b < 0 {
            return Err(Error::Internal(
                "negative homology rank in a strand complex".into(),
            ));
        }
        let sign = if r % 2 == 0 { 1 } else { -1 };
        chain_euler += sign * dim;
        homology_euler += sign * b;
        if b > 0 {
            betti.insert(r, b as u64);
        }
    }
    if chain_euler != homology_euler {
        return Err(Error::Internal(
            "Euler characteristic mismatch in a strand complex".into(),
        ));
    }
    Ok(betti)
}

/// Matrix rank over the rationals by fraction-free (Bareiss) elimination
/// on exact integers.
fn rank_char0(mat: &[Vec<i64>]) -> usize {
    let rows = mat.len();
    if rows == 0 || mat[0].is_empty() {
        return 0;
    }
    let cols = mat[0].len();
    let mut m: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| row.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::replace(&mut row[col], BigInt::zero());
            for c in (col + 1)..cols {
                let num = &pivot * &row[c] - &lead * &pivot_row[c];
                row[c] = num / &prev; // exact by the Sylvester identity
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Matrix rank over F_p by ordinary elimination.
fn rank_modp(mat: &[Vec<i64>], p: u64) -> usize {
    let rows = mat.len();
    if rows == 0 || mat[0].is_empty() {
        return 0;
    }
    let cols = mat[0].len();
    let reduce = |e: i64| -> u64 { e.rem_euclid(p as i64) as u64 };
    let mulmod = |a: u64, b: u64| -> u64 { (u128::from(a) * u128::from(b) % u128::from(p)) as u64 };
    let powmod = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc = 1u64;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    let mut m: Vec<Vec<u64>> = mat
        .iter()
        .map(|row| row.iter().map(|&e| reduce(e)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = powmod(m[rank][col], p - 2);
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let f = mulmod(row[col], inv);
            for c in col..cols {
                let sub = mulmod(f, pivot_row[c]);
                row[c] = (row[c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}
