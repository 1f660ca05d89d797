//! Finite principal ideal rings as ordered products of chain rings.
//!
//! Every ring here is `R = R_1 x ... x R_l` where each factor is either the
//! integers modulo a prime power or a finite field presented as `F_p[x]`
//! modulo a monic irreducible polynomial. Elements are per-factor residue
//! tuples; a ring whose factors are integer residue rings with pairwise
//! coprime moduli additionally carries the usual bijection with `Z_m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Built-in irreducible moduli, constant term first.
const BUILTIN_MODULI: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
    (3, 2, &[1, 0, 1]),    // x^2 + 1
];

/// One chain-ring factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChainFactor {
    /// Integers modulo `p^e`.
    Zpe { p: u64, e: u32 },
    /// `F_p[x]` modulo a monic irreducible of degree `m`, coefficients
    /// stored constant term first (length `m + 1`).
    Gf { p: u64, m: u32, modulus: Vec<u64> },
}

impl ChainFactor {
    pub fn zpe(p: u64, e: u32) -> Result<Self> {
        check_prime(p)?;
        if e == 0 {
            return Err(Error::InvalidRing("exponent e must be at least 1".into()));
        }
        checked_pow(p, e)?;
        Ok(ChainFactor::Zpe { p, e })
    }

    /// Field with `p^m` elements. Without an explicit modulus the built-in
    /// one is used; for `m = 1` the modulus `x` always works.
    pub fn gf(p: u64, m: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(Error::InvalidRing("extension degree m must be at least 1".into()));
        }
        checked_pow(p, m)?;
        let modulus = match modulus {
            Some(raw) => normalize_modulus(raw, p, m)?,
            None if m == 1 => vec![0, 1],
            None => BUILTIN_MODULI
                .iter()
                .find(|(bp, bm, _)| *bp == p && *bm == m)
                .map(|(_, _, c)| c.to_vec())
                .ok_or_else(|| {
                    Error::InvalidRing(format!(
                        "no built-in modulus for GF({p}^{m}); supply one explicitly"
                    ))
                })?,
        };
        if let Some(factor) = find_poly_factor(&modulus, p) {
            return Err(Error::ReducibleModulus {
                factor: poly_to_string(&factor),
            });
        }
        Ok(ChainFactor::Gf { p, m, modulus })
    }

    pub fn size(&self) -> u64 {
        match self {
            ChainFactor::Zpe { p, e } => p.pow(*e),
            ChainFactor::Gf { p, m, .. } => p.pow(*m),
        }
    }

    /// Size of the residue field `R_i / M_i`.
    pub fn residue_size(&self) -> u64 {
        match self {
            ChainFactor::Zpe { p, .. } => *p,
            ChainFactor::Gf { p, m, .. } => p.pow(*m),
        }
    }

    /// Nilpotency index of the maximal ideal: least `t >= 1` with `M^t = 0`.
    pub fn nilpotency(&self) -> u32 {
        match self {
            ChainFactor::Zpe { e, .. } => *e,
            ChainFactor::Gf { .. } => 1,
        }
    }

    /// Generator of the maximal ideal (zero when the factor is a field).
    pub fn alpha(&self) -> FactorElem {
        match self {
            ChainFactor::Zpe { p, e } => FactorElem::Zpe(if *e == 1 { 0 } else { *p }),
            ChainFactor::Gf { m, .. } => FactorElem::Gf(vec![0; *m as usize]),
        }
    }

    pub fn zero(&self) -> FactorElem {
        match self {
            ChainFactor::Zpe { .. } => FactorElem::Zpe(0),
            ChainFactor::Gf { m, .. } => FactorElem::Gf(vec![0; *m as usize]),
        }
    }

    pub fn one(&self) -> FactorElem {
        match self {
            ChainFactor::Zpe { .. } => FactorElem::Zpe(1),
            ChainFactor::Gf { m, .. } => {
                let mut c = vec![0; *m as usize];
                c[0] = 1;
                FactorElem::Gf(c)
            }
        }
    }

    pub fn add(&self, a: &FactorElem, b: &FactorElem) -> FactorElem {
        match (self, a, b) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x), FactorElem::Zpe(y)) => {
                FactorElem::Zpe((x + y) % p.pow(*e))
            }
            (ChainFactor::Gf { p, .. }, FactorElem::Gf(x), FactorElem::Gf(y)) => FactorElem::Gf(
                x.iter().zip(y).map(|(&cx, &cy)| (cx + cy) % p).collect(),
            ),
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn neg(&self, a: &FactorElem) -> FactorElem {
        match (self, a) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x)) => {
                let n = p.pow(*e);
                FactorElem::Zpe((n - x % n) % n)
            }
            (ChainFactor::Gf { p, .. }, FactorElem::Gf(x)) => {
                FactorElem::Gf(x.iter().map(|&c| (p - c % p) % p).collect())
            }
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn mul(&self, a: &FactorElem, b: &FactorElem) -> FactorElem {
        match (self, a, b) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x), FactorElem::Zpe(y)) => {
                let n = p.pow(*e) as u128;
                FactorElem::Zpe(((*x as u128 * *y as u128) % n) as u64)
            }
            (ChainFactor::Gf { p, m, modulus }, FactorElem::Gf(x), FactorElem::Gf(y)) => {
                FactorElem::Gf(poly_mul_mod(x, y, modulus, *p, *m as usize))
            }
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn is_unit(&self, a: &FactorElem) -> bool {
        match (self, a) {
            (ChainFactor::Zpe { p, .. }, FactorElem::Zpe(x)) => x % p != 0,
            (ChainFactor::Gf { .. }, FactorElem::Gf(x)) => x.iter().any(|&c| c != 0),
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn inverse(&self, a: &FactorElem) -> Option<FactorElem> {
        if !self.is_unit(a) {
            return None;
        }
        match (self, a) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x)) => {
                Some(FactorElem::Zpe(inv_mod(*x, p.pow(*e))))
            }
            (ChainFactor::Gf { p, m, modulus }, FactorElem::Gf(x)) => {
                Some(FactorElem::Gf(poly_inv_mod(x, modulus, *p, *m as usize)))
            }
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    /// Valuation: the `j` with `a = unit * alpha^j`, with `val(0)` set to the
    /// nilpotency index.
    pub fn valuation(&self, a: &FactorElem) -> u32 {
        match (self, a) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x)) => {
                if *x == 0 {
                    return *e;
                }
                let mut v = 0;
                let mut x = *x;
                while x % p == 0 {
                    v += 1;
                    x /= p;
                }
                v
            }
            (ChainFactor::Gf { .. }, FactorElem::Gf(x)) => {
                u32::from(x.iter().all(|&c| c == 0))
            }
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn elem_index(&self, a: &FactorElem) -> u64 {
        match (self, a) {
            (ChainFactor::Zpe { .. }, FactorElem::Zpe(x)) => *x,
            (ChainFactor::Gf { p, .. }, FactorElem::Gf(c)) => {
                c.iter().rev().fold(0, |acc, &d| acc * p + d)
            }
            _ => unreachable!("factor element shape was validated at construction"),
        }
    }

    pub fn elem_at(&self, idx: u64) -> FactorElem {
        match self {
            ChainFactor::Zpe { .. } => FactorElem::Zpe(idx),
            ChainFactor::Gf { p, m, .. } => {
                let mut c = Vec::with_capacity(*m as usize);
                let mut r = idx;
                for _ in 0..*m {
                    c.push(r % p);
                    r /= p;
                }
                FactorElem::Gf(c)
            }
        }
    }

    fn check_elem(&self, a: &FactorElem) -> Result<()> {
        match (self, a) {
            (ChainFactor::Zpe { p, e }, FactorElem::Zpe(x)) if *x < p.pow(*e) => Ok(()),
            (ChainFactor::Gf { p, m, .. }, FactorElem::Gf(c))
                if c.len() == *m as usize && c.iter().all(|v| v < p) =>
            {
                Ok(())
            }
            _ => Err(Error::ElementMismatch(format!(
                "{a:?} does not belong to {self:?}"
            ))),
        }
    }
}

/// One residue of a factor ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FactorElem {
    Zpe(u64),
    Gf(Vec<u64>),
}

/// An element of a product ring: one residue per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    pub(crate) parts: Vec<FactorElem>,
}

impl RingElem {
    pub fn parts(&self) -> &[FactorElem] {
        &self.parts
    }
}

/// Maximal-ideal data of the product ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalData {
    /// The generator `(alpha_1, ..., alpha_l)` of the Jacobson radical.
    pub alpha: RingElem,
    /// Per-factor nilpotency indices.
    pub nilpotency: Vec<u32>,
    /// Per-factor residue field sizes.
    pub residue_sizes: Vec<u64>,
}

/// A finite principal ideal ring with a fixed factor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    factors: Vec<ChainFactor>,
    sizes: Vec<u64>,
    size: u64,
    zm: Option<u64>,
}

impl RingSpec {
    pub fn product(factors: Vec<ChainFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidRing("a ring needs at least one factor".into()));
        }
        let sizes: Vec<u64> = factors.iter().map(ChainFactor::size).collect();
        let mut size: u64 = 1;
        for &s in &sizes {
            size = size
                .checked_mul(s)
                .filter(|&t| t <= 1 << 48)
                .ok_or_else(|| Error::InvalidRing("ring size exceeds 2^48".into()))?;
        }
        let zm = zm_modulus(&factors);
        Ok(RingSpec {
            factors,
            sizes,
            size,
            zm,
        })
    }

    /// `Z_m`, factored into prime-power residue rings in ascending prime
    /// order. The element bijection with `{0, ..., m-1}` is recorded.
    pub fn zm(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRing(format!("Z_{m} is not a nonzero ring")));
        }
        let mut factors = Vec::new();
        let mut rest = m;
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                factors.push(ChainFactor::zpe(p, e)?);
            }
            p += 1;
        }
        if rest > 1 {
            factors.push(ChainFactor::zpe(rest, 1)?);
        }
        Self::product(factors)
    }

    pub fn factors(&self) -> &[ChainFactor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// `Some(m)` when every factor is an integer residue ring and the moduli
    /// are pairwise coprime, i.e. the ring is `Z_m` up to the recorded
    /// bijection.
    pub fn zm_modulus(&self) -> Option<u64> {
        self.zm
    }

    /// The factor `R_i` as a standalone ring.
    pub fn factor_ring(&self, i: usize) -> RingSpec {
        RingSpec::product(vec![self.factors[i].clone()]).expect("factor is valid")
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            parts: self.factors.iter().map(ChainFactor::zero).collect(),
        }
    }

    pub fn one(&self) -> RingElem {
        RingElem {
            parts: self.factors.iter().map(ChainFactor::one).collect(),
        }
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        a == &self.zero()
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.zip(a, b, ChainFactor::add)
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let nb = self.neg(b);
        self.add(a, &nb)
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem {
            parts: self
                .factors
                .iter()
                .zip(&a.parts)
                .map(|(f, x)| f.neg(x))
                .collect(),
        }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.zip(a, b, ChainFactor::mul)
    }

    fn zip(
        &self,
        a: &RingElem,
        b: &RingElem,
        op: impl Fn(&ChainFactor, &FactorElem, &FactorElem) -> FactorElem,
    ) -> RingElem {
        debug_assert_eq!(a.parts.len(), self.factors.len());
        debug_assert_eq!(b.parts.len(), self.factors.len());
        RingElem {
            parts: self
                .factors
                .iter()
                .zip(a.parts.iter().zip(&b.parts))
                .map(|(f, (x, y))| op(f, x, y))
                .collect(),
        }
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.factors
            .iter()
            .zip(&a.parts)
            .all(|(f, x)| f.is_unit(x))
    }

    pub fn inverse(&self, a: &RingElem) -> Result<RingElem> {
        let parts = self
            .factors
            .iter()
            .zip(&a.parts)
            .map(|(f, x)| f.inverse(x))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NonUnit(self.elem_to_string(a)))?;
        Ok(RingElem { parts })
    }

    /// The orthogonal idempotents `e_1, ..., e_l` with `e_i` equal to one in
    /// factor `i` and zero elsewhere.
    pub fn idempotents(&self) -> Vec<RingElem> {
        (0..self.factors.len())
            .map(|i| self.embed(i, &self.factors[i].one()))
            .collect()
    }

    pub fn radical_data(&self) -> RadicalData {
        RadicalData {
            alpha: RingElem {
                parts: self.factors.iter().map(ChainFactor::alpha).collect(),
            },
            nilpotency: self.factors.iter().map(ChainFactor::nilpotency).collect(),
            residue_sizes: self
                .factors
                .iter()
                .map(ChainFactor::residue_size)
                .collect(),
        }
    }

    /// `e_i * x` viewed in the product: factor `i` carries `x`, the rest zero.
    pub fn embed(&self, i: usize, x: &FactorElem) -> RingElem {
        let mut parts: Vec<FactorElem> = self.factors.iter().map(ChainFactor::zero).collect();
        parts[i] = x.clone();
        RingElem { parts }
    }

    pub fn project(&self, i: usize, a: &RingElem) -> FactorElem {
        a.parts[i].clone()
    }

    /// Canonical index in `[0, |R|)`: mixed radix with factor 1 least
    /// significant. All deterministic orderings refer to this.
    pub fn elem_index(&self, a: &RingElem) -> u64 {
        let mut idx = 0;
        let mut stride = 1;
        for (k, f) in self.factors.iter().enumerate() {
            idx += f.elem_index(&a.parts[k]) * stride;
            stride *= self.sizes[k];
        }
        idx
    }

    pub fn elem_at(&self, mut idx: u64) -> RingElem {
        let parts = self
            .factors
            .iter()
            .zip(&self.sizes)
            .map(|(f, &s)| {
                let e = f.elem_at(idx % s);
                idx /= s;
                e
            })
            .collect();
        RingElem { parts }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size).map(|i| self.elem_at(i))
    }

    pub fn units(&self) -> Vec<RingElem> {
        self.elements().filter(|e| self.is_unit(e)).collect()
    }

    pub fn check_elem(&self, a: &RingElem) -> Result<()> {
        if a.parts.len() != self.factors.len() {
            return Err(Error::ElementMismatch(format!(
                "expected {} factor residues, found {}",
                self.factors.len(),
                a.parts.len()
            )));
        }
        for (f, x) in self.factors.iter().zip(&a.parts) {
            f.check_elem(x)?;
        }
        Ok(())
    }

    /// Integer-to-tuple direction of the `Z_m` bijection.
    pub fn elem_from_int(&self, x: u64) -> Result<RingElem> {
        let m = self.zm.ok_or_else(|| {
            Error::ElementMismatch(
                "integer element form requires a ring of coprime integer residue factors".into(),
            )
        })?;
        let x = x % m;
        let parts = self
            .factors
            .iter()
            .zip(&self.sizes)
            .map(|(_, &s)| FactorElem::Zpe(x % s))
            .collect();
        Ok(RingElem { parts })
    }

    /// Tuple-to-integer direction of the `Z_m` bijection.
    pub fn elem_to_int(&self, a: &RingElem) -> Option<u64> {
        let m = self.zm?;
        let mut acc: u128 = 0;
        for (&s, x) in self.sizes.iter().zip(&a.parts) {
            let FactorElem::Zpe(r) = x else { return None };
            let big = m / s;
            let coeff = (big as u128 * inv_mod(big % s, s) as u128) % m as u128;
            acc = (acc + coeff * *r as u128) % m as u128;
        }
        Some(acc as u64)
    }

    pub fn elem_from_repr(&self, repr: &ElemRepr) -> Result<RingElem> {
        match repr {
            ElemRepr::Int(x) => self.elem_from_int(*x),
            ElemRepr::Tuple(parts) => {
                if parts.len() != self.factors.len() {
                    return Err(Error::ElementMismatch(format!(
                        "expected {} factor residues, found {}",
                        self.factors.len(),
                        parts.len()
                    )));
                }
                let parts = self
                    .factors
                    .iter()
                    .zip(parts)
                    .map(|(f, r)| match (f, r) {
                        (ChainFactor::Zpe { p, e }, FactorRepr::Int(x)) => {
                            Ok(FactorElem::Zpe(x % p.pow(*e)))
                        }
                        (ChainFactor::Gf { p, m, .. }, FactorRepr::Coeffs(c)) => {
                            if c.len() > *m as usize {
                                return Err(Error::ElementMismatch(format!(
                                    "coefficient vector {c:?} longer than degree {m}"
                                )));
                            }
                            let mut coeffs: Vec<u64> = c.iter().map(|&v| v % p).collect();
                            coeffs.resize(*m as usize, 0);
                            Ok(FactorElem::Gf(coeffs))
                        }
                        (ChainFactor::Zpe { .. }, other) => Err(Error::ElementMismatch(format!(
                            "integer residue expected, found {other:?}"
                        ))),
                        (ChainFactor::Gf { .. }, other) => Err(Error::ElementMismatch(format!(
                            "coefficient vector expected, found {other:?}"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(RingElem { parts })
            }
        }
    }

    pub fn elem_to_repr(&self, a: &RingElem) -> ElemRepr {
        match self.elem_to_int(a) {
            Some(x) => ElemRepr::Int(x),
            None => ElemRepr::Tuple(
                a.parts
                    .iter()
                    .map(|x| match x {
                        FactorElem::Zpe(r) => FactorRepr::Int(*r),
                        FactorElem::Gf(c) => FactorRepr::Coeffs(c.clone()),
                    })
                    .collect(),
            ),
        }
    }

    pub fn elem_to_string(&self, a: &RingElem) -> String {
        match self.elem_to_repr(a) {
            ElemRepr::Int(x) => x.to_string(),
            ElemRepr::Tuple(parts) => {
                let body: Vec<String> = parts
                    .iter()
                    .map(|p| match p {
                        FactorRepr::Int(x) => x.to_string(),
                        FactorRepr::Coeffs(c) => format!(
                            "[{}]",
                            c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                        ),
                    })
                    .collect();
                format!("({})", body.join(","))
            }
        }
    }
}

fn zm_modulus(factors: &[ChainFactor]) -> Option<u64> {
    let mut m: u64 = 1;
    for f in factors {
        let ChainFactor::Zpe { p, e } = f else {
            return None;
        };
        let s = p.pow(*e);
        if gcd(m, s) != 1 {
            return None;
        }
        m = m.checked_mul(s)?;
    }
    Some(m)
}

/// JSON form of a ring element: a plain integer (rings with the `Z_m`
/// bijection) or a per-factor residue tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Int(u64),
    Tuple(Vec<FactorRepr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorRepr {
    Int(u64),
    Coeffs(Vec<u64>),
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return Err(Error::NotPrime(p));
        }
        d += 1;
    }
    Ok(())
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&s| s <= 1 << 32)
        .ok_or_else(|| Error::InvalidRing(format!("{p}^{e} exceeds 2^32")))
}

/// Inverse of `a` modulo `n` for `gcd(a, n) = 1`, by extended Euclid.
fn inv_mod(a: u64, n: u64) -> u64 {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inv_mod requires gcd(a, n) = 1");
    (t0.rem_euclid(n as i128)) as u64
}

// Dense polynomial helpers over F_p; vectors are coefficient lists, constant
// term first, not necessarily trimmed.

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_to_string(a: &[u64]) -> String {
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `a * b` reduced modulo the monic `modulus`, result of length `m`.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64, m: usize) -> Vec<u64> {
    let mut prod = vec![0u64; 2 * m];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    // Monic modulus of degree m: fold x^(m+k) = -(lower terms) * x^k.
    for i in (m..2 * m).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &md) in modulus.iter().take(m).enumerate() {
            let pos = i - m + j;
            prod[pos] = (prod[pos] + c * (p - md)) % p;
        }
    }
    prod.truncate(m);
    prod
}

/// Remainder of `a` modulo `b` (`b` nonzero, any leading coefficient).
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = poly_deg(b).expect("divisor must be nonzero");
    let lead_inv = inv_mod(b[db], p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let coeff = (r[dr] * lead_inv) % p;
        for j in 0..=db {
            let pos = dr - db + j;
            r[pos] = (r[pos] + (p - (coeff * b[j]) % p)) % p;
        }
    }
    r.truncate(db);
    r.resize(db.max(1), 0);
    r
}

/// Inverse of the nonzero `a` modulo the monic irreducible `modulus`, by
/// extended Euclid in `F_p[x]`.
fn poly_inv_mod(a: &[u64], modulus: &[u64], p: u64, m: usize) -> Vec<u64> {
    let mut r0: Vec<u64> = modulus.to_vec();
    r0.resize(m + 1, 0);
    let mut r1: Vec<u64> = a.to_vec();
    r1.resize(m + 1, 0);
    let mut t0 = vec![0u64; m + 1];
    let mut t1 = vec![0u64; m + 1];
    t1[0] = 1;
    // Reduce r0 by r1 one division step at a time, swapping when r0 drops
    // below r1; stops with the gcd in r0 and its cofactor for `a` in t0.
    while let Some(d1) = poly_deg(&r1) {
        match poly_deg(&r0) {
            Some(d0) if d0 >= d1 => {
                let coeff = (r0[d0] * inv_mod(r1[d1], p)) % p;
                let shift = d0 - d1;
                for j in 0..=d1 {
                    r0[j + shift] = (r0[j + shift] + (p - (coeff * r1[j]) % p)) % p;
                }
                for j in 0..t1.len() - shift {
                    if t1[j] != 0 {
                        t0[j + shift] = (t0[j + shift] + (p - (coeff * t1[j]) % p)) % p;
                    }
                }
            }
            _ => {
                std::mem::swap(&mut r0, &mut r1);
                std::mem::swap(&mut t0, &mut t1);
            }
        }
    }
    debug_assert!(poly_deg(&r0) == Some(0), "modulus must be irreducible");
    let ci = inv_mod(r0[0], p);
    let mut out: Vec<u64> = t0.iter().map(|&t| (t * ci) % p).collect();
    out.truncate(m);
    out.resize(m, 0);
    out
}

/// Searches for a monic factor of degree `1..=deg/2`; `None` means
/// irreducible. Exhaustive, fine for the degrees seen here.
fn find_poly_factor(modulus: &[u64], p: u64) -> Option<Vec<u64>> {
    let deg = poly_deg(modulus).expect("modulus is nonzero");
    for d in 1..=deg / 2 {
        let mut cand = vec![0u64; d + 1];
        cand[d] = 1;
        loop {
            if poly_deg(&poly_rem(modulus, &cand, p)).is_none() {
                return Some(cand);
            }
            // Next monic polynomial of degree d, counting in base p.
            let mut k = 0;
            loop {
                if k == d {
                    break;
                }
                cand[k] += 1;
                if cand[k] < p {
                    break;
                }
                cand[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
    }
    None
}

/// Validates a user-supplied modulus: degree exactly `m`, normalized monic.
fn normalize_modulus(raw: Vec<u64>, p: u64, m: u32) -> Result<Vec<u64>> {
    let mut c: Vec<u64> = raw.iter().map(|&v| v % p).collect();
    match poly_deg(&c) {
        Some(d) if d == m as usize => {}
        _ => {
            return Err(Error::InvalidRing(format!(
                "modulus {raw:?} must have degree exactly {m}"
            )))
        }
    }
    c.truncate(m as usize + 1);
    let lead = c[m as usize];
    if lead != 1 {
        let li = inv_mod(lead, p);
        for v in &mut c {
            *v = (*v * li) % p;
        }
    }
    Ok(c)
}
