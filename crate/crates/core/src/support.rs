//! Support functions `sigma: R^n -> N^u` as composable, serializable
//! specifications.
//!
//! A support assigns to every vector a vector of nonnegative coordinates so
//! that three axioms hold:
//!
//! * P1 (zero definiteness): `sigma(v) = 0` exactly for `v = 0`;
//! * P2 (scalar monotonicity): `sigma(rv) <= sigma(v)` for every scalar `r`;
//! * P3 (join subadditivity): `sigma(v+w) <= sigma(v) v sigma(w)`.
//!
//! A support is *modular* when additionally, for every pair `v, w` and every
//! coordinate `i` with `0 != sigma(v)_i <= sigma(w)_i`, some scalar `r` makes
//! `sigma(v+rw)_i < sigma(v)_i`. Both properties are decided exhaustively
//! here, with deterministic witnesses on failure: vectors are ordered by
//! their canonical index (coordinate 1 varies fastest) and the first
//! violation in that order is reported.

use std::collections::{BTreeMap, HashMap, HashSet};

use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::code::Code;
use crate::error::{Error, Result};
use crate::ring::{ElemRepr, RingElem, RingSpec};
use crate::value::SupportValue;

/// Counterexample to one of the three support axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomWitness {
    /// `sigma(v) = 0` for a nonzero `v`, or `sigma(0) != 0`.
    P1 { v: Vec<RingElem> },
    /// `sigma(r*v) > sigma(v)` at some coordinate.
    P2 { r: RingElem, v: Vec<RingElem> },
    /// `sigma(v+w)` exceeds `sigma(v) v sigma(w)` at some coordinate.
    P3 { v: Vec<RingElem>, w: Vec<RingElem> },
}

impl AxiomWitness {
    pub fn axiom_name(&self) -> &'static str {
        match self {
            AxiomWitness::P1 { .. } => "P1 (zero definiteness)",
            AxiomWitness::P2 { .. } => "P2 (scalar monotonicity)",
            AxiomWitness::P3 { .. } => "P3 (join subadditivity)",
        }
    }

    pub fn describe(&self, ring: &RingSpec) -> String {
        let vs = |v: &[RingElem]| {
            let parts: Vec<String> = v.iter().map(|x| ring.elem_to_string(x)).collect();
            format!("({})", parts.join(","))
        };
        match self {
            AxiomWitness::P1 { v } => format!("sigma{} fails zero definiteness", vs(v)),
            AxiomWitness::P2 { r, v } => format!(
                "sigma({} * {}) exceeds sigma{}",
                ring.elem_to_string(r),
                vs(v),
                vs(v)
            ),
            AxiomWitness::P3 { v, w } => format!(
                "sigma({} + {}) exceeds sigma{} v sigma{}",
                vs(v),
                vs(w),
                vs(v),
                vs(w)
            ),
        }
    }
}

/// Counterexample to modularity: at coordinate `coord` (0-based), no scalar
/// `r` makes `sigma(v+rw)_coord < sigma(v)_coord` although
/// `0 != sigma(v)_coord <= sigma(w)_coord`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularWitness {
    pub v: Vec<RingElem>,
    pub w: Vec<RingElem>,
    pub coord: usize,
}

impl ModularWitness {
    pub fn describe(&self, ring: &RingSpec) -> String {
        let vs = |v: &[RingElem]| {
            let parts: Vec<String> = v.iter().map(|x| ring.elem_to_string(x)).collect();
            format!("({})", parts.join(","))
        };
        format!(
            "no scalar r reduces coordinate {} of sigma({} + r*{})",
            self.coord + 1,
            vs(&self.v),
            vs(&self.w)
        )
    }
}

/// Serializable description of a support function.
///
/// Leaves fix the value of sigma directly; combinator nodes build new
/// supports from old ones. Coordinate and position indices in the wire
/// format are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportSpec {
    /// `sigma(v)_i = 1` exactly when `v_i != 0`; `u = n`, any ring.
    Hamming {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// Coordinatewise position in the full ideal chain of a chain ring:
    /// `sigma(r) = eps - val(r)`; `u = n`.
    ChainRing {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// Coordinatewise position in an explicit chain of ideals
    /// `0 = I_0 < I_1 < ... < I_(eps-1) < R`; the final term `R` is implicit.
    /// `sigma(r) = min{i : r in I_i}`; `u = n`.
    Chain {
        ideals: Vec<Vec<ElemRepr>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// Support on the ring itself (`n = 1`) given per chain-ring factor by
    /// the values on radical powers: `values[i][j]` is the value vector of
    /// elements of valuation `j` in factor `i`, non-increasing in `j` with
    /// the last vector nonzero. The factor value vectors are concatenated.
    Pir { values: Vec<Vec<Vec<u32>>> },
    /// Explicit table, total on `R^n`. `entries` keys are comma-separated
    /// integer coordinates (integer residue rings only); `entries_list`
    /// pairs explicit element tuples with values and works over any ring.
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        entries: Option<BTreeMap<String, Vec<u32>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        entries_list: Option<Vec<(Vec<ElemRepr>, Vec<u32>)>>,
    },
    /// Coordinatewise Lee weight on `Z_4` (0,1,2,1). Deliberately *not* a
    /// support (it fails P3); kept to reproduce classical counterexamples.
    Lee {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    /// Reorder value coordinates: result coordinate `j` reads inner
    /// coordinate `perm[j]`.
    Permute {
        perm: Vec<usize>,
        inner: Box<SupportSpec>,
    },
    /// Disjoint juxtaposition: parts act on consecutive blocks of vector
    /// coordinates and their values are concatenated.
    Product { parts: Vec<SupportSpec> },
    /// Multiply value coordinate `index` by `factor >= 1`.
    Scale {
        index: usize,
        factor: u32,
        inner: Box<SupportSpec>,
    },
    /// Repeat value coordinate `index` (the copy lands right after it).
    Duplicate {
        index: usize,
        inner: Box<SupportSpec>,
    },
    /// Remove value coordinate `index`. Valid only when no vector's support
    /// is concentrated on that coordinate alone (checked exhaustively).
    Drop {
        index: usize,
        inner: Box<SupportSpec>,
    },
    /// Insert an always-zero value coordinate right after `index`.
    InsertZero {
        index: usize,
        inner: Box<SupportSpec>,
    },
    /// Precompose with the injective linear map `v -> matrix * v`; the
    /// matrix has one row per inner vector coordinate.
    ComposeLinear {
        matrix: Vec<Vec<ElemRepr>>,
        inner: Box<SupportSpec>,
    },
    /// Several supports on the same `R^n`, value vectors concatenated.
    Concat { parts: Vec<SupportSpec> },
}

/// Evaluator node; mirrors `SupportSpec` with validated, precomputed data.
#[derive(Debug)]
enum Node {
    /// Any coordinatewise leaf: value of coordinate `j` is
    /// `assign[elem_index(v_j)]`.
    Coordwise { n: usize, assign: Vec<u32> },
    /// `n = 1`; value of the single coordinate indexed by element.
    PerElement { table: Vec<SupportValue> },
    /// Dense table keyed by canonical vector index.
    Table { map: HashMap<u64, SupportValue> },
    Permute {
        perm0: Vec<usize>,
        inner: Box<Node>,
    },
    Product { parts: Vec<(Node, usize)> },
    Scale {
        idx0: usize,
        factor: u32,
        inner: Box<Node>,
    },
    Duplicate { idx0: usize, inner: Box<Node> },
    Drop { idx0: usize, inner: Box<Node> },
    InsertZero { idx0: usize, inner: Box<Node> },
    ComposeLinear {
        matrix: Vec<Vec<RingElem>>,
        inner: Box<Node>,
    },
    Concat { parts: Vec<Node> },
}

/// A compiled support function, ready to evaluate and to check.
#[derive(Debug)]
pub struct Support {
    ring: RingSpec,
    n: usize,
    u: usize,
    spec: SupportSpec,
    node: Node,
    sweep: OnceCell<SweepTable>,
    support_verdict: OnceCell<Option<AxiomWitness>>,
    modular_verdict: OnceCell<Option<ModularWitness>>,
}

impl Support {
    /// Validate a specification against a ring and ambient width and build
    /// the evaluator. Structural problems (arity mismatches, non-ideals,
    /// non-injective matrices, invalid drops) are rejected here; the axioms
    /// themselves are checked by [`Support::support_verdict`].
    pub fn compile(ring: &RingSpec, n: usize, spec: &SupportSpec, caps: &Caps) -> Result<Support> {
        if n == 0 {
            return Err(Error::InvalidSupport(
                "ambient width n must be at least 1".into(),
            ));
        }
        let (node, got_n, u) = build(ring, spec, Some(n), caps)?;
        if got_n != n {
            return Err(Error::InvalidSupport(format!(
                "specification acts on {got_n} vector coordinates, expected {n}"
            )));
        }
        Ok(Support {
            ring: ring.clone(),
            n,
            u,
            spec: spec.clone(),
            node,
            sweep: OnceCell::new(),
            support_verdict: OnceCell::new(),
            modular_verdict: OnceCell::new(),
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of value coordinates.
    pub fn u(&self) -> usize {
        self.u
    }

    pub fn spec(&self) -> &SupportSpec {
        &self.spec
    }

    pub fn evaluate(&self, v: &[RingElem]) -> Result<SupportValue> {
        if v.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "vector has {} coordinates, support expects {}",
                v.len(),
                self.n
            )));
        }
        for x in v {
            self.ring.check_elem(x)?;
        }
        Ok(eval(&self.node, &self.ring, v))
    }

    pub(crate) fn sweep_table(&self, caps: &Caps) -> Result<&SweepTable> {
        self.sweep
            .get_or_try_init(|| SweepTable::build(&self.ring, self.n, &self.node, caps))
    }

    /// Exhaustively decide the support axioms. `Ok(None)` means every axiom
    /// holds; `Ok(Some(w))` carries the first counterexample in canonical
    /// order. P1 is checked first, then P3 (so additive failures like the
    /// Lee weight's `1+1` are reported with the textbook pair), then P2.
    pub fn support_verdict(&self, caps: &Caps) -> Result<Option<AxiomWitness>> {
        self.support_verdict
            .get_or_try_init(|| {
                let table = self.sweep_table(caps)?;
                let mut budget = OpsBudget::new(caps.modular_ops);
                table.axiom_witness(&mut budget)
            })
            .cloned()
    }

    /// Error unless the axioms hold.
    pub fn require_support(&self, caps: &Caps) -> Result<()> {
        match self.support_verdict(caps)? {
            None => Ok(()),
            Some(w) => Err(Error::NotASupport(w)),
        }
    }

    /// Exhaustively decide modularity. Checks the support axioms first and
    /// refuses a non-support.
    pub fn modular_verdict(&self, caps: &Caps) -> Result<Option<ModularWitness>> {
        self.require_support(caps)?;
        self.modular_verdict_unchecked(caps)
    }

    /// Modularity sweep without the support precheck, for callers that
    /// deliberately probe pseudo-supports.
    pub fn modular_verdict_unchecked(&self, caps: &Caps) -> Result<Option<ModularWitness>> {
        self.modular_verdict
            .get_or_try_init(|| {
                let table = self.sweep_table(caps)?;
                let mut budget = OpsBudget::new(caps.modular_ops);
                table.modular_witness(&mut budget)
            })
            .cloned()
    }

    /// Error unless modular (and a support).
    pub fn require_modular(&self, caps: &Caps) -> Result<()> {
        match self.modular_verdict(caps)? {
            None => Ok(()),
            Some(w) => Err(Error::NotModular(w)),
        }
    }

    /// Split a modular support along the chain-ring factors: assigns every
    /// value coordinate to the unique factor that can touch it and returns
    /// per-factor supports in table form, `sigma_i(v_i) := sigma(e_i * v)`.
    ///
    /// Coordinates touched by no factor go to factor 1. A reconstruction
    /// failure after a positive modularity verdict is reported as an
    /// internal error: the theory guarantees the product shape, so failure
    /// means a checker bug.
    pub fn decompose_modular(&self, caps: &Caps) -> Result<Decomposition> {
        self.require_modular(caps)?;
        let ell = self.ring.factor_count();
        let table = self.sweep_table(caps)?;

        // sigma_i over all factor vectors, as full u-wide values.
        let mut factor_values: Vec<Vec<(Vec<RingElem>, SupportValue)>> = Vec::with_capacity(ell);
        for i in 0..ell {
            let fr = self.ring.factor_ring(i);
            let fsize = fr.size();
            let mut count: u64 = 1;
            for _ in 0..self.n {
                count = count.saturating_mul(fsize);
            }
            let mut rows = Vec::with_capacity(count as usize);
            for idx in 0..count {
                let fvec = factor_vec_at(&fr, self.n, idx);
                let lifted: Vec<RingElem> = fvec
                    .iter()
                    .map(|x| self.ring.embed(i, &x.parts()[0]))
                    .collect();
                let value = eval(&self.node, &self.ring, &lifted);
                rows.push((fvec, value));
            }
            factor_values.push(rows);
        }

        // Coordinate ownership: the unique factor whose sigma_i touches it.
        let mut coord_factor: Vec<Option<usize>> = vec![None; self.u];
        for (i, rows) in factor_values.iter().enumerate() {
            for (_, value) in rows {
                for x in value.nonzero_coords() {
                    match coord_factor[x] {
                        None => coord_factor[x] = Some(i),
                        Some(j) if j == i => {}
                        Some(j) => {
                            return Err(Error::Internal(format!(
                                "value coordinate {} is touched by factors {} and {} \
                                 despite a positive modularity verdict",
                                x + 1,
                                j + 1,
                                i + 1
                            )))
                        }
                    }
                }
            }
        }
        let coord_factor: Vec<usize> = coord_factor
            .into_iter()
            .map(|f| f.unwrap_or(0))
            .collect();

        // Per-factor supports on the owned coordinates, in table form.
        let mut factors = Vec::with_capacity(ell);
        for (i, rows) in factor_values.iter().enumerate() {
            let owned: Vec<usize> = (0..self.u).filter(|&x| coord_factor[x] == i).collect();
            let fr = self.ring.factor_ring(i);
            let entries_list: Vec<(Vec<ElemRepr>, Vec<u32>)> = rows
                .iter()
                .map(|(fvec, value)| {
                    let key: Vec<ElemRepr> = fvec.iter().map(|x| fr.elem_to_repr(x)).collect();
                    let restricted: Vec<u32> =
                        owned.iter().map(|&x| value.coords()[x]).collect();
                    (key, restricted)
                })
                .collect();
            let spec = SupportSpec::Table {
                entries: None,
                entries_list: Some(entries_list),
            };
            factors.push(Support::compile(&fr, self.n, &spec, caps)?);
        }

        // Reconstruction: the factor supports must reproduce sigma exactly.
        let offsets: Vec<Vec<usize>> = (0..ell)
            .map(|i| (0..self.u).filter(|&x| coord_factor[x] == i).collect())
            .collect();
        for idx in 0..table.size {
            let v = table.vector(idx);
            let mut rebuilt = vec![0u32; self.u];
            for i in 0..ell {
                let fvec: Vec<RingElem> = v
                    .iter()
                    .map(|x| RingElem {
                        parts: vec![self.ring.project(i, x)],
                    })
                    .collect();
                let value = factors[i].evaluate(&fvec)?;
                for (j, &x) in offsets[i].iter().enumerate() {
                    rebuilt[x] = value.coords()[j];
                }
            }
            if rebuilt != table.value(idx).coords() {
                return Err(Error::Internal(format!(
                    "factor supports fail to reconstruct sigma at vector index {idx} \
                     despite a positive modularity verdict"
                )));
            }
        }

        Ok(Decomposition {
            coord_factor,
            factors,
        })
    }

    /// Support of a code: the join of the supports of its generators. For a
    /// genuine support this equals the join over all codewords.
    pub fn code_support(&self, code: &Code, caps: &Caps) -> Result<SupportValue> {
        let _ = caps;
        self.check_code(code)?;
        let mut acc = SupportValue::zero(self.u);
        for g in code.generators() {
            acc = acc.join(&self.evaluate(g)?);
        }
        Ok(acc)
    }

    /// Generator join and full codeword join side by side. They differ only
    /// for pseudo-supports (the generator join is then not the code
    /// support), which is exactly what `agree` reports.
    pub fn code_support_checked(&self, code: &Code, caps: &Caps) -> Result<CodeSupport> {
        self.check_code(code)?;
        let by_generators = self.code_support(code, caps)?;
        let mut by_codewords = SupportValue::zero(self.u);
        for w in code.codewords(caps)? {
            by_codewords = by_codewords.join(&self.evaluate(&w)?);
        }
        let agree = by_generators == by_codewords;
        Ok(CodeSupport {
            by_generators,
            by_codewords,
            agree,
        })
    }

    /// Is every value on `R^n` in `{0,1}^u`? Decided by exhaustive sweep.
    pub fn is_boolean(&self, caps: &Caps) -> Result<bool> {
        let table = self.sweep_table(caps)?;
        Ok((0..table.size).all(|idx| table.value(idx).coords().iter().all(|&c| c <= 1)))
    }

    /// The ring/width compatibility check shared by every code-level entry
    /// point.
    pub fn check_code(&self, code: &Code) -> Result<()> {
        if code.ring() != &self.ring {
            return Err(Error::InvalidInput(
                "code and support are over different rings".into(),
            ));
        }
        if code.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "code has width {}, support expects {}",
                code.n(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Result of [`Support::code_support_checked`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSupport {
    pub by_generators: SupportValue,
    pub by_codewords: SupportValue,
    pub agree: bool,
}

/// Result of [`Support::decompose_modular`]: for every value coordinate the
/// owning factor (0-based), and one table-form support per factor over the
/// owned coordinates in ascending order.
#[derive(Debug)]
pub struct Decomposition {
    pub coord_factor: Vec<usize>,
    pub factors: Vec<Support>,
}

fn eval(node: &Node, ring: &RingSpec, v: &[RingElem]) -> SupportValue {
    match node {
        Node::Coordwise { assign, .. } => SupportValue::new(
            v.iter()
                .map(|x| assign[ring.elem_index(x) as usize])
                .collect(),
        ),
        Node::PerElement { table } => table[ring.elem_index(&v[0]) as usize].clone(),
        Node::Table { map } => map
            .get(&vec_index(ring, v))
            .expect("table validated total on R^n")
            .clone(),
        Node::Permute { perm0, inner } => {
            let w = eval(inner, ring, v);
            SupportValue::new(perm0.iter().map(|&p| w.coords()[p]).collect())
        }
        Node::Product { parts } => {
            let mut out = Vec::new();
            let mut at = 0;
            for (part, width) in parts {
                out.extend_from_slice(eval(part, ring, &v[at..at + width]).coords());
                at += width;
            }
            SupportValue::new(out)
        }
        Node::Scale { idx0, factor, inner } => {
            let w = eval(inner, ring, v);
            let mut out = w.into_coords();
            out[*idx0] = out[*idx0].saturating_mul(*factor);
            SupportValue::new(out)
        }
        Node::Duplicate { idx0, inner } => {
            let w = eval(inner, ring, v);
            let mut out = w.into_coords();
            out.insert(idx0 + 1, out[*idx0]);
            SupportValue::new(out)
        }
        Node::Drop { idx0, inner } => {
            let w = eval(inner, ring, v);
            let mut out = w.into_coords();
            out.remove(*idx0);
            SupportValue::new(out)
        }
        Node::InsertZero { idx0, inner } => {
            let w = eval(inner, ring, v);
            let mut out = w.into_coords();
            out.insert(idx0 + 1, 0);
            SupportValue::new(out)
        }
        Node::ComposeLinear { matrix, inner } => {
            let image: Vec<RingElem> = matrix
                .iter()
                .map(|row| {
                    let mut acc = ring.zero();
                    for (a, x) in row.iter().zip(v) {
                        acc = ring.add(&acc, &ring.mul(a, x));
                    }
                    acc
                })
                .collect();
            eval(inner, ring, &image)
        }
        Node::Concat { parts } => {
            let mut out = Vec::new();
            for part in parts {
                out.extend_from_slice(eval(part, ring, v).coords());
            }
            SupportValue::new(out)
        }
    }
}

/// Canonical index of a vector (coordinate 1 least significant).
fn vec_index(ring: &RingSpec, v: &[RingElem]) -> u64 {
    let mut idx = 0;
    for x in v.iter().rev() {
        idx = idx * ring.size() + ring.elem_index(x);
    }
    idx
}

fn factor_vec_at(ring: &RingSpec, n: usize, mut idx: u64) -> Vec<RingElem> {
    (0..n)
        .map(|_| {
            let e = ring.elem_at(idx % ring.size());
            idx /= ring.size();
            e
        })
        .collect()
}

/// Build a node from a spec; returns (node, vector width, value width).
/// `ambient` is the width coordinatewise leaves inherit when they carry no
/// explicit `n`; inside `product` every part must determine its own width.
fn build(
    ring: &RingSpec,
    spec: &SupportSpec,
    ambient: Option<usize>,
    caps: &Caps,
) -> Result<(Node, usize, usize)> {
    match spec {
        SupportSpec::Hamming { n } => {
            let n = resolve_width(*n, ambient, "hamming")?;
            let assign: Vec<u32> = (0..ring.size())
                .map(|i| u32::from(!ring.is_zero(&ring.elem_at(i))))
                .collect();
            Ok((Node::Coordwise { n, assign }, n, n))
        }
        SupportSpec::ChainRing { n } => {
            let n = resolve_width(*n, ambient, "chain_ring")?;
            if ring.factor_count() != 1 {
                return Err(Error::InvalidSupport(
                    "chain_ring needs a chain ring (a single factor), not a product".into(),
                ));
            }
            let factor = &ring.factors()[0];
            let eps = factor.nilpotency();
            let assign: Vec<u32> = (0..ring.size())
                .map(|i| eps - factor.valuation(&ring.elem_at(i).parts()[0]))
                .collect();
            Ok((Node::Coordwise { n, assign }, n, n))
        }
        SupportSpec::Chain { ideals, n } => {
            let n = resolve_width(*n, ambient, "chain")?;
            let assign = compile_chain(ring, ideals)?;
            Ok((Node::Coordwise { n, assign }, n, n))
        }
        SupportSpec::Lee { n } => {
            let n = resolve_width(*n, ambient, "lee")?;
            let is_z4 = ring.factor_count() == 1 && ring.zm_modulus() == Some(4);
            if !is_z4 {
                return Err(Error::InvalidSupport(
                    "the Lee weight is defined here over Z_4 only".into(),
                ));
            }
            // Canonical element order on Z_4 is 0,1,2,3.
            let assign = vec![0, 1, 2, 1];
            Ok((Node::Coordwise { n, assign }, n, n))
        }
        SupportSpec::Pir { values } => {
            let table = compile_pir(ring, values)?;
            let u = table[0].len();
            Ok((Node::PerElement { table }, 1, u))
        }
        SupportSpec::Table {
            entries,
            entries_list,
        } => compile_table(ring, entries, entries_list, ambient, caps),
        SupportSpec::Permute { perm, inner } => {
            let (inner, n, u) = build(ring, inner, ambient, caps)?;
            if perm.len() != u {
                return Err(Error::InvalidSupport(format!(
                    "permutation has {} entries, inner support has {} coordinates",
                    perm.len(),
                    u
                )));
            }
            let mut seen = vec![false; u];
            let mut perm0 = Vec::with_capacity(u);
            for &p in perm {
                if p == 0 || p > u || seen[p - 1] {
                    return Err(Error::InvalidSupport(format!(
                        "permutation is not a bijection of 1..={u}"
                    )));
                }
                seen[p - 1] = true;
                perm0.push(p - 1);
            }
            Ok((
                Node::Permute {
                    perm0,
                    inner: Box::new(inner),
                },
                n,
                u,
            ))
        }
        SupportSpec::Product { parts } => {
            if parts.is_empty() {
                return Err(Error::InvalidSupport("product needs at least one part".into()));
            }
            let mut nodes = Vec::with_capacity(parts.len());
            let mut n = 0;
            let mut u = 0;
            for part in parts {
                let (node, pn, pu) = build(ring, part, None, caps)?;
                n += pn;
                u += pu;
                nodes.push((node, pn));
            }
            Ok((Node::Product { parts: nodes }, n, u))
        }
        SupportSpec::Scale {
            index,
            factor,
            inner,
        } => {
            let (inner, n, u) = build(ring, inner, ambient, caps)?;
            let idx0 = check_coord_index(*index, u)?;
            if *factor == 0 {
                return Err(Error::InvalidSupport(
                    "scale factor must be at least 1".into(),
                ));
            }
            Ok((
                Node::Scale {
                    idx0,
                    factor: *factor,
                    inner: Box::new(inner),
                },
                n,
                u,
            ))
        }
        SupportSpec::Duplicate { index, inner } => {
            let (inner, n, u) = build(ring, inner, ambient, caps)?;
            let idx0 = check_coord_index(*index, u)?;
            Ok((
                Node::Duplicate {
                    idx0,
                    inner: Box::new(inner),
                },
                n,
                u + 1,
            ))
        }
        SupportSpec::Drop { index, inner } => {
            let (inner, n, u) = build(ring, inner, ambient, caps)?;
            let idx0 = check_coord_index(*index, u)?;
            if u < 2 {
                return Err(Error::InvalidSupport(
                    "cannot drop the only value coordinate".into(),
                ));
            }
            check_drop_hypothesis(ring, &inner, n, idx0, caps)?;
            Ok((
                Node::Drop {
                    idx0,
                    inner: Box::new(inner),
                },
                n,
                u - 1,
            ))
        }
        SupportSpec::InsertZero { index, inner } => {
            let (inner, n, u) = build(ring, inner, ambient, caps)?;
            let idx0 = check_coord_index(*index, u)?;
            Ok((
                Node::InsertZero {
                    idx0,
                    inner: Box::new(inner),
                },
                n,
                u + 1,
            ))
        }
        SupportSpec::ComposeLinear { matrix, inner } => {
            if matrix.is_empty() {
                return Err(Error::InvalidSupport("matrix has no rows".into()));
            }
            // The inner support acts on the image space, one coordinate per
            // matrix row; the composed support acts on the column space.
            let (inner, n_inner, u) = build(ring, inner, Some(matrix.len()), caps)?;
            let parsed = parse_matrix(ring, matrix, n_inner)?;
            let k = parsed[0].len();
            check_injective(ring, &parsed, caps)?;
            Ok((
                Node::ComposeLinear {
                    matrix: parsed,
                    inner: Box::new(inner),
                },
                k,
                u,
            ))
        }
        SupportSpec::Concat { parts } => {
            if parts.is_empty() {
                return Err(Error::InvalidSupport("concat needs at least one part".into()));
            }
            let mut nodes = Vec::with_capacity(parts.len());
            let mut n: Option<usize> = ambient;
            let mut u = 0;
            for part in parts {
                let (node, pn, pu) = build(ring, part, n, caps)?;
                match n {
                    Some(w) if w != pn => {
                        return Err(Error::InvalidSupport(format!(
                            "concat parts act on different widths ({w} vs {pn})"
                        )))
                    }
                    _ => n = Some(pn),
                }
                u += pu;
                nodes.push(node);
            }
            Ok((
                Node::Concat { parts: nodes },
                n.expect("at least one part"),
                u,
            ))
        }
    }
}

fn resolve_width(own: Option<usize>, ambient: Option<usize>, kind: &str) -> Result<usize> {
    match (own, ambient) {
        (Some(n), Some(m)) if n != m => Err(Error::InvalidSupport(format!(
            "{kind} declares width {n} but the context requires {m}"
        ))),
        (Some(n), _) | (None, Some(n)) => {
            if n == 0 {
                Err(Error::InvalidSupport("width n must be at least 1".into()))
            } else {
                Ok(n)
            }
        }
        (None, None) => Err(Error::InvalidSupport(format!(
            "{kind} inside a product needs an explicit width n"
        ))),
    }
}

fn check_coord_index(index: usize, u: usize) -> Result<usize> {
    if index == 0 || index > u {
        return Err(Error::InvalidSupport(format!(
            "value coordinate index {index} out of range 1..={u}"
        )));
    }
    Ok(index - 1)
}

/// Per-element chain level: `min{i : r in I_i}` with `I_eps = R` implicit.
fn compile_chain(ring: &RingSpec, ideals: &[Vec<ElemRepr>]) -> Result<Vec<u32>> {
    if ideals.is_empty() {
        return Err(Error::InvalidSupport(
            "chain needs at least the zero ideal".into(),
        ));
    }
    let mut sets: Vec<HashSet<u64>> = Vec::with_capacity(ideals.len());
    for members in ideals {
        let mut set = HashSet::new();
        for repr in members {
            let e = ring.elem_from_repr(repr)?;
            set.insert(ring.elem_index(&e));
        }
        sets.push(set);
    }
    if sets[0].len() != 1 || !sets[0].contains(&0) {
        return Err(Error::InvalidSupport(
            "the first term of the chain must be the zero ideal".into(),
        ));
    }
    let all: Vec<RingElem> = ring.elements().collect();
    for (level, set) in sets.iter().enumerate() {
        // Ideal: closed under addition and under every ring scalar.
        for &a in set.iter() {
            let ea = &all[a as usize];
            for &b in set.iter() {
                let s = ring.add(ea, &all[b as usize]);
                if !set.contains(&ring.elem_index(&s)) {
                    return Err(Error::InvalidSupport(format!(
                        "chain term {} is not closed under addition",
                        level + 1
                    )));
                }
            }
            for r in &all {
                let m = ring.mul(r, ea);
                if !set.contains(&ring.elem_index(&m)) {
                    return Err(Error::InvalidSupport(format!(
                        "chain term {} is not an ideal",
                        level + 1
                    )));
                }
            }
        }
        if level > 0 {
            if !sets[level - 1].iter().all(|x| set.contains(x)) || sets[level - 1].len() >= set.len()
            {
                return Err(Error::InvalidSupport(
                    "chain terms must strictly increase".into(),
                ));
            }
        }
    }
    if sets.last().expect("nonempty").len() as u64 >= ring.size() {
        return Err(Error::InvalidSupport(
            "the last listed chain term must be a proper ideal (the full ring is implicit)".into(),
        ));
    }
    let eps = sets.len() as u32;
    Ok((0..ring.size())
        .map(|idx| {
            sets.iter()
                .position(|s| s.contains(&idx))
                .map(|i| i as u32)
                .unwrap_or(eps)
        })
        .collect())
}

/// Per-element values for a width-1 support on a product of chain rings,
/// given by the value vectors on each factor's radical powers.
fn compile_pir(ring: &RingSpec, values: &[Vec<Vec<u32>>]) -> Result<Vec<SupportValue>> {
    let ell = ring.factor_count();
    if values.len() != ell {
        return Err(Error::InvalidSupport(format!(
            "pir support lists {} factors, the ring has {ell}",
            values.len()
        )));
    }
    let mut widths = Vec::with_capacity(ell);
    for (i, rows) in values.iter().enumerate() {
        let eps = ring.factors()[i].nilpotency() as usize;
        if rows.len() != eps {
            return Err(Error::InvalidSupport(format!(
                "factor {} needs one value vector per radical power (got {}, need {eps})",
                i + 1,
                rows.len()
            )));
        }
        let ui = rows[0].len();
        if ui == 0 {
            return Err(Error::InvalidSupport(format!(
                "factor {} has an empty value vector",
                i + 1
            )));
        }
        for row in rows {
            if row.len() != ui {
                return Err(Error::InvalidSupport(format!(
                    "factor {} has value vectors of unequal length",
                    i + 1
                )));
            }
        }
        for j in 1..rows.len() {
            if !rows[j].iter().zip(&rows[j - 1]).all(|(a, b)| a <= b) {
                return Err(Error::InvalidSupport(format!(
                    "factor {} value vectors must be componentwise non-increasing",
                    i + 1
                )));
            }
        }
        if rows[eps - 1].iter().all(|&a| a == 0) {
            return Err(Error::InvalidSupport(format!(
                "factor {}: the last value vector must be nonzero, else nonzero elements \
                 would get support zero",
                i + 1
            )));
        }
        widths.push(ui);
    }
    let table: Vec<SupportValue> = ring
        .elements()
        .map(|e| {
            let mut out = Vec::new();
            for (i, part) in e.parts().iter().enumerate() {
                let factor = &ring.factors()[i];
                let val = factor.valuation(part);
                if val >= factor.nilpotency() {
                    out.extend(std::iter::repeat(0).take(widths[i]));
                } else {
                    out.extend_from_slice(&values[i][val as usize]);
                }
            }
            SupportValue::new(out)
        })
        .collect();
    Ok(table)
}

#[allow(clippy::type_complexity)]
fn compile_table(
    ring: &RingSpec,
    entries: &Option<BTreeMap<String, Vec<u32>>>,
    entries_list: &Option<Vec<(Vec<ElemRepr>, Vec<u32>)>>,
    ambient: Option<usize>,
    caps: &Caps,
) -> Result<(Node, usize, usize)> {
    let rows: Vec<(Vec<RingElem>, Vec<u32>)> = match (entries, entries_list) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(Error::InvalidSupport(
                "table needs exactly one of `entries` and `entries_list`".into(),
            ))
        }
        (Some(map), None) => {
            if ring.zm_modulus().is_none() {
                return Err(Error::InvalidSupport(
                    "string table keys need an integer residue ring; use entries_list".into(),
                ));
            }
            map.iter()
                .map(|(key, value)| {
                    let coords: Vec<RingElem> = key
                        .split(',')
                        .map(|part| {
                            part.trim()
                                .parse::<u64>()
                                .map_err(|_| {
                                    Error::InvalidSupport(format!("bad table key `{key}`"))
                                })
                                .and_then(|x| ring.elem_from_int(x))
                        })
                        .collect::<Result<_>>()?;
                    Ok((coords, value.clone()))
                })
                .collect::<Result<_>>()?
        }
        (None, Some(list)) => list
            .iter()
            .map(|(reprs, value)| {
                let coords: Vec<RingElem> = reprs
                    .iter()
                    .map(|r| ring.elem_from_repr(r))
                    .collect::<Result<_>>()?;
                Ok((coords, value.clone()))
            })
            .collect::<Result<_>>()?,
    };
    if rows.is_empty() {
        return Err(Error::InvalidSupport("table has no entries".into()));
    }
    let n = rows[0].0.len();
    if n == 0 {
        return Err(Error::InvalidSupport("table keys are empty".into()));
    }
    if let Some(m) = ambient {
        if m != n {
            return Err(Error::InvalidSupport(format!(
                "table keys have {n} coordinates, the context requires {m}"
            )));
        }
    }
    let u = rows[0].1.len();
    if u == 0 {
        return Err(Error::InvalidSupport("table values are empty".into()));
    }
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(ring.size());
    }
    caps.check("table support size |R|^n", total, caps.support_vectors)?;
    let mut map = HashMap::with_capacity(rows.len());
    for (coords, value) in rows {
        if coords.len() != n {
            return Err(Error::InvalidSupport(
                "table keys have inconsistent arity".into(),
            ));
        }
        if value.len() != u {
            return Err(Error::InvalidSupport(
                "table values have inconsistent length".into(),
            ));
        }
        let idx = vec_index(ring, &coords);
        if map.insert(idx, SupportValue::new(value)).is_some() {
            return Err(Error::InvalidSupport(
                "table lists the same vector twice".into(),
            ));
        }
    }
    if map.len() as u64 != total {
        return Err(Error::InvalidSupport(format!(
            "table must be total on R^n: has {} entries, needs {total}",
            map.len()
        )));
    }
    Ok((Node::Table { map }, n, u))
}

fn parse_matrix(
    ring: &RingSpec,
    matrix: &[Vec<ElemRepr>],
    n_inner: usize,
) -> Result<Vec<Vec<RingElem>>> {
    if matrix.len() != n_inner {
        return Err(Error::InvalidSupport(format!(
            "matrix has {} rows, inner support expects {n_inner}",
            matrix.len()
        )));
    }
    let k = matrix[0].len();
    if k == 0 {
        return Err(Error::InvalidSupport("matrix has no columns".into()));
    }
    matrix
        .iter()
        .map(|row| {
            if row.len() != k {
                return Err(Error::InvalidSupport(
                    "matrix rows have unequal lengths".into(),
                ));
            }
            row.iter().map(|r| ring.elem_from_repr(r)).collect()
        })
        .collect()
}

/// Injectivity of `v -> A*v`. A square matrix over a finite commutative ring
/// is injective exactly when its determinant is a unit; otherwise (or for
/// very large square matrices) the kernel is enumerated directly.
fn check_injective(ring: &RingSpec, matrix: &[Vec<RingElem>], caps: &Caps) -> Result<()> {
    let rows = matrix.len();
    let k = matrix[0].len();
    if k > rows {
        return Err(Error::InvalidSupport(format!(
            "a {rows}x{k} matrix cannot give an injective map (more columns than rows)"
        )));
    }
    if k == rows && k <= 16 {
        let d = determinant(ring, matrix);
        if !ring.is_unit(&d) {
            return Err(Error::InvalidSupport(format!(
                "matrix is not injective: determinant {} is not a unit",
                ring.elem_to_string(&d)
            )));
        }
        return Ok(());
    }
    let mut total: u64 = 1;
    for _ in 0..k {
        total = total.saturating_mul(ring.size());
    }
    caps.check(
        "kernel enumeration |R|^k for injectivity",
        total,
        caps.support_vectors,
    )?;
    for idx in 1..total {
        let v = factor_vec_at(ring, k, idx);
        let image_is_zero = matrix.iter().all(|row| {
            let mut acc = ring.zero();
            for (a, x) in row.iter().zip(&v) {
                acc = ring.add(&acc, &ring.mul(a, x));
            }
            ring.is_zero(&acc)
        });
        if image_is_zero {
            let shown: Vec<String> = v.iter().map(|x| ring.elem_to_string(x)).collect();
            return Err(Error::InvalidSupport(format!(
                "matrix is not injective: ({}) lies in the kernel",
                shown.join(",")
            )));
        }
    }
    Ok(())
}

/// Determinant by dynamic programming over column subsets (Laplace along
/// rows), `O(2^k * k)` ring operations.
fn determinant(ring: &RingSpec, matrix: &[Vec<RingElem>]) -> RingElem {
    let k = matrix.len();
    let full = (1u32 << k) - 1;
    let mut dp: Vec<Option<RingElem>> = vec![None; 1 << k];
    dp[0] = Some(ring.one());
    for mask in 1..=full {
        let row = mask.count_ones() as usize - 1;
        let mut acc = ring.zero();
        let mut sign_flip = false;
        for j in 0..k {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = dp[(mask ^ (1 << j)) as usize]
                .clone()
                .expect("subsets filled in mask order");
            let term = ring.mul(&matrix[row][j], &sub);
            acc = if sign_flip {
                ring.sub(&acc, &term)
            } else {
                ring.add(&acc, &term)
            };
            sign_flip = !sign_flip;
        }
        dp[mask as usize] = Some(acc);
    }
    dp[full as usize].clone().expect("full mask filled")
}

/// The drop combinator loses zero definiteness when some vector's support
/// is concentrated on the dropped coordinate alone; refuse such drops.
fn check_drop_hypothesis(
    ring: &RingSpec,
    inner: &Node,
    n: usize,
    idx0: usize,
    caps: &Caps,
) -> Result<()> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(ring.size());
    }
    caps.check(
        "drop hypothesis sweep |R|^n",
        total,
        caps.support_vectors,
    )?;
    for idx in 0..total {
        let v = factor_vec_at(ring, n, idx);
        let value = eval(inner, ring, &v);
        let nonzero = value.nonzero_coords();
        if nonzero.len() == 1 && nonzero[0] == idx0 {
            let shown: Vec<String> = v.iter().map(|x| ring.elem_to_string(x)).collect();
            return Err(Error::InvalidSupport(format!(
                "cannot drop coordinate {}: it carries the whole support of ({})",
                idx0 + 1,
                shown.join(",")
            )));
        }
    }
    Ok(())
}

/// Budget for exhaustive sweeps; spending past the cap is an error, never a
/// silent truncation.
struct OpsBudget {
    used: u64,
    cap: u64,
}

impl OpsBudget {
    fn new(cap: u64) -> Self {
        OpsBudget { used: 0, cap }
    }

    fn spend(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.cap {
            return Err(Error::CapExceeded {
                what: "exhaustive sweep operations",
                needed: self.used,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// Precomputed values of sigma on all of `R^n`, with vector-index
/// arithmetic for the exhaustive sweeps.
#[derive(Debug)]
pub(crate) struct SweepTable {
    ring: RingSpec,
    pub size: u64,
    rsize: u64,
    n: usize,
    elems: Vec<RingElem>,
    values: Vec<SupportValue>,
    /// Element-index addition/multiplication tables when the ring is small
    /// enough; otherwise digits fall back to ring arithmetic.
    radd: Vec<u32>,
    rmul: Vec<u32>,
}

impl SweepTable {
    fn build(ring: &RingSpec, n: usize, node: &Node, caps: &Caps) -> Result<SweepTable> {
        let rsize = ring.size();
        let mut size: u64 = 1;
        for _ in 0..n {
            size = size.saturating_mul(rsize);
        }
        caps.check("support vector table |R|^n", size, caps.support_vectors)?;
        let elems: Vec<RingElem> = ring.elements().collect();
        let mut values = Vec::with_capacity(size as usize);
        for idx in 0..size {
            let v = decode(&elems, rsize, n, idx);
            values.push(eval(node, ring, &v));
        }
        let (radd, rmul) = if rsize <= 2048 {
            let k = rsize as usize;
            let mut radd = vec![0u32; k * k];
            let mut rmul = vec![0u32; k * k];
            for i in 0..k {
                for j in 0..k {
                    radd[i * k + j] = ring.elem_index(&ring.add(&elems[i], &elems[j])) as u32;
                    rmul[i * k + j] = ring.elem_index(&ring.mul(&elems[i], &elems[j])) as u32;
                }
            }
            (radd, rmul)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(SweepTable {
            ring: ring.clone(),
            size,
            rsize,
            n,
            elems,
            values,
            radd,
            rmul,
        })
    }

    pub fn value(&self, idx: u64) -> &SupportValue {
        &self.values[idx as usize]
    }

    pub fn vector(&self, idx: u64) -> Vec<RingElem> {
        decode(&self.elems, self.rsize, self.n, idx)
    }

    fn digit_add(&self, a: u64, b: u64) -> u64 {
        if self.radd.is_empty() {
            self.ring
                .elem_index(&self.ring.add(&self.elems[a as usize], &self.elems[b as usize]))
        } else {
            self.radd[(a * self.rsize + b) as usize] as u64
        }
    }

    fn digit_mul(&self, a: u64, b: u64) -> u64 {
        if self.rmul.is_empty() {
            self.ring
                .elem_index(&self.ring.mul(&self.elems[a as usize], &self.elems[b as usize]))
        } else {
            self.rmul[(a * self.rsize + b) as usize] as u64
        }
    }

    pub fn vadd(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.n {
            out += self.digit_add(a % self.rsize, b % self.rsize) * stride;
            stride *= self.rsize;
            a /= self.rsize;
            b /= self.rsize;
        }
        out
    }

    pub fn vscale(&self, r: u64, mut v: u64) -> u64 {
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.n {
            out += self.digit_mul(r, v % self.rsize) * stride;
            stride *= self.rsize;
            v /= self.rsize;
        }
        out
    }

    /// First axiom violation in canonical order, if any. Order: P1 over
    /// single vectors, then P3 over pairs (v <= w), then P2 over (v, r).
    fn axiom_witness(&self, budget: &mut OpsBudget) -> Result<Option<AxiomWitness>> {
        budget.spend(self.size)?;
        if !self.values[0].is_zero() {
            return Ok(Some(AxiomWitness::P1 {
                v: self.vector(0),
            }));
        }
        for idx in 1..self.size {
            if self.values[idx as usize].is_zero() {
                return Ok(Some(AxiomWitness::P1 {
                    v: self.vector(idx),
                }));
            }
        }
        for a in 0..self.size {
            let va = &self.values[a as usize];
            for b in a..self.size {
                budget.spend(1)?;
                let joined = va.join(&self.values[b as usize]);
                if !self.values[self.vadd(a, b) as usize].le(&joined) {
                    return Ok(Some(AxiomWitness::P3 {
                        v: self.vector(a),
                        w: self.vector(b),
                    }));
                }
            }
        }
        for v in 0..self.size {
            let sv = &self.values[v as usize];
            for r in 0..self.rsize {
                budget.spend(1)?;
                if !self.values[self.vscale(r, v) as usize].le(sv) {
                    return Ok(Some(AxiomWitness::P2 {
                        r: self.elems[r as usize].clone(),
                        v: self.vector(v),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// First modularity violation in canonical order (v, then w, then
    /// coordinate), if any.
    fn modular_witness(&self, budget: &mut OpsBudget) -> Result<Option<ModularWitness>> {
        let u = self.values[0].len();
        for a in 0..self.size {
            let va = self.values[a as usize].clone();
            if va.is_zero() {
                continue;
            }
            for b in 0..self.size {
                budget.spend(1)?;
                let vb = &self.values[b as usize];
                // Indices of v + r*w, filled on the first coordinate that
                // needs them.
                let mut candidates: Option<Vec<u64>> = None;
                for i in 0..u {
                    let need = va.get(i);
                    if need == 0 || need > vb.get(i) {
                        continue;
                    }
                    let cands = candidates.get_or_insert_with(|| {
                        (0..self.rsize)
                            .map(|r| self.vadd(a, self.vscale(r, b)))
                            .collect()
                    });
                    let mut reduced = false;
                    for &c in cands.iter() {
                        budget.spend(1)?;
                        if self.values[c as usize].get(i) < need {
                            reduced = true;
                            break;
                        }
                    }
                    if !reduced {
                        return Ok(Some(ModularWitness {
                            v: self.vector(a),
                            w: self.vector(b),
                            coord: i,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn decode(elems: &[RingElem], rsize: u64, n: usize, mut idx: u64) -> Vec<RingElem> {
    (0..n)
        .map(|_| {
            let e = elems[(idx % rsize) as usize].clone();
            idx /= rsize;
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FactorElem;

    fn caps() -> Caps {
        Caps::default()
    }

    fn spec_json(s: &str) -> SupportSpec {
        serde_json::from_str(s).unwrap()
    }

    fn zm_vec(ring: &RingSpec, coords: &[u64]) -> Vec<RingElem> {
        coords
            .iter()
            .map(|&x| ring.elem_from_int(x).unwrap())
            .collect()
    }

    fn eval_ints(supp: &Support, coords: &[u64]) -> Vec<u32> {
        let v = zm_vec(supp.ring(), coords);
        supp.evaluate(&v).unwrap().into_coords()
    }

    /// A modularity witness must actually violate the property.
    fn assert_modular_witness_valid(supp: &Support, w: &ModularWitness) {
        let sv = supp.evaluate(&w.v).unwrap();
        let sw = supp.evaluate(&w.w).unwrap();
        assert_ne!(sv.get(w.coord), 0);
        assert!(sv.get(w.coord) <= sw.get(w.coord));
        let ring = supp.ring().clone();
        for r in ring.elements() {
            let shifted: Vec<RingElem> = w
                .v
                .iter()
                .zip(&w.w)
                .map(|(a, b)| ring.add(a, &ring.mul(&r, b)))
                .collect();
            let sval = supp.evaluate(&shifted).unwrap();
            assert!(
                sval.get(w.coord) >= sv.get(w.coord),
                "witness is reducible with r={}",
                ring.elem_to_string(&r)
            );
        }
    }

    #[test]
    fn hamming_evaluates_and_is_modular() {
        let ring = RingSpec::zm(2).unwrap();
        let supp = Support::compile(&ring, 3, &spec_json(r#"{"kind":"hamming"}"#), &caps()).unwrap();
        assert_eq!(supp.u(), 3);
        assert_eq!(eval_ints(&supp, &[1, 0, 1]), vec![1, 0, 1]);
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
    }

    #[test]
    fn hamming_on_z4_is_a_support_but_not_modular() {
        let ring = RingSpec::zm(4).unwrap();
        let supp = Support::compile(&ring, 1, &spec_json(r#"{"kind":"hamming"}"#), &caps()).unwrap();
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        let w = supp.modular_verdict(&caps()).unwrap().expect("not modular");
        assert_modular_witness_valid(&supp, &w);
    }

    #[test]
    fn chain_ring_support_on_z4() {
        let ring = RingSpec::zm(4).unwrap();
        let supp =
            Support::compile(&ring, 1, &spec_json(r#"{"kind":"chain_ring"}"#), &caps()).unwrap();
        assert_eq!(eval_ints(&supp, &[0]), vec![0]);
        assert_eq!(eval_ints(&supp, &[2]), vec![1]);
        assert_eq!(eval_ints(&supp, &[1]), vec![2]);
        assert_eq!(eval_ints(&supp, &[3]), vec![2]);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
    }

    #[test]
    fn chain_with_full_chain_matches_chain_ring() {
        let ring = RingSpec::zm(4).unwrap();
        let chain = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0],[0,2]]}"#),
            &caps(),
        )
        .unwrap();
        let cr = Support::compile(&ring, 1, &spec_json(r#"{"kind":"chain_ring"}"#), &caps()).unwrap();
        for x in 0..4 {
            assert_eq!(eval_ints(&chain, &[x]), eval_ints(&cr, &[x]));
        }
        assert_eq!(chain.modular_verdict(&caps()).unwrap(), None);
    }

    #[test]
    fn short_chain_on_z4_is_support_but_not_modular() {
        let ring = RingSpec::zm(4).unwrap();
        let supp = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0]]}"#),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        let w = supp.modular_verdict(&caps()).unwrap().expect("not modular");
        assert_modular_witness_valid(&supp, &w);
    }

    #[test]
    fn z6_chain_through_two_is_not_modular() {
        let ring = RingSpec::zm(6).unwrap();
        let supp = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0],[0,2,4]]}"#),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        let w = supp.modular_verdict(&caps()).unwrap().expect("not modular");
        assert_modular_witness_valid(&supp, &w);
    }

    #[test]
    fn chain_rejects_non_ideals_and_non_chains() {
        let ring = RingSpec::zm(6).unwrap();
        // {0,2,3} is not closed under addition.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0],[0,2,3]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // (3) and (2) are incomparable, not a chain.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0],[0,3],[0,2,4]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // The full ring may not be listed (it is implicit).
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"chain","ideals":[[0],[0,1,2,3,4,5]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
    }

    #[test]
    fn lee_weight_fails_subadditivity_at_one_plus_one() {
        let ring = RingSpec::zm(4).unwrap();
        let supp = Support::compile(&ring, 1, &spec_json(r#"{"kind":"lee"}"#), &caps()).unwrap();
        assert_eq!(eval_ints(&supp, &[0]), vec![0]);
        assert_eq!(eval_ints(&supp, &[1]), vec![1]);
        assert_eq!(eval_ints(&supp, &[2]), vec![2]);
        assert_eq!(eval_ints(&supp, &[3]), vec![1]);
        let w = supp.support_verdict(&caps()).unwrap().expect("not a support");
        let one = ring.elem_from_int(1).unwrap();
        assert_eq!(
            w,
            AxiomWitness::P3 {
                v: vec![one.clone()],
                w: vec![one]
            }
        );
    }

    #[test]
    fn lee_requires_z4() {
        let ring = RingSpec::zm(6).unwrap();
        let err = Support::compile(&ring, 1, &spec_json(r#"{"kind":"lee"}"#), &caps()).unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
    }

    #[test]
    fn omega_pir_support_on_z6_matches_frozen_table() {
        let ring = RingSpec::zm(6).unwrap();
        let supp = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[2]],[[1]]]}"#),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.u(), 2);
        let expected = [
            (0, vec![0, 0]),
            (1, vec![2, 1]),
            (2, vec![0, 1]),
            (3, vec![2, 0]),
            (4, vec![0, 1]),
            (5, vec![2, 1]),
        ];
        for (x, want) in expected {
            assert_eq!(eval_ints(&supp, &[x]), want, "omega({x})");
        }
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
    }

    #[test]
    fn pir_rejects_bad_shapes() {
        let ring = RingSpec::zm(4).unwrap();
        // Increasing values.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[1],[2]]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // Zero last vector.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[2],[0]]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // Wrong factor count.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[2]],[[1]]]}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
    }

    #[test]
    fn strictly_decreasing_pir_on_z4_is_modular() {
        let ring = RingSpec::zm(4).unwrap();
        let strict = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[2],[1]]]}"#),
            &caps(),
        )
        .unwrap();
        assert_eq!(strict.modular_verdict(&caps()).unwrap(), None);
        // Equal values at a coordinate break modularity.
        let flat = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[1],[1]]]}"#),
            &caps(),
        )
        .unwrap();
        assert!(flat.modular_verdict(&caps()).unwrap().is_some());
    }

    #[test]
    fn three_coordinate_table_on_f2_squared_is_a_support() {
        let ring = RingSpec::zm(2).unwrap();
        let supp = Support::compile(
            &ring,
            2,
            &spec_json(
                r#"{"kind":"table","entries":{
                    "0,0":[0,0,0],"1,0":[2,0,2],"0,1":[2,1,0],"1,1":[0,1,2]}}"#,
            ),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.u(), 3);
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
    }

    #[test]
    fn pathological_table_is_support_but_not_modular_with_exact_witness() {
        let ring = RingSpec::zm(2).unwrap();
        let supp = Support::compile(
            &ring,
            2,
            &spec_json(
                r#"{"kind":"table","entries":{
                    "0,0":[0,0],"1,0":[1,1],"0,1":[0,1],"1,1":[1,1]}}"#,
            ),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        let w = supp.modular_verdict(&caps()).unwrap().expect("not modular");
        assert_modular_witness_valid(&supp, &w);
        // Deterministic first witness: v=(1,0), w=(0,1) at the second
        // value coordinate.
        assert_eq!(w.v, zm_vec(&ring, &[1, 0]));
        assert_eq!(w.w, zm_vec(&ring, &[0, 1]));
        assert_eq!(w.coord, 1);
    }

    #[test]
    fn table_must_be_total() {
        let ring = RingSpec::zm(2).unwrap();
        let err = Support::compile(
            &ring,
            2,
            &spec_json(r#"{"kind":"table","entries":{"0,0":[0],"1,0":[1]}}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
    }

    #[test]
    fn permute_scale_duplicate_insert_zero_drop_evaluate_correctly() {
        let ring = RingSpec::zm(2).unwrap();
        let base = r#"{"kind":"hamming"}"#;
        let permuted = Support::compile(
            &ring,
            2,
            &spec_json(&format!(
                r#"{{"kind":"permute","perm":[2,1],"inner":{base}}}"#
            )),
            &caps(),
        )
        .unwrap();
        assert_eq!(eval_ints(&permuted, &[1, 0]), vec![0, 1]);

        let scaled = Support::compile(
            &ring,
            2,
            &spec_json(&format!(
                r#"{{"kind":"scale","index":1,"factor":3,"inner":{base}}}"#
            )),
            &caps(),
        )
        .unwrap();
        assert_eq!(eval_ints(&scaled, &[1, 1]), vec![3, 1]);

        let duplicated = Support::compile(
            &ring,
            2,
            &spec_json(&format!(
                r#"{{"kind":"duplicate","index":1,"inner":{base}}}"#
            )),
            &caps(),
        )
        .unwrap();
        assert_eq!(duplicated.u(), 3);
        assert_eq!(eval_ints(&duplicated, &[1, 0]), vec![1, 1, 0]);

        let padded = Support::compile(
            &ring,
            2,
            &spec_json(&format!(
                r#"{{"kind":"insert_zero","index":1,"inner":{base}}}"#
            )),
            &caps(),
        )
        .unwrap();
        assert_eq!(padded.u(), 3);
        assert_eq!(eval_ints(&padded, &[1, 1]), vec![1, 0, 1]);

        // Duplicating then dropping the copy gives back the original.
        let roundtrip = Support::compile(
            &ring,
            2,
            &spec_json(&format!(
                r#"{{"kind":"drop","index":1,
                     "inner":{{"kind":"duplicate","index":1,"inner":{base}}}}}"#
            )),
            &caps(),
        )
        .unwrap();
        for v in [[0u64, 0], [1, 0], [0, 1], [1, 1]] {
            let base_supp = Support::compile(&ring, 2, &spec_json(base), &caps()).unwrap();
            assert_eq!(eval_ints(&roundtrip, &v), eval_ints(&base_supp, &v));
        }
    }

    #[test]
    fn drop_that_loses_a_support_is_rejected() {
        let ring = RingSpec::zm(2).unwrap();
        // sigma((1,0)) = (1,0) is concentrated on coordinate 1.
        let err = Support::compile(
            &ring,
            2,
            &spec_json(r#"{"kind":"drop","index":1,"inner":{"kind":"hamming"}}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
    }

    #[test]
    fn compose_linear_rejects_non_injective_matrices() {
        let ring = RingSpec::zm(4).unwrap();
        // det = 2 is not a unit.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"compose_linear","matrix":[[2]],"inner":{"kind":"hamming"}}"#),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // Non-square with 2 in the kernel.
        let err = Support::compile(
            &ring,
            1,
            &spec_json(
                r#"{"kind":"compose_linear","matrix":[[2],[2]],
                    "inner":{"kind":"hamming","n":2}}"#,
            ),
            &caps(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSupport(_)));
        // Injective non-square map v -> (v, 2v) passes.
        Support::compile(
            &ring,
            1,
            &spec_json(
                r#"{"kind":"compose_linear","matrix":[[1],[2]],
                    "inner":{"kind":"hamming","n":2}}"#,
            ),
            &caps(),
        )
        .unwrap();
    }

    fn omega_composed_support(ring: &RingSpec) -> Support {
        let spec = spec_json(
            r#"{"kind":"compose_linear",
                "matrix":[[3,4,1],[5,3,3],[2,4,5]],
                "inner":{"kind":"product","parts":[
                    {"kind":"pir","values":[[[2]],[[1]]]},
                    {"kind":"pir","values":[[[2]],[[1]]]},
                    {"kind":"pir","values":[[[2]],[[1]]]}]}}"#,
        );
        Support::compile(ring, 3, &spec, &Caps::default()).unwrap()
    }

    #[test]
    fn composed_omega_support_is_modular_and_gives_the_code_support() {
        let ring = RingSpec::zm(6).unwrap();
        let supp = omega_composed_support(&ring);
        assert_eq!(supp.u(), 6);
        assert_eq!(supp.n(), 3);
        assert_eq!(supp.support_verdict(&caps()).unwrap(), None);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
        let code = Code::new(
            &ring,
            3,
            vec![zm_vec(&ring, &[3, 1, 2]), zm_vec(&ring, &[2, 4, 3])],
        )
        .unwrap();
        let cs = supp.code_support_checked(&code, &caps()).unwrap();
        assert_eq!(cs.by_generators.coords(), &[2, 1, 2, 1, 2, 1]);
        assert!(cs.agree);
        assert_eq!(cs.by_generators.total(), 9);
    }

    #[test]
    fn lee_generator_join_underestimates_codeword_join() {
        let ring = RingSpec::zm(4).unwrap();
        let supp = Support::compile(&ring, 1, &spec_json(r#"{"kind":"lee"}"#), &caps()).unwrap();
        let code = Code::new(&ring, 1, vec![zm_vec(&ring, &[1])]).unwrap();
        let cs = supp.code_support_checked(&code, &caps()).unwrap();
        assert_eq!(cs.by_generators.coords(), &[1]);
        assert_eq!(cs.by_codewords.coords(), &[2]);
        assert!(!cs.agree);
    }

    #[test]
    fn decompose_omega_into_factor_supports() {
        let ring = RingSpec::zm(6).unwrap();
        let supp = Support::compile(
            &ring,
            1,
            &spec_json(r#"{"kind":"pir","values":[[[2]],[[1]]]}"#),
            &caps(),
        )
        .unwrap();
        let dec = supp.decompose_modular(&caps()).unwrap();
        assert_eq!(dec.coord_factor, vec![0, 1]);
        assert_eq!(dec.factors.len(), 2);
        // Factor over Z_2: sigma_1(1) = (2).
        let f1 = &dec.factors[0];
        assert_eq!(f1.ring().size(), 2);
        let one = f1.ring().elem_from_int(1).unwrap();
        assert_eq!(f1.evaluate(&[one]).unwrap().into_coords(), vec![2]);
        // Factor over Z_3: sigma_2(1) = sigma_2(2) = (1).
        let f2 = &dec.factors[1];
        assert_eq!(f2.ring().size(), 3);
        for x in 1..3 {
            let e = f2.ring().elem_from_int(x).unwrap();
            assert_eq!(f2.evaluate(&[e]).unwrap().into_coords(), vec![1]);
        }
    }

    #[test]
    fn decompose_single_factor_ring_returns_sigma_itself() {
        let ring = RingSpec::zm(2).unwrap();
        let supp = Support::compile(&ring, 2, &spec_json(r#"{"kind":"hamming"}"#), &caps()).unwrap();
        let dec = supp.decompose_modular(&caps()).unwrap();
        assert_eq!(dec.coord_factor, vec![0, 0]);
        assert_eq!(dec.factors.len(), 1);
        for v in [[0u64, 0], [1, 0], [0, 1], [1, 1]] {
            let vv = zm_vec(&ring, &v);
            assert_eq!(
                dec.factors[0].evaluate(&vv).unwrap(),
                supp.evaluate(&vv).unwrap()
            );
        }
    }

    #[test]
    fn decompose_recovers_product_blocks() {
        // Z_2 x GF(4): a product of two chain-ring supports splits back
        // into its blocks.
        let ring = RingSpec::product(vec![
            crate::ring::ChainFactor::zpe(2, 1).unwrap(),
            crate::ring::ChainFactor::gf(2, 2, None).unwrap(),
        ])
        .unwrap();
        // Table support: Hamming weight of the Z_2 part at coordinate 1,
        // Hamming weight of the GF(4) part at coordinate 2.
        let mut entries_list = Vec::new();
        for e in ring.elements() {
            let z2_nonzero = e.parts()[0] != FactorElem::Zpe(0);
            let gf_nonzero = e.parts()[1] != FactorElem::Gf(vec![0, 0]);
            entries_list.push((
                vec![ring.elem_to_repr(&e)],
                vec![u32::from(z2_nonzero), u32::from(gf_nonzero)],
            ));
        }
        let spec = SupportSpec::Table {
            entries: None,
            entries_list: Some(entries_list),
        };
        let supp = Support::compile(&ring, 1, &spec, &caps()).unwrap();
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
        let dec = supp.decompose_modular(&caps()).unwrap();
        assert_eq!(dec.coord_factor, vec![0, 1]);
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = spec_json(
            r#"{"kind":"concat","parts":[
                {"kind":"hamming","n":2},
                {"kind":"scale","index":2,"factor":2,"inner":{"kind":"hamming","n":2}}]}"#,
        );
        let text = serde_json::to_string(&spec).unwrap();
        let back: SupportSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn concat_stacks_value_coordinates() {
        let ring = RingSpec::zm(2).unwrap();
        let supp = Support::compile(
            &ring,
            2,
            &spec_json(
                r#"{"kind":"concat","parts":[
                    {"kind":"hamming"},
                    {"kind":"scale","index":1,"factor":2,"inner":{"kind":"hamming"}}]}"#,
            ),
            &caps(),
        )
        .unwrap();
        assert_eq!(supp.u(), 4);
        assert_eq!(eval_ints(&supp, &[1, 1]), vec![1, 1, 2, 1]);
        assert_eq!(supp.modular_verdict(&caps()).unwrap(), None);
    }
}
