//! Codes: finitely generated submodules of `R^n`.
//!
//! Codewords are cached as canonical vector indices (mixed radix, coordinate
//! 1 least significant). The exhaustive submodule and generating-set searches
//! here serve as independent oracles for the structural invariants computed
//! from the chain-ring decomposition.

use std::collections::{BTreeSet, HashMap, HashSet};

use once_cell::sync::OnceCell;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::ring::{RingElem, RingSpec};

pub type Vector = Vec<RingElem>;

/// `R^n` with canonical vector indexing and elementwise operation tables.
#[derive(Debug)]
pub(crate) struct Space {
    pub ring: RingSpec,
    pub n: usize,
    rsize: u64,
    elems: Vec<RingElem>,
    add_tab: Vec<u32>,
    mul_tab: Vec<u32>,
}

/// Largest ring for which per-element operation tables are built eagerly.
const TABLE_RING_LIMIT: u64 = 4096;

impl Space {
    pub fn new(ring: &RingSpec, n: usize) -> Result<Self> {
        let rsize = ring.size();
        if rsize > TABLE_RING_LIMIT {
            return Err(Error::CapExceeded {
                what: "ring size for exhaustive vector indexing",
                needed: rsize,
                cap: TABLE_RING_LIMIT,
            });
        }
        let mut space_size: u64 = 1;
        for _ in 0..n {
            space_size = space_size
                .checked_mul(rsize)
                .filter(|&s| s < 1 << 62)
                .ok_or(Error::CapExceeded {
                    what: "ambient space size |R|^n",
                    needed: u64::MAX,
                    cap: 1 << 62,
                })?;
        }
        let elems: Vec<RingElem> = ring.elements().collect();
        let k = rsize as usize;
        let mut add_tab = vec![0u32; k * k];
        let mut mul_tab = vec![0u32; k * k];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add_tab[i * k + j] = ring.elem_index(&ring.add(a, b)) as u32;
                mul_tab[i * k + j] = ring.elem_index(&ring.mul(a, b)) as u32;
            }
        }
        Ok(Space {
            ring: ring.clone(),
            n,
            size,
            rsize,
            elems,
            add_tab,
            mul_tab,
        })
    }

    pub fn elem_count(&self) -> u64 {
        self.rsize
    }

    pub fn elem(&self, idx: u64) -> &RingElem {
        &self.elems[idx as usize]
    }

    pub fn index_of(&self, v: &[RingElem]) -> u64 {
        debug_assert_eq!(v.len(), self.n);
        let mut idx = 0;
        for x in v.iter().rev() {
            idx = idx * self.rsize + self.ring.elem_index(x);
        }
        idx
    }

    pub fn vec_at(&self, mut idx: u64) -> Vector {
        (0..self.n)
            .map(|_| {
                let e = self.elems[(idx % self.rsize) as usize].clone();
                idx /= self.rsize;
                e
            })
            .collect()
    }

    /// Componentwise sum of two vector indices.
    pub fn vadd(&self, mut a: u64, mut b: u64) -> u64 {
        let k = self.rsize;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.n {
            let s = self.add_tab[((a % k) * k + b % k) as usize] as u64;
            out += s * stride;
            stride *= k;
            a /= k;
            b /= k;
        }
        out
    }

    /// Scalar multiple of a vector index by an element index.
    pub fn vscale(&self, r: u64, mut v: u64) -> u64 {
        let k = self.rsize;
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.n {
            let s = self.mul_tab[(r * k + v % k) as usize] as u64;
            out += s * stride;
            stride *= k;
            v /= k;
        }
        out
    }

    /// Element index at coordinate `j` of a vector index.
    pub fn coord(&self, v: u64, j: usize) -> u64 {
        (v / self.rsize.pow(j as u32)) % self.rsize
    }

    /// Index of the factor-`i` projection of a vector index, in the factor
    /// vector space `R_i^n`.
    pub fn project_factor(&self, i: usize, mut v: u64) -> u64 {
        let fsize = self.ring.factors()[i].size();
        let mut out = 0;
        let mut stride = 1;
        for _ in 0..self.n {
            let e = &self.elems[(v % self.rsize) as usize];
            out += self.ring.factors()[i].elem_index(&e.parts()[i]) * stride;
            stride *= fsize;
            v /= self.rsize;
        }
        out
    }
}

/// A submodule of `R^n` given by generators.
#[derive(Debug)]
pub struct Code {
    ring: RingSpec,
    n: usize,
    generators: Vec<Vector>,
    space: OnceCell<Space>,
    words: OnceCell<Vec<u64>>,
}

impl Code {
    /// Generators are validated, deduplicated, and zero rows are dropped. An
    /// empty list (after dropping zeros) is the zero code.
    pub fn new(ring: &RingSpec, n: usize, generators: Vec<Vector>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "ambient width n must be at least 1".into(),
            ));
        }
        let zero = ring.zero();
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for g in generators {
            if g.len() != n {
                return Err(Error::InvalidInput(format!(
                    "generator has {} coordinates, expected {n}",
                    g.len()
                )));
            }
            for x in &g {
                ring.check_elem(x)?;
            }
            if g.iter().all(|x| x == &zero) {
                continue;
            }
            if seen.insert(g.clone()) {
                gens.push(g);
            }
        }
        Ok(Code {
            ring: ring.clone(),
            n,
            generators: gens,
            space: OnceCell::new(),
            words: OnceCell::new(),
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub(crate) fn space(&self) -> Result<&Space> {
        self.space.get_or_try_init(|| Space::new(&self.ring, self.n))
    }

    /// Sorted canonical indices of all codewords; computed once, capped by
    /// `caps.enumeration` on the closure size.
    pub(crate) fn word_indices(&self, caps: &Caps) -> Result<&Vec<u64>> {
        self.words.get_or_try_init(|| {
            let space = self.space()?;
            let mut words: BTreeSet<u64> = BTreeSet::new();
            words.insert(0);
            for g in &self.generators {
                let gidx = space.index_of(g);
                if words.contains(&gidx) {
                    // Already spanned; the closure would not change.
                    continue;
                }
                let multiples: Vec<u64> = (0..space.elem_count())
                    .map(|r| space.vscale(r, gidx))
                    .collect();
                let snapshot: Vec<u64> = words.iter().copied().collect();
                for s in snapshot {
                    for &m in &multiples {
                        words.insert(space.vadd(s, m));
                    }
                }
                caps.check("code enumeration |C|", words.len() as u64, caps.enumeration)?;
            }
            Ok(words.into_iter().collect())
        })
    }

    /// All codewords in canonical order.
    pub fn codewords(&self, caps: &Caps) -> Result<Vec<Vector>> {
        let space = self.space()?;
        Ok(self
            .word_indices(caps)?
            .iter()
            .map(|&w| space.vec_at(w))
            .collect())
    }

    pub fn len(&self, caps: &Caps) -> Result<u64> {
        Ok(self.word_indices(caps)?.len() as u64)
    }

    pub fn contains(&self, v: &[RingElem], caps: &Caps) -> Result<bool> {
        let space = self.space()?;
        let idx = space.index_of(v);
        Ok(self.word_indices(caps)?.binary_search(&idx).is_ok())
    }

    /// The factor codes `C_i`, one per chain-ring factor, in factor order.
    pub fn decompose(&self) -> Result<Vec<Code>> {
        (0..self.ring.factor_count())
            .map(|i| {
                let fr = self.ring.factor_ring(i);
                let gens = self
                    .generators
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|x| RingElem {
                                parts: vec![self.ring.project(i, x)],
                            })
                            .collect::<Vector>()
                    })
                    .collect();
                Code::new(&fr, self.n, gens)
            })
            .collect()
    }

    /// The socle `0 :_C J`: codewords annihilated by the radical generator.
    pub fn socle(&self, caps: &Caps) -> Result<Code> {
        let space = self.space()?;
        let alpha = self.ring.radical_data().alpha;
        let alpha_idx = self.ring.elem_index(&alpha);
        let gens: Vec<Vector> = self
            .word_indices(caps)?
            .iter()
            .filter(|&&w| w != 0 && space.vscale(alpha_idx, w) == 0)
            .map(|&w| space.vec_at(w))
            .collect();
        Code::new(&self.ring, self.n, gens)
    }

    /// Per-factor residue dimensions: `mu_i` with `|C_i| / |M_i C_i| = q_i^(mu_i)`.
    pub fn mu_locals(&self, caps: &Caps) -> Result<Vec<u32>> {
        let space = self.space()?;
        let words = self.word_indices(caps)?;
        let rad = self.ring.radical_data();
        let alpha_idx = self.ring.elem_index(&rad.alpha);
        let ell = self.ring.factor_count();
        let mut out = Vec::with_capacity(ell);
        for i in 0..ell {
            let mut proj = HashSet::new();
            let mut alpha_proj = HashSet::new();
            for &w in words {
                proj.insert(space.project_factor(i, w));
                alpha_proj.insert(space.project_factor(i, space.vscale(alpha_idx, w)));
            }
            out.push(power_log(
                proj.len() as u64 / alpha_proj.len() as u64,
                rad.residue_sizes[i],
            )?);
        }
        Ok(out)
    }

    pub fn mu_local(&self, i: usize, caps: &Caps) -> Result<u32> {
        Ok(self.mu_locals(caps)?[i])
    }

    /// `M(C)`: the sum of the per-factor residue dimensions.
    pub fn big_m(&self, caps: &Caps) -> Result<u32> {
        Ok(self.mu_locals(caps)?.iter().sum())
    }

    /// Least cardinality of a generating set: the maximum of the per-factor
    /// residue dimensions (one generator can serve all factors at once via
    /// the idempotents).
    pub fn mu_global(&self, caps: &Caps) -> Result<u32> {
        Ok(self.mu_locals(caps)?.iter().copied().max().unwrap_or(0))
    }

    /// Every distinct submodule of the code, zero and the code included.
    /// Exhaustive; capped by `caps.submodule_words` on `|C|`.
    pub fn all_submodules(&self, caps: &Caps) -> Result<Vec<Code>> {
        let engine = Engine::new(self, caps, caps.submodule_words)?;
        let space = self.space()?;
        engine
            .all_submodule_positions(caps)?
            .into_iter()
            .map(|poss| {
                let gens = poss
                    .iter()
                    .filter(|&&p| p != 0)
                    .map(|&p| space.vec_at(engine.words[p as usize]))
                    .collect();
                Code::new(&self.ring, self.n, gens)
            })
            .collect()
    }

    /// Exhaustive search for the largest inclusion-minimal generating set;
    /// returns its cardinality and one witness. Independent of the
    /// chain-ring decomposition that `big_m` uses.
    pub fn max_min_genset_size(&self, caps: &Caps) -> Result<(u32, Vec<Vector>)> {
        let engine = Engine::new(self, caps, caps.genset_words)?;
        let space = self.space()?;
        let (size, poss) = engine.extreme_minimal_genset(caps, true)?;
        let witness = poss
            .iter()
            .map(|&p| space.vec_at(engine.words[p as usize]))
            .collect();
        Ok((size, witness))
    }

    /// Exhaustive search for the smallest generating set cardinality.
    pub fn min_genset_size(&self, caps: &Caps) -> Result<u32> {
        let engine = Engine::new(self, caps, caps.genset_words)?;
        Ok(engine.extreme_minimal_genset(caps, false)?.0)
    }
}

fn power_log(ratio: u64, q: u64) -> Result<u32> {
    let mut mu = 0;
    let mut pow = 1u64;
    while pow < ratio {
        pow *= q;
        mu += 1;
    }
    if pow != ratio {
        return Err(Error::Internal(format!(
            "index {ratio} is not a power of the residue field size {q}"
        )));
    }
    Ok(mu)
}

/// Position-indexed view of an enumerated code: position 0 is the zero word,
/// addition and scalar multiplication act on positions. Quadratic in `|C|`,
/// so construction is capped.
pub(crate) struct Engine {
    pub words: Vec<u64>,
    pub add: Vec<u32>,
    pub smul: Vec<u32>,
    /// Per factor, per position: index of the projected word in the factor
    /// vector space.
    pub factor_proj: Vec<Vec<u64>>,
    /// Position of `alpha * w` for each position.
    pub alpha_pos: Vec<u32>,
    pub residue_sizes: Vec<u64>,
    pub rsize: u64,
}

impl Engine {
    pub fn new(code: &Code, caps: &Caps, word_cap: u64) -> Result<Engine> {
        let space = code.space()?;
        let words: Vec<u64> = code.word_indices(caps)?.clone();
        let k = words.len();
        caps.check("code size |C| for exhaustive search", k as u64, word_cap)?;
        let pos: HashMap<u64, u32> = words
            .iter()
            .enumerate()
            .map(|(i, &w)| (w, i as u32))
            .collect();
        let rsize = space.elem_count();
        let mut add = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..=i {
                let s = pos[&space.vadd(words[i], words[j])];
                add[i * k + j] = s;
                add[j * k + i] = s;
            }
        }
        let mut smul = vec![0u32; rsize as usize * k];
        for r in 0..rsize {
            for (j, &w) in words.iter().enumerate() {
                smul[r as usize * k + j] = pos[&space.vscale(r, w)];
            }
        }
        let ring = &space.ring;
        let rad = ring.radical_data();
        let alpha_idx = ring.elem_index(&rad.alpha);
        let alpha_pos: Vec<u32> = (0..k)
            .map(|j| smul[alpha_idx as usize * k + j])
            .collect();
        let ell = ring.factor_count();
        let mut factor_proj = vec![Vec::with_capacity(k); ell];
        for &w in &words {
            for (i, proj) in factor_proj.iter_mut().enumerate() {
                proj.push(space.project_factor(i, w));
            }
        }
        Ok(Engine {
            words,
            add,
            smul,
            factor_proj,
            alpha_pos,
            residue_sizes: rad.residue_sizes,
            rsize,
        })
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn add_pos(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.words.len() + b as usize]
    }

    pub fn smul_pos(&self, r: u64, a: u32) -> u32 {
        self.smul[r as usize * self.words.len() + a as usize]
    }

    /// Per-factor residue dimensions of a submodule given by its positions
    /// (closed under the module operations).
    pub fn mu_local_all(&self, positions: &[u32]) -> Vec<u32> {
        let ell = self.factor_proj.len();
        let mut out = Vec::with_capacity(ell);
        for i in 0..ell {
            let proj: HashSet<u64> = positions
                .iter()
                .map(|&p| self.factor_proj[i][p as usize])
                .collect();
            let alpha_proj: HashSet<u64> = positions
                .iter()
                .map(|&p| self.factor_proj[i][self.alpha_pos[p as usize] as usize])
                .collect();
            let mu = power_log(proj.len() as u64 / alpha_proj.len() as u64, self.residue_sizes[i])
                .expect("submodule index must be a power of the residue field size");
            out.push(mu);
        }
        out
    }

    pub fn big_m_of(&self, positions: &[u32]) -> u32 {
        self.mu_local_all(positions).iter().sum()
    }

    /// Closure of `known U {v}` where `known` is already a submodule, as the
    /// union of the cosets `known + r*v` over all scalars.
    pub fn extend_span(&self, known: &[u32], v: u32) -> Vec<u32> {
        let mut out: BTreeSet<u32> = BTreeSet::new();
        for r in 0..self.rsize {
            let rv = self.smul_pos(r, v);
            for &s in known {
                out.insert(self.add_pos(s, rv));
            }
        }
        out.into_iter().collect()
    }

    pub fn span_of(&self, gens: &[u32]) -> Vec<u32> {
        let mut span = vec![0u32];
        for &g in gens {
            span = self.extend_span(&span, g);
        }
        span
    }

    /// Breadth-first closure of the submodule lattice.
    pub fn all_submodule_positions(&self, caps: &Caps) -> Result<Vec<Vec<u32>>> {
        let zero = vec![0u32];
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(zero.clone());
        let mut queue = vec![zero];
        let mut out = Vec::new();
        let mut visited: u64 = 0;
        while let Some(sub) = queue.pop() {
            visited += 1;
            caps.check(
                "submodule lattice search states",
                visited,
                caps.search_nodes,
            )?;
            for v in 0..self.words.len() as u32 {
                if sub.binary_search(&v).is_ok() {
                    continue;
                }
                let bigger = self.extend_span(&sub, v);
                if seen.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
            out.push(sub);
        }
        out.sort();
        Ok(out)
    }

    /// Depth-first search over inclusion-minimal generating sets. With
    /// `maximize` the largest cardinality is returned (with a witness),
    /// otherwise the smallest. Sequences are explored in ascending position
    /// order, so results are deterministic.
    pub fn extreme_minimal_genset(&self, caps: &Caps, maximize: bool) -> Result<(u32, Vec<u32>)> {
        let mut sizes = BTreeSet::new();
        let mut best = None;
        self.walk_gensets(caps, Some(maximize), &mut sizes, &mut best)?;
        // The zero code is generated by the empty set only.
        Ok(best.unwrap_or((0, Vec::new())))
    }

    /// All cardinalities realized by inclusion-minimal generating sets.
    /// Exhaustive with no early exit; keep the code small.
    pub fn minimal_genset_sizes(&self, caps: &Caps) -> Result<BTreeSet<u32>> {
        let mut sizes = BTreeSet::new();
        let mut best = None;
        self.walk_gensets(caps, None, &mut sizes, &mut best)?;
        Ok(sizes)
    }

    fn walk_gensets(
        &self,
        caps: &Caps,
        maximize: Option<bool>,
        sizes: &mut BTreeSet<u32>,
        best: &mut Option<(u32, Vec<u32>)>,
    ) -> Result<()> {
        if self.words.len() == 1 {
            return Ok(());
        }
        let mut chosen: Vec<u32> = Vec::new();
        let span = vec![0u32];
        let mut nodes: u64 = 0;
        self.dfs_gensets(caps, maximize, sizes, best, &mut chosen, &span, 1, &mut nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_gensets(
        &self,
        caps: &Caps,
        maximize: Option<bool>,
        sizes: &mut BTreeSet<u32>,
        best: &mut Option<(u32, Vec<u32>)>,
        chosen: &mut Vec<u32>,
        span: &[u32],
        start: u32,
        nodes: &mut u64,
    ) -> Result<()> {
        let k = self.words.len();
        let full_log2 = 63 - (k as u64).leading_zeros();
        for v in start..k as u32 {
            // Early exit: no minimal generating set can beat floor(log2 |C|).
            if maximize == Some(true) {
                if let Some((b, _)) = best {
                    if *b >= full_log2 {
                        return Ok(());
                    }
                }
            }
            // An element inside the span of the others cannot sit in an
            // inclusion-minimal generating set.
            if span.binary_search(&v).is_ok() {
                continue;
            }
            *nodes += 1;
            caps.check("generating-set search states", *nodes, caps.search_nodes)?;
            let bigger = self.extend_span(span, v);
            chosen.push(v);
            if bigger.len() == k {
                // A generating set; proper extensions cannot be minimal.
                let improves = match (maximize, &best) {
                    (Some(true), Some((b, _))) => chosen.len() as u32 > *b,
                    (Some(false), Some((b, _))) => (chosen.len() as u32) < *b,
                    _ => true,
                };
                if improves && self.is_minimal_genset(chosen) {
                    sizes.insert(chosen.len() as u32);
                    *best = Some((chosen.len() as u32, chosen.clone()));
                }
            } else if chosen.len() < caps.genset_subset as usize {
                // Orders of nested submodules divide, so the span at least
                // doubles per generator: prune hopeless branches.
                let headroom = 63 - (k as u64 / bigger.len() as u64).leading_zeros();
                let proceed = match (maximize, &best) {
                    (Some(true), Some((b, _))) => chosen.len() as u32 + headroom > *b,
                    (Some(false), Some((b, _))) => (chosen.len() as u32 + 1) < *b,
                    _ => true,
                };
                if proceed {
                    self.dfs_gensets(
                        caps, maximize, sizes, best, chosen, &bigger, v + 1, nodes,
                    )?;
                }
            }
            chosen.pop();
        }
        Ok(())
    }

    fn is_minimal_genset(&self, gens: &[u32]) -> bool {
        let k = self.words.len();
        (0..gens.len()).all(|skip| {
            let rest: Vec<u32> = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &g)| g)
                .collect();
            self.span_of(&rest).len() != k
        })
    }
}
