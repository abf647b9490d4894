//! Young-group actions on matching complexes: orbits, the quotient complex,
//! projection, transfer, and the contraction isomorphism onto a
//! bounded-degree complex.

use std::collections::{BTreeMap, BTreeSet};

use matchtor_linalg::{HermiteBasis, SparseIntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::chain::{ChainVector, FreeChainComplex, OrientedSimplex};
use crate::error::{CoreError, Result};
use crate::graph::{
    kappa_fiber_representative, kappa_oriented, sort_with_parity, Blocks, ComplexSpec, DegreeVector, Edge, EdgeList,
    Simplex, Vertex,
};

/// A permutation of `[N]` as an image table; index 0 is unused.
pub type Perm = Vec<Vertex>;

/// The Young group of a partition, generated by adjacent transpositions
/// inside each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungAction {
    blocks: Blocks,
    generators: Vec<Perm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Free,
    OrderTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Gamma,
    Delta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    /// Lexicographically least member.
    pub representative: Simplex,
    pub kind: OrbitKind,
    pub part: Part,
    pub size: usize,
}

/// An orbit with each member's sign relative to the representative:
/// `member = sign * g(rep)` for some group element `g`. Signs are
/// meaningless (all +1) for order-two orbits.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub class: OrbitClass,
    pub members: Vec<(Simplex, i8)>,
}

impl YoungAction {
    pub fn new(blocks: Blocks) -> Self {
        let n = blocks.total();
        let mut generators = Vec::new();
        for b in blocks.blocks() {
            for w in b.windows(2) {
                let mut g: Perm = (0..=n as Vertex).collect();
                g.swap(w[0] as usize, w[1] as usize);
                generators.push(g);
            }
        }
        Self { blocks, generators }
    }

    pub fn consecutive(lambda: &DegreeVector) -> Result<Self> {
        Ok(Self::new(Blocks::consecutive(lambda)?))
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn n_vertices(&self) -> usize {
        self.blocks.total()
    }

    pub fn lambda(&self) -> DegreeVector {
        self.blocks.lambda()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// `prod lambda_i!`.
    pub fn group_order(&self) -> BigInt {
        self.blocks
            .blocks()
            .iter()
            .map(|b| (1..=b.len()).map(BigInt::from).product::<BigInt>())
            .product()
    }

    pub fn identity(&self) -> Perm {
        (0..=self.n_vertices() as Vertex).collect()
    }

    pub fn is_block_preserving(&self, g: &[Vertex]) -> bool {
        let n = self.n_vertices();
        if g.len() != n + 1 {
            return false;
        }
        let mut seen = vec![false; n + 1];
        for v in 1..=n {
            let w = g[v] as usize;
            if w == 0 || w > n || seen[w] || self.blocks.block_of(v as Vertex) != self.blocks.block_of(w as Vertex) {
                return false;
            }
            seen[w] = true;
        }
        true
    }

    /// `g h` (apply `h` first).
    pub fn compose(&self, g: &[Vertex], h: &[Vertex]) -> Perm {
        let mut out = self.identity();
        for v in 1..out.len() {
            out[v] = g[h[v] as usize];
        }
        out
    }

    /// Every group element, for groups of order at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Perm>> {
        if self.group_order() > BigInt::from(limit) {
            return Err(CoreError::ResourceLimit(format!(
                "group of order {} exceeds the enumeration limit {limit}",
                self.group_order()
            )));
        }
        let mut out = vec![self.identity()];
        for b in self.blocks.blocks() {
            let perms = permutations(b);
            let mut next = Vec::with_capacity(out.len() * perms.len());
            for g in &out {
                for p in &perms {
                    let mut h = g.clone();
                    for (src, dst) in b.iter().zip(p) {
                        h[*src as usize] = *dst;
                    }
                    next.push(h);
                }
            }
            out = next;
        }
        Ok(out)
    }

    fn apply_unchecked(&self, g: &[Vertex], sigma: &Simplex) -> (Simplex, i8) {
        let mut e: EdgeList = sigma
            .edges()
            .iter()
            .map(|x| Edge::new(g[x.a as usize], g[x.b as usize]))
            .collect();
        let odd = sort_with_parity(&mut e).expect("permutations keep edges distinct");
        (Simplex::from_sorted(e).expect("sorted"), if odd { -1 } else { 1 })
    }

    pub fn act(&self, g: &[Vertex], sigma: &OrientedSimplex) -> Result<OrientedSimplex> {
        if !self.is_block_preserving(g) {
            return Err(CoreError::InvalidInput("permutation does not preserve the blocks".into()));
        }
        if sigma.simplex.max_vertex() as usize > self.n_vertices() {
            return Err(CoreError::InvalidInput(format!("{} exceeds the vertex set", sigma.simplex)));
        }
        let (s, t) = self.apply_unchecked(g, &sigma.simplex);
        Ok(OrientedSimplex {
            simplex: s,
            sign: t * sigma.sign,
        })
    }

    pub fn act_chain(&self, g: &[Vertex], c: &ChainVector) -> Result<ChainVector> {
        let mut out = ChainVector::zero(c.degree());
        for (s, k) in c.terms() {
            out.add_term(&self.act(g, &OrientedSimplex::positive(s.clone()))?, k)?;
        }
        Ok(out)
    }

    pub fn part_of(&self, sigma: &Simplex) -> Part {
        match kappa_oriented(sigma, &self.blocks) {
            Ok(_) => Part::Gamma,
            Err(_) => Part::Delta,
        }
    }

    /// Orbit of `sigma`, explored along the Schreier graph of the
    /// generators. Orientation reversal is detected when two paths reach a
    /// member with opposite signs.
    pub fn orbit(&self, sigma: &Simplex) -> Orbit {
        let mut signs: FxHashMap<Simplex, i8> = FxHashMap::default();
        let mut queue = vec![sigma.clone()];
        signs.insert(sigma.clone(), 1);
        let mut reversing = false;
        let mut head = 0;
        while head < queue.len() {
            let tau = queue[head].clone();
            head += 1;
            let s = signs[&tau];
            for g in &self.generators {
                let (img, t) = self.apply_unchecked(g, &tau);
                match signs.get(&img) {
                    Some(&old) => reversing |= old != s * t,
                    None => {
                        signs.insert(img.clone(), s * t);
                        queue.push(img);
                    }
                }
            }
        }
        let rep = queue.iter().min().expect("orbit is nonempty").clone();
        let rep_sign = signs[&rep];
        let mut members: Vec<(Simplex, i8)> = queue
            .into_iter()
            .map(|m| {
                let s = if reversing { 1 } else { signs[&m] * rep_sign };
                (m, s)
            })
            .collect();
        members.sort();
        Orbit {
            class: OrbitClass {
                part: self.part_of(&rep),
                representative: rep,
                kind: if reversing { OrbitKind::OrderTwo } else { OrbitKind::Free },
                size: members.len(),
            },
            members,
        }
    }
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur = items.to_vec();
    cur.sort_unstable();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Orbit classes of the `d`-faces of a complex, in order of representative.
pub fn orbit_decompose(complex: &FreeChainComplex, action: &YoungAction, d: isize) -> Result<Vec<OrbitClass>> {
    Ok(OrbitMap::build(complex, action, d)?.classes)
}

/// Orbit membership of every face in one degree.
#[derive(Debug, Clone)]
struct OrbitMap {
    classes: Vec<OrbitClass>,
    /// per face ordinal: (orbit index, sign relative to the representative)
    of_face: Vec<(u32, i8)>,
}

impl OrbitMap {
    fn build(complex: &FreeChainComplex, action: &YoungAction, d: isize) -> Result<Self> {
        let table = complex.table();
        let faces = table.faces(d);
        let mut of_face = vec![(u32::MAX, 0i8); faces.len()];
        let mut classes = Vec::new();
        for (i, sigma) in faces.iter().enumerate() {
            if of_face[i].0 != u32::MAX {
                continue;
            }
            let orbit = action.orbit(sigma);
            let k = classes.len() as u32;
            for (m, s) in &orbit.members {
                let j = table.index_of(m).ok_or_else(|| {
                    CoreError::InvalidInput(format!("{} is not invariant under the action", complex.spec()))
                })?;
                of_face[j] = (k, *s);
            }
            classes.push(orbit.class);
        }
        Ok(Self { classes, of_face })
    }
}

/// Coordinates of a chain of the quotient complex, keyed by orbit
/// representative. Coordinates on order-two orbits are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuotientChain {
    pub degree: isize,
    pub coords: BTreeMap<Simplex, BigInt>,
    pub order_two: BTreeSet<Simplex>,
}

impl QuotientChain {
    pub fn zero(degree: isize) -> Self {
        Self {
            degree,
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Adds `k` to the coordinate of an orbit representative.
    pub fn add(&mut self, rep: &Simplex, kind: OrbitKind, k: BigInt) {
        let entry = self.coords.entry(rep.clone()).or_insert_with(BigInt::zero);
        *entry += k;
        if kind == OrbitKind::OrderTwo {
            self.order_two.insert(rep.clone());
            *entry = entry.mod_floor(&BigInt::from(2));
        }
        if entry.is_zero() {
            self.coords.remove(rep);
            self.order_two.remove(rep);
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, v) in &self.coords {
            let kind = if self.order_two.contains(s) {
                OrbitKind::OrderTwo
            } else {
                OrbitKind::Free
            };
            out.add(s, kind, v * k);
        }
        out
    }

    /// True if every coordinate is supported on gamma-part orbits.
    pub fn is_gamma_supported(&self, action: &YoungAction) -> bool {
        self.coords.keys().all(|s| action.part_of(s) == Part::Gamma)
    }
}

/// `pi`: rewrites each term on its orbit representative.
pub fn project_chain(c: &ChainVector, action: &YoungAction) -> Result<QuotientChain> {
    let mut out = QuotientChain::zero(c.degree());
    let mut cache: FxHashMap<Simplex, (Simplex, i8, OrbitKind)> = FxHashMap::default();
    for (s, k) in c.terms() {
        if s.max_vertex() as usize > action.n_vertices() {
            return Err(CoreError::InvalidInput(format!("{s} exceeds the vertex set")));
        }
        let (rep, sign, kind) = match cache.get(s) {
            Some(x) => x.clone(),
            None => {
                let orbit = action.orbit(s);
                for (m, t) in &orbit.members {
                    cache.insert(m.clone(), (orbit.class.representative.clone(), *t, orbit.class.kind));
                }
                cache[s].clone()
            }
        };
        out.add(&rep, kind, if sign < 0 { -k } else { k.clone() });
    }
    Ok(out)
}

/// `phi`: the orbit sum `sum_{g in G} g(rep)` of each coordinate. For a
/// free orbit this is `|G| / |orbit|` times the signed orbit; for an
/// order-two orbit the sum cancels to zero.
pub fn transfer_chain(q: &QuotientChain, action: &YoungAction) -> Result<ChainVector> {
    let order = action.group_order();
    let mut out = ChainVector::zero(q.degree);
    for (rep, k) in &q.coords {
        let orbit = action.orbit(rep);
        if &orbit.class.representative != rep {
            return Err(CoreError::InvalidInput(format!("{rep} is not an orbit representative")));
        }
        if orbit.class.kind == OrbitKind::OrderTwo {
            continue;
        }
        let stab = &order / BigInt::from(orbit.members.len());
        let kk = k * stab;
        for (m, s) in &orbit.members {
            out.add_term(&OrientedSimplex { simplex: m.clone(), sign: *s }, &kk)?;
        }
    }
    Ok(out)
}

/// `kappa-hat`: a gamma-supported quotient chain as a chain on the
/// bounded-degree complex.
pub fn kappa_iso(q: &QuotientChain, action: &YoungAction) -> Result<ChainVector> {
    let mut out = ChainVector::zero(q.degree);
    for (rep, k) in &q.coords {
        let (tau, sign) = kappa_oriented(rep, action.blocks()).map_err(|_| {
            CoreError::InvalidInput(format!("{rep} lies in the parallel-edge part"))
        })?;
        out.add_term(&OrientedSimplex { simplex: tau, sign }, k)?;
    }
    Ok(out)
}

/// `mu`, the inverse of [`kappa_iso`].
pub fn kappa_inverse(c: &ChainVector, action: &YoungAction) -> Result<QuotientChain> {
    let mut lifted = ChainVector::zero(c.degree());
    for (tau, k) in c.terms() {
        let sigma = kappa_fiber_representative(tau, action.blocks())?;
        let (img, sign) = kappa_oriented(&sigma, action.blocks())?;
        debug_assert_eq!(&img, tau);
        lifted.add_term(&OrientedSimplex { simplex: sigma, sign }, k)?;
    }
    project_chain(&lifted, action)
}

/// Checks `kappa-hat(pi(d mu(tau))) = d tau` for one face `tau` of the
/// bounded-degree complex, without building the matching complex.
pub fn gamma_boundary_agrees(tau: &Simplex, action: &YoungAction) -> Result<bool> {
    let c = ChainVector::from_simplex(&OrientedSimplex::positive(tau.clone()));
    let q = kappa_inverse(&c, action)?;
    let lifted = transfer_representatives(&q)?;
    let down = project_chain(&lifted.boundary(), action)?;
    if !down.is_gamma_supported(action) {
        return Ok(false);
    }
    Ok(kappa_iso(&down, action)? == c.boundary())
}

// representatives with their coefficients, as a chain upstairs
fn transfer_representatives(q: &QuotientChain) -> Result<ChainVector> {
    let mut out = ChainVector::zero(q.degree);
    for (rep, k) in &q.coords {
        out.add_term(&OrientedSimplex::positive(rep.clone()), k)?;
    }
    Ok(out)
}

/// One generator of a presented chain group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub rep: Simplex,
    pub kind: OrbitKind,
    pub part: Part,
}

/// A chain complex whose groups are free abelian on some generators and
/// elementary 2-groups on others. Boundary entries into order-two
/// generators are 0 or 1.
#[derive(Debug, Clone)]
pub struct PresentedChainComplex {
    /// indexed by `d + 1`
    generators: Vec<Vec<Generator>>,
    index: Vec<FxHashMap<Simplex, u32>>,
    /// indexed by `d`, for `d = 0..=top`
    boundaries: Vec<SparseIntMatrix>,
}

impl PresentedChainComplex {
    pub fn top_dim(&self) -> isize {
        self.generators.len() as isize - 2
    }

    pub fn generators(&self, d: isize) -> &[Generator] {
        usize::try_from(d + 1)
            .ok()
            .and_then(|k| self.generators.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: isize) -> usize {
        self.generators(d).len()
    }

    pub fn index_of(&self, d: isize, rep: &Simplex) -> Option<usize> {
        usize::try_from(d + 1)
            .ok()
            .and_then(|k| self.index.get(k))
            .and_then(|m| m.get(rep))
            .map(|&i| i as usize)
    }

    /// `d_d : C_d -> C_{d-1}`.
    pub fn boundary(&self, d: isize) -> SparseIntMatrix {
        match usize::try_from(d).ok().and_then(|k| self.boundaries.get(k)) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::zeros(self.count(d - 1), self.count(d)),
        }
    }

    pub fn order_two_flags(&self, d: isize) -> Vec<bool> {
        self.generators(d).iter().map(|g| g.kind == OrbitKind::OrderTwo).collect()
    }

    /// Dense coordinates of a quotient chain.
    pub fn to_dense(&self, q: &QuotientChain) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.count(q.degree)];
        for (rep, k) in &q.coords {
            let i = self
                .index_of(q.degree, rep)
                .ok_or_else(|| CoreError::InvalidInput(format!("{rep} is not a generator")))?;
            v[i] = k.clone();
        }
        Ok(v)
    }

    pub fn from_dense(&self, d: isize, v: &[BigInt]) -> QuotientChain {
        let mut q = QuotientChain::zero(d);
        for (g, k) in self.generators(d).iter().zip(v) {
            if !k.is_zero() {
                q.add(&g.rep, g.kind, k.clone());
            }
        }
        q
    }

    /// `d^2 = 0` modulo the order-two relations.
    pub fn check_d_squared(&self) -> bool {
        (1..self.boundaries.len()).all(|d| {
            let p = match self.boundaries[d - 1].mul(&self.boundaries[d]) {
                Ok(p) => p,
                Err(_) => return false,
            };
            let flags = self.order_two_flags(d as isize - 2);
            let ok = p
                .columns()
                .all(|col| col.iter().all(|(i, v)| flags[*i as usize] && v.is_even()));
            ok
        })
    }

    /// Orbit counts per degree.
    pub fn summary(&self) -> Vec<OrbitCounts> {
        (-1..=self.top_dim())
            .map(|d| {
                let g = self.generators(d);
                OrbitCounts {
                    degree: d,
                    free: g.iter().filter(|x| x.kind == OrbitKind::Free).count(),
                    order_two: g.iter().filter(|x| x.kind == OrbitKind::OrderTwo).count(),
                    gamma: g.iter().filter(|x| x.part == Part::Gamma).count(),
                    delta: g.iter().filter(|x| x.part == Part::Delta).count(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCounts {
    pub degree: isize,
    pub free: usize,
    pub order_two: usize,
    pub gamma: usize,
    pub delta: usize,
}

/// `C / G` with orbit generators in order of representative.
pub fn quotient_complex(complex: &FreeChainComplex, action: &YoungAction) -> Result<PresentedChainComplex> {
    if complex.spec().vertex_count() != action.n_vertices() {
        return Err(CoreError::InvalidInput(format!(
            "{} has {} vertices, the partition covers {}",
            complex.spec(),
            complex.spec().vertex_count(),
            action.n_vertices()
        )));
    }
    let top = complex.top_dim();
    let maps = (-1..=top)
        .map(|d| OrbitMap::build(complex, action, d))
        .collect::<Result<Vec<_>>>()?;
    let generators: Vec<Vec<Generator>> = maps
        .iter()
        .map(|m| {
            m.classes
                .iter()
                .map(|c| Generator {
                    rep: c.representative.clone(),
                    kind: c.kind,
                    part: c.part,
                })
                .collect()
        })
        .collect();
    let index = generators
        .iter()
        .map(|gs| gs.iter().enumerate().map(|(i, g)| (g.rep.clone(), i as u32)).collect())
        .collect();
    let table = complex.table();
    let two = BigInt::from(2);
    let mut boundaries = Vec::new();
    for d in 0..=top {
        let below = &maps[d as usize];
        let mut cols = Vec::new();
        for g in &generators[(d + 1) as usize] {
            let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
            for i in 0..g.rep.len() {
                let face = g.rep.without(i);
                let Some(f) = table.index_of(&face) else {
                    if complex.spec().is_relative() {
                        continue;
                    }
                    return Err(CoreError::Invariant(format!("face {face} missing")));
                };
                let (o, s) = below.of_face[f];
                let sign = if (i % 2 == 0) == (s > 0) { 1 } else { -1 };
                *acc.entry(o).or_insert_with(BigInt::zero) += sign;
            }
            let col: Vec<(usize, BigInt)> = acc
                .into_iter()
                .map(|(o, v)| {
                    let v = if below.classes[o as usize].kind == OrbitKind::OrderTwo {
                        v.mod_floor(&two)
                    } else {
                        v
                    };
                    (o as usize, v)
                })
                .filter(|(_, v)| !v.is_zero())
                .collect();
            cols.push(col);
        }
        boundaries.push(SparseIntMatrix::from_columns(below.classes.len(), cols)?);
    }
    Ok(PresentedChainComplex {
        generators,
        index,
        boundaries,
    })
}

/// The two summands of a quotient of a matching complex: the free
/// gamma-part and the order-two delta-part.
#[derive(Debug, Clone)]
pub struct SplitDecomposition {
    /// indexed by `d + 1`
    pub gamma_reps: Vec<Vec<Simplex>>,
    pub delta_reps: Vec<Vec<Simplex>>,
    /// indexed by `d`
    pub gamma_boundaries: Vec<SparseIntMatrix>,
    /// entries 0/1, to be read over the field with two elements
    pub delta_boundaries: Vec<SparseIntMatrix>,
}

impl SplitDecomposition {
    pub fn top_dim(&self) -> isize {
        self.gamma_reps.len() as isize - 2
    }

    /// Checks that `kappa-hat` maps the gamma summand onto the chain complex
    /// of `bd` bijectively and commutes with the boundaries.
    pub fn gamma_matches(&self, bd: &FreeChainComplex, action: &YoungAction) -> Result<bool> {
        let table = bd.table();
        let mut perms: Vec<Vec<(usize, i8)>> = Vec::new();
        for d in -1..=self.top_dim().max(bd.top_dim()) {
            let reps = usize::try_from(d + 1)
                .ok()
                .and_then(|k| self.gamma_reps.get(k))
                .map_or(&[][..], Vec::as_slice);
            if reps.len() != table.count(d) {
                return Ok(false);
            }
            let mut p = Vec::with_capacity(reps.len());
            let mut hit = vec![false; reps.len()];
            for r in reps {
                let (tau, s) = kappa_oriented(r, action.blocks())?;
                let Some(j) = table.index_of(&tau) else {
                    return Ok(false);
                };
                if std::mem::replace(&mut hit[j], true) {
                    return Ok(false);
                }
                p.push((j, s));
            }
            perms.push(p);
        }
        for d in 0..=self.top_dim() {
            let ours = &self.gamma_boundaries[d as usize];
            let theirs = bd.boundary(d)?;
            let (pd, pb) = (&perms[(d + 1) as usize], &perms[d as usize]);
            for (j, &(tj, sj)) in pd.iter().enumerate() {
                let mut mapped: Vec<(u32, BigInt)> = ours
                    .column(j)
                    .iter()
                    .map(|(i, v)| {
                        let (ti, si) = pb[*i as usize];
                        (ti as u32, v * BigInt::from(si * sj))
                    })
                    .collect();
                mapped.sort_by_key(|e| e.0);
                if mapped != theirs.column(tj) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Splits a quotient into gamma and delta summands, checking that no
/// boundary coefficient crosses between them, that gamma generators are
/// free and delta generators have order two.
pub fn split_decomposition(q: &PresentedChainComplex) -> Result<SplitDecomposition> {
    let mut gamma_reps = Vec::new();
    let mut delta_reps = Vec::new();
    let mut gamma_idx = Vec::new();
    let mut delta_idx = Vec::new();
    for d in -1..=q.top_dim() {
        let (mut gr, mut dr, mut gi, mut di) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, g) in q.generators(d).iter().enumerate() {
            match (g.part, g.kind) {
                (Part::Gamma, OrbitKind::Free) => {
                    gr.push(g.rep.clone());
                    gi.push(i);
                }
                (Part::Delta, OrbitKind::OrderTwo) => {
                    dr.push(g.rep.clone());
                    di.push(i);
                }
                (part, kind) => {
                    return Err(CoreError::Invariant(format!(
                        "orbit of {} is {part:?} but {kind:?}",
                        g.rep
                    )))
                }
            }
        }
        gamma_reps.push(gr);
        delta_reps.push(dr);
        gamma_idx.push(gi);
        delta_idx.push(di);
    }
    let mut gamma_boundaries = Vec::new();
    let mut delta_boundaries = Vec::new();
    for d in 0..=q.top_dim() {
        let m = q.boundary(d);
        let (k, k1) = (d as usize, d as usize + 1);
        let part_below: Vec<Part> = q.generators(d - 1).iter().map(|g| g.part).collect();
        for (j, g) in q.generators(d).iter().enumerate() {
            if m.column(j).iter().any(|(i, _)| part_below[*i as usize] != g.part) {
                return Err(CoreError::Invariant(format!(
                    "boundary of {} crosses between the summands",
                    g.rep
                )));
            }
        }
        gamma_boundaries.push(m.submatrix(&gamma_idx[k], &gamma_idx[k1]));
        delta_boundaries.push(m.submatrix(&delta_idx[k], &delta_idx[k1]));
    }
    Ok(SplitDecomposition {
        gamma_reps,
        delta_reps,
        gamma_boundaries,
        delta_boundaries,
    })
}

/// Default largest `N` for which [`subcomplex_cg_basis`] runs.
pub const CG_VERTEX_CAP: usize = 8;

/// Hermite basis of `C_d^G`, the span of `sigma - g(sigma)`.
pub fn subcomplex_cg_basis(
    complex: &FreeChainComplex,
    action: &YoungAction,
    d: isize,
    vertex_cap: usize,
) -> Result<HermiteBasis> {
    if action.n_vertices() > vertex_cap {
        return Err(CoreError::ResourceLimit(format!(
            "C^G basis limited to {vertex_cap} vertices"
        )));
    }
    let table = complex.table();
    let faces = table.faces(d);
    let mut gens = Vec::new();
    for (i, sigma) in faces.iter().enumerate() {
        for g in action.generators() {
            let (img, s) = action.apply_unchecked(g, sigma);
            let j = table
                .index_of(&img)
                .ok_or_else(|| CoreError::InvalidInput(format!("{} is not invariant", complex.spec())))?;
            let mut v: BTreeMap<u32, BigInt> = BTreeMap::new();
            *v.entry(i as u32).or_insert_with(BigInt::zero) += 1;
            *v.entry(j as u32).or_insert_with(BigInt::zero) -= s;
            let v: Vec<(u32, BigInt)> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            if !v.is_empty() {
                gens.push(v);
            }
        }
    }
    Ok(HermiteBasis::from_generators(faces.len(), gens)?)
}

/// Convenience: the matching complex on `N` vertices with a Young action.
pub fn matching_with_action(blocks: Blocks) -> Result<(FreeChainComplex, YoungAction)> {
    let complex = FreeChainComplex::build(&ComplexSpec::Matching(blocks.total()))?;
    Ok((complex, YoungAction::new(blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Simplex {
        text.parse().unwrap()
    }

    fn action(text: &str) -> YoungAction {
        YoungAction::new(text.parse().unwrap())
    }

    #[test]
    fn act_examples() {
        let a = action("1,2/3,4");
        let g: Perm = vec![0, 2, 1, 4, 3];
        let sigma = OrientedSimplex::positive(s("1-3 2-4"));
        assert_eq!(a.act(&g, &sigma).unwrap(), sigma.clone().negated());
        assert_eq!(a.act(&a.identity(), &sigma).unwrap(), sigma);
        assert!(a.act(&[0, 3, 2, 1, 4], &sigma).is_err());
    }

    #[test]
    fn orbits_of_matching_four() {
        let (m4, a) = matching_with_action("1,2/3,4".parse().unwrap()).unwrap();
        let classes = orbit_decompose(&m4, &a, 1).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].representative, s("1-2 3-4"));
        assert_eq!(classes[1].representative, s("1-3 2-4"));
        assert_eq!(classes[1].size, 2);
        assert_eq!((classes[0].kind, classes[0].part), (OrbitKind::Free, Part::Gamma));
        assert_eq!((classes[1].kind, classes[1].part), (OrbitKind::OrderTwo, Part::Delta));
        let q = quotient_complex(&m4, &a).unwrap();
        assert!(q.check_d_squared());
        let split = split_decomposition(&q).unwrap();
        assert_eq!(split.gamma_reps[2], vec![s("1-2 3-4")]);
        assert_eq!(split.delta_reps[2], vec![s("1-3 2-4")]);
    }

    #[test]
    fn point_has_a_free_orbit() {
        let (m2, a) = matching_with_action("1,2".parse().unwrap()).unwrap();
        let classes = orbit_decompose(&m2, &a, 0).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].kind, OrbitKind::Free);
        assert!(subcomplex_cg_basis(&m2, &a, 0, CG_VERTEX_CAP).unwrap().rank() == 0);
    }

    #[test]
    fn group_elements_and_order() {
        let a = action("1,2,3/4,5");
        assert_eq!(a.group_order(), BigInt::from(12));
        let els = a.elements(100).unwrap();
        assert_eq!(els.len(), 12);
        assert!(els.iter().all(|g| a.is_block_preserving(g)));
        assert!(a.elements(10).is_err());
    }

    #[test]
    fn kappa_round_trip_on_single_orbit() {
        let a = action("1,2/3,4/5,6");
        let q = project_chain(&ChainVector::from_simplex(&OrientedSimplex::positive(s("1-3 5-6"))), &a).unwrap();
        let c = kappa_iso(&q, &a).unwrap();
        assert_eq!(c.terms().next().unwrap().0, &s("1-2 3-3"));
        assert_eq!(kappa_inverse(&c, &a).unwrap(), q);
    }

    #[test]
    fn cg_rank_of_matching_four() {
        let (m4, a) = matching_with_action("1,2/3,4".parse().unwrap()).unwrap();
        assert_eq!(subcomplex_cg_basis(&m4, &a, 1, CG_VERTEX_CAP).unwrap().rank(), 2);
        let (m9, a9) = matching_with_action(Blocks::consecutive(&"3^3".parse().unwrap()).unwrap()).unwrap();
        assert!(matches!(
            subcomplex_cg_basis(&m9, &a9, 0, CG_VERTEX_CAP),
            Err(CoreError::ResourceLimit(_))
        ));
    }
}
