//! Matching complexes, bounded-degree graph complexes and the parallel-edge
//! split of a matching complex under a block partition.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{CoreError, Result};

/// Vertex index, 1-based.
pub type Vertex = u8;

pub const MAX_VERTICES: usize = 250;

/// An edge `a-b` with `a <= b`; a loop when `a == b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: Vertex,
    pub b: Vertex,
}

impl Edge {
    /// Edge between `x` and `y` in either order.
    pub fn new(x: Vertex, y: Vertex) -> Self {
        if x <= y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl FromStr for Edge {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::InvalidInput(format!("bad edge token {s:?}"));
        let (x, y) = s.split_once('-').ok_or_else(bad)?;
        let x: Vertex = x.trim().parse().map_err(|_| bad())?;
        let y: Vertex = y.trim().parse().map_err(|_| bad())?;
        if x == 0 || y == 0 {
            return Err(bad());
        }
        Ok(Edge::new(x, y))
    }
}

pub type EdgeList = SmallVec<[Edge; 8]>;

/// A face, identified with its strictly increasing list of edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Simplex(EdgeList);

impl Simplex {
    pub fn empty() -> Self {
        Simplex(EdgeList::new())
    }

    /// Builds a simplex from edges that are already strictly increasing.
    pub fn from_sorted(edges: EdgeList) -> Result<Self> {
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::InvalidInput("edges are not strictly increasing".into()));
        }
        Ok(Simplex(edges))
    }

    /// Sorts the edges; rejects duplicates.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut e: EdgeList = edges.into_iter().collect();
        e.sort_unstable();
        Self::from_sorted(e)
    }

    pub(crate) fn from_sorted_unchecked(edges: EdgeList) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Simplex(edges)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|edges| - 1`; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn max_vertex(&self) -> Vertex {
        self.0.iter().map(|e| e.b).max().unwrap_or(0)
    }

    /// The face with edge `i` removed.
    pub fn without(&self, i: usize) -> Simplex {
        let mut e = self.0.clone();
        e.remove(i);
        Simplex(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.binary_search(e).is_ok()
    }
}

impl fmt::Display for Simplex {
    /// Space-separated `a-b` tokens; the empty simplex prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Simplex {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" {
            return Ok(Simplex::empty());
        }
        Simplex::from_edges(s.split_whitespace().map(str::parse).collect::<Result<Vec<Edge>>>()?)
    }
}

/// Degree bounds `(lambda_1, ..., lambda_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeVector(Vec<u8>);

impl DegreeVector {
    pub fn new(lambda: Vec<u8>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() > MAX_VERTICES {
            return Err(CoreError::InvalidInput(format!(
                "degree vector needs between 1 and {MAX_VERTICES} entries"
            )));
        }
        Ok(Self(lambda))
    }

    /// `v` repeated `n` times.
    pub fn constant(n: usize, v: u8) -> Result<Self> {
        Self::new(vec![v; n])
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `N = sum lambda_i`.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }
}

impl fmt::Display for DegreeVector {
    /// Run-length form such as `2^6,1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j - i == 1 {
                write!(f, "{}", self.0[i])?;
            } else {
                write!(f, "{}^{}", self.0[i], j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for DegreeVector {
    type Err = CoreError;

    /// Comma-separated tokens `v` or `v^k`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::InvalidInput(format!("bad degree vector {s:?}"));
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim) {
            let (v, k) = match tok.split_once('^') {
                Some((v, k)) => (v, k.trim().parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let v: u8 = v.trim().parse().map_err(|_| bad())?;
            if k == 0 || out.len() + k > MAX_VERTICES {
                return Err(bad());
            }
            out.extend(std::iter::repeat(v).take(k));
        }
        Self::new(out)
    }
}

fn check_total(lambda: &DegreeVector) -> Result<()> {
    if lambda.total() == 0 || lambda.total() > MAX_VERTICES {
        return Err(CoreError::InvalidInput(format!(
            "partition of {} vertices (allowed 1 to {MAX_VERTICES})",
            lambda.total()
        )));
    }
    Ok(())
}

/// An ordered partition `U_1, ..., U_n` of `[N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Blocks {
    blocks: Vec<Vec<Vertex>>,
    block_of: Vec<u8>,
}

impl Blocks {
    /// Validates that the blocks partition `[N]`; each block is sorted.
    pub fn new(mut blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        let total: usize = blocks.iter().map(Vec::len).sum();
        if blocks.is_empty() || blocks.len() > MAX_VERTICES || total > MAX_VERTICES {
            return Err(CoreError::InvalidInput("partition is empty or too large".into()));
        }
        let mut block_of = vec![u8::MAX; total + 1];
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            for &v in b.iter() {
                if v == 0 || v as usize > total || block_of[v as usize] != u8::MAX {
                    return Err(CoreError::InvalidInput(format!(
                        "blocks do not partition [1, {total}] (vertex {v})"
                    )));
                }
                block_of[v as usize] = i as u8;
            }
        }
        Ok(Self { blocks, block_of })
    }

    /// `U_i` as consecutive ranges.
    pub fn consecutive(lambda: &DegreeVector) -> Result<Self> {
        check_total(lambda)?;
        let mut next = 1u8;
        let blocks = lambda
            .values()
            .iter()
            .map(|&k| {
                let b: Vec<Vertex> = (next..next + k).collect();
                next += k;
                b
            })
            .collect();
        Self::new(blocks)
    }

    /// Round-robin assignment: vertices `1..=n` go to blocks `1..=n`, the
    /// next round to the blocks with room left, and so on. For `2^7` this
    /// gives `U_i = {i, i + 7}`.
    pub fn interleaved(lambda: &DegreeVector) -> Result<Self> {
        check_total(lambda)?;
        let mut blocks: Vec<Vec<Vertex>> = vec![Vec::new(); lambda.n()];
        let mut next = 1u8;
        let rounds = lambda.values().iter().copied().max().unwrap_or(0);
        for r in 0..rounds {
            for (i, &k) in lambda.values().iter().enumerate() {
                if k > r {
                    blocks[i].push(next);
                    next += 1;
                }
            }
        }
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.block_of.len() - 1
    }

    pub fn lambda(&self) -> DegreeVector {
        DegreeVector(self.blocks.iter().map(|b| b.len() as u8).collect())
    }

    /// Block index (0-based) of vertex `v`.
    pub fn block_of(&self, v: Vertex) -> usize {
        self.block_of[v as usize] as usize
    }

    /// `kappa` on a single edge: the pair of (1-based) block labels.
    pub fn kappa_edge(&self, e: Edge) -> Edge {
        Edge::new(self.block_of(e.a) as Vertex + 1, self.block_of(e.b) as Vertex + 1)
    }
}

impl fmt::Display for Blocks {
    /// Blocks as `1,8/2,9/...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("/"))
    }
}

impl FromStr for Blocks {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CoreError::InvalidInput(format!("bad block list {s:?}"));
        let blocks = s
            .split('/')
            .map(|b| {
                b.split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<Vertex>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Blocks::new(blocks)
    }
}

/// Which complex to build.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComplexSpec {
    /// `M_N`.
    Matching(usize),
    /// `BD_n^lambda`.
    Bounded(DegreeVector),
    /// Matchings on which `kappa` is injective.
    Gamma(Blocks),
    /// Matchings with two distinct edges of equal `kappa` image; a relative
    /// complex (boundary faces outside it are dropped, no augmentation).
    Delta(Blocks),
    /// `M_N` without the vertex `{N-1, N}`.
    MatchingMinusEdge(usize),
}

impl ComplexSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ComplexSpec::Matching(n) if *n > MAX_VERTICES => {
                Err(CoreError::InvalidInput(format!("at most {MAX_VERTICES} vertices")))
            }
            ComplexSpec::MatchingMinusEdge(n) if *n < 2 || *n > MAX_VERTICES => Err(CoreError::InvalidInput(
                format!("matching_minus_e needs 2 to {MAX_VERTICES} vertices"),
            )),
            _ => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            ComplexSpec::Matching(n) | ComplexSpec::MatchingMinusEdge(n) => *n,
            ComplexSpec::Bounded(l) => l.n(),
            ComplexSpec::Gamma(b) | ComplexSpec::Delta(b) => b.total(),
        }
    }

    pub fn is_relative(&self) -> bool {
        matches!(self, ComplexSpec::Delta(_))
    }

    /// The deleted 0-cell of `matching_minus_e(N)`.
    pub fn deleted_edge(n: usize) -> Edge {
        Edge::new((n - 1) as Vertex, n as Vertex)
    }

    fn caps(&self) -> Vec<u8> {
        let n = self.vertex_count();
        match self {
            ComplexSpec::Bounded(l) => std::iter::once(0).chain(l.values().iter().copied()).collect(),
            _ => vec![1; n + 1],
        }
    }

    /// Candidate edges in canonical order.
    fn candidate_edges(&self) -> Vec<Edge> {
        let n = self.vertex_count() as Vertex;
        let caps = self.caps();
        let loops = matches!(self, ComplexSpec::Bounded(_));
        let skip = match self {
            ComplexSpec::MatchingMinusEdge(n) => Some(Self::deleted_edge(*n)),
            _ => None,
        };
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a..=n {
                let e = Edge { a, b };
                let ok = if a == b {
                    loops && caps[a as usize] >= 2
                } else {
                    caps[a as usize] >= 1 && caps[b as usize] >= 1
                };
                if ok && Some(e) != skip {
                    out.push(e);
                }
            }
        }
        out
    }

    /// Short identifier such as `matching(7)` or `bounded(7;2^7)`.
    pub fn id(&self) -> String {
        match self {
            ComplexSpec::Matching(n) => format!("matching({n})"),
            ComplexSpec::MatchingMinusEdge(n) => format!("matching_minus_e({n})"),
            ComplexSpec::Bounded(l) => format!("bounded({};{l})", l.n()),
            ComplexSpec::Gamma(b) => format!("gamma({};{b})", b.total()),
            ComplexSpec::Delta(b) => format!("delta({};{b})", b.total()),
        }
    }
}

impl fmt::Display for ComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

fn check_range(spec: &ComplexSpec, sigma: &Simplex) -> Result<()> {
    let n = spec.vertex_count();
    if sigma.edges().iter().any(|e| e.a == 0 || e.b as usize > n) {
        return Err(CoreError::InvalidInput(format!(
            "simplex {sigma} has a vertex outside [1, {n}]"
        )));
    }
    Ok(())
}

fn has_parallel_pair(sigma: &[Edge], blocks: &Blocks) -> bool {
    let mut images: SmallVec<[Edge; 8]> = sigma.iter().map(|&e| blocks.kappa_edge(e)).collect();
    images.sort_unstable();
    images.windows(2).any(|w| w[0] == w[1])
}

/// Membership test.
pub fn is_face(spec: &ComplexSpec, sigma: &Simplex) -> Result<bool> {
    check_range(spec, sigma)?;
    let caps = spec.caps();
    let mut deg = vec![0u8; caps.len()];
    for e in sigma.edges() {
        if e.is_loop() {
            if !matches!(spec, ComplexSpec::Bounded(_)) {
                return Ok(false);
            }
            deg[e.a as usize] += 2;
        } else {
            deg[e.a as usize] += 1;
            deg[e.b as usize] += 1;
        }
    }
    if deg.iter().zip(&caps).any(|(d, c)| d > c) {
        return Ok(false);
    }
    Ok(match spec {
        ComplexSpec::Gamma(b) => !has_parallel_pair(sigma.edges(), b),
        ComplexSpec::Delta(b) => has_parallel_pair(sigma.edges(), b),
        ComplexSpec::MatchingMinusEdge(n) => !sigma.contains(&ComplexSpec::deleted_edge(*n)),
        _ => true,
    })
}

struct Dfs<'a, F: FnMut(&[Edge])> {
    edges: Vec<Edge>,
    caps: Vec<u8>,
    deg: Vec<u8>,
    gamma: Option<&'a Blocks>,
    delta: Option<&'a Blocks>,
    images: Vec<Edge>,
    stack: Vec<Edge>,
    target: usize,
    visit: F,
}

impl<F: FnMut(&[Edge])> Dfs<'_, F> {
    fn run(&mut self, start: usize) {
        if self.stack.len() == self.target {
            if self.delta.map_or(true, |b| has_parallel_pair(&self.stack, b)) {
                (self.visit)(&self.stack);
            }
            return;
        }
        let remaining = self.target - self.stack.len();
        for i in start..self.edges.len() {
            if self.edges.len() - i < remaining {
                break;
            }
            let e = self.edges[i];
            let (a, b) = (e.a as usize, e.b as usize);
            if e.is_loop() {
                if self.deg[a] + 2 > self.caps[a] {
                    continue;
                }
            } else if self.deg[a] + 1 > self.caps[a] || self.deg[b] + 1 > self.caps[b] {
                continue;
            }
            let image = self.gamma.map(|bl| bl.kappa_edge(e));
            if let Some(img) = image {
                if self.images.contains(&img) {
                    continue;
                }
                self.images.push(img);
            }
            if e.is_loop() {
                self.deg[a] += 2;
            } else {
                self.deg[a] += 1;
                self.deg[b] += 1;
            }
            self.stack.push(e);
            self.run(i + 1);
            self.stack.pop();
            if e.is_loop() {
                self.deg[a] -= 2;
            } else {
                self.deg[a] -= 1;
                self.deg[b] -= 1;
            }
            if image.is_some() {
                self.images.pop();
            }
        }
    }
}

/// Calls `visit` on every `d`-face in lexicographic order without
/// materializing the list.
pub fn for_each_face<F: FnMut(&[Edge])>(spec: &ComplexSpec, d: isize, visit: F) {
    if d < -1 {
        return;
    }
    let target = (d + 1) as usize;
    let (gamma, delta) = match spec {
        ComplexSpec::Gamma(b) => (Some(b), None),
        ComplexSpec::Delta(b) => (None, Some(b)),
        _ => (None, None),
    };
    let caps = spec.caps();
    let mut dfs = Dfs {
        edges: spec.candidate_edges(),
        deg: vec![0; caps.len()],
        caps,
        gamma,
        delta,
        images: Vec::new(),
        stack: Vec::with_capacity(target),
        target,
        visit,
    };
    dfs.run(0);
}

/// All `d`-faces in lexicographic order.
pub fn enumerate_faces(spec: &ComplexSpec, d: isize) -> Vec<Simplex> {
    let mut out = Vec::new();
    for_each_face(spec, d, |s| out.push(Simplex::from_sorted_unchecked(s.iter().copied().collect())));
    out
}

pub fn count_faces(spec: &ComplexSpec, d: isize) -> usize {
    let mut n = 0usize;
    for_each_face(spec, d, |_| n += 1);
    n
}

/// `f_{-1}, f_0, ...` up to the top dimension. For the relative delta
/// kind `f_{-1}` is 0.
pub fn face_counts(spec: &ComplexSpec) -> Vec<usize> {
    let caps = spec.caps();
    let max_edges = caps.iter().map(|&c| c as usize).sum::<usize>() / 2;
    let mut out: Vec<usize> = (-1..max_edges as isize).map(|d| count_faces(spec, d)).collect();
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Faces of every dimension with index lookup.
#[derive(Debug, Clone)]
pub struct FaceTable {
    spec: ComplexSpec,
    faces: Vec<Vec<Simplex>>,
    index: Vec<FxHashMap<Simplex, u32>>,
}

impl FaceTable {
    pub fn build(spec: &ComplexSpec) -> Result<Self> {
        spec.validate()?;
        let counts = face_counts(spec);
        let mut faces = Vec::with_capacity(counts.len());
        for d in 0..counts.len() {
            faces.push(enumerate_faces(spec, d as isize - 1));
        }
        let index = faces
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect())
            .collect();
        Ok(Self {
            spec: spec.clone(),
            faces,
            index,
        })
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    /// Highest dimension with a face (at least -1).
    pub fn top_dim(&self) -> isize {
        self.faces.len() as isize - 2
    }

    pub fn faces(&self, d: isize) -> &[Simplex] {
        usize::try_from(d + 1)
            .ok()
            .and_then(|k| self.faces.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: isize) -> usize {
        self.faces(d).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, sigma: &Simplex) -> Option<usize> {
        self.index
            .get(sigma.len())
            .and_then(|m| m.get(sigma))
            .map(|&i| i as usize)
    }
}

/// Face listing: a `dim d` header per dimension, then one simplex per line.
pub fn write_faces<W: Write>(table: &FaceTable, dims: &[isize], out: &mut W) -> io::Result<()> {
    for &d in dims {
        writeln!(out, "dim {d}")?;
        for s in table.faces(d) {
            writeln!(out, "{s}")?;
        }
    }
    Ok(())
}

/// Parses the output of [`write_faces`].
pub fn read_faces(text: &str) -> Result<Vec<(isize, Vec<Simplex>)>> {
    let mut out: Vec<(isize, Vec<Simplex>)> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(d) = line.strip_prefix("dim ") {
            let d = d
                .trim()
                .parse()
                .map_err(|_| CoreError::InvalidInput(format!("bad header {line:?}")))?;
            out.push((d, Vec::new()));
        } else {
            let section = out
                .last_mut()
                .ok_or_else(|| CoreError::InvalidInput("face before any dim header".into()))?;
            section.1.push(line.parse()?);
        }
    }
    Ok(out)
}

/// Sorts edges in place and returns the parity of the sorting permutation
/// (`true` = odd), or `None` if two edges coincide.
pub fn sort_with_parity(edges: &mut [Edge]) -> Option<bool> {
    let mut odd = false;
    for i in 1..edges.len() {
        let mut j = i;
        while j > 0 && edges[j - 1] > edges[j] {
            edges.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if edges.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

/// `kappa` applied to the oriented simplex `sigma`: the image simplex and
/// the sign picked up by re-sorting.
pub fn kappa_oriented(sigma: &Simplex, blocks: &Blocks) -> Result<(Simplex, i8)> {
    if sigma.max_vertex() as usize > blocks.total() {
        return Err(CoreError::InvalidInput(format!("simplex {sigma} exceeds the partition")));
    }
    let mut img: EdgeList = sigma.edges().iter().map(|&e| blocks.kappa_edge(e)).collect();
    match sort_with_parity(&mut img) {
        Some(odd) => Ok((Simplex::from_sorted_unchecked(img), if odd { -1 } else { 1 })),
        None => Err(CoreError::ParallelEdge(sigma.to_string())),
    }
}

pub fn kappa_simplex(sigma: &Simplex, blocks: &Blocks) -> Result<Simplex> {
    kappa_oriented(sigma, blocks).map(|(s, _)| s)
}

/// A matching `sigma` on `[N]` with `kappa(sigma) = tau`, built by giving
/// each endpoint the smallest unused vertex of its block.
pub fn kappa_fiber_representative(tau: &Simplex, blocks: &Blocks) -> Result<Simplex> {
    let lambda = blocks.lambda();
    if !is_face(&ComplexSpec::Bounded(lambda), tau)? {
        return Err(CoreError::InvalidInput(format!(
            "{tau} violates the degree bounds of the partition"
        )));
    }
    let mut used = vec![0usize; blocks.n_blocks()];
    let mut take = |i: Vertex| {
        let b = i as usize - 1;
        let v = blocks.blocks()[b][used[b]];
        used[b] += 1;
        v
    };
    let mut edges = EdgeList::new();
    for e in tau.edges() {
        let x = take(e.a);
        let y = take(e.b);
        edges.push(Edge::new(x, y));
    }
    edges.sort_unstable();
    Simplex::from_sorted(edges)
}
