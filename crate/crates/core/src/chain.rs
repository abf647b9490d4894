//! Oriented simplices, integer chains, boundary operators and wedge products.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use matchtor_linalg::SparseIntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::graph::{sort_with_parity, ComplexSpec, Edge, EdgeList, FaceTable, Simplex, Vertex};

/// A simplex with an orientation sign relative to its canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedSimplex {
    pub simplex: Simplex,
    pub sign: i8,
}

impl OrientedSimplex {
    pub fn positive(simplex: Simplex) -> Self {
        Self { simplex, sign: 1 }
    }

    /// `e_1 ^ e_2 ^ ... ^ e_k` in the given order, canonicalized.
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut e: EdgeList = edges.into_iter().collect();
        let odd = sort_with_parity(&mut e)
            .ok_or_else(|| CoreError::InvalidInput("repeated edge in a wedge".into()))?;
        Ok(Self {
            simplex: Simplex::from_sorted(e)?,
            sign: if odd { -1 } else { 1 },
        })
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    /// Re-canonicalizes; the identity on canonical input.
    pub fn canonicalize(&self) -> Self {
        let mut e: EdgeList = self.simplex.edges().iter().copied().collect();
        let odd = sort_with_parity(&mut e).expect("simplex edges are distinct");
        Self {
            simplex: Simplex::from_sorted(e).expect("sorted"),
            sign: if odd { -self.sign } else { self.sign },
        }
    }
}

/// A sparse integer combination of simplices of one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainVector {
    degree: isize,
    terms: BTreeMap<Simplex, BigInt>,
}

impl ChainVector {
    pub fn zero(degree: isize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(degree: isize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OrientedSimplex, BigInt)>,
    {
        let mut c = Self::zero(degree);
        for (s, k) in terms {
            c.add_term(&s, &k)?;
        }
        Ok(c)
    }

    /// `coef * sigma` as a chain.
    pub fn from_simplex(sigma: &OrientedSimplex) -> Self {
        let mut c = Self::zero(sigma.simplex.dim());
        c.add_term(sigma, &BigInt::one()).expect("degree matches");
        c
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sigma: &Simplex) -> BigInt {
        self.terms.get(sigma).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, sigma: &OrientedSimplex, coef: &BigInt) -> Result<()> {
        if sigma.simplex.dim() != self.degree {
            return Err(CoreError::InvalidInput(format!(
                "simplex {} in a degree {} chain",
                sigma.simplex, self.degree
            )));
        }
        if coef.is_zero() {
            return Ok(());
        }
        let k = if sigma.sign < 0 { -coef } else { coef.clone() };
        self.add_raw(&sigma.simplex, k);
        Ok(())
    }

    fn add_raw(&mut self, sigma: &Simplex, k: BigInt) {
        match self.terms.get_mut(sigma) {
            Some(v) => {
                *v += k;
                if v.is_zero() {
                    self.terms.remove(sigma);
                }
            }
            None => {
                self.terms.insert(sigma.clone(), k);
            }
        }
    }

    pub fn add(&self, other: &ChainVector) -> Result<ChainVector> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (s, k) in &other.terms {
            out.add_raw(s, k.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ChainVector) -> Result<ChainVector> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> ChainVector {
        if k.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * k)).collect(),
        }
    }

    fn check_degree(&self, other: &ChainVector) -> Result<()> {
        if self.degree != other.degree {
            return Err(CoreError::InvalidInput(format!(
                "adding chains of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Simplex) -> bool) -> ChainVector {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, k)| (s.clone(), k.clone()))
                .collect(),
        }
    }

    pub fn boundary(&self) -> ChainVector {
        let mut out = Self::zero(self.degree - 1);
        if self.degree < 0 {
            return out;
        }
        for (s, k) in &self.terms {
            for (i, _) in s.edges().iter().enumerate() {
                let kk = if i % 2 == 0 { k.clone() } else { -k };
                out.add_raw(&s.without(i), kk);
            }
        }
        out
    }

    /// Vertices touched by any term.
    pub fn support_vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self
            .terms
            .keys()
            .flat_map(|s| s.edges().iter().flat_map(|e| [e.a, e.b]))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Dense coordinates over the `degree`-faces of `table`.
    pub fn to_dense(&self, table: &FaceTable) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); table.count(self.degree)];
        for (s, k) in &self.terms {
            let i = table
                .index_of(s)
                .ok_or_else(|| CoreError::InvalidInput(format!("{s} is not a face of {}", table.spec())))?;
            v[i] = k.clone();
        }
        Ok(v)
    }

    pub fn from_dense(table: &FaceTable, degree: isize, v: &[BigInt]) -> Result<ChainVector> {
        let faces = table.faces(degree);
        if faces.len() != v.len() {
            return Err(CoreError::InvalidInput(format!(
                "vector of length {} for {} faces",
                v.len(),
                faces.len()
            )));
        }
        Ok(Self {
            degree,
            terms: faces
                .iter()
                .zip(v)
                .filter(|(_, k)| !k.is_zero())
                .map(|(s, k)| (s.clone(), k.clone()))
                .collect(),
        })
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|k| k.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for ChainVector {
    /// Chain file format: a `chain degree d` header, then one
    /// `<coefficient> <edges>` line per term in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "chain degree {}", self.degree)?;
        for (s, k) in &self.terms {
            writeln!(f, "{k} {s}")?;
        }
        Ok(())
    }
}

impl FromStr for ChainVector {
    type Err = CoreError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| CoreError::InvalidInput("empty chain file".into()))?;
        let degree: isize = header
            .strip_prefix("chain degree ")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| CoreError::InvalidInput(format!("bad chain header {header:?}")))?;
        let mut c = Self::zero(degree);
        for line in lines {
            let (k, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let k: BigInt = k
                .parse()
                .map_err(|_| CoreError::InvalidInput(format!("bad coefficient in {line:?}")))?;
            let edges = if rest.trim() == "()" {
                Vec::new()
            } else {
                rest.split_whitespace().map(str::parse).collect::<Result<Vec<Edge>>>()?
            };
            c.add_term(&OrientedSimplex::from_edges(edges)?, &k)?;
        }
        Ok(c)
    }
}

/// Alternating face sum; a vertex maps to the empty simplex.
pub fn boundary_of_simplex(sigma: &OrientedSimplex) -> ChainVector {
    ChainVector::from_simplex(sigma).boundary()
}

fn wedge_impl(u: &ChainVector, v: &ChainVector) -> ChainVector {
    let mut out = ChainVector::zero(u.degree + v.degree + 1);
    for (s, a) in &u.terms {
        for (t, b) in &v.terms {
            let mut e: EdgeList = s.edges().iter().chain(t.edges()).copied().collect();
            if let Some(odd) = sort_with_parity(&mut e) {
                let k = a * b;
                out.add_raw(&Simplex::from_sorted_unchecked(e), if odd { -k } else { k });
            }
        }
    }
    out
}

/// `u ^ v` for chains on disjoint vertex sets.
pub fn wedge_chains(u: &ChainVector, v: &ChainVector) -> Result<ChainVector> {
    let a = u.support_vertices();
    if v.support_vertices().iter().any(|x| a.binary_search(x).is_ok()) {
        return Err(CoreError::InvalidInput("wedge factors share a vertex".into()));
    }
    Ok(wedge_impl(u, v))
}

/// `u ^ v` without the vertex-disjointness requirement; products of terms
/// that share an edge vanish. Used for chains on graphs with degree bounds
/// above one, where factors may meet at a vertex.
pub fn wedge_chains_edge_disjoint(u: &ChainVector, v: &ChainVector) -> ChainVector {
    wedge_impl(u, v)
}

/// True if consecutive matrices compose to zero (`m[k] * m[k+1] = 0`).
pub fn check_composition(matrices: &[SparseIntMatrix]) -> bool {
    matrices
        .windows(2)
        .all(|w| w[0].cols() == w[1].rows() && w[0].mul(&w[1]).map_or(false, |p| p.is_zero()))
}

/// The augmented chain complex of one of the graph complexes.
#[derive(Debug)]
pub struct FreeChainComplex {
    table: FaceTable,
    boundaries: Vec<OnceLock<SparseIntMatrix>>,
}

impl FreeChainComplex {
    pub fn build(spec: &ComplexSpec) -> Result<Self> {
        Ok(Self::from_table(FaceTable::build(spec)?))
    }

    pub fn from_table(table: FaceTable) -> Self {
        let n = (table.top_dim() + 2).max(0) as usize;
        Self {
            table,
            boundaries: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn spec(&self) -> &ComplexSpec {
        self.table.spec()
    }

    pub fn table(&self) -> &FaceTable {
        &self.table
    }

    pub fn top_dim(&self) -> isize {
        self.table.top_dim()
    }

    /// `d_d : C_d -> C_{d-1}`; the zero map outside `0..=top_dim`.
    pub fn boundary(&self, d: isize) -> Result<SparseIntMatrix> {
        match usize::try_from(d).ok().and_then(|k| self.boundaries.get(k)) {
            Some(cell) => {
                if let Some(m) = cell.get() {
                    return Ok(m.clone());
                }
                let m = assemble_boundary(&self.table, d)?;
                Ok(cell.get_or_init(|| m).clone())
            }
            None => Ok(SparseIntMatrix::zeros(self.table.count(d - 1), self.table.count(d))),
        }
    }

    /// Like [`Self::boundary`] but borrowing the cached matrix.
    pub fn boundary_ref(&self, d: isize) -> Result<Option<&SparseIntMatrix>> {
        let Some(cell) = usize::try_from(d).ok().and_then(|k| self.boundaries.get(k)) else {
            return Ok(None);
        };
        if cell.get().is_none() {
            let m = assemble_boundary(&self.table, d)?;
            let _ = cell.set(m);
        }
        Ok(cell.get())
    }

    pub fn check_d_squared(&self) -> Result<bool> {
        let ms = (0..=self.top_dim() + 1)
            .map(|d| self.boundary(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(check_composition(&ms))
    }

    pub fn chain_to_dense(&self, c: &ChainVector) -> Result<Vec<BigInt>> {
        c.to_dense(&self.table)
    }

    /// Boundary of a chain inside this complex (terms outside a relative
    /// complex are dropped).
    pub fn chain_boundary(&self, c: &ChainVector) -> ChainVector {
        let b = c.boundary();
        if self.spec().is_relative() {
            b.restrict(|s| self.table.index_of(s).is_some())
        } else {
            b
        }
    }
}

/// Boundary matrix in face ordinals, built column by column.
pub fn assemble_boundary(table: &FaceTable, d: isize) -> Result<SparseIntMatrix> {
    let relative = table.spec().is_relative();
    let rows = table.count(d - 1);
    let mut cols = Vec::with_capacity(table.count(d));
    for sigma in table.faces(d) {
        let mut col = Vec::with_capacity(sigma.len());
        for i in 0..sigma.len() {
            let face = sigma.without(i);
            match table.index_of(&face) {
                Some(r) => col.push((r, if i % 2 == 0 { BigInt::one() } else { -BigInt::one() })),
                None if relative => {}
                None => {
                    return Err(CoreError::Invariant(format!(
                        "face {face} of {sigma} missing from {}",
                        table.spec()
                    )))
                }
            }
        }
        cols.push(col);
    }
    Ok(SparseIntMatrix::from_columns(rows, cols)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(text: &str) -> ChainVector {
        text.parse().unwrap()
    }

    #[test]
    fn boundary_examples() {
        let s = OrientedSimplex::positive("1-2 3-4 5-6".parse().unwrap());
        assert_eq!(
            boundary_of_simplex(&s),
            chain("chain degree 1\n1 3-4 5-6\n-1 1-2 5-6\n1 1-2 3-4\n")
        );
        let v = OrientedSimplex::positive("1-2".parse().unwrap());
        assert_eq!(boundary_of_simplex(&v), chain("chain degree -1\n1 ()\n"));
    }

    #[test]
    fn canonicalization_tracks_sign() {
        let s = OrientedSimplex::from_edges(["3-4".parse().unwrap(), "1-2".parse().unwrap()]).unwrap();
        assert_eq!(s.sign, -1);
        assert_eq!(s.canonicalize(), s);
        assert!(OrientedSimplex::from_edges(["1-2".parse().unwrap(), "1-2".parse().unwrap()]).is_err());
    }

    #[test]
    fn wedge_examples() {
        let a = chain("chain degree 0\n1 1-2\n");
        let b = chain("chain degree 0\n1 3-4\n-1 4-5\n");
        assert_eq!(wedge_chains(&a, &b).unwrap(), chain("chain degree 1\n1 1-2 3-4\n-1 1-2 4-5\n"));
        assert!(wedge_chains(&a, &chain("chain degree 0\n1 2-3\n")).is_err());
        // two reduced 0-cycles on disjoint triangles give a cycle
        let u = chain("chain degree 0\n1 1-2\n-1 1-3\n");
        let v = chain("chain degree 0\n1 4-5\n-1 4-6\n");
        let w = wedge_chains(&u, &v).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.boundary().is_zero());
    }

    #[test]
    fn assembled_boundaries() {
        let m4 = FreeChainComplex::build(&ComplexSpec::Matching(4)).unwrap();
        let d1 = m4.boundary(1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (6, 3));
        assert!(d1.columns().all(|c| c.len() == 2));
        let m2 = FreeChainComplex::build(&ComplexSpec::Matching(2)).unwrap();
        assert_eq!(m2.boundary(0).unwrap().to_dense(), vec![vec![BigInt::one()]]);
        let m7 = FreeChainComplex::build(&ComplexSpec::Matching(7)).unwrap();
        let d2 = m7.boundary(2).unwrap();
        assert_eq!((d2.rows(), d2.cols()), (105, 105));
        assert!(m7.check_d_squared().unwrap());
        let mut bad = d2.clone();
        let (r, _) = bad.column(0)[0].clone();
        bad.set(r as usize, 0, BigInt::from(-1) * bad.get(r as usize, 0));
        assert!(!check_composition(&[m7.boundary(1).unwrap(), bad]));
    }

    #[test]
    fn chain_file_round_trip() {
        let text = "chain degree 1\n-3 1-2 3-4\n1 1-3 2-4\n";
        assert_eq!(chain(text).to_string(), text);
        let shuffled = chain("chain degree 1\n3 3-4 1-2\n-1 2-4 1-3\n");
        assert_eq!(shuffled.to_string(), text);
    }
}
