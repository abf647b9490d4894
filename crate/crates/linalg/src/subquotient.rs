//! Subquotients `Z / R` of a free module, maps between them, and exactness
//! of three-term sequences of induced maps.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::AbelianGroupDescriptor;
use crate::smith::{reduce, ReduceOptions, Reduction};
use crate::sparse::SparseIntMatrix;
use crate::LinalgError;

/// The group `Z / R` where `Z` is a lattice in `Z^ambient` with a fixed
/// basis and `R` a sublattice of `Z`, stored in basis coordinates.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
    basis_red: Reduction,
    relations: SparseIntMatrix,
    rel_red: Reduction,
}

fn dense_columns(rows: usize, vectors: &[Vec<BigInt>]) -> Result<SparseIntMatrix, LinalgError> {
    let cols = vectors
        .iter()
        .map(|v| {
            if v.len() != rows {
                return Err(LinalgError::Dimension(format!(
                    "vector of length {}, expected {rows}",
                    v.len()
                )));
            }
            Ok(v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, _>>()?;
    SparseIntMatrix::from_columns(rows, cols)
}

fn column_dense(m: &SparseIntMatrix, j: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); m.rows()];
    for (i, x) in m.column(j) {
        v[*i as usize] = x.clone();
    }
    v
}

impl Subquotient {
    /// `basis` must be linearly independent; every relation must lie in
    /// its span.
    pub fn new(
        ambient: usize,
        basis: Vec<Vec<BigInt>>,
        relations: &[Vec<BigInt>],
        opts: &ReduceOptions,
    ) -> Result<Self, LinalgError> {
        let opts = ReduceOptions {
            track_transforms: true,
            limits: opts.limits.clone(),
        };
        let b = dense_columns(ambient, &basis)?;
        let basis_red = reduce(&b, &opts)?;
        if basis_red.rank() != basis.len() {
            return Err(LinalgError::InvalidInput("subquotient basis is dependent".into()));
        }
        let mut rel_cols = Vec::with_capacity(relations.len());
        for r in relations {
            let x = basis_red.solve(r)?.ok_or_else(|| {
                LinalgError::Invariant("relation outside the cycle lattice".into())
            })?;
            rel_cols.push(x);
        }
        let rel = dense_columns(basis.len(), &rel_cols)?;
        let rel_red = reduce(&rel, &opts)?;
        Ok(Self {
            ambient,
            basis,
            basis_red,
            relations: rel,
            rel_red,
        })
    }

    /// Homology at the middle of `C_{d+1} -> C_d -> C_{d-1}` where the
    /// generators flagged in `order_two_in`/`order_two_out` have order two.
    ///
    /// `outgoing` is `C_d -> C_{d-1}` and `incoming` is `C_{d+1} -> C_d`.
    /// With no order-two generators this is ordinary homology.
    pub fn homology(
        outgoing: &SparseIntMatrix,
        incoming: &SparseIntMatrix,
        order_two_here: &[bool],
        order_two_below: &[bool],
        opts: &ReduceOptions,
    ) -> Result<Self, LinalgError> {
        let n = outgoing.cols();
        if incoming.rows() != n || order_two_here.len() != n || order_two_below.len() != outgoing.rows() {
            return Err(LinalgError::Dimension("inconsistent chain complex shapes".into()));
        }
        let opts_t = ReduceOptions {
            track_transforms: true,
            limits: opts.limits.clone(),
        };
        // cycles: x with outgoing x in 2 * (order-two span below)
        let twos: Vec<Vec<(usize, BigInt)>> = order_two_below
            .iter()
            .enumerate()
            .filter(|(_, t)| **t)
            .map(|(i, _)| vec![(i, BigInt::from(2))])
            .collect();
        let stacked = outgoing.hstack(&SparseIntMatrix::from_columns(outgoing.rows(), twos)?)?;
        let red = reduce(&stacked, &opts_t)?;
        let basis: Vec<Vec<BigInt>> = red
            .kernel_basis()?
            .into_iter()
            .map(|mut v| {
                v.truncate(n);
                v
            })
            .collect();
        let mut relations: Vec<Vec<BigInt>> = (0..incoming.cols()).map(|j| column_dense(incoming, j)).collect();
        for (i, _) in order_two_here.iter().enumerate().filter(|(_, t)| **t) {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(2);
            relations.push(v);
        }
        Self::new(n, basis, &relations, opts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Rank of the cycle lattice.
    pub fn lattice_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Relations in basis coordinates (`lattice_rank x #relations`).
    pub fn relations(&self) -> &SparseIntMatrix {
        &self.relations
    }

    pub fn group(&self) -> AbelianGroupDescriptor {
        AbelianGroupDescriptor::new(self.basis.len() - self.rel_red.rank(), self.rel_red.torsion_factors())
    }

    /// Coordinates of an ambient vector in the cycle basis, if it lies in `Z`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        self.basis_red.solve(v)
    }

    /// Order of the class of coordinate vector `x`; `None` for infinite.
    pub fn class_order_coords(&self, x: &[BigInt]) -> Result<Option<BigInt>, LinalgError> {
        self.rel_red.cokernel_order(x)
    }

    /// Order of the class of an ambient vector, which must lie in `Z`.
    pub fn class_order(&self, v: &[BigInt]) -> Result<Option<BigInt>, LinalgError> {
        let x = self
            .coordinates(v)?
            .ok_or_else(|| LinalgError::InvalidInput("vector is not in the cycle lattice".into()))?;
        self.class_order_coords(&x)
    }

    /// True if every column of `m` (in basis coordinates) is a relation.
    pub fn columns_vanish(&self, m: &SparseIntMatrix) -> Result<bool, LinalgError> {
        for j in 0..m.cols() {
            if !self.rel_red.contains(&column_dense(m, j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Generators of the group with their orders (`None` = infinite), as
    /// ambient vectors.
    pub fn generators(&self) -> Result<Vec<(Vec<BigInt>, Option<BigInt>)>, LinalgError> {
        let mut out = Vec::new();
        for (coords, order) in self.rel_red.cokernel_torsion_generators()? {
            out.push((self.embed(&coords), Some(order)));
        }
        let pivot_rows: Vec<usize> = self.rel_red.pivots().iter().map(|p| p.row).collect();
        for i in (0..self.basis.len()).filter(|i| !pivot_rows.contains(i)) {
            let mut y = vec![BigInt::zero(); self.basis.len()];
            y[i] = BigInt::one();
            self.rel_red.apply_left_inverse(&mut y)?;
            out.push((self.embed(&y), None));
        }
        Ok(out)
    }

    /// Ambient vector with the given basis coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in v.iter_mut().zip(b) {
                *slot += c * x;
            }
        }
        v
    }

    /// Matrix of the map induced by `f` in basis coordinates. `f` receives
    /// each basis vector of `self` and must return an element of
    /// `target`'s cycle lattice.
    pub fn induced_matrix<F>(&self, target: &Subquotient, mut f: F) -> Result<SparseIntMatrix, LinalgError>
    where
        F: FnMut(&[BigInt]) -> Result<Vec<BigInt>, LinalgError>,
    {
        let mut cols = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let image = f(b)?;
            let x = target
                .coordinates(&image)?
                .ok_or_else(|| LinalgError::Invariant("map does not send cycles to cycles".into()))?;
            cols.push(x);
        }
        dense_columns(target.lattice_rank(), &cols)
    }
}

/// Outcome of checking `A --f--> B --g--> C` at `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exactness {
    /// `g f = 0` on homology.
    pub composite_zero: bool,
    /// `ker g` is contained in `im f`.
    pub kernel_in_image: bool,
}

impl Exactness {
    pub fn holds(&self) -> bool {
        self.composite_zero && self.kernel_in_image
    }
}

/// Exactness at `b` of the sequence given by induced matrices `f`
/// (`b.lattice_rank() x a.lattice_rank()`) and `g`.
pub fn check_exact(
    a: &Subquotient,
    b: &Subquotient,
    c: &Subquotient,
    f: &SparseIntMatrix,
    g: &SparseIntMatrix,
    opts: &ReduceOptions,
) -> Result<Exactness, LinalgError> {
    if f.cols() != a.lattice_rank() || f.rows() != b.lattice_rank() || g.cols() != b.lattice_rank() || g.rows() != c.lattice_rank() {
        return Err(LinalgError::Dimension("induced maps do not match the groups".into()));
    }
    let composite_zero = c.columns_vanish(&g.mul(f)?)?;

    let opts_t = ReduceOptions {
        track_transforms: true,
        limits: opts.limits.clone(),
    };
    // preimage of the relations of C: kernel of [g | R_C], first block
    let stacked = g.hstack(c.relations())?;
    let kernel = reduce(&stacked, &opts_t)?.kernel_basis()?;
    let image = reduce(&f.hstack(b.relations())?, &opts_t)?;
    let mut kernel_in_image = true;
    for mut v in kernel {
        v.truncate(b.lattice_rank());
        if !image.contains(&v)? {
            kernel_in_image = false;
            break;
        }
    }
    Ok(Exactness {
        composite_zero,
        kernel_in_image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn homology_of_a_circle() {
        // triangle boundary: 3 vertices, 3 edges, reduced
        let d1 = SparseIntMatrix::from_dense(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let d2 = SparseIntMatrix::zeros(3, 0);
        let h = Subquotient::homology(&d1, &d2, &[false; 3], &[false; 3], &ReduceOptions::default()).unwrap();
        assert_eq!(h.group(), AbelianGroupDescriptor::free(1));
    }

    #[test]
    fn order_two_generators() {
        // one generator of order two with zero boundary: Z/2
        let out = SparseIntMatrix::zeros(0, 1);
        let inc = SparseIntMatrix::zeros(1, 0);
        let h = Subquotient::homology(&out, &inc, &[true], &[], &ReduceOptions::default()).unwrap();
        assert_eq!(h.group(), AbelianGroupDescriptor::elementary(0, 2, 1));
        let gens = h.generators().unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(h.class_order(&gens[0].0).unwrap(), Some(BigInt::from(2)));
    }

    #[test]
    fn short_exact_sequence_of_cyclic_groups() {
        // Z --2--> Z --> Z/2, each as a subquotient of Z
        let opts = ReduceOptions::default();
        let a = Subquotient::new(1, vec![ints(&[1])], &[], &opts).unwrap();
        let b = Subquotient::new(1, vec![ints(&[1])], &[], &opts).unwrap();
        let c = Subquotient::new(1, vec![ints(&[1])], &[ints(&[2])], &opts).unwrap();
        let f = a.induced_matrix(&b, |v| Ok(vec![&v[0] * 2])).unwrap();
        let g = b.induced_matrix(&c, |v| Ok(v.to_vec())).unwrap();
        assert!(check_exact(&a, &b, &c, &f, &g, &opts).unwrap().holds());
        // multiplication by 4 leaves a gap
        let f4 = a.induced_matrix(&b, |v| Ok(vec![&v[0] * 4])).unwrap();
        let e = check_exact(&a, &b, &c, &f4, &g, &opts).unwrap();
        assert!(e.composite_zero && !e.kernel_in_image);
    }
}
