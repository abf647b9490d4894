//! Smith normal form and the reductions behind it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::eliminate::{ElimError, ElementaryOp, Eliminator, Limits, RawReduction};
use crate::ring::{BigIntRing, PrimeField, Ring, SmallInt};
use crate::sparse::SparseIntMatrix;
use crate::LinalgError;

#[derive(Debug, Clone, Default)]
pub struct ReduceOptions {
    pub track_transforms: bool,
    pub limits: Limits,
}

impl ReduceOptions {
    pub fn with_transforms() -> Self {
        Self {
            track_transforms: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub value: BigInt,
}

#[derive(Debug, Clone)]
pub struct Transforms {
    row_ops: Vec<ElementaryOp<BigInt>>,
    col_ops: Vec<ElementaryOp<BigInt>>,
}

/// Result of diagonalising an integer matrix `M` by unimodular `U`, `V`:
/// `U M V` is zero except for `value` at `(row, col)` of each pivot.
///
/// Pivot values are positive and ordered so that each divides the next.
#[derive(Debug, Clone)]
pub struct Reduction {
    rows: usize,
    cols: usize,
    pivots: Vec<Pivot>,
    transforms: Option<Transforms>,
}

fn convert_ops<R: Ring>(ring: &R, ops: Vec<ElementaryOp<R::Elem>>) -> Vec<ElementaryOp<BigInt>> {
    ops.into_iter()
        .map(|op| match op {
            ElementaryOp::AddMul {
                target,
                source,
                factor,
            } => ElementaryOp::AddMul {
                target,
                source,
                factor: ring.to_bigint(&factor),
            },
            ElementaryOp::Combine { first, second, w } => ElementaryOp::Combine {
                first,
                second,
                w: w.map(|x| ring.to_bigint(&x)),
            },
            ElementaryOp::Negate { target } => ElementaryOp::Negate { target },
        })
        .collect()
}

fn finish<R: Ring>(ring: &R, m: &SparseIntMatrix, raw: RawReduction<R::Elem>) -> Reduction {
    let mut pivots: Vec<Pivot> = raw
        .pivots
        .iter()
        .map(|(r, c, v)| Pivot {
            row: *r as usize,
            col: *c as usize,
            value: ring.to_bigint(v),
        })
        .collect();
    // stable: the non-unit pivots already form a chain in discovery order
    pivots.sort_by(|a, b| a.value.cmp(&b.value));
    let transforms = match (raw.row_ops, raw.col_ops) {
        (Some(r), Some(c)) => Some(Transforms {
            row_ops: convert_ops(ring, r),
            col_ops: convert_ops(ring, c),
        }),
        _ => None,
    };
    Reduction {
        rows: m.rows(),
        cols: m.cols(),
        pivots,
        transforms,
    }
}

fn map_elim_error(e: ElimError) -> LinalgError {
    match e {
        ElimError::Limit(msg) => LinalgError::ResourceLimit(msg),
        ElimError::Overflow => LinalgError::Invariant("overflow in arbitrary precision".into()),
    }
}

/// Diagonalises `m` over the integers. Runs on checked `i64` first and
/// restarts in arbitrary precision if any intermediate value overflows.
pub fn reduce(m: &SparseIntMatrix, opts: &ReduceOptions) -> Result<Reduction, LinalgError> {
    let fast = Eliminator::new(SmallInt, m, opts.track_transforms, opts.limits.clone())
        .and_then(|e| e.run());
    match fast {
        Ok(raw) => Ok(finish(&SmallInt, m, raw)),
        Err(ElimError::Overflow) => {
            let raw = Eliminator::new(BigIntRing, m, opts.track_transforms, opts.limits.clone())
                .and_then(|e| e.run())
                .map_err(map_elim_error)?;
            Ok(finish(&BigIntRing, m, raw))
        }
        Err(e) => Err(map_elim_error(e)),
    }
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64, limits: &Limits) -> Result<usize, LinalgError> {
    let field = PrimeField::new(p)
        .ok_or_else(|| LinalgError::InvalidInput(format!("{p} is not a prime below 2^32")))?;
    let raw = Eliminator::new(field, m, false, limits.clone())
        .and_then(|e| e.run())
        .map_err(map_elim_error)?;
    Ok(raw.pivots.len())
}

fn apply_op(op: &ElementaryOp<BigInt>, v: &mut [BigInt], inverse: bool, column: bool) {
    match op {
        ElementaryOp::AddMul {
            target,
            source,
            factor,
        } => {
            // rows act on (target <- source); columns act on (source <- target)
            let (dst, src) = if column {
                (*source as usize, *target as usize)
            } else {
                (*target as usize, *source as usize)
            };
            if v[src].is_zero() {
                return;
            }
            let delta = factor * &v[src];
            if inverse {
                v[dst] += delta;
            } else {
                v[dst] -= delta;
            }
        }
        ElementaryOp::Combine { first, second, w } => {
            let (a, b) = (*first as usize, *second as usize);
            let (x, y) = (v[a].clone(), v[b].clone());
            if inverse {
                v[a] = &w[3] * &x - &w[1] * &y;
                v[b] = -&w[2] * &x + &w[0] * &y;
            } else {
                v[a] = &w[0] * &x + &w[1] * &y;
                v[b] = &w[2] * &x + &w[3] * &y;
            }
        }
        ElementaryOp::Negate { target } => {
            let t = *target as usize;
            v[t] = -std::mem::take(&mut v[t]);
        }
    }
}

impl Reduction {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    /// All nonzero invariant factors, units included, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.pivots.iter().map(|p| p.value.clone()).collect()
    }

    /// Invariant factors greater than one.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.pivots
            .iter()
            .filter(|p| !p.value.is_one())
            .map(|p| p.value.clone())
            .collect()
    }

    pub fn has_transforms(&self) -> bool {
        self.transforms.is_some()
    }

    fn transforms(&self) -> Result<&Transforms, LinalgError> {
        self.transforms
            .as_ref()
            .ok_or_else(|| LinalgError::InvalidInput("reduction was run without transforms".into()))
    }

    /// `U y` (length = rows).
    pub fn apply_left(&self, y: &mut [BigInt]) -> Result<(), LinalgError> {
        let t = self.transforms()?;
        for op in &t.row_ops {
            apply_op(op, y, false, false);
        }
        Ok(())
    }

    /// `U^{-1} y` (length = rows).
    pub fn apply_left_inverse(&self, y: &mut [BigInt]) -> Result<(), LinalgError> {
        let t = self.transforms()?;
        for op in t.row_ops.iter().rev() {
            apply_op(op, y, true, false);
        }
        Ok(())
    }

    /// `V x` (length = cols).
    pub fn apply_right(&self, x: &mut [BigInt]) -> Result<(), LinalgError> {
        let t = self.transforms()?;
        for op in t.col_ops.iter().rev() {
            apply_op(op, x, false, true);
        }
        Ok(())
    }

    /// `V^{-1} x` (length = cols).
    pub fn apply_right_inverse(&self, x: &mut [BigInt]) -> Result<(), LinalgError> {
        let t = self.transforms()?;
        for op in &t.col_ops {
            apply_op(op, x, true, true);
        }
        Ok(())
    }

    fn pivot_rows(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.rows];
        for (k, p) in self.pivots.iter().enumerate() {
            out[p.row] = Some(k);
        }
        out
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut used = vec![false; self.cols];
        for p in &self.pivots {
            used[p.col] = true;
        }
        (0..self.cols).filter(|&j| !used[j]).collect()
    }

    /// Integer solution of `M x = y`, if one exists.
    pub fn solve(&self, y: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        self.check_len(y.len(), self.rows)?;
        let mut w = y.to_vec();
        self.apply_left(&mut w)?;
        let pivot_rows = self.pivot_rows();
        for (i, v) in w.iter().enumerate() {
            if pivot_rows[i].is_none() && !v.is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![BigInt::zero(); self.cols];
        for p in &self.pivots {
            let (q, r) = w[p.row].div_rem(&p.value);
            if !r.is_zero() {
                return Ok(None);
            }
            x[p.col] = q;
        }
        self.apply_right(&mut x)?;
        Ok(Some(x))
    }

    pub fn contains(&self, y: &[BigInt]) -> Result<bool, LinalgError> {
        Ok(self.solve(y)?.is_some())
    }

    /// Basis of the integer kernel of `M`: `V e_j` for the free columns.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<BigInt>>, LinalgError> {
        self.free_columns()
            .into_iter()
            .map(|j| {
                let mut x = vec![BigInt::zero(); self.cols];
                x[j] = BigInt::one();
                self.apply_right(&mut x)?;
                Ok(x)
            })
            .collect()
    }

    /// Coordinates of a kernel vector in [`Self::kernel_basis`]; `None` if
    /// `x` is not in the kernel.
    pub fn kernel_coordinates(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        self.check_len(x.len(), self.cols)?;
        let mut w = x.to_vec();
        self.apply_right_inverse(&mut w)?;
        if self.pivots.iter().any(|p| !w[p.col].is_zero()) {
            return Ok(None);
        }
        Ok(Some(
            self.free_columns()
                .into_iter()
                .map(|j| std::mem::take(&mut w[j]))
                .collect(),
        ))
    }

    /// Order of the class of `y` in the cokernel `Z^rows / im M`; `None`
    /// when the order is infinite.
    pub fn cokernel_order(&self, y: &[BigInt]) -> Result<Option<BigInt>, LinalgError> {
        self.check_len(y.len(), self.rows)?;
        let mut w = y.to_vec();
        self.apply_left(&mut w)?;
        let pivot_rows = self.pivot_rows();
        for (i, v) in w.iter().enumerate() {
            if pivot_rows[i].is_none() && !v.is_zero() {
                return Ok(None);
            }
        }
        let mut order = BigInt::one();
        for p in &self.pivots {
            let g = p.value.gcd(&w[p.row]);
            order = order.lcm(&(&p.value / g));
        }
        Ok(Some(order))
    }

    /// Generators of the torsion of the cokernel, one per invariant factor
    /// greater than one, with their orders.
    pub fn cokernel_torsion_generators(&self) -> Result<Vec<(Vec<BigInt>, BigInt)>, LinalgError> {
        let mut out = Vec::new();
        for p in self.pivots.iter().filter(|p| !p.value.is_one()) {
            let mut y = vec![BigInt::zero(); self.rows];
            y[p.row] = BigInt::one();
            self.apply_left_inverse(&mut y)?;
            out.push((y, p.value.clone()));
        }
        Ok(out)
    }

    /// Explicit `(U, V)` with the pivots permuted onto the diagonal in
    /// divisibility order.
    pub fn explicit_transforms(&self) -> Result<(SparseIntMatrix, SparseIntMatrix), LinalgError> {
        let mut row_order: Vec<usize> = self.pivots.iter().map(|p| p.row).collect();
        let pivot_rows = self.pivot_rows();
        row_order.extend((0..self.rows).filter(|&i| pivot_rows[i].is_none()));
        let mut col_order: Vec<usize> = self.pivots.iter().map(|p| p.col).collect();
        col_order.extend(self.free_columns());

        // U e_i for every i, then permute rows
        let mut u_cols = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut e = vec![BigInt::zero(); self.rows];
            e[i] = BigInt::one();
            self.apply_left(&mut e)?;
            let col: Vec<(usize, BigInt)> = row_order
                .iter()
                .enumerate()
                .filter(|(_, &src)| !e[src].is_zero())
                .map(|(k, &src)| (k, e[src].clone()))
                .collect();
            u_cols.push(col);
        }
        let u = SparseIntMatrix::from_columns(self.rows, u_cols)?;

        let mut v_cols = Vec::with_capacity(self.cols);
        for &j in &col_order {
            let mut e = vec![BigInt::zero(); self.cols];
            e[j] = BigInt::one();
            self.apply_right(&mut e)?;
            let col: Vec<(usize, BigInt)> = e
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            v_cols.push(col);
        }
        let v = SparseIntMatrix::from_columns(self.cols, v_cols)?;
        Ok((u, v))
    }

    fn check_len(&self, got: usize, want: usize) -> Result<(), LinalgError> {
        if got != want {
            return Err(LinalgError::Dimension(format!(
                "vector of length {got}, expected {want}"
            )));
        }
        Ok(())
    }
}

/// Smith normal form `U M V = diag(d_1, ..., d_r, 0, ...)` with
/// `d_1 | d_2 | ... | d_r`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    /// `(U, V)`, both unimodular, when requested.
    pub transforms: Option<(SparseIntMatrix, SparseIntMatrix)>,
}

impl SmithForm {
    /// The diagonal matrix `D` with the shape of the input.
    pub fn diagonal(&self, rows: usize, cols: usize) -> SparseIntMatrix {
        let columns = (0..cols)
            .map(|j| {
                self.invariant_factors
                    .get(j)
                    .map(|d| vec![(j, d.clone())])
                    .unwrap_or_default()
            })
            .collect();
        SparseIntMatrix::from_columns(rows, columns).expect("diagonal fits")
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix, want_transforms: bool) -> Result<SmithForm, LinalgError> {
    smith_normal_form_with(
        m,
        &ReduceOptions {
            track_transforms: want_transforms,
            ..ReduceOptions::default()
        },
    )
}

pub fn smith_normal_form_with(m: &SparseIntMatrix, opts: &ReduceOptions) -> Result<SmithForm, LinalgError> {
    let red = reduce(m, opts)?;
    let transforms = if opts.track_transforms {
        Some(red.explicit_transforms()?)
    } else {
        None
    };
    Ok(SmithForm {
        invariant_factors: red.invariant_factors(),
        rank: red.rank(),
        transforms,
    })
}

/// Determinant of a square matrix by fraction-free elimination; used to
/// confirm that transforms are unimodular.
pub fn determinant(m: &SparseIntMatrix) -> Result<BigInt, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::Dimension("determinant of a non-square matrix".into()));
    }
    let red = reduce(m, &ReduceOptions::with_transforms())?;
    if red.rank() < m.rows() {
        return Ok(BigInt::zero());
    }
    // det(U) det(M) det(V) = det(P D), U and V have determinant one except
    // for row negations, so track the sign separately.
    let t = red.transforms()?;
    let negations = t
        .row_ops
        .iter()
        .chain(t.col_ops.iter())
        .filter(|op| matches!(op, ElementaryOp::Negate { .. }))
        .count();
    let mut perm: Vec<usize> = vec![0; m.rows()];
    let mut det = BigInt::one();
    for p in &red.pivots {
        perm[p.row] = p.col;
        det *= &p.value;
    }
    if permutation_is_odd(&perm) {
        det = -det;
    }
    if negations % 2 == 1 {
        det = -det;
    }
    Ok(det)
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// Canonical invariant factors (each > 1, each dividing the next) of
/// `Z/a_1 + Z/a_2 + ...`; zeros and units are ignored.
pub fn normalize_torsion(values: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = values
        .into_iter()
        .map(|v| v.abs())
        .filter(|v| !v.is_zero() && !v.is_one())
        .collect();
    for a in 0..d.len() {
        for b in a + 1..d.len() {
            if !(&d[b] % &d[a]).is_zero() {
                let g = d[a].gcd(&d[b]);
                let l = d[a].lcm(&d[b]);
                d[a] = g;
                d[b] = l;
            }
        }
    }
    d.retain(|v| !v.is_one());
    d.sort();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_by_two_example() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m, true).unwrap();
        assert_eq!(s.invariant_factors, ints(&[2, 4]));
        let (u, v) = s.transforms.as_ref().unwrap();
        assert_eq!(u.mul(&m).unwrap().mul(v).unwrap(), s.diagonal(2, 2));
        assert_eq!(determinant(u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(v).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn identity_has_unit_factors() {
        let s = smith_normal_form(&SparseIntMatrix::identity(4), false).unwrap();
        assert_eq!(s.rank, 4);
        assert!(s.invariant_factors.iter().all(|d| d.is_one()));
    }

    #[test]
    fn coprime_core_needs_chain_fixup() {
        // diag(2, 3) is equivalent to diag(1, 6)
        let m = SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m, true).unwrap();
        assert_eq!(s.invariant_factors, ints(&[1, 6]));
        let (u, v) = s.transforms.as_ref().unwrap();
        assert_eq!(u.mul(&m).unwrap().mul(v).unwrap(), s.diagonal(2, 2));
    }

    #[test]
    fn solve_and_kernel() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let red = reduce(&m, &ReduceOptions::with_transforms()).unwrap();
        let x = red.solve(&ints(&[1, 2])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), ints(&[1, 2]));
        assert!(red.solve(&ints(&[0, 1])).unwrap().is_none());
        let k = red.kernel_basis().unwrap();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
        let coords = red.kernel_coordinates(&k[0]).unwrap().unwrap();
        assert_eq!(coords, ints(&[1]));
    }

    #[test]
    fn cokernel_orders() {
        // coker = Z/6 + Z
        let m = SparseIntMatrix::from_dense(&[vec![6], vec![0]]);
        let red = reduce(&m, &ReduceOptions::with_transforms()).unwrap();
        assert_eq!(red.cokernel_order(&ints(&[1, 0])).unwrap(), Some(BigInt::from(6)));
        assert_eq!(red.cokernel_order(&ints(&[4, 0])).unwrap(), Some(BigInt::from(3)));
        assert_eq!(red.cokernel_order(&ints(&[0, 1])).unwrap(), None);
        let gens = red.cokernel_torsion_generators().unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(red.cokernel_order(&gens[0].0).unwrap(), Some(BigInt::from(6)));
    }

    #[test]
    fn modular_rank() {
        let m = SparseIntMatrix::from_dense(&[vec![3, 0], vec![0, 1]]);
        assert_eq!(rank_mod_p(&m, 3, &Limits::default()).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 2, &Limits::default()).unwrap(), 2);
        assert!(rank_mod_p(&m, 9, &Limits::default()).is_err());
    }

    #[test]
    fn entry_cap_is_reported() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        let opts = ReduceOptions {
            limits: Limits {
                max_entries: Some(2),
                deadline: None,
            },
            ..ReduceOptions::default()
        };
        assert!(matches!(reduce(&m, &opts), Err(LinalgError::ResourceLimit(_))));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 2 + 1;
        let m = SparseIntMatrix::from_dense(&[vec![big, 3], vec![5, big]]);
        let red = reduce(&m, &ReduceOptions::with_transforms()).unwrap();
        // det = big^2 - 15
        let det: BigInt = BigInt::from(big) * BigInt::from(big) - 15;
        let prod: BigInt = red.invariant_factors().iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn normalization_merges_coprime_parts() {
        assert_eq!(normalize_torsion(ints(&[2, 3, 1, 0, 4])), ints(&[2, 12]));
        assert_eq!(normalize_torsion(ints(&[3, 3, 3])), ints(&[3, 3, 3]));
    }
}
