//! Sparse pivoting kernel shared by the integer and prime-field paths.
//!
//! Unit pivots are taken first, Markowitz style: the live column with the
//! fewest entries that still holds a unit, and within it the shortest row.
//! Eliminating a unit pivot is a Schur-complement step (row operations on the
//! pivot column, then the pivot row is discarded; the column operations that
//! would clear it touch nothing else and are only logged). When no unit is
//! left the remaining core is diagonalised with gcd row and column steps,
//! smallest entry first, after which the unit phase resumes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::mem;
use std::time::Instant;

use crate::ring::{Overflow, Ring};
use crate::sparse::SparseIntMatrix;

/// One elementary unimodular operation. Row operations multiply on the left,
/// column operations on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryOp<E> {
    /// Rows: `row[target] -= factor * row[source]`.
    /// Columns: `col[target] -= factor * col[source]`.
    AddMul { target: u32, source: u32, factor: E },
    /// Rows: `[row a; row b] <- W [row a; row b]`.
    /// Columns: `[col a, col b] <- [col a, col b] W`.
    /// `W = [[w0, w1], [w2, w3]]` has determinant one.
    Combine { first: u32, second: u32, w: [E; 4] },
    Negate { target: u32 },
}

#[derive(Debug, Clone, Default)]
pub struct Limits {
    pub max_entries: Option<usize>,
    pub deadline: Option<Instant>,
}

#[derive(Debug)]
pub(crate) enum ElimError {
    Overflow,
    Limit(String),
}

impl From<Overflow> for ElimError {
    fn from(_: Overflow) -> Self {
        ElimError::Overflow
    }
}

type Row<E> = Vec<(u32, E)>;

pub(crate) struct RawReduction<E> {
    pub pivots: Vec<(u32, u32, E)>,
    pub row_ops: Option<Vec<ElementaryOp<E>>>,
    pub col_ops: Option<Vec<ElementaryOp<E>>>,
}

pub(crate) struct Eliminator<R: Ring> {
    ring: R,
    rows: Vec<Row<R::Elem>>,
    cols: Vec<Vec<u32>>,
    col_dead: Vec<bool>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    pivots: Vec<(u32, u32, R::Elem)>,
    row_ops: Option<Vec<ElementaryOp<R::Elem>>>,
    col_ops: Option<Vec<ElementaryOp<R::Elem>>>,
    nnz: usize,
    limits: Limits,
    tick: u32,
}

impl<R: Ring> Eliminator<R> {
    pub fn new(
        ring: R,
        m: &SparseIntMatrix,
        track: bool,
        limits: Limits,
    ) -> Result<Self, ElimError> {
        let mut rows: Vec<Row<R::Elem>> = vec![Vec::new(); m.rows()];
        let mut cols: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
        let mut nnz = 0;
        for (j, col) in m.columns().enumerate() {
            for (i, v) in col {
                let x = ring.from_bigint(v)?;
                if ring.is_zero(&x) {
                    continue;
                }
                rows[*i as usize].push((j as u32, x));
                cols[j].push(*i);
                nnz += 1;
            }
        }
        if let Some(max) = limits.max_entries {
            if nnz > max {
                return Err(ElimError::Limit(format!(
                    "matrix has {nnz} entries, cap is {max}"
                )));
            }
        }
        let heap = cols
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(j, c)| Reverse((c.len() as u32, j as u32)))
            .collect();
        Ok(Self {
            ring,
            rows,
            col_dead: vec![false; m.cols()],
            cols,
            heap,
            pivots: Vec::new(),
            row_ops: track.then(Vec::new),
            col_ops: track.then(Vec::new),
            nnz,
            limits,
            tick: 0,
        })
    }

    pub fn run(mut self) -> Result<RawReduction<R::Elem>, ElimError> {
        loop {
            if let Some((r, c)) = self.next_unit_pivot() {
                self.eliminate_unit(r, c)?;
                continue;
            }
            if R::IS_FIELD {
                break;
            }
            match self.next_core_pivot() {
                Some((r, c)) => self.eliminate_general(r, c)?,
                None => break,
            }
        }
        if !R::IS_FIELD {
            self.normalize_pivots()?;
        }
        Ok(RawReduction {
            pivots: self.pivots,
            row_ops: self.row_ops,
            col_ops: self.col_ops,
        })
    }

    fn entry(&self, r: u32, c: u32) -> Option<&R::Elem> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|k| &row[k].1)
    }

    fn push_col(&mut self, c: u32) {
        if !self.col_dead[c as usize] && !self.cols[c as usize].is_empty() {
            self.heap
                .push(Reverse((self.cols[c as usize].len() as u32, c)));
        }
    }

    fn detach(&mut self, c: u32, r: u32) {
        let list = &mut self.cols[c as usize];
        let pos = list
            .iter()
            .position(|&x| x == r)
            .expect("column index out of sync");
        list.swap_remove(pos);
    }

    fn check_limits(&mut self) -> Result<(), ElimError> {
        if let Some(max) = self.limits.max_entries {
            if self.nnz > max {
                return Err(ElimError::Limit(format!(
                    "fill-in reached {} entries, cap is {max}",
                    self.nnz
                )));
            }
        }
        self.tick = self.tick.wrapping_add(1);
        if self.tick % 1024 == 0 {
            if let Some(deadline) = self.limits.deadline {
                if Instant::now() > deadline {
                    return Err(ElimError::Limit("time cap exceeded".into()));
                }
            }
        }
        Ok(())
    }

    fn next_unit_pivot(&mut self) -> Option<(u32, u32)> {
        while let Some(Reverse((count, c))) = self.heap.pop() {
            let ci = c as usize;
            if self.col_dead[ci] || self.cols[ci].len() != count as usize || count == 0 {
                continue;
            }
            let mut best: Option<(usize, u32)> = None;
            for &r in &self.cols[ci] {
                let v = self.entry(r, c).expect("column index out of sync");
                if self.ring.is_unit(v) {
                    let key = (self.rows[r as usize].len(), r);
                    if best.map_or(true, |b| key < b) {
                        best = Some(key);
                    }
                }
            }
            if let Some((_, r)) = best {
                return Some((r, c));
            }
        }
        None
    }

    fn next_core_pivot(&self) -> Option<(u32, u32)> {
        let mut best: Option<((u64, u64, u32, u32), (u32, u32))> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let cost = (row.len() as u64 - 1) * (self.cols[*c as usize].len() as u64 - 1);
                let key = (self.ring.size(v), cost, r as u32, *c);
                if best.as_ref().map_or(true, |b| key < b.0) {
                    best = Some((key, (r as u32, *c)));
                }
            }
        }
        best.map(|b| b.1)
    }

    /// Replaces row `i`, keeping the column lists and the heap in sync.
    fn install_row(&mut self, i: u32, old: &Row<R::Elem>, new: Row<R::Elem>) {
        let (mut a, mut b) = (0, 0);
        while a < old.len() || b < new.len() {
            let ca = old.get(a).map(|e| e.0);
            let cb = new.get(b).map(|e| e.0);
            match (ca, cb) {
                (Some(x), Some(y)) if x == y => {
                    if old[a].1 != new[b].1 && self.ring.is_unit(&new[b].1) {
                        self.push_col(x);
                    }
                    a += 1;
                    b += 1;
                }
                (Some(x), y) if y.map_or(true, |y| x < y) => {
                    self.detach(x, i);
                    self.nnz -= 1;
                    self.push_col(x);
                    a += 1;
                }
                (_, Some(y)) => {
                    self.cols[y as usize].push(i);
                    self.nnz += 1;
                    self.push_col(y);
                    b += 1;
                }
                _ => unreachable!(),
            }
        }
        self.rows[i as usize] = new;
    }

    /// `x*a + y*b` as sparse rows.
    fn lincomb(
        &self,
        x: &Row<R::Elem>,
        a: &R::Elem,
        y: &Row<R::Elem>,
        b: &R::Elem,
    ) -> Result<Row<R::Elem>, ElimError> {
        let ring = &self.ring;
        let zero = ring.zero();
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let cx = x.get(i).map_or(u32::MAX, |e| e.0);
            let cy = y.get(j).map_or(u32::MAX, |e| e.0);
            let (col, v) = if cx == cy {
                let t = ring.mul(&x[i].1, a)?;
                let u = ring.mul(&y[j].1, b)?;
                i += 1;
                j += 1;
                (cx, ring.add(&t, &u)?)
            } else if cx < cy {
                i += 1;
                (cx, ring.mul(&x[i - 1].1, a)?)
            } else {
                j += 1;
                (cy, ring.mul(&y[j - 1].1, b)?)
            };
            if v != zero {
                out.push((col, v));
            }
        }
        Ok(out)
    }

    /// `row[i] -= q * src`
    fn sub_mul_row(&mut self, i: u32, src: &Row<R::Elem>, q: &R::Elem) -> Result<(), ElimError> {
        let old = mem::take(&mut self.rows[i as usize]);
        let ring = &self.ring;
        let zero = ring.zero();
        let mut new = Vec::with_capacity(old.len() + src.len());
        let (mut a, mut b) = (0, 0);
        while a < old.len() || b < src.len() {
            let ca = old.get(a).map_or(u32::MAX, |e| e.0);
            let cb = src.get(b).map_or(u32::MAX, |e| e.0);
            if ca < cb {
                new.push(old[a].clone());
                a += 1;
            } else if cb < ca {
                new.push((cb, ring.sub_mul(&zero, q, &src[b].1)?));
                b += 1;
            } else {
                let v = ring.sub_mul(&old[a].1, q, &src[b].1)?;
                if v != zero {
                    new.push((ca, v));
                }
                a += 1;
                b += 1;
            }
        }
        self.install_row(i, &old, new);
        self.check_limits()
    }

    fn set_entry(&mut self, r: u32, c: u32, v: R::Elem) {
        let zero = self.ring.is_zero(&v);
        let unit = self.ring.is_unit(&v);
        let row = &mut self.rows[r as usize];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) if zero => {
                row.remove(k);
                self.detach(c, r);
                self.nnz -= 1;
                self.push_col(c);
            }
            Ok(k) => {
                row[k].1 = v;
                if unit {
                    self.push_col(c);
                }
            }
            Err(_) if zero => {}
            Err(k) => {
                row.insert(k, (c, v));
                self.cols[c as usize].push(r);
                self.nnz += 1;
                self.push_col(c);
            }
        }
    }

    fn eliminate_unit(&mut self, r: u32, c: u32) -> Result<(), ElimError> {
        let p = self.entry(r, c).expect("pivot present").clone();
        let mut others: Vec<u32> = self.cols[c as usize]
            .iter()
            .copied()
            .filter(|&i| i != r)
            .collect();
        others.sort_unstable();
        let src = mem::take(&mut self.rows[r as usize]);
        for i in others {
            let a = self.entry(i, c).expect("column index out of sync").clone();
            let q = self.ring.div_exact(&a, &p)?.expect("unit pivot divides");
            self.sub_mul_row(i, &src, &q)?;
            if let Some(ops) = self.row_ops.as_mut() {
                ops.push(ElementaryOp::AddMul {
                    target: i,
                    source: r,
                    factor: q,
                });
            }
        }
        self.rows[r as usize] = src;
        self.finish_pivot(r, c, p)
    }

    fn eliminate_general(&mut self, r: u32, c: u32) -> Result<(), ElimError> {
        loop {
            let mut others: Vec<u32> = self.cols[c as usize]
                .iter()
                .copied()
                .filter(|&i| i != r)
                .collect();
            others.sort_unstable();
            for i in others {
                let p = self.entry(r, c).expect("pivot present").clone();
                let a = self.entry(i, c).expect("column index out of sync").clone();
                if let Some(q) = self.ring.div_exact(&a, &p)? {
                    let src = mem::take(&mut self.rows[r as usize]);
                    let res = self.sub_mul_row(i, &src, &q);
                    self.rows[r as usize] = src;
                    res?;
                    if let Some(ops) = self.row_ops.as_mut() {
                        ops.push(ElementaryOp::AddMul {
                            target: i,
                            source: r,
                            factor: q,
                        });
                    }
                } else {
                    let (g, s, t) = self.ring.xgcd(&p, &a)?;
                    let u = self.ring.neg(&self.ring.div_exact(&a, &g)?.expect("gcd divides"))?;
                    let v = self.ring.div_exact(&p, &g)?.expect("gcd divides");
                    let w = [s, t, u, v];
                    self.combine_rows(r, i, &w)?;
                    if let Some(ops) = self.row_ops.as_mut() {
                        ops.push(ElementaryOp::Combine {
                            first: r,
                            second: i,
                            w,
                        });
                    }
                }
            }
            let p = self.entry(r, c).expect("pivot present").clone();
            let mut offending = None;
            for (j, b) in &self.rows[r as usize] {
                if *j != c && self.ring.div_exact(b, &p)?.is_none() {
                    offending = Some((*j, b.clone()));
                    break;
                }
            }
            match offending {
                None => return self.finish_pivot(r, c, p),
                Some((j, b)) => {
                    let (g, s, t) = self.ring.xgcd(&p, &b)?;
                    let u = self.ring.neg(&self.ring.div_exact(&b, &g)?.expect("gcd divides"))?;
                    let v = self.ring.div_exact(&p, &g)?.expect("gcd divides");
                    let w = [s, u, t, v];
                    self.combine_cols(c, j, &w)?;
                    if let Some(ops) = self.col_ops.as_mut() {
                        ops.push(ElementaryOp::Combine {
                            first: c,
                            second: j,
                            w,
                        });
                    }
                }
            }
        }
    }

    fn combine_rows(&mut self, r: u32, i: u32, w: &[R::Elem; 4]) -> Result<(), ElimError> {
        let old_r = mem::take(&mut self.rows[r as usize]);
        let old_i = mem::take(&mut self.rows[i as usize]);
        let new_r = self.lincomb(&old_r, &w[0], &old_i, &w[1])?;
        let new_i = self.lincomb(&old_r, &w[2], &old_i, &w[3])?;
        self.install_row(r, &old_r, new_r);
        self.install_row(i, &old_i, new_i);
        self.check_limits()
    }

    fn combine_cols(&mut self, c: u32, j: u32, w: &[R::Elem; 4]) -> Result<(), ElimError> {
        let mut touched: Vec<u32> = self.cols[c as usize]
            .iter()
            .chain(self.cols[j as usize].iter())
            .copied()
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let zero = self.ring.zero();
        for k in touched {
            let x = self.entry(k, c).cloned().unwrap_or_else(|| zero.clone());
            let y = self.entry(k, j).cloned().unwrap_or_else(|| zero.clone());
            let nc = self
                .ring
                .add(&self.ring.mul(&x, &w[0])?, &self.ring.mul(&y, &w[2])?)?;
            let nj = self
                .ring
                .add(&self.ring.mul(&x, &w[1])?, &self.ring.mul(&y, &w[3])?)?;
            self.set_entry(k, c, nc);
            self.set_entry(k, j, nj);
        }
        self.check_limits()
    }

    /// Column `c` holds only the pivot and `p` divides the rest of row `r`.
    fn finish_pivot(&mut self, r: u32, c: u32, p: R::Elem) -> Result<(), ElimError> {
        let row = mem::take(&mut self.rows[r as usize]);
        if let Some(ops) = self.col_ops.as_mut() {
            for (j, b) in &row {
                if *j != c {
                    let q = self.ring.div_exact(b, &p)?.expect("pivot divides its row");
                    ops.push(ElementaryOp::AddMul {
                        target: *j,
                        source: c,
                        factor: q,
                    });
                }
            }
        }
        for (j, _) in &row {
            self.detach(*j, r);
            self.nnz -= 1;
            if *j != c {
                self.push_col(*j);
            }
        }
        debug_assert!(self.cols[c as usize].is_empty());
        self.col_dead[c as usize] = true;
        self.pivots.push((r, c, p));
        Ok(())
    }

    /// Positive pivots forming a divisibility chain in pivot order.
    fn normalize_pivots(&mut self) -> Result<(), ElimError> {
        let ring = self.ring.clone();
        for k in 0..self.pivots.len() {
            if ring.is_negative(&self.pivots[k].2) {
                self.pivots[k].2 = ring.neg(&self.pivots[k].2)?;
                if let Some(ops) = self.row_ops.as_mut() {
                    ops.push(ElementaryOp::Negate {
                        target: self.pivots[k].0,
                    });
                }
            }
        }
        let core: Vec<usize> = (0..self.pivots.len())
            .filter(|&k| !ring.is_unit(&self.pivots[k].2))
            .collect();
        for (ai, &a) in core.iter().enumerate() {
            for &b in &core[ai + 1..] {
                let x = self.pivots[a].2.clone();
                let y = self.pivots[b].2.clone();
                if ring.div_exact(&y, &x)?.is_some() {
                    continue;
                }
                let (g, s, t) = ring.xgcd(&x, &y)?;
                let y_g = ring.div_exact(&y, &g)?.expect("gcd divides");
                let x_g = ring.div_exact(&x, &g)?.expect("gcd divides");
                let lcm = ring.mul(&x, &y_g)?;
                let row_w = [s.clone(), t.clone(), ring.neg(&y_g)?, x_g.clone()];
                let col_w = [
                    ring.one(),
                    ring.neg(&ring.mul(&t, &y_g)?)?,
                    ring.one(),
                    ring.mul(&s, &x_g)?,
                ];
                let (ra, ca, _) = self.pivots[a];
                let (rb, cb, _) = self.pivots[b];
                if let Some(ops) = self.row_ops.as_mut() {
                    ops.push(ElementaryOp::Combine {
                        first: ra,
                        second: rb,
                        w: row_w,
                    });
                }
                if let Some(ops) = self.col_ops.as_mut() {
                    ops.push(ElementaryOp::Combine {
                        first: ca,
                        second: cb,
                        w: col_w,
                    });
                }
                self.pivots[a].2 = g;
                self.pivots[b].2 = lcm;
            }
        }
        Ok(())
    }
}
