//! Column Hermite form of integer lattices given by generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::sparse::SparseIntMatrix;
use crate::LinalgError;

/// Sparse integer vector, sorted by index, no zeros.
pub type SparseVec = Vec<(u32, BigInt)>;

fn axpy(a: &BigInt, x: &SparseVec, b: &BigInt, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(u32::MAX, |e| e.0);
        let cy = y.get(j).map_or(u32::MAX, |e| e.0);
        let (k, v) = if cx == cy {
            i += 1;
            j += 1;
            (cx, a * &x[i - 1].1 + b * &y[j - 1].1)
        } else if cx < cy {
            i += 1;
            (cx, a * &x[i - 1].1)
        } else {
            j += 1;
            (cy, b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((k, v));
        }
    }
    out
}

fn entry(v: &SparseVec, k: u32) -> BigInt {
    v.binary_search_by_key(&k, |e| e.0)
        .map(|p| v[p].1.clone())
        .unwrap_or_default()
}

/// Basis in column Hermite form: each vector has a positive leading entry
/// at its pivot row, pivot rows strictly increase, and the entries of
/// earlier vectors at later pivot rows are reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    dim: usize,
    vectors: Vec<SparseVec>,
}

impl HermiteBasis {
    pub fn from_generators<I>(dim: usize, generators: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = SparseVec>,
    {
        // slot per leading row
        let mut slots: Vec<Option<SparseVec>> = vec![None; dim];
        for mut v in generators {
            if let Some(last) = v.last() {
                if last.0 as usize >= dim {
                    return Err(LinalgError::Dimension(format!(
                        "generator index {} out of range {dim}",
                        last.0
                    )));
                }
            }
            v.retain(|e| !e.1.is_zero());
            while let Some(&(lead, ref c)) = v.first() {
                let c = c.clone();
                match slots[lead as usize].take() {
                    None => {
                        if c.is_negative() {
                            for e in &mut v {
                                e.1 = -&e.1;
                            }
                        }
                        slots[lead as usize] = Some(v);
                        break;
                    }
                    Some(b) => {
                        let a = b[0].1.clone();
                        let (q, r) = c.div_rem(&a);
                        if r.is_zero() {
                            v = axpy(&BigInt::from(1), &v, &-q, &b);
                            slots[lead as usize] = Some(b);
                        } else {
                            let e = a.extended_gcd(&c);
                            let (g, s, t) = (e.gcd, e.x, e.y);
                            let nb = axpy(&s, &b, &t, &v);
                            let nv = axpy(&(&c / &g), &b, &-(&a / &g), &v);
                            let nb = if nb[0].1.is_negative() {
                                nb.into_iter().map(|(k, x)| (k, -x)).collect()
                            } else {
                                nb
                            };
                            slots[lead as usize] = Some(nb);
                            v = nv;
                        }
                    }
                }
            }
        }
        let mut vectors: Vec<SparseVec> = slots.into_iter().flatten().collect();
        // reduce earlier vectors at later pivot rows
        for k in 0..vectors.len() {
            let (p, d) = (vectors[k][0].0, vectors[k][0].1.clone());
            for j in 0..k {
                let x = entry(&vectors[j], p);
                let q = x.div_floor(&d);
                if !q.is_zero() {
                    vectors[j] = axpy(&BigInt::from(1), &vectors[j], &-q, &vectors[k]);
                }
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v[0].0 as usize).collect()
    }

    /// Unique coefficients `c` with `sum c_k b_k = v`, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::Dimension(format!(
                "vector of length {}, lattice dimension {}",
                v.len(),
                self.dim
            )));
        }
        let mut rest: SparseVec = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i as u32, x.clone()))
            .collect();
        let mut coords = Vec::with_capacity(self.vectors.len());
        for b in &self.vectors {
            let (p, d) = (b[0].0, &b[0].1);
            if let Some(first) = rest.first() {
                if first.0 < p {
                    return Ok(None);
                }
            }
            let x = entry(&rest, p);
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                rest = axpy(&BigInt::from(1), &rest, &-&q, b);
            }
            coords.push(q);
        }
        Ok(if rest.is_empty() { Some(coords) } else { None })
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LinalgError> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn to_matrix(&self) -> SparseIntMatrix {
        let cols = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|(i, x)| (*i as usize, x.clone())).collect::<Vec<_>>())
            .collect();
        SparseIntMatrix::from_columns(self.dim, cols).expect("indices in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(u32, i64)]) -> SparseVec {
        entries.iter().map(|&(i, x)| (i, BigInt::from(x))).collect()
    }

    #[test]
    fn hermite_of_small_lattice() {
        // generators (2,0), (0,2), (1,1): lattice {(a,b): a+b even}
        let h = HermiteBasis::from_generators(2, vec![sv(&[(0, 2)]), sv(&[(1, 2)]), sv(&[(0, 1), (1, 1)])])
            .unwrap();
        assert_eq!(h.rank(), 2);
        assert_eq!(h.vectors()[0], sv(&[(0, 1), (1, 1)]));
        assert_eq!(h.vectors()[1], sv(&[(1, 2)]));
        let v = vec![BigInt::from(3), BigInt::from(5)];
        assert_eq!(h.coordinates(&v).unwrap(), Some(vec![BigInt::from(3), BigInt::from(1)]));
        assert!(!h.contains(&[BigInt::from(1), BigInt::from(0)]).unwrap());
    }

    #[test]
    fn dependent_generators_collapse() {
        let h = HermiteBasis::from_generators(3, vec![sv(&[(0, 1), (2, -1)]), sv(&[(0, -2), (2, 2)])]).unwrap();
        assert_eq!(h.rank(), 1);
    }
}
