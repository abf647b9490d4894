//! Integral and mod-p homology of the graph complexes and of presented
//! quotient complexes, orders of homology classes and torsion generators.

use std::fmt;
use std::time::{Duration, Instant};

use matchtor_linalg::{
    is_prime, rank_mod_p, reduce, AbelianGroupDescriptor, Limits, ReduceOptions, SparseIntMatrix, Subquotient,
};
use num_bigint::BigInt;
use serde::Serialize;

use crate::chain::{ChainVector, FreeChainComplex};
use crate::error::{CoreError, Result};
use crate::young::{split_decomposition, PresentedChainComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Integers,
    /// The field with `p` elements.
    Prime(u64),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: isize,
    /// Over a prime field `F_p` this is `(Z/p)^dim`.
    pub group: AbelianGroupDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub complex: String,
    pub coefficients: Coefficients,
    /// contiguous from degree -1 to the top dimension
    pub degrees: Vec<DegreeHomology>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl HomologySummary {
    /// The group in degree `d` (trivial outside the computed range).
    pub fn group(&self, d: isize) -> AbelianGroupDescriptor {
        self.degrees
            .iter()
            .find(|h| h.degree == d)
            .map(|h| h.group.clone())
            .unwrap_or_default()
    }

    /// Dimension over the prime field; the free rank over the integers.
    pub fn dimension(&self, d: isize) -> usize {
        let g = self.group(d);
        match self.coefficients {
            Coefficients::Integers => g.free_rank,
            Coefficients::Prime(_) => g.invariant_factors.len(),
        }
    }

    /// Degrees with nontrivial homology.
    pub fn nonzero_degrees(&self) -> Vec<isize> {
        self.degrees
            .iter()
            .filter(|h| !h.group.is_trivial())
            .map(|h| h.degree)
            .collect()
    }

    pub fn top_degree(&self) -> isize {
        self.degrees.last().map_or(-1, |h| h.degree)
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "homology of {} with {} coefficients", self.complex, self.coefficients)?;
        for h in &self.degrees {
            match self.coefficients {
                Coefficients::Integers => writeln!(f, "  H~_{} = {}", h.degree, h.group)?,
                Coefficients::Prime(p) => {
                    writeln!(f, "  dim H~_{}(F{p}) = {}", h.degree, h.group.invariant_factors.len())?
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct HomologyOptions {
    pub limits: Limits,
    /// Primes for the modular rank cross-check of every exact reduction.
    pub check_primes: Vec<u64>,
}

impl HomologyOptions {
    pub fn reduce_opts(&self, transforms: bool) -> ReduceOptions {
        ReduceOptions {
            track_transforms: transforms,
            limits: self.limits.clone(),
        }
    }
}

/// Homology from chain-group ranks (`counts[d + 1]`) and boundary matrices
/// (`mats[d]` for `d >= 0`).
fn integral_homology(
    counts: &[usize],
    mats: &[SparseIntMatrix],
    opts: &HomologyOptions,
) -> Result<Vec<AbelianGroupDescriptor>> {
    let mut ranks = Vec::with_capacity(mats.len());
    let mut torsion = Vec::with_capacity(mats.len());
    for m in mats {
        let red = reduce(m, &opts.reduce_opts(false))?;
        let factors = red.torsion_factors();
        for &p in &opts.check_primes {
            let predicted = red.rank() - factors.iter().filter(|d| (*d % p) == BigInt::from(0)).count();
            let got = rank_mod_p(m, p, &opts.limits)?;
            if got != predicted {
                return Err(CoreError::Invariant(format!(
                    "rank mod {p} is {got}, the Smith form predicts {predicted}"
                )));
            }
        }
        ranks.push(red.rank());
        torsion.push(factors);
    }
    Ok(assemble(counts, &ranks, |d| torsion.get(d).cloned().unwrap_or_default()))
}

fn assemble(
    counts: &[usize],
    ranks: &[usize],
    torsion_of_incoming: impl Fn(usize) -> Vec<BigInt>,
) -> Vec<AbelianGroupDescriptor> {
    // degree d = k - 1; outgoing map d_d is ranks[d] (d >= 0), incoming d_{d+1} is ranks[d + 1]
    (0..counts.len())
        .map(|k| {
            let out_rank = if k >= 1 { ranks.get(k - 1).copied().unwrap_or(0) } else { 0 };
            let in_rank = ranks.get(k).copied().unwrap_or(0);
            AbelianGroupDescriptor::new(counts[k] - out_rank - in_rank, torsion_of_incoming(k))
        })
        .collect()
}

fn field_dimensions(counts: &[usize], mats: &[SparseIntMatrix], p: u64, limits: &Limits) -> Result<Vec<usize>> {
    let ranks = mats
        .iter()
        .map(|m| rank_mod_p(m, p, limits))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(assemble(counts, &ranks, |_| Vec::new())
        .into_iter()
        .map(|g| g.free_rank)
        .collect())
}

fn complex_data(complex: &FreeChainComplex) -> Result<(Vec<usize>, Vec<SparseIntMatrix>)> {
    let counts = complex.table().counts();
    let mats = (0..=complex.top_dim())
        .map(|d| complex.boundary(d))
        .collect::<Result<Vec<_>>>()?;
    Ok((counts, mats))
}

fn summary(complex: String, coefficients: Coefficients, groups: Vec<AbelianGroupDescriptor>, start: Instant) -> HomologySummary {
    HomologySummary {
        complex,
        coefficients,
        degrees: groups
            .into_iter()
            .enumerate()
            .map(|(k, group)| DegreeHomology {
                degree: k as isize - 1,
                group,
            })
            .collect(),
        elapsed: start.elapsed(),
    }
}

/// `H~_d` alone, reducing only the two boundary maps around degree `d`.
pub fn homology_in_degree(complex: &FreeChainComplex, d: isize, opts: &HomologyOptions) -> Result<AbelianGroupDescriptor> {
    let out = reduce(&complex.boundary(d)?, &opts.reduce_opts(false))?;
    let inc = reduce(&complex.boundary(d + 1)?, &opts.reduce_opts(false))?;
    Ok(AbelianGroupDescriptor::new(
        complex.table().count(d) - out.rank() - inc.rank(),
        inc.torsion_factors(),
    ))
}

/// Reduced integral homology.
pub fn homology_free(complex: &FreeChainComplex, opts: &HomologyOptions) -> Result<HomologySummary> {
    let start = Instant::now();
    let (counts, mats) = complex_data(complex)?;
    let groups = integral_homology(&counts, &mats, opts)?;
    Ok(summary(complex.spec().id(), Coefficients::Integers, groups, start))
}

/// Reduced homology over the field with `p` elements.
pub fn betti_mod_p(complex: &FreeChainComplex, p: u64, opts: &HomologyOptions) -> Result<HomologySummary> {
    if !is_prime(p) {
        return Err(CoreError::InvalidInput(format!("{p} is not prime")));
    }
    let start = Instant::now();
    let (counts, mats) = complex_data(complex)?;
    let dims = field_dimensions(&counts, &mats, p, &opts.limits)?;
    let groups = dims
        .into_iter()
        .map(|k| AbelianGroupDescriptor::elementary(0, p, k))
        .collect();
    Ok(summary(complex.spec().id(), Coefficients::Prime(p), groups, start))
}

/// Homology of a quotient split into the gamma summand (integral) and the
/// delta summand (computed over the field with two elements).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedHomology {
    pub gamma: Vec<AbelianGroupDescriptor>,
    pub delta: Vec<AbelianGroupDescriptor>,
}

impl PresentedHomology {
    pub fn total(&self) -> Vec<AbelianGroupDescriptor> {
        self.gamma.iter().zip(&self.delta).map(|(a, b)| a.direct_sum(b)).collect()
    }
}

pub fn homology_presented_split(q: &PresentedChainComplex, opts: &HomologyOptions) -> Result<PresentedHomology> {
    let split = split_decomposition(q)?;
    let gamma_counts: Vec<usize> = split.gamma_reps.iter().map(Vec::len).collect();
    let delta_counts: Vec<usize> = split.delta_reps.iter().map(Vec::len).collect();
    let gamma = integral_homology(&gamma_counts, &split.gamma_boundaries, opts)?;
    let delta = field_dimensions(&delta_counts, &split.delta_boundaries, 2, &opts.limits)?
        .into_iter()
        .map(|k| AbelianGroupDescriptor::elementary(0, 2, k))
        .collect();
    Ok(PresentedHomology { gamma, delta })
}

/// Homology of a quotient complex via its gamma/delta splitting.
pub fn homology_presented(q: &PresentedChainComplex, name: &str, opts: &HomologyOptions) -> Result<HomologySummary> {
    let start = Instant::now();
    let groups = homology_presented_split(q, opts)?.total();
    Ok(summary(name.to_string(), Coefficients::Integers, groups, start))
}

/// Homology of a presented complex computed directly: cycles are chains
/// whose boundary vanishes modulo the order-two relations, and the
/// relations in each degree are boundaries plus twice each order-two
/// generator. Independent of the splitting.
pub fn homology_presented_general(q: &PresentedChainComplex, opts: &HomologyOptions) -> Result<Vec<AbelianGroupDescriptor>> {
    (-1..=q.top_dim())
        .map(|d| {
            let h = Subquotient::homology(
                &q.boundary(d),
                &q.boundary(d + 1),
                &q.order_two_flags(d),
                &q.order_two_flags(d - 1),
                &opts.reduce_opts(false),
            )?;
            Ok(h.group())
        })
        .collect()
}

fn check_cycle(z: &ChainVector, complex: &FreeChainComplex) -> Result<()> {
    if !complex.chain_boundary(z).is_zero() {
        return Err(CoreError::NotACycle);
    }
    Ok(())
}

/// Order of `[z]` in reduced homology; `None` for infinite order.
pub fn class_order(z: &ChainVector, complex: &FreeChainComplex, opts: &HomologyOptions) -> Result<Option<BigInt>> {
    let v = complex.chain_to_dense(z)?;
    check_cycle(z, complex)?;
    let incoming = complex.boundary(z.degree() + 1)?;
    let red = reduce(&incoming, &opts.reduce_opts(true))?;
    Ok(red.cokernel_order(&v)?)
}

/// Orders of several classes of the same degree with one reduction.
pub fn class_orders(zs: &[ChainVector], complex: &FreeChainComplex, opts: &HomologyOptions) -> Result<Vec<Option<BigInt>>> {
    let Some(first) = zs.first() else {
        return Ok(Vec::new());
    };
    let d = first.degree();
    let red = reduce(&complex.boundary(d + 1)?, &opts.reduce_opts(true))?;
    zs.iter()
        .map(|z| {
            if z.degree() != d {
                return Err(CoreError::InvalidInput("chains of different degrees".into()));
            }
            let v = complex.chain_to_dense(z)?;
            check_cycle(z, complex)?;
            Ok(red.cokernel_order(&v)?)
        })
        .collect()
}

/// Cycles generating the torsion of `H~_d`, with their orders.
pub fn extract_torsion_generators(
    complex: &FreeChainComplex,
    d: isize,
    opts: &HomologyOptions,
) -> Result<Vec<(ChainVector, BigInt)>> {
    let incoming = complex.boundary(d + 1)?;
    let red = reduce(&incoming, &opts.reduce_opts(true))?;
    red.cokernel_torsion_generators()?
        .into_iter()
        .map(|(v, order)| Ok((ChainVector::from_dense(complex.table(), d, &v)?, order)))
        .collect()
}

/// `dim H_d(F_p) = rank H_d + t_p(d) + t_p(d - 1)` for every degree.
pub fn universal_coefficients_hold(integral: &HomologySummary, modp: &HomologySummary) -> bool {
    let Coefficients::Prime(p) = modp.coefficients else {
        return false;
    };
    let top = integral.top_degree().max(modp.top_degree());
    (-1..=top).all(|d| {
        let g = integral.group(d);
        let below = integral.group(d - 1);
        modp.dimension(d) == g.free_rank + g.torsion_count_divisible_by(p) + below.torsion_count_divisible_by(p)
    })
}

/// `-f_{-1} + f_0 - f_1 + ...`.
pub fn reduced_euler_characteristic(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(k, &f)| if k % 2 == 0 { -(f as i64) } else { f as i64 })
        .sum()
}

/// `sum (-1)^d rank H~_d`.
pub fn homology_euler_characteristic(h: &HomologySummary) -> i64 {
    h.degrees
        .iter()
        .map(|x| {
            let r = x.group.free_rank as i64;
            if x.degree.rem_euclid(2) == 0 {
                r
            } else {
                -r
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ComplexSpec, DegreeVector};

    fn g(s: &str) -> AbelianGroupDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn matching_seven() {
        let m7 = FreeChainComplex::build(&ComplexSpec::Matching(7)).unwrap();
        let h = homology_free(&m7, &HomologyOptions::default()).unwrap();
        assert_eq!(h.group(1), g("Z_3"));
        assert_eq!(h.group(2), g("Z^20"));
        assert_eq!(h.nonzero_degrees(), vec![1, 2]);
        assert_eq!(homology_euler_characteristic(&h), reduced_euler_characteristic(&m7.table().counts()));
        let f3 = betti_mod_p(&m7, 3, &HomologyOptions::default()).unwrap();
        assert_eq!((f3.dimension(1), f3.dimension(2)), (1, 21));
        let f5 = betti_mod_p(&m7, 5, &HomologyOptions::default()).unwrap();
        assert_eq!((f5.dimension(1), f5.dimension(2)), (0, 20));
        assert!(universal_coefficients_hold(&h, &f3));
        assert!(betti_mod_p(&m7, 4, &HomologyOptions::default()).is_err());

        let gens = extract_torsion_generators(&m7, 1, &HomologyOptions::default()).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1, BigInt::from(3));
        assert_eq!(
            class_order(&gens[0].0, &m7, &HomologyOptions::default()).unwrap(),
            Some(BigInt::from(3))
        );
    }

    #[test]
    fn point_and_small_cases() {
        let m2 = FreeChainComplex::build(&ComplexSpec::Matching(2)).unwrap();
        let h = homology_free(&m2, &HomologyOptions::default()).unwrap();
        assert!(h.nonzero_degrees().is_empty());
        let m6 = FreeChainComplex::build(&ComplexSpec::Matching(6)).unwrap();
        assert!(extract_torsion_generators(&m6, 1, &HomologyOptions::default()).unwrap().is_empty());
        let bd = FreeChainComplex::build(&ComplexSpec::Bounded(DegreeVector::constant(3, 2).unwrap())).unwrap();
        assert!(bd.check_d_squared().unwrap());
    }

    #[test]
    fn modular_cross_check_runs() {
        let m7 = FreeChainComplex::build(&ComplexSpec::Matching(7)).unwrap();
        let opts = HomologyOptions {
            check_primes: vec![2, 3, 5],
            ..HomologyOptions::default()
        };
        assert_eq!(homology_free(&m7, &opts).unwrap().group(1), g("Z_3"));
    }

    #[test]
    fn non_cycle_is_rejected() {
        let m4 = FreeChainComplex::build(&ComplexSpec::Matching(4)).unwrap();
        let z: ChainVector = "chain degree 0\n1 1-2\n".parse().unwrap();
        assert_eq!(class_order(&z, &m4, &HomologyOptions::default()), Err(CoreError::NotACycle));
    }
}
