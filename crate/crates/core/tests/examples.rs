//! Small worked cases checked against independent oracles: closed-form
//! counts, brute-force enumeration and exhaustive orbit scans.

use std::collections::BTreeMap;

use matchtor_core::graph::{count_faces, face_counts, kappa_simplex};
use matchtor_core::young::{matching_with_action, orbit_decompose, quotient_complex, subcomplex_cg_basis, OrbitKind, Part};
use matchtor_core::{Blocks, ComplexSpec, CoreError, DegreeVector, Edge, OrientedSimplex, Simplex};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Number of k-edge matchings of K_n.
fn matchings(n: usize, k: usize) -> usize {
    let num = factorial(n);
    let den = factorial(k) * factorial(n - 2 * k) * (BigUint::from(1u32) << k);
    (num / den).to_usize().unwrap()
}

fn s(text: &str) -> Simplex {
    text.parse().unwrap()
}

#[test]
fn matching_counts_follow_the_closed_form() {
    for n in 2..=12 {
        let expected: Vec<usize> = (0..=n / 2).map(|k| matchings(n, k)).collect();
        assert_eq!(face_counts(&ComplexSpec::Matching(n)), expected, "n = {n}");
    }
    assert_eq!(count_faces(&ComplexSpec::Matching(12), 5), 10395);
}

#[test]
fn small_counts_by_brute_force() {
    let edges: Vec<Edge> = (1..=5u8).flat_map(|a| (a + 1..=5).map(move |b| Edge::new(a, b))).collect();
    let disjoint = edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| edges[i + 1..].iter().map(move |f| (e, f)))
        .filter(|(e, f)| !f.touches(e.a) && !f.touches(e.b))
        .count();
    assert_eq!(count_faces(&ComplexSpec::Matching(5), 1), disjoint);

    let bd = ComplexSpec::Bounded(DegreeVector::constant(7, 2).unwrap());
    assert_eq!(count_faces(&bd, 0), 7 * 6 / 2 + 7);
}

/// Orbits found by applying every group element.
fn brute_orbits(blocks: &Blocks, d: isize) -> BTreeMap<Simplex, (usize, OrbitKind)> {
    let (complex, action) = matching_with_action(blocks.clone()).unwrap();
    let group = action.elements(1000).unwrap();
    let mut out = BTreeMap::new();
    for sigma in complex.table().faces(d) {
        let mut members = Vec::new();
        let mut reversing = false;
        for g in &group {
            let img = action.act(g, &OrientedSimplex::positive(sigma.clone())).unwrap();
            if img.simplex == *sigma && img.sign < 0 {
                reversing = true;
            }
            members.push(img.simplex);
        }
        members.sort();
        members.dedup();
        let kind = if reversing { OrbitKind::OrderTwo } else { OrbitKind::Free };
        out.insert(members[0].clone(), (members.len(), kind));
    }
    out
}

#[test]
fn orbit_scan_agrees_with_exhaustive_search() {
    for lambda in ["2,2", "2,2,2", "3,2,1", "2,2,1,1", "3,3"] {
        let blocks = Blocks::consecutive(&lambda.parse().unwrap()).unwrap();
        let (complex, action) = matching_with_action(blocks.clone()).unwrap();
        for d in -1..=complex.top_dim() {
            let got: BTreeMap<Simplex, (usize, OrbitKind)> = orbit_decompose(&complex, &action, d)
                .unwrap()
                .into_iter()
                .map(|o| (o.representative, (o.size, o.kind)))
                .collect();
            assert_eq!(got, brute_orbits(&blocks, d), "lambda {lambda}, degree {d}");
        }
    }
}

#[test]
fn perfect_matchings_of_four_points() {
    let blocks = Blocks::consecutive(&"2,2".parse().unwrap()).unwrap();
    let (complex, action) = matching_with_action(blocks).unwrap();
    let orbits = orbit_decompose(&complex, &action, 1).unwrap();
    let shape: Vec<(Simplex, usize, OrbitKind, Part)> =
        orbits.into_iter().map(|o| (o.representative, o.size, o.kind, o.part)).collect();
    // 12,34 maps to the two loops 11 and 22, so it is a fixed, unreversed
    // gamma-part face.
    assert_eq!(
        shape,
        vec![
            (s("1-2 3-4"), 1, OrbitKind::Free, Part::Gamma),
            (s("1-3 2-4"), 2, OrbitKind::OrderTwo, Part::Delta),
        ]
    );

    let g = vec![0, 2, 1, 4, 3];
    let img = action.act(&g, &OrientedSimplex::positive(s("1-3 2-4"))).unwrap();
    assert_eq!((img.simplex, img.sign), (s("1-3 2-4"), -1));
}

#[test]
fn invariant_subcomplex_rank_accounting() {
    for (lambda, n) in [("2,2", 4), ("2,2,2", 6), ("3,2,1", 6), ("2", 2)] {
        let blocks = Blocks::consecutive(&lambda.parse().unwrap()).unwrap();
        assert_eq!(blocks.total(), n);
        let (complex, action) = matching_with_action(blocks).unwrap();
        for d in -1..=complex.top_dim() {
            let basis = subcomplex_cg_basis(&complex, &action, d, 8).unwrap();
            let free = orbit_decompose(&complex, &action, d)
                .unwrap()
                .iter()
                .filter(|o| o.kind == OrbitKind::Free)
                .count();
            assert_eq!(complex.table().count(d), basis.rank() + free, "lambda {lambda}, degree {d}");
        }
    }
    let blocks = Blocks::consecutive(&"2,2".parse().unwrap()).unwrap();
    let (complex, action) = matching_with_action(blocks).unwrap();
    assert_eq!(subcomplex_cg_basis(&complex, &action, 1, 8).unwrap().rank(), 2);
}

#[test]
fn trivial_action_leaves_the_complex_unchanged() {
    let lambda = DegreeVector::constant(6, 1).unwrap();
    let (complex, action) = matching_with_action(Blocks::consecutive(&lambda).unwrap()).unwrap();
    let q = quotient_complex(&complex, &action).unwrap();
    for d in -1..=complex.top_dim() {
        assert_eq!(q.count(d), complex.table().count(d));
        assert!(q.order_two_flags(d).iter().all(|&t| !t));
        assert_eq!(q.boundary(d).to_dense(), complex.boundary(d).unwrap().to_dense());
    }
}

#[test]
fn kappa_on_three_blocks() {
    let blocks = Blocks::consecutive(&"2,2,2".parse().unwrap()).unwrap();
    assert_eq!(kappa_simplex(&s("1-3 5-6"), &blocks).unwrap(), s("1-2 3-3"));
    assert!(matches!(kappa_simplex(&s("1-3 2-4"), &blocks), Err(CoreError::ParallelEdge(_))));
}
