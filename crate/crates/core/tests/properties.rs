//! Property tests for the structural invariants of complexes, chains and
//! Young-group quotients.

use matchtor_core::chain::boundary_of_simplex;
use matchtor_core::graph::{face_counts, is_face, kappa_fiber_representative, kappa_simplex, sort_with_parity};
use matchtor_core::homology::{
    betti_mod_p, class_order, extract_torsion_generators, homology_euler_characteristic, homology_free,
    homology_presented, reduced_euler_characteristic, universal_coefficients_hold, HomologyOptions,
};
use matchtor_core::young::{
    kappa_inverse, kappa_iso, matching_with_action, orbit_decompose, project_chain, quotient_complex, transfer_chain,
    OrbitKind, Part, YoungAction,
};
use matchtor_core::{Blocks, ChainVector, ComplexSpec, DegreeVector, Edge, FaceTable, FreeChainComplex, OrientedSimplex, Simplex};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn lambda_strategy() -> impl Strategy<Value = DegreeVector> {
    prop::collection::vec(1u8..=3, 2..=4)
        .prop_filter("at most 8 vertices", |v| v.iter().map(|&x| x as usize).sum::<usize>() <= 8)
        .prop_map(|v| DegreeVector::new(v).unwrap())
}

/// A random partition of `[N]` into blocks of sizes `lambda`.
fn blocks_strategy() -> impl Strategy<Value = Blocks> {
    lambda_strategy().prop_flat_map(|lambda| {
        let n = lambda.total();
        Just((1..=n as u8).collect::<Vec<_>>()).prop_shuffle().prop_map(move |perm| {
            let mut rest = perm.as_slice();
            let mut blocks = Vec::new();
            for &l in lambda.values() {
                let (head, tail) = rest.split_at(l as usize);
                blocks.push(head.to_vec());
                rest = tail;
            }
            Blocks::new(blocks).unwrap()
        })
    })
}

fn spec_strategy() -> impl Strategy<Value = ComplexSpec> {
    prop_oneof![
        (2usize..=8).prop_map(ComplexSpec::Matching),
        (3usize..=8).prop_map(ComplexSpec::MatchingMinusEdge),
        prop::collection::vec(0u8..=2, 2..=5).prop_map(|v| ComplexSpec::Bounded(DegreeVector::new(v).unwrap())),
        blocks_strategy().prop_map(ComplexSpec::Gamma),
        blocks_strategy().prop_map(ComplexSpec::Delta),
    ]
}

/// A random block-preserving permutation, as a table indexed from 1.
fn random_element(action: &YoungAction, seed: &[u64]) -> Vec<u8> {
    let mut g: Vec<u8> = (0..=action.n_vertices() as u8).collect();
    let mut k = 0;
    for block in action.blocks().blocks() {
        let mut imgs = block.clone();
        for i in (1..imgs.len()).rev() {
            let j = (seed[k % seed.len()] as usize) % (i + 1);
            imgs.swap(i, j);
            k += 1;
        }
        for (&from, &to) in block.iter().zip(&imgs) {
            g[from as usize] = to;
        }
    }
    g
}

fn random_chain(table: &FaceTable, d: isize, coefs: &[i64]) -> ChainVector {
    let v: Vec<BigInt> = (0..table.count(d)).map(|i| BigInt::from(coefs[i % coefs.len()])).collect();
    ChainVector::from_dense(table, d, &v).unwrap()
}

fn all_edges(n: u8, loops: bool) -> Vec<Edge> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            if a != b || loops {
                out.push(Edge::new(a, b));
            }
        }
    }
    out
}

fn degrees(sigma: &Simplex, n: usize) -> Vec<usize> {
    let mut deg = vec![0; n + 1];
    for e in sigma.edges() {
        deg[e.a as usize] += 1;
        deg[e.b as usize] += 1;
    }
    deg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn face_tables_are_sorted_and_indexed(spec in spec_strategy()) {
        let table = FaceTable::build(&spec).unwrap();
        for d in -1..=table.top_dim() {
            let faces = table.faces(d);
            prop_assert!(faces.windows(2).all(|w| w[0] < w[1]));
            for (i, s) in faces.iter().enumerate() {
                prop_assert_eq!(s.dim(), d);
                prop_assert_eq!(table.index_of(s), Some(i));
                prop_assert!(is_face(&spec, s).unwrap());
            }
        }
    }

    #[test]
    fn faces_are_closed_downward(spec in spec_strategy()) {
        // Delta is a relative complex, closed upward inside the matchings instead.
        prop_assume!(!spec.is_relative());
        let table = FaceTable::build(&spec).unwrap();
        for d in 0..=table.top_dim() {
            for s in table.faces(d) {
                for i in 0..s.len() {
                    prop_assert!(table.index_of(&s.without(i)).is_some());
                }
            }
        }
    }

    #[test]
    fn delta_is_closed_upward(blocks in blocks_strategy()) {
        let n = blocks.total();
        let matching = FaceTable::build(&ComplexSpec::Matching(n)).unwrap();
        let delta = ComplexSpec::Delta(blocks);
        for d in 0..matching.top_dim() {
            for s in matching.faces(d) {
                if !is_face(&delta, s).unwrap() {
                    continue;
                }
                for e in all_edges(n as u8, false) {
                    if s.edges().iter().any(|f| f.touches(e.a) || f.touches(e.b)) {
                        continue;
                    }
                    let bigger = Simplex::from_edges(s.edges().iter().copied().chain([e])).unwrap();
                    prop_assert!(is_face(&delta, &bigger).unwrap());
                }
            }
        }
    }

    #[test]
    fn bounded_faces_respect_degrees(lambda in prop::collection::vec(0u8..=2, 2..=5)) {
        let n = lambda.len();
        let spec = ComplexSpec::Bounded(DegreeVector::new(lambda.clone()).unwrap());
        let edges = all_edges(n as u8, true);
        // Brute force over all edge subsets; a loop counts twice.
        let mut expected = vec![0usize; edges.len() + 1];
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<Edge> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let s = Simplex::from_edges(chosen.clone()).unwrap();
            let ok = degrees(&s, n)[1..].iter().zip(&lambda).all(|(&d, &l)| d <= l as usize);
            prop_assert_eq!(is_face(&spec, &s).unwrap(), ok);
            if ok {
                expected[chosen.len()] += 1;
            }
        }
        let counts = face_counts(&spec);
        let expected: Vec<usize> = expected.into_iter().take_while(|&c| c > 0).collect();
        prop_assert_eq!(counts, expected);
    }

    #[test]
    fn gamma_and_delta_partition_the_matchings(blocks in blocks_strategy()) {
        let n = blocks.total();
        let m = face_counts(&ComplexSpec::Matching(n));
        let g = face_counts(&ComplexSpec::Gamma(blocks.clone()));
        let dl = face_counts(&ComplexSpec::Delta(blocks));
        for (i, &total) in m.iter().enumerate() {
            let gi = g.get(i).copied().unwrap_or(0);
            let di = dl.get(i).copied().unwrap_or(0);
            prop_assert_eq!(total, gi + di, "dimension {}", i as isize - 1);
        }
    }

    #[test]
    fn boundaries_square_to_zero(spec in spec_strategy()) {
        let c = FreeChainComplex::build(&spec).unwrap();
        prop_assert!(c.check_d_squared().unwrap());
    }

    #[test]
    fn boundary_columns_are_sparse_units(n in 2usize..=8) {
        let c = FreeChainComplex::build(&ComplexSpec::Matching(n)).unwrap();
        for d in 0..=c.top_dim() {
            let m = c.boundary(d).unwrap();
            for col in m.columns() {
                prop_assert_eq!(col.len() as isize, d + 1);
                prop_assert!(col.iter().all(|(_, v)| *v == BigInt::from(1) || *v == BigInt::from(-1)));
            }
        }
    }

    #[test]
    fn canonicalization_tracks_parity(idx in subsequence((0..21).collect::<Vec<usize>>(), 1..=4).prop_shuffle()) {
        let edges = all_edges(7, false);
        let tuple: Vec<Edge> = idx.iter().map(|&i| edges[i]).collect();
        let mut sorted = tuple.clone();
        let odd = sort_with_parity(&mut sorted).unwrap();
        // Parity by counting inversions.
        let inversions = (0..tuple.len())
            .flat_map(|i| (i + 1..tuple.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| tuple[i] > tuple[j])
            .count();
        prop_assert_eq!(odd, inversions % 2 == 1);
        let o = OrientedSimplex::from_edges(tuple.clone()).unwrap();
        prop_assert_eq!(o.sign, if odd { -1 } else { 1 });
        prop_assert_eq!(o.canonicalize(), o.clone());
        prop_assert_eq!(o.clone().negated().negated(), o);
    }

    #[test]
    fn euler_characteristic_matches_homology(n in 2usize..=8) {
        let c = FreeChainComplex::build(&ComplexSpec::Matching(n)).unwrap();
        let h = homology_free(&c, &HomologyOptions::default()).unwrap();
        prop_assert_eq!(reduced_euler_characteristic(&c.table().counts()), homology_euler_characteristic(&h));
        prop_assert!(universal_coefficients_hold(&h, &betti_mod_p(&c, 2, &HomologyOptions::default()).unwrap()));
        prop_assert!(universal_coefficients_hold(&h, &betti_mod_p(&c, 3, &HomologyOptions::default()).unwrap()));
    }

    #[test]
    fn action_axioms_and_equivariance(blocks in blocks_strategy(), s1 in prop::collection::vec(any::<u64>(), 8), s2 in prop::collection::vec(any::<u64>(), 8), coefs in prop::collection::vec(-3i64..=3, 1..12)) {
        let (complex, action) = matching_with_action(blocks).unwrap();
        let g = random_element(&action, &s1);
        let h = random_element(&action, &s2);
        let gh = action.compose(&g, &h);
        let id = action.identity();
        for d in 0..=complex.top_dim() {
            let c = random_chain(complex.table(), d, &coefs);
            let hc = action.act_chain(&h, &c).unwrap();
            prop_assert_eq!(action.act_chain(&g, &hc).unwrap(), action.act_chain(&gh, &c).unwrap());
            prop_assert_eq!(action.act_chain(&id, &c).unwrap(), c.clone());
            prop_assert_eq!(action.act_chain(&g, &c).unwrap().boundary(), action.act_chain(&g, &c.boundary()).unwrap());
            // pi is constant on G-orbits, hence vanishes on C^G.
            prop_assert_eq!(project_chain(&action.act_chain(&g, &c).unwrap(), &action).unwrap(), project_chain(&c, &action).unwrap());
            prop_assert!(project_chain(&c.sub(&action.act_chain(&g, &c).unwrap()).unwrap(), &action).unwrap().is_zero());
        }
    }

    #[test]
    fn transfer_commutes_and_inverts_up_to_order(blocks in blocks_strategy(), coefs in prop::collection::vec(-4i64..=4, 1..12)) {
        let (complex, action) = matching_with_action(blocks).unwrap();
        let order = action.group_order();
        for d in 0..=complex.top_dim() {
            let y = project_chain(&random_chain(complex.table(), d, &coefs), &action).unwrap();
            let phi = transfer_chain(&y, &action).unwrap();
            prop_assert_eq!(project_chain(&phi, &action).unwrap(), y.scale(&order));
            let dy = project_chain(&transfer_representatives_boundary(&y, &action), &action).unwrap();
            prop_assert_eq!(phi.boundary(), transfer_chain(&dy, &action).unwrap());
        }
    }

    #[test]
    fn orbits_cover_faces_once(blocks in blocks_strategy()) {
        let (complex, action) = matching_with_action(blocks).unwrap();
        for d in -1..=complex.top_dim() {
            let orbits = orbit_decompose(&complex, &action, d).unwrap();
            let total: usize = orbits.iter().map(|o| o.size).sum();
            prop_assert_eq!(total, complex.table().count(d));
            for o in &orbits {
                let members = action.orbit(&o.representative).members;
                prop_assert_eq!(members.len(), o.size);
                prop_assert!(members.iter().all(|(m, _)| *m >= o.representative));
                if o.part == Part::Delta {
                    prop_assert_eq!(o.kind, OrbitKind::OrderTwo);
                }
            }
        }
    }

    #[test]
    fn kappa_round_trips(blocks in blocks_strategy(), coefs in prop::collection::vec(-4i64..=4, 1..12)) {
        let lambda = blocks.lambda();
        let bd = FaceTable::build(&ComplexSpec::Bounded(lambda)).unwrap();
        let action = YoungAction::new(blocks.clone());
        for d in -1..=bd.top_dim() {
            for tau in bd.faces(d) {
                let sigma = kappa_fiber_representative(tau, &blocks).unwrap();
                prop_assert_eq!(sigma.len(), tau.len());
                prop_assert_eq!(&kappa_simplex(&sigma, &blocks).unwrap(), tau);
            }
            let c = random_chain(&bd, d, &coefs);
            let q = kappa_inverse(&c, &action).unwrap();
            prop_assert!(q.is_gamma_supported(&action));
            prop_assert_eq!(kappa_iso(&q, &action).unwrap(), c.clone());
            // kappa-hat commutes with the boundary.
            let dq = project_chain(&transfer_representatives_boundary(&q, &action), &action).unwrap();
            prop_assert_eq!(kappa_iso(&dq, &action).unwrap(), c.boundary());
        }
    }

    #[test]
    fn homology_ignores_the_choice_of_blocks(blocks in blocks_strategy()) {
        let lambda = blocks.lambda();
        let opts = HomologyOptions::default();
        let (c1, a1) = matching_with_action(blocks).unwrap();
        let (c2, a2) = matching_with_action(Blocks::consecutive(&lambda).unwrap()).unwrap();
        let h1 = homology_presented(&quotient_complex(&c1, &a1).unwrap(), "random blocks", &opts).unwrap();
        let h2 = homology_presented(&quotient_complex(&c2, &a2).unwrap(), "consecutive blocks", &opts).unwrap();
        prop_assert_eq!(h1.degrees, h2.degrees);
    }

    #[test]
    fn chain_text_round_trips(n in 3usize..=7, d in 0isize..=2, coefs in prop::collection::vec(-9i64..=9, 1..8)) {
        let table = FaceTable::build(&ComplexSpec::Matching(n)).unwrap();
        prop_assume!(d <= table.top_dim());
        let c = random_chain(&table, d, &coefs);
        let back: ChainVector = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}

/// Boundary of the representative lift of a quotient chain.
fn transfer_representatives_boundary(q: &matchtor_core::young::QuotientChain, _action: &YoungAction) -> ChainVector {
    let mut lifted = ChainVector::zero(q.degree);
    for (rep, k) in &q.coords {
        lifted.add_term(&OrientedSimplex::positive(rep.clone()), k).unwrap();
    }
    lifted.boundary()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiples_of_torsion_classes(k in 1i64..=30, n in select(vec![7usize, 8])) {
        let c = FreeChainComplex::build(&ComplexSpec::Matching(n)).unwrap();
        let opts = HomologyOptions::default();
        for (z, order) in extract_torsion_generators(&c, 1, &opts).unwrap() {
            let kz = z.scale(&BigInt::from(k));
            let expected = &order / order.gcd(&BigInt::from(k));
            prop_assert_eq!(class_order(&kz, &c, &opts).unwrap(), Some(expected));
        }
    }

    #[test]
    fn boundary_of_simplex_drops_each_edge(idx in subsequence((0..15).collect::<Vec<usize>>(), 1..=3)) {
        let s = Simplex::from_edges(idx.iter().map(|&i| all_edges(6, false)[i])).unwrap();
        let b = boundary_of_simplex(&OrientedSimplex::positive(s.clone()));
        prop_assert_eq!(b.len(), s.len());
        for i in 0..s.len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(b.coefficient(&s.without(i)), BigInt::from(sign));
        }
    }
}
