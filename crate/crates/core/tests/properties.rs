use proptest::prelude::*;

use nmk_core::complex::{
    build_nm_complex, enumerate_family, join, Element, FamilySpec, GroundSet, SimplicialComplex, DEFAULT_ENUMERATION_CAP,
};
use nmk_core::graph::{
    canonical_form, check_structure, gallai_edmonds_on, matching_number_on, submasks, EdgeSet, Graph, VertexSet,
    DEFAULT_CANON_CAP,
};
use nmk_core::homology::{reduced_betti, FieldSpec};
use nmk_core::morse::{
    boolean_matching, build_matching, family_bound, join_matching, projection_matching, Construction, MorseError,
    ProjectionPart,
};
use nmk_core::rainbow::{find_rainbow_matching, rainbow_exists_brute_force, RainbowInstance};

fn edges_on(n: usize) -> impl Strategy<Value = EdgeSet> {
    let all = EdgeSet::complete(VertexSet::range(n)).0;
    any::<u64>().prop_map(move |m| EdgeSet(m & all))
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| edges_on(n).prop_map(move |e| Graph::from_edge_set(n, e).unwrap()))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn low(w: usize) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

/// Family on `block` from a selector mask, never empty.
fn family_from(block: u64, pick: u64) -> Vec<u64> {
    let members: Vec<u64> = submasks(block).collect();
    let mut f: Vec<u64> = members.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, &s)| s).collect();
    if f.is_empty() {
        f.push(members[(pick as usize) % members.len()]);
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rainbow_search_agrees_with_brute_force(
        n in 2usize..=6,
        masks in prop::collection::vec(any::<u64>(), 1..=4),
        k in 1usize..=3,
    ) {
        let all = EdgeSet::complete(VertexSet::range(n)).0;
        let sets: Vec<EdgeSet> = masks.iter().map(|m| EdgeSet(m & all)).collect();
        let inst = RainbowInstance::new(Graph::complete(n).unwrap(), sets, k).unwrap();
        let found = find_rainbow_matching(&inst);
        prop_assert_eq!(found.is_some(), rainbow_exists_brute_force(&inst));
        if let Some(c) = found {
            prop_assert!(c.validate(&inst).is_ok());
        }
    }

    #[test]
    fn boolean_split_pairs_by_the_element(width in 1usize..=5, pick in any::<u64>(), e in 0u32..5) {
        let block = low(width);
        let e = e % width as u32;
        let family = family_from(block, pick);
        let split = boolean_matching(&family, e);
        let mut both = split.f0.clone();
        both.extend(&split.f1);
        both.sort_unstable();
        let mut sorted = family.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(both, sorted);
        for &(s, t) in split.matching.pairs() {
            prop_assert_eq!(t, s | 1 << e);
            prop_assert_eq!(s & 1 << e, 0);
        }
        prop_assert_eq!(split.matching.len() * 2, split.f0.len());
        prop_assert!(Construction::new(block, family, split.matching).check().is_ok());
    }

    #[test]
    fn join_criticals_are_joins(
        widths in prop::collection::vec(1usize..=3, 2..=3),
        picks in prop::collection::vec(any::<u64>(), 3),
        elems in prop::collection::vec(0u32..3, 3),
    ) {
        let mut next = 0;
        let parts: Vec<Construction> = widths.iter().enumerate().map(|(i, &w)| {
            let block = low(w) << next;
            let family = family_from(block, picks[i]);
            let split = boolean_matching(&family, next + elems[i] % w as u32);
            next += w as u32;
            Construction::new(block, family, split.matching)
        }).collect();
        let out = join_matching(&parts).unwrap();
        prop_assert!(out.check().is_ok());
        let mut expected = vec![0u64];
        for p in &parts {
            expected = expected.iter().flat_map(|&a| p.critical().into_iter().map(move |b| a | b)).collect();
        }
        expected.sort_unstable();
        prop_assert_eq!(out.critical(), expected);
    }

    #[test]
    fn projection_sizes_and_injectivity(
        widths in prop::collection::vec(1usize..=3, 1..=4),
        tau_bits in any::<u64>(),
        pick in any::<u64>(),
        e in 0u32..4,
    ) {
        let mut next = 0;
        let parts: Vec<ProjectionPart> = widths.iter().enumerate().map(|(i, &w)| {
            let p = ProjectionPart { index: i as u32, mask: low(w) << next };
            next += w as u32;
            p
        }).collect();
        let ground = low(next as usize);
        let tau = tau_bits & ground & (tau_bits >> 7);
        let project = |s: u64| parts.iter().filter(|p| p.mask & s != 0).fold(0u64, |a, p| a | 1 << p.index);
        let base = project(tau);
        let r = widths.len();
        let above: Vec<u64> = submasks(low(r) & !base).map(|s| s | base).collect();
        let q_family: Vec<u64> = {
            let f: Vec<u64> = above.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &s)| s).collect();
            if f.is_empty() { vec![above[0]] } else { f }
        };
        let free: Vec<u32> = (0..r as u32).filter(|b| base >> b & 1 == 0).collect();
        let m = if free.is_empty() { Default::default() } else { boolean_matching(&q_family, free[e as usize % free.len()]).matching };
        let q = Construction::new(low(r), q_family, m);
        let out = projection_matching(&parts, tau, &q).unwrap();
        prop_assert!(out.check().is_ok());
        let crit = out.critical();
        let mut images: Vec<u64> = crit.iter().map(|&s| project(s)).collect();
        for &s in &crit {
            prop_assert_eq!(
                s.count_ones() as i64,
                project(s).count_ones() as i64 - base.count_ones() as i64 + tau.count_ones() as i64
            );
        }
        images.sort_unstable();
        images.dedup();
        prop_assert_eq!(images.len(), crit.len());
        let q_crit = q.critical();
        prop_assert!(images.iter().all(|p| q_crit.contains(p)));
    }

    #[test]
    fn pm_and_fc_constructions(n in 1usize..=6, h_bits in any::<u64>(), density in 0u32..4) {
        let vs = VertexSet::range(n);
        // Sparse H keeps the families large.
        let h = EdgeSet(h_bits & (h_bits >> 13) & (h_bits >> (17 + density)) & EdgeSet::complete(vs).0);
        let spec = if n % 2 == 0 { FamilySpec::Pm { vertices: vs, h } } else { FamilySpec::Fc { vertices: vs, h } };
        let c = build_matching(&spec).unwrap();
        prop_assert!(c.check().is_ok());
        let bound = family_bound(&spec);
        for s in c.critical() {
            prop_assert!(bound.admits(s.count_ones() as usize), "{:#x} against {}", s, bound.describe());
        }
    }

    #[test]
    fn bfc_constructions(a in 1usize..=3, b in 1usize..=3, z_bits in any::<u32>(), h_bits in any::<u64>()) {
        let (x, y) = (VertexSet::range(a), VertexSet::from_range(a, a + b));
        let z = VertexSet(z_bits & x.0);
        let h = EdgeSet(h_bits & (h_bits >> 11) & EdgeSet::complete_bipartite(x, y).0);
        let spec = FamilySpec::Bfc { x, y, z, h };
        let empty = enumerate_family(&spec, DEFAULT_ENUMERATION_CAP).unwrap().is_empty();
        let c = match build_matching(&spec) {
            Err(MorseError::EmptyFamily) => {
                prop_assert!(empty);
                return Ok(());
            }
            other => other.unwrap(),
        };
        prop_assert!(!empty);
        prop_assert!(c.check().is_ok());
        let bound = family_bound(&spec);
        prop_assert!(c.critical().iter().all(|s| bound.admits(s.count_ones() as usize)));
    }

    #[test]
    fn link_constructions(n in 2usize..=6, k in 2usize..=3, h_bits in any::<u64>()) {
        let vs = VertexSet::range(n);
        let h = EdgeSet(h_bits & (h_bits >> 9) & (h_bits >> 21) & EdgeSet::complete(vs).0);
        let nu = matching_number_on(h, vs);
        prop_assume!(nu >= 1 && nu < k);
        let spec = FamilySpec::NmlinkComplete { vertices: vs, h, k };
        let c = build_matching(&spec).unwrap();
        prop_assert!(c.check().is_ok());
        let bound = family_bound(&spec);
        prop_assert!(c.critical().iter().all(|s| bound.admits(s.count_ones() as usize)));
    }

    #[test]
    fn gallai_edmonds_structure(g in graph(8)) {
        let ge = gallai_edmonds_on(g.edges(), g.vertices());
        prop_assert!(check_structure(g.edges(), g.vertices(), &ge).is_ok());
        // Deficiency is the number of odd components not matched into A.
        let deficiency = ge.r() - ge.a_set.len();
        prop_assert_eq!(2 * g.matching_number() + deficiency, g.vertex_count());
    }

    #[test]
    fn canonical_form_ignores_labels(n in 1usize..=6, e in any::<u64>(), perm_seed in any::<u64>()) {
        let all = EdgeSet::complete(VertexSet::range(n)).0;
        let g = Graph::from_edge_set(n, EdgeSet(e & all)).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let h = Graph::from_edge_set(n, g.edges().relabel(&perm)).unwrap();
        prop_assert_eq!(canonical_form(&g, DEFAULT_CANON_CAP).unwrap(), canonical_form(&h, DEFAULT_CANON_CAP).unwrap());
    }

    #[test]
    fn relabelling_keeps_betti_numbers(g in graph(5), k in 1usize..=3, perm in permutation(5)) {
        let n = g.vertex_count();
        let p: Vec<usize> = perm.iter().copied().filter(|&v| v < n).collect();
        let h = Graph::from_edge_set(n, g.edges().relabel(&p)).unwrap();
        let a = reduced_betti(&build_nm_complex(&g, k, DEFAULT_ENUMERATION_CAP).unwrap(), FieldSpec::Gf2).unwrap();
        let b = reduced_betti(&build_nm_complex(&h, k, DEFAULT_ENUMERATION_CAP).unwrap(), FieldSpec::Gf2).unwrap();
        prop_assert!(a.same_numbers(&b));
    }

    #[test]
    fn cones_are_acyclic(g in graph(5), k in 1usize..=2) {
        let nm = build_nm_complex(&g, k, DEFAULT_ENUMERATION_CAP).unwrap();
        let apex = SimplicialComplex::simplex(GroundSet::new(vec![Element::labelled(0, 1, 99)]).unwrap());
        let cone = join(&nm, &apex).unwrap();
        let t = reduced_betti(&cone, FieldSpec::Gf2).unwrap();
        prop_assert!(t.vanishes_from(-1));
    }

    #[test]
    fn euler_characteristic_matches_faces(g in graph(5), k in 1usize..=3) {
        let nm = build_nm_complex(&g, k, DEFAULT_ENUMERATION_CAP).unwrap();
        let t = reduced_betti(&nm, FieldSpec::Gf2).unwrap();
        // Reduced: the empty face counts in dimension -1.
        let from_faces: i64 = nm.f_vector().iter().enumerate().map(|(i, &c)| if i % 2 == 0 { -(c as i64) } else { c as i64 }).sum();
        prop_assert_eq!(t.euler_characteristic(), from_faces);
    }
}

#[test]
fn nm_vanishing_holds_on_small_random_graphs() {
    // Exhaustive companion to the sweeps: every graph on 4 labelled vertices.
    let all = EdgeSet::complete(VertexSet::range(4));
    for m in submasks(all.0) {
        let g = Graph::from_edge_set(4, EdgeSet(m)).unwrap();
        for k in 1..=2 {
            let t = reduced_betti(&build_nm_complex(&g, k, DEFAULT_ENUMERATION_CAP).unwrap(), FieldSpec::Gf2).unwrap();
            assert!(t.vanishes_from(3 * k as isize - 3), "{m:#x} k={k}");
        }
    }
}
