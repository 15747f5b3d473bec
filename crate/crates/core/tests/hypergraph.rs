mod common;

use common::{small_board, uniform_board};
use mbgames::hypergraph::Star;
use mbgames::{Hypergraph, Vertex, WorkGuard};
use proptest::prelude::*;

fn shift(h: &Hypergraph, by: usize, n: usize) -> Hypergraph {
    let edges = h
        .edges()
        .iter()
        .map(|e| e.iter().map(|&v| v + by as Vertex).collect::<Vec<_>>());
    Hypergraph::with_uniformity(n, h.uniformity().unwrap_or(3), edges).unwrap()
}

/// Every set of `d` edges that share a vertex and pairwise meet only there.
fn brute_stars(h: &Hypergraph, d: usize) -> Vec<Vec<usize>> {
    let e = h.num_edges();
    let mut out = Vec::new();
    for mask in 0u32..1 << e {
        if mask.count_ones() as usize != d {
            continue;
        }
        let set: Vec<usize> = (0..e).filter(|i| mask >> i & 1 == 1).collect();
        let common: Vec<Vertex> = h
            .edge(set[0])
            .iter()
            .copied()
            .filter(|v| set.iter().all(|&i| h.edge(i).contains(v)))
            .collect();
        if common.is_empty() {
            continue;
        }
        let pairwise = set.iter().enumerate().all(|(a, &i)| {
            set[a + 1..]
                .iter()
                .all(|&j| h.edge(i).iter().filter(|v| h.edge(j).contains(v)).count() == 1)
        });
        if d == 1 || pairwise {
            out.push(set);
        }
    }
    out
}

fn support(h: &Hypergraph, edges: &[usize]) -> Vec<Vertex> {
    let mut vs: Vec<Vertex> = edges.iter().flat_map(|&i| h.edge(i).to_vec()).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Whether some `k` of the candidate stars have pairwise disjoint supports.
fn brute_disjoint(h: &Hypergraph, stars: &[Vec<usize>], k: usize, from: usize, used: &mut Vec<Vertex>) -> bool {
    if k == 0 {
        return true;
    }
    for i in from..stars.len() {
        let sup = support(h, &stars[i]);
        if sup.iter().any(|v| used.contains(v)) {
            continue;
        }
        let before = used.len();
        used.extend(&sup);
        if brute_disjoint(h, stars, k - 1, i + 1, used) {
            return true;
        }
        used.truncate(before);
    }
    false
}

fn check_star(h: &Hypergraph, star: &Star, d: usize) -> bool {
    star.edges.len() == d
        && star.edges.iter().all(|&i| h.edge(i).contains(&star.centre))
        && star.edges.iter().enumerate().all(|(a, &i)| {
            star.edges[a + 1..]
                .iter()
                .all(|&j| h.edge(i).iter().filter(|v| h.edge(j).contains(v)).count() == 1)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn excess_is_additive(
        (a, b) in (2usize..=3).prop_flat_map(|s| (uniform_board(7, s, 6), uniform_board(6, s, 6)))
    ) {
        let n = a.n() + b.n();
        let joined = a.disjoint_union(&b).unwrap();
        let left = shift(&a, 0, n);
        let right = shift(&b, a.n(), n);
        prop_assert_eq!(
            joined.excess().unwrap(),
            left.excess().unwrap() + right.excess().unwrap()
        );
    }

    #[test]
    fn tree_unicycle_closed_under_edge_deletion(h in uniform_board(12, 3, 5), keep in any::<u32>()) {
        prop_assume!(h.is_tree_unicycle_collection().unwrap());
        let sub = h.retain_edges(|i| keep >> i & 1 == 1);
        prop_assert!(sub.is_tree_unicycle_collection().unwrap());
    }

    #[test]
    fn easier_is_reflexive(h in small_board(7, 6)) {
        prop_assert!(h.is_easier(&h).unwrap());
    }

    #[test]
    fn easier_is_transitive(
        c in uniform_board(7, 4, 5),
        cut_b in prop::collection::vec(0usize..4, 5),
        cut_a in prop::collection::vec(0usize..3, 5),
        other in uniform_board(7, 3, 4),
    ) {
        // b shrinks each edge of c, a shrinks each edge of b.
        let b_edges: Vec<Vec<Vertex>> = c.edges().iter().zip(&cut_b).map(|(e, &k)| {
            let mut e = e.clone();
            e.remove(k % e.len());
            e
        }).collect();
        let b = Hypergraph::new(7, b_edges.iter().chain(other.edges())).unwrap();
        let a_edges: Vec<Vec<Vertex>> = b.edges().iter().zip(cut_a.iter().cycle()).map(|(e, &k)| {
            let mut e = e.clone();
            if e.len() > 1 {
                e.remove(k % e.len());
            }
            e
        }).collect();
        let a = Hypergraph::new(7, a_edges).unwrap();
        prop_assert!(b.is_easier(&c).unwrap());
        prop_assert!(a.is_easier(&b).unwrap());
        prop_assert!(a.is_easier(&c).unwrap());
        for (x, y, z) in [(&a, &b, &other), (&other, &a, &b), (&c, &other, &a)] {
            if x.is_easier(y).unwrap() && y.is_easier(z).unwrap() {
                prop_assert!(x.is_easier(z).unwrap());
            }
        }
    }

    #[test]
    fn star_search_matches_brute_force(h in small_board(7, 7), d in 1usize..=3, k in 1usize..=2) {
        let stars = brute_stars(&h, d);
        prop_assert_eq!(h.count_d_stars(d, WorkGuard::default()).unwrap(), stars.len() as u64);
        let found = h.find_disjoint_d_stars(d, k, WorkGuard::default()).unwrap();
        let expected = brute_disjoint(&h, &stars, k, 0, &mut Vec::new());
        prop_assert_eq!(found.is_some(), expected);
        if let Some(found) = found {
            prop_assert_eq!(found.len(), k);
            let mut used = Vec::new();
            for star in &found {
                prop_assert!(check_star(&h, star, d));
                for v in star.support(&h) {
                    prop_assert!(!used.contains(&v));
                    used.push(v);
                }
            }
        }
    }

    #[test]
    fn one_stars_are_edges(h in small_board(7, 8)) {
        prop_assert_eq!(h.count_d_stars(1, WorkGuard::default()).unwrap(), h.num_edges() as u64);
    }

    #[test]
    fn json_round_trip(h in small_board(9, 8)) {
        let text = h.to_json();
        let back = Hypergraph::from_json(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn covering_matches_enumeration(h in small_board(7, 8), t in 1usize..=7) {
        let n = h.n();
        let mut expected = true;
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != t {
                continue;
            }
            let inside = h.edges().iter().any(|e| e.iter().all(|&v| mask >> v & 1 == 1));
            if !inside {
                expected = false;
                break;
            }
        }
        if t > n {
            expected = true;
        }
        prop_assert_eq!(h.covers_all_t_subsets(t, WorkGuard::default()).unwrap(), expected);
    }
}

#[test]
fn max_disjoint_stars_is_maximum() {
    let h = Hypergraph::new(
        9,
        vec![vec![0, 1], vec![0, 2], vec![3, 4], vec![3, 5], vec![6, 7], vec![6, 8], vec![2, 4]],
    )
    .unwrap();
    let stars = h.max_disjoint_d_stars(2, WorkGuard::default()).unwrap();
    assert_eq!(stars.len(), 3);
}
