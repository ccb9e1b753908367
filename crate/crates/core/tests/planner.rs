mod common;

use common::{brute_force_distances, random_graph, rng, uniform_vector};
use nalgebra::DVector;
use rand::Rng;
use spinflow::planner::*;

#[test]
fn dijkstra_agrees_with_brute_force() {
    let mut r = rng(2024);
    for case in 0..200 {
        let g = random_graph(&mut r, 8, 20);
        let src = r.gen_range(0..g.len());
        let got = dijkstra(&g, src).unwrap();
        let expected = brute_force_distances(&g, src);
        for (v, (&d, &b)) in got.dist.iter().zip(&expected).enumerate() {
            assert!(d == b || (d - b).abs() <= 1e-12, "case {case}, node {v}: {d} vs {b}");
        }
        for v in 0..g.len() {
            match got.path_to(v).unwrap() {
                PathResult::Found { nodes, cost } => {
                    assert_eq!(nodes[0], src);
                    assert_eq!(*nodes.last().unwrap(), v);
                    let walked: f64 = nodes.windows(2).map(|w| g.weight(w[0], w[1]).unwrap()).sum();
                    assert!((walked - cost).abs() <= 1e-12);
                }
                PathResult::Unreachable => assert!(expected[v].is_infinite()),
            }
        }
    }
}

#[test]
fn distances_are_a_relaxation_fixpoint() {
    let mut r = rng(7);
    for _ in 0..200 {
        let g = random_graph(&mut r, 12, 40);
        let res = dijkstra(&g, 0).unwrap();
        for (u, v, w) in g.edges() {
            assert!(res.dist[v] <= res.dist[u] + w);
        }
    }
}

#[test]
fn repeated_runs_give_identical_predecessors() {
    let mut r = rng(99);
    for _ in 0..50 {
        let g = random_graph(&mut r, 10, 30);
        let a = dijkstra(&g, 0).unwrap();
        let b = dijkstra(&g.clone(), 0).unwrap();
        assert_eq!(a.pred, b.pred);
        assert_eq!(a.dist, b.dist);
    }
}

#[test]
fn symmetric_cost_gives_symmetric_weights() {
    let mut r = rng(8);
    let samples: Vec<DVector<f64>> = (0..12).map(|_| uniform_vector(&mut r, 2, 2.0)).collect();
    let cost = trapezoid_cost(|y: &DVector<f64>| 0.5 * y.norm_squared());
    for connect in [Connect::Complete, Connect::KNearest(3), Connect::Radius(1.5)] {
        let g = build_ndm_graph(&samples, connect, &cost).unwrap();
        for (u, v, w) in g.edges() {
            assert_eq!(g.weight(v, u), Some(w), "{connect:?}: {u} -> {v}");
        }
    }
}

#[test]
fn fixture_graph_round_trips() {
    let text = include_str!("../fixtures/triangle.graph");
    let g = read_graph(text).unwrap();
    let again = read_graph(&write_graph(&g)).unwrap();
    assert_eq!(again.payloads(), g.payloads());
    assert_eq!(again.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    match shortest_path(&g, 0, 2).unwrap() {
        PathResult::Found { nodes, cost } => {
            assert_eq!(nodes, vec![0, 1, 2]);
            assert_eq!(cost, 2.0);
        }
        PathResult::Unreachable => panic!("triangle is connected"),
    }
}
