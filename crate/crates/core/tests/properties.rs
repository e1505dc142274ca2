use parabola_core::arith::is_prime_u64;
use parabola_core::graph::{relation_holds, Adjacency};
use parabola_core::structure::{codegree_bits, codegree_closed_form};
use parabola_core::{ParabolaGraph, ParabolaRelation, Prime, Vertex};
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(Prime::range(3, 200))
}

fn any_prime() -> impl Strategy<Value = Prime> {
    (3u64..(1 << 31) - 1).prop_filter_map("not prime", |c| Prime::new(c).ok())
}

proptest! {
    #[test]
    fn field_ops_round_trip(p in any_prime(), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (p.element(a), p.element(b));
        prop_assert_eq!(a.try_add(b).unwrap().try_sub(b).unwrap(), a);
        prop_assert_eq!(a.square(), p.element(p.get() - a.residue()).square());
        if a.residue() != 0 {
            prop_assert_eq!(a.try_mul(a.inverse().unwrap()).unwrap().residue(), 1);
        }
    }

    #[test]
    fn validation_agrees_with_miller_rabin(c in 0u64..10_000_000) {
        let ok = Prime::new(c).is_ok();
        prop_assert_eq!(ok, c >= 3 && c % 2 == 1 && is_prime_u64(c));
    }

    #[test]
    fn vertex_id_round_trip(p in small_prime(), seed in any::<usize>()) {
        let id = seed % p.square();
        let v = Vertex::from_id(p, id);
        prop_assert_eq!(v.id(), id);
        prop_assert!(v.x() < p.get() && v.y() < p.get());
    }

    #[test]
    fn implicit_neighbourhoods_satisfy_relation(p in small_prime(), seed in any::<usize>()) {
        let rel = ParabolaRelation { p };
        let v = seed % p.square();
        let q = p.get() as usize;
        let mut nb = Vec::new();
        rel.for_each_neighbor(v, &mut |u| nb.push(u));
        let expected = if relation_holds(p.get(), (v / q) as u64, (v % q) as u64, (v / q) as u64, (v % q) as u64) {
            q - 1
        } else {
            q
        };
        prop_assert_eq!(nb.len(), expected);
        for u in nb {
            prop_assert!(rel.is_edge(u, v) && rel.is_edge(v, u));
        }
    }

    #[test]
    fn closed_form_codegree_is_at_most_one(p in any_prime(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), d in any::<u64>()) {
        let (u, v) = (Vertex::new(p, a, b), Vertex::new(p, c, d));
        prop_assume!(u != v);
        prop_assert!(codegree_closed_form(p, u, v) <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn codegree_methods_agree_on_random_pairs(q in prop::sample::select(vec![19u64, 23, 29, 31, 37]), pairs in prop::collection::vec((any::<usize>(), any::<usize>()), 500)) {
        let p = Prime::new(q).unwrap();
        let g = ParabolaGraph::build(p).unwrap();
        let n = g.vertex_count();
        for (a, b) in pairs {
            let (u, v) = (a % n, b % n);
            if u == v {
                continue;
            }
            prop_assert_eq!(
                codegree_bits(g.bits(), u, v),
                codegree_closed_form(p, g.vertex(u), g.vertex(v))
            );
        }
    }
}

#[test]
fn degree_sum_and_profile() {
    for p in Prime::range(3, 31) {
        let g = ParabolaGraph::build(p).unwrap();
        let q = p.get() as usize;
        let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, q * q * q - q);
        assert_eq!(degree_sum, 2 * g.edge_count());
        assert_eq!(g.degree_profile(), vec![(q - 1, q), (q, q * q - q)]);
    }
}
