//! Property tests for the class arithmetic and the criteria.

use proptest::prelude::*;

use linsys3::criteria::{build_certificate, check_bpf, check_nonspecial, check_very_ample, Goal, TriState};
use linsys3::divclass::{cremona_reduce, parse_any, AnyClass, PlaneClass, QuadricClass, SurfaceClass};
use linsys3::ThreefoldClass;

fn mults(max_len: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, 0..=max_len)
}

fn threefold() -> impl Strategy<Value = ThreefoldClass> {
    (0i64..=10, mults(12, 0, 4)).prop_map(|(d, m)| ThreefoldClass::new(d, m))
}

fn plane() -> impl Strategy<Value = PlaneClass> {
    (0i64..=12, mults(10, 0, 5)).prop_map(|(d, m)| PlaneClass::new(d, m))
}

/// Same class with the multiplicities shuffled.
fn with_permutation<T: Clone + std::fmt::Debug>(
    base: impl Strategy<Value = T>,
    mults_of: fn(&T) -> Vec<i64>,
    rebuild: fn(&T, Vec<i64>) -> T,
) -> impl Strategy<Value = (T, T)> {
    base.prop_flat_map(move |c| {
        let m = mults_of(&c);
        (Just(c), Just(m).prop_shuffle())
    })
    .prop_map(move |(c, m)| {
        let p = rebuild(&c, m);
        (c, p)
    })
}

fn plane_lattice(len: usize) -> impl Strategy<Value = PlaneClass> {
    (-5i64..=5, prop::collection::vec(-5i64..=5, len)).prop_map(|(d, m)| PlaneClass::new(d, m))
}

fn quadric_lattice(len: usize) -> impl Strategy<Value = QuadricClass> {
    (-5i64..=5, -5i64..=5, prop::collection::vec(-5i64..=5, len)).prop_map(|(a, b, m)| QuadricClass::new(a, b, m))
}

fn plane_add(x: &PlaneClass, y: &PlaneClass, k: i64) -> PlaneClass {
    PlaneClass::new(x.d + k * y.d, x.mults.iter().zip(&y.mults).map(|(a, b)| a + k * b).collect::<Vec<_>>())
}

fn quadric_add(x: &QuadricClass, y: &QuadricClass, k: i64) -> QuadricClass {
    QuadricClass::new(
        x.a + k * y.a,
        x.b + k * y.b,
        x.mults.iter().zip(&y.mults).map(|(a, b)| a + k * b).collect::<Vec<_>>(),
    )
}

proptest! {
    #[test]
    fn threefold_invariants_ignore_order(
        (c, p) in with_permutation(threefold(), |c| c.mults.clone(), |c, m| ThreefoldClass::new(c.d, m))
    ) {
        prop_assert_eq!(c.vdim().unwrap(), p.vdim().unwrap());
        prop_assert_eq!(check_nonspecial(&c), check_nonspecial(&p));
        prop_assert_eq!(check_bpf(&c), check_bpf(&p));
        prop_assert_eq!(check_very_ample(&c), check_very_ample(&p));
    }

    #[test]
    fn plane_invariants_ignore_order(
        (c, p) in with_permutation(plane(), |c| c.mults.clone(), |c, m| PlaneClass::new(c.d, m))
    ) {
        prop_assert_eq!(c.vdim(), p.vdim());
        prop_assert_eq!(c.is_standard_form(), p.is_standard_form());
        prop_assert_eq!(cremona_reduce(&c).1.status, cremona_reduce(&p).1.status);
    }

    #[test]
    fn plane_pairing_symmetric_bilinear(
        (x, y, z) in (0usize..8).prop_flat_map(|n| (plane_lattice(n), plane_lattice(n), plane_lattice(n))),
        k in -5i64..=5,
    ) {
        let pair = |a: &PlaneClass, b: &PlaneClass| {
            SurfaceClass::Plane(a.clone()).pair(&SurfaceClass::Plane(b.clone())).unwrap()
        };
        prop_assert_eq!(pair(&x, &y), pair(&y, &x));
        prop_assert_eq!(pair(&plane_add(&x, &y, k), &z), pair(&x, &z) + k * pair(&y, &z));
    }

    #[test]
    fn quadric_pairing_symmetric_bilinear(
        (x, y, z) in (0usize..8).prop_flat_map(|n| (quadric_lattice(n), quadric_lattice(n), quadric_lattice(n))),
        k in -5i64..=5,
    ) {
        let pair = |a: &QuadricClass, b: &QuadricClass| {
            SurfaceClass::Quadric(a.clone()).pair(&SurfaceClass::Quadric(b.clone())).unwrap()
        };
        prop_assert_eq!(pair(&x, &y), pair(&y, &x));
        prop_assert_eq!(pair(&quadric_add(&x, &y, k), &z), pair(&x, &z) + k * pair(&y, &z));
    }

    #[test]
    fn quadric_to_plane_preserves_numbers(a in 0i64..=8, b in 0i64..=8, m in mults(10, 0, 4)) {
        let q = QuadricClass::new(a, b, m.clone());
        let p = q.to_plane();
        prop_assert_eq!(q.self_intersection(), p.self_intersection());
        prop_assert_eq!(q.k_intersection(), p.k_intersection());
        let riemann_roch = (a + 1) * (b + 1) - m.iter().map(|x| x * (x + 1) / 2).sum::<i64>() - 1;
        prop_assert_eq!(q.vdim(), riemann_roch);
        prop_assert_eq!(p.vdim(), riemann_roch);
    }

    #[test]
    fn cremona_moves_preserve_numbers(c in plane()) {
        let (reduced, log) = cremona_reduce(&c);
        for step in &log.steps {
            prop_assert_eq!(step.before.self_intersection(), step.after.self_intersection());
            prop_assert_eq!(step.before.k_intersection(), step.after.k_intersection());
            prop_assert_eq!(step.before.vdim(), step.after.vdim());
            prop_assert!(step.after.d < step.before.d);
        }
        prop_assert_eq!(reduced.vdim(), c.vdim());
    }

    #[test]
    fn chi_is_additive(c in threefold()) {
        let whole = c.vdim().unwrap() + 1;
        let residual = c.residual().vdim().unwrap() + 1;
        let plane = c.restricted_plane_class().vdim() + 1;
        prop_assert_eq!(whole, residual + plane);
    }

    #[test]
    fn raising_degree_keeps_positive_verdicts(c in threefold()) {
        let up = ThreefoldClass::new(c.d + 1, c.mults.clone());
        prop_assert!(!check_bpf(&c) || check_bpf(&up));
        prop_assert!(!check_very_ample(&c) || check_very_ample(&up));
    }

    #[test]
    fn raising_a_multiplicity_keeps_negative_verdicts(
        d in 0i64..=10,
        m in prop::collection::vec(1i64..=4, 1..=12),
        i in any::<prop::sample::Index>(),
    ) {
        let c = ThreefoldClass::new(d, m.clone());
        let mut bumped = m;
        let j = i.index(bumped.len());
        bumped[j] += 1;
        let up = ThreefoldClass::new(d, bumped);
        prop_assert!(check_bpf(&c) || !check_bpf(&up));
        prop_assert!(check_very_ample(&c) || !check_very_ample(&up));
    }

    #[test]
    fn rendered_classes_reparse(c in threefold(), p in plane(), a in 0i64..=6, b in 0i64..=6, m in mults(6, 0, 3)) {
        prop_assert_eq!(c.to_string().parse::<ThreefoldClass>().unwrap(), c.clone());
        match parse_any(&p.to_string()).unwrap() {
            AnyClass::Plane(back) => prop_assert_eq!(back, p),
            other => prop_assert!(false, "reparsed as {:?}", other),
        }
        let q = QuadricClass::new(a, b, m);
        match parse_any(&q.to_string()).unwrap() {
            AnyClass::Quadric(back) => prop_assert_eq!(back, q),
            other => prop_assert!(false, "reparsed as {:?}", other),
        }
    }
}

#[test]
fn quadric_without_points_maps_to_two_point_plane() {
    for a in 0..6 {
        for b in 0..6 {
            let q = QuadricClass::new(a, b, Vec::new());
            let p = q.to_plane();
            assert_eq!(p.d, a + b);
            assert_eq!(p.sorted().mults, PlaneClass::new(a + b, vec![a, b]).sorted().mults);
            assert_eq!(q.vdim(), (a + 1) * (b + 1) - 1);
            assert_eq!(p.vdim(), (a + 1) * (b + 1) - 1);
        }
    }
}

/// Non-increasing multiplicity vectors of length `r` with entries in `1..=m_max`.
fn partitions(r: usize, m_max: i64) -> Vec<Vec<i64>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for tail in partitions(r - 1, m_max) {
        let cap = tail.first().copied().unwrap_or(m_max);
        for head in 1..=cap {
            let mut v = vec![head];
            v.extend(&tail);
            out.push(v);
        }
    }
    out
}

#[test]
fn implication_chain_exhaustive() {
    let mut checked = 0;
    for d in 0..=10 {
        for r in 0..=14 {
            for m in partitions(r, 4) {
                let c = ThreefoldClass::new(d, m.clone());
                let (bpf, va) = (check_bpf(&c), check_very_ample(&c));
                let top2 = m.iter().take(2).sum::<i64>();
                assert!(!va || bpf, "{c}: very ample but not bpf");
                assert!(!bpf || d >= top2 - 1, "{c}: bpf with d < m1+m2-1");
                checked += 1;
            }
        }
    }
    assert!(checked > 30_000, "{checked}");
}

#[test]
fn positive_verdicts_have_certificates() {
    for d in 0..=10 {
        for r in 0..=14 {
            for m in partitions(r, 4) {
                let c = ThreefoldClass::new(d, m);
                let goals = [
                    (Goal::NonSpecial, check_nonspecial(&c) == TriState::Yes),
                    (Goal::BasePointFree, check_bpf(&c)),
                    (Goal::VeryAmple, check_very_ample(&c)),
                ];
                for (goal, holds) in goals {
                    if holds {
                        let cert = build_certificate(&c, goal);
                        assert!(cert.is_ok(), "{c} {goal}: {:?}", cert.status);
                    }
                }
            }
        }
    }
}
