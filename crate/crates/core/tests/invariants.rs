use hk_freeze::configs::{make_dumbbell_chain, Family};
use hk_freeze::gaps::{gaps_from_state, GapUpdateMatrix};
use hk_freeze::harness::{freeze_sweep, freeze_sweep_serial};
use hk_freeze::{
    clusters, is_frozen, receptivity, simulate, step, Configuration, Rational, Scalar,
};
use proptest::prelude::*;

fn rational_line(max_len: usize) -> impl Strategy<Value = Configuration<Rational>> {
    // gaps drawn from {0, k/6 : 1 <= k <= 12} so that exact ties at distance 1 occur
    (
        -12i64..12,
        proptest::collection::vec(prop_oneof![Just(0i64), Just(6), 1i64..=12], 0..max_len),
    )
        .prop_map(|(start, gaps)| {
            let mut x = Rational::from_ratio(start, 6);
            let mut v = vec![x.clone()];
            for g in gaps {
                x += Rational::from_ratio(g, 6);
                v.push(x.clone());
            }
            Configuration::line(v).unwrap()
        })
}

fn plane_points() -> impl Strategy<Value = Configuration<Rational>> {
    proptest::collection::vec((-8i64..8, -8i64..8), 1..7).prop_map(|pts| {
        let pts = pts
            .into_iter()
            .map(|(a, b)| vec![Rational::from_ratio(a, 4), Rational::from_ratio(b, 4)])
            .collect();
        Configuration::new(2, pts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn step_preserves_order_and_contracts_hull(c in rational_line(12)) {
        let next = step(&c);
        prop_assert!(next.is_sorted());
        let (lo, hi) = c.hull();
        let (nlo, nhi) = next.hull();
        prop_assert!(nlo[0] >= lo[0]);
        prop_assert!(nhi[0] <= hi[0]);
    }

    #[test]
    fn frozen_iff_fixed_point(c in rational_line(10)) {
        prop_assert_eq!(is_frozen(&c), step(&c) == c);
    }

    #[test]
    fn frozen_iff_fixed_point_in_plane(c in plane_points()) {
        prop_assert_eq!(is_frozen(&c), step(&c) == c);
    }

    #[test]
    fn line_components_are_index_intervals(c in rational_line(12)) {
        let g = receptivity(&c);
        let intervals = g.component_intervals().expect("1D components are intervals");
        let covered: usize = intervals.iter().map(|r| r.len()).sum();
        prop_assert_eq!(covered, c.len());
        for w in intervals.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
    }

    #[test]
    fn freezes_inside_initial_hull(c in rational_line(8)) {
        let run = simulate(&c, 1000, false);
        prop_assert!(run.frozen);
        let (lo, hi) = c.hull();
        for k in clusters(&run.final_config) {
            prop_assert!(k.position[0] >= lo[0] && k.position[0] <= hi[0]);
        }
    }

    #[test]
    fn reflection_commutes_with_step(c in rational_line(10)) {
        let mirrored = Configuration::line(c.coords().iter().map(|x| -x.clone()).collect()).unwrap();
        let a = step(&mirrored);
        let b: Vec<Rational> = step(&c).coords().iter().rev().map(|x| -x.clone()).collect();
        prop_assert_eq!(a.coords(), b.as_slice());
    }

    #[test]
    fn float_matches_exact_on_coarse_grids(c in rational_line(10)) {
        let exact = simulate(&c, 1000, false);
        let float = simulate(&c.to_float(), 1000, false);
        prop_assert_eq!(exact.freeze_time, float.freeze_time);
    }
}

#[test]
fn dumbbell_gaps_follow_update_matrix_for_one_step() {
    for n in [4usize, 6, 10] {
        let d: Configuration<Rational> = make_dumbbell_chain(n).unwrap();
        let m = GapUpdateMatrix::build(n).unwrap();
        let y0 = gaps_from_state(&d, n, 0).unwrap();
        let y1 = gaps_from_state(&step(&d), n, 1).unwrap();
        assert_eq!(m.apply(&y0.y), y1.y, "n={n}");
        assert!(m.is_centrosymmetric());
    }
}

#[test]
fn parallel_sweep_matches_serial() {
    let ns = [4, 6, 8, 10, 12];
    for family in [Family::EqualSpaced, Family::DumbbellChain, Family::Kurz] {
        let par = freeze_sweep(family, &ns, None).unwrap();
        let ser = freeze_sweep_serial(family, &ns, None).unwrap();
        assert_eq!(par.len(), ser.len());
        for (a, b) in par.iter().zip(&ser) {
            assert!(a.same_outcome(b), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn first_contact_time_scales_quadratically() {
    for n in [16usize, 32, 64, 128] {
        let d: Configuration<f64> = make_dumbbell_chain(n).unwrap();
        let run = simulate(&d, n * n, false);
        let t_star = run.events.first().expect("topology change within n^2").t;
        let ratio = t_star as f64 / (n * n) as f64;
        assert!(
            (0.1..=0.5).contains(&ratio),
            "n={n}: t*={t_star}, ratio {ratio}"
        );
    }
}
