//! Cone-time facts of the lattice walk and the grid scans.

use hcburger::matching::*;
use hcburger::params::params_from_p;
use hcburger::walk::*;
use hcburger::word::*;
use proptest::prelude::*;

#[test]
fn flexible_orders_give_cone_times() {
    let params = params_from_p(0.3).unwrap();
    let mut checked = 0;
    for stream in 0..1000u64 {
        let n = 16 + (stream % 497) as i64;
        let full = sample_word(&params, -8 * n, n, 17, stream).unwrap();
        let fm = compute_matches(&full);
        let x = full.slice(1, n);
        let mut y = x.clone();
        let mut resolved = true;
        for i in 1..=n {
            if x.at(i) == Symbol::OF {
                match fm.phi(i) {
                    Partner::At(j) => y.symbols[(i - 1) as usize] = full.at(j).order_of(),
                    Partner::OutsideWindow => resolved = false,
                }
            }
        }
        if !resolved {
            continue;
        }
        let g = build_walk(&y, 1).unwrap().to_grid(n as u64);
        let mt = compute_matches(&x);
        for r in flex_records(&x, &mt) {
            if r.i - r.phi < 2 {
                continue;
            }
            let (i, j) = (r.i as usize, r.phi as usize);
            assert!(is_weak_cone_index(&g, i) && is_weak_cone_index(&g, i - 1));
            let h = cone_at(&g, i - 1).unwrap();
            assert_eq!(h.kv, j);
            assert!((h.v - r.phi as f64 / n as f64).abs() < 1e-12);
            if !r.degenerate {
                assert_eq!(h.dir, Some(r.dir));
            }
            let opposite = if x.at(r.phi) == Symbol::BC { Symbol::BH } else { Symbol::BC };
            let jp = (1..r.i).rev().find(|&a| reduce(&x.slice(a, r.i)).burgers.contains(&opposite));
            if let Some(jp) = jp {
                assert_eq!(h.ku, Some(jp as usize), "stream {stream} i {}", r.i);
            }
            checked += 1;
        }
    }
    assert!(checked > 1000, "{checked}");
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(ALPHABET.to_vec()), 1..=max).prop_map(|s| Word::new(1, s))
}

fn lattice_path(max: usize) -> impl Strategy<Value = GridPath> {
    prop::collection::vec((-1i32..=1, -1i32..=1), 1..=max).prop_map(|steps| {
        let (mut u, mut v) = (vec![0.0], vec![0.0]);
        for (a, b) in steps {
            u.push(u.last().unwrap() + a as f64);
            v.push(v.last().unwrap() + b as f64);
        }
        GridPath { t0: 0.0, dt: 1.0, u, v }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn maximal_times_are_disjoint_and_inside(w in word(200), lo in 1i64..100, len in 0i64..150) {
        let hi = lo + len;
        let mt = compute_matches(&w);
        let m = maximal_f_times(&w, &mt, lo, hi);
        for r in &m {
            prop_assert!(lo <= r.phi && r.i <= hi);
        }
        for a in &m {
            for b in &m {
                if a.i != b.i {
                    prop_assert!(a.i < b.phi || b.i < a.phi);
                }
            }
        }
        // Every matched o_f inside the window lies under some maximal one.
        for r in flex_records(&w, &mt) {
            if lo <= r.phi && r.i <= hi {
                prop_assert!(m.iter().any(|a| a.phi <= r.phi && r.i <= a.i));
            }
        }
    }

    #[test]
    fn walk_translation_identity(s in prop::collection::vec(prop::sample::select(vec![Symbol::BH, Symbol::BC, Symbol::OH, Symbol::OC]), 1..100), m in 0usize..100) {
        let y = Word::new(1, s);
        let m = (m % y.len()) as i64 + 1;
        let base = build_walk(&y, 1).unwrap();
        let shifted = build_walk(&y, m).unwrap();
        let (d0, s0) = base.at(m - 1).unwrap();
        for t in shifted.tmin..=shifted.tmax() {
            let (d, ds) = base.at(t + m - 1).unwrap();
            prop_assert_eq!(shifted.at(t).unwrap(), (d - d0, ds - s0));
        }
    }

    #[test]
    fn cone_scan_matches_brute_force(g in lattice_path(120), a in 0usize..60, r in 1usize..40) {
        let fast = continuous_cone_scan(&g, a as f64, r as f64);
        let slow = (a.max(1)..g.len()).filter_map(|k| cone_at(&g, k)).find(|h| h.t - h.v >= r as f64);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn weak_cone_index_by_definition(g in lattice_path(60), k in 0usize..60) {
        let k = k % (g.len() - 1) + 1;
        let def = g.u[k - 1] >= g.u[k] && g.v[k - 1] >= g.v[k];
        prop_assert_eq!(is_weak_cone_index(&g, k), def);
        if let Some(h) = cone_at(&g, k) {
            for m in h.kv..=k {
                prop_assert!(g.u[m] >= g.u[k] && g.v[m] >= g.v[k]);
            }
            if h.kv > 0 {
                prop_assert!(g.u[h.kv - 1] < g.u[k] || g.v[h.kv - 1] < g.v[k]);
            }
        }
    }
}
