//! Sample a window of the bi-infinite word, match it, resolve the flexible
//! orders and print the walk (d, d*) at a few times.
//!
//! cargo run --example matches_and_walk -- 0.25 2000

use hcburger::matching::{compute_matches, flex_records, Partner};
use hcburger::params::params_from_p;
use hcburger::walk::{build_walk, rescaled_eval};
use hcburger::word::{reduce, sample_word, Symbol};

fn main() -> hcburger::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: f64 = args.next().map_or(0.25, |s| s.parse().unwrap());
    let n: i64 = args.next().map_or(2000, |s| s.parse().unwrap());
    let params = params_from_p(p)?;

    // A long left margin so that most o_f symbols in X(1, n) find a burger.
    let w = sample_word(&params, -20 * n, n, 42, 0)?;
    let mt = compute_matches(&w);
    let recs = flex_records(&w, &mt);
    let inside = recs.iter().filter(|r| r.phi >= 1).count();
    println!("window [{}, {}]: {} matched o_f, {} inside X(1, n)", w.start, w.end(), recs.len(), inside);
    if let Some(r) = recs.iter().filter(|r| r.phi >= 1).max_by_key(|r| r.area()) {
        let star = match r.phi_star {
            Partner::At(k) => k.to_string(),
            Partner::OutsideWindow => "outside".into(),
        };
        println!("largest bubble: i {} phi {} phi* {star} dir {:?} area {} boundary {}", r.i, r.phi, r.dir, r.area(), r.boundary_len());
    }
    println!("reduced X(1, n) has {} symbols", reduce(&w.slice(1, n)).len());

    // Y agrees with X except at o_f, which take the kind of their burger.
    let mut y = w.slice(1, n);
    for i in 1..=n {
        if y.at(i) == Symbol::OF {
            match mt.phi(i) {
                Partner::At(j) => y.symbols[(i - 1) as usize] = w.at(j).order_of(),
                Partner::OutsideWindow => {
                    println!("o_f at {i} is matched before {}; widen the margin", w.start);
                    return Ok(());
                }
            }
        }
    }
    let path = build_walk(&y, 1)?;
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let (u, v) = rescaled_eval(&path, n as u64, t)?;
        println!("Z^n({t:.2}) = ({u:+.3}, {v:+.3})");
    }
    Ok(())
}
