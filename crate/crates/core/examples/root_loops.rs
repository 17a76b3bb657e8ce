//! The FK loops surrounding the root edge, read off a sampled word.
//!
//! cargo run --example root_loops -- 5000

use hcburger::loops::root_loops;
use hcburger::matching::compute_matches;
use hcburger::params::params_from_p;
use hcburger::word::sample_word;

fn main() -> hcburger::Result<()> {
    let n: i64 = std::env::args().nth(1).map_or(5000, |s| s.parse().unwrap());
    let params = params_from_p(1.0 / 3.0)?;
    for replica in 0..3 {
        let w = sample_word(&params, -n, n, 7, replica)?;
        let mt = compute_matches(&w);
        println!("replica {replica}");
        for rep in root_loops(&w, &mt, 1)? {
            let e = rep.entry;
            match rep.stats {
                Some(st) => println!(
                    "  loop {:>2} {:?}: iota {} theta~ {:?} theta {:?}; area {} interior {} boundary {}",
                    e.j, e.dir, e.iota, e.theta_tilde, e.theta, st.full_area, st.interior_area, st.outer_boundary_len
                ),
                None => println!("  loop {:>2} {:?}: iota {}, runs past the window", e.j, e.dir, e.iota),
            }
        }
    }
    Ok(())
}
