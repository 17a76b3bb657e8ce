//! Build the planar map of a balanced word, count its loops and clusters, and
//! check the loop count against K(S).
//!
//! cargo run --example build_map -- 20

use hcburger::mapbuild::{build_map, map_loops, sample_balanced, weight_check};
use hcburger::params::params_from_p;
use hcburger::rng::chacha;

fn main() -> hcburger::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(20, |s| s.parse().unwrap());
    let params = params_from_p(0.3)?;
    let w = sample_balanced(&params, n, &mut chacha(3), 1 << 24)?;
    println!("word {}", w.compact());
    let m = build_map(&w)?;
    m.validate()?;
    let ml = map_loops(&m);
    println!(
        "vertices {} + {} dual, edges {}, faces (quads) {}",
        m.num_primal(),
        m.num_dual(),
        m.num_edges(),
        m.quads.len()
    );
    println!(
        "clusters {} + {} dual, loops {}, K(S) {}",
        ml.primal_clusters,
        ml.dual_clusters,
        ml.loops.len(),
        ml.k_of_s()
    );

    // Exact check that the word law weights each configuration by q^{K/2}.
    let r = weight_check(2, 1, 3)?;
    println!("weight check n=2 p=1/3: {} classes, max deviation {}, ok {}", r.classes, r.max_rel_deviation, r.ok);
    Ok(())
}
