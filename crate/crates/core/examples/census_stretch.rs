use dff_core::search::{search_extreme, Mode};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let qs: Vec<u32> = args[1..].iter().map(|s| s.parse().unwrap()).collect();
    for q in qs {
        let t = Instant::now();
        let r = search_extreme(q, Mode::Continuous, None, false).unwrap();
        println!(
            "q={q}: dim={} vertices={} extreme={} inconclusive={} ({:.2}s)",
            r.dim, r.n_vertices, r.n_extreme, r.n_inconclusive, t.elapsed().as_secs_f64()
        );
    }
}
