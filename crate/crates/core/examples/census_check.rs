use dff_core::search::{search_extreme, Mode};
use std::time::Instant;

fn main() {
    let expected = [
        (9u32, 4usize, 9usize, 3usize),
        (11, 5, 14, 7),
        (13, 6, 25, 8),
        (15, 7, 66, 14),
        (17, 8, 94, 22),
        (19, 9, 221, 32),
        (21, 10, 677, 55),
    ];
    for (q, dim, nv, ne) in expected {
        let t = Instant::now();
        let r = search_extreme(q, Mode::Continuous, None, false).unwrap();
        println!(
            "q={q}: dim={} vertices={} extreme={} inconclusive={} ({:.2}s)  expected ({dim},{nv},{ne})  {}",
            r.dim, r.n_vertices, r.n_extreme, r.n_inconclusive,
            t.elapsed().as_secs_f64(),
            if (r.dim, r.n_vertices, r.n_extreme, r.n_inconclusive) == (dim, nv, ne, 0) { "OK" } else { "MISMATCH" }
        );
    }
}
