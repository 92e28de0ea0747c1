use dff_core::search::*;
use std::time::Instant;

fn main() {
    let q: u32 = std::env::args().nth(1).unwrap().parse().unwrap();
    let t = Instant::now();
    let h = build_polytope(q, Mode::Continuous).unwrap();
    println!("build: {:.2}s ({} ineqs)", t.elapsed().as_secs_f64(), h.inequalities.len());
    let t = Instant::now();
    let points = enumerate_vertices(&h).unwrap();
    println!("enumerate: {:.2}s ({} vertices)", t.elapsed().as_secs_f64(), points.len());
    let t = Instant::now();
    let outcomes: Vec<_> = points
        .iter()
        .map(|p| {
            let v = DiscreteFunction::from_point(q, Mode::Continuous, p);
            filter_vertex(&v.values).0
        })
        .collect();
    let ne = outcomes.iter().filter(|o| **o == VertexOutcome::Extreme).count();
    println!("filter (1 thread): {:.2}s (extreme {})", t.elapsed().as_secs_f64(), ne);
}
