use dff_core::search::{build_polytope, enumerate_vertices, filter_vertex, grid_cover, DiscreteFunction, Mode, VertexOutcome};
use dff_core::rational::format_rational;

fn main() {
    for q in [15u32, 17] {
        let h = build_polytope(q, Mode::Continuous).unwrap();
        let points = enumerate_vertices(&h).unwrap();
        for (idx, p) in points.iter().enumerate() {
            let v = DiscreteFunction::from_point(q, Mode::Continuous, p);
            let (outcome, cover) = filter_vertex(&v.values);
            if outcome == VertexOutcome::Inconclusive {
                let vals: Vec<String> = v.values.iter().map(format_rational).collect();
                println!("q={q} v{idx}: values = {}", vals.join(","));
                println!("  uncovered: {:?}", cover.uncovered.iter().map(|(a,b)| format!("({},{})", format_rational(a), format_rational(b))).collect::<Vec<_>>());
                println!("  components: {}", cover.components.len());
                let _ = grid_cover(&v.values);
            }
        }
    }
}
