//! Search for extreme DFFs on a grid: build the discrete polytope, enumerate
//! its vertices exactly, interpolate, and filter with the covered-component
//! criterion (covered vertices are extreme; uncovered ones get a verified
//! bump perturbation or are flagged inconclusive).

mod dd;
mod grid;
mod polytope;

pub use dd::{brute_force_vertices, enumerate_vertices};
pub use grid::{filter_vertex, grid_cover, grid_maximality, VertexOutcome};
use grid::filter_vertex_fast;
pub use polytope::{
    build_polytope, identity_point, minimize_hrep, DiscreteFunction, HRep, Label, Mode,
    SearchError,
};

use crate::complex2d::covered_components;
use crate::extremality::{extremality_test, Status};
use crate::maximality::maximality_test;
use crate::rational::Rational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub q: u32,
    pub mode: Mode,
    pub dim: usize,
    pub n_inequalities_original: usize,
    pub n_inequalities_minimized: Option<usize>,
    pub n_vertices: usize,
    pub n_extreme: usize,
    pub n_inconclusive: usize,
    pub functions_dir: Option<String>,
    pub elapsed_seconds: f64,
    /// Per-vertex outcome, in lexicographic vertex order.
    pub outcomes: Vec<VertexOutcome>,
    /// The enumerated vertices as discrete functions, lexicographic.
    pub vertices: Vec<DiscreteFunction>,
}

#[derive(Serialize, Deserialize)]
struct ReportDto {
    format: String,
    q: u32,
    mode: String,
    dim: usize,
    inequalities: usize,
    inequalities_minimized: Option<usize>,
    vertices: usize,
    extreme: usize,
    inconclusive: usize,
    functions_dir: Option<String>,
}

pub const SEARCH_FORMAT: &str = "dff-search-v1";

impl SearchReport {
    pub fn to_json(&self) -> String {
        let dto = ReportDto {
            format: SEARCH_FORMAT.to_owned(),
            q: self.q,
            mode: self.mode.as_str().to_owned(),
            dim: self.dim,
            inequalities: self.n_inequalities_original,
            inequalities_minimized: self.n_inequalities_minimized,
            vertices: self.n_vertices,
            extreme: self.n_extreme,
            inconclusive: self.n_inconclusive,
            functions_dir: self.functions_dir.clone(),
        };
        serde_json::to_string(&dto).expect("serialization cannot fail")
    }
}

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(n) = std::env::var("DFF_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            if n > 0 {
                builder = builder.num_threads(n);
            }
        }
    }
    builder.build().expect("thread pool")
}

/// Affine dimension of a point cloud, by incremental exact rank.
fn affine_dim(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let origin = &points[0];
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
        .collect();
    crate::linalg::rank(rows, origin.len())
}

/// Runs the full search: polytope, vertices, interpolation, extremality
/// filter. Extreme functions are persisted under `out_dir` (named by the
/// lexicographic vertex index) when a directory is given.
pub fn search_extreme(
    q: u32,
    mode: Mode,
    out_dir: Option<&Path>,
    minimize: bool,
) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let h = build_polytope(q, mode)?;
    let n_inequalities_original = h.inequalities.len();
    let n_inequalities_minimized = if minimize {
        Some(minimize_hrep(&h)?.inequalities.len())
    } else {
        None
    };
    let points = enumerate_vertices(&h)?;
    let dim = affine_dim(&points);
    let vertices: Vec<DiscreteFunction> = points
        .iter()
        .map(|p| DiscreteFunction::from_point(q, mode, p))
        .collect();

    let pool = thread_pool();
    let outcomes: Vec<VertexOutcome> = pool.install(|| {
        vertices
            .par_iter()
            .map(|v| match mode {
                Mode::Continuous => filter_vertex_fast(&v.values),
                Mode::Discontinuous => filter_vertex_generic(v),
            })
            .collect()
    });

    let n_extreme = outcomes
        .iter()
        .filter(|o| **o == VertexOutcome::Extreme)
        .count();
    let n_inconclusive = outcomes
        .iter()
        .filter(|o| **o == VertexOutcome::Inconclusive)
        .count();

    let functions_dir = match out_dir {
        None => None,
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| SearchError::Io(e.to_string()))?;
            for (idx, (v, o)) in vertices.iter().zip(&outcomes).enumerate() {
                if *o == VertexOutcome::Extreme {
                    let f = v.interpolate().map_err(|e| SearchError::Io(e.to_string()))?;
                    let path = dir.join(format!("q{q}_v{idx}.json"));
                    std::fs::write(path, crate::pwl::to_json(&f))
                        .map_err(|e| SearchError::Io(e.to_string()))?;
                }
            }
            Some(".".to_owned())
        }
    };

    let report = SearchReport {
        q,
        mode,
        dim,
        n_inequalities_original,
        n_inequalities_minimized,
        n_vertices: vertices.len(),
        n_extreme,
        n_inconclusive,
        functions_dir,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        outcomes,
        vertices,
    };
    if let Some(dir) = out_dir {
        std::fs::write(dir.join("report.json"), report.to_json())
            .map_err(|e| SearchError::Io(e.to_string()))?;
    }
    Ok(report)
}

/// Generic per-vertex filter for the discontinuous grid: interpolate and run
/// the full machinery (the grid shortcut only covers the continuous case).
fn filter_vertex_generic(v: &DiscreteFunction) -> VertexOutcome {
    let f = v.interpolate().expect("grid data interpolates");
    assert!(
        maximality_test(&f).is_maximal,
        "polytope point violates maximality"
    );
    if covered_components(&f).fully_covered() {
        // Interpolations of polytope vertices with no uncovered interval are
        // extreme.
        return VertexOutcome::Extreme;
    }
    match extremality_test(&f) {
        Ok(verdict) => match verdict.status {
            Status::Extreme => VertexOutcome::Extreme,
            Status::NotExtreme(_) => VertexOutcome::NotExtreme,
            Status::Inconclusive(_) => VertexOutcome::Inconclusive,
        },
        Err(_) => VertexOutcome::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn q2_polytope_is_a_point() {
        let h = build_polytope(2, Mode::Continuous).unwrap();
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(vs, vec![vec![int(0), rat(1, 2), int(1)]]);
        assert!(matches!(
            build_polytope(1, Mode::Continuous),
            Err(SearchError::BadQ)
        ));
    }

    #[test]
    fn q3_and_q5_vertices_match_hand_enumeration() {
        let h = build_polytope(3, Mode::Continuous).unwrap();
        let vs = enumerate_vertices(&h).unwrap();
        assert_eq!(
            vs,
            vec![
                vec![int(0), int(0), int(1), int(1)],
                vec![int(0), rat(1, 3), rat(2, 3), int(1)],
            ]
        );

        let h = build_polytope(5, Mode::Continuous).unwrap();
        let vs = enumerate_vertices(&h).unwrap();
        let a12: Vec<(Rational, Rational)> =
            vs.iter().map(|v| (v[1].clone(), v[2].clone())).collect();
        assert_eq!(
            a12,
            vec![
                (int(0), int(0)),
                (int(0), rat(1, 2)),
                (rat(1, 5), rat(2, 5)),
            ]
        );
    }

    #[test]
    fn dd_matches_brute_force_for_small_q() {
        for q in 2..=7u32 {
            let h = build_polytope(q, Mode::Continuous).unwrap();
            let dd = enumerate_vertices(&h).unwrap();
            let bf = brute_force_vertices(&h).unwrap();
            assert_eq!(dd, bf, "q = {q}");
        }
    }

    #[test]
    fn vertex_certificates_have_full_rank() {
        let h = build_polytope(7, Mode::Continuous).unwrap();
        for v in enumerate_vertices(&h).unwrap() {
            let mut tight: Vec<Vec<Rational>> =
                h.equalities.iter().map(|(r, _)| r.clone()).collect();
            for (row, rhs) in &h.inequalities {
                let lhs: Rational = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                if lhs == *rhs {
                    tight.push(row.clone());
                }
            }
            assert_eq!(crate::linalg::rank(tight, h.num_vars), h.num_vars);
        }
    }

    #[test]
    fn vertex_set_is_invariant_under_constraint_order_and_minimization() {
        let h = build_polytope(7, Mode::Continuous).unwrap();
        let base = enumerate_vertices(&h).unwrap();

        let mut shuffled = h.clone();
        shuffled.inequalities.reverse();
        shuffled.ineq_labels.reverse();
        assert_eq!(enumerate_vertices(&shuffled).unwrap(), base);

        let minimized = minimize_hrep(&h).unwrap();
        assert!(minimized.inequalities.len() < h.inequalities.len());
        assert_eq!(enumerate_vertices(&minimized).unwrap(), base);
        // Idempotence.
        let again = minimize_hrep(&minimized).unwrap();
        assert_eq!(again.inequalities.len(), minimized.inequalities.len());
    }

    #[test]
    fn q5_minimized_system_matches_hand_analysis() {
        // In the reduced coordinates the feasible set is
        // {2 a1 <= a2, a1 + 2 a2 <= 1, a1 >= 0}; three irredundant rows.
        let h = build_polytope(5, Mode::Continuous).unwrap();
        let m = minimize_hrep(&h).unwrap();
        assert_eq!(m.inequalities.len(), 3);
    }

    #[test]
    fn identity_restriction_is_always_a_vertex() {
        for q in 2..=9u32 {
            let h = build_polytope(q, Mode::Continuous).unwrap();
            let vs = enumerate_vertices(&h).unwrap();
            assert!(vs.contains(&identity_point(q)), "q = {q}");
        }
    }

    #[test]
    fn census_matches_for_small_q() {
        // (q, dim, vertices, extreme) from the published census.
        for (q, dim, n_v, n_e) in [(2u32, 0usize, 1usize, 1usize), (3, 1, 2, 1), (5, 2, 3, 2), (7, 3, 5, 3)] {
            let report = search_extreme(q, Mode::Continuous, None, false).unwrap();
            assert_eq!(
                (report.dim, report.n_vertices, report.n_extreme, report.n_inconclusive),
                (dim, n_v, n_e, 0),
                "q = {q}"
            );
        }
    }

    #[test]
    fn grid_checks_agree_with_generic_path_for_small_q() {
        for q in [3u32, 5, 6, 7, 8] {
            let h = build_polytope(q, Mode::Continuous).unwrap();
            for point in enumerate_vertices(&h).unwrap() {
                let v = DiscreteFunction::from_point(q, Mode::Continuous, &point);
                let f = v.interpolate().unwrap();
                assert_eq!(
                    grid_maximality(&v.values),
                    maximality_test(&f).is_maximal,
                    "q={q}"
                );
                let gc = grid_cover(&v.values);
                let cc = covered_components(&f);
                assert_eq!(gc, cc, "q={q} point {point:?}");
                let (outcome, _) = filter_vertex(&v.values);
                let verdict = extremality_test(&f).unwrap();
                let expected = match verdict.status {
                    Status::Extreme => VertexOutcome::Extreme,
                    Status::NotExtreme(_) => VertexOutcome::NotExtreme,
                    Status::Inconclusive(_) => VertexOutcome::Inconclusive,
                };
                assert_eq!(outcome, expected, "q={q} point {point:?}");
            }
        }
    }

    #[test]
    fn discontinuous_search_runs_for_small_q() {
        let report = search_extreme(4, Mode::Discontinuous, None, false).unwrap();
        assert!(report.n_vertices >= 1);
        assert_eq!(report.n_inconclusive, 0);
        // The identity restriction is among the vertices.
        assert!(report
            .vertices
            .iter()
            .any(|v| v.values == identity_point(4)));
    }
}
