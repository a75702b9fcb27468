//! How rasterization accuracy depends on cell size, measured two ways:
//! points drawn uniformly over the map, and points drawn only along
//! polygon boundaries where discretization error concentrates.

use quadrast::{
    park_suite, run_benchmark, suite_extent, summarize, BenchConfig, CoverageRule, Dataset,
    Execution, Geometry, Sampler,
};

fn accuracies(sampler: Sampler, resolutions: &[f64]) -> Vec<(f64, f64)> {
    let dataset = Dataset {
        name: "parks".to_string(),
        geoms: vec![Geometry::MultiPolygon(park_suite(0))],
        value: 1,
    };
    let cfg = BenchConfig {
        resolutions: resolutions.to_vec(),
        n: 100_000,
        runs: 1,
        sampler,
        seed: 0,
        execution: Execution::Parallel,
        rule: CoverageRule::area_majority(),
    };
    let report = run_benchmark(&dataset, None, &suite_extent(), &cfg).unwrap();
    summarize(&report)
        .into_iter()
        .filter_map(|s| Some((s.resolution_m?, s.mean_accuracy)))
        .collect()
}

fn main() {
    let resolutions = [1.0, 2.0, 5.0, 20.0];

    // The raster and the quadtree answer identically (same cells), so each
    // resolution appears twice with the same score. Deduplicate for display.
    println!("uniform probes, 100k per resolution:");
    let mut seen = std::collections::BTreeSet::new();
    for (res, acc) in accuracies(Sampler::Uniform, &resolutions) {
        if seen.insert(res.to_bits()) {
            println!(
                "  {res:>5} m cells: {:.2}% of probes answered like the geometry",
                100.0 * acc
            );
        }
    }

    // Near boundaries the picture changes completely: a 20 m cell rounds
    // away nearly every close call that a 1 m cell still gets right.
    println!("\nboundary probes, 100k per resolution:");
    seen.clear();
    for (res, acc) in accuracies(Sampler::Border, &resolutions) {
        if seen.insert(res.to_bits()) {
            println!("  {res:>5} m cells: {:.2}%", 100.0 * acc);
        }
    }
    println!("\nuniform sampling hides discretization error because boundary cells are rare;");
    println!("sampling only the boundary shows it plainly, down to total loss at 20 m");
    println!("where the cells are wider than the narrowest features.");
}
