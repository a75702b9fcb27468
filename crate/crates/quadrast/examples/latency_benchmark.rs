//! Time point queries against all three representations of one dataset
//! and write the raw measurements as CSV. Run with --release for numbers
//! worth quoting.

use quadrast::{
    dense_polygon_suite, run_benchmark, suite_extent, summarize, BenchConfig, CoverageRule,
    Dataset, Execution, Sampler,
};

fn main() {
    // Many small polygons make the vector scan expensive while keeping the
    // gridded representations honest: lots of boundary, little uniformity.
    let dataset = Dataset {
        name: "patches".to_string(),
        geoms: dense_polygon_suite(60, 1000, 42),
        value: 1,
    };

    let cfg = BenchConfig {
        resolutions: vec![1.0],
        n: 100_000,
        runs: 10,
        sampler: Sampler::Uniform,
        seed: 7,
        execution: Execution::Sequential,
        rule: CoverageRule::area_majority(),
    };
    println!(
        "timing {} polygons, {} probes x {} runs at {} m (sequential)...",
        dataset.geoms.len(),
        cfg.n,
        cfg.runs,
        cfg.resolutions[0]
    );
    let report = run_benchmark(&dataset, None, &suite_extent(), &cfg).unwrap();

    println!(
        "\n{:<10} {:>6} {:>12} {:>12} {:>9} {:>9}",
        "rep", "res", "batch_ms", "ns/query", "accuracy", "speedup"
    );
    for s in summarize(&report) {
        println!(
            "{:<10} {:>6} {:>12.3} {:>12.1} {:>9.6} {:>9}",
            s.representation.as_str(),
            s.resolution_m.map_or(String::new(), |r| r.to_string()),
            s.median_batch_ns / 1e6,
            s.median_per_query_ns,
            s.mean_accuracy,
            s.speedup_vs_vector
                .map_or("baseline".to_string(), |x| format!("{x:.2}x")),
        );
    }

    let path = std::env::temp_dir().join("quadrast_bench.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    report.write_csv(&mut file).unwrap();
    println!("\nraw rows written to {}", path.display());
}
