//! Seeded sampling of the toy model. Counts depend only on the seed and the
//! sample count, never on the number of worker threads.

use std::time::Instant;

use ontic::ontology::{predicted_statistics, simulate, simulate_parallel};
use ontic::scenarios::{build_toy_nlhv_model, TOY_MEASUREMENT, TOY_PREPARATIONS};

fn main() {
    let model = build_toy_nlhv_model();
    let n = 100_000;
    let seed = 7;
    for prep in TOY_PREPARATIONS {
        let start = Instant::now();
        let serial = simulate(&model, prep, TOY_MEASUREMENT, n, seed).unwrap();
        let parallel = simulate_parallel(&model, prep, TOY_MEASUREMENT, n, seed, 4).unwrap();
        assert_eq!(serial, parallel);
        let exact = predicted_statistics(&model, prep, TOY_MEASUREMENT).unwrap();
        let cells: Vec<String> = (0..exact.len())
            .map(|k| format!("{:.4}/{}", serial.frequency(k), exact[k]))
            .collect();
        println!("{prep}: {}  [{:?}]", cells.join("  "), start.elapsed());
    }
}
