//! Sequential hybrid sort of a large array, with its counters.

use std::time::Instant;

use vexsort::bench::{generate_input, InputKind};
use vexsort::{sort, ScalarBackend, SortConfig};

fn main() -> vexsort::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let b = ScalarBackend::new(16)?;
    for kind in InputKind::ALL {
        let mut data: Vec<i32> = generate_input(kind, n, 1);
        let t = Instant::now();
        let stats = sort(&b, &mut data, &SortConfig::default())?;
        let elapsed = t.elapsed();
        assert!(data.windows(2).all(|w| w[0] <= w[1]));
        println!(
            "{kind:<9} n={n} {elapsed:>10.2?}  steps={} small_sorts={} max_stack={}",
            stats.partition_steps, stats.small_sorts, stats.max_stack_depth
        );
    }
    Ok(())
}
