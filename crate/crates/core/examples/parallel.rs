//! Work-stealing parallel sort and its task trace.

use std::time::Instant;

use vexsort::bench::{generate_input, InputKind};
use vexsort::{parallel_sort_traced, ScalarBackend, ScalarView, SortConfig};

fn main() -> vexsort::Result<()> {
    let b = ScalarBackend::new(16)?;
    let input: Vec<i32> = generate_input(InputKind::Uniform, 500_000, 11);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    for workers in [1, 2, 4, threads.max(1)] {
        let mut data = input.clone();
        let config = SortConfig { workers, ..SortConfig::default() };
        let t = Instant::now();
        let (stats, trace) = parallel_sort_traced(&b, &mut ScalarView::new(&mut data), &config)?;
        assert!(data.windows(2).all(|w| w[0] <= w[1]));
        println!(
            "workers={workers} {:>10.2?}  steps={} pushed={} inline={} executed={}",
            t.elapsed(),
            stats.partition_steps,
            trace.inserted.len(),
            stats.inline_sorts,
            trace.executed.len()
        );
    }
    Ok(())
}
