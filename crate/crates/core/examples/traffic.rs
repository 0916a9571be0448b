//! Bytes moved by vector loads and stores, relative to N log2 N.

use vexsort::bench::{generate_input, InputKind};
use vexsort::{sort, ScalarBackend, SortConfig, VectorBackend};

fn main() -> vexsort::Result<()> {
    for exp in [12, 15, 18] {
        let n = 1usize << exp;
        let b = ScalarBackend::counting(16)?;
        let mut data: Vec<i32> = generate_input(InputKind::Uniform, n, 5);
        sort(&b, &mut data, &SortConfig::default())?;
        let t = b.traffic().expect("counting backend");
        let ratio = t.total() as f64 / (n as f64 * exp as f64 * 4.0);
        println!(
            "N=2^{exp}: read {} B, written {} B, ratio to N*log2(N)*4 = {ratio:.3}",
            t.bytes_read(),
            t.bytes_written()
        );
    }
    Ok(())
}
