//! Sorting keys with payloads, as two arrays and as interleaved pairs.

use vexsort::{sort_kv, sort_pairs, ScalarBackend, SortConfig};

fn main() -> vexsort::Result<()> {
    let b = ScalarBackend::new(8)?;
    let config = SortConfig::default();

    let mut keys = vec![42, 7, 19, 7, 3, 88, 19, 0];
    let mut names = vec!["a", "b", "c", "d", "e", "f", "g", "h"];
    sort_kv(&b, &mut keys, &mut names, &config)?;
    println!("keys   {keys:?}");
    println!("values {names:?}");

    let mut pairs: Vec<(f64, u32)> = [2.5, -1.0, 9.75, 0.0, 2.5].iter().copied().zip(0..).collect();
    sort_pairs(&b, &mut pairs, &config)?;
    println!("pairs  {pairs:?}");
    Ok(())
}
