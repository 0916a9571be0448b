//! One code path, any vector width: the width is picked at run time.

use vexsort::backend::width_from_env;
use vexsort::bench::{generate_input, InputKind};
use vexsort::{sort, ScalarBackend, SortConfig};

fn main() -> vexsort::Result<()> {
    let input: Vec<f64> = generate_input(InputKind::Uniform, 20_000, 9);
    let mut expect = input.clone();
    expect.sort_by(f64::total_cmp);

    let widths = match width_from_env()? {
        Some(w) => vec![w],
        None => vec![2, 4, 8, 16, 32, 64, 128, 256],
    };
    for w in widths {
        let mut data = input.clone();
        let stats = sort(&ScalarBackend::new(w)?, &mut data, &SortConfig::default())?;
        println!(
            "W={w:<3} sorted={} partition steps={} small sorts={}",
            data == expect,
            stats.partition_steps,
            stats.small_sorts
        );
    }
    Ok(())
}
