//! Partitioning an interval in place around a median-of-five pivot.

use rand::{rngs::StdRng, Rng, SeedableRng};
use vexsort::{partition_in_place, select_pivot, Interval, ScalarBackend, ScalarView};

fn main() -> vexsort::Result<()> {
    let b = ScalarBackend::new(8)?;
    let mut rng = StdRng::seed_from_u64(3);
    let mut data: Vec<i32> = (0..40).map(|_| rng.gen_range(0..100)).collect();
    println!("input    {data:?}");

    let interval = Interval::new(4, 36);
    let pivot = select_pivot(&ScalarView::new(&mut data), interval)?;
    let p = partition_in_place(&b, &mut data, interval, pivot)?;
    println!("pivot {pivot}, boundary {}", p.boundary);
    println!("left     {:?}", &data[p.left.start..p.left.end]);
    println!("right    {:?}", &data[p.right.start..p.right.end]);
    println!("outside  {:?} .. {:?}", &data[..4], &data[36..]);
    Ok(())
}
