//! The lane operations the kernels are built from, at width 8.

use vexsort::{Predicate, ScalarBackend, Vector, VectorBackend};

fn main() -> vexsort::Result<()> {
    let b = ScalarBackend::new(8)?;

    let idx = b.index_vector();
    println!("index_vector        {idx:?}");

    let ft = b.interleave_low_pred(&b.all_false(), &b.all_true());
    let fftt = b.interleave_low_pred(&ft, &ft);
    println!("interleave_low      {ft:?} -> {fftt:?}");
    println!("concat_odd          {:?}", b.concat_odd(&fftt, &fftt));

    let v = Vector::from_lanes(&[40, 10, 70, 30, 60, 20, 50, 0]);
    let swap_pairs = b.add(&idx, &b.select(&ft, &b.dup(-1), &b.dup(1)));
    println!("permute             {:?}", b.permute(&v, &swap_pairs));
    println!("blend_min_max       {:?}", b.blend_min_max(&ft, &v, &b.permute(&v, &swap_pairs)));

    let small = b.compare_lte(&v, &b.dup(35));
    println!("compare_lte 35      {small:?}");
    println!("compact             {:?} ({} lanes)", b.compact(&small, &v), b.count_true(&small));
    println!("reverse             {:?}", b.reverse(&v));
    println!("reduce min/max      {} / {}", b.reduce_min(&v), b.reduce_max(&v));

    let mut mem = [0; 8];
    b.store(&b.first_n(3), &mut mem, &v);
    println!("store first_n(3)    {mem:?}");
    let p = Predicate::from_lanes(&[true, true, false, false, false, false, false, false]);
    println!("load first_n(2)     {:?}", b.load(&p, &mem));
    Ok(())
}
