//! Bitonic kernels: one vector, several vectors, and padded small arrays.

use vexsort::{
    exchange_reverse, small_sort, sort_one_vector, sort_vectors, BitonicNetwork, ScalarBackend, Vector,
};

fn main() -> vexsort::Result<()> {
    let b = ScalarBackend::new(4)?;

    let v = Vector::from_lanes(&[7, 3, 9, 1]);
    println!("one vector      {v:?} -> {:?}", sort_one_vector(&b, &v));

    let (lo, hi) = exchange_reverse(&b, &Vector::from_lanes(&[0, 2, 4, 6]), &Vector::from_lanes(&[1, 3, 5, 7]));
    println!("exchange        {lo:?} {hi:?}");

    let mut regs = vec![
        Vector::from_lanes(&[12, 4, 8, 0]),
        Vector::from_lanes(&[5, 9, 1, 13]),
        Vector::from_lanes(&[2, 14, 10, 6]),
    ];
    sort_vectors(&b, &mut regs)?;
    println!("three vectors   {regs:?}");

    let mut data = [3, 1, 2, 0, 5];
    small_sort(&b, &mut data)?;
    println!("small array     {data:?}");

    for w in [2, 4, 8, 16, 32] {
        let net = BitonicNetwork::new(&ScalarBackend::new(w)?);
        println!("W = {w:>2}: {} stages per vector", net.one_vector_stages());
    }
    Ok(())
}
