//! Polarized elementary symmetric functions separate S_d-orbits on W^d.

use sepinv::reps::{enumerate_group, Representation};
use sepinv::separation::{check_separating_on_points, polarized_elementary_symmetric};
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let (dim_w, d) = (2, 2);
    let set = polarized_elementary_symmetric(&f3, dim_w, d)?;
    for p in set.polys() {
        println!("{}", p.to_text());
    }
    let group = enumerate_group(&Representation::symmetric_on_blocks(&f3, d, dim_w)?, 100)?;
    let report = check_separating_on_points(&set, &group, &f3, 1_000_000)?;
    println!("{} points, {} orbits, separated: {}", report.points, report.orbits, report.separated());
    Ok(())
}
