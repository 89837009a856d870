//! Witness pairs: a fixed point against 0, and additive-group orbits.

use sepinv::reps::{additive_module, cyclic_module, enumerate_group, Summand};
use sepinv::separation::{fixed_point_witness_check, parametric_witness_check};
use sepinv::{Elem, Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let rep = cyclic_module(2, 3, 1, &f3)?;
    let group = enumerate_group(&rep, 100)?;
    let v = vec![Elem::Fin(1); 3];
    let fw = fixed_point_witness_check(&rep, &group, &v, 6)?;
    println!("C6: beta_sep >= {} via {}", fw.witness.certified_lower(), fw.separating.to_text());

    let f2 = Field::prime(2)?;
    let act = additive_module(&f2, &[Summand::Standard, Summand::FrobeniusTwist { n: 1 }])?;
    let pt = |xs: [i64; 4]| xs.map(|c| f2.from_i64(c)).to_vec();
    let pw = parametric_witness_check(&act, &pt([0, 1, 0, 0]), &pt([0, 1, 1, 0]), 3)?;
    println!("additive group: slices {:?} agree, split by {}", pw.slice_dimensions, pw.separating.to_text());
    Ok(())
}
