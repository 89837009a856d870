//! Homogeneous invariants by exact nullspace, in the modular case.

use sepinv::invariants::{hilbert_ideal_slice_test, invariant_slice, invariant_slice_parametric};
use sepinv::reps::{additive_module, Representation, Summand};
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let c3 = Representation::permutation(&f3, 3, &[vec![1, 2, 0]])?;
    for d in 1..=3 {
        let slice = invariant_slice(&c3, d)?;
        let basis: Vec<String> = slice.basis().iter().map(|p| p.to_text()).collect();
        println!("C3 on F_3^3, degree {}: {}", d, basis.join(", "));
    }
    let h = hilbert_ideal_slice_test(&c3, 3)?;
    println!("degree 3 invariants outside the Hilbert ideal part: {:?}", h.outside);

    let f2 = Field::prime(2)?;
    let act = additive_module(&f2, &[Summand::Standard, Summand::FrobeniusTwist { n: 1 }])?;
    for d in 1..=4 {
        println!("additive group on V + V_F, degree {}: dimension {}", d, invariant_slice_parametric(&act, d)?.dimension());
    }
    Ok(())
}
