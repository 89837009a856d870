//! Separating morphisms for G assembled from invariants of a subgroup.

use sepinv::invariants::invariant_slice;
use sepinv::reps::{enumerate_group, regular_representation, CosetDecomposition, Representation};
use sepinv::separation::{build_coset_morphism, check_separating_on_points, normal_composition};
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f2 = Field::prime(2)?;
    let s3 = enumerate_group(&Representation::symmetric_group(&f2, 3)?, 10)?;
    let g = enumerate_group(&regular_representation(&s3), 10)?;
    let c3 = g.generators()[1];
    let h_rep = g.subgroup_representation(&[c3]);
    let mut phi = Vec::new();
    for d in 1..=3 {
        phi.extend(invariant_slice(&h_rep, d)?.basis().iter().cloned());
    }
    let pipe = build_coset_morphism(&phi, &g, &CosetDecomposition::right(&g, &[c3])?)?;
    let set = pipe.separating_set()?;
    let report = check_separating_on_points(&set, &g, &f2, 1_000_000)?;
    println!(
        "S3 from C3: {} components of degree <= {} (bound {}), separated: {}",
        set.len(),
        pipe.degree(),
        pipe.degree_bound(),
        report.separated()
    );

    let c4 = enumerate_group(&Representation::permutation(&f2, 4, &[vec![1, 2, 3, 0]])?, 10)?;
    let r = c4.generators()[0];
    let h = c4.mul(r, r);
    let mut phi = Vec::new();
    for d in 1..=2 {
        phi.extend(invariant_slice(&c4.subgroup_representation(&[h]), d)?.basis().iter().cloned());
    }
    let pipe = normal_composition(&phi, &c4, &[h], 2)?;
    for stage in pipe.stages() {
        println!("stage {}: {} components, degree bound {}", stage.name, stage.components.len(), stage.degree_bound);
    }
    let set = pipe.separating_set()?;
    println!("C4 through C2: degree {}, separated: {}", pipe.degree(), check_separating_on_points(&set, &c4, &f2, 1000)?.separated());
    Ok(())
}
