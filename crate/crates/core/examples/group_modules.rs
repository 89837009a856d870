//! Building modules and enumerating the groups they generate.

use sepinv::reps::{
    cyclic_module, dihedral_module, enumerate_group, induced_module, regular_representation, CosetDecomposition,
    Representation,
};
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f3 = Field::prime(3)?;
    let c6 = cyclic_module(2, 3, 1, &f3)?;
    let g = enumerate_group(&c6, 100)?;
    println!("cyclic module: dim {}, |G| = {}, element orders {:?}", c6.dim(), g.order(), g.element_orders());

    let d6 = dihedral_module(3, 1, &f3)?;
    println!("dihedral module: |G| = {}", enumerate_group(&d6, 100)?.order());

    let s3 = enumerate_group(&Representation::symmetric_group(&f3, 3)?, 10)?;
    let reg = regular_representation(&s3);
    println!("regular representation of S3: dim {}", reg.dim());

    let c3 = s3.generators()[1];
    let cosets = CosetDecomposition::left(&s3, &[c3])?;
    println!("[S3 : C3] = {}, representatives {:?}", cosets.index(), cosets.representatives());
    let trivial = Representation::new(&f3, 1, vec![sepinv::matrix::Matrix::identity(&f3, 1)])?;
    let induced = induced_module(&trivial, &s3, &cosets)?;
    println!("induced from the trivial C3-module: dim {}", induced.dim());
    Ok(())
}
