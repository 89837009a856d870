//! Sparse polynomials: text form, linear substitution and polarization.

use sepinv::matrix::Matrix;
use sepinv::polys::Polynomial;
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f = Field::prime(5)?;
    let x = |i| Polynomial::var(&f, 2, i);
    let p = &(&x(0).pow(2) * &x(1)) + &x(1).pow(3);
    println!("f = {}", p.to_text());

    // f(A x) for the shear A = [[1, 1], [0, 1]]
    let shear = Matrix::from_rows(vec![vec![f.one(), f.one()], vec![f.zero(), f.one()]])?;
    println!("f o A = {}", p.substitute_linear(&shear)?.to_text());

    println!("f(2, 3) = {}", f.format(&p.evaluate(&[f.from_i64(2), f.from_i64(3)])?));

    for part in p.polarize(2)? {
        println!("polarization t^{:?}: {}", part.index, part.poly.to_text());
    }
    Ok(())
}
