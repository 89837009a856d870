//! Arithmetic in F_p, F_{p^k} and Q.

use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f9 = Field::extension(3, 2)?;
    let a = f9.from_index(4)?;
    let b = f9.from_index(7)?;
    println!("{}: a = {}, b = {}", f9.name(), f9.format(&a), f9.format(&b));
    println!("a + b = {}", f9.format(&f9.add(&a, &b)));
    println!("a * b = {}", f9.format(&f9.mul(&a, &b)));
    println!("a^-1 = {}", f9.format(&f9.inv(&a)?));
    println!("frobenius(a) = {}", f9.format(&f9.frobenius(&a, 1)?));

    let z = f9.root_of_unity(8)?;
    println!("primitive 8th root of unity: {} (order {:?})", f9.format(&z), f9.multiplicative_order(&z));

    let q = Field::rationals();
    let third = q.div(&q.one(), &q.from_i64(3))?;
    println!("in Q: 1/3 + 1/3 = {}", q.format(&q.add(&third, &third)));
    Ok(())
}
