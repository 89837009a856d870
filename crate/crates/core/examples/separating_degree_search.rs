//! Certified lower bound and finite-field evidence for S3 in characteristic 2.

use sepinv::reps::{enumerate_group, regular_representation, Representation};
use sepinv::separation::{beta_sep_search, SearchOptions};
use sepinv::{Field, Result};

fn main() -> Result<()> {
    let f2 = Field::prime(2)?;
    let s3 = enumerate_group(&Representation::symmetric_group(&f2, 3)?, 10)?;
    let reg = regular_representation(&s3);
    let opts = SearchOptions { fields: Some(vec![f2.clone(), Field::extension(2, 2)?]), ..Default::default() };
    let report = beta_sep_search(&reg, &opts)?;
    for d in &report.degrees {
        println!(
            "degree {}: {} invariants, passed {:?}, witness over {:?}",
            d.degree, d.invariants, d.passed_fields, d.witness_field
        );
    }
    println!(
        "certified lower {}, evidence upper {:?}, theorem upper {}, verdict {:?}",
        report.certified_lower,
        report.evidence_upper,
        report.theorem_upper,
        report.verdict()
    );
    if let Some(w) = &report.witness {
        println!("witness: {}", w.to_json());
    }
    Ok(())
}
