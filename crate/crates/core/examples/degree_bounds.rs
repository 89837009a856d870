//! Upper and lower bounds from group-structure facts, with replayable chains.

use sepinv::bounds::{a4_descriptor, a4_squared_descriptor, apply_rules, dihedral_descriptor};
use sepinv::Result;

fn main() -> Result<()> {
    for desc in [a4_descriptor(3), a4_squared_descriptor(3), dihedral_descriptor(15, 3)] {
        let r = apply_rules(&desc)?;
        println!("{}: {} <= beta_sep <= {}", desc.label(), r.lower.bound, r.upper.bound);
        for step in &r.upper.chain {
            println!("  {} -> {} ({})", step.rule, step.output, step.reference);
        }
        r.upper.verify()?;
    }
    Ok(())
}
