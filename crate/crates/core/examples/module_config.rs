//! Loading a module from its JSON configuration.

use sepinv::config::{parse_module_str, Module};
use sepinv::invariants::invariant_slice;
use sepinv::Result;

const CONFIG: &str = r#"{
    "schema": 1,
    "type": "induced",
    "params": {
        "group": {"schema": 1, "type": "permutation", "params": {"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}, "field": {"p": 2}},
        "subgroup_generators": [[1]]
    }
}"#;

fn main() -> Result<()> {
    let Module::Finite(rep) = parse_module_str(CONFIG)? else {
        unreachable!("an induced module is finite")
    };
    println!("module of dimension {} over {}", rep.dim(), rep.field().name());
    for d in 1..=3 {
        println!("degree {}: dimension {}", d, invariant_slice(&rep, d)?.dimension());
    }
    Ok(())
}
