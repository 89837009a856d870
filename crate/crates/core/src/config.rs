//! Module configuration files.
//!
//! ```json
//! {"schema": 1, "type": "cyclic", "params": {"r": 2, "p": 3, "k": 1}, "field": {"p": 3}}
//! ```

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::reps::{
    additive_module, cyclic_module, dihedral_module, enumerate_group, induced_module, regular_representation,
    torus_module, CosetDecomposition, ParametricAction, Representation, Summand,
};
use crate::scalars::{Field, FieldSpec};

pub const SCHEMA_VERSION: u64 = 1;

/// Cap on group orders when a config needs the group enumerated.
const GROUP_CAP: usize = 100_000;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleConfig {
    pub schema: u64,
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub field: Option<FieldSpec>,
}

/// A parsed module: a finite matrix group or an additive/torus action.
#[derive(Clone, Debug)]
pub enum Module {
    Finite(Representation),
    Parametric(ParametricAction),
}

impl Module {
    pub fn field(&self) -> &Field {
        match self {
            Module::Finite(r) => r.field(),
            Module::Parametric(a) => a.field(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Module::Finite(r) => r.dim(),
            Module::Parametric(a) => a.dim(),
        }
    }
}

fn cfg_err(m: impl Into<String>) -> Error {
    Error::Config(m.into())
}

fn param<T: for<'de> Deserialize<'de>>(params: &Value, key: &str) -> Result<T> {
    let v = params.get(key).ok_or_else(|| cfg_err(format!("missing parameter '{}'", key)))?;
    serde_json::from_value(v.clone()).map_err(|e| cfg_err(format!("parameter '{}': {}", key, e)))
}

fn opt_param<T: for<'de> Deserialize<'de>>(params: &Value, key: &str) -> Result<Option<T>> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => param(params, key).map(Some),
    }
}

pub fn parse_module_str(text: &str) -> Result<Module> {
    let cfg: ModuleConfig = serde_json::from_str(text).map_err(|e| cfg_err(format!("malformed module JSON: {}", e)))?;
    build_module(&cfg)
}

pub fn parse_module_value(v: &Value) -> Result<Module> {
    let cfg: ModuleConfig =
        serde_json::from_value(v.clone()).map_err(|e| cfg_err(format!("malformed module JSON: {}", e)))?;
    build_module(&cfg)
}

fn field_of(cfg: &ModuleConfig) -> Result<Field> {
    let spec = cfg.field.as_ref().ok_or_else(|| cfg_err(format!("module type '{}' needs a field", cfg.kind)))?;
    Field::new(spec.clone())
}

fn finite(m: Module) -> Result<Representation> {
    match m {
        Module::Finite(r) => Ok(r),
        Module::Parametric(_) => Err(cfg_err("expected a finite group module")),
    }
}

/// A generator given as a list of rows or as a flat row-major list.
fn parse_matrix(field: &Field, dim: usize, v: &Value) -> Result<Matrix> {
    let items = v.as_array().ok_or_else(|| cfg_err("matrix must be a list"))?;
    let flat: Vec<&Value> = if items.len() == dim && items.iter().all(|r| r.is_array() && field.degree() == 1) {
        items.iter().flat_map(|r| r.as_array().expect("checked").iter()).collect()
    } else if items.len() == dim && items.iter().all(|r| r.as_array().is_some_and(|x| x.len() == dim)) {
        items.iter().flat_map(|r| r.as_array().expect("checked").iter()).collect()
    } else {
        items.iter().collect()
    };
    if flat.len() != dim * dim {
        return Err(cfg_err(format!("matrix needs {} entries, got {}", dim * dim, flat.len())));
    }
    let entries = flat.into_iter().map(|x| field.decode_json(x)).collect::<Result<Vec<_>>>()?;
    Matrix::new(dim, dim, entries)
}

fn permutation_group(field: &Field, name: &str, n: usize) -> Result<Representation> {
    if n == 0 {
        return Err(cfg_err("group degree must be positive"));
    }
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    match name {
        "symmetric" => Representation::symmetric_group(field, n),
        "cyclic" => Representation::permutation(field, n, &[cycle]),
        "dihedral" => {
            let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
            Representation::permutation(field, n, &[cycle, reflection])
        }
        other => Err(cfg_err(format!("unknown named group '{}'", other))),
    }
}

pub fn build_module(cfg: &ModuleConfig) -> Result<Module> {
    if cfg.schema != SCHEMA_VERSION {
        return Err(cfg_err(format!("unsupported schema {} (expected {})", cfg.schema, SCHEMA_VERSION)));
    }
    let p = &cfg.params;
    match cfg.kind.as_str() {
        "cyclic" => {
            let f = field_of(cfg)?;
            Ok(Module::Finite(cyclic_module(param(p, "r")?, param(p, "p")?, param(p, "k")?, &f)?))
        }
        "dihedral" => {
            let f = field_of(cfg)?;
            Ok(Module::Finite(dihedral_module(param(p, "p")?, param(p, "r")?, &f)?))
        }
        "permutation" => {
            let f = field_of(cfg)?;
            let degree: usize = param(p, "degree")?;
            let gens: Vec<Vec<usize>> = param(p, "generators")?;
            if gens.iter().flatten().any(|&i| i >= degree) {
                return Err(cfg_err("permutation image out of range"));
            }
            Ok(Module::Finite(Representation::permutation(&f, degree, &gens)?))
        }
        "matrix" => {
            let f = field_of(cfg)?;
            let dim: usize = param(p, "dim")?;
            let gens: Vec<Value> = param(p, "generators")?;
            let mats = gens.iter().map(|g| parse_matrix(&f, dim, g)).collect::<Result<Vec<_>>>()?;
            Ok(Module::Finite(Representation::new(&f, dim, mats)?))
        }
        "regular" => {
            let base = if let Some(of) = opt_param::<Value>(p, "of")? {
                finite(parse_module_value(&of)?)?
            } else {
                let f = field_of(cfg)?;
                permutation_group(&f, &param::<String>(p, "group")?, param(p, "n")?)?
            };
            let g = enumerate_group(&base, GROUP_CAP)?;
            Ok(Module::Finite(regular_representation(&g)))
        }
        "induced" => {
            let base = finite(parse_module_value(&param::<Value>(p, "group")?)?)?;
            let f = base.field().clone();
            let g = enumerate_group(&base, GROUP_CAP)?;
            let words: Vec<Vec<usize>> = param(p, "subgroup_generators")?;
            let mut h_gens = Vec::new();
            for w in &words {
                let mut x = 0usize;
                for &i in w {
                    let gi = *g.generators().get(i).ok_or_else(|| cfg_err("subgroup word uses an unknown generator"))?;
                    x = g.mul(x, gi);
                }
                h_gens.push(x);
            }
            let h_rep = match opt_param::<Value>(p, "module")? {
                Some(m) => {
                    let dim: usize = param(&m, "dim")?;
                    let gens: Vec<Value> = param(&m, "generators")?;
                    let mats = gens.iter().map(|x| parse_matrix(&f, dim, x)).collect::<Result<Vec<_>>>()?;
                    Representation::new(&f, dim, mats)?
                }
                None => Representation::new(&f, 1, vec![Matrix::identity(&f, 1); h_gens.len()])?,
            };
            let cosets = CosetDecomposition::left(&g, &h_gens)?;
            Ok(Module::Finite(induced_module(&h_rep, &g, &cosets)?))
        }
        "additive" => {
            let f = field_of(cfg)?;
            let summands: Vec<Summand> = param(p, "summands")?;
            Ok(Module::Parametric(additive_module(&f, &summands)?))
        }
        "torus" => {
            let f = cfg.field.clone().map(Field::new).transpose()?.unwrap_or_else(Field::rationals);
            let weights: Vec<i64> = param(p, "weights")?;
            Ok(Module::Parametric(torus_module(&f, &weights)?))
        }
        other => Err(cfg_err(format!("unknown module type '{}'", other))),
    }
}
