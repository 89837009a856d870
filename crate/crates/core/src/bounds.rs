//! Relative degree-bound calculus over declared subgroup structure.
//!
//! Upper bounds combine the ceiling `|G|`, the subgroup-index and normal
//! subgroup product rules, the non-cyclic coprime subquotient rule and the
//! exact values of the known families. Lower bounds come from element orders,
//! Sylow subgroups, subgroups and the exact values.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::reps::GroupElements;
use crate::scalars::is_prime;

/// Known families with exact separating degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Cyclic,
    /// dihedral group of order `2n`
    Dihedral { n: u64 },
    /// symmetric group on `degree` letters
    Symmetric { degree: u64 },
}

/// A subgroup fact.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub order: u64,
    #[serde(default)]
    pub index: Option<u64>,
    #[serde(default)]
    pub normal: bool,
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default)]
    pub p_group: bool,
    /// full facts about the subgroup itself
    #[serde(default)]
    pub descriptor: Option<Box<GroupDescriptor>>,
    /// facts about `G/H`, meaningful when `normal`
    #[serde(default)]
    pub quotient: Option<Box<GroupDescriptor>>,
}

/// A section `H/N` with `N` normal in `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subquotient {
    #[serde(default)]
    pub name: Option<String>,
    /// `s = |H/N|`
    pub s: u64,
    pub cyclic: bool,
}

/// Declarative facts about a finite group and the intended characteristic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    #[serde(default)]
    pub name: Option<String>,
    pub order: u64,
    pub characteristic: u64,
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default)]
    pub p_group: bool,
    #[serde(default)]
    pub max_element_order: Option<u64>,
    #[serde(default)]
    pub subgroups: Vec<SubgroupEntry>,
    #[serde(default)]
    pub subquotients: Vec<Subquotient>,
}

fn prime_power_of(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1).then_some(p)
}

impl GroupDescriptor {
    pub fn new(order: u64, characteristic: u64) -> Self {
        GroupDescriptor { order, characteristic, ..Default::default() }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("group of order {}", self.order))
    }

    /// Whether the order is a power of the characteristic.
    pub fn is_modular_p_group(&self) -> bool {
        self.characteristic > 0 && (self.order == 1 || prime_power_of(self.order) == Some(self.characteristic))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(format!("{}: {}", self.label(), m)));
        if self.order == 0 {
            return bad("order must be positive".into());
        }
        if self.characteristic != 0 && !is_prime(self.characteristic) {
            return bad(format!("characteristic {} is not 0 or a prime", self.characteristic));
        }
        if self.p_group && self.order > 1 && prime_power_of(self.order).is_none() {
            return bad("p-group flag on an order that is not a prime power".into());
        }
        if let Some(m) = self.max_element_order {
            if m == 0 || self.order % m != 0 {
                return bad(format!("max element order {} does not divide {}", m, self.order));
            }
            if self.cyclic && m != self.order {
                return bad("cyclic group whose max element order differs from its order".into());
            }
        }
        match &self.family {
            Some(Family::Dihedral { n }) if 2 * n != self.order => return bad("dihedral order must be 2n".into()),
            Some(Family::Symmetric { degree }) if (1..=*degree).product::<u64>() != self.order => {
                return bad("symmetric group order must be degree!".into())
            }
            _ => {}
        }
        for h in &self.subgroups {
            if h.order == 0 || self.order % h.order != 0 {
                return bad(format!("subgroup order {} does not divide {}", h.order, self.order));
            }
            if let Some(i) = h.index {
                if i * h.order != self.order {
                    return bad(format!("index {} times order {} is not {}", i, h.order, self.order));
                }
            }
            if h.p_group && h.order > 1 && prime_power_of(h.order).is_none() {
                return bad("p-group flag on a subgroup whose order is not a prime power".into());
            }
            if let Some(d) = &h.descriptor {
                if d.order != h.order || d.characteristic != self.characteristic {
                    return bad("subgroup descriptor disagrees with its entry".into());
                }
                d.validate()?;
            }
            if let Some(q) = &h.quotient {
                if !h.normal {
                    return bad("quotient given for a subgroup not declared normal".into());
                }
                if q.order * h.order != self.order || q.characteristic != self.characteristic {
                    return bad("quotient descriptor has the wrong order or characteristic".into());
                }
                q.validate()?;
            }
        }
        for sq in &self.subquotients {
            if sq.s == 0 || self.order % sq.s != 0 {
                return bad(format!("subquotient order {} does not divide {}", sq.s, self.order));
            }
        }
        Ok(())
    }

    /// Descriptor of a subgroup: its own facts if declared, otherwise the flags
    /// of its entry.
    fn subgroup_descriptor(&self, h: &SubgroupEntry) -> GroupDescriptor {
        match &h.descriptor {
            Some(d) => (**d).clone(),
            None => GroupDescriptor {
                name: h.name.clone(),
                order: h.order,
                characteristic: self.characteristic,
                cyclic: h.cyclic,
                p_group: h.p_group,
                max_element_order: h.cyclic.then_some(h.order),
                ..Default::default()
            },
        }
    }

    fn quotient_descriptor(&self, h: &SubgroupEntry) -> GroupDescriptor {
        match &h.quotient {
            Some(q) => (**q).clone(),
            None => GroupDescriptor::new(self.order / h.order, self.characteristic),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

/// One applied rule: the arithmetic from `inputs` to `output` can be replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub inputs: Value,
    pub output: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub bound: u64,
    pub direction: Direction,
    pub chain: Vec<Step>,
}

fn input(step: &Step, key: &str) -> Result<u64> {
    step.inputs
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidDescriptor(format!("step {} lacks input {}", step.rule, key)))
}

impl Step {
    /// Recomputes the output from the inputs.
    pub fn replay(&self) -> Result<u64> {
        Ok(match self.rule.as_str() {
            "order-ceiling" | "p-group-value" | "cyclic-value" | "dihedral-value" => input(self, "order")?,
            "s3-char2-value" => 4,
            "index" => input(self, "index")? * input(self, "subgroup_upper")?,
            "normal-subgroup" => input(self, "quotient_upper")? * input(self, "subgroup_upper")?,
            "noncyclic-subquotient" => {
                let order = input(self, "order")?;
                let (num, den) = if input(self, "s")? % 2 == 0 { (3, 4) } else { (5, 8) };
                (Ratio::new(order * num, den)).floor().to_integer()
            }
            "max-element-order" => input(self, "max_element_order")?,
            "sylow" => input(self, "sylow_order")?,
            "subgroup" => input(self, "subgroup_lower")?,
            other => return Err(Error::InvalidDescriptor(format!("unknown rule {}", other))),
        })
    }
}

impl BoundCertificate {
    /// Replays every step and checks the final output is the bound.
    pub fn verify(&self) -> Result<()> {
        for s in &self.chain {
            if s.replay()? != s.output {
                return Err(Error::Internal(format!("step {} does not replay", s.rule)));
            }
        }
        match self.chain.last() {
            Some(s) if s.output == self.bound => Ok(()),
            _ => Err(Error::Internal("certificate chain does not end at its bound".into())),
        }
    }

    fn single(direction: Direction, step: Step) -> Self {
        BoundCertificate { bound: step.output, direction, chain: vec![step] }
    }

    fn extend(direction: Direction, parts: &[&BoundCertificate], step: Step) -> Self {
        let mut chain: Vec<Step> = parts.iter().flat_map(|c| c.chain.iter().cloned()).collect();
        let bound = step.output;
        chain.push(step);
        BoundCertificate { bound, direction, chain }
    }
}

/// Exact separating degree for the covered families, with its justification.
pub fn exact_value_lookup(desc: &GroupDescriptor) -> Option<(u64, Step)> {
    let p = desc.characteristic;
    let order = desc.order;
    let is_s3 = matches!(desc.family, Some(Family::Symmetric { degree: 3 }) | Some(Family::Dihedral { n: 3 }));
    if is_s3 && p == 2 {
        return Some((4, Step {
            rule: "s3-char2-value".into(),
            reference: "beta_sep(S3) = 4 in characteristic 2 (regular representation computation)".into(),
            inputs: json!({"group": "S3", "characteristic": 2}),
            output: 4,
        }));
    }
    if desc.is_modular_p_group() {
        return Some((order, Step {
            rule: "p-group-value".into(),
            reference: "beta_sep(G) = |G| for a p-group in characteristic p".into(),
            inputs: json!({"order": order, "characteristic": p}),
            output: order,
        }));
    }
    if desc.cyclic || desc.family == Some(Family::Cyclic) {
        return Some((order, Step {
            rule: "cyclic-value".into(),
            reference: "beta_sep(G) = |G| for cyclic G".into(),
            inputs: json!({"order": order}),
            output: order,
        }));
    }
    if let Some(Family::Dihedral { n }) = desc.family {
        if p > 2 && prime_power_of(n) == Some(p) {
            return Some((order, Step {
                rule: "dihedral-value".into(),
                reference: "beta_sep(D_2q) = 2q for q a power of the odd characteristic".into(),
                inputs: json!({"order": order, "n": n, "characteristic": p}),
                output: order,
            }));
        }
    }
    None
}

/// Best derivable upper and lower bounds.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsResult {
    pub upper: BoundCertificate,
    pub lower: BoundCertificate,
    pub exact: Option<u64>,
}

pub fn apply_rules(desc: &GroupDescriptor) -> Result<BoundsResult> {
    desc.validate()?;
    let depth = desc.subgroups.len() + 2;
    let upper = best_upper(desc, depth);
    let lower = best_lower(desc, depth);
    if lower.bound > upper.bound {
        return Err(Error::InvalidDescriptor(format!(
            "derived lower bound {} exceeds upper bound {}: the facts are contradictory",
            lower.bound, upper.bound
        )));
    }
    Ok(BoundsResult { exact: exact_value_lookup(desc).map(|e| e.0), upper, lower })
}

fn best_upper(desc: &GroupDescriptor, depth: usize) -> BoundCertificate {
    let order = desc.order;
    let mut best = BoundCertificate::single(Direction::Upper, Step {
        rule: "order-ceiling".into(),
        reference: "beta_sep(G) <= |G|".into(),
        inputs: json!({"order": order}),
        output: order,
    });
    let mut consider = |c: BoundCertificate| {
        if c.bound < best.bound || (c.bound == best.bound && c.chain.len() < best.chain.len()) {
            best = c;
        }
    };
    if let Some((_, step)) = exact_value_lookup(desc) {
        consider(BoundCertificate::single(Direction::Upper, step));
    }
    let coprime = |s: u64| desc.characteristic == 0 || s.gcd(&desc.characteristic) == 1;
    let mut sections: Vec<(String, u64)> = desc
        .subquotients
        .iter()
        .filter(|sq| !sq.cyclic && sq.s > 1 && coprime(sq.s))
        .map(|sq| (sq.name.clone().unwrap_or_else(|| format!("subquotient of order {}", sq.s)), sq.s))
        .collect();
    sections.extend(
        desc.subgroups
            .iter()
            .filter(|h| !h.cyclic && h.order > 1 && coprime(h.order))
            .map(|h| (h.name.clone().unwrap_or_else(|| format!("subgroup of order {}", h.order)), h.order)),
    );
    for (name, s) in sections {
        let (num, den) = if s % 2 == 0 { (3, 4) } else { (5, 8) };
        let exact = Ratio::new(order * num, den);
        consider(BoundCertificate::single(Direction::Upper, Step {
            rule: "noncyclic-subquotient".into(),
            reference: if s % 2 == 0 {
                "beta_sep(G) <= 3/4 |G| given a non-cyclic section H/N of even order coprime to p".into()
            } else {
                "beta_sep(G) <= 5/8 |G| given a non-cyclic section H/N of odd order coprime to p".into()
            },
            inputs: json!({"order": order, "s": s, "section": name, "exact": exact.to_string()}),
            output: exact.floor().to_integer(),
        }));
    }
    if depth > 0 {
        for h in &desc.subgroups {
            if h.order == order {
                continue;
            }
            let hd = desc.subgroup_descriptor(h);
            let hu = best_upper(&hd, depth - 1);
            let index = order / h.order;
            consider(BoundCertificate::extend(Direction::Upper, &[&hu], Step {
                rule: "index".into(),
                reference: "beta_sep(G) <= [G:H] beta_sep(H)".into(),
                inputs: json!({"index": index, "subgroup": hd.label(), "subgroup_upper": hu.bound}),
                output: index * hu.bound,
            }));
            if h.normal {
                let qd = desc.quotient_descriptor(h);
                let qu = best_upper(&qd, depth - 1);
                consider(BoundCertificate::extend(Direction::Upper, &[&qu, &hu], Step {
                    rule: "normal-subgroup".into(),
                    reference: "beta_sep(G) <= beta_sep(G/H) beta_sep(H) for H normal".into(),
                    inputs: json!({
                        "subgroup": hd.label(),
                        "quotient": qd.label(),
                        "quotient_upper": qu.bound,
                        "subgroup_upper": hu.bound,
                    }),
                    output: qu.bound * hu.bound,
                }));
            }
        }
    }
    best
}

fn best_lower(desc: &GroupDescriptor, depth: usize) -> BoundCertificate {
    let mut best = BoundCertificate::single(Direction::Lower, Step {
        rule: "max-element-order".into(),
        reference: "beta_sep(G) >= max order of an element".into(),
        inputs: json!({"max_element_order": 1}),
        output: 1,
    });
    let mut consider = |c: BoundCertificate| {
        if c.bound > best.bound || (c.bound == best.bound && c.chain.len() < best.chain.len()) {
            best = c;
        }
    };
    if let Some((_, step)) = exact_value_lookup(desc) {
        consider(BoundCertificate::single(Direction::Lower, step));
    }
    let max_order = desc.max_element_order.or(desc.cyclic.then_some(desc.order));
    if let Some(m) = max_order {
        consider(BoundCertificate::single(Direction::Lower, Step {
            rule: "max-element-order".into(),
            reference: "beta_sep(G) >= max order of an element".into(),
            inputs: json!({"max_element_order": m}),
            output: m,
        }));
    }
    let p = desc.characteristic;
    if p > 0 {
        let mut pk = 1;
        while desc.order % (pk * p) == 0 {
            pk *= p;
        }
        consider(BoundCertificate::single(Direction::Lower, Step {
            rule: "sylow".into(),
            reference: "beta_sep(G) >= p^k where p^k is the p-part of |G|".into(),
            inputs: json!({"order": desc.order, "characteristic": p, "sylow_order": pk}),
            output: pk,
        }));
    }
    if depth > 0 {
        for h in &desc.subgroups {
            if h.order == desc.order {
                continue;
            }
            let hd = desc.subgroup_descriptor(h);
            let hl = best_lower(&hd, depth - 1);
            consider(BoundCertificate::extend(Direction::Lower, &[&hl], Step {
                rule: "subgroup".into(),
                reference: "beta_sep(H) <= beta_sep(G) for a subgroup H".into(),
                inputs: json!({"subgroup": hd.label(), "subgroup_lower": hl.bound}),
                output: hl.bound,
            }));
        }
    }
    best
}

/// Facts read off an enumerated group: element orders, cyclic subgroups and
/// subgroups generated by pairs, normality by conjugation, quotient orders.
pub fn describe_group(group: &GroupElements, characteristic: u64) -> Result<GroupDescriptor> {
    if group.order() > 24 {
        return Err(Error::CapExceeded("automatic descriptors need |G| <= 24".into()));
    }
    let orders = group.element_orders();
    let n = group.order();
    let order = n as u64;
    let max = orders.iter().copied().max().unwrap_or(1);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut subgroups = Vec::new();
    for a in 0..n {
        for b in a..n {
            let members = group.subgroup_generated(&[a, b]);
            if members.len() == 1 || members.len() == n || !seen.insert(members.clone()) {
                continue;
            }
            let h_order = members.len() as u64;
            let h_max = members.iter().map(|&x| orders[x]).max().unwrap_or(1);
            let normal = group.is_normal(&members);
            let quotient = if normal {
                let index = order / h_order;
                let inside: BTreeSet<usize> = members.iter().copied().collect();
                // order of gH in G/H
                let coset_order = |g: usize| {
                    let mut k = 1u64;
                    let mut x = g;
                    while !inside.contains(&x) {
                        x = group.mul(x, g);
                        k += 1;
                    }
                    k
                };
                let q_max = (0..n).map(coset_order).max().unwrap_or(1);
                Some(Box::new(GroupDescriptor {
                    order: index,
                    characteristic,
                    cyclic: q_max == index,
                    max_element_order: Some(q_max),
                    ..Default::default()
                }))
            } else {
                None
            };
            subgroups.push(SubgroupEntry {
                name: None,
                order: h_order,
                index: Some(order / h_order),
                normal,
                cyclic: h_max == h_order,
                p_group: prime_power_of(h_order).is_some(),
                descriptor: Some(Box::new(GroupDescriptor {
                    order: h_order,
                    characteristic,
                    cyclic: h_max == h_order,
                    p_group: prime_power_of(h_order).is_some(),
                    max_element_order: Some(h_max),
                    ..Default::default()
                })),
                quotient,
            });
        }
    }
    Ok(GroupDescriptor {
        name: None,
        order,
        characteristic,
        family: dihedral_family(group, &orders).or(if max == order { Some(Family::Cyclic) } else { None }),
        cyclic: max == order,
        p_group: order > 1 && prime_power_of(order).is_some(),
        max_element_order: Some(max),
        subgroups,
        subquotients: Vec::new(),
    })
}

/// `D_2n` for `n >= 3`: a rotation `r` of order `n` and an involution `s`
/// outside `<r>` with `s r s = r^-1`.
fn dihedral_family(group: &GroupElements, orders: &[u64]) -> Option<Family> {
    let n = group.order() as u64 / 2;
    if n < 3 || group.order() % 2 != 0 {
        return None;
    }
    let r = (0..group.order()).find(|&x| orders[x] == n)?;
    let rotations = group.subgroup_generated(&[r]);
    let flips = (0..group.order()).any(|s| {
        orders[s] == 2 && !rotations.contains(&s) && group.mul(group.mul(s, r), s) == group.inverse(r)
    });
    flips.then_some(Family::Dihedral { n })
}

/// The alternating group `A_4` with its Klein four subgroup.
pub fn a4_descriptor(characteristic: u64) -> GroupDescriptor {
    GroupDescriptor {
        name: Some("A4".into()),
        order: 12,
        characteristic,
        max_element_order: Some(3),
        subgroups: vec![SubgroupEntry {
            name: Some("V4".into()),
            order: 4,
            index: Some(3),
            normal: true,
            cyclic: false,
            p_group: true,
            descriptor: None,
            quotient: Some(Box::new(GroupDescriptor {
                name: Some("C3".into()),
                order: 3,
                characteristic,
                cyclic: true,
                ..Default::default()
            })),
        }],
        ..Default::default()
    }
}

/// `A_4 x A_4` with the normal factor `A_4` and quotient `A_4`.
pub fn a4_squared_descriptor(characteristic: u64) -> GroupDescriptor {
    let a4 = a4_descriptor(characteristic);
    GroupDescriptor {
        name: Some("A4xA4".into()),
        order: 144,
        characteristic,
        max_element_order: Some(6),
        subgroups: vec![SubgroupEntry {
            name: Some("A4".into()),
            order: 12,
            index: Some(12),
            normal: true,
            descriptor: Some(Box::new(a4.clone())),
            quotient: Some(Box::new(a4)),
            ..Default::default()
        }],
        ..Default::default()
    }
}

/// `D_2n` with its rotation subgroup and, when `n = p^r m` with `m > 1` coprime
/// to `p`, the non-cyclic subgroup `D_2m`.
pub fn dihedral_descriptor(n: u64, characteristic: u64) -> GroupDescriptor {
    let mut subgroups = vec![SubgroupEntry {
        name: Some(format!("C{}", n)),
        order: n,
        index: Some(2),
        normal: true,
        cyclic: true,
        ..Default::default()
    }];
    let p = characteristic;
    let m = if p > 0 {
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        m
    } else {
        n
    };
    if m > 1 && m < n {
        subgroups.push(SubgroupEntry {
            name: Some(format!("D{}", 2 * m)),
            order: 2 * m,
            index: Some(n / m),
            cyclic: m == 1,
            ..Default::default()
        });
    }
    GroupDescriptor {
        name: Some(format!("D{}", 2 * n)),
        order: 2 * n,
        characteristic,
        family: Some(Family::Dihedral { n }),
        max_element_order: Some(n.max(2)),
        subgroups,
        ..Default::default()
    }
}
