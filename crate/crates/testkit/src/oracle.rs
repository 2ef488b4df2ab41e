//! Brute-force reference classifier.
//!
//! Two routes, both independent of the worklist engine:
//!
//! * [`naive_saturate`] applies every completion rule to every candidate on
//!   each pass and stops when a full pass changes nothing.
//! * [`definitorial_normalize`] names every complex subconcept `X ≡ C`
//!   instead of using polarity, so its normal form shares nothing with the
//!   library's normalizer beyond the input TBox.

use std::collections::{BTreeMap, BTreeSet};

use karyotype_core::ontology::{Axiom, Concept, TBox};
use karyotype_core::reasoner::{self, Basic, NormalAxiom, Saturation, BOTTOM, TOP};

pub fn naive_saturate(classes: &[String], roles: &[String], axioms: &[NormalAxiom]) -> Saturation {
    let mut concepts: BTreeSet<String> = classes.iter().cloned().collect();
    concepts.insert(TOP.into());
    concepts.insert(BOTTOM.into());
    let mut role_set: BTreeSet<String> = roles.iter().cloned().collect();
    for ax in axioms {
        match ax {
            NormalAxiom::Sub(a, b) => {
                concepts.insert(a.name().into());
                concepts.insert(b.name().into());
            }
            NormalAxiom::Conj(a, b, c) => {
                for x in [a, b, c] {
                    concepts.insert(x.name().into());
                }
            }
            NormalAxiom::SubSome(a, r, b) | NormalAxiom::SomeSub(r, a, b) => {
                concepts.insert(a.name().into());
                concepts.insert(b.name().into());
                role_set.insert(r.clone());
            }
            NormalAxiom::Transitive(r) => {
                role_set.insert(r.clone());
            }
            NormalAxiom::SubRole(r, s) => {
                role_set.insert(r.clone());
                role_set.insert(s.clone());
            }
        }
    }

    let mut s: BTreeMap<String, BTreeSet<String>> = concepts
        .iter()
        .map(|c| {
            (
                c.clone(),
                [c.clone(), TOP.to_string()].into_iter().collect(),
            )
        })
        .collect();
    let mut r: BTreeMap<String, BTreeSet<(String, String)>> = role_set
        .iter()
        .map(|r| (r.clone(), BTreeSet::new()))
        .collect();

    loop {
        let mut changed = false;
        for a in &concepts {
            for ax in axioms {
                let sa = &s[a];
                match ax {
                    NormalAxiom::Sub(x, b) if sa.contains(x.name()) => {
                        changed |= s.get_mut(a).unwrap().insert(b.name().into());
                    }
                    NormalAxiom::Conj(x, y, b)
                        if sa.contains(x.name()) && sa.contains(y.name()) =>
                    {
                        changed |= s.get_mut(a).unwrap().insert(b.name().into());
                    }
                    NormalAxiom::SubSome(x, role, b) if sa.contains(x.name()) => {
                        changed |= r
                            .get_mut(role)
                            .unwrap()
                            .insert((a.clone(), b.name().into()));
                    }
                    _ => {}
                }
            }
        }
        let links: Vec<(String, String, String)> = r
            .iter()
            .flat_map(|(role, pairs)| {
                pairs
                    .iter()
                    .map(move |(a, b)| (role.clone(), a.clone(), b.clone()))
            })
            .collect();
        for (role, a, b) in &links {
            for ax in axioms {
                match ax {
                    NormalAxiom::SomeSub(rr, x, c) if rr == role && s[b].contains(x.name()) => {
                        changed |= s.get_mut(a).unwrap().insert(c.name().into());
                    }
                    NormalAxiom::SubRole(rr, sup) if rr == role => {
                        changed |= r.get_mut(sup).unwrap().insert((a.clone(), b.clone()));
                    }
                    NormalAxiom::Transitive(rr) if rr == role => {
                        for (role2, b2, c) in &links {
                            if role2 == role && b2 == b {
                                changed |= r.get_mut(role).unwrap().insert((a.clone(), c.clone()));
                            }
                        }
                    }
                    _ => {}
                }
            }
            if s[b].contains(BOTTOM) {
                changed |= s.get_mut(a).unwrap().insert(BOTTOM.into());
            }
        }
        if !changed {
            break;
        }
    }
    Saturation {
        subsumers: s,
        links: r,
    }
}

#[derive(Default)]
struct Definitions {
    names: BTreeMap<Concept, Basic>,
    out: Vec<NormalAxiom>,
}

impl Definitions {
    fn fresh(&mut self) -> Basic {
        Basic::Named(format!("@def{}", self.names.len() + self.out.len()))
    }

    fn name(&mut self, c: &Concept) -> Basic {
        match c {
            Concept::Top => return Basic::Top,
            Concept::Bottom => return Basic::Bottom,
            Concept::Named(n) => return Basic::Named(n.clone()),
            _ => {}
        }
        if let Some(x) = self.names.get(c) {
            return x.clone();
        }
        let x = self.fresh();
        self.names.insert(c.clone(), x.clone());
        match c {
            Concept::And(members) => {
                let ys: Vec<Basic> = members.iter().map(|m| self.name(m)).collect();
                for y in &ys {
                    self.out.push(NormalAxiom::Sub(x.clone(), y.clone()));
                }
                let mut acc = ys[0].clone();
                for (i, y) in ys.iter().enumerate().skip(1) {
                    let next = if i + 1 == ys.len() {
                        x.clone()
                    } else {
                        self.fresh()
                    };
                    self.out
                        .push(NormalAxiom::Conj(acc, y.clone(), next.clone()));
                    acc = next;
                }
            }
            Concept::Some(r, filler) => {
                let y = self.name(filler);
                self.out
                    .push(NormalAxiom::SubSome(x.clone(), r.clone(), y.clone()));
                self.out.push(NormalAxiom::SomeSub(r.clone(), y, x.clone()));
            }
            _ => unreachable!(),
        }
        x
    }

    fn sub(&mut self, a: &Concept, b: &Concept) {
        let x = self.name(a);
        let y = self.name(b);
        self.out.push(NormalAxiom::Sub(x, y));
    }
}

pub fn definitorial_normalize(tbox: &TBox) -> Vec<NormalAxiom> {
    let mut d = Definitions::default();
    for ax in tbox.axioms() {
        match ax {
            Axiom::SubClassOf(a, b) => d.sub(a, b),
            Axiom::EquivalentTo(n, c) => {
                let n = Concept::Named(n.clone());
                d.sub(&n, c);
                d.sub(c, &n);
            }
            Axiom::DisjointWith(a, b) => d.out.push(NormalAxiom::Conj(
                Basic::Named(a.clone()),
                Basic::Named(b.clone()),
                Basic::Bottom,
            )),
            Axiom::TransitiveRole(r) => d.out.push(NormalAxiom::Transitive(r.clone())),
            Axiom::SubRoleOf(r, s) => d.out.push(NormalAxiom::SubRole(r.clone(), s.clone())),
        }
    }
    d.out
}

fn declared(tbox: &TBox) -> (Vec<String>, Vec<String>) {
    (
        tbox.classes().iter().cloned().collect(),
        tbox.roles().iter().cloned().collect(),
    )
}

/// Checks the library against both oracle routes:
///
/// 1. on the library's own normal form, the worklist saturation must equal
///    the naive one exactly, fresh names included;
/// 2. on the independent definitorial normal form, the named-class
///    subsumers must agree (an unsatisfiable class is compared only on
///    its unsatisfiability, since completion is complete only up to ⊥).
pub fn check(tbox: &TBox) -> Result<(), String> {
    let (classes, roles) = declared(tbox);

    let normal = reasoner::normalize(tbox);
    let fast = reasoner::saturate(
        classes.iter().map(String::as_str),
        roles.iter().map(String::as_str),
        &normal,
    );
    let slow = naive_saturate(&classes, &roles, &normal);
    if fast != slow {
        return Err(format!(
            "worklist and naive saturation differ\nworklist: {fast:?}\nnaive: {slow:?}"
        ));
    }

    let independent = naive_saturate(&classes, &roles, &definitorial_normalize(tbox));
    let keep = |set: &BTreeSet<String>| -> BTreeSet<String> {
        set.iter()
            .filter(|n| *n == TOP || *n == BOTTOM || tbox.has_class(n))
            .cloned()
            .collect()
    };
    for c in classes.iter().map(String::as_str).chain([TOP]) {
        let a = keep(&slow.subsumers[c]);
        let b = keep(&independent.subsumers[c]);
        let unsat_a = a.contains(BOTTOM);
        let unsat_b = b.contains(BOTTOM);
        if unsat_a != unsat_b || (!unsat_a && a != b) {
            return Err(format!(
                "subsumers of {c} differ across normal forms: {a:?} vs {b:?}"
            ));
        }
    }
    Ok(())
}
