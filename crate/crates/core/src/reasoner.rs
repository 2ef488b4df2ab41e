//! EL+ classification by saturation.
//!
//! Axioms are first brought into normal form, then a worklist applies the
//! completion rules until nothing new can be derived:
//!
//! ```text
//! A' ∈ S(A), A' ⊑ B                      ⟹ B ∈ S(A)
//! A1, A2 ∈ S(A), A1 ⊓ A2 ⊑ B             ⟹ B ∈ S(A)
//! A' ∈ S(A), A' ⊑ ∃r.B                   ⟹ (A, B) ∈ R(r)
//! (A, B) ∈ R(r), B' ∈ S(B), ∃r.B' ⊑ C    ⟹ C ∈ S(A)
//! (A, B), (B, C) ∈ R(r), r transitive    ⟹ (A, C) ∈ R(r)
//! (A, B) ∈ R(r), r ⊑ s                   ⟹ (A, B) ∈ R(s)
//! (A, B) ∈ R(r), ⊥ ∈ S(B)                ⟹ ⊥ ∈ S(A)
//! ```

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ontology::{Axiom, Concept, TBox, FRESH_PREFIX};

pub const TOP: &str = "Top";
pub const BOTTOM: &str = "Bottom";

/// A named class, a fresh normalization name, `Top` or `Bottom`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basic {
    Top,
    Bottom,
    Named(String),
}

impl Basic {
    pub fn name(&self) -> &str {
        match self {
            Basic::Top => TOP,
            Basic::Bottom => BOTTOM,
            Basic::Named(n) => n,
        }
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self, Basic::Named(n) if n.starts_with(FRESH_PREFIX))
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalAxiom {
    /// A ⊑ B
    Sub(Basic, Basic),
    /// A1 ⊓ A2 ⊑ B
    Conj(Basic, Basic, Basic),
    /// A ⊑ ∃r.B
    SubSome(Basic, String, Basic),
    /// ∃r.A ⊑ B
    SomeSub(String, Basic, Basic),
    Transitive(String),
    /// r ⊑ s
    SubRole(String, String),
}

impl fmt::Display for NormalAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalAxiom::Sub(a, b) => write!(f, "{a} ⊑ {b}"),
            NormalAxiom::Conj(a, b, c) => write!(f, "{a} ⊓ {b} ⊑ {c}"),
            NormalAxiom::SubSome(a, r, b) => write!(f, "{a} ⊑ ∃{r}.{b}"),
            NormalAxiom::SomeSub(r, a, b) => write!(f, "∃{r}.{a} ⊑ {b}"),
            NormalAxiom::Transitive(r) => write!(f, "transitive({r})"),
            NormalAxiom::SubRole(r, s) => write!(f, "{r} ⊑ {s}"),
        }
    }
}

/// Normal form of every axiom, visited in canonical order so that fresh
/// names do not depend on assertion order.
pub fn normalize(tbox: &TBox) -> Vec<NormalAxiom> {
    let mut n = Normalizer::default();
    for axiom in tbox.canonical_axioms() {
        match axiom {
            Axiom::SubClassOf(lhs, rhs) => n.sub(lhs, rhs),
            Axiom::EquivalentTo(name, c) => {
                let named = Concept::Named(name.clone());
                n.sub(&named, c);
                n.sub(c, &named);
            }
            Axiom::DisjointWith(a, b) => n.out.push(NormalAxiom::Conj(
                Basic::Named(a.clone()),
                Basic::Named(b.clone()),
                Basic::Bottom,
            )),
            Axiom::TransitiveRole(r) => n.out.push(NormalAxiom::Transitive(r.clone())),
            Axiom::SubRoleOf(r, s) => n.out.push(NormalAxiom::SubRole(r.clone(), s.clone())),
        }
    }
    n.out
}

#[derive(Default)]
struct Normalizer {
    next: usize,
    out: Vec<NormalAxiom>,
}

fn as_basic(c: &Concept) -> Option<Basic> {
    match c {
        Concept::Top => Some(Basic::Top),
        Concept::Bottom => Some(Basic::Bottom),
        Concept::Named(n) => Some(Basic::Named(n.clone())),
        _ => None,
    }
}

impl Normalizer {
    fn fresh(&mut self) -> Basic {
        self.next += 1;
        Basic::Named(format!("{FRESH_PREFIX}{}", self.next))
    }

    fn sub(&mut self, lhs: &Concept, rhs: &Concept) {
        match rhs {
            Concept::Top => {}
            Concept::Bottom | Concept::Named(_) => {
                let target = as_basic(rhs).unwrap();
                self.lhs_into(lhs, target);
            }
            Concept::And(members) => {
                let a = self.lhs_basic(lhs);
                for m in members {
                    self.sub_basic(&a, m);
                }
            }
            Concept::Some(role, filler) => {
                let a = self.lhs_basic(lhs);
                let b = self.rhs_basic(filler);
                self.out.push(NormalAxiom::SubSome(a, role.clone(), b));
            }
        }
    }

    fn sub_basic(&mut self, lhs: &Basic, rhs: &Concept) {
        let lhs = match lhs {
            Basic::Top => Concept::Top,
            Basic::Bottom => Concept::Bottom,
            Basic::Named(n) => Concept::Named(n.clone()),
        };
        self.sub(&lhs, rhs);
    }

    /// lhs ⊑ target
    fn lhs_into(&mut self, lhs: &Concept, target: Basic) {
        match lhs {
            Concept::Bottom => {}
            Concept::Top | Concept::Named(_) => {
                let a = as_basic(lhs).unwrap();
                if a != target {
                    self.out.push(NormalAxiom::Sub(a, target));
                }
            }
            Concept::And(members) => {
                let bases: Vec<Basic> = members.iter().map(|m| self.lhs_basic(m)).collect();
                let mut acc = bases[0].clone();
                for (i, b) in bases.iter().enumerate().skip(1) {
                    let next = if i + 1 == bases.len() {
                        target.clone()
                    } else {
                        self.fresh()
                    };
                    self.out
                        .push(NormalAxiom::Conj(acc, b.clone(), next.clone()));
                    acc = next;
                }
            }
            Concept::Some(role, filler) => {
                let b = self.lhs_basic(filler);
                self.out.push(NormalAxiom::SomeSub(role.clone(), b, target));
            }
        }
    }

    /// A basic concept implied by `c` (c ⊑ result).
    fn lhs_basic(&mut self, c: &Concept) -> Basic {
        if let Some(b) = as_basic(c) {
            return b;
        }
        let y = self.fresh();
        self.lhs_into(c, y.clone());
        y
    }

    /// A basic concept implying `c` (result ⊑ c).
    fn rhs_basic(&mut self, c: &Concept) -> Basic {
        if let Some(b) = as_basic(c) {
            return b;
        }
        let x = self.fresh();
        self.sub_basic(&x, c);
        x
    }
}

/// The full saturation, fresh names included.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Saturation {
    pub subsumers: BTreeMap<String, BTreeSet<String>>,
    pub links: BTreeMap<String, BTreeSet<(String, String)>>,
}

/// Runs the completion rules over `axioms` with every name in `classes` plus
/// the names the axioms mention.
pub fn saturate<'a>(
    classes: impl IntoIterator<Item = &'a str>,
    roles: impl IntoIterator<Item = &'a str>,
    axioms: &[NormalAxiom],
) -> Saturation {
    Engine::new(classes, roles, axioms).run()
}

struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn contains(&self, i: u32) -> bool {
        self.0[i as usize / 64] & (1 << (i % 64)) != 0
    }

    fn insert(&mut self, i: u32) -> bool {
        let word = &mut self.0[i as usize / 64];
        let bit = 1 << (i % 64);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }
}

enum Work {
    Sub(u32, u32),
    Link(u32, u32, u32),
}

const TOP_ID: u32 = 0;
const BOTTOM_ID: u32 = 1;

struct Engine {
    names: Vec<String>,
    role_names: Vec<String>,
    told: Vec<Vec<u32>>,
    conj: Vec<Vec<(u32, u32)>>,
    sub_some: Vec<Vec<(u32, u32)>>,
    /// Indexed by filler then role: ∃r.B ⊑ C.
    some_sub: Vec<BTreeMap<u32, Vec<u32>>>,
    role_sups: Vec<Vec<u32>>,
    transitive: Vec<bool>,
    subs: Vec<BitSet>,
    subs_list: Vec<Vec<u32>>,
    out: Vec<Vec<BTreeSet<u32>>>,
    inc: Vec<Vec<BTreeSet<u32>>>,
    queue: VecDeque<Work>,
}

impl Engine {
    fn new<'a>(
        classes: impl IntoIterator<Item = &'a str>,
        roles: impl IntoIterator<Item = &'a str>,
        axioms: &[NormalAxiom],
    ) -> Self {
        let mut ids: BTreeMap<String, u32> = BTreeMap::new();
        let mut names = vec![TOP.to_string(), BOTTOM.to_string()];
        ids.insert(TOP.to_string(), TOP_ID);
        ids.insert(BOTTOM.to_string(), BOTTOM_ID);
        let mut role_ids: BTreeMap<String, u32> = BTreeMap::new();
        let mut role_names = Vec::new();

        let mut intern = |name: &str, ids: &mut BTreeMap<String, u32>| -> u32 {
            if let Some(&id) = ids.get(name) {
                return id;
            }
            let id = names.len() as u32;
            names.push(name.to_string());
            ids.insert(name.to_string(), id);
            id
        };
        let mut role = |name: &str| -> u32 {
            if let Some(&id) = role_ids.get(name) {
                return id;
            }
            let id = role_names.len() as u32;
            role_names.push(name.to_string());
            role_ids.insert(name.to_string(), id);
            id
        };

        for c in classes {
            intern(c, &mut ids);
        }
        for r in roles {
            role(r);
        }
        // resolve every axiom to ids before sizing the indexes
        enum Ix {
            Sub(u32, u32),
            Conj(u32, u32, u32),
            SubSome(u32, u32, u32),
            SomeSub(u32, u32, u32),
            Transitive(u32),
            SubRole(u32, u32),
        }
        let mut resolved = Vec::with_capacity(axioms.len());
        for ax in axioms {
            let mut b = |x: &Basic| intern(x.name(), &mut ids);
            resolved.push(match ax {
                NormalAxiom::Sub(a, c) => Ix::Sub(b(a), b(c)),
                NormalAxiom::Conj(a1, a2, c) => Ix::Conj(b(a1), b(a2), b(c)),
                NormalAxiom::SubSome(a, r, f) => {
                    let (a, f) = (b(a), b(f));
                    Ix::SubSome(a, role(r), f)
                }
                NormalAxiom::SomeSub(r, f, c) => {
                    let (f, c) = (b(f), b(c));
                    Ix::SomeSub(role(r), f, c)
                }
                NormalAxiom::Transitive(r) => Ix::Transitive(role(r)),
                NormalAxiom::SubRole(r, s) => Ix::SubRole(role(r), role(s)),
            });
        }

        let n = names.len();
        let nr = role_names.len();
        let mut engine = Engine {
            names,
            role_names,
            told: vec![Vec::new(); n],
            conj: vec![Vec::new(); n],
            sub_some: vec![Vec::new(); n],
            some_sub: vec![BTreeMap::new(); n],
            role_sups: vec![Vec::new(); nr],
            transitive: vec![false; nr],
            subs: (0..n).map(|_| BitSet::new(n)).collect(),
            subs_list: vec![Vec::new(); n],
            out: vec![vec![BTreeSet::new(); n]; nr],
            inc: vec![vec![BTreeSet::new(); n]; nr],
            queue: VecDeque::new(),
        };
        for ax in resolved {
            match ax {
                Ix::Sub(a, b) => engine.told[a as usize].push(b),
                Ix::Conj(a1, a2, b) => {
                    engine.conj[a1 as usize].push((a2, b));
                    if a1 != a2 {
                        engine.conj[a2 as usize].push((a1, b));
                    }
                }
                Ix::SubSome(a, r, b) => engine.sub_some[a as usize].push((r, b)),
                Ix::SomeSub(r, b, c) => engine.some_sub[b as usize].entry(r).or_default().push(c),
                Ix::Transitive(r) => engine.transitive[r as usize] = true,
                Ix::SubRole(r, s) => engine.role_sups[r as usize].push(s),
            }
        }
        engine
    }

    fn run(mut self) -> Saturation {
        for c in 0..self.names.len() as u32 {
            self.queue.push_back(Work::Sub(c, c));
            self.queue.push_back(Work::Sub(c, TOP_ID));
        }
        while let Some(work) = self.queue.pop_front() {
            match work {
                Work::Sub(a, x) => self.add_sub(a, x),
                Work::Link(r, a, b) => self.add_link(r, a, b),
            }
        }
        self.into_saturation()
    }

    fn add_sub(&mut self, a: u32, x: u32) {
        if !self.subs[a as usize].insert(x) {
            return;
        }
        self.subs_list[a as usize].push(x);
        let xi = x as usize;
        for &b in &self.told[xi] {
            self.queue.push_back(Work::Sub(a, b));
        }
        for &(other, b) in &self.conj[xi] {
            if self.subs[a as usize].contains(other) {
                self.queue.push_back(Work::Sub(a, b));
            }
        }
        for &(r, b) in &self.sub_some[xi] {
            self.queue.push_back(Work::Link(r, a, b));
        }
        for (&r, cs) in &self.some_sub[xi] {
            for &p in &self.inc[r as usize][a as usize] {
                for &c in cs {
                    self.queue.push_back(Work::Sub(p, c));
                }
            }
        }
        if x == BOTTOM_ID {
            for inc in &self.inc {
                for &p in &inc[a as usize] {
                    self.queue.push_back(Work::Sub(p, BOTTOM_ID));
                }
            }
        }
    }

    fn add_link(&mut self, r: u32, a: u32, b: u32) {
        let ri = r as usize;
        if !self.out[ri][a as usize].insert(b) {
            return;
        }
        self.inc[ri][b as usize].insert(a);
        for &x in &self.subs_list[b as usize] {
            if let Some(cs) = self.some_sub[x as usize].get(&r) {
                for &c in cs {
                    self.queue.push_back(Work::Sub(a, c));
                }
            }
        }
        if self.subs[b as usize].contains(BOTTOM_ID) {
            self.queue.push_back(Work::Sub(a, BOTTOM_ID));
        }
        for &s in &self.role_sups[ri] {
            self.queue.push_back(Work::Link(s, a, b));
        }
        if self.transitive[ri] {
            for &c in &self.out[ri][b as usize] {
                self.queue.push_back(Work::Link(r, a, c));
            }
            for &p in &self.inc[ri][a as usize] {
                self.queue.push_back(Work::Link(r, p, b));
            }
        }
    }

    fn into_saturation(self) -> Saturation {
        let name = |i: &u32| self.names[*i as usize].clone();
        let subsumers = self
            .subs_list
            .iter()
            .enumerate()
            .map(|(i, s)| (self.names[i].clone(), s.iter().map(name).collect()))
            .collect();
        let links = self
            .out
            .iter()
            .enumerate()
            .map(|(r, out)| {
                let pairs = out
                    .iter()
                    .enumerate()
                    .flat_map(|(a, bs)| bs.iter().map(move |b| (a, *b)))
                    .map(|(a, b)| (self.names[a].clone(), name(&b)))
                    .collect();
                (self.role_names[r].clone(), pairs)
            })
            .collect();
        Saturation { subsumers, links }
    }
}

/// Classification result restricted to user-declared names, `Top` and
/// `Bottom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsumptionMap {
    subsumers: BTreeMap<String, BTreeSet<String>>,
    top: BTreeSet<String>,
    links: BTreeMap<String, BTreeSet<(String, String)>>,
}

pub fn classify(tbox: &TBox) -> SubsumptionMap {
    let axioms = normalize(tbox);
    let sat = saturate(
        tbox.classes().iter().map(String::as_str),
        tbox.roles().iter().map(String::as_str),
        &axioms,
    );
    SubsumptionMap::project(tbox, sat)
}

impl SubsumptionMap {
    /// Drops fresh normalization names from a saturation.
    pub fn project(tbox: &TBox, sat: Saturation) -> Self {
        let keep = |n: &str| n == TOP || n == BOTTOM || tbox.has_class(n);
        let filter = |s: &BTreeSet<String>| -> BTreeSet<String> {
            s.iter().filter(|n| keep(n)).cloned().collect()
        };
        let top = sat.subsumers.get(TOP).map(filter).unwrap_or_default();
        let subsumers = sat
            .subsumers
            .iter()
            .filter(|(c, _)| tbox.has_class(c))
            .map(|(c, s)| (c.clone(), filter(s)))
            .collect();
        let links = sat
            .links
            .into_iter()
            .filter(|(r, _)| tbox.has_role(r))
            .map(|(r, pairs)| {
                let pairs = pairs
                    .into_iter()
                    .filter(|(a, b)| keep(a) && keep(b))
                    .collect();
                (r, pairs)
            })
            .collect();
        SubsumptionMap {
            subsumers,
            top,
            links,
        }
    }

    /// S(C) for a declared class.
    pub fn subsumers(&self, class: &str) -> Option<&BTreeSet<String>> {
        self.subsumers.get(class)
    }

    pub fn classes(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.subsumers.iter().map(|(c, s)| (c.as_str(), s))
    }

    /// R(r) restricted to declared names.
    pub fn links(&self, role: &str) -> Option<&BTreeSet<(String, String)>> {
        self.links.get(role)
    }

    /// Whether `sub ⊑ sup` is entailed. `Top` and `Bottom` are accepted on
    /// either side; an unsatisfiable `sub` is below everything.
    pub fn is_subclass(&self, sub: &str, sup: &str) -> Result<bool> {
        let s = match sub {
            BOTTOM => None,
            TOP => Some(&self.top),
            _ => Some(
                self.subsumers
                    .get(sub)
                    .ok_or_else(|| Error::UnknownEntity(sub.to_string()))?,
            ),
        };
        if sup != TOP && sup != BOTTOM && !self.subsumers.contains_key(sup) {
            return Err(Error::UnknownEntity(sup.to_string()));
        }
        Ok(match s {
            None => true,
            Some(s) => s.contains(BOTTOM) || sup == TOP || s.contains(sup),
        })
    }

    pub fn unsatisfiable(&self) -> impl Iterator<Item = &str> {
        self.subsumers
            .iter()
            .filter(|(_, s)| s.contains(BOTTOM))
            .map(|(c, _)| c.as_str())
    }

    pub fn coherent(&self) -> bool {
        self.unsatisfiable().next().is_none()
    }

    pub fn consistent(&self) -> bool {
        !self.top.contains(BOTTOM)
    }
}
