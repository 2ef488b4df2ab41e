//! The axiom store: EL+ concepts, axioms, probes and the text format.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Prefix reserved for names invented during normalization.
pub const FRESH_PREFIX: &str = "@";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Named(String),
    /// At least two members, no duplicates.
    And(Vec<Concept>),
    Some(String, Box<Concept>),
}

impl Concept {
    pub fn named(name: impl Into<String>) -> Self {
        Concept::Named(name.into())
    }

    pub fn some(role: impl Into<String>, filler: Concept) -> Self {
        Concept::Some(role.into(), Box::new(filler))
    }

    /// Builds a conjunction, flattening nested conjunctions and dropping
    /// duplicates. Zero members give `Top`, one member gives itself.
    pub fn and(members: impl IntoIterator<Item = Concept>) -> Self {
        let mut out: Vec<Concept> = Vec::new();
        for m in members {
            match m {
                Concept::And(inner) => {
                    for c in inner {
                        if !out.contains(&c) {
                            out.push(c);
                        }
                    }
                }
                c => {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
        match out.len() {
            0 => Concept::Top,
            1 => out.pop().unwrap(),
            _ => Concept::And(out),
        }
    }

    /// Class names and role names mentioned anywhere in the concept.
    pub fn signature<'a>(&'a self, classes: &mut Vec<&'a str>, roles: &mut Vec<&'a str>) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Named(n) => classes.push(n),
            Concept::And(cs) => cs.iter().for_each(|c| c.signature(classes, roles)),
            Concept::Some(r, c) => {
                roles.push(r);
                c.signature(classes, roles);
            }
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("Top"),
            Concept::Bottom => f.write_str("Bottom"),
            Concept::Named(n) => write_name(f, n),
            Concept::And(cs) => {
                f.write_str("(and")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
            Concept::Some(r, c) => {
                f.write_str("(some ")?;
                write_name(f, r)?;
                write!(f, " {c})")
            }
        }
    }
}

fn write_name(f: &mut impl fmt::Write, name: &str) -> fmt::Result {
    if name.contains(['(', ')']) {
        write!(f, "\"{name}\"")
    } else {
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf(Concept, Concept),
    EquivalentTo(String, Concept),
    DisjointWith(String, String),
    TransitiveRole(String),
    SubRoleOf(String, String),
}

impl Axiom {
    fn signature(&self) -> (Vec<&str>, Vec<&str>) {
        let mut classes = Vec::new();
        let mut roles = Vec::new();
        match self {
            Axiom::SubClassOf(a, b) => {
                a.signature(&mut classes, &mut roles);
                b.signature(&mut classes, &mut roles);
            }
            Axiom::EquivalentTo(n, c) => {
                classes.push(n);
                c.signature(&mut classes, &mut roles);
            }
            Axiom::DisjointWith(a, b) => {
                classes.push(a);
                classes.push(b);
            }
            Axiom::TransitiveRole(r) => roles.push(r),
            Axiom::SubRoleOf(r, s) => {
                roles.push(r);
                roles.push(s);
            }
        }
        (classes, roles)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(a, b) => write!(f, "SubClassOf: {a} {b}"),
            Axiom::EquivalentTo(n, c) => {
                f.write_str("EquivalentTo: ")?;
                write_name(f, n)?;
                write!(f, " {c}")
            }
            Axiom::DisjointWith(a, b) => {
                f.write_str("DisjointWith: ")?;
                write_name(f, a)?;
                f.write_str(" ")?;
                write_name(f, b)
            }
            Axiom::TransitiveRole(r) => {
                f.write_str("Transitive: ")?;
                write_name(f, r)
            }
            Axiom::SubRoleOf(r, s) => {
                f.write_str("SubRoleOf: ")?;
                write_name(f, r)?;
                f.write_str(" ")?;
                write_name(f, s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Class,
    Role,
}

impl EntityKind {
    fn as_str(self) -> &'static str {
        match self {
            EntityKind::Class => "class",
            EntityKind::Role => "role",
        }
    }
}

/// Checks a user-supplied entity name.
pub fn validate_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name.starts_with(FRESH_PREFIX)
        && name != "Top"
        && name != "Bottom"
        && name != "and"
        && name != "some"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || c == '"');
    if ok {
        Ok(())
    } else {
        Err(Error::ReservedName(name.to_string()))
    }
}

/// Entities and axioms added for the duration of a probe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Probe {
    pub classes: Vec<String>,
    pub roles: Vec<String>,
    pub axioms: Vec<Axiom>,
}

impl Probe {
    pub fn new() -> Self {
        Probe::default()
    }

    pub fn class(mut self, name: impl Into<String>) -> Self {
        self.classes.push(name.into());
        self
    }

    pub fn role(mut self, name: impl Into<String>) -> Self {
        self.roles.push(name.into());
        self
    }

    pub fn axiom(mut self, axiom: Axiom) -> Self {
        self.axioms.push(axiom);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.roles.is_empty() && self.axioms.is_empty()
    }
}

#[derive(Clone)]
struct Snapshot {
    classes: BTreeSet<String>,
    roles: BTreeSet<String>,
    axioms: Vec<Axiom>,
    index: BTreeSet<Axiom>,
}

/// Named classes, roles and axioms. Equality ignores the generation counter.
#[derive(Debug, Clone)]
pub struct TBox {
    name: String,
    classes: BTreeSet<String>,
    roles: BTreeSet<String>,
    axioms: Vec<Axiom>,
    index: BTreeSet<Axiom>,
    generation: u64,
}

/// Content equality: the same name, signature and axiom set, regardless of
/// assertion order or generation.
impl PartialEq for TBox {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.classes == other.classes
            && self.roles == other.roles
            && self.index == other.index
    }
}

impl Eq for TBox {}

impl TBox {
    pub fn new(name: impl Into<String>) -> Self {
        TBox {
            name: name.into(),
            classes: BTreeSet::new(),
            roles: BTreeSet::new(),
            axioms: Vec::new(),
            index: BTreeSet::new(),
            generation: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn roles(&self) -> &BTreeSet<String> {
        &self.roles
    }

    /// Axioms in assertion order.
    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    /// Axioms in canonical order.
    pub fn canonical_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.index.iter()
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains(name)
    }

    pub fn has_role(&self, name: &str) -> bool {
        self.roles.contains(name)
    }

    /// Idempotent. Fails if the name is already used for the other kind.
    pub fn declare(&mut self, kind: EntityKind, name: &str) -> Result<()> {
        validate_name(name)?;
        let (own, other, other_kind) = match kind {
            EntityKind::Class => (&mut self.classes, &self.roles, EntityKind::Role),
            EntityKind::Role => (&mut self.roles, &self.classes, EntityKind::Class),
        };
        if other.contains(name) {
            return Err(Error::KindClash {
                name: name.to_string(),
                existing: other_kind.as_str(),
            });
        }
        if own.insert(name.to_owned()) {
            self.generation += 1;
        }
        Ok(())
    }

    /// Appends the axiom unless it is already present. Returns whether it was
    /// added.
    pub fn assert_axiom(&mut self, axiom: Axiom) -> Result<bool> {
        let (classes, roles) = axiom.signature();
        if let Some(c) = classes.iter().find(|c| !self.classes.contains(**c)) {
            return Err(Error::UnknownEntity((*c).to_string()));
        }
        if let Some(r) = roles.iter().find(|r| !self.roles.contains(**r)) {
            return Err(Error::UnknownEntity((*r).to_string()));
        }
        if self.index.contains(&axiom) {
            return Ok(false);
        }
        self.index.insert(axiom.clone());
        self.axioms.push(axiom);
        self.generation += 1;
        Ok(true)
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            classes: self.classes.clone(),
            roles: self.roles.clone(),
            axioms: self.axioms.clone(),
            index: self.index.clone(),
        }
    }

    fn restore(&mut self, s: Snapshot) {
        self.classes = s.classes;
        self.roles = s.roles;
        self.axioms = s.axioms;
        self.index = s.index;
        self.generation += 1;
    }

    /// Runs `body` against this TBox extended with `probe`, then restores the
    /// prior content. The restore also happens when applying the probe fails
    /// or `body` panics.
    pub fn with_probe<R>(&mut self, probe: &Probe, body: impl FnOnce(&TBox) -> R) -> Result<R> {
        let guard = Restore {
            saved: Some(self.snapshot()),
            tbox: self,
        };
        for c in &probe.classes {
            guard.tbox.declare(EntityKind::Class, c)?;
        }
        for r in &probe.roles {
            guard.tbox.declare(EntityKind::Role, r)?;
        }
        for a in &probe.axioms {
            guard.tbox.assert_axiom(a.clone())?;
        }
        Ok(body(&*guard.tbox))
    }

    /// Direct told superclasses of every class, from `SubClassOf` and
    /// `EquivalentTo` axioms whose left side is a name.
    pub fn told_parents(&self) -> BTreeMap<&str, Vec<&str>> {
        fn named<'a>(c: &'a Concept, out: &mut Vec<&'a str>) {
            match c {
                Concept::Named(n) => out.push(n),
                Concept::And(cs) => cs.iter().for_each(|c| named(c, out)),
                _ => {}
            }
        }
        let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for a in &self.axioms {
            let (sub, sup) = match a {
                Axiom::SubClassOf(Concept::Named(sub), sup) => (sub.as_str(), sup),
                Axiom::EquivalentTo(sub, sup) => (sub.as_str(), sup),
                _ => continue,
            };
            named(sup, parents.entry(sub).or_default());
        }
        parents
    }

    /// Every class reachable from `class` through told superclass links.
    pub fn told_superclasses(&self, class: &str) -> BTreeSet<String> {
        let parents = self.told_parents();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = alloc::vec![class];
        while let Some(c) = stack.pop() {
            for p in parents.get(c).into_iter().flatten() {
                if seen.insert((*p).to_string()) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Canonical text form: header, sorted declarations, sorted axioms.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("Ontology: ");
        let _ = write_name(&mut out, &self.name);
        out.push('\n');
        for c in &self.classes {
            out.push_str("Class: ");
            let _ = write_name(&mut out, c);
            out.push('\n');
        }
        for r in &self.roles {
            out.push_str("Role: ");
            let _ = write_name(&mut out, r);
            out.push('\n');
        }
        for a in &self.index {
            let _ = writeln!(out, "{a}");
        }
        out
    }

    pub fn deserialize(text: &str) -> Result<TBox> {
        let mut tbox: Option<TBox> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let fail = |message: String| Error::Format { line, message };
            let (keyword, rest) = raw
                .split_once(": ")
                .ok_or_else(|| fail(format!("expected `Keyword: ...`, found {raw:?}")))?;
            let mut tokens = Tokens::new(rest).map_err(fail)?;

            if keyword == "Ontology" {
                if tbox.is_some() {
                    return Err(fail("duplicate Ontology header".into()));
                }
                let name = tokens.name().map_err(fail)?;
                tokens.finish().map_err(fail)?;
                tbox = Some(TBox::new(name));
                continue;
            }
            let t = tbox
                .as_mut()
                .ok_or_else(|| fail("missing Ontology header".into()))?;
            let with_line = |e: Error| match e {
                Error::Format { .. } => e,
                other => Error::Format {
                    line,
                    message: other.to_string(),
                },
            };
            match keyword {
                "Class" | "Role" => {
                    let name = tokens.name().map_err(fail)?;
                    tokens.finish().map_err(fail)?;
                    let kind = if keyword == "Class" {
                        EntityKind::Class
                    } else {
                        EntityKind::Role
                    };
                    t.declare(kind, &name).map_err(with_line)?;
                }
                _ => {
                    let axiom = match keyword {
                        "SubClassOf" => {
                            let a = tokens.concept().map_err(fail)?;
                            let b = tokens.concept().map_err(fail)?;
                            Axiom::SubClassOf(a, b)
                        }
                        "EquivalentTo" => {
                            let n = tokens.name().map_err(fail)?;
                            Axiom::EquivalentTo(n, tokens.concept().map_err(fail)?)
                        }
                        "DisjointWith" => {
                            let a = tokens.name().map_err(fail)?;
                            Axiom::DisjointWith(a, tokens.name().map_err(fail)?)
                        }
                        "Transitive" => Axiom::TransitiveRole(tokens.name().map_err(fail)?),
                        "SubRoleOf" => {
                            let r = tokens.name().map_err(fail)?;
                            Axiom::SubRoleOf(r, tokens.name().map_err(fail)?)
                        }
                        other => return Err(fail(format!("unknown keyword {other:?}"))),
                    };
                    tokens.finish().map_err(fail)?;
                    t.assert_axiom(axiom).map_err(with_line)?;
                }
            }
        }
        tbox.ok_or(Error::Format {
            line: 0,
            message: "missing Ontology header".into(),
        })
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn snapshot_digest(&self) -> String {
        let hash = Sha256::digest(self.serialize().as_bytes());
        let mut out = String::with_capacity(64);
        for b in hash.iter() {
            let _ = write!(out, "{b:02x}");
        }
        out
    }
}

struct Restore<'a> {
    tbox: &'a mut TBox,
    saved: Option<Snapshot>,
}

impl Drop for Restore<'_> {
    fn drop(&mut self) {
        if let Some(s) = self.saved.take() {
            self.tbox.restore(s);
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Quoted(String),
}

struct Tokens {
    tokens: Vec<Token>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> core::result::Result<Self, String> {
        let mut tokens = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            match c {
                ' ' => {}
                '(' => tokens.push(Token::Open),
                ')' => tokens.push(Token::Close),
                '"' => {
                    let start = i + 1;
                    let mut end = None;
                    for (j, d) in chars.by_ref() {
                        if d == '"' {
                            end = Some(j);
                            break;
                        }
                    }
                    let end = end.ok_or_else(|| "unterminated quoted name".to_string())?;
                    tokens.push(Token::Quoted(text[start..end].to_string()));
                }
                _ => {
                    let mut end = text.len();
                    while let Some(&(j, d)) = chars.peek() {
                        if d == ' ' || d == '(' || d == ')' || d == '"' {
                            end = j;
                            break;
                        }
                        chars.next();
                    }
                    tokens.push(Token::Word(text[i..end].to_string()));
                }
            }
        }
        Ok(Tokens { tokens, pos: 0 })
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn name(&mut self) -> core::result::Result<String, String> {
        match self.next() {
            Some(Token::Word(w)) | Some(Token::Quoted(w)) => Ok(w.clone()),
            other => Err(format!("expected a name, found {other:?}")),
        }
    }

    fn concept(&mut self) -> core::result::Result<Concept, String> {
        match self.next() {
            Some(Token::Word(w)) if w == "Top" => Ok(Concept::Top),
            Some(Token::Word(w)) if w == "Bottom" => Ok(Concept::Bottom),
            Some(Token::Word(w)) | Some(Token::Quoted(w)) => Ok(Concept::Named(w.clone())),
            Some(Token::Open) => {
                let head = self.name()?;
                let c = match head.as_str() {
                    "and" => {
                        let mut members = Vec::new();
                        while self.tokens.get(self.pos) != Some(&Token::Close) {
                            if self.pos >= self.tokens.len() {
                                return Err("unclosed (and ...)".into());
                            }
                            members.push(self.concept()?);
                        }
                        if members.len() < 2 {
                            return Err("(and ...) needs at least two members".into());
                        }
                        let c = Concept::and(members.iter().cloned());
                        if c != Concept::And(members) {
                            return Err("(and ...) members must be distinct and flat".into());
                        }
                        c
                    }
                    "some" => {
                        let role = self.name()?;
                        Concept::Some(role, Box::new(self.concept()?))
                    }
                    other => return Err(format!("unknown constructor {other:?}")),
                };
                match self.next() {
                    Some(Token::Close) => Ok(c),
                    other => Err(format!("expected `)`, found {other:?}")),
                }
            }
            other => Err(format!("expected a concept, found {other:?}")),
        }
    }

    fn finish(&self) -> core::result::Result<(), String> {
        if self.pos < self.tokens.len() {
            Err(format!("trailing input {:?}", self.tokens[self.pos]))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn probe_fixture() -> TBox {
        let mut t = TBox::new("human");
        for c in ["HumanChromosome", "HumanAutosome", "HumanSexChromosome"] {
            t.declare(EntityKind::Class, c).unwrap();
        }
        t.assert_axiom(Axiom::DisjointWith(
            "HumanAutosome".into(),
            "HumanSexChromosome".into(),
        ))
        .unwrap();
        t
    }

    #[test]
    fn declare_is_idempotent() {
        let mut t = TBox::new("o");
        t.declare(EntityKind::Class, "HumanChromosomeBand").unwrap();
        t.declare(EntityKind::Class, "HumanChromosomeBand").unwrap();
        assert_eq!(t.classes().len(), 1);
        assert_eq!(t.serialize().matches("HumanChromosomeBand").count(), 1);
    }

    #[test]
    fn kind_clash() {
        let mut t = TBox::new("o");
        t.declare(EntityKind::Role, "derivedFrom").unwrap();
        assert!(matches!(
            t.declare(EntityKind::Class, "derivedFrom"),
            Err(Error::KindClash {
                existing: "role",
                ..
            })
        ));
    }

    #[test]
    fn reserved_names_are_rejected() {
        let mut t = TBox::new("o");
        for bad in ["", "Top", "Bottom", "@fresh1", "a b", "a\"b", "and"] {
            assert!(matches!(
                t.declare(EntityKind::Class, bad),
                Err(Error::ReservedName(_))
            ));
        }
        t.declare(EntityKind::Class, "_").unwrap();
    }

    #[test]
    fn assert_requires_declared_names() {
        let mut t = TBox::new("o");
        t.declare(EntityKind::Class, "A").unwrap();
        let ax = Axiom::SubClassOf(Concept::named("A"), Concept::some("r", Concept::named("A")));
        assert_eq!(
            t.assert_axiom(ax.clone()),
            Err(Error::UnknownEntity("r".into()))
        );
        t.declare(EntityKind::Role, "r").unwrap();
        assert_eq!(t.assert_axiom(ax.clone()), Ok(true));
        assert_eq!(t.assert_axiom(ax), Ok(false));
        assert_eq!(t.axioms().len(), 1);
        // a role name used as a class
        assert_eq!(
            t.assert_axiom(Axiom::SubClassOf(Concept::named("r"), Concept::Top)),
            Err(Error::UnknownEntity("r".into()))
        );
    }

    #[test]
    fn probe_axioms_both_stored() {
        let mut t = probe_fixture();
        t.declare(EntityKind::Class, "_").unwrap();
        for parent in ["HumanAutosome", "HumanSexChromosome"] {
            assert!(t
                .assert_axiom(Axiom::SubClassOf(
                    Concept::named("_"),
                    Concept::named(parent)
                ))
                .unwrap());
        }
        assert_eq!(t.axioms().len(), 3);
    }

    #[test]
    fn concept_and_normalizes_members() {
        let a = Concept::named("A");
        let b = Concept::named("B");
        assert_eq!(Concept::and([]), Concept::Top);
        assert_eq!(Concept::and([a.clone(), a.clone()]), a);
        assert_eq!(
            Concept::and([a.clone(), Concept::and([b.clone(), a.clone()])]),
            Concept::And(vec![a, b])
        );
    }

    #[test]
    fn probe_restores_content() {
        let mut t = probe_fixture();
        let before = t.snapshot_digest();
        let snapshot = t.clone();
        let gen = t.generation();
        let probe = Probe::new().class("_").axiom(Axiom::SubClassOf(
            Concept::named("_"),
            Concept::named("HumanAutosome"),
        ));
        let seen = t.with_probe(&probe, |p| p.has_class("_")).unwrap();
        assert!(seen);
        assert_eq!(t, snapshot);
        assert_ne!(t.generation(), gen);
        assert_eq!(t.snapshot_digest(), before);
    }

    #[test]
    fn failing_probe_additions_still_restore() {
        let mut t = probe_fixture();
        let before = t.snapshot_digest();
        let probe = Probe::new().class("_").axiom(Axiom::SubClassOf(
            Concept::named("_"),
            Concept::named("Missing"),
        ));
        let r = t.with_probe(&probe, |_| ());
        assert_eq!(r, Err(Error::UnknownEntity("Missing".into())));
        assert!(!t.has_class("_"));
        assert_eq!(t.snapshot_digest(), before);
    }

    #[test]
    fn digest_ignores_assertion_order() {
        let axioms = [
            Axiom::SubClassOf(Concept::named("A"), Concept::named("B")),
            Axiom::DisjointWith("A".into(), "C".into()),
            Axiom::SubClassOf(Concept::named("C"), Concept::some("r", Concept::named("A"))),
        ];
        let build = |order: &[usize]| {
            let mut t = TBox::new("o");
            for c in ["C", "B", "A"] {
                t.declare(EntityKind::Class, c).unwrap();
            }
            t.declare(EntityKind::Role, "r").unwrap();
            for &i in order {
                t.assert_axiom(axioms[i].clone()).unwrap();
            }
            t
        };
        let t1 = build(&[0, 1, 2]);
        let mut t2 = build(&[2, 0, 1]);
        assert_eq!(t1.snapshot_digest(), t2.snapshot_digest());
        t2.assert_axiom(Axiom::TransitiveRole("r".into())).unwrap();
        assert_ne!(t1.snapshot_digest(), t2.snapshot_digest());
    }

    #[test]
    fn empty_tbox_serializes_to_header() {
        assert_eq!(TBox::new("human").serialize(), "Ontology: human\n");
        assert_eq!(
            TBox::deserialize("Ontology: human\n").unwrap(),
            TBox::new("human")
        );
    }

    #[test]
    fn serialization_round_trip_with_awkward_names() {
        let mut t = TBox::new("karyotypes");
        for c in [
            "k46_XY,t(1;3)(p22;q13.1)",
            "Translocation",
            "HumanChromosome3Bandq13.1",
        ] {
            t.declare(EntityKind::Class, c).unwrap();
        }
        t.declare(EntityKind::Role, "hasEvent").unwrap();
        t.declare(EntityKind::Role, "hasBreakPoint").unwrap();
        t.assert_axiom(Axiom::SubClassOf(
            Concept::named("k46_XY,t(1;3)(p22;q13.1)"),
            Concept::some(
                "hasEvent",
                Concept::and([
                    Concept::named("Translocation"),
                    Concept::some("hasBreakPoint", Concept::named("HumanChromosome3Bandq13.1")),
                ]),
            ),
        ))
        .unwrap();
        t.assert_axiom(Axiom::SubRoleOf("hasBreakPoint".into(), "hasEvent".into()))
            .unwrap();
        let text = t.serialize();
        assert!(text.contains("\"k46_XY,t(1;3)(p22;q13.1)\""));
        let back = TBox::deserialize(&text).unwrap();
        assert_eq!(back.serialize(), text);
        assert_eq!(back.snapshot_digest(), t.snapshot_digest());
    }

    #[test]
    fn deserialize_reports_line_numbers() {
        let cases = [
            ("Class: A\n", 1),
            ("Ontology: o\nClass: A\nSubClassOf: A B\n", 3),
            ("Ontology: o\nClass: A\nSubClassOf: A (and A)\n", 3),
            ("Ontology: o\nClass: A\nnonsense\n", 3),
            ("Ontology: o\nClass: A\nSubClassOf: A A A\n", 3),
            ("Ontology: o\nRole: r\nClass: r\n", 3),
            ("Ontology: o\nClass: \"A\n", 2),
        ];
        for (text, line) in cases {
            match TBox::deserialize(text) {
                Err(Error::Format { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(
            TBox::deserialize(""),
            Err(Error::Format { line: 0, .. })
        ));
    }
}
