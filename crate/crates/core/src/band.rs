//! Chromosome bands: declarative band trees and their expansion into classes.
//!
//! A band tree mirrors the literal nesting used to write down an ideogram:
//! a bare label is a leaf band, a group is a parent label followed by its
//! sub-bands. `["p10", ["p11", "p11.1", "p11.2"]]` describes four bands.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::ontology::{Axiom, Concept, EntityKind, TBox};

pub const BAND_ROOT: &str = "HumanChromosomeBand";
pub const IS_BAND_OF: &str = "isBandOf";

/// A human chromosome: autosomes 1 to 22 and the two sex chromosomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chromosome {
    Autosome(u8),
    X,
    Y,
}

impl Chromosome {
    pub fn autosome(n: u8) -> Option<Self> {
        (1..=22).contains(&n).then_some(Chromosome::Autosome(n))
    }

    pub fn is_sex(self) -> bool {
        matches!(self, Chromosome::X | Chromosome::Y)
    }

    /// All 24 chromosomes in conventional order.
    pub fn all() -> impl Iterator<Item = Chromosome> {
        (1..=22)
            .map(Chromosome::Autosome)
            .chain([Chromosome::X, Chromosome::Y])
    }

    /// `HumanChromosome<C>`
    pub fn class_name(self) -> String {
        format!("HumanChromosome{self}")
    }

    /// `HumanChromosome<C>Band`, the parent of both arm band classes.
    pub fn band_class_name(self) -> String {
        format!("HumanChromosome{self}Band")
    }

    pub fn arm_class_name(self, arm: Arm) -> String {
        format!("HumanChromosome{self}{arm}Band")
    }

    /// `HumanChromosome<C>Band<label>`, no separators.
    pub fn band_name(self, label: &str) -> String {
        format!("HumanChromosome{self}Band{label}")
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chromosome::Autosome(n) => write!(f, "{n}"),
            Chromosome::X => f.write_str("X"),
            Chromosome::Y => f.write_str("Y"),
        }
    }
}

impl FromStr for Chromosome {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "X" => Ok(Chromosome::X),
            "Y" => Ok(Chromosome::Y),
            _ if !s.is_empty()
                && s.len() <= 2
                && !s.starts_with('0')
                && s.bytes().all(|b| b.is_ascii_digit()) =>
            {
                s.parse::<u8>()
                    .ok()
                    .and_then(Chromosome::autosome)
                    .ok_or(())
            }
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arm {
    P,
    Q,
}

impl Arm {
    pub fn symbol(self) -> char {
        match self {
            Arm::P => 'p',
            Arm::Q => 'q',
        }
    }

    pub fn from_symbol(c: char) -> Option<Arm> {
        match c {
            'p' => Some(Arm::P),
            'q' => Some(Arm::Q),
            _ => None,
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BandEntry {
    Label(String),
    /// A parent band followed by its sub-bands.
    Group(String, Vec<BandEntry>),
}

impl BandEntry {
    pub fn label(&self) -> &str {
        match self {
            BandEntry::Label(l) | BandEntry::Group(l, _) => l,
        }
    }

    fn count(&self) -> usize {
        match self {
            BandEntry::Label(_) => 1,
            BandEntry::Group(_, children) => {
                1 + children.iter().map(BandEntry::count).sum::<usize>()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandTree {
    pub chromosome: Chromosome,
    pub p: Vec<BandEntry>,
    pub q: Vec<BandEntry>,
}

impl BandTree {
    pub fn new(chromosome: Chromosome) -> Self {
        BandTree {
            chromosome,
            p: Vec::new(),
            q: Vec::new(),
        }
    }

    pub fn arm(&self, arm: Arm) -> &[BandEntry] {
        match arm {
            Arm::P => &self.p,
            Arm::Q => &self.q,
        }
    }

    pub fn label_count(&self) -> usize {
        self.p.iter().chain(&self.q).map(BandEntry::count).sum()
    }
}

/// A subject-role-target link, e.g. a band `isBandOf` its chromosome.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoleLink {
    pub subject: String,
    pub role: String,
    pub target: String,
}

/// Classes and axioms generated from one or more band trees.
///
/// `declarations` holds only band classes; the fixed classes they hang from
/// (chromosome, chromosome band and arm band classes plus
/// [`BAND_ROOT`]) are listed in `roots`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassBatch {
    pub roots: Vec<String>,
    pub declarations: Vec<String>,
    pub subclass_axioms: Vec<(String, String)>,
    pub role_axioms: Vec<RoleLink>,
}

impl ClassBatch {
    pub fn merge(&mut self, other: ClassBatch) {
        for root in other.roots {
            if !self.roots.contains(&root) {
                self.roots.push(root);
            }
        }
        self.declarations.extend(other.declarations);
        self.subclass_axioms.extend(other.subclass_axioms);
        self.role_axioms.extend(other.role_axioms);
    }

    /// Declares every class and role of the batch and asserts its axioms.
    pub fn assert_into(&self, tbox: &mut TBox) -> Result<()> {
        for name in self.roots.iter().chain(&self.declarations) {
            tbox.declare(EntityKind::Class, name)?;
        }
        for link in &self.role_axioms {
            tbox.declare(EntityKind::Role, &link.role)?;
            tbox.declare(EntityKind::Class, &link.target)?;
        }
        for (child, parent) in &self.subclass_axioms {
            tbox.assert_axiom(Axiom::SubClassOf(
                Concept::named(child),
                Concept::named(parent),
            ))?;
        }
        for link in &self.role_axioms {
            tbox.assert_axiom(Axiom::SubClassOf(
                Concept::named(&link.subject),
                Concept::some(&link.role, Concept::named(&link.target)),
            ))?;
        }
        Ok(())
    }
}

/// Expands one chromosome's band tree into band classes.
pub fn expand_band_tree(tree: &BandTree) -> Result<ClassBatch> {
    let c = tree.chromosome;
    let chromosome_band = c.band_class_name();
    let mut batch = ClassBatch {
        roots: alloc::vec![
            BAND_ROOT.to_string(),
            c.class_name(),
            chromosome_band.clone()
        ],
        ..ClassBatch::default()
    };
    batch
        .subclass_axioms
        .push((chromosome_band.clone(), BAND_ROOT.to_string()));

    let mut seen = BTreeSet::new();
    for arm in [Arm::P, Arm::Q] {
        let arm_class = c.arm_class_name(arm);
        batch.roots.push(arm_class.clone());
        batch
            .subclass_axioms
            .push((arm_class.clone(), chromosome_band.clone()));
        let mut cx = Expansion {
            chromosome: c,
            arm,
            seen: &mut seen,
            batch: &mut batch,
        };
        for entry in tree.arm(arm) {
            cx.entry(entry, None, &arm_class)?;
        }
    }
    Ok(batch)
}

/// Expands a whole band table into a single batch.
pub fn expand_all<'a>(trees: impl IntoIterator<Item = &'a BandTree>) -> Result<ClassBatch> {
    let mut batch = ClassBatch::default();
    for tree in trees {
        batch.merge(expand_band_tree(tree)?);
    }
    Ok(batch)
}

struct Expansion<'a> {
    chromosome: Chromosome,
    arm: Arm,
    seen: &'a mut BTreeSet<String>,
    batch: &'a mut ClassBatch,
}

impl Expansion<'_> {
    fn entry(&mut self, entry: &BandEntry, parent: Option<&str>, parent_class: &str) -> Result<()> {
        let label = entry.label();
        if !label.starts_with(self.arm.symbol()) {
            return Err(Error::ArmMismatch {
                chromosome: self.chromosome.to_string(),
                arm: self.arm.symbol(),
                label: label.to_string(),
            });
        }
        if let Some(parent) = parent {
            if !is_sub_band(parent, label) {
                return Err(Error::SubBandMismatch {
                    chromosome: self.chromosome.to_string(),
                    parent: parent.to_string(),
                    label: label.to_string(),
                });
            }
        }
        if !self.seen.insert(label.to_string()) {
            return Err(Error::DuplicateBand {
                chromosome: self.chromosome.to_string(),
                label: label.to_string(),
            });
        }

        let class = self.chromosome.band_name(label);
        self.batch.declarations.push(class.clone());
        self.batch
            .subclass_axioms
            .push((class.clone(), parent_class.to_string()));
        self.batch.role_axioms.push(RoleLink {
            subject: class.clone(),
            role: IS_BAND_OF.to_string(),
            target: self.chromosome.class_name(),
        });

        if let BandEntry::Group(_, children) = entry {
            for child in children {
                self.entry(child, Some(label), &class)?;
            }
        }
        Ok(())
    }
}

/// `p11.1` under `p11`, `p36.11` under `p36.1`.
fn is_sub_band(parent: &str, child: &str) -> bool {
    let Some(rest) = child.strip_prefix(parent) else {
        return false;
    };
    let digits = if parent.contains('.') {
        rest
    } else {
        match rest.strip_prefix('.') {
            Some(d) => d,
            None => return false,
        }
    };
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn arm_after_band(label: &str) -> Option<char> {
    let idx = label.find("Band")?;
    label[idx + 4..].chars().next()
}

/// True when the text after the first `Band` starts with `p`.
pub fn str_pband(label: &str) -> bool {
    arm_after_band(label) == Some('p')
}

/// True when the text after the first `Band` starts with `q`.
pub fn str_qband(label: &str) -> bool {
    arm_after_band(label) == Some('q')
}

/// Structural band check over asserted subclass axioms only, no reasoning.
pub fn is_band(tbox: &TBox, class: &str) -> Result<bool> {
    if !tbox.has_class(class) {
        return Err(Error::UnknownEntity(class.to_string()));
    }
    Ok(class == BAND_ROOT || tbox.told_superclasses(class).contains(BAND_ROOT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn label(s: &str) -> BandEntry {
        BandEntry::Label(s.to_string())
    }

    fn group(parent: &str, children: &[&str]) -> BandEntry {
        BandEntry::Group(
            parent.to_string(),
            children.iter().map(|c| label(c)).collect(),
        )
    }

    fn fragment() -> BandTree {
        BandTree {
            chromosome: Chromosome::Autosome(1),
            p: vec![label("p10"), group("p11", &["p11.1", "p11.2"])],
            q: vec![],
        }
    }

    fn has_sub(batch: &ClassBatch, child: &str, parent: &str) -> bool {
        batch
            .subclass_axioms
            .iter()
            .any(|(c, p)| c == child && p == parent)
    }

    #[test]
    fn fragment_expands_to_four_bands() {
        let batch = expand_band_tree(&fragment()).unwrap();
        assert_eq!(batch.declarations.len(), 4);
        assert!(has_sub(
            &batch,
            "HumanChromosome1Bandp11.1",
            "HumanChromosome1Bandp11"
        ));
        assert!(has_sub(
            &batch,
            "HumanChromosome1Bandp11.2",
            "HumanChromosome1Bandp11"
        ));
        assert!(has_sub(
            &batch,
            "HumanChromosome1Bandp10",
            "HumanChromosome1pBand"
        ));
        assert!(has_sub(
            &batch,
            "HumanChromosome1pBand",
            "HumanChromosome1Band"
        ));
        assert!(has_sub(&batch, "HumanChromosome1Band", BAND_ROOT));
        assert_eq!(batch.role_axioms.len(), 4);
        assert!(batch
            .role_axioms
            .iter()
            .all(|l| l.role == IS_BAND_OF && l.target == "HumanChromosome1"));
    }

    #[test]
    fn fragment_band_reaches_chromosome_band_structurally() {
        let mut tbox = TBox::new("test");
        expand_band_tree(&fragment())
            .unwrap()
            .assert_into(&mut tbox)
            .unwrap();
        assert!(tbox
            .told_superclasses("HumanChromosome1Bandp10")
            .contains("HumanChromosome1Band"));
    }

    #[test]
    fn empty_arms_give_only_roots() {
        let batch = expand_band_tree(&BandTree::new(Chromosome::X)).unwrap();
        assert!(batch.declarations.is_empty());
        assert_eq!(
            batch.roots,
            vec![
                BAND_ROOT,
                "HumanChromosomeX",
                "HumanChromosomeXBand",
                "HumanChromosomeXpBand",
                "HumanChromosomeXqBand"
            ]
        );
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let mut tree = fragment();
        tree.p.push(label("p10"));
        assert!(matches!(
            expand_band_tree(&tree),
            Err(Error::DuplicateBand { label, .. }) if label == "p10"
        ));
    }

    #[test]
    fn arm_prefix_is_checked() {
        let mut tree = fragment();
        tree.q.push(label("p12"));
        assert!(matches!(
            expand_band_tree(&tree),
            Err(Error::ArmMismatch { arm: 'q', .. })
        ));
    }

    #[test]
    fn sub_band_prefix_is_checked() {
        let mut tree = fragment();
        tree.p.push(group("p12", &["p13.1"]));
        assert!(matches!(
            expand_band_tree(&tree),
            Err(Error::SubBandMismatch { .. })
        ));
        assert!(is_sub_band("p36", "p36.1"));
        assert!(is_sub_band("p36.1", "p36.11"));
        assert!(!is_sub_band("p1", "p11"));
        assert!(!is_sub_band("p11", "p11."));
    }

    #[test]
    fn arm_predicates() {
        assert!(str_pband("HumanChromosome1Bandp10"));
        assert!(!str_pband("HumanChromosome1Bandq10"));
        assert!(str_qband("HumanChromosome1Bandq10"));
        assert!(!str_pband("HumanChromosome1Band"));
        assert!(!str_qband("HumanChromosome1Band"));
        assert!(!str_pband("p10"));
        // a bare "p" search would match "HumanChromosomepBandq..." style text
        assert!(!str_pband("HumanChromosome1pBandq11"));
    }

    #[test]
    fn band_predicate() {
        let mut tbox = TBox::new("test");
        tbox.declare(EntityKind::Class, "HumanChromosome1").unwrap();
        expand_band_tree(&fragment())
            .unwrap()
            .assert_into(&mut tbox)
            .unwrap();
        assert!(is_band(&tbox, "HumanChromosome1Bandp10").unwrap());
        assert!(is_band(&tbox, "HumanChromosome1Bandp11.2").unwrap());
        assert!(is_band(&tbox, BAND_ROOT).unwrap());
        assert!(!is_band(&tbox, "HumanChromosome1").unwrap());
        assert!(matches!(
            is_band(&tbox, "HumanChromosome2Bandp10"),
            Err(Error::UnknownEntity(_))
        ));
    }

    #[test]
    fn chromosome_names_round_trip() {
        for c in Chromosome::all() {
            assert_eq!(c.to_string().parse::<Chromosome>(), Ok(c));
        }
        for bad in ["0", "23", "01", "", "x", "XY", "100"] {
            assert!(bad.parse::<Chromosome>().is_err(), "{bad}");
        }
    }
}
