//! The karyotype ontology proper: chromosomes, base karyotypes, facet
//! classes, and the `derivedFrom` pattern used to axiomatize a parsed
//! karyotype.
//!
//! A karyotype is described by what it was derived from. `45,X` becomes
//!
//! ```text
//! k45_X ⊑ ∃derivedFrom.(∃derivedFrom.k46_XN ⊓ ∃hasEvent.(Loss ⊓ ∃hasBreakPoint.HumanSexChromosome))
//! ```
//!
//! and since `derivedFrom` is transitive it lands below
//! `DiploidKaryotype ≡ ∃derivedFrom.k46_XN`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::band::{Chromosome, ClassBatch};
use crate::error::{Error, Result};
use crate::iscn::{render, Band, Event, Karyotype, SexSymbol};
use crate::ontology::{Axiom, Concept, EntityKind, TBox};

pub const DERIVED_FROM: &str = "derivedFrom";
pub const HAS_EVENT: &str = "hasEvent";
pub const HAS_BREAK_POINT: &str = "hasBreakPoint";

pub const HUMAN_CHROMOSOME: &str = "HumanChromosome";
pub const HUMAN_AUTOSOME: &str = "HumanAutosome";
pub const HUMAN_SEX_CHROMOSOME: &str = "HumanSexChromosome";
pub const KARYOTYPE: &str = "Karyotype";
pub const EVENT: &str = "Event";

pub const EVENT_CLASSES: [&str; 6] = [
    "Deletion",
    "Translocation",
    "Inversion",
    "Duplication",
    "Gain",
    "Loss",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseKaryotype {
    K23N,
    K46XN,
    K46XX,
    K46XY,
    K69XNN,
    K92XNNN,
}

impl BaseKaryotype {
    pub const ALL: [BaseKaryotype; 6] = [
        BaseKaryotype::K23N,
        BaseKaryotype::K46XN,
        BaseKaryotype::K46XX,
        BaseKaryotype::K46XY,
        BaseKaryotype::K69XNN,
        BaseKaryotype::K92XNNN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseKaryotype::K23N => "k23_N",
            BaseKaryotype::K46XN => "k46_XN",
            BaseKaryotype::K46XX => "k46_XX",
            BaseKaryotype::K46XY => "k46_XY",
            BaseKaryotype::K69XNN => "k69_XNN",
            BaseKaryotype::K92XNNN => "k92_XNNN",
        }
    }

    pub fn ploidy(self) -> u32 {
        match self {
            BaseKaryotype::K23N => 1,
            BaseKaryotype::K46XN | BaseKaryotype::K46XX | BaseKaryotype::K46XY => 2,
            BaseKaryotype::K69XNN => 3,
            BaseKaryotype::K92XNNN => 4,
        }
    }

    pub fn sex_complement(self) -> Vec<SexSymbol> {
        use SexSymbol::*;
        match self {
            BaseKaryotype::K23N => vec![N],
            BaseKaryotype::K46XN => vec![X, N],
            BaseKaryotype::K46XX => vec![X, X],
            BaseKaryotype::K46XY => vec![X, Y],
            BaseKaryotype::K69XNN => vec![X, N, N],
            BaseKaryotype::K92XNNN => vec![X, N, N, N],
        }
    }

    /// The base it is itself a subclass of, if any.
    pub fn parent(self) -> Option<BaseKaryotype> {
        match self {
            BaseKaryotype::K46XX | BaseKaryotype::K46XY => Some(BaseKaryotype::K46XN),
            _ => None,
        }
    }
}

impl fmt::Display for BaseKaryotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A defined class used as a facet column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetClass {
    pub name: &'static str,
    pub definition: Concept,
}

pub fn facet_classes() -> Vec<FacetClass> {
    [
        ("MaleKaryotype", BaseKaryotype::K46XY),
        ("FemaleKaryotype", BaseKaryotype::K46XX),
        ("HaploidKaryotype", BaseKaryotype::K23N),
        ("DiploidKaryotype", BaseKaryotype::K46XN),
        ("TriploidKaryotype", BaseKaryotype::K69XNN),
        ("TetraploidKaryotype", BaseKaryotype::K92XNNN),
    ]
    .into_iter()
    .map(|(name, base)| FacetClass {
        name,
        definition: Concept::some(DERIVED_FROM, Concept::named(base.name())),
    })
    .collect()
}

/// Chromosomes, bands, events, base karyotypes and facet classes.
pub fn base_ontology(bands: &ClassBatch) -> Result<TBox> {
    let mut t = TBox::new("karyotype");
    let sub = |t: &mut TBox, a: &str, b: &str| {
        t.assert_axiom(Axiom::SubClassOf(Concept::named(a), Concept::named(b)))
    };

    for c in [HUMAN_CHROMOSOME, HUMAN_AUTOSOME, HUMAN_SEX_CHROMOSOME] {
        t.declare(EntityKind::Class, c)?;
    }
    sub(&mut t, HUMAN_AUTOSOME, HUMAN_CHROMOSOME)?;
    sub(&mut t, HUMAN_SEX_CHROMOSOME, HUMAN_CHROMOSOME)?;
    t.assert_axiom(Axiom::DisjointWith(
        HUMAN_AUTOSOME.to_string(),
        HUMAN_SEX_CHROMOSOME.to_string(),
    ))?;
    for c in Chromosome::all() {
        let name = c.class_name();
        t.declare(EntityKind::Class, &name)?;
        let parent = if c.is_sex() {
            HUMAN_SEX_CHROMOSOME
        } else {
            HUMAN_AUTOSOME
        };
        sub(&mut t, &name, parent)?;
    }

    bands.assert_into(&mut t)?;

    for r in [DERIVED_FROM, HAS_EVENT, HAS_BREAK_POINT] {
        t.declare(EntityKind::Role, r)?;
    }
    t.assert_axiom(Axiom::TransitiveRole(DERIVED_FROM.to_string()))?;

    t.declare(EntityKind::Class, EVENT)?;
    for e in EVENT_CLASSES {
        t.declare(EntityKind::Class, e)?;
        sub(&mut t, e, EVENT)?;
    }

    t.declare(EntityKind::Class, KARYOTYPE)?;
    for base in BaseKaryotype::ALL {
        t.declare(EntityKind::Class, base.name())?;
        sub(&mut t, base.name(), KARYOTYPE)?;
    }
    for base in BaseKaryotype::ALL {
        if let Some(parent) = base.parent() {
            sub(&mut t, base.name(), parent.name())?;
        }
        // no reflexive roles in EL+, so each base derives from itself
        t.assert_axiom(Axiom::SubClassOf(
            Concept::named(base.name()),
            Concept::some(DERIVED_FROM, Concept::named(base.name())),
        ))?;
    }

    for facet in facet_classes() {
        t.declare(EntityKind::Class, facet.name)?;
        t.assert_axiom(Axiom::EquivalentTo(
            facet.name.to_string(),
            facet.definition,
        ))?;
    }
    Ok(t)
}

/// Ploidy of a chromosome count: `total / 23` rounded half up.
pub fn ploidy(total: u32) -> u32 {
    ((u64::from(total) * 2 + 23) / 46) as u32
}

/// The base karyotype `k` is most plausibly derived from.
pub fn derivation_base(k: &Karyotype) -> Result<BaseKaryotype> {
    let ploidy = ploidy(k.total);
    if !(1..=4).contains(&ploidy) {
        return Err(Error::UnsupportedPloidy(ploidy));
    }
    let mut complement = k.sex.clone();
    for e in &k.events {
        match e {
            Event::Loss(Chromosome::X) => complement.push(SexSymbol::X),
            Event::Loss(Chromosome::Y) => complement.push(SexSymbol::Y),
            Event::Gain(c @ (Chromosome::X | Chromosome::Y)) => {
                let s = if *c == Chromosome::X {
                    SexSymbol::X
                } else {
                    SexSymbol::Y
                };
                if let Some(i) = complement.iter().position(|x| *x == s) {
                    complement.remove(i);
                }
            }
            _ => {}
        }
    }
    complement.sort();
    complement.resize(ploidy as usize, SexSymbol::N);

    use SexSymbol::*;
    Ok(match (ploidy, complement.as_slice()) {
        (1, _) => BaseKaryotype::K23N,
        (2, [X, X]) => BaseKaryotype::K46XX,
        (2, [X, Y]) => BaseKaryotype::K46XY,
        (2, _) => BaseKaryotype::K46XN,
        (3, _) => BaseKaryotype::K69XNN,
        _ => BaseKaryotype::K92XNNN,
    })
}

fn band_class(tbox: &TBox, chromosome: Chromosome, band: &Band) -> Result<Concept> {
    let name = chromosome.band_name(&band.label());
    if !tbox.has_class(&name) {
        return Err(Error::UnknownEntity(name));
    }
    Ok(Concept::Named(name))
}

fn event_of(kind: &str, breakpoints: Vec<Concept>) -> Concept {
    let members = core::iter::once(Concept::named(kind)).chain(
        breakpoints
            .into_iter()
            .map(|b| Concept::some(HAS_BREAK_POINT, b)),
    );
    Concept::some(HAS_EVENT, Concept::and(members))
}

/// `∃hasEvent.(<Kind> ⊓ ∃hasBreakPoint.<site> ...)` for one event. Band
/// classes must already exist in `tbox`.
pub fn event_concept(e: &Event, tbox: &TBox) -> Result<Concept> {
    let chromosome = |c: Chromosome| -> Result<Concept> {
        let name = c.class_name();
        if tbox.has_class(&name) {
            Ok(Concept::Named(name))
        } else {
            Err(Error::UnknownEntity(name))
        }
    };
    Ok(match e {
        Event::Gain(c) => event_of("Gain", vec![chromosome(*c)?]),
        Event::Loss(c) => event_of("Loss", vec![chromosome(*c)?]),
        Event::Translocation(a, b) => event_of(
            "Translocation",
            vec![
                band_class(tbox, a.chromosome, &a.band)?,
                band_class(tbox, b.chromosome, &b.band)?,
            ],
        ),
        Event::Deletion {
            chromosome,
            band,
            end,
        } => {
            let mut sites = vec![band_class(tbox, *chromosome, band)?];
            if let Some(end) = end {
                sites.push(band_class(tbox, *chromosome, end)?);
            }
            event_of("Deletion", sites)
        }
        Event::Inversion {
            chromosome,
            from,
            to,
        } => event_of(
            "Inversion",
            vec![
                band_class(tbox, *chromosome, from)?,
                band_class(tbox, *chromosome, to)?,
            ],
        ),
        Event::Duplication {
            chromosome,
            from,
            to,
        } => event_of(
            "Duplication",
            vec![
                band_class(tbox, *chromosome, from)?,
                band_class(tbox, *chromosome, to)?,
            ],
        ),
    })
}

/// `k` followed by the canonical string with commas turned into
/// underscores: `45,X` becomes `k45_X`.
pub fn karyotype_class_name(k: &Karyotype) -> String {
    format!("k{}", render(k).replace(',', "_"))
}

/// Declares the karyotype's class and its derivation axiom. Returns the class
/// name.
pub fn axiomatize(k: &Karyotype, tbox: &mut TBox) -> Result<String> {
    let base = derivation_base(k)?;
    let mut parts = vec![Concept::some(DERIVED_FROM, Concept::named(base.name()))];
    for e in &k.events {
        parts.push(event_concept(e, tbox)?);
    }
    let expected = 23 * base.ploidy();
    if k.events.is_empty() && k.total != expected {
        let kind = if k.total < expected { "Loss" } else { "Gain" };
        parts.push(event_of(kind, vec![Concept::named(HUMAN_SEX_CHROMOSOME)]));
    }

    let name = karyotype_class_name(k);
    tbox.declare(EntityKind::Class, &name)?;
    tbox.assert_axiom(Axiom::SubClassOf(
        Concept::named(&name),
        Concept::named(KARYOTYPE),
    ))?;
    tbox.assert_axiom(Axiom::SubClassOf(
        Concept::named(&name),
        Concept::some(DERIVED_FROM, Concept::and(parts)),
    ))?;
    Ok(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::{expand_band_tree, BandEntry, BandTree};
    use crate::iscn::parse;
    use crate::reasoner::classify;

    fn fragment_batch() -> ClassBatch {
        let tree = BandTree {
            chromosome: Chromosome::Autosome(1),
            p: vec![
                BandEntry::Label("p10".into()),
                BandEntry::Group(
                    "p11".into(),
                    vec![
                        BandEntry::Label("p11.1".into()),
                        BandEntry::Label("p11.2".into()),
                    ],
                ),
            ],
            q: vec![],
        };
        expand_band_tree(&tree).unwrap()
    }

    fn base(s: &str) -> BaseKaryotype {
        derivation_base(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn derivation_bases() {
        assert_eq!(base("45,X"), BaseKaryotype::K46XN);
        assert_eq!(base("45,X,-Y"), BaseKaryotype::K46XY);
        assert_eq!(base("45,X,-X"), BaseKaryotype::K46XX);
        assert_eq!(base("46,XX"), BaseKaryotype::K46XX);
        assert_eq!(base("45,XX,-22"), BaseKaryotype::K46XX);
        assert_eq!(base("46,XN"), BaseKaryotype::K46XN);
        assert_eq!(base("47,XY,+21"), BaseKaryotype::K46XY);
        assert_eq!(base("47,XXY,+Y"), BaseKaryotype::K46XX);
        assert_eq!(base("23,X"), BaseKaryotype::K23N);
        assert_eq!(base("69,XXY"), BaseKaryotype::K69XNN);
        assert_eq!(base("92,XXYY"), BaseKaryotype::K92XNNN);
        assert_eq!(
            derivation_base(&parse("11,X").unwrap()),
            Err(Error::UnsupportedPloidy(0))
        );
        assert_eq!(
            derivation_base(&parse("104,XX").unwrap()),
            Err(Error::UnsupportedPloidy(5))
        );
    }

    #[test]
    fn ploidy_rounds_half_up() {
        assert_eq!(ploidy(45), 2);
        assert_eq!(ploidy(46), 2);
        assert_eq!(ploidy(34), 1);
        assert_eq!(ploidy(35), 2);
        assert_eq!(ploidy(12), 1);
        assert_eq!(ploidy(11), 0);
        assert_eq!(ploidy(u32::MAX), 186_737_708);
    }

    #[test]
    fn base_ontology_is_coherent_and_consistent() {
        let t = base_ontology(&fragment_batch()).unwrap();
        let map = classify(&t);
        assert!(map.coherent());
        assert!(map.consistent());
        assert!(map.is_subclass("k46_XY", "MaleKaryotype").unwrap());
        assert!(map.is_subclass("k46_XY", "DiploidKaryotype").unwrap());
        assert!(!map.is_subclass("k46_XN", "MaleKaryotype").unwrap());
        assert!(map
            .is_subclass("HumanChromosome1Bandp11.1", "HumanChromosomeBand")
            .unwrap());
    }

    #[test]
    fn loss_event_concept_mirrors_sex_chromosome_pattern() {
        let t = base_ontology(&fragment_batch()).unwrap();
        let c = event_concept(&Event::Gain(Chromosome::Autosome(21)), &t).unwrap();
        assert_eq!(
            c,
            Concept::some(
                HAS_EVENT,
                Concept::and([
                    Concept::named("Gain"),
                    Concept::some(HAS_BREAK_POINT, Concept::named("HumanChromosome21")),
                ])
            )
        );
    }

    #[test]
    fn band_events_need_known_bands() {
        let t = base_ontology(&fragment_batch()).unwrap();
        let k = parse("46,XY,t(1;3)(p22;q13.1)").unwrap();
        assert_eq!(
            event_concept(&k.events[0], &t),
            Err(Error::UnknownEntity("HumanChromosome1Bandp22".into()))
        );
        let del = parse("46,XY,del(1)(p11.1p11.2)").unwrap();
        let c = event_concept(&del.events[0], &t).unwrap();
        assert_eq!(
            c,
            Concept::some(
                HAS_EVENT,
                Concept::and([
                    Concept::named("Deletion"),
                    Concept::some(HAS_BREAK_POINT, Concept::named("HumanChromosome1Bandp11.1")),
                    Concept::some(HAS_BREAK_POINT, Concept::named("HumanChromosome1Bandp11.2")),
                ])
            )
        );
    }

    #[test]
    fn k45_x_matches_hand_written_pattern() {
        let mut t = base_ontology(&fragment_batch()).unwrap();
        let name = axiomatize(&parse("45,X").unwrap(), &mut t).unwrap();
        assert_eq!(name, "k45_X");
        let expected = Axiom::SubClassOf(
            Concept::named("k45_X"),
            Concept::some(
                DERIVED_FROM,
                Concept::and([
                    Concept::some(DERIVED_FROM, Concept::named("k46_XN")),
                    Concept::some(
                        HAS_EVENT,
                        Concept::and([
                            Concept::named("Loss"),
                            Concept::some(HAS_BREAK_POINT, Concept::named(HUMAN_SEX_CHROMOSOME)),
                        ]),
                    ),
                ]),
            ),
        );
        assert!(t.axioms().contains(&expected));

        let map = classify(&t);
        assert!(map.coherent());
        assert!(map.is_subclass("k45_X", "DiploidKaryotype").unwrap());
        assert!(!map.is_subclass("k45_X", "MaleKaryotype").unwrap());
        assert!(!map.is_subclass("k45_X", "FemaleKaryotype").unwrap());
        assert!(!map.is_subclass("k45_X", "HaploidKaryotype").unwrap());
    }

    #[test]
    fn k46_xn_is_only_diploid() {
        let mut t = base_ontology(&fragment_batch()).unwrap();
        let name = axiomatize(&parse("46,XN").unwrap(), &mut t).unwrap();
        assert_eq!(name, "k46_XN");
        let map = classify(&t);
        let facets: Vec<_> = [
            "FemaleKaryotype",
            "MaleKaryotype",
            "HaploidKaryotype",
            "DiploidKaryotype",
        ]
        .into_iter()
        .filter(|f| map.is_subclass(&name, f).unwrap())
        .collect();
        assert_eq!(facets, vec!["DiploidKaryotype"]);
    }

    #[test]
    fn gain_without_events_is_encoded() {
        let mut t = base_ontology(&fragment_batch()).unwrap();
        axiomatize(&parse("47,XXY").unwrap(), &mut t).unwrap();
        let gain = Concept::some(
            HAS_EVENT,
            Concept::and([
                Concept::named("Gain"),
                Concept::some(HAS_BREAK_POINT, Concept::named(HUMAN_SEX_CHROMOSOME)),
            ]),
        );
        assert!(t.axioms().iter().any(|a| matches!(
            a,
            Axiom::SubClassOf(Concept::Named(n), Concept::Some(_, inner))
                if n == "k47_XXY" && matches!(&**inner, Concept::And(m) if m.contains(&gain))
        )));
    }
}
