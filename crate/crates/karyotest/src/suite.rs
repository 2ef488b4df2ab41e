//! The suite run by `karyotest test`.

use karyotype_core::axioms::{
    self, axiomatize, base_ontology, HUMAN_AUTOSOME, HUMAN_SEX_CHROMOSOME, KARYOTYPE,
};
use karyotype_core::band::{self, Arm, BandEntry, BandTree, Chromosome};
use karyotype_core::iscn;
use karyotype_core::ontology::{Axiom, Concept, Probe, TBox};

use crate::facets::FacetTable;
use crate::harness::{assertions_from, is_unsatisfiable, TestCase, Tier};
use crate::Result;

/// Base ontology over `trees` with every karyotype of `table` axiomatized.
pub fn build_ontology(trees: &[BandTree], table: &FacetTable) -> Result<TBox> {
    let mut t = base_ontology(&band::expand_all(trees)?)?;
    for row in &table.rows {
        axiomatize(&row.karyotype, &mut t)?;
    }
    Ok(t)
}

fn labels(entries: &[BandEntry], out: &mut Vec<String>) {
    for e in entries {
        out.push(e.label().to_string());
        if let BandEntry::Group(_, children) = e {
            labels(children, out);
        }
    }
}

fn band_cases(trees: &[BandTree], cases: &mut Vec<TestCase>) {
    for tree in trees {
        let c = tree.chromosome;
        for arm in [Arm::P, Arm::Q] {
            let mut ls = Vec::new();
            labels(tree.arm(arm), &mut ls);
            for label in ls {
                let name = c.band_name(&label);
                let n = name.clone();
                cases.push(TestCase::new(
                    "Human",
                    format!("arm of {n}"),
                    Tier::SoftwareBound,
                    move |_| {
                        let got = (band::str_pband(&n), band::str_qband(&n));
                        let want = (arm == Arm::P, arm == Arm::Q);
                        (got == want)
                            .then_some(())
                            .ok_or_else(|| format!("{n}: p/q predicates gave {got:?}"))
                    },
                ));
                cases.push(TestCase::new(
                    "Human",
                    format!("band? {name}"),
                    Tier::OntologyBound,
                    move |cx| match band::is_band(cx.ontology(), &name) {
                        Ok(true) => Ok(()),
                        Ok(false) => Err(format!("{name} is not below {}", band::BAND_ROOT)),
                        Err(e) => Err(e.to_string()),
                    },
                ));
            }
        }
    }
    for c in Chromosome::all() {
        let name = c.class_name();
        cases.push(TestCase::new(
            "Human",
            format!("chromosome {name}"),
            Tier::OntologyBound,
            move |cx| {
                let parent = if c.is_sex() {
                    HUMAN_SEX_CHROMOSOME
                } else {
                    HUMAN_AUTOSOME
                };
                cx.ontology()
                    .told_superclasses(&name)
                    .contains(parent)
                    .then_some(())
                    .ok_or_else(|| format!("{name} is not below {parent}"))
            },
        ));
    }
}

fn karyotype_cases(table: &FacetTable, cases: &mut Vec<TestCase>) {
    for row in &table.rows {
        let text = iscn::render(&row.karyotype);
        let t = text.clone();
        cases.push(TestCase::new(
            "Parse",
            format!("round trip {text}"),
            Tier::SoftwareBound,
            move |_| {
                let again = iscn::parse(&t).map_err(|e| e.to_string())?;
                (iscn::render(&again) == t)
                    .then_some(())
                    .ok_or_else(|| format!("{t} renders as {again}"))
            },
        ));
        let class = axioms::karyotype_class_name(&row.karyotype);
        cases.push(TestCase::new(
            "Karyotype",
            format!("declared {text}"),
            Tier::OntologyBound,
            move |cx| {
                cx.ontology()
                    .told_superclasses(&class)
                    .contains(KARYOTYPE)
                    .then_some(())
                    .ok_or_else(|| format!("{class} is not a told {KARYOTYPE}"))
            },
        ));
    }
}

/// A class under both chromosome kinds must be unsatisfiable.
pub fn incoherence_probe() -> TestCase {
    let probe = Probe::new()
        .class("_")
        .axiom(Axiom::SubClassOf(
            Concept::named("_"),
            Concept::named(HUMAN_AUTOSOME),
        ))
        .axiom(Axiom::SubClassOf(
            Concept::named("_"),
            Concept::named(HUMAN_SEX_CHROMOSOME),
        ));
    TestCase::new(
        "Probe",
        "autosome and sex chromosome",
        Tier::ProbeBound,
        |cx| {
            let map = cx.reasoner();
            if !map.coherent() && is_unsatisfiable(map, "_") {
                Ok(())
            } else {
                Err("the probe class is satisfiable; the ontology stayed coherent".into())
            }
        },
    )
    .with_probe(probe)
}

fn base_cases(cases: &mut Vec<TestCase>) {
    cases.push(TestCase::new(
        "Base",
        "coherent",
        Tier::ReasonerBound,
        |cx| {
            let map = cx.reasoner();
            let bad: Vec<&str> = map.unsatisfiable().collect();
            bad.is_empty()
                .then_some(())
                .ok_or_else(|| format!("unsatisfiable: {}", bad.join(", ")))
        },
    ));
    cases.push(TestCase::new(
        "Base",
        "consistent",
        Tier::ReasonerBound,
        |cx| {
            cx.reasoner()
                .consistent()
                .then_some(())
                .ok_or_else(|| "Top is unsatisfiable".to_string())
        },
    ));
}

/// Every group, in a fixed order. `tbox` must come from [`build_ontology`]
/// over the same inputs.
pub fn standard_suite(
    trees: &[BandTree],
    table: &FacetTable,
    tbox: &TBox,
) -> Result<Vec<TestCase>> {
    let mut cases = Vec::new();
    band_cases(trees, &mut cases);
    karyotype_cases(table, &mut cases);
    base_cases(&mut cases);
    cases.extend(assertions_from(table, tbox)?);
    cases.push(incoherence_probe());
    Ok(cases)
}
