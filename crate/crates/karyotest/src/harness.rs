//! Four-tier test runner.
//!
//! Every case declares the most expensive resource it needs: plain code,
//! the ontology, the reasoner, or the reasoner over a temporarily extended
//! ontology. The runner records what a case actually touched and fails it
//! when that differs from the declaration.

use std::cell::{Cell, OnceCell};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::panic::{catch_unwind, AssertUnwindSafe};

use karyotype_core::axioms::karyotype_class_name;
use karyotype_core::ontology::{Probe, TBox};
use karyotype_core::reasoner::{classify, SubsumptionMap, BOTTOM, TOP};
use thiserror::Error;

use crate::facets::FacetTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    SoftwareBound,
    OntologyBound,
    ReasonerBound,
    ProbeBound,
}

impl Tier {
    pub const ALL: [Tier; 4] = [
        Tier::SoftwareBound,
        Tier::OntologyBound,
        Tier::ReasonerBound,
        Tier::ProbeBound,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Tier::SoftwareBound => "Software",
            Tier::OntologyBound => "Ontology",
            Tier::ReasonerBound => "Reasoner",
            Tier::ProbeBound => "Probe",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What a check can reach. Each accessor records the tier it implies.
pub struct CaseContext<'a> {
    tbox: &'a TBox,
    touched: Cell<Tier>,
    classification: &'a OnceCell<SubsumptionMap>,
}

impl<'a> CaseContext<'a> {
    fn touch(&self, tier: Tier) {
        self.touched.set(self.touched.get().max(tier));
    }

    pub fn ontology(&self) -> &'a TBox {
        self.touch(Tier::OntologyBound);
        self.tbox
    }

    pub fn reasoner(&self) -> &'a SubsumptionMap {
        self.touch(Tier::ReasonerBound);
        self.classification.get_or_init(|| classify(self.tbox))
    }
}

type Check = Box<dyn Fn(&CaseContext<'_>) -> Result<(), String>>;

pub struct TestCase {
    pub id: String,
    pub group: String,
    pub tier: Tier,
    pub probe: Option<Probe>,
    check: Check,
}

impl TestCase {
    pub fn new(
        group: impl Into<String>,
        id: impl Into<String>,
        tier: Tier,
        check: impl Fn(&CaseContext<'_>) -> Result<(), String> + 'static,
    ) -> Self {
        TestCase {
            id: id.into(),
            group: group.into(),
            tier,
            probe: None,
            check: Box::new(check),
        }
    }

    pub fn with_probe(mut self, probe: Probe) -> Self {
        self.probe = Some(probe);
        self
    }
}

impl fmt::Debug for TestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestCase")
            .field("id", &self.id)
            .field("group", &self.group)
            .field("tier", &self.tier)
            .field("probe", &self.probe)
            .finish_non_exhaustive()
    }
}

pub fn tier_of(case: &TestCase) -> Tier {
    case.tier
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{case}: declared {declared} but touched {touched}")]
pub struct TierViolation {
    pub case: String,
    pub declared: Tier,
    pub touched: Tier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub id: String,
    pub group: String,
    pub tier: Tier,
    pub status: Status,
}

struct Run {
    outcome: Result<(), String>,
    touched: Tier,
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn execute(case: &TestCase, tbox: &mut TBox, shared: &OnceCell<SubsumptionMap>) -> Run {
    let body = |view: &TBox, cache: &OnceCell<SubsumptionMap>| {
        let cx = CaseContext {
            tbox: view,
            touched: Cell::new(Tier::SoftwareBound),
            classification: cache,
        };
        let outcome = match catch_unwind(AssertUnwindSafe(|| (case.check)(&cx))) {
            Ok(r) => r,
            Err(payload) => Err(format!("panicked: {}", panic_message(&*payload))),
        };
        let mut touched = cx.touched.get();
        if case.probe.is_some() && touched >= Tier::ReasonerBound {
            touched = Tier::ProbeBound;
        }
        Run { outcome, touched }
    };
    match &case.probe {
        None => body(tbox, shared),
        Some(probe) => {
            let local = OnceCell::new();
            tbox.with_probe(probe, |view| body(view, &local))
                .unwrap_or_else(|e| Run {
                    outcome: Err(format!("probe rejected: {e}")),
                    touched: Tier::SoftwareBound,
                })
        }
    }
}

fn check_tier(case: &TestCase, touched: Tier) -> Result<Tier, TierViolation> {
    if touched == case.tier {
        Ok(touched)
    } else {
        Err(TierViolation {
            case: case.id.clone(),
            declared: case.tier,
            touched,
        })
    }
}

/// Runs `case` once and checks that it touched exactly its declared tier.
/// A `ProbeBound` case must carry a probe and consult the reasoner.
pub fn validate(case: &TestCase, tbox: &mut TBox) -> Result<Tier, TierViolation> {
    let run = execute(case, tbox, &OnceCell::new());
    check_tier(case, run.touched)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub passed: usize,
    pub failed: usize,
}

impl Counts {
    pub fn total(self) -> usize {
        self.passed + self.failed
    }

    fn add(&mut self, other: Counts) {
        self.passed += other.passed;
        self.failed += other.failed;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TierReport {
    pub results: Vec<CaseResult>,
}

fn tier_index(t: Tier) -> usize {
    t as usize
}

impl TierReport {
    /// Counts per group, one column per tier.
    pub fn by_group(&self) -> BTreeMap<&str, [Counts; 4]> {
        let mut out: BTreeMap<&str, [Counts; 4]> = BTreeMap::new();
        for r in &self.results {
            let cell = &mut out.entry(&r.group).or_default()[tier_index(r.tier)];
            match r.status {
                Status::Passed => cell.passed += 1,
                Status::Failed(_) => cell.failed += 1,
            }
        }
        out
    }

    pub fn by_tier(&self) -> [Counts; 4] {
        let mut totals = [Counts::default(); 4];
        for row in self.by_group().values() {
            for (t, c) in totals.iter_mut().zip(row) {
                t.add(*c);
            }
        }
        totals
    }

    pub fn failures(&self) -> impl Iterator<Item = (&CaseResult, &str)> {
        self.results.iter().filter_map(|r| match &r.status {
            Status::Failed(m) => Some((r, m.as_str())),
            Status::Passed => None,
        })
    }

    pub fn failed(&self) -> usize {
        self.failures().count()
    }

    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn is_pass(&self) -> bool {
        self.failed() == 0
    }

    /// Assertion counts per test group and tier, then totals.
    pub fn table(&self) -> String {
        const W: usize = 10;
        let groups = self.by_group();
        let name_width = groups
            .keys()
            .map(|g| g.len())
            .chain(["Test Class".len()])
            .max()
            .unwrap_or(0);
        let width = name_width + 4 * W;
        let mut out = String::new();
        let _ = write!(out, "{:<name_width$}", "Test Class");
        for t in Tier::ALL {
            let _ = write!(out, "{:>W$}", t.column());
        }
        out.push('\n');
        let rule = "-".repeat(width);
        let _ = writeln!(out, "{rule}");
        let row = |out: &mut String, name: &str, cells: [usize; 4]| {
            let _ = write!(out, "{name:<name_width$}");
            for c in cells {
                let _ = write!(out, "{c:>W$}");
            }
            out.push('\n');
        };
        for (g, cells) in &groups {
            row(&mut out, g, cells.map(Counts::total));
        }
        let _ = writeln!(out, "{rule}");
        let totals = self.by_tier();
        row(&mut out, "Total", totals.map(Counts::total));
        row(&mut out, "Failed", totals.map(|c| c.failed));
        out
    }
}

/// Runs every case once, in order. Probe cases see the ontology extended
/// by their probe, which is reverted before the next case runs.
pub fn run_suite(cases: &[TestCase], tbox: &mut TBox) -> TierReport {
    let shared = OnceCell::new();
    let results = cases
        .iter()
        .map(|case| {
            let run = execute(case, tbox, &shared);
            let status = match (run.outcome, check_tier(case, run.touched)) {
                (_, Err(v)) => Status::Failed(format!("tier violation: {v}")),
                (Ok(()), Ok(_)) => Status::Passed,
                (Err(m), Ok(_)) => Status::Failed(m),
            };
            CaseResult {
                id: case.id.clone(),
                group: case.group.clone(),
                tier: case.tier,
                status,
            }
        })
        .collect();
    TierReport { results }
}

pub const FACET_GROUP: &str = "Facets";

/// Class name for a facet column: `Male` becomes `MaleKaryotype`.
pub fn facet_class(column: &str) -> String {
    format!("{column}Karyotype")
}

/// One reasoner-bound case per non-zero cell. Every karyotype must already
/// be axiomatized into `tbox` and every column must name a facet class.
pub fn assertions_from(table: &FacetTable, tbox: &TBox) -> crate::Result<Vec<TestCase>> {
    let unknown = |n: String| karyotype_core::Error::UnknownEntity(n);
    let classes: Vec<String> = table.facet_names.iter().map(|c| facet_class(c)).collect();
    if let Some(c) = classes.iter().find(|c| !tbox.has_class(c)) {
        return Err(unknown(c.clone()).into());
    }
    let mut cases = Vec::new();
    for row in &table.rows {
        let class = karyotype_class_name(&row.karyotype);
        if !tbox.has_class(&class) {
            return Err(unknown(class).into());
        }
        let text = row.karyotype.to_string();
        for ((column, facet), value) in table.facet_names.iter().zip(&classes).zip(&row.values) {
            if *value == 0 {
                continue;
            }
            let expected = *value == 1;
            let (class, facet, text, column) =
                (class.clone(), facet.clone(), text.clone(), column.clone());
            cases.push(TestCase::new(
                FACET_GROUP,
                format!("{text} {column}"),
                Tier::ReasonerBound,
                move |cx| {
                    let map = cx.reasoner();
                    let entailed = map.is_subclass(&class, &facet).map_err(|e| e.to_string())?;
                    if entailed == expected {
                        return Ok(());
                    }
                    let supers: Vec<&str> = map
                        .subsumers(&class)
                        .into_iter()
                        .flatten()
                        .map(String::as_str)
                        .filter(|s| *s != class && *s != TOP)
                        .collect();
                    Err(format!(
                        "karyotype {text}, facet {column}: expected {class} {} {facet}; entailed superclasses: {}",
                        if expected { "⊑" } else { "⋢" },
                        if supers.is_empty() { "none".to_string() } else { supers.join(", ") },
                    ))
                },
            ));
        }
    }
    Ok(cases)
}

/// Whether `map` reports `class` as unsatisfiable.
pub fn is_unsatisfiable(map: &SubsumptionMap, class: &str) -> bool {
    map.subsumers(class).is_some_and(|s| s.contains(BOTTOM))
}
