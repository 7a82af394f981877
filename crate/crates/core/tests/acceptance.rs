//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits nonzero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use keikit::diagram::{parse_braid, LinkDiagram};
use keikit::invariant::{enhanced_invariant, presentation_matrix};
use keikit::kei::{alexander_kei, kei_from_table, takasaki_kei, FiniteKei};
use keikit::keialg::{
    enumerate_module_structures, verify_module, ModuleStructure, SearchLimit, Variant,
};
use keikit::labeling::{counting_invariant, KeiLabeling};
use keikit::modarith::{count_homogeneous_solutions, IntMatrix, Modulus};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(d: &LinkDiagram, x: &FiniteKei, m: &ModuleStructure) -> String {
    enhanced_invariant(d, x, m).unwrap().polynomial.to_string()
}

fn counting() -> Outcome {
    let x = takasaki_kei(3).unwrap();
    let trefoil = common::diagram("3_1");
    let unknot = parse_braid(1, &[]).unwrap();
    let (a, b) = (
        counting_invariant(&trefoil, &x),
        counting_invariant(&unknot, &x),
    );
    ensure(a == 9, || format!("trefoil gave {a}"))?;
    ensure(b == 3, || format!("unknot gave {b}"))?;
    Ok("trefoil 9, unknot 3".into())
}

fn census() -> Outcome {
    let start = Instant::now();
    let x = takasaki_kei(3).unwrap();
    let m = Modulus::new(5).unwrap();
    let kei = enumerate_module_structures(&x, m, Variant::Kei, SearchLimit::default()).unwrap();
    let quandle =
        enumerate_module_structures(&x, m, Variant::Quandle, SearchLimit::default()).unwrap();
    let z5_kei = common::module("z5_kei");
    let z5_quandle = common::module("z5_quandle");
    ensure(kei.len() == 48, || {
        format!("{} kei-variant structures", kei.len())
    })?;
    ensure(kei.contains(&z5_kei), || {
        "kei census misses the z5_kei module".into()
    })?;
    let not_kei: Vec<&ModuleStructure> = quandle
        .iter()
        .filter(|s| {
            !verify_module(&x, &s.with_variant(Variant::Kei))
                .unwrap()
                .is_empty()
        })
        .collect();
    ensure(not_kei.len() == 32, || {
        format!("{} quandle-only structures", not_kei.len())
    })?;
    ensure(not_kei.contains(&&z5_quandle), || {
        "quandle census misses the z5_quandle module".into()
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "48 kei, {} quandle of which 32 not kei-valid, {elapsed:.2?}",
        quandle.len()
    ))
}

fn enhanced() -> Outcome {
    let x = takasaki_kei(3).unwrap();
    let m = common::module("z5_kei");
    let a = poly(&common::diagram("4_1"), &x, &m);
    let b = poly(&common::diagram("0_1"), &x, &m);
    ensure(a == "3u^25", || format!("figure eight gave {a}"))?;
    ensure(b == "3u^5", || format!("unknot gave {b}"))?;
    Ok(format!("4_1 {a}, unknot {b}"))
}

// The full published Z_7 table; L5a1 has no row there.
fn published_table() -> BTreeMap<&'static str, &'static str> {
    let groups: [(&str, &[&str]); 5] = [
        (
            "3u^7",
            &[
                "0_1", "4_1", "5_1", "6_2", "6_3", "7_2", "7_3", "7_5", "7_6", "8_1", "8_2", "8_3",
                "8_4", "8_6", "8_7", "8_8", "8_9", "8_12", "8_13", "8_14", "8_17", "L2a1", "L4a1",
                "L6a2", "L6a4", "L6n1", "L7a2", "L7a3", "L7a4", "L7a7", "L7n1", "L7n2",
            ],
        ),
        (
            "3u^7 + 6u^49",
            &[
                "3_1", "6_1", "7_4", "8_10", "8_11", "8_15", "8_19", "8_20", "8_21", "L6a1",
                "L6a3", "L6a5", "L7a1", "L7a5",
            ],
        ),
        ("3u^7 + 24u^49", &["8_18"]),
        ("3u^49", &["5_2", "7_1", "8_16", "L7a6"]),
        ("9u^49", &["7_7", "8_5"]),
    ];
    groups
        .iter()
        .flat_map(|(p, names)| names.iter().map(move |n| (*n, *p)))
        .collect()
}

fn table_regression() -> Outcome {
    let x = takasaki_kei(3).unwrap();
    let m = common::module("z7_kei");
    let computed: BTreeMap<String, String> = common::table("knots")
        .into_iter()
        .map(|(n, d)| {
            let p = poly(&d, &x, &m);
            (n, p)
        })
        .collect();
    let mandatory = [
        ("4_1", "3u^7"),
        ("3_1", "3u^7 + 6u^49"),
        ("6_1", "3u^7 + 6u^49"),
        ("5_2", "3u^49"),
        ("7_1", "3u^49"),
        ("7_7", "9u^49"),
        ("8_5", "9u^49"),
        ("8_18", "3u^7 + 24u^49"),
        ("L2a1", "3u^7"),
        ("L6a1", "3u^7 + 6u^49"),
        ("L7a6", "3u^49"),
    ];
    for (name, want) in mandatory {
        let got = computed.get(name).map(String::as_str);
        ensure(got == Some(want), || {
            format!("{name}: expected {want}, got {got:?}")
        })?;
    }
    let published = published_table();
    let mut mismatches = Vec::new();
    for (name, want) in &published {
        match computed.get(*name) {
            Some(got) if got == want => {}
            got => mismatches.push(format!("{name}: expected {want}, got {got:?}")),
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("full table: {}", mismatches.join("; "))
    })?;
    Ok(format!(
        "11 named entries and all {} published entries match",
        published.len()
    ))
}

fn virtual_non_invertibility() -> Outcome {
    let x = takasaki_kei(3).unwrap();
    let m = common::module("z5_quandle");
    let up = common::diagram("4.97");
    let down = up.reverse_orientation();
    let constant = KeiLabeling::constant(up.arc_count(), 1);
    let p_up = presentation_matrix(&up, &x, &constant).unwrap();
    let p_down = presentation_matrix(&down, &x, &constant).unwrap();
    ensure(p_up.equivalent_to(&common::matrix_497_up()), || {
        format!("forward matrix differs:\n{p_up}")
    })?;
    ensure(p_down.equivalent_to(&common::matrix_497_down()), || {
        format!("reversed matrix differs:\n{p_down}")
    })?;
    let stored_down = common::diagram("4.97_down");
    ensure(
        stored_down.to_pd().unwrap() == down.to_pd().unwrap(),
        || "4.97_down is not the reversal".into(),
    )?;
    let counts = (counting_invariant(&up, &x), counting_invariant(&down, &x));
    ensure(counts == (3, 3), || {
        format!("counting invariants {counts:?}")
    })?;
    let (a, b) = (poly(&up, &x, &m), poly(&down, &x, &m));
    ensure(a == "3u^5" && b == "3u^25", || {
        format!("forward {a}, reversed {b}")
    })?;
    Ok(format!(
        "forward {a}, reversed {b}, counts 3 and 3, both matrices reproduced"
    ))
}

fn axiom_suite() -> Result<(), String> {
    for n in 1..=12usize {
        let k = takasaki_kei(n).map_err(|e| format!("takasaki {n}: {e}"))?;
        kei_from_table(k.table()).map_err(|e| format!("takasaki {n}: {e}"))?;
        for t in 0..n as i64 {
            if (t * t) % n as i64 != 1 % n as i64 {
                ensure(alexander_kei(n, t).is_err(), || {
                    format!("alexander {n},{t} accepted")
                })?;
                continue;
            }
            let k = alexander_kei(n, t).map_err(|e| format!("alexander {n},{t}: {e}"))?;
            kei_from_table(k.table()).map_err(|e| format!("alexander {n},{t}: {e}"))?;
        }
    }
    Ok(())
}

fn brute_force_count(a: &IntMatrix, m: u64) -> u64 {
    let cols = a.cols();
    let mut v = vec![0u64; cols];
    let mut count = 0;
    loop {
        let ok = (0..a.rows()).all(|r| {
            let s: i64 = (0..cols).map(|c| a.get(r, c) * v[c] as i64).sum();
            s.rem_euclid(m as i64) == 0
        });
        count += u64::from(ok);
        let mut i = 0;
        while i < cols {
            v[i] += 1;
            if v[i] < m {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == cols {
            return count;
        }
    }
}

fn solution_count_oracle() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65_6931);
    let cases = 300;
    for case in 0..cases {
        let m = rng.gen_range(2..=8u64);
        let rows = rng.gen_range(1..=4usize);
        let cols = rng.gen_range(1..=4usize);
        let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-12..=12)).collect();
        let a = IntMatrix::new(rows, cols, entries).unwrap();
        let got = count_homogeneous_solutions(&a, Modulus::new(m).unwrap());
        let want = brute_force_count(&a, m);
        ensure(got == BigUint::from(want), || {
            format!("case {case}: mod {m}, {a}: {got} vs {want}")
        })?;
    }
    Ok(cases)
}

fn singleton_census_oracle() -> Result<(), String> {
    let x = takasaki_kei(1).unwrap();
    for m in 2..=12u64 {
        let modulus = Modulus::new(m).unwrap();
        let enumerated: Vec<(u64, u64)> =
            enumerate_module_structures(&x, modulus, Variant::Kei, SearchLimit(m))
                .unwrap()
                .iter()
                .map(|s| (s.t(1, 1), s.s(1, 1)))
                .collect();
        let mut expected = Vec::new();
        for t in 0..m {
            for s in 0..m {
                let r1a = (t * t) % m == 1 % m;
                let r1b = (t * s + s) % m == 0;
                let r2 = (t + s) % m == 1 % m;
                // R3a and R3b are identities when there is a single element
                let r3c = (s * s + t * s) % m == s;
                if r1a && r1b && r2 && r3c {
                    expected.push((t, s));
                }
            }
        }
        ensure(enumerated == expected, || {
            format!("mod {m}: {enumerated:?} vs {expected:?}")
        })?;
    }
    Ok(())
}

struct Triple {
    kei: FiniteKei,
    module: ModuleStructure,
    label: String,
}

fn fixture_triples() -> Vec<Triple> {
    let takasaki = common::kei("takasaki3");
    let other = common::kei("ex36");
    let mut out = Vec::new();
    for name in ["z5_kei", "z7_kei", "z5_quandle"] {
        out.push(Triple {
            kei: takasaki.clone(),
            module: common::module(name),
            label: format!("takasaki3/{name}"),
        });
    }
    for m in [2u64, 3, 5] {
        let modulus = Modulus::new(m).unwrap();
        for k in [&takasaki, &other] {
            out.push(Triple {
                kei: k.clone(),
                module: ModuleStructure::trivial(3, modulus),
                label: format!("trivial mod {m}"),
            });
        }
    }
    let nontrivial = enumerate_module_structures(
        &other,
        Modulus::new(5).unwrap(),
        Variant::Kei,
        SearchLimit::default(),
    )
    .unwrap()
    .into_iter()
    .find(|s| *s != ModuleStructure::trivial(3, Modulus::new(5).unwrap()))
    .expect("the second kei carries a nontrivial module over Z_5");
    out.push(Triple {
        kei: other,
        module: nontrivial,
        label: "ex36/enumerated".into(),
    });
    out
}

fn u_one_and_orientation(diagrams: &[(String, LinkDiagram)]) -> Result<(usize, usize), String> {
    let (mut checked, mut oriented) = (0, 0);
    for t in fixture_triples() {
        let valid_kei = verify_module(&t.kei, &t.module).unwrap().is_empty()
            && t.module.variant() == Variant::Kei;
        for (name, d) in diagrams {
            let inv = enhanced_invariant(d, &t.kei, &t.module).unwrap();
            let n = counting_invariant(d, &t.kei);
            ensure(inv.polynomial.evaluate_at_one() as usize == n, || {
                format!("{name} under {}: {} vs count {n}", t.label, inv.polynomial)
            })?;
            checked += 1;
            if valid_kei {
                let rev = enhanced_invariant(&d.reverse_orientation(), &t.kei, &t.module).unwrap();
                ensure(rev.polynomial == inv.polynomial, || {
                    format!(
                        "{name} under {}: {} vs reversed {}",
                        t.label, inv.polynomial, rev.polynomial
                    )
                })?;
                oriented += 1;
            }
        }
    }
    Ok((checked, oriented))
}

fn isotopy_spot_check() -> Result<(), String> {
    let x = takasaki_kei(3).unwrap();
    let m = common::module("z7_kei");
    let a = poly(&common::diagram("trefoil"), &x, &m);
    let b = poly(&common::diagram("trefoil_kink"), &x, &m);
    ensure(
        common::diagram("trefoil_kink").crossing_count() == 4,
        || "kink diagram has wrong size".into(),
    )?;
    ensure(a == b, || format!("{a} vs {b}"))
}

fn trivial_module_law(diagrams: &[(String, LinkDiagram)]) -> Result<(), String> {
    for k in [common::kei("takasaki3"), common::kei("ex36")] {
        for m in [2u64, 3, 4, 5, 7] {
            let module = ModuleStructure::trivial(k.order(), Modulus::new(m).unwrap());
            for (name, d) in diagrams {
                let inv = enhanced_invariant(d, &k, &module).unwrap();
                let n = counting_invariant(d, &k);
                let exp = BigUint::from(m).pow(d.component_count() as u32);
                let want = vec![exp; n];
                ensure(inv.multiset() == want, || {
                    format!("{name} mod {m}: got {}", inv.polynomial)
                })?;
            }
        }
    }
    Ok(())
}

fn properties() -> Outcome {
    let diagrams = common::all_diagrams();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let mut record = |label: &str, r: Result<String, String>| match r {
        Ok(s) => notes.push(format!("{label}: {s}")),
        Err(e) => failures.push(format!("{label}: {e}")),
    };
    record("axiom suite", axiom_suite().map(|_| "ok".into()));
    record(
        "solution counts",
        solution_count_oracle().map(|n| format!("{n} random matrices")),
    );
    record(
        "singleton census",
        singleton_census_oracle().map(|_| "m = 2..12".into()),
    );
    record(
        "u=1 and orientation",
        u_one_and_orientation(&diagrams).map(|(a, b)| format!("{a} triples summed, {b} reversed")),
    );
    record(
        "isotopy",
        isotopy_spot_check().map(|_| "trefoil diagrams agree".into()),
    );
    record(
        "trivial module",
        trivial_module_law(&diagrams).map(|_| "ok".into()),
    );
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 6] = [
        ("counting invariant", counting),
        ("module census", census),
        ("enhanced invariant", enhanced),
        ("knot table regression", table_regression),
        ("virtual non-invertibility", virtual_non_invertibility),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
