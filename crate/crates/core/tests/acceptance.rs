//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rheight::constructions::*;
use rheight::green::{self, GreensRelation, InverseStructure};
use rheight::ideals;
use rheight::oracle;
use rheight::rewriting::{Completeness, RewritingSystem, Word};
use rheight::{ElementSet, FiniteSemigroup, SubsetKind};

type Check = Result<(), String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    ensure(got == want, || {
        format!("{what}: got {got:?}, want {want:?}")
    })
}

fn h_r(s: &FiniteSemigroup) -> usize {
    green::height(s, GreensRelation::R)
}

fn complement(f: &FamilyInstance) -> BTreeSet<String> {
    f.semigroup
        .elements()
        .filter(|&a| !f.distinguished.contains(a))
        .map(|a| f.semigroup.name(a).to_string())
        .collect()
}

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn bi_ideal_family_criterion() -> Check {
    for n in 2..=6 {
        let f = bi_ideal_family(n).map_err(|e| e.to_string())?;
        eq(
            &format!("n={n} order"),
            f.semigroup.order(),
            12 * (n - 1) + 1,
        )?;
        eq(&format!("n={n} H_R(S)"), h_r(&f.semigroup), n)?;
        eq(
            &format!("n={n} H_R(B)"),
            ideals::relative_height(&f.distinguished),
            3 * n - 2,
        )?;
        eq(
            &format!("n={n} S minus B"),
            complement(&f),
            set(&["t", "zt", "ty", "yzt", "tyz"]),
        )?;
    }
    Ok(())
}

fn left_ideal_family_criterion() -> Check {
    for n in 2..=8 {
        let f = left_ideal_cs_family(n).map_err(|e| e.to_string())?;
        eq(
            &format!("n={n} order"),
            f.semigroup.order(),
            6 * (n - 1) + 1,
        )?;
        eq(&format!("n={n} H_R(S)"), h_r(&f.semigroup), n)?;
        eq(
            &format!("n={n} H_R(A)"),
            ideals::relative_height(&f.distinguished),
            2 * n - 1,
        )?;
        eq(
            &format!("n={n} S minus A"),
            complement(&f),
            set(&["z", "yz"]),
        )?;
        let j = green::class_poset(&f.semigroup, GreensRelation::J);
        eq(&format!("n={n} H_J(S)"), j.height(), 2 * n - 1)?;
        eq(&format!("n={n} J-classes"), j.len(), 2 * n - 1)?;
        ensure(j.is_chain(), || format!("n={n}: J-classes are not a chain"))?;
    }
    Ok(())
}

fn brandt_theorem_criterion() -> Check {
    let bases: Vec<(&str, FiniteSemigroup)> = vec![
        ("trivial", trivial()),
        ("left-zero(2)", left_zero(2)),
        (
            "bi-ideal family n=2",
            bi_ideal_family(2)
                .map_err(|e| e.to_string())?
                .semigroup
                .as_ref()
                .clone(),
        ),
    ];
    for (label, s) in bases {
        let t = Arc::new(brandt_extension(&s, 2).map_err(|e| e.to_string())?);
        eq(&format!("{label}: H_R(T)"), h_r(&t), h_r(&s) + 1)?;
        let s = Arc::new(s);
        for a in s.elements() {
            let in_s = ideals::generate(&s, &ElementSet::from([a]), SubsetKind::RightIdeal)
                .map_err(|e| e.to_string())?;
            let lifted = brandt_index(s.order(), 2, 0, a, 0);
            let in_t = ideals::generate(&t, &ElementSet::from([lifted]), SubsetKind::RightIdeal)
                .map_err(|e| e.to_string())?;
            eq(
                &format!("{label}: H_R((1,{},1)T¹)", s.name(a)),
                ideals::relative_height(&in_t),
                ideals::relative_height(&in_s) + 2,
            )?;
        }
    }
    Ok(())
}

fn tower_criterion() -> Check {
    let orders = [1, 5, 21, 85];
    for n in 1..=4 {
        let f = right_ideal_tower(n).map_err(|e| e.to_string())?;
        eq(&format!("n={n} order"), f.semigroup.order(), orders[n - 1])?;
        eq(&format!("n={n} H_R(S)"), h_r(&f.semigroup), n)?;
        eq(
            &format!("n={n} H_R(A)"),
            ideals::relative_height(&f.distinguished),
            2 * n - 1,
        )?;
        if n == 2 {
            let (example, _) = brandt_example();
            let rows_equal = f
                .semigroup
                .elements()
                .all(|a| f.semigroup.row(a) == example.row(a));
            ensure(f.semigroup.order() == example.order() && rows_equal, || {
                "n=2 table differs from the 5-element Brandt semigroup".into()
            })?;
        }
    }
    Ok(())
}

fn brandt_example_criterion() -> Check {
    let (s, a) = brandt_example();
    let sp = green::class_poset(&s, GreensRelation::R);
    eq("H_R(S)", sp.height(), 2)?;
    let local = a.restrict().semigroup;
    let ap = green::class_poset(&local, GreensRelation::R);
    eq("H_R(A)", ap.height(), 3)?;
    ensure(ap.is_chain() && ap.len() == 3, || {
        "A-poset is not a 3-chain".into()
    })?;
    eq("maximal S-classes", sp.maximal().len(), 2)?;
    let minimal = sp.minimal();
    eq("minimal S-classes", minimal.len(), 1)?;
    let bottom: Vec<&str> = sp.classes()[minimal[0]]
        .iter()
        .map(|&x| s.name(x))
        .collect();
    eq("bottom class", bottom, vec!["0"])?;
    for top in sp.maximal() {
        ensure(sp.lower_covers(top) == [minimal[0]], || {
            "a maximal class does not cover {0}".into()
        })?;
    }
    Ok(())
}

fn null_extension_criterion() -> Check {
    let t = left_ideal_cs_family(3).map_err(|e| e.to_string())?;
    let (_, n) = null_extension(&t.semigroup);
    eq("H_R(N)", ideals::relative_height(&n), 2)?;
    eq("H_R(T)", h_r(&t.semigroup), 3)?;
    eq(
        "chain_param(S, N)",
        ideals::chain_param(&n),
        h_r(&t.semigroup) + 1,
    )?;
    eq("chain_param(S, N)", ideals::chain_param(&n), 4)
}

fn reference_monoids_criterion() -> Check {
    for n in 1..=4 {
        let t = full_transformation_monoid(n).map_err(|e| e.to_string())?;
        for r in GreensRelation::ALL {
            eq(&format!("T_{n} H_{r}"), green::height(&t, r), n)?;
        }
    }
    let i3 = symmetric_inverse_monoid(3).map_err(|e| e.to_string())?;
    eq("|I_3|", i3.order(), 34)?;
    match green::inverse_structure(&i3) {
        InverseStructure::Inverse { idempotent_height } => {
            eq("I_3 idempotent height", idempotent_height, 4)?;
            eq("I_3 H_R", h_r(&i3), idempotent_height)
        }
        other => Err(format!("I_3 classified as {other:?}")),
    }
}

fn small_order_oracle_criterion() -> Check {
    let counts = [1, 8, 113];
    for m in 1..=3 {
        let report = oracle::run_exhaustive(m);
        eq(&format!("order {m} tables"), report.tables, counts[m - 1])?;
        ensure(report.handles > 0, || {
            format!("order {m}: no handles examined")
        })?;
        if let Some(v) = report.violations.first() {
            return Err(format!(
                "order {m}: {} violations, first {}: {} [{}]",
                report.violations.len(),
                v.check,
                v.detail,
                v.table
            ));
        }
    }
    Ok(())
}

fn random_word(rng: &mut ChaCha8Rng, k: usize) -> Word {
    let len = rng.gen_range(1..=12);
    Word::letters(
        (0..len)
            .map(|_| rng.gen_range(0..k) as u8)
            .collect::<Vec<_>>(),
    )
}

fn rewriting_criterion() -> Check {
    let mut systems: Vec<(String, RewritingSystem)> = Vec::new();
    for n in 2..=8 {
        systems.push((
            format!("bi n={n}"),
            bi_ideal_presentation(n).map_err(|e| e.to_string())?,
        ));
        systems.push((
            format!("left n={n}"),
            left_ideal_cs_presentation(n).map_err(|e| e.to_string())?,
        ));
    }
    for (label, system) in &systems {
        ensure(system.is_complete().is_complete(), || {
            format!("{label} is not complete")
        })?;
    }

    let bad = RewritingSystem::from_texts(&["a", "b"], None, &[("ab", "a"), ("ba", "b")])
        .map_err(|e| e.to_string())?;
    match bad.is_complete() {
        Completeness::Complete => return Err("{ab→a, ba→b} reported complete".into()),
        Completeness::NotConfluent {
            witness,
            left_normal,
            right_normal,
        } => {
            ensure(left_normal != right_normal, || {
                "witness normal forms coincide".into()
            })?;
            let source = witness.source.as_letters().ok_or("zero witness")?.to_vec();
            // both results are genuine one-step rewrites of the source
            let steps: Vec<Word> = bad
                .redexes(&source)
                .into_iter()
                .map(|r| bad.rewrite_at(&source, r))
                .collect();
            ensure(
                steps.contains(&witness.left) && steps.contains(&witness.right),
                || "witness results are not one-step reducts".into(),
            )?;
            eq(
                "witness normal forms",
                (
                    bad.reduce_word(&witness.left).ok(),
                    bad.reduce_word(&witness.right).ok(),
                ),
                (Some(left_normal), Some(right_normal)),
            )?;
            eq(
                "witness source",
                bad.render(&witness.source),
                "aba".to_string(),
            )?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x0a11_ce55);
    for (label, system) in &systems {
        let k = system.alphabet().len();
        for _ in 0..10_000 {
            let w = random_word(&mut rng, k);
            let expected = system.reduce_word(&w).map_err(|e| e.to_string())?;
            let got = system
                .reduce_word_with(&w, |redexes| rng.gen_range(0..redexes.len()))
                .map_err(|e| e.to_string())?;
            ensure(got == expected, || {
                format!(
                    "{label}: {} reduces to {} and {}",
                    system.render(&w),
                    system.render(&expected),
                    system.render(&got)
                )
            })?;
        }
    }
    Ok(())
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            number: 1,
            name: "bi-ideal family",
            limit: Duration::from_secs(5),
            run: bi_ideal_family_criterion,
        },
        Criterion {
            number: 2,
            name: "left-ideal family",
            limit: Duration::from_secs(5),
            run: left_ideal_family_criterion,
        },
        Criterion {
            number: 3,
            name: "Brandt extension heights",
            limit: Duration::from_secs(5),
            run: brandt_theorem_criterion,
        },
        Criterion {
            number: 4,
            name: "right-ideal tower",
            limit: Duration::from_secs(5),
            run: tower_criterion,
        },
        Criterion {
            number: 5,
            name: "5-element Brandt example",
            limit: Duration::from_secs(5),
            run: brandt_example_criterion,
        },
        Criterion {
            number: 6,
            name: "null extension",
            limit: Duration::from_secs(5),
            run: null_extension_criterion,
        },
        Criterion {
            number: 7,
            name: "reference monoids",
            limit: Duration::from_secs(10),
            run: reference_monoids_criterion,
        },
        Criterion {
            number: 8,
            name: "small-order oracle",
            limit: Duration::from_secs(120),
            run: small_order_oracle_criterion,
        },
        Criterion {
            number: 9,
            name: "rewriting",
            limit: Duration::from_secs(30),
            run: rewriting_criterion,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(()) if elapsed <= c.limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {:?} limit)", c.limit),
            Err(e) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!(
            "criterion {} [{}]: {verdict} in {:.3}s",
            c.number,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
