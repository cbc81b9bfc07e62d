//! Named verification suites. Each case pairs an expected record, built
//! from closed formulas, with the record the engine computes; a case passes
//! iff the two agree on every field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::{self, FamilyInstance};
use crate::green::{self, GreensRelation, InverseStructure};
use crate::ideals;
use crate::oracle;
use crate::rewriting::Completeness;
use crate::semigroup::{FiniteSemigroup, SubsetKind};

pub type Record = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub expected: Record,
    pub computed: Record,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    fn new<E, C>(id: impl Into<String>, expected: E, computed: C) -> Self
    where
        E: IntoIterator<Item = (&'static str, String)>,
        C: IntoIterator<Item = (&'static str, String)>,
    {
        let expected: Record = expected
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let computed: Record = computed
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let pass = expected == computed;
        CaseResult {
            id: id.into(),
            expected,
            computed,
            pass,
            note: None,
        }
    }

    fn failed(id: impl Into<String>, error: impl fmt::Display) -> Self {
        CaseResult {
            id: id.into(),
            expected: Record::new(),
            computed: Record::new(),
            pass: false,
            note: Some(error.to_string()),
        }
    }

    fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationSuiteResult {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub elapsed_micros: u64,
}

impl VerificationSuiteResult {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// One line per case, then one `key: value` line per computed field;
    /// mismatching fields also show the expected value.
    pub fn to_text(&self) -> String {
        let mut out = format!("suite: {}\n", self.suite);
        for case in &self.cases {
            out.push_str(&format!(
                "case {}: {}\n",
                case.id,
                if case.pass { "pass" } else { "FAIL" }
            ));
            for (key, value) in &case.computed {
                match case.expected.get(key) {
                    Some(e) if e != value => {
                        out.push_str(&format!("  {key}: {value} (expected {e})\n"))
                    }
                    _ => out.push_str(&format!("  {key}: {value}\n")),
                }
            }
            for (key, e) in &case.expected {
                if !case.computed.contains_key(key) {
                    out.push_str(&format!("  {key}: missing (expected {e})\n"));
                }
            }
            if let Some(note) = &case.note {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        let passed = self.cases.iter().filter(|c| c.pass).count();
        out.push_str(&format!("summary: {passed}/{} passed\n", self.cases.len()));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    BiIdealFamily,
    LeftIdealCsFamily,
    BrandtTower,
    NullExtension,
    BrandtExample,
    ReferenceMonoids,
    SmallOrderOracle,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::BiIdealFamily,
        Suite::LeftIdealCsFamily,
        Suite::BrandtTower,
        Suite::NullExtension,
        Suite::BrandtExample,
        Suite::ReferenceMonoids,
        Suite::SmallOrderOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::BiIdealFamily => "bi-ideal-family",
            Suite::LeftIdealCsFamily => "left-ideal-cs-family",
            Suite::BrandtTower => "brandt-tower",
            Suite::NullExtension => "null-extension",
            Suite::BrandtExample => "brandt-example",
            Suite::ReferenceMonoids => "reference-monoids",
            Suite::SmallOrderOracle => "small-order-oracle",
        }
    }

    pub fn default_range(self) -> RangeInclusive<usize> {
        match self {
            Suite::BiIdealFamily => 2..=6,
            Suite::LeftIdealCsFamily => 2..=8,
            Suite::BrandtTower => 1..=4,
            Suite::NullExtension => 3..=3,
            Suite::BrandtExample => 2..=2,
            Suite::ReferenceMonoids => 1..=3,
            Suite::SmallOrderOracle => 3..=3,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Knobs shared by the suites; unset fields take each suite's default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Parameter range for the family suites.
    pub n: Option<RangeInclusive<usize>>,
    /// Largest table order for the oracle suite.
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

pub fn run_suite(suite: Suite, options: &SuiteOptions) -> VerificationSuiteResult {
    let start = Instant::now();
    let range = options.n.clone().unwrap_or_else(|| suite.default_range());
    let cases = match suite {
        Suite::BiIdealFamily => range.map(bi_family_case).collect(),
        Suite::LeftIdealCsFamily => range.map(left_family_case).collect(),
        Suite::BrandtTower => brandt_tower_cases(range),
        Suite::NullExtension => null_extension_cases(range),
        Suite::BrandtExample => brandt_example_cases(),
        Suite::ReferenceMonoids => reference_monoid_cases(range),
        Suite::SmallOrderOracle => oracle_cases(options),
    };
    VerificationSuiteResult {
        suite: suite.name().to_string(),
        cases,
        elapsed_micros: start.elapsed().as_micros().try_into().unwrap_or(u64::MAX),
    }
}

fn set_text<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    let mut names: Vec<&str> = names.into_iter().collect();
    names.sort_unstable();
    format!("{{{}}}", names.join(", "))
}

fn complement_text(f: &FamilyInstance) -> String {
    let s = &f.semigroup;
    set_text(
        s.elements()
            .filter(|a| !f.distinguished.contains(*a))
            .map(|a| s.name(a)),
    )
}

fn family_record(f: &FamilyInstance) -> Vec<(&'static str, String)> {
    let c = f.computed();
    vec![
        ("order", c.order.to_string()),
        ("height", c.height.to_string()),
        ("relative_height", c.relative_height.to_string()),
        ("chain_param", c.chain_param.to_string()),
    ]
}

fn expected_record(f: &FamilyInstance) -> Vec<(&'static str, String)> {
    let e = f.expected;
    vec![
        ("order", e.order.to_string()),
        ("height", e.height.to_string()),
        ("relative_height", e.relative_height.to_string()),
        ("chain_param", e.chain_param.to_string()),
    ]
}

fn completeness_text(f: &FamilyInstance) -> String {
    match f.presentation.as_ref().map(|p| p.is_complete()) {
        Some(Completeness::Complete) => "complete".into(),
        Some(Completeness::NotConfluent { witness, .. }) => {
            format!("not confluent at pair from rules {:?}", witness.rules)
        }
        None => "no presentation".into(),
    }
}

fn bound_text(f: &FamilyInstance) -> String {
    match ideals::bound_report(&f.distinguished) {
        Ok(r) => format!(
            "{} {}{}",
            r.theorem_id,
            if r.pass { "pass" } else { "fail" },
            if r.tight { " tight" } else { "" }
        ),
        Err(e) => e.to_string(),
    }
}

fn bi_family_case(n: usize) -> CaseResult {
    let id = format!("n={n}");
    let f = match constructions::bi_ideal_family(n) {
        Ok(f) => f,
        Err(e) => return CaseResult::failed(id, e),
    };
    let mut expected = expected_record(&f);
    expected.extend([
        ("complement", "{t, ty, tyz, yzt, zt}".to_string()),
        ("presentation", "complete".to_string()),
        ("bound", "bi-ideal-cs pass tight".to_string()),
    ]);
    let mut computed = family_record(&f);
    computed.extend([
        ("complement", complement_text(&f)),
        ("presentation", completeness_text(&f)),
        ("bound", bound_text(&f)),
    ]);
    CaseResult::new(id, expected, computed)
}

fn left_family_case(n: usize) -> CaseResult {
    let id = format!("n={n}");
    let f = match constructions::left_ideal_cs_family(n) {
        Ok(f) => f,
        Err(e) => return CaseResult::failed(id, e),
    };
    let mut expected = expected_record(&f);
    expected.extend([
        ("complement", "{yz, z}".to_string()),
        ("presentation", "complete".to_string()),
        ("bound", "left-ideal-cs pass tight".to_string()),
        ("height_j", (2 * n - 1).to_string()),
        ("j_classes_form_chain", "true".to_string()),
    ]);
    let j = green::class_poset(&f.semigroup, GreensRelation::J);
    let mut computed = family_record(&f);
    computed.extend([
        ("complement", complement_text(&f)),
        ("presentation", completeness_text(&f)),
        ("bound", bound_text(&f)),
        ("height_j", j.height().to_string()),
        ("j_classes_form_chain", j.is_chain().to_string()),
    ]);
    CaseResult::new(id, expected, computed)
}

fn h_r(s: &FiniteSemigroup) -> usize {
    green::height(s, GreensRelation::R)
}

fn brandt_tower_cases(range: RangeInclusive<usize>) -> Vec<CaseResult> {
    let mut cases: Vec<CaseResult> = range
        .map(|n| {
            let id = format!("n={n}");
            match constructions::right_ideal_tower(n) {
                Ok(f) => {
                    let mut expected = expected_record(&f);
                    let mut computed = family_record(&f);
                    if n == 2 {
                        let (example, _) = constructions::brandt_example();
                        let same = f
                            .semigroup
                            .elements()
                            .all(|a| f.semigroup.row(a) == example.row(a));
                        expected.push(("table_equals_example", "true".into()));
                        computed.push(("table_equals_example", same.to_string()));
                    }
                    CaseResult::new(id, expected, computed)
                }
                Err(e) => CaseResult::failed(id, e),
            }
        })
        .collect();

    let bases: Vec<(&str, Result<FiniteSemigroup, String>)> = vec![
        ("trivial", Ok(constructions::trivial())),
        ("left-zero-2", Ok(constructions::left_zero(2))),
        (
            "bi-ideal-family-2",
            constructions::bi_ideal_family(2)
                .map(|f| (*f.semigroup).clone())
                .map_err(|e| e.to_string()),
        ),
    ];
    for (label, base) in bases {
        let id = format!("brandt {label}");
        match base.and_then(|s| brandt_theorem_case(&s).map_err(|e| e.to_string())) {
            Ok((expected, computed)) => cases.push(CaseResult::new(id, expected, computed)),
            Err(e) => cases.push(CaseResult::failed(id, e)),
        }
    }
    cases
}

type Pairs = Vec<(&'static str, String)>;

/// `H_R(B(S, 2)) = H_R(S) + 1` and, for every `a`, `H_R((1,a,1)T¹) = H_R(aS¹) + 2`.
fn brandt_theorem_case(
    s: &FiniteSemigroup,
) -> Result<(Pairs, Pairs), constructions::ConstructionError> {
    let t = Arc::new(constructions::brandt_extension(s, 2)?);
    let parent = Arc::new(s.clone());
    let mut expected_heights = Vec::new();
    let mut computed_heights = Vec::new();
    for a in s.elements() {
        let in_s = ideals::generate(&parent, &[a].into_iter().collect(), SubsetKind::RightIdeal)?;
        let lifted = constructions::brandt_index(s.order(), 2, 0, a, 0);
        let in_t = ideals::generate(&t, &[lifted].into_iter().collect(), SubsetKind::RightIdeal)?;
        expected_heights.push(format!("{}", ideals::relative_height(&in_s) + 2));
        computed_heights.push(format!("{}", ideals::relative_height(&in_t)));
    }
    Ok((
        vec![
            ("order", (4 * s.order() + 1).to_string()),
            ("height", (h_r(s) + 1).to_string()),
            ("principal_heights", expected_heights.join(" ")),
        ],
        vec![
            ("order", t.order().to_string()),
            ("height", h_r(&t).to_string()),
            ("principal_heights", computed_heights.join(" ")),
        ],
    ))
}

fn null_extension_cases(range: RangeInclusive<usize>) -> Vec<CaseResult> {
    let mut bases: Vec<(String, Result<FiniteSemigroup, String>)> =
        vec![("T=trivial".into(), Ok(constructions::trivial()))];
    for n in range {
        bases.push((
            format!("T=left-ideal-cs-family n={n}"),
            constructions::left_ideal_cs_family(n)
                .map(|f| (*f.semigroup).clone())
                .map_err(|e| e.to_string()),
        ));
    }
    bases
        .into_iter()
        .map(|(id, base)| match base {
            Err(e) => CaseResult::failed(id, e),
            Ok(t) => {
                let (s, n) = constructions::null_extension(&t);
                let report = ideals::bound_report(&n);
                let bound = match &report {
                    Ok(r) => format!("{} {}", r.theorem_id, if r.pass { "pass" } else { "fail" }),
                    Err(e) => e.to_string(),
                };
                CaseResult::new(
                    id,
                    [
                        ("order", (2 * t.order() + 1).to_string()),
                        ("relative_height", "2".to_string()),
                        ("chain_param", (h_r(&t) + 1).to_string()),
                        ("bound", "two-sided-ideal pass".to_string()),
                    ],
                    [
                        ("order", s.order().to_string()),
                        ("relative_height", ideals::relative_height(&n).to_string()),
                        ("chain_param", ideals::chain_param(&n).to_string()),
                        ("bound", bound),
                    ],
                )
            }
        })
        .collect()
}

fn brandt_example_cases() -> Vec<CaseResult> {
    let (s, a) = constructions::brandt_example();
    let sp = green::class_poset(&s, GreensRelation::R);
    let local = a.restrict().semigroup;
    let ap = green::class_poset(&local, GreensRelation::R);
    let minimal: Vec<String> = sp
        .minimal()
        .iter()
        .map(|&c| set_text(sp.classes()[c].iter().map(|&x| s.name(x))))
        .collect();
    let chain = match ideals::chain_into_kernel(&a, 3) {
        Ok(c) => c
            .iter()
            .map(|&x| s.name(x).to_string())
            .collect::<Vec<_>>()
            .join(" < "),
        Err(e) => e.to_string(),
    };
    let inverse = match green::inverse_structure(&s) {
        InverseStructure::Inverse { idempotent_height } => format!("inverse {idempotent_height}"),
        other => format!("{other:?}"),
    };
    vec![
        CaseResult::new(
            "S",
            [
                ("height", "2".to_string()),
                ("maximal_classes", "2".to_string()),
                ("minimal_classes", "{0}".to_string()),
                ("regular", "5".to_string()),
                ("inverse_structure", "inverse 2".to_string()),
            ],
            [
                ("height", sp.height().to_string()),
                ("maximal_classes", sp.maximal().len().to_string()),
                ("minimal_classes", minimal.join(" ")),
                ("regular", green::regular_elements(&s).len().to_string()),
                ("inverse_structure", inverse),
            ],
        ),
        CaseResult::new(
            "A",
            [
                ("members", "{(1,1), (1,2), 0}".to_string()),
                ("relative_height", "3".to_string()),
                ("poset_is_chain", "true".to_string()),
                ("chain_param", "2".to_string()),
                ("chain_into_kernel", "0 < (1,2) < (1,1)".to_string()),
            ],
            [
                ("members", set_text(a.member_names())),
                ("relative_height", ap.height().to_string()),
                ("poset_is_chain", ap.is_chain().to_string()),
                ("chain_param", ideals::chain_param(&a).to_string()),
                ("chain_into_kernel", chain),
            ],
        ),
    ]
}

fn reference_monoid_cases(range: RangeInclusive<usize>) -> Vec<CaseResult> {
    let mut cases: Vec<CaseResult> = range
        .map(|n| {
            let id = format!("T_{n}");
            match constructions::full_transformation_monoid(n) {
                Ok(t) => CaseResult::new(
                    id,
                    GreensRelation::ALL.map(|r| (relation_key(r), n.to_string())),
                    GreensRelation::ALL
                        .map(|r| (relation_key(r), green::height(&t, r).to_string())),
                ),
                Err(e) => CaseResult::failed(id, e),
            }
        })
        .collect();
    for n in 1..=3 {
        let id = format!("I_{n}");
        match constructions::symmetric_inverse_monoid(n) {
            Ok(i) => {
                let structure = match green::inverse_structure(&i) {
                    InverseStructure::Inverse { idempotent_height } => {
                        idempotent_height.to_string()
                    }
                    other => format!("{other:?}"),
                };
                cases.push(CaseResult::new(
                    id,
                    [
                        ("idempotent_height", (n + 1).to_string()),
                        ("height_r", (n + 1).to_string()),
                    ],
                    [
                        ("idempotent_height", structure),
                        ("height_r", h_r(&i).to_string()),
                    ],
                ));
            }
            Err(e) => cases.push(CaseResult::failed(id, e)),
        }
    }
    cases
}

fn relation_key(r: GreensRelation) -> &'static str {
    match r {
        GreensRelation::R => "height_r",
        GreensRelation::L => "height_l",
        GreensRelation::J => "height_j",
        GreensRelation::H => "height_h",
    }
}

/// Labeled associative tables of orders 1, 2, 3.
const LABELED_COUNTS: [usize; 3] = [1, 8, 113];

fn oracle_cases(options: &SuiteOptions) -> Vec<CaseResult> {
    let max = options.order.unwrap_or(oracle::EXHAUSTIVE_MAX_ORDER);
    let samples = options.samples.unwrap_or(oracle::DEFAULT_SAMPLES);
    let seed = options.seed.unwrap_or(oracle::DEFAULT_SEED);
    if max == 0 || max > oracle::SAMPLED_MAX_ORDER {
        return vec![CaseResult::failed(
            format!("order={max}"),
            format!("order must lie in 1..={}", oracle::SAMPLED_MAX_ORDER),
        )];
    }
    (1..=max)
        .map(|m| {
            let (report, tables) = if m <= oracle::EXHAUSTIVE_MAX_ORDER {
                (oracle::run_exhaustive(m), LABELED_COUNTS[m - 1])
            } else {
                (oracle::run_sampled(m, samples, seed), samples)
            };
            let note = report
                .violations
                .first()
                .map(|v| format!("{}: {} [{}]", v.check, v.detail, v.table));
            CaseResult::new(
                format!("order={m}"),
                [
                    ("tables", tables.to_string()),
                    ("violations", "0".to_string()),
                ],
                [
                    ("tables", report.tables.to_string()),
                    ("violations", report.violations.len().to_string()),
                ],
            )
            .with_note(note)
        })
        .collect()
}
