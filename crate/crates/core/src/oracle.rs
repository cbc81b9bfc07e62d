//! Exhaustive and sampled corpora of small multiplication tables, and the
//! invariant battery run over every table and every ideal-type subset.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::green::{self, GreensRelation, InverseStructure};
use crate::ideals::{self, ChainScope};
use crate::semigroup::{ElementSet, FiniteSemigroup, SubsetHandle, SubsetKind};

/// Largest order enumerated exhaustively.
pub const EXHAUSTIVE_MAX_ORDER: usize = 3;
/// Largest order accepted by the sampler (all subsets are visited per table).
pub const SAMPLED_MAX_ORDER: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed_0fc1;
pub const DEFAULT_SAMPLES: usize = 100_000;

fn default_names(m: usize) -> Vec<String> {
    (0..m).map(|i| i.to_string()).collect()
}

fn associative(m: usize, t: &[usize]) -> bool {
    for a in 0..m {
        for b in 0..m {
            let ab = t[a * m + b];
            for c in 0..m {
                if t[ab * m + c] != t[a * m + t[b * m + c]] {
                    return false;
                }
            }
        }
    }
    true
}

/// Every associative table on `{0, …, m−1}` (labeled, not up to
/// isomorphism), in lexicographic order of the flattened table.
pub fn associative_tables(m: usize) -> Vec<FiniteSemigroup> {
    assert!(
        (1..=EXHAUSTIVE_MAX_ORDER).contains(&m),
        "exhaustive enumeration supports orders 1..={EXHAUSTIVE_MAX_ORDER}"
    );
    let cells = m * m;
    let mut t = vec![0usize; cells];
    let mut out = Vec::new();
    loop {
        if associative(m, &t) {
            let rows = t.chunks(m).map(<[usize]>::to_vec).collect();
            out.push(
                FiniteSemigroup::from_table(default_names(m), rows).expect("checked associative"),
            );
        }
        // odometer increment, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < m {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Draws random associative tables by filling cells in random order with
/// randomly ordered candidate values, backtracking on any fully determined
/// non-associative triple. Attempts that exceed a node budget restart.
pub struct TableSampler {
    m: usize,
    rng: ChaCha8Rng,
}

const UNSET: usize = usize::MAX;
const ATTEMPT_BUDGET: usize = 20_000;

impl TableSampler {
    pub fn new(m: usize, seed: u64) -> Self {
        assert!(
            (1..=SAMPLED_MAX_ORDER).contains(&m),
            "sampled orders are 1..={SAMPLED_MAX_ORDER}"
        );
        TableSampler {
            m,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self) -> FiniteSemigroup {
        loop {
            if let Some(t) = self.attempt() {
                let m = self.m;
                let rows = t.chunks(m).map(<[usize]>::to_vec).collect();
                return FiniteSemigroup::from_table(default_names(m), rows)
                    .expect("sampler output is associative");
            }
        }
    }

    fn attempt(&mut self) -> Option<Vec<usize>> {
        let m = self.m;
        let mut order: Vec<usize> = (0..m * m).collect();
        order.shuffle(&mut self.rng);
        let choices: Vec<Vec<usize>> = order
            .iter()
            .map(|_| {
                let mut v: Vec<usize> = (0..m).collect();
                v.shuffle(&mut self.rng);
                v
            })
            .collect();
        let mut t = vec![UNSET; m * m];
        let mut next = vec![0usize; order.len()];
        let mut depth = 0;
        let mut nodes = 0;
        while depth < order.len() {
            let cell = order[depth];
            if next[depth] == m {
                t[cell] = UNSET;
                next[depth] = 0;
                if depth == 0 {
                    return None;
                }
                depth -= 1;
                continue;
            }
            nodes += 1;
            if nodes > ATTEMPT_BUDGET {
                return None;
            }
            t[cell] = choices[depth][next[depth]];
            next[depth] += 1;
            if consistent_at(m, &t, cell) {
                depth += 1;
            }
        }
        Some(t)
    }
}

/// Whether every fully determined triple touching `cell` associates.
fn consistent_at(m: usize, t: &[usize], cell: usize) -> bool {
    let (p, q) = (cell / m, cell % m);
    let get = |a: usize, b: usize| t[a * m + b];
    let check = |a: usize, b: usize, c: usize| -> bool {
        let ab = get(a, b);
        let bc = get(b, c);
        if ab == UNSET || bc == UNSET {
            return true;
        }
        let l = get(ab, c);
        let r = get(a, bc);
        l == UNSET || r == UNSET || l == r
    };
    for x in 0..m {
        // cell as inner product: (pq)x, x(pq)
        if !check(p, q, x) || !check(x, p, q) {
            return false;
        }
        // cell as outer product: (ab)c with ab = p, c = q; a(bc) with a = p, bc = q
        for y in 0..m {
            if (get(x, y) == p && !check(x, y, q)) || (get(x, y) == q && !check(p, x, y)) {
                return false;
            }
        }
    }
    true
}

/// One failed invariant on one table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub table: String,
    pub check: String,
    pub detail: String,
}

/// Tallies from running the invariant battery over a corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub order: usize,
    pub sampled: bool,
    pub seed: Option<u64>,
    pub tables: usize,
    pub handles: usize,
    pub bound_checks: usize,
    pub violations: Vec<Violation>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn absorb(&mut self, other: TableOutcome) {
        self.tables += 1;
        self.handles += other.handles;
        self.bound_checks += other.bound_checks;
        self.violations.extend(other.violations);
    }
}

/// Runs the battery over every associative table of order `m ≤ 3`.
pub fn run_exhaustive(m: usize) -> OracleReport {
    let mut report = OracleReport {
        order: m,
        ..Default::default()
    };
    for outcome in check_all(&associative_tables(m)) {
        report.absorb(outcome);
    }
    report
}

/// Runs the battery over `samples` random associative tables of order `m`.
pub fn run_sampled(m: usize, samples: usize, seed: u64) -> OracleReport {
    let mut sampler = TableSampler::new(m, seed);
    let tables: Vec<FiniteSemigroup> = (0..samples).map(|_| sampler.sample()).collect();
    let mut report = OracleReport {
        order: m,
        sampled: true,
        seed: Some(seed),
        ..Default::default()
    };
    for outcome in check_all(&tables) {
        report.absorb(outcome);
    }
    report
}

/// Checks tables across worker threads; outcomes keep the input order.
fn check_all(tables: &[FiniteSemigroup]) -> Vec<TableOutcome> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(16);
    let chunk = tables.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = tables
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(check_semigroup).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    })
}

/// Per-table tallies.
#[derive(Clone, Debug, Default)]
pub struct TableOutcome {
    pub handles: usize,
    pub bound_checks: usize,
    pub violations: Vec<Violation>,
}

fn compact(s: &FiniteSemigroup) -> String {
    s.elements()
        .map(|a| {
            s.row(a)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

struct Checker<'a> {
    s: &'a FiniteSemigroup,
    out: TableOutcome,
}

impl Checker<'_> {
    fn expect(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.out.violations.push(Violation {
                table: compact(self.s),
                check: check.to_string(),
                detail: detail(),
            });
        }
    }
}

/// Longest strict chain of elements under a preorder given as a predicate,
/// by memoized search over elements. Counts elements, which equals the count
/// of classes on the corresponding class chain.
pub fn brute_force_height(m: usize, leq: impl Fn(usize, usize) -> bool) -> usize {
    let less: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| leq(a, b) && !leq(b, a)).collect())
        .collect();
    let mut memo = vec![0usize; m];
    fn longest(a: usize, less: &[Vec<bool>], memo: &mut [usize]) -> usize {
        if memo[a] > 0 {
            return memo[a];
        }
        let mut best = 1;
        for b in 0..less.len() {
            if less[b][a] {
                best = best.max(1 + longest(b, less, memo));
            }
        }
        memo[a] = best;
        best
    }
    (0..m)
        .map(|a| longest(a, &less, &mut memo))
        .max()
        .unwrap_or(0)
}

/// `a ≤ b` in the given relation, recomputed from raw products.
pub fn naive_leq(s: &FiniteSemigroup, a: usize, b: usize, relation: GreensRelation) -> bool {
    let in_right = |a: usize, b: usize| a == b || s.elements().any(|x| s.product(b, x) == a);
    let in_left = |a: usize, b: usize| a == b || s.elements().any(|x| s.product(x, b) == a);
    match relation {
        GreensRelation::R => in_right(a, b),
        GreensRelation::L => in_left(a, b),
        GreensRelation::H => in_right(a, b) && in_left(a, b),
        GreensRelation::J => {
            in_right(a, b)
                || in_left(a, b)
                || s.elements()
                    .any(|x| s.elements().any(|y| s.product(s.product(x, b), y) == a))
        }
    }
}

fn principal_right_ideal(s: &FiniteSemigroup, a: usize) -> ElementSet {
    let mut set = s
        .product_of_sets(&[a].into_iter().collect(), &s.all(), false)
        .expect("non-empty operands");
    set.insert(a);
    set
}

fn subset_of_mask(mask: u32, m: usize) -> ElementSet {
    (0..m).filter(|i| mask >> i & 1 == 1).collect()
}

/// Runs every invariant on one table and all of its ideal-type subsets.
pub fn check_semigroup(s: &FiniteSemigroup) -> TableOutcome {
    let m = s.order();
    assert!(
        m <= SAMPLED_MAX_ORDER,
        "subset enumeration limited to order {SAMPLED_MAX_ORDER}"
    );
    let mut ck = Checker {
        s,
        out: TableOutcome::default(),
    };
    let parent = Arc::new(s.clone());

    let h: [usize; 4] = GreensRelation::ALL.map(|r| green::height(s, r));
    let [h_r, h_l, h_j, _] = h;

    for (i, relation) in GreensRelation::ALL.into_iter().enumerate() {
        let naive = brute_force_height(m, |a, b| naive_leq(s, a, b, relation));
        ck.expect(naive == h[i], "height oracle", || {
            format!("{relation}: engine {} brute force {naive}", h[i])
        });
    }
    ck.expect(h_r <= h_j, "H_R <= H_J", || format!("{h_r} > {h_j}"));
    ck.expect(h_l <= h_j, "H_L <= H_J", || format!("{h_l} > {h_j}"));

    let r = green::class_poset(s, GreensRelation::R);
    let l = green::class_poset(s, GreensRelation::L);
    let hp = green::class_poset(s, GreensRelation::H);
    for class in hp.classes() {
        let same =
            |p: &green::ClassPoset| class.iter().all(|&a| p.class_of(a) == p.class_of(class[0]));
        ck.expect(same(&r) && same(&l), "H finer than R and L", || {
            format!("H-class {class:?}")
        });
    }

    // minimal right ideals rebuilt from principal right ideals
    let principal: Vec<ElementSet> = s.elements().map(|a| principal_right_ideal(s, a)).collect();
    let union_of_minimal: ElementSet = s
        .elements()
        .filter(|&a| principal[a].iter().all(|&b| principal[b] == principal[a]))
        .flat_map(|a| principal[a].iter().copied().collect::<Vec<_>>())
        .collect();
    ck.expect(
        (h_r == 1) == (union_of_minimal.len() == m),
        "H_R = 1 iff union of minimal right ideals",
        || format!("H_R {h_r}, union {union_of_minimal:?}"),
    );

    let kernel = match green::kernel(s) {
        Ok(k) => k,
        Err(e) => {
            ck.expect(false, "kernel exists", || e.to_string());
            return ck.out;
        }
    };
    ck.expect(
        kernel.is_completely_simple,
        "kernel completely simple",
        || format!("{:?}", kernel.members),
    );
    let ideal_intersection = s
        .elements()
        .map(|a| {
            let right = principal_right_ideal(s, a);
            let mut two = s
                .product_of_sets(&s.all(), &right, false)
                .expect("non-empty");
            two.extend(right);
            two
        })
        .reduce(|x, y| x.intersection(&y).copied().collect())
        .unwrap_or_default();
    ck.expect(
        ideal_intersection == kernel.members,
        "kernel is least ideal",
        || {
            format!(
                "engine {:?}, intersection {ideal_intersection:?}",
                kernel.members
            )
        },
    );

    match green::inverse_structure(s) {
        InverseStructure::Inverse { idempotent_height } => {
            ck.expect(idempotent_height == h_r, "inverse height", || {
                format!("E(S) height {idempotent_height}, H_R {h_r}")
            })
        }
        InverseStructure::RegularNotInverse | InverseStructure::NotRegular => {}
    }

    let regular = green::regular_elements(s);
    let mut bi_ideals: Vec<ElementSet> = Vec::new();
    for mask in 1u32..(1 << m) {
        let members = subset_of_mask(mask, m);
        for kind in SubsetKind::IDEAL_KINDS {
            if !ideals::is_kind(s, &members, kind) {
                continue;
            }
            if kind == SubsetKind::BiIdeal {
                bi_ideals.push(members.clone());
            }
            let handle =
                SubsetHandle::new(parent.clone(), members.clone(), kind).expect("kind checked");
            ck.out.handles += 1;
            check_handle(&mut ck, &handle, &kernel.members, &regular);
        }
    }

    // generated bi-ideal is the least bi-ideal over its generators
    for mask in 1u32..(1 << m) {
        let x = subset_of_mask(mask, m);
        let generated = match ideals::generate(&parent, &x, SubsetKind::BiIdeal) {
            Ok(g) => g.members().clone(),
            Err(e) => {
                ck.expect(false, "bi-ideal generation", || e.to_string());
                continue;
            }
        };
        let least = bi_ideals
            .iter()
            .filter(|b| b.is_superset(&x))
            .all(|b| b.is_superset(&generated));
        ck.expect(
            generated.is_superset(&x) && bi_ideals.contains(&generated) && least,
            "least bi-ideal",
            || format!("X {x:?} generated {generated:?}"),
        );
    }
    ck.out
}

fn check_handle(
    ck: &mut Checker<'_>,
    handle: &SubsetHandle,
    kernel: &ElementSet,
    regular: &ElementSet,
) {
    let s = handle.parent();
    let kind = handle.kind();
    let members = handle.members();
    let restriction = handle.restrict();
    let local = &restriction.semigroup;
    let rel_h = green::height(local, GreensRelation::R);
    let n = ideals::chain_param(handle);

    let reports = [
        ideals::bound_report(handle).map(Some),
        ideals::sanity_report(handle),
    ];
    for report in reports {
        match report {
            Ok(Some(r)) => {
                ck.out.bound_checks += 1;
                ck.expect(r.pass, "bound", || {
                    format!(
                        "{} on {kind} {members:?}: {rel_h} > {}",
                        r.theorem_id, r.bound
                    )
                });
            }
            Ok(None) => {}
            Err(e) => ck.expect(false, "bound report", || e.to_string()),
        }
    }
    // the bounds stated for bi-ideals also cover every ideal kind
    if kind != SubsetKind::BiIdeal {
        let as_bi = ideals::chain_param_in(s, members, ChainScope::Intersecting);
        ck.out.bound_checks += 1;
        ck.expect(rel_h + 2 <= 3 * as_bi, "bi-ideal bound on ideal", || {
            format!("{kind} {members:?}: {rel_h} > 3*{as_bi}-2")
        });
    }
    if kind == SubsetKind::RightIdeal {
        let inter = ideals::chain_param_in(s, members, ChainScope::Intersecting);
        ck.expect(inter == n, "right ideal scopes agree", || {
            format!("{members:?}: {inter} vs {n}")
        });
    }

    let lri: BTreeSet<usize> = members
        .iter()
        .copied()
        .filter(|&a| green::has_local_right_identity_in(s, members, a))
        .collect();
    if lri.len() == members.len() {
        let intersecting = ideals::chain_param_in(s, members, ChainScope::Intersecting);
        ck.expect(
            rel_h == intersecting,
            "local right identity proposition",
            || format!("{kind} {members:?}: H_R {rel_h}, n {intersecting}"),
        );
    }
    if kind == SubsetKind::LeftIdeal && members.is_subset(regular) {
        ck.expect(rel_h == n, "regular left ideal proposition", || {
            format!("{members:?}: H_R {rel_h}, n {n}")
        });
    }

    let local_index = |a: usize| restriction.local_index(a).expect("member");
    let compare = |b: usize, c: usize| {
        let (lb, lc) = (local_index(b), local_index(c));
        let leq_match =
            green::leq(local, lb, lc, GreensRelation::R) == green::leq(s, b, c, GreensRelation::R);
        let less_match = green::less(local, lb, lc, GreensRelation::R)
            == green::less(s, b, c, GreensRelation::R);
        leq_match && less_match
    };
    for &b in &lri {
        for &c in &lri {
            ck.expect(compare(b, c), "local right identity lemma", || {
                format!("{members:?}: b={b} c={c}")
            });
        }
    }
    let in_kernel: Vec<usize> = members.intersection(kernel).copied().collect();
    for &b in &in_kernel {
        for &c in &in_kernel {
            ck.expect(compare(b, c), "kernel corollary", || {
                format!("{members:?}: b={b} c={c}")
            });
        }
    }
}
