//! Search over small tables for bi-ideals whose `R`-height comes close to
//! `3n − 1`, where `n` is the chain parameter. Finite semigroups have
//! completely simple kernels, so `3n − 2` caps every finite witness; the
//! search reports how close it gets and never claims that no witness exists.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::green::{self, GreensRelation};
use crate::ideals::{self, ChainScope};
use crate::oracle::{associative_tables, TableSampler, EXHAUSTIVE_MAX_ORDER, SAMPLED_MAX_ORDER};
use crate::semigroup::{ElementSet, FiniteSemigroup, SubsetKind};

pub const DEFAULT_MAX_ORDER: usize = 5;
pub const DEFAULT_BUDGET: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x0be7_1de0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_order: usize,
    /// Number of tables examined.
    pub budget: usize,
    pub seed: u64,
    /// Optional wall-clock cap; a run stopped by it is flagged and is no
    /// longer reproducible.
    pub time_limit: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_order: DEFAULT_MAX_ORDER,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            time_limit: None,
        }
    }
}

/// The best bi-ideal found so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub members: Vec<usize>,
    pub height: usize,
    pub relative_height: usize,
    pub chain_param: usize,
    /// `relative_height − (3·chain_param − 2)`.
    pub score: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub max_order: usize,
    pub budget: usize,
    pub seed: u64,
    pub tables_examined: usize,
    pub bi_ideals_examined: usize,
    pub stopped_by_time: bool,
    pub best: Option<Witness>,
    /// Whether some witness had `relative_height = 3·chain_param − 1`.
    pub open_bound_attained: bool,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `key: value` lines.
    pub fn to_record(&self) -> String {
        let mut out = format!(
            "max_order: {}\nbudget: {}\nseed: {}\ntables_examined: {}\nbi_ideals_examined: {}\nstopped_by_time: {}\nopen_bound_attained: {}\n",
            self.max_order,
            self.budget,
            self.seed,
            self.tables_examined,
            self.bi_ideals_examined,
            self.stopped_by_time,
            self.open_bound_attained
        );
        match &self.best {
            None => out.push_str("best: none\n"),
            Some(w) => {
                let members: Vec<String> = w.members.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "best_order: {}\nbest_members: {}\nbest_height: {}\nbest_relative_height: {}\nbest_chain_param: {}\nbest_score: {}\n",
                    w.order,
                    members.join(" "),
                    w.height,
                    w.relative_height,
                    w.chain_param,
                    w.score
                ));
            }
        }
        out
    }
}

fn examine(s: &FiniteSemigroup, report: &mut SearchReport) {
    let m = s.order();
    let parent = Arc::new(s.clone());
    let mut height = None;
    for mask in 1u32..(1 << m) {
        let members: ElementSet = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if !ideals::is_kind(s, &members, SubsetKind::BiIdeal) {
            continue;
        }
        report.bi_ideals_examined += 1;
        let local = parent.restrict(&members).expect("bi-ideals are closed");
        let relative_height = green::height(&local.semigroup, GreensRelation::R);
        let chain_param = ideals::chain_param_in(s, &members, ChainScope::Intersecting);
        let score = relative_height as i64 - (3 * chain_param as i64 - 2);
        if relative_height + 1 == 3 * chain_param {
            report.open_bound_attained = true;
        }
        if report.best.as_ref().is_none_or(|b| score > b.score) {
            let height = *height.get_or_insert_with(|| green::height(s, GreensRelation::R));
            report.best = Some(Witness {
                order: m,
                table: s.elements().map(|a| s.row(a).to_vec()).collect(),
                members: members.into_iter().collect(),
                height,
                relative_height,
                chain_param,
                score,
            });
        }
    }
}

/// Exhausts orders up to 3, then draws random tables of orders 4 through
/// `max_order` in rotation until the budget is spent.
pub fn search_open1(config: &SearchConfig) -> SearchReport {
    assert!(
        (1..=SAMPLED_MAX_ORDER).contains(&config.max_order),
        "max order must lie in 1..={SAMPLED_MAX_ORDER}"
    );
    let start = Instant::now();
    let mut report = SearchReport {
        max_order: config.max_order,
        budget: config.budget,
        seed: config.seed,
        ..Default::default()
    };
    let out_of_time = |report: &mut SearchReport| {
        let over = config
            .time_limit
            .is_some_and(|limit| start.elapsed() >= limit);
        report.stopped_by_time |= over;
        over
    };

    for m in 1..=config.max_order.min(EXHAUSTIVE_MAX_ORDER) {
        for s in associative_tables(m) {
            if report.tables_examined >= config.budget || out_of_time(&mut report) {
                return report;
            }
            examine(&s, &mut report);
            report.tables_examined += 1;
        }
    }
    if config.max_order <= EXHAUSTIVE_MAX_ORDER {
        return report;
    }
    let mut samplers: Vec<TableSampler> = ((EXHAUSTIVE_MAX_ORDER + 1)..=config.max_order)
        .map(|m| {
            TableSampler::new(
                m,
                config.seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            )
        })
        .collect();
    let mut turn = 0;
    let rotation = samplers.len();
    while report.tables_examined < config.budget && !out_of_time(&mut report) {
        let s = samplers[turn % rotation].sample();
        examine(&s, &mut report);
        report.tables_examined += 1;
        turn += 1;
    }
    report
}
