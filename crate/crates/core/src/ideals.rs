//! Bi-ideals and one- and two-sided ideals: recognition, generation,
//! relative heights and the height bounds in terms of the chain parameter.
//!
//! The relative height of a substructure `B` is the `R`-height of `B` as a
//! semigroup in its own right, computed on the restricted table. It is
//! never obtained by restricting `≤_S`, because the two orders can differ.
//!
//! The chain parameter `n` is the length of the longest chain of
//! `R_S`-classes that meet `B` (bi-ideals, left ideals) or lie inside it
//! (right and two-sided ideals).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green::{self, GreensRelation};
use crate::semigroup::{ElementSet, FiniteSemigroup, SemigroupError, SubsetHandle, SubsetKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("generating set must be non-empty")]
    EmptyGeneratingSet,
    #[error("no height bound applies to a {0}")]
    NoBound(SubsetKind),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Whether `members` is a substructure of the given kind.
///
/// bi: `MS¹M ⊆ M`; right: `MS ⊆ M`; left: `SM ⊆ M`; two-sided: both;
/// subsemigroup: `MM ⊆ M`.
pub fn is_kind(s: &FiniteSemigroup, members: &ElementSet, kind: SubsetKind) -> bool {
    if members.is_empty() {
        return false;
    }
    let inside = |x: usize| members.contains(&x);
    let right = || members.iter().all(|&a| s.row(a).iter().all(|&x| inside(x)));
    let left = || {
        members
            .iter()
            .all(|&a| s.elements().all(|t| inside(s.product(t, a))))
    };
    match kind {
        SubsetKind::RightIdeal => right(),
        SubsetKind::LeftIdeal => left(),
        SubsetKind::TwoSidedIdeal => right() && left(),
        SubsetKind::Subsemigroup => members
            .iter()
            .all(|&a| members.iter().all(|&b| inside(s.product(a, b)))),
        SubsetKind::BiIdeal => members.iter().all(|&a| {
            members.iter().all(|&b| {
                inside(s.product(a, b)) && s.row(a).iter().all(|&t| inside(s.product(t, b)))
            })
        }),
    }
}

/// The smallest substructure of the given kind containing `generators`.
///
/// right: `X ∪ XS`; left: `X ∪ SX`; two-sided: `X ∪ XS ∪ SX ∪ SXS`;
/// bi: `X ∪ XS¹X`; subsemigroup: closure under products.
pub fn generate(
    s: &Arc<FiniteSemigroup>,
    generators: &ElementSet,
    kind: SubsetKind,
) -> Result<SubsetHandle, IdealError> {
    if generators.is_empty() {
        return Err(IdealError::EmptyGeneratingSet);
    }
    if let Some(&last) = generators.iter().next_back() {
        if last >= s.order() {
            return Err(SemigroupError::ElementOutOfRange(last).into());
        }
    }
    let all = s.all();
    let mut members = generators.clone();
    match kind {
        SubsetKind::RightIdeal => members.extend(s.product_of_sets(generators, &all, false)?),
        SubsetKind::LeftIdeal => members.extend(s.product_of_sets(&all, generators, false)?),
        SubsetKind::TwoSidedIdeal => {
            let xs = s.product_of_sets(generators, &all, false)?;
            members.extend(s.product_of_sets(&all, generators, false)?);
            members.extend(s.product_of_sets(&all, &xs, false)?);
            members.extend(xs);
        }
        SubsetKind::BiIdeal => members.extend(s.product_of_sets(generators, generators, true)?),
        SubsetKind::Subsemigroup => {
            let mut frontier: Vec<usize> = members.iter().copied().collect();
            while !frontier.is_empty() {
                let mut fresh = Vec::new();
                for &a in &frontier {
                    let snapshot: Vec<usize> = members.iter().copied().collect();
                    for b in snapshot {
                        for p in [s.product(a, b), s.product(b, a)] {
                            if members.insert(p) {
                                fresh.push(p);
                            }
                        }
                    }
                }
                frontier = fresh;
            }
        }
    }
    SubsetHandle::new(s.clone(), members, kind).map_err(|e| match e {
        SemigroupError::NotOfKind(k) => IdealError::Internal(format!("generated set is not a {k}")),
        other => other.into(),
    })
}

/// `H_R` of the handle viewed as a semigroup.
pub fn relative_height(handle: &SubsetHandle) -> usize {
    green::height(&handle.restrict().semigroup, GreensRelation::R)
}

/// Which `R_S`-classes count toward the chain parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainScope {
    /// Classes meeting the subset.
    Intersecting,
    /// Classes contained in the subset.
    Contained,
}

impl ChainScope {
    pub fn for_kind(kind: SubsetKind) -> Self {
        match kind {
            SubsetKind::RightIdeal | SubsetKind::TwoSidedIdeal => ChainScope::Contained,
            SubsetKind::BiIdeal | SubsetKind::LeftIdeal | SubsetKind::Subsemigroup => {
                ChainScope::Intersecting
            }
        }
    }
}

/// Longest chain of `R_S`-classes in the given scope, counted in classes.
pub fn chain_param_in(s: &FiniteSemigroup, members: &ElementSet, scope: ChainScope) -> usize {
    let poset = green::class_poset(s, GreensRelation::R);
    let keep = |x: usize| {
        let class = &poset.classes()[x];
        match scope {
            ChainScope::Intersecting => class.iter().any(|a| members.contains(a)),
            ChainScope::Contained => class.iter().all(|a| members.contains(a)),
        }
    };
    poset.longest_chain_among(keep)
}

/// The chain parameter matching the handle's kind.
pub fn chain_param(handle: &SubsetHandle) -> usize {
    chain_param_in(
        handle.parent(),
        handle.members(),
        ChainScope::for_kind(handle.kind()),
    )
}

/// The height bounds, each as a function of the chain parameter `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundTheorem {
    /// `H_R(B) ≤ 3n − 1`.
    BiIdeal,
    /// `H_R(B) ≤ 3n − 2` when the kernel is completely simple.
    BiIdealCsKernel,
    /// `H_R(A) ≤ 2n − 1`.
    RightIdeal,
    /// `H_R(A) ≤ 2n`.
    LeftIdeal,
    /// `H_R(A) ≤ 2n − 1` when the kernel is completely simple.
    LeftIdealCsKernel,
    /// `H_R(A) ≤ n`.
    TwoSidedIdeal,
}

impl BoundTheorem {
    pub const ALL: [BoundTheorem; 6] = [
        BoundTheorem::BiIdeal,
        BoundTheorem::BiIdealCsKernel,
        BoundTheorem::RightIdeal,
        BoundTheorem::LeftIdeal,
        BoundTheorem::LeftIdealCsKernel,
        BoundTheorem::TwoSidedIdeal,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BoundTheorem::BiIdeal => "bi-ideal",
            BoundTheorem::BiIdealCsKernel => "bi-ideal-cs",
            BoundTheorem::RightIdeal => "right-ideal",
            BoundTheorem::LeftIdeal => "left-ideal",
            BoundTheorem::LeftIdealCsKernel => "left-ideal-cs",
            BoundTheorem::TwoSidedIdeal => "two-sided-ideal",
        }
    }

    pub fn kind(self) -> SubsetKind {
        match self {
            BoundTheorem::BiIdeal | BoundTheorem::BiIdealCsKernel => SubsetKind::BiIdeal,
            BoundTheorem::RightIdeal => SubsetKind::RightIdeal,
            BoundTheorem::LeftIdeal | BoundTheorem::LeftIdealCsKernel => SubsetKind::LeftIdeal,
            BoundTheorem::TwoSidedIdeal => SubsetKind::TwoSidedIdeal,
        }
    }

    pub fn needs_cs_kernel(self) -> bool {
        matches!(
            self,
            BoundTheorem::BiIdealCsKernel | BoundTheorem::LeftIdealCsKernel
        )
    }

    pub fn bound(self, n: usize) -> usize {
        match self {
            BoundTheorem::BiIdeal => (3 * n).saturating_sub(1),
            BoundTheorem::BiIdealCsKernel => (3 * n).saturating_sub(2),
            BoundTheorem::RightIdeal | BoundTheorem::LeftIdealCsKernel => (2 * n).saturating_sub(1),
            BoundTheorem::LeftIdeal => 2 * n,
            BoundTheorem::TwoSidedIdeal => n,
        }
    }

    /// The sharpest bound for a kind.
    pub fn primary(kind: SubsetKind, cs_kernel: bool) -> Option<Self> {
        match (kind, cs_kernel) {
            (SubsetKind::BiIdeal, true) => Some(BoundTheorem::BiIdealCsKernel),
            (SubsetKind::BiIdeal, false) => Some(BoundTheorem::BiIdeal),
            (SubsetKind::RightIdeal, _) => Some(BoundTheorem::RightIdeal),
            (SubsetKind::LeftIdeal, true) => Some(BoundTheorem::LeftIdealCsKernel),
            (SubsetKind::LeftIdeal, false) => Some(BoundTheorem::LeftIdeal),
            (SubsetKind::TwoSidedIdeal, _) => Some(BoundTheorem::TwoSidedIdeal),
            (SubsetKind::Subsemigroup, _) => None,
        }
    }

    /// The weaker general bound that a completely simple kernel sharpens.
    pub fn general(kind: SubsetKind) -> Option<Self> {
        match kind {
            SubsetKind::BiIdeal => Some(BoundTheorem::BiIdeal),
            SubsetKind::LeftIdeal => Some(BoundTheorem::LeftIdeal),
            _ => None,
        }
    }
}

impl fmt::Display for BoundTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Verdict of one height bound on one substructure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: SubsetKind,
    pub theorem_id: String,
    pub relative_height: usize,
    pub chain_param: usize,
    pub bound: usize,
    pub cs_kernel: bool,
    pub pass: bool,
    pub tight: bool,
    /// Set on the general bounds, which a finite semigroup can never make
    /// tight because its kernel is always completely simple.
    pub sanity_only: bool,
}

impl BoundReport {
    fn build(
        theorem: BoundTheorem,
        relative_height: usize,
        chain_param: usize,
        cs_kernel: bool,
        sanity_only: bool,
    ) -> Self {
        let bound = theorem.bound(chain_param);
        BoundReport {
            kind: theorem.kind(),
            theorem_id: theorem.id().to_string(),
            relative_height,
            chain_param,
            bound,
            cs_kernel,
            pass: relative_height <= bound,
            tight: relative_height == bound,
            sanity_only,
        }
    }

    /// `key: value` lines, one fact per line.
    pub fn to_record(&self) -> String {
        let mut out = format!(
            "kind: {}\ntheorem_id: {}\nrelative_height: {}\nchain_param: {}\nbound: {}\ncs_kernel: {}\npass: {}\ntight: {}\n",
            self.kind,
            self.theorem_id,
            self.relative_height,
            self.chain_param,
            self.bound,
            self.cs_kernel,
            self.pass,
            self.tight
        );
        if self.sanity_only {
            out.push_str("note: sanity only\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn cs_kernel(s: &FiniteSemigroup) -> Result<bool, IdealError> {
    green::kernel(s)
        .map(|k| k.is_completely_simple)
        .map_err(|e| IdealError::Internal(e.to_string()))
}

/// The sharpest applicable bound for the handle's kind.
pub fn bound_report(handle: &SubsetHandle) -> Result<BoundReport, IdealError> {
    let cs = cs_kernel(handle.parent())?;
    let theorem =
        BoundTheorem::primary(handle.kind(), cs).ok_or(IdealError::NoBound(handle.kind()))?;
    Ok(BoundReport::build(
        theorem,
        relative_height(handle),
        chain_param(handle),
        cs,
        false,
    ))
}

/// The general bound for bi-ideals and left ideals, reported alongside the
/// completely-simple-kernel bound as a sanity line.
pub fn sanity_report(handle: &SubsetHandle) -> Result<Option<BoundReport>, IdealError> {
    let cs = cs_kernel(handle.parent())?;
    if !cs {
        return Ok(None);
    }
    Ok(BoundTheorem::general(handle.kind()).map(|theorem| {
        BoundReport::build(
            theorem,
            relative_height(handle),
            chain_param(handle),
            cs,
            true,
        )
    }))
}

/// A chain `b₁ <_B b₂ <_B … <_B b_k` in the handle with `b₁` in the kernel
/// of the parent, strictness taken in the handle's own `R`-order. Among all
/// such chains the lexicographically smallest by element index is returned.
pub fn chain_into_kernel(handle: &SubsetHandle, k: usize) -> Result<Vec<usize>, IdealError> {
    let restriction = handle.restrict();
    let local = &restriction.semigroup;
    let poset = green::class_poset(local, GreensRelation::R);
    if k == 0 || k > poset.height() {
        return Err(IdealError::PreconditionViolated(format!(
            "chain length {k} not in 1..={}",
            poset.height()
        )));
    }
    let kernel = green::kernel(handle.parent()).map_err(|e| IdealError::Internal(e.to_string()))?;

    let mut chain: Vec<usize> = Vec::with_capacity(k);
    let first = local.elements().find(|&b| {
        kernel.members.contains(&restriction.to_parent[b]) && poset.rise(poset.class_of(b)) >= k
    });
    let Some(mut current) = first else {
        return Err(IdealError::Internal(
            "no chain of the required length starts in the kernel".into(),
        ));
    };
    chain.push(current);
    for step in 1..k {
        let needed = k - step;
        let below = poset.class_of(current);
        current = local
            .elements()
            .find(|&c| {
                let cls = poset.class_of(c);
                poset.less(below, cls) && poset.rise(cls) >= needed
            })
            .ok_or_else(|| IdealError::Internal("chain extension vanished".into()))?;
        chain.push(current);
    }
    Ok(chain
        .into_iter()
        .map(|b| restriction.to_parent[b])
        .collect())
}
