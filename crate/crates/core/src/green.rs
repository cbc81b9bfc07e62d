//! Green's preorders and the posets of their classes.
//!
//! Preorders are read straight off the multiplication table: `a ≤_R b` iff
//! `a = b` or `a` lies in row `b`, and dually for `L` with columns. `≤_J`
//! is the composite `≤_L ∘ ≤_R` and `H` is the meet of `R` and `L`. Each
//! preorder is computed once per semigroup and cached.
//!
//! Heights count classes, so a poset with a single class has height 1.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::semigroup::{ElementSet, FiniteSemigroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GreensRelation {
    R,
    L,
    J,
    H,
}

impl GreensRelation {
    pub const ALL: [GreensRelation; 4] = [
        GreensRelation::R,
        GreensRelation::L,
        GreensRelation::J,
        GreensRelation::H,
    ];

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for GreensRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GreensRelation::R => "R",
            GreensRelation::L => "L",
            GreensRelation::J => "J",
            GreensRelation::H => "H",
        };
        f.write_str(s)
    }
}

impl FromStr for GreensRelation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "R" | "r" => Ok(GreensRelation::R),
            "L" | "l" => Ok(GreensRelation::L),
            "J" | "j" => Ok(GreensRelation::J),
            "H" | "h" => Ok(GreensRelation::H),
            other => Err(format!(
                "unknown Green's relation `{other}` (expected R, L, J or H)"
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreenError {
    #[error("internal error: {0}")]
    Internal(String),
}

/// `below[b]` is the set of all `a` with `a ≤ b`.
type Preorder = Arc<Vec<BitSet>>;

#[derive(Clone, Debug, Default)]
pub(crate) struct GreenCache {
    below: [OnceLock<Preorder>; 4],
}

fn preorder(s: &FiniteSemigroup, relation: GreensRelation) -> Preorder {
    s.green.below[relation.slot()]
        .get_or_init(|| Arc::new(compute_preorder(s, relation)))
        .clone()
}

fn compute_preorder(s: &FiniteSemigroup, relation: GreensRelation) -> Vec<BitSet> {
    let m = s.order();
    match relation {
        GreensRelation::R => s
            .elements()
            .map(|b| BitSet::from_indices(m, std::iter::once(b).chain(s.row(b).iter().copied())))
            .collect(),
        GreensRelation::L => s
            .elements()
            .map(|b| {
                BitSet::from_indices(
                    m,
                    std::iter::once(b).chain(s.elements().map(|x| s.product(x, b))),
                )
            })
            .collect(),
        GreensRelation::J => {
            let right = preorder(s, GreensRelation::R);
            let left = preorder(s, GreensRelation::L);
            s.elements()
                .map(|b| {
                    let mut set = BitSet::new(m);
                    for c in right[b].iter() {
                        set.union_with(&left[c]);
                    }
                    set
                })
                .collect()
        }
        GreensRelation::H => {
            let right = preorder(s, GreensRelation::R);
            let left = preorder(s, GreensRelation::L);
            s.elements()
                .map(|b| {
                    let mut set = right[b].clone();
                    set.intersect_with(&left[b]);
                    set
                })
                .collect()
        }
    }
}

/// `a ≤ b` under the given Green's preorder.
pub fn leq(s: &FiniteSemigroup, a: usize, b: usize, relation: GreensRelation) -> bool {
    preorder(s, relation)[b].contains(a)
}

/// `a < b`: `a ≤ b` and the two are not related.
pub fn less(s: &FiniteSemigroup, a: usize, b: usize, relation: GreensRelation) -> bool {
    let p = preorder(s, relation);
    p[b].contains(a) && !p[a].contains(b)
}

pub fn related(s: &FiniteSemigroup, a: usize, b: usize, relation: GreensRelation) -> bool {
    let p = preorder(s, relation);
    p[b].contains(a) && p[a].contains(b)
}

/// Classes of a Green's relation with the induced partial order.
#[derive(Clone, Debug)]
pub struct ClassPoset {
    relation: GreensRelation,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// Classes strictly below each class.
    below: Vec<BitSet>,
    lower_covers: Vec<Vec<usize>>,
    /// Linear extension, bottom first.
    linear: Vec<usize>,
    /// Longest chain with the class on top.
    depth: Vec<usize>,
    /// Longest chain with the class at the bottom.
    rise: Vec<usize>,
}

pub fn class_poset(s: &FiniteSemigroup, relation: GreensRelation) -> ClassPoset {
    let p = preorder(s, relation);
    let m = s.order();

    let mut class_of = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..m {
        if class_of[a] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<usize> = (a..m)
            .filter(|&b| p[b].contains(a) && p[a].contains(b))
            .collect();
        for &b in &members {
            class_of[b] = id;
        }
        classes.push(members);
    }

    let k = classes.len();
    let below: Vec<BitSet> = classes
        .iter()
        .enumerate()
        .map(|(x, members)| {
            BitSet::from_indices(
                k,
                p[members[0]]
                    .iter()
                    .map(|a| class_of[a])
                    .filter(|&y| y != x),
            )
        })
        .collect();

    // Strictly-below sets grow along the order, so sorting by their size
    // gives a linear extension.
    let mut linear: Vec<usize> = (0..k).collect();
    linear.sort_by_key(|&x| (below[x].count(), x));

    let mut depth = vec![1; k];
    for &x in &linear {
        depth[x] = 1 + below[x].iter().map(|y| depth[y]).max().unwrap_or(0);
    }
    let mut rise = vec![1; k];
    for &x in linear.iter().rev() {
        for y in below[x].iter() {
            rise[y] = rise[y].max(rise[x] + 1);
        }
    }

    let lower_covers = (0..k)
        .map(|x| {
            below[x]
                .iter()
                .filter(|&y| !below[x].iter().any(|z| below[z].contains(y)))
                .collect()
        })
        .collect();

    ClassPoset {
        relation,
        classes,
        class_of,
        below,
        lower_covers,
        linear,
        depth,
        rise,
    }
}

impl ClassPoset {
    pub fn relation(&self) -> GreensRelation {
        self.relation
    }

    /// Classes ordered by smallest member; members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    /// Class `x` lies strictly below class `y`.
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y].contains(x)
    }

    /// Classes covered by `x`, ascending.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    /// Number of covering edges.
    pub fn edge_count(&self) -> usize {
        self.lower_covers.iter().map(Vec::len).sum()
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Longest chain whose top is class `x`.
    pub fn depth(&self, x: usize) -> usize {
        self.depth[x]
    }

    /// Longest chain whose bottom is class `x`.
    pub fn rise(&self, x: usize) -> usize {
        self.rise[x]
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.below[x].count() == 0)
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| !(0..self.len()).any(|y| self.below[y].contains(x)))
            .collect()
    }

    pub fn is_chain(&self) -> bool {
        self.height() == self.len()
    }

    /// Height of the subposet induced by the classes satisfying `keep`.
    pub fn longest_chain_among<F>(&self, keep: F) -> usize
    where
        F: Fn(usize) -> bool,
    {
        let mut best = vec![0usize; self.len()];
        for &x in &self.linear {
            if keep(x) {
                best[x] = 1 + self.below[x].iter().map(|y| best[y]).max().unwrap_or(0);
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Graphviz rendering: one node per class labelled with its members,
    /// one edge per covering pair drawn from the larger class down.
    pub fn to_dot(&self, s: &FiniteSemigroup) -> String {
        let mut out = format!(
            "digraph \"{}-classes\" {{\n  rankdir=TB;\n  node [shape=box];\n",
            self.relation
        );
        for (x, members) in self.classes.iter().enumerate() {
            let label = format!("{{{}}}", s.names_of(members).join(", "));
            out.push_str(&format!("  c{x} [label=\"{}\"];\n", escape_dot(&label)));
        }
        for (x, covers) in self.lower_covers.iter().enumerate() {
            for y in covers {
                out.push_str(&format!("  c{x} -> c{y};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn height(s: &FiniteSemigroup, relation: GreensRelation) -> usize {
    class_poset(s, relation).height()
}

/// The minimal two-sided ideal and how it splits into one-sided ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelInfo {
    pub members: ElementSet,
    pub is_completely_simple: bool,
    pub minimal_right_ideals: Vec<ElementSet>,
    pub minimal_left_ideals: Vec<ElementSet>,
}

pub fn kernel(s: &FiniteSemigroup) -> Result<KernelInfo, GreenError> {
    let j = class_poset(s, GreensRelation::J);
    let minimal_j = j.minimal();
    let [k] = minimal_j[..] else {
        return Err(GreenError::Internal(format!(
            "expected one minimal J-class, found {}",
            minimal_j.len()
        )));
    };
    let members: ElementSet = j.classes()[k].iter().copied().collect();
    if !crate::ideals::is_kind(s, &members, crate::semigroup::SubsetKind::TwoSidedIdeal) {
        return Err(GreenError::Internal(
            "minimal J-class is not an ideal".into(),
        ));
    }

    let minimal_classes = |relation: GreensRelation, kind| -> Result<Vec<ElementSet>, GreenError> {
        let poset = class_poset(s, relation);
        poset
            .minimal()
            .into_iter()
            .map(|x| {
                let set: ElementSet = poset.classes()[x].iter().copied().collect();
                if crate::ideals::is_kind(s, &set, kind) {
                    Ok(set)
                } else {
                    Err(GreenError::Internal(format!(
                        "minimal {relation}-class is not a {kind}"
                    )))
                }
            })
            .collect()
    };
    let minimal_right_ideals =
        minimal_classes(GreensRelation::R, crate::semigroup::SubsetKind::RightIdeal)?;
    let minimal_left_ideals =
        minimal_classes(GreensRelation::L, crate::semigroup::SubsetKind::LeftIdeal)?;

    let union = |ideals: &[ElementSet]| ideals.iter().flatten().copied().collect::<ElementSet>();
    let is_completely_simple = !minimal_right_ideals.is_empty()
        && !minimal_left_ideals.is_empty()
        && union(&minimal_right_ideals) == members
        && union(&minimal_left_ideals) == members;

    Ok(KernelInfo {
        members,
        is_completely_simple,
        minimal_right_ideals,
        minimal_left_ideals,
    })
}

pub fn is_regular(s: &FiniteSemigroup, a: usize) -> bool {
    s.elements().any(|b| s.product(s.product(a, b), a) == a)
}

pub fn regular_elements(s: &FiniteSemigroup) -> ElementSet {
    s.elements().filter(|&a| is_regular(s, a)).collect()
}

pub fn idempotents(s: &FiniteSemigroup) -> ElementSet {
    s.elements().filter(|&e| s.product(e, e) == e).collect()
}

/// `a ∈ aS`.
pub fn has_local_right_identity(s: &FiniteSemigroup, a: usize) -> bool {
    s.row(a).contains(&a)
}

/// `a ∈ aT` with `T` the given member set, products taken in `s`.
pub fn has_local_right_identity_in(s: &FiniteSemigroup, members: &ElementSet, a: usize) -> bool {
    members.iter().any(|&b| s.product(a, b) == a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseStructure {
    NotRegular,
    RegularNotInverse,
    /// Inverse, with the height of the semilattice of idempotents.
    Inverse {
        idempotent_height: usize,
    },
}

pub fn inverse_structure(s: &FiniteSemigroup) -> InverseStructure {
    let mut unique = true;
    for a in s.elements() {
        let inverses = s
            .elements()
            .filter(|&b| s.product(s.product(a, b), a) == a && s.product(s.product(b, a), b) == b)
            .count();
        match inverses {
            0 => return InverseStructure::NotRegular,
            1 => {}
            _ => unique = false,
        }
    }
    if !unique {
        return InverseStructure::RegularNotInverse;
    }

    // Natural order on idempotents: e ≤ f iff ef = fe = e.
    let e: Vec<usize> = idempotents(s).into_iter().collect();
    let le = |x: usize, y: usize| s.product(x, y) == x && s.product(y, x) == x;
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by_key(|&i| e.iter().filter(|&&f| le(f, e[i])).count());
    let mut best = vec![1usize; e.len()];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[..pos] {
            if e[i] != e[j] && le(e[j], e[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    InverseStructure::Inverse {
        idempotent_height: best.into_iter().max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use crate::semigroup::FiniteSemigroup;
    use GreensRelation::*;

    fn el(s: &FiniteSemigroup, name: &str) -> usize {
        s.element(name).unwrap()
    }

    #[test]
    fn reflexive() {
        let s = full_transformation_monoid(2).unwrap();
        for r in GreensRelation::ALL {
            for a in s.elements() {
                assert!(leq(&s, a, a, r));
            }
        }
    }

    #[test]
    fn brandt_example_orders() {
        let (s, _) = brandt_example();
        assert!(leq(&s, el(&s, "0"), el(&s, "(1,1)"), R));
        assert!(!leq(&s, el(&s, "(1,1)"), el(&s, "(2,2)"), R));
        let p = class_poset(&s, R);
        assert_eq!(p.len(), 3);
        assert_eq!(p.height(), 2);
        assert_eq!(p.maximal().len(), 2);
        let bottom = p.minimal();
        assert_eq!(bottom.len(), 1);
        assert_eq!(p.classes()[bottom[0]], vec![el(&s, "0")]);
    }

    #[test]
    fn left_family_x_squared_below_x() {
        let f = left_ideal_cs_family(2).unwrap();
        let s = &f.semigroup;
        let x = el(s, "x");
        let x2 = s.product(x, x);
        assert!(leq(s, x2, x, R));
        assert!(!leq(s, x, x2, R));
    }

    #[test]
    fn bi_family_poset_shape() {
        let f = bi_ideal_family(3).unwrap();
        let p = class_poset(&f.semigroup, R);
        // four chains of two classes over {0}
        assert_eq!(p.len(), 9);
        assert_eq!(p.height(), 3);
        assert_eq!(p.maximal().len(), 4);
        assert_eq!(p.minimal().len(), 1);
        for x in 0..p.len() {
            assert!(p.classes()[x].len() == 3 || p.classes()[x].len() == 1);
        }
        let x = el(&f.semigroup, "x");
        let top = p.class_of(x);
        let members: Vec<&str> = f.semigroup.names_of(&p.classes()[top]);
        assert_eq!(members, vec!["x", "xy", "xyz"]);
    }

    #[test]
    fn left_zero_is_antichain() {
        let s = left_zero(3);
        let p = class_poset(&s, R);
        assert_eq!(p.len(), 3);
        assert_eq!(p.height(), 1);
        assert_eq!(p.edge_count(), 0);
    }

    #[test]
    fn family_heights() {
        let f = left_ideal_cs_family(4).unwrap();
        assert_eq!(height(&f.semigroup, R), 4);
        let f = left_ideal_cs_family(3).unwrap();
        assert_eq!(height(&f.semigroup, J), 5);
        let t3 = full_transformation_monoid(3).unwrap();
        for r in GreensRelation::ALL {
            assert_eq!(height(&t3, r), 3, "relation {r}");
        }
    }

    #[test]
    fn kernels() {
        let f = bi_ideal_family(2).unwrap();
        let k = kernel(&f.semigroup).unwrap();
        assert_eq!(k.members, [el(&f.semigroup, "0")].into_iter().collect());
        assert!(k.is_completely_simple);

        let lz = left_zero(3);
        let k = kernel(&lz).unwrap();
        assert_eq!(k.members, lz.all());
        assert_eq!(k.minimal_right_ideals.len(), 3);
        assert!(k.minimal_right_ideals.iter().all(|m| m.len() == 1));
        assert!(k.is_completely_simple);
    }

    #[test]
    fn regularity() {
        let (s, _) = brandt_example();
        assert_eq!(regular_elements(&s), s.all());
        let n = null_semigroup(3);
        assert_eq!(regular_elements(&n), [el(&n, "0")].into_iter().collect());
        let g = cyclic_group(4);
        assert_eq!(regular_elements(&g), g.all());
    }

    #[test]
    fn local_right_identities() {
        let f = left_ideal_cs_family(3).unwrap();
        assert!(has_local_right_identity(
            &f.semigroup,
            el(&f.semigroup, "x")
        ));
        let n = null_semigroup(3);
        for a in n.elements().filter(|&a| n.name(a) != "0") {
            assert!(!has_local_right_identity(&n, a));
        }
        let t = full_transformation_monoid(2).unwrap();
        assert!(t.elements().all(|a| has_local_right_identity(&t, a)));
    }

    #[test]
    fn inverse_classification() {
        let (s, _) = brandt_example();
        assert_eq!(
            inverse_structure(&s),
            InverseStructure::Inverse {
                idempotent_height: 2
            }
        );
        let i3 = symmetric_inverse_monoid(3).unwrap();
        assert_eq!(
            inverse_structure(&i3),
            InverseStructure::Inverse {
                idempotent_height: 4
            }
        );
        assert_eq!(height(&i3, R), 4);
        assert_eq!(
            inverse_structure(&left_zero(2)),
            InverseStructure::RegularNotInverse
        );
        assert_eq!(
            inverse_structure(&null_semigroup(2)),
            InverseStructure::NotRegular
        );
    }

    #[test]
    fn dot_export_is_deterministic() {
        let s = left_zero(3);
        let dot = class_poset(&s, R).to_dot(&s);
        assert_eq!(dot, class_poset(&s, R).to_dot(&s));
        assert_eq!(dot.matches(" [label=").count(), 3);
        assert!(!dot.contains("->"));

        let (b, _) = brandt_example();
        let dot = class_poset(&b, R).to_dot(&b);
        assert!(dot.contains("c0 [label=\"{(1,1), (1,2)}\"];"));
        assert!(dot.contains("c0 -> c2;"));
        assert!(dot.contains("c1 -> c2;"));
    }

    #[test]
    fn relation_parsing() {
        assert_eq!("J".parse::<GreensRelation>().unwrap(), J);
        assert!("D".parse::<GreensRelation>().is_err());
    }
}
