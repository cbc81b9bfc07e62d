//! The finite semigroup value every analysis consumes: indexed elements, a
//! total multiplication table and display names.
//!
//! `S¹` is never materialized. Set products that pass "through the
//! identity" treat the formal identity as a skip, which is how `XS¹Y` and
//! `a ≤_R b` are evaluated whether or not `S` has an identity of its own.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green::GreenCache;
use crate::rewriting::{split_declaration, ParseError};

/// Orders up to this size get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;
const SAMPLED_TRIPLES: usize = 1_000_000;
const SAMPLING_SEED: u64 = 0x5eed_a550c;

/// A set of element indices.
pub type ElementSet = BTreeSet<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("a semigroup needs at least one element")]
    Empty,
    #[error("expected {expected} entries, found {found}{}", row.map(|r| format!(" in row {r}")).unwrap_or_default())]
    DimensionMismatch {
        expected: usize,
        found: usize,
        row: Option<usize>,
    },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("not associative: ({a}{b}){c} != {a}({b}{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("subset is not closed: {a}·{b} falls outside it")]
    NotClosed { a: String, b: String },
    #[error("subset is not a {0}")]
    NotOfKind(SubsetKind),
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("element index {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("set product with an empty operand")]
    EmptyOperand,
    #[error("no element named `{0}`")]
    UnknownName(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
    names: Vec<String>,
    identity: Option<usize>,
    pub(crate) green: GreenCache,
}

impl PartialEq for FiniteSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.names == other.names
    }
}

impl Eq for FiniteSemigroup {}

impl FiniteSemigroup {
    /// Builds a semigroup from row-major products (`rows[a][b] = a·b`),
    /// rejecting non-associative tables with a witness triple.
    pub fn from_table(names: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self, SemigroupError> {
        let m = names.len();
        if m == 0 {
            return Err(SemigroupError::Empty);
        }
        if rows.len() != m {
            return Err(SemigroupError::DimensionMismatch {
                expected: m,
                found: rows.len(),
                row: None,
            });
        }
        let mut table = Vec::with_capacity(m * m);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(SemigroupError::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                    row: Some(r),
                });
            }
            for (c, &value) in row.iter().enumerate() {
                if value >= m {
                    return Err(SemigroupError::EntryOutOfRange {
                        row: r,
                        col: c,
                        value,
                    });
                }
            }
            table.extend_from_slice(row);
        }
        let s = Self::from_parts(names, table)?;
        s.check_associative()?;
        Ok(s)
    }

    /// Builds the table from a product function over `0..names.len()`.
    pub fn from_fn<F>(names: Vec<String>, mul: F) -> Result<Self, SemigroupError>
    where
        F: Fn(usize, usize) -> usize,
    {
        let m = names.len();
        let rows = (0..m)
            .map(|a| (0..m).map(|b| mul(a, b)).collect())
            .collect();
        Self::from_table(names, rows)
    }

    /// Skips the associativity check; for tables inherited from an
    /// associative parent.
    fn from_parts(names: Vec<String>, table: Vec<usize>) -> Result<Self, SemigroupError> {
        let mut seen = HashSet::with_capacity(names.len());
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(SemigroupError::DuplicateName(n.clone()));
            }
        }
        let order = names.len();
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x));
        Ok(FiniteSemigroup {
            order,
            table,
            names,
            identity,
            green: GreenCache::default(),
        })
    }

    fn check_associative(&self) -> Result<(), SemigroupError> {
        let m = self.order;
        let witness = |a: usize, b: usize, c: usize| SemigroupError::NotAssociative {
            a: self.names[a].clone(),
            b: self.names[b].clone(),
            c: self.names[c].clone(),
        };
        if m <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    let ab = self.table[a * m + b];
                    for c in 0..m {
                        if self.table[ab * m + c] != self.table[a * m + self.table[b * m + c]] {
                            return Err(witness(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                    rng.gen_range(0..m),
                );
                if self.product(self.product(a, b), c) != self.product(a, self.product(b, c)) {
                    return Err(witness(a, b, c));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize, SemigroupError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SemigroupError::UnknownName(name.to_string()))
    }

    /// Index of the two-sided identity, when one exists.
    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn all(&self) -> ElementSet {
        self.elements().collect()
    }

    pub fn names_of<'a>(&'a self, set: impl IntoIterator<Item = &'a usize>) -> Vec<&'a str> {
        set.into_iter().map(|&i| self.name(i)).collect()
    }

    fn check_set(&self, set: &ElementSet) -> Result<(), SemigroupError> {
        if set.is_empty() {
            return Err(SemigroupError::EmptyOperand);
        }
        match set.iter().next_back() {
            Some(&last) if last >= self.order => Err(SemigroupError::ElementOutOfRange(last)),
            _ => Ok(()),
        }
    }

    /// `X·Y`, or `X·S¹·Y = XY ∪ XSY` when `through_identity` is set.
    pub fn product_of_sets(
        &self,
        x: &ElementSet,
        y: &ElementSet,
        through_identity: bool,
    ) -> Result<ElementSet, SemigroupError> {
        self.check_set(x)?;
        self.check_set(y)?;
        let mut out = ElementSet::new();
        let mut left: Vec<usize> = x.iter().copied().collect();
        if through_identity {
            let xs: ElementSet = x
                .iter()
                .flat_map(|&a| self.row(a).iter().copied())
                .collect();
            left.extend(xs);
        }
        for a in left {
            for &b in y {
                out.insert(self.product(a, b));
            }
        }
        Ok(out)
    }

    /// Copies the subsemigroup on `members` into a standalone semigroup.
    /// Local index `i` corresponds to the `i`-th smallest member.
    pub fn restrict(&self, members: &ElementSet) -> Result<Restriction, SemigroupError> {
        if members.is_empty() {
            return Err(SemigroupError::EmptySubset);
        }
        if let Some(&last) = members.iter().next_back() {
            if last >= self.order {
                return Err(SemigroupError::ElementOutOfRange(last));
            }
        }
        let to_parent: Vec<usize> = members.iter().copied().collect();
        let mut local = vec![usize::MAX; self.order];
        for (i, &p) in to_parent.iter().enumerate() {
            local[p] = i;
        }
        let k = to_parent.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &to_parent {
            for &b in &to_parent {
                let ab = self.product(a, b);
                if local[ab] == usize::MAX {
                    return Err(SemigroupError::NotClosed {
                        a: self.names[a].clone(),
                        b: self.names[b].clone(),
                    });
                }
                table.push(local[ab]);
            }
        }
        let names = to_parent.iter().map(|&p| self.names[p].clone()).collect();
        Ok(Restriction {
            semigroup: FiniteSemigroup::from_parts(names, table)?,
            to_parent,
        })
    }

    /// Serializes to the table text format.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("order: {}\nnames:", self.order);
        for n in &self.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for a in self.elements() {
            let row: Vec<String> = self.row(a).iter().map(usize::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A subsemigroup copied out of its parent, with the way back.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub semigroup: FiniteSemigroup,
    pub to_parent: Vec<usize>,
}

impl Restriction {
    pub fn local_index(&self, parent_index: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent_index).ok()
    }
}

impl FromStr for FiniteSemigroup {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut order: Option<usize> = None;
        let mut names: Option<Vec<String>> = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        let mut last_line = 0;
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            last_line = line_no;
            let Some((key, value, col)) = split_declaration(raw) else {
                continue;
            };
            if order.is_none() {
                if key != "order" {
                    return Err(ParseError::new(line_no, 1, "expected `order: m`"));
                }
                let m = value.parse::<usize>().map_err(|_| {
                    ParseError::new(line_no, col + 1, "order must be a positive integer")
                })?;
                if m == 0 {
                    return Err(ParseError::new(
                        line_no,
                        col + 1,
                        "order must be a positive integer",
                    ));
                }
                order = Some(m);
                continue;
            }
            let m = order.unwrap_or_default();
            if names.is_none() {
                if key != "names" {
                    return Err(ParseError::new(line_no, 1, "expected `names: ...`"));
                }
                let list: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                if list.len() != m {
                    return Err(ParseError::new(
                        line_no,
                        col + 1,
                        format!("expected {m} names, found {}", list.len()),
                    ));
                }
                names = Some(list);
                continue;
            }
            // Table rows have no key; reparse the raw line without comments.
            let body = raw.split('#').next().unwrap_or_default();
            let mut row = Vec::with_capacity(m);
            let mut offset = 0;
            for token in body.split_whitespace() {
                let start = body[offset..].find(token).map_or(offset, |i| offset + i);
                offset = start + token.len();
                let column = body[..start].chars().count() + 1;
                let v = token.parse::<usize>().map_err(|_| {
                    ParseError::new(line_no, column, format!("bad index `{token}`"))
                })?;
                if v >= m {
                    return Err(ParseError::new(
                        line_no,
                        column,
                        format!("index {v} out of range"),
                    ));
                }
                row.push(v);
            }
            if row.len() != m {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("expected {m} entries, found {}", row.len()),
                ));
            }
            if rows.len() == m {
                return Err(ParseError::new(line_no, 1, "too many table rows"));
            }
            rows.push(row);
        }
        let Some(m) = order else {
            return Err(ParseError::new(1, 1, "missing `order:` declaration"));
        };
        let Some(names) = names else {
            return Err(ParseError::new(
                last_line.max(1),
                1,
                "missing `names:` declaration",
            ));
        };
        if rows.len() != m {
            return Err(ParseError::new(
                last_line.max(1),
                1,
                format!("expected {m} table rows, found {}", rows.len()),
            ));
        }
        FiniteSemigroup::from_table(names, rows)
            .map_err(|e| ParseError::new(last_line.max(1), 1, e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetKind {
    BiIdeal,
    RightIdeal,
    LeftIdeal,
    TwoSidedIdeal,
    Subsemigroup,
}

impl SubsetKind {
    pub const IDEAL_KINDS: [SubsetKind; 4] = [
        SubsetKind::BiIdeal,
        SubsetKind::RightIdeal,
        SubsetKind::LeftIdeal,
        SubsetKind::TwoSidedIdeal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SubsetKind::BiIdeal => "bi_ideal",
            SubsetKind::RightIdeal => "right_ideal",
            SubsetKind::LeftIdeal => "left_ideal",
            SubsetKind::TwoSidedIdeal => "two_sided_ideal",
            SubsetKind::Subsemigroup => "subsemigroup",
        }
    }
}

impl fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SubsetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bi" | "bi_ideal" => Ok(SubsetKind::BiIdeal),
            "right" | "right_ideal" => Ok(SubsetKind::RightIdeal),
            "left" | "left_ideal" => Ok(SubsetKind::LeftIdeal),
            "two_sided" | "two_sided_ideal" | "ideal" => Ok(SubsetKind::TwoSidedIdeal),
            "sub" | "subsemigroup" => Ok(SubsetKind::Subsemigroup),
            other => Err(format!("unknown subset kind `{other}`")),
        }
    }
}

/// A subset of a semigroup together with the kind of substructure it is.
/// Construction verifies both multiplicative closure and the kind.
#[derive(Clone, Debug)]
pub struct SubsetHandle {
    parent: Arc<FiniteSemigroup>,
    members: ElementSet,
    kind: SubsetKind,
}

impl SubsetHandle {
    pub fn new(
        parent: Arc<FiniteSemigroup>,
        members: ElementSet,
        kind: SubsetKind,
    ) -> Result<Self, SemigroupError> {
        if members.is_empty() {
            return Err(SemigroupError::EmptySubset);
        }
        if let Some(&last) = members.iter().next_back() {
            if last >= parent.order() {
                return Err(SemigroupError::ElementOutOfRange(last));
            }
        }
        for &a in &members {
            for &b in &members {
                if !members.contains(&parent.product(a, b)) {
                    return Err(SemigroupError::NotClosed {
                        a: parent.name(a).to_string(),
                        b: parent.name(b).to_string(),
                    });
                }
            }
        }
        if !crate::ideals::is_kind(&parent, &members, kind) {
            return Err(SemigroupError::NotOfKind(kind));
        }
        Ok(SubsetHandle {
            parent,
            members,
            kind,
        })
    }

    /// The whole semigroup, which is a substructure of every kind.
    pub fn whole(parent: Arc<FiniteSemigroup>, kind: SubsetKind) -> Self {
        let members = parent.all();
        SubsetHandle {
            parent,
            members,
            kind,
        }
    }

    pub fn parent(&self) -> &FiniteSemigroup {
        &self.parent
    }

    pub fn parent_arc(&self) -> &Arc<FiniteSemigroup> {
        &self.parent
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn kind(&self) -> SubsetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(&a)
    }

    /// The handle viewed as a semigroup in its own right.
    pub fn restrict(&self) -> Restriction {
        self.parent
            .restrict(&self.members)
            .expect("handle members are closed by construction")
    }

    /// The same members tagged with another kind, if they qualify.
    pub fn with_kind(&self, kind: SubsetKind) -> Result<Self, SemigroupError> {
        SubsetHandle::new(self.parent.clone(), self.members.clone(), kind)
    }

    pub fn member_names(&self) -> Vec<&str> {
        self.parent.names_of(&self.members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{brandt_example, left_zero, trivial};

    fn set(xs: &[usize]) -> ElementSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn left_zero_has_no_identity() {
        let s = left_zero(2);
        assert_eq!(s.order(), 2);
        assert_eq!(s.identity(), None);
        assert_eq!(s.product(1, 0), 1);
    }

    #[test]
    fn trivial_has_identity() {
        let s = trivial();
        assert_eq!(s.order(), 1);
        assert_eq!(s.identity(), Some(0));
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["a".to_string(), "b".to_string()];
        // (aa)b = bb = a but a(ab) = aa = b
        let err =
            FiniteSemigroup::from_table(names.clone(), vec![vec![1, 0], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, SemigroupError::NotAssociative { .. }));
        let err = FiniteSemigroup::from_table(names.clone(), vec![vec![0, 0]]).unwrap_err();
        assert!(matches!(err, SemigroupError::DimensionMismatch { .. }));
        let err =
            FiniteSemigroup::from_table(names.clone(), vec![vec![0, 2], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, SemigroupError::EntryOutOfRange { .. }));
        let err =
            FiniteSemigroup::from_table(vec!["a".into(), "a".into()], vec![vec![0, 0], vec![0, 0]])
                .unwrap_err();
        assert_eq!(err, SemigroupError::DuplicateName("a".into()));
        assert_eq!(
            FiniteSemigroup::from_table(vec![], vec![]).unwrap_err(),
            SemigroupError::Empty
        );
    }

    #[test]
    fn set_products() {
        let lz = left_zero(2);
        assert_eq!(
            lz.product_of_sets(&set(&[0]), &set(&[0]), true).unwrap(),
            set(&[0])
        );
        assert_eq!(
            lz.product_of_sets(&set(&[]), &set(&[0]), true),
            Err(SemigroupError::EmptyOperand)
        );

        let (s, _) = brandt_example();
        let a = s.element("(1,1)").unwrap();
        // {(1,1)}·S¹ is {(1,1)} ∪ (1,1)S
        let mut right = set(&[a]);
        right.extend(s.product_of_sets(&set(&[a]), &s.all(), false).unwrap());
        let expected: ElementSet = ["(1,1)", "(1,2)", "0"]
            .iter()
            .map(|n| s.element(n).unwrap())
            .collect();
        assert_eq!(right, expected);
    }

    #[test]
    fn restriction_keeps_products() {
        let (s, a) = brandt_example();
        let r = a.restrict();
        assert_eq!(r.semigroup.order(), 3);
        for x in r.semigroup.elements() {
            for y in r.semigroup.elements() {
                assert_eq!(
                    r.to_parent[r.semigroup.product(x, y)],
                    s.product(r.to_parent[x], r.to_parent[y])
                );
            }
        }
        let whole = s.restrict(&s.all()).unwrap();
        assert_eq!(whole.semigroup, *s);

        let (i11, i22) = (s.element("(1,1)").unwrap(), s.element("(2,2)").unwrap());
        let err = s.restrict(&set(&[i11, i22])).unwrap_err();
        assert!(matches!(err, SemigroupError::NotClosed { .. }));
    }

    #[test]
    fn handle_checks_kind() {
        let (s, _) = brandt_example();
        let i11 = s.element("(1,1)").unwrap();
        let zero = s.element("0").unwrap();
        // {(1,1), 0} is a subsemigroup but not a right ideal.
        let members = set(&[i11, zero]);
        assert!(SubsetHandle::new(s.clone(), members.clone(), SubsetKind::Subsemigroup).is_ok());
        assert_eq!(
            SubsetHandle::new(s.clone(), members, SubsetKind::RightIdeal).unwrap_err(),
            SemigroupError::NotOfKind(SubsetKind::RightIdeal)
        );
        assert_eq!(
            SubsetHandle::new(s, set(&[]), SubsetKind::BiIdeal).unwrap_err(),
            SemigroupError::EmptySubset
        );
    }

    #[test]
    fn table_text_round_trip() {
        let (s, _) = brandt_example();
        let text = s.to_table_text();
        let back: FiniteSemigroup = text.parse().unwrap();
        assert_eq!(back, *s);
    }

    #[test]
    fn table_text_errors() {
        let err = "order: 2\nnames: a b\n0 0\n0 5\n"
            .parse::<FiniteSemigroup>()
            .unwrap_err();
        assert_eq!((err.line, err.column), (4, 3));
        let err = "names: a\n".parse::<FiniteSemigroup>().unwrap_err();
        assert_eq!(err.line, 1);
        let err = "order: 1\nnames: a\n"
            .parse::<FiniteSemigroup>()
            .unwrap_err();
        assert!(err.message.contains("rows"));
        let err = "order: 2\nnames: a b\n1 0\n0 0\n"
            .parse::<FiniteSemigroup>()
            .unwrap_err();
        assert!(err.message.contains("associative"));
    }

    #[test]
    fn subset_kind_names() {
        for k in SubsetKind::IDEAL_KINDS {
            assert_eq!(k.as_str().parse::<SubsetKind>().unwrap(), k);
        }
        assert_eq!("bi".parse::<SubsetKind>().unwrap(), SubsetKind::BiIdeal);
        assert!("quasi".parse::<SubsetKind>().is_err());
    }
}
