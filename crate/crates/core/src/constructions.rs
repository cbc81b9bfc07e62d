//! Concrete semigroups: the two presentation families whose substructures
//! attain the bi-ideal and left-ideal height bounds, Brandt extensions and
//! the right-ideal tower built from them, the null extension of a
//! semigroup, and small reference semigroups and monoids.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::green::{self, GreensRelation};
use crate::ideals::{self, IdealError};
use crate::rewriting::{semigroup_from_presentation, RewriteError, RewritingSystem, DEFAULT_CAP};
use crate::semigroup::{ElementSet, FiniteSemigroup, SemigroupError, SubsetHandle, SubsetKind};

/// Largest tower level built (order 341).
pub const MAX_TOWER_LEVEL: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{what} = {value} is outside {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("{0} is infinite and cannot be materialized as a table")]
    UnsupportedInfinite(&'static str),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

fn check_range(
    what: &'static str,
    value: usize,
    min: usize,
    max: usize,
) -> Result<(), ConstructionError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(ConstructionError::OutOfRange {
            what,
            value,
            min,
            max,
        })
    }
}

/// Closed-form values a family member is built to exhibit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub order: usize,
    pub height: usize,
    pub relative_height: usize,
    pub chain_param: usize,
}

/// A semigroup with its distinguished substructure.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: &'static str,
    pub n: usize,
    pub semigroup: Arc<FiniteSemigroup>,
    pub distinguished: SubsetHandle,
    pub expected: Expected,
    pub presentation: Option<RewritingSystem>,
}

impl FamilyInstance {
    /// The same four quantities as [`Expected`], computed by the engine.
    pub fn computed(&self) -> Expected {
        Expected {
            order: self.semigroup.order(),
            height: green::height(&self.semigroup, GreensRelation::R),
            relative_height: ideals::relative_height(&self.distinguished),
            chain_param: ideals::chain_param(&self.distinguished),
        }
    }

    pub fn table_text(&self) -> String {
        self.semigroup.to_table_text()
    }

    pub fn presentation_text(&self) -> Option<String> {
        self.presentation.as_ref().map(RewritingSystem::to_text)
    }
}

fn x_power(n: usize) -> String {
    "x".repeat(n)
}

/// `<x, y, z, t | xyzt = x, yzty = y, ztyz = z, tyzt = t, w = 0>` with
/// `w ∈ {xⁿ, y², z², t², xz, xt, yx, yt, zx, zy, tz, txⁿ⁻¹}`.
pub fn bi_ideal_presentation(n: usize) -> Result<RewritingSystem, ConstructionError> {
    check_range("n", n, 2, usize::MAX)?;
    let xn = x_power(n);
    let txn1 = format!("t{}", x_power(n - 1));
    let mut rules: Vec<(&str, &str)> =
        vec![("xyzt", "x"), ("yzty", "y"), ("ztyz", "z"), ("tyzt", "t")];
    for w in [
        xn.as_str(),
        "yy",
        "zz",
        "tt",
        "xz",
        "xt",
        "yx",
        "yt",
        "zx",
        "zy",
        "tz",
        txn1.as_str(),
    ] {
        rules.push((w, "0"));
    }
    Ok(RewritingSystem::from_texts(
        &["x", "y", "z", "t"],
        Some("0"),
        &rules,
    )?)
}

/// `<x, y, z | xyz = x, yzy = y, zyz = z, w = 0>` with
/// `w ∈ {xⁿ, y², z², xz, yx, zxⁿ⁻¹}`.
pub fn left_ideal_cs_presentation(n: usize) -> Result<RewritingSystem, ConstructionError> {
    check_range("n", n, 2, usize::MAX)?;
    let xn = x_power(n);
    let zxn1 = format!("z{}", x_power(n - 1));
    let mut rules: Vec<(&str, &str)> = vec![("xyz", "x"), ("yzy", "y"), ("zyz", "z")];
    for w in [xn.as_str(), "yy", "zz", "xz", "yx", zxn1.as_str()] {
        rules.push((w, "0"));
    }
    Ok(RewritingSystem::from_texts(
        &["x", "y", "z"],
        Some("0"),
        &rules,
    )?)
}

/// The bi-ideal `B = X ∪ XS¹X`, `X = {x, y, z, tx}`, with `H_R(S) = n` and
/// `H_R(B) = 3n − 2`.
pub fn bi_ideal_family(n: usize) -> Result<FamilyInstance, ConstructionError> {
    let system = bi_ideal_presentation(n)?;
    let presented = semigroup_from_presentation(&system, DEFAULT_CAP)?;
    let generators: ElementSet = ["x", "y", "z", "tx"]
        .iter()
        .map(|w| presented.element(w))
        .collect::<Result<_, _>>()?;
    let semigroup = Arc::new(presented.semigroup);
    let distinguished = ideals::generate(&semigroup, &generators, SubsetKind::BiIdeal)?;
    Ok(FamilyInstance {
        family: "bi-ideal-family",
        n,
        semigroup,
        distinguished,
        expected: Expected {
            order: 12 * (n - 1) + 1,
            height: n,
            relative_height: 3 * n - 2,
            chain_param: n,
        },
        presentation: Some(system),
    })
}

/// The left ideal `A = S¹{x, y}` with `H_R(S) = n` and `H_R(A) = 2n − 1`.
pub fn left_ideal_cs_family(n: usize) -> Result<FamilyInstance, ConstructionError> {
    let system = left_ideal_cs_presentation(n)?;
    let presented = semigroup_from_presentation(&system, DEFAULT_CAP)?;
    let generators: ElementSet = ["x", "y"]
        .iter()
        .map(|w| presented.element(w))
        .collect::<Result<_, _>>()?;
    let semigroup = Arc::new(presented.semigroup);
    let distinguished = ideals::generate(&semigroup, &generators, SubsetKind::LeftIdeal)?;
    Ok(FamilyInstance {
        family: "left-ideal-cs-family",
        n,
        semigroup,
        distinguished,
        expected: Expected {
            order: 6 * (n - 1) + 1,
            height: n,
            relative_height: 2 * n - 1,
            chain_param: n,
        },
        presentation: Some(system),
    })
}

/// Index of `(i, s, j)` (0-based `i`, `j`) in a Brandt extension with `k`
/// indices over a semigroup of order `m`.
pub fn brandt_index(m: usize, k: usize, i: usize, s: usize, j: usize) -> usize {
    (i * m + s) * k + j
}

/// `B(S, I)` on `(I × S × I) ∪ {0}` with `|I| = k`:
/// `(i, s, j)(k, t, l) = (i, st, l)` if `j = k`, otherwise `0`.
///
/// Triples come first in lexicographic order of (i, s, j); the zero is last.
/// Indices are printed 1-based.
pub fn brandt_extension(
    s: &FiniteSemigroup,
    k: usize,
) -> Result<FiniteSemigroup, ConstructionError> {
    check_range("k", k, 1, 16)?;
    let m = s.order();
    let zero = k * k * m;
    let mut names = Vec::with_capacity(zero + 1);
    for i in 0..k {
        for a in s.elements() {
            for j in 0..k {
                names.push(format!("({},{},{})", i + 1, s.name(a), j + 1));
            }
        }
    }
    names.push("0".to_string());
    let decode = |x: usize| (x / (m * k), (x / k) % m, x % k);
    let t = FiniteSemigroup::from_fn(names, |x, y| {
        if x == zero || y == zero {
            return zero;
        }
        let (i, a, j) = decode(x);
        let (l, b, r) = decode(y);
        if j == l {
            brandt_index(m, k, i, s.product(a, b), r)
        } else {
            zero
        }
    })?;
    Ok(t)
}

/// The 5-element Brandt semigroup over the trivial group, on
/// `{(1,1), (1,2), (2,1), (2,2), 0}`, with its right ideal `(1,1)S¹`.
pub fn brandt_example() -> (Arc<FiniteSemigroup>, SubsetHandle) {
    let pairs = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let mut names: Vec<String> = pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
    names.push("0".to_string());
    let s = FiniteSemigroup::from_fn(names, |x, y| match (pairs.get(x), pairs.get(y)) {
        (Some(&(i, j)), Some(&(k, l))) if j == k => {
            pairs.iter().position(|&p| p == (i, l)).unwrap()
        }
        _ => 4,
    })
    .expect("Brandt table is associative");
    let s = Arc::new(s);
    let a = ideals::generate(&s, &[0].into_iter().collect(), SubsetKind::RightIdeal)
        .expect("principal right ideal");
    (s, a)
}

/// Iterated Brandt extensions: `S₁` trivial, `S_{m+1} = B(S_m, 2)`, with
/// the principal right ideal `A_n = a_n S¹` where `a_{m+1} = (1, a_m, 1)`.
/// `H_R(S_n) = n` and `H_R(A_n) = 2n − 1`.
pub fn right_ideal_tower(n: usize) -> Result<FamilyInstance, ConstructionError> {
    check_range("n", n, 1, MAX_TOWER_LEVEL)?;
    let mut s = trivial();
    let mut a = 0;
    let mut order = 1;
    for _ in 1..n {
        let m = s.order();
        s = brandt_extension(&s, 2)?;
        a = brandt_index(m, 2, 0, a, 0);
        order = 4 * order + 1;
    }
    let semigroup = Arc::new(s);
    let distinguished = ideals::generate(
        &semigroup,
        &[a].into_iter().collect(),
        SubsetKind::RightIdeal,
    )?;
    Ok(FamilyInstance {
        family: "brandt-tower",
        n,
        semigroup,
        distinguished,
        expected: Expected {
            order,
            height: n,
            relative_height: 2 * n - 1,
            chain_param: n,
        },
        presentation: None,
    })
}

fn fresh_name(base: String, taken: &HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// `S = T ∪ N` with `N = {x_a : a ∈ T} ∪ {0}` a null semigroup and
/// `a·x_b = x_{ab}`, `x_a·b = x_{ab}`, `a0 = 0a = 0`. Returns `S` and the
/// two-sided ideal `N`, for which `H_R(N) = 2` while the chain parameter is
/// `H_R(T) + 1`.
pub fn null_extension(t: &FiniteSemigroup) -> (Arc<FiniteSemigroup>, SubsetHandle) {
    let m = t.order();
    let mut taken: HashSet<String> = t.names().iter().cloned().collect();
    let mut names: Vec<String> = t.names().to_vec();
    for a in t.elements() {
        let name = fresh_name(format!("x_{}", t.name(a)), &taken);
        taken.insert(name.clone());
        names.push(name);
    }
    names.push(fresh_name("0".to_string(), &taken));
    let zero = 2 * m;
    let s = FiniteSemigroup::from_fn(names, |p, q| match (p < m, q < m) {
        _ if p == zero || q == zero => zero,
        (true, true) => t.product(p, q),
        (true, false) => m + t.product(p, q - m),
        (false, true) => m + t.product(p - m, q),
        (false, false) => zero,
    })
    .expect("null extension of a semigroup is associative");
    let s = Arc::new(s);
    let n = SubsetHandle::new(s.clone(), (m..=zero).collect(), SubsetKind::TwoSidedIdeal)
        .expect("N is an ideal");
    (s, n)
}

fn letter_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if m <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

pub fn trivial() -> FiniteSemigroup {
    FiniteSemigroup::from_table(vec!["e".to_string()], vec![vec![0]]).expect("trivial table")
}

/// `xy = x`.
pub fn left_zero(m: usize) -> FiniteSemigroup {
    FiniteSemigroup::from_fn(letter_names(m), |x, _| x).expect("left-zero table")
}

/// `xy = y`.
pub fn right_zero(m: usize) -> FiniteSemigroup {
    FiniteSemigroup::from_fn(letter_names(m), |_, y| y).expect("right-zero table")
}

/// All products equal the zero, which is the last element and named `0`.
pub fn null_semigroup(m: usize) -> FiniteSemigroup {
    let mut names = letter_names(m.saturating_sub(1));
    names.push("0".to_string());
    FiniteSemigroup::from_fn(names, |_, _| m - 1).expect("null table")
}

/// The cyclic group of order `m` under addition mod `m`.
pub fn cyclic_group(m: usize) -> FiniteSemigroup {
    let names = (0..m).map(|i| format!("g{i}")).collect();
    FiniteSemigroup::from_fn(names, |x, y| (x + y) % m).expect("group table")
}

/// All self-maps of `{1, …, n}` composed left to right (`x(fg) = (xf)g`).
/// Elements are named by their image lists, e.g. `"213"`.
pub fn full_transformation_monoid(n: usize) -> Result<FiniteSemigroup, ConstructionError> {
    check_range("n", n, 1, 4)?;
    let maps: Vec<Vec<usize>> = (0..n.pow(n as u32))
        .map(|mut code| {
            let mut f = vec![0; n];
            for slot in f.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            f
        })
        .collect();
    transformation_semigroup(&maps, n)
}

/// All partial bijections of `{1, …, n}` composed left to right; `-` marks
/// an undefined point in the names.
pub fn symmetric_inverse_monoid(n: usize) -> Result<FiniteSemigroup, ConstructionError> {
    check_range("n", n, 1, 3)?;
    let base = n + 1;
    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    for mut code in 0..base.pow(n as u32) {
        let mut f = vec![None; n];
        for slot in f.iter_mut().rev() {
            *slot = (code % base).checked_sub(1);
            code /= base;
        }
        let images: Vec<usize> = f.iter().flatten().copied().collect();
        let distinct: HashSet<usize> = images.iter().copied().collect();
        if distinct.len() == images.len() {
            maps.push(f);
        }
    }
    let index: std::collections::HashMap<Vec<Option<usize>>, usize> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();
    let names = maps
        .iter()
        .map(|f| {
            f.iter()
                .map(|x| x.map_or('-', |v| char::from_digit(v as u32 + 1, 10).unwrap()))
                .collect()
        })
        .collect();
    let compose = |f: &[Option<usize>], g: &[Option<usize>]| -> Vec<Option<usize>> {
        f.iter().map(|x| x.and_then(|v| g[v])).collect()
    };
    Ok(FiniteSemigroup::from_fn(names, |a, b| {
        index[&compose(&maps[a], &maps[b])]
    })?)
}

fn transformation_semigroup(
    maps: &[Vec<usize>],
    n: usize,
) -> Result<FiniteSemigroup, ConstructionError> {
    let index: std::collections::HashMap<&[usize], usize> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let names = maps
        .iter()
        .map(|f| {
            f.iter()
                .map(|&v| char::from_digit(v as u32 + 1, 10).unwrap())
                .collect()
        })
        .collect();
    let composed: Vec<Vec<usize>> = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| {
                    let fg: Vec<usize> = (0..n).map(|x| g[f[x]]).collect();
                    index[fg.as_slice()]
                })
                .collect()
        })
        .collect();
    Ok(FiniteSemigroup::from_table(names, composed)?)
}

/// The bicyclic monoid has infinite `R`-height and no finite table.
pub fn bicyclic_monoid() -> Result<FiniteSemigroup, ConstructionError> {
    Err(ConstructionError::UnsupportedInfinite(
        "the bicyclic monoid",
    ))
}

/// The left-ideal extension by a right simple semigroup without
/// idempotents (such as a Baer–Levi semigroup) needs an infinite factor.
pub fn baer_levi_left_ideal_extension(
    _s: &FiniteSemigroup,
    _a: &SubsetHandle,
) -> Result<FamilyInstance, ConstructionError> {
    Err(ConstructionError::UnsupportedInfinite(
        "a right simple semigroup without idempotents",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::{height, less};

    #[test]
    fn bi_family_small_instances() {
        let f = bi_ideal_family(2).unwrap();
        assert_eq!(
            f.computed(),
            Expected {
                order: 13,
                height: 2,
                relative_height: 4,
                chain_param: 2
            }
        );
        assert_eq!(f.computed(), f.expected);
        let f = bi_ideal_family(3).unwrap();
        assert_eq!(
            f.computed(),
            Expected {
                order: 25,
                height: 3,
                relative_height: 7,
                chain_param: 3
            }
        );
        assert!(matches!(
            bi_ideal_family(1),
            Err(ConstructionError::OutOfRange { .. })
        ));
    }

    #[test]
    fn left_family_small_instances() {
        let f = left_ideal_cs_family(2).unwrap();
        assert_eq!(
            f.computed(),
            Expected {
                order: 7,
                height: 2,
                relative_height: 3,
                chain_param: 2
            }
        );
        let f = left_ideal_cs_family(3).unwrap();
        assert_eq!(height(&f.semigroup, GreensRelation::J), 5);
    }

    #[test]
    fn brandt_over_trivial_is_the_example() {
        let b = brandt_extension(&trivial(), 2).unwrap();
        let (example, _) = brandt_example();
        assert_eq!(b.order(), 5);
        assert_eq!(b.row(0), example.row(0));
        for x in b.elements() {
            assert_eq!(b.row(x), example.row(x));
        }
    }

    #[test]
    fn brandt_order_and_height() {
        let lz = left_zero(5);
        assert_eq!(brandt_extension(&lz, 2).unwrap().order(), 21);
        let lz2 = left_zero(2);
        let t = brandt_extension(&lz2, 2).unwrap();
        assert_eq!(
            height(&t, GreensRelation::R),
            height(&lz2, GreensRelation::R) + 1
        );
        assert!(brandt_extension(&lz2, 0).is_err());
    }

    #[test]
    fn tower_levels() {
        let f = right_ideal_tower(1).unwrap();
        assert_eq!(
            f.computed(),
            Expected {
                order: 1,
                height: 1,
                relative_height: 1,
                chain_param: 1
            }
        );
        let f = right_ideal_tower(2).unwrap();
        assert_eq!(
            f.computed(),
            Expected {
                order: 5,
                height: 2,
                relative_height: 3,
                chain_param: 2
            }
        );
        let f = right_ideal_tower(4).unwrap();
        assert_eq!(f.computed(), f.expected);
        assert_eq!(f.expected.order, 85);
        assert!(right_ideal_tower(0).is_err());
        assert!(right_ideal_tower(6).is_err());
    }

    #[test]
    fn null_extensions() {
        let (s, n) = null_extension(&trivial());
        assert_eq!(s.order(), 3);
        assert_eq!(n.len(), 2);
        assert_eq!(ideals::chain_param(&n), 2);
        assert_eq!(ideals::relative_height(&n), 2);

        // a < b in T iff x_a < x_b in S, and 0 < x_a
        let lz = left_zero(2);
        let (s, _) = null_extension(&lz);
        let zero = s.order() - 1;
        for a in lz.elements() {
            let xa = lz.order() + a;
            assert!(less(&s, zero, xa, GreensRelation::R));
            for b in lz.elements() {
                let xb = lz.order() + b;
                assert_eq!(
                    less(&lz, a, b, GreensRelation::R),
                    less(&s, xa, xb, GreensRelation::R)
                );
            }
        }
    }

    #[test]
    fn null_extension_names_stay_distinct() {
        let f = left_ideal_cs_family(2).unwrap();
        let (s, _) = null_extension(&f.semigroup);
        assert_eq!(s.order(), 15);
        assert_eq!(s.name(14), "0'");
    }

    #[test]
    fn transformation_monoids() {
        let t1 = full_transformation_monoid(1).unwrap();
        assert_eq!((t1.order(), t1.identity()), (1, Some(0)));
        let t2 = full_transformation_monoid(2).unwrap();
        assert_eq!(t2.order(), 4);
        assert_eq!(t2.name(t2.identity().unwrap()), "12");
        assert_eq!(full_transformation_monoid(3).unwrap().order(), 27);
        assert!(full_transformation_monoid(5).is_err());
    }

    #[test]
    fn symmetric_inverse_monoids() {
        assert_eq!(symmetric_inverse_monoid(1).unwrap().order(), 2);
        assert_eq!(symmetric_inverse_monoid(2).unwrap().order(), 7);
        let i3 = symmetric_inverse_monoid(3).unwrap();
        assert_eq!(i3.order(), 34);
        assert_eq!(i3.name(i3.identity().unwrap()), "123");
        assert_eq!(
            height(&symmetric_inverse_monoid(1).unwrap(), GreensRelation::R),
            2
        );
        assert!(symmetric_inverse_monoid(4).is_err());
    }

    #[test]
    fn infinite_constructions_are_refused() {
        assert_eq!(
            bicyclic_monoid().unwrap_err(),
            ConstructionError::UnsupportedInfinite("the bicyclic monoid")
        );
        let (s, a) = brandt_example();
        assert!(matches!(
            baer_levi_left_ideal_extension(&s, &a),
            Err(ConstructionError::UnsupportedInfinite(_))
        ));
    }

    #[test]
    fn family_exports_reparse() {
        let f = bi_ideal_family(2).unwrap();
        let back: RewritingSystem = f.presentation_text().unwrap().parse().unwrap();
        assert_eq!(&back, f.presentation.as_ref().unwrap());
        let table: FiniteSemigroup = f.table_text().parse().unwrap();
        assert_eq!(table, *f.semigroup);
    }
}
