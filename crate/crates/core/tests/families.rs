use std::collections::BTreeSet;

use rheight::constructions::*;
use rheight::green::{self, class_poset, GreensRelation};
use rheight::ideals;
use rheight::FiniteSemigroup;

fn label(s: &FiniteSemigroup, class: &[usize]) -> String {
    let mut names: Vec<&str> = class.iter().map(|&a| s.name(a)).collect();
    names.sort_unstable();
    names.join(",")
}

/// Covering pairs `(upper, lower)` of the R-class poset, by member names.
fn covers(s: &FiniteSemigroup) -> BTreeSet<(String, String)> {
    let p = class_poset(s, GreensRelation::R);
    let mut out = BTreeSet::new();
    for x in 0..p.len() {
        for &y in p.lower_covers(x) {
            out.insert((label(s, &p.classes()[x]), label(s, &p.classes()[y])));
        }
    }
    out
}

fn pairs(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn names(s: &FiniteSemigroup) -> BTreeSet<String> {
    s.names().iter().cloned().collect()
}

fn bi_normal_form(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let x = |i: usize| "x".repeat(i);
    for i in 1..n {
        for suffix in ["", "y", "yz"] {
            out.insert(format!("{}{suffix}", x(i)));
        }
    }
    for w in ["y", "yz", "yzt", "z", "zt", "zty", "t", "ty", "tyz"] {
        out.insert(w.to_string());
    }
    for i in 1..n.saturating_sub(1) {
        for prefix in ["yzt", "zt", "t"] {
            for suffix in ["", "y", "yz"] {
                out.insert(format!("{prefix}{}{suffix}", x(i)));
            }
        }
    }
    out.insert("0".into());
    out
}

/// Normal form of the left-ideal family; at `j = 0` the word `yzy`
/// reduces to `y`, which stands in its place.
fn left_normal_form(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let x = |i: usize| "x".repeat(i);
    for i in 1..n {
        out.insert(x(i));
        out.insert(format!("{}y", x(i)));
    }
    for j in 0..=n - 2 {
        out.insert(format!("yz{}", x(j)));
        out.insert(if j == 0 {
            "y".to_string()
        } else {
            format!("yz{}y", x(j))
        });
        out.insert(format!("z{}", x(j)));
        out.insert(format!("z{}y", x(j)));
    }
    out.insert("0".into());
    out
}

#[test]
fn bi_family_normal_forms() {
    for n in 2..=6 {
        let f = bi_ideal_family(n).unwrap();
        assert_eq!(names(&f.semigroup), bi_normal_form(n), "n = {n}");
        assert_eq!(f.semigroup.order(), 12 * (n - 1) + 1);
    }
}

#[test]
fn left_family_normal_forms() {
    for n in 2..=8 {
        let f = left_ideal_cs_family(n).unwrap();
        assert_eq!(names(&f.semigroup), left_normal_form(n), "n = {n}");
        assert_eq!(f.semigroup.order(), 6 * (n - 1) + 1);
    }
}

#[test]
fn bi_family_n2_posets() {
    let f = bi_ideal_family(2).unwrap();
    assert_eq!(
        covers(&f.semigroup),
        pairs(&[
            ("x,xy,xyz", "0"),
            ("y,yz,yzt", "0"),
            ("z,zt,zty", "0"),
            ("t,ty,tyz", "0")
        ])
    );
    let b = f.distinguished.restrict().semigroup;
    assert_eq!(
        covers(&b),
        pairs(&[
            ("x", "xy"),
            ("xy", "xyz"),
            ("xyz", "0"),
            ("y", "yz"),
            ("yz", "0"),
            ("zty", "z"),
            ("z", "0"),
        ])
    );
}

#[test]
fn bi_family_general_shape() {
    // four chains of n − 1 classes each over the zero
    for n in 2..=5 {
        let f = bi_ideal_family(n).unwrap();
        let p = class_poset(&f.semigroup, GreensRelation::R);
        assert_eq!(p.len(), 4 * (n - 1) + 1);
        assert_eq!(p.maximal().len(), 4);
        assert_eq!(p.minimal().len(), 1);
        assert_eq!(p.edge_count(), 4 * (n - 1));
        let top = p.class_of(f.semigroup.element("x").unwrap());
        assert_eq!(label(&f.semigroup, &p.classes()[top]), "x,xy,xyz");
    }
}

#[test]
fn bi_family_complement() {
    for n in 2..=6 {
        let f = bi_ideal_family(n).unwrap();
        let outside: BTreeSet<&str> = f
            .semigroup
            .elements()
            .filter(|&a| !f.distinguished.contains(a))
            .map(|a| f.semigroup.name(a))
            .collect();
        assert_eq!(
            outside,
            BTreeSet::from(["t", "zt", "ty", "yzt", "tyz"]),
            "n = {n}"
        );
    }
}

#[test]
fn left_family_n2_posets() {
    let f = left_ideal_cs_family(2).unwrap();
    assert_eq!(
        covers(&f.semigroup),
        pairs(&[("x,xy", "0"), ("y,yz", "0"), ("z,zy", "0")])
    );
    let a = f.distinguished.restrict().semigroup;
    assert_eq!(
        names(&a),
        ["0", "x", "xy", "y", "zy"].map(String::from).into()
    );
    assert_eq!(
        covers(&a),
        pairs(&[("x", "xy"), ("xy", "0"), ("y", "0"), ("zy", "0")])
    );
}

#[test]
fn left_family_j_chain() {
    for n in 2..=6 {
        let f = left_ideal_cs_family(n).unwrap();
        let s = &f.semigroup;
        let j = class_poset(s, GreensRelation::J);
        assert!(j.is_chain());
        assert_eq!(j.height(), 2 * n - 1);
        assert_eq!(green::height(s, GreensRelation::R), n);
        // J_i = {yzx^{i-1}, yzx^{i-1}y, zx^{i-1}, zx^{i-1}y} and K_i = {x^i, x^iy}
        for i in 1..n {
            let x = "x".repeat(i - 1);
            let yzy = if i == 1 {
                "y".to_string()
            } else {
                format!("yz{x}y")
            };
            let expected: BTreeSet<String> =
                [format!("yz{x}"), yzy, format!("z{x}"), format!("z{x}y")].into();
            let class = j.class_of(s.element(&format!("z{x}")).unwrap());
            let got: BTreeSet<String> = j.classes()[class]
                .iter()
                .map(|&a| s.name(a).to_string())
                .collect();
            assert_eq!(got, expected, "J_{i}, n = {n}");
            let xi = "x".repeat(i);
            let k = j.class_of(s.element(&xi).unwrap());
            let got: BTreeSet<String> = j.classes()[k]
                .iter()
                .map(|&a| s.name(a).to_string())
                .collect();
            assert_eq!(got, [xi.clone(), format!("{xi}y")].into(), "K_{i}, n = {n}");
        }
    }
}

#[test]
fn families_are_tight() {
    for n in 2..=5 {
        let r = ideals::bound_report(&bi_ideal_family(n).unwrap().distinguished).unwrap();
        assert_eq!(
            (r.theorem_id.as_str(), r.bound, r.pass, r.tight),
            ("bi-ideal-cs", 3 * n - 2, true, true)
        );
        let r = ideals::bound_report(&left_ideal_cs_family(n).unwrap().distinguished).unwrap();
        assert_eq!(
            (r.theorem_id.as_str(), r.bound, r.pass, r.tight),
            ("left-ideal-cs", 2 * n - 1, true, true)
        );
    }
    for n in 1..=4 {
        let r = ideals::bound_report(&right_ideal_tower(n).unwrap().distinguished).unwrap();
        assert_eq!(
            (r.theorem_id.as_str(), r.bound, r.tight),
            ("right-ideal", 2 * n - 1, true)
        );
    }
}

#[test]
fn presentations_complete() {
    for n in 2..=8 {
        assert!(
            bi_ideal_presentation(n)
                .unwrap()
                .is_complete()
                .is_complete(),
            "bi n = {n}"
        );
        assert!(
            left_ideal_cs_presentation(n)
                .unwrap()
                .is_complete()
                .is_complete(),
            "left n = {n}"
        );
    }
}

#[test]
fn brandt_order_comparison_law() {
    // (i,s,j) <_T (k,t,l) iff i = k and s <_S t, for bases of order ≤ 6
    let bases = vec![
        trivial(),
        left_zero(3),
        right_zero(2),
        null_semigroup(3),
        cyclic_group(3),
        full_transformation_monoid(2).unwrap(),
        brandt_example().0.as_ref().clone(),
    ];
    for s in bases {
        assert!(s.order() <= 6);
        let m = s.order();
        let t = brandt_extension(&s, 2).unwrap();
        for (i, a, j) in
            (0..2).flat_map(|i| (0..m).flat_map(move |a| (0..2).map(move |j| (i, a, j))))
        {
            for (k, b, l) in
                (0..2).flat_map(|i| (0..m).flat_map(move |a| (0..2).map(move |j| (i, a, j))))
            {
                let x = brandt_index(m, 2, i, a, j);
                let y = brandt_index(m, 2, k, b, l);
                assert_eq!(
                    green::less(&t, x, y, GreensRelation::R),
                    i == k && green::less(&s, a, b, GreensRelation::R),
                    "({i},{a},{j}) vs ({k},{b},{l})"
                );
            }
        }
    }
}

#[test]
fn tower_recurrences() {
    let mut previous = right_ideal_tower(1).unwrap().computed();
    for n in 2..=4 {
        let current = right_ideal_tower(n).unwrap().computed();
        assert_eq!(current.height, previous.height + 1);
        assert_eq!(current.relative_height, previous.relative_height + 2);
        assert_eq!(current.order, 4 * previous.order + 1);
        previous = current;
    }
}

#[test]
fn null_extension_of_left_family() {
    let t = left_ideal_cs_family(3).unwrap();
    let (s, n) = null_extension(&t.semigroup);
    assert_eq!(s.order(), 2 * t.semigroup.order() + 1);
    assert_eq!(ideals::relative_height(&n), 2);
    assert_eq!(ideals::chain_param(&n), 4);
    let r = ideals::bound_report(&n).unwrap();
    assert!(r.pass && !r.tight);
    assert_eq!(r.bound, 4);
}

#[test]
fn exports_round_trip() {
    for f in [
        bi_ideal_family(3).unwrap(),
        left_ideal_cs_family(3).unwrap(),
        right_ideal_tower(3).unwrap(),
    ] {
        let table: FiniteSemigroup = f.table_text().parse().unwrap();
        assert_eq!(table, *f.semigroup);
        if let Some(text) = f.presentation_text() {
            let system: rheight::RewritingSystem = text.parse().unwrap();
            assert_eq!(Some(&system), f.presentation.as_ref());
        }
    }
}
