//! Exhaustive pattern counts and orbit decompositions.

use qutrit_core::patterns::{
    canonicalize, census, enumerate_patterns, forced_separable, paper_label, table_representative, GroupMode,
    SymmetryGroup, TABLE_TYPES,
};
use qutrit_core::state::SupportPattern;

fn sizes(k: usize, group: &SymmetryGroup) -> Vec<usize> {
    let mut v: Vec<_> = census(k, group, 7).unwrap().iter().map(|o| o.size).collect();
    v.sort_unstable();
    v
}

#[test]
fn two_term_split() {
    let all = enumerate_patterns(2).unwrap();
    let separable = all.iter().filter(|p| forced_separable(**p)).count();
    assert_eq!((separable, all.len() - separable), (18, 18));
}

#[test]
fn enumeration_is_binomial() {
    let expect = [9, 36, 84, 126, 126, 84, 36, 9, 1];
    for (k, n) in (1..=9).zip(expect) {
        assert_eq!(enumerate_patterns(k).unwrap().len(), n, "k = {k}");
    }
    assert!(enumerate_patterns(0).is_err());
    assert!(enumerate_patterns(10).is_err());
}

#[test]
fn orbit_multisets_full_group() {
    let g = SymmetryGroup::new(GroupMode::RowColSwap);
    assert_eq!(sizes(2, &g), [18, 18]);
    assert_eq!(sizes(3, &g), [6, 6, 36, 36]);
    assert_eq!(sizes(4, &g), [9, 9, 36, 36, 36]);
    assert_eq!(sizes(5, &g), [9, 9, 36, 36, 36]);
    assert_eq!(sizes(6, &g), [6, 6, 36, 36]);
}

#[test]
fn orbits_partition_the_patterns() {
    for mode in [GroupMode::RowCol, GroupMode::RowColSwap] {
        let g = SymmetryGroup::new(mode);
        for k in 1..=9 {
            let orbits = census(k, &g, 1).unwrap();
            assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), enumerate_patterns(k).unwrap().len());
            for o in &orbits {
                assert_eq!(o.size * g.stabilizer_order(o.canonical), g.order());
                assert!(o.representatives.iter().all(|r| canonicalize(*r, &g) == o.canonical));
            }
        }
    }
}

#[test]
fn complement_duality() {
    let g = SymmetryGroup::new(GroupMode::RowColSwap);
    for k in 1..=8 {
        let mut a: Vec<_> = census(k, &g, 1).unwrap().iter().map(|o| o.size).collect();
        let mut b: Vec<_> = census(9 - k, &g, 1).unwrap().iter().map(|o| o.size).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "k = {k}");
        for o in census(k, &g, 1).unwrap() {
            let c = o.canonical.complement().unwrap();
            assert_eq!(g.orbit(c).len(), o.size);
        }
    }
}

#[test]
fn three_term_types() {
    let g = SymmetryGroup::new(GroupMode::RowColSwap);
    let rows = census(3, &g, 1).unwrap();
    let label_size = |l: &str| rows.iter().find(|o| o.paper_labels.contains(l)).map(|o| o.size).unwrap();
    assert_eq!(label_size("III_1"), 6);
    assert_eq!(label_size("III_2"), 36);
    assert_eq!(label_size("III_3"), 36);
    let lines: Vec<_> = rows.iter().filter(|o| o.forced_separable).map(|o| o.size).collect();
    assert_eq!(lines, [6]);
}

#[test]
fn shared_five_term_orbit_is_flagged() {
    let g = SymmetryGroup::new(GroupMode::RowColSwap);
    let v5 = table_representative("V_5").unwrap();
    let v6 = table_representative("V_6").unwrap();
    assert_eq!(canonicalize(v5, &g), canonicalize(v6, &g));
    let m = paper_label(v5, &g);
    assert!(m.discrepancy);
    assert_eq!(m.labels.into_iter().collect::<Vec<_>>(), ["V_5", "V_6"]);
    let flagged: Vec<_> = census(5, &g, 1).unwrap().into_iter().filter(|o| o.discrepancy).collect();
    assert_eq!(flagged.len(), 1);
}

#[test]
fn every_entangled_orbit_has_a_type() {
    let g = SymmetryGroup::new(GroupMode::RowColSwap);
    for k in 2..=6 {
        for o in census(k, &g, 1).unwrap() {
            assert_eq!(o.paper_labels.is_empty(), o.forced_separable, "k = {k}, {}", o.canonical);
        }
    }
    for (label, reps) in TABLE_TYPES {
        for r in *reps {
            let p = SupportPattern::parse(r).unwrap();
            assert!(paper_label(p, &g).labels.contains(label), "{label}: {r}");
        }
    }
}

#[test]
fn smaller_group_splits_orbits() {
    let small = SymmetryGroup::new(GroupMode::RowCol);
    let big = SymmetryGroup::new(GroupMode::RowColSwap);
    for k in 1..=9 {
        assert!(census(k, &small, 1).unwrap().len() >= census(k, &big, 1).unwrap().len());
    }
}
