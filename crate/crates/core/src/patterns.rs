//! Support patterns up to relabeling of local basis states.
//!
//! The symmetry group permutes rows (particle A labels) and columns
//! (particle B labels) independently; in `RowColSwap` mode it also exchanges
//! the particles, which transposes the 3×3 grid. Orbits are found by brute
//! force: at most 72 images per pattern, 512 patterns in total.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{schmidt, DEFAULT_SCHMIDT_TOL};
use crate::state::{random_state, SupportPattern};

pub const DEFAULT_RANK_TRIALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupMode {
    RowCol,
    #[default]
    RowColSwap,
}

impl FromStr for GroupMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rowcol" => Ok(GroupMode::RowCol),
            "rowcol+swap" | "rowcol_swap" | "rowcol-swap" => Ok(GroupMode::RowColSwap),
            other => Err(format!("unknown group `{other}` (expected rowcol or rowcol+swap)")),
        }
    }
}

impl fmt::Display for GroupMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupMode::RowCol => f.write_str("rowcol"),
            GroupMode::RowColSwap => f.write_str("rowcol+swap"),
        }
    }
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Relabeling group acting on the nine cells; each element maps flat index
/// `i` to `element[i]`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    mode: GroupMode,
    elements: Vec<[u8; 9]>,
}

impl SymmetryGroup {
    pub fn new(mode: GroupMode) -> Self {
        let swaps: &[bool] = match mode {
            GroupMode::RowCol => &[false],
            GroupMode::RowColSwap => &[false, true],
        };
        let mut elements = Vec::with_capacity(36 * swaps.len());
        for &swap in swaps {
            for rp in &PERMS3 {
                for cp in &PERMS3 {
                    let mut map = [0u8; 9];
                    for (i, slot) in map.iter_mut().enumerate() {
                        let (r, c) = (rp[i / 3], cp[i % 3]);
                        let (r, c) = if swap { (c, r) } else { (r, c) };
                        *slot = (3 * r + c) as u8;
                    }
                    elements.push(map);
                }
            }
        }
        SymmetryGroup { mode, elements }
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn act(element: &[u8; 9], bits: u16) -> u16 {
        (0..9).filter(|i| bits & (1 << i) != 0).fold(0u16, |acc, i| acc | (1 << element[i]))
    }

    /// All images of `pattern`, deduplicated and ascending.
    pub fn orbit(&self, pattern: SupportPattern) -> Vec<SupportPattern> {
        let set: BTreeSet<u16> = self.elements.iter().map(|e| Self::act(e, pattern.bits())).collect();
        set.into_iter().map(|b| SupportPattern::from_bits(b).unwrap()).collect()
    }

    pub fn stabilizer_order(&self, pattern: SupportPattern) -> usize {
        self.elements.iter().filter(|e| Self::act(e, pattern.bits()) == pattern.bits()).count()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `C(9,k)` patterns with `k` cells, in ascending bitmask order.
pub fn enumerate_patterns(k: usize) -> Result<Vec<SupportPattern>> {
    if !(1..=9).contains(&k) {
        return Err(Error::TermCount(k));
    }
    let out: Vec<_> = (1u16..=SupportPattern::FULL_MASK)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| SupportPattern::from_bits(b).unwrap())
        .collect();
    debug_assert_eq!(out.len(), binomial(9, k));
    Ok(out)
}

/// True when every cell shares one row or one column, so every state on the
/// pattern factorizes.
pub fn forced_separable(pattern: SupportPattern) -> bool {
    let cells = pattern.cells();
    let first = cells[0];
    cells.iter().all(|c| c.row == first.row) || cells.iter().all(|c| c.col == first.col)
}

/// Maximum Schmidt rank over `trials` seeded random states on the pattern.
pub fn generic_rank(pattern: SupportPattern, seed: u64, trials: usize) -> usize {
    (0..trials.max(1) as u64)
        .map(|t| {
            let st = random_state(pattern, seed.wrapping_add(t.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
            schmidt(&st, DEFAULT_SCHMIDT_TOL).rank
        })
        .max()
        .unwrap_or(1)
}

/// Smallest bitmask in the orbit of `pattern`.
pub fn canonicalize(pattern: SupportPattern, group: &SymmetryGroup) -> SupportPattern {
    let min = group.elements.iter().map(|e| SymmetryGroup::act(e, pattern.bits())).min().unwrap();
    SupportPattern::from_bits(min).unwrap()
}

/// Representative patterns for every type listed in the classification
/// tables, keyed by type label. Some types list two families that are not
/// related by relabeling alone, so they carry two representatives.
pub const TABLE_TYPES: &[(&str, &[&str])] = &[
    ("I", &["U1,V2"]),
    ("III_1", &["U1,V2,W3"]),
    ("III_2", &["U1,U2,V1"]),
    ("III_3", &["U1,U2,V3"]),
    ("IV_1", &["U1,U2,U3,V1", "U1,U2,V1,W1"]),
    ("IV_2", &["U1,U2,V1,V3", "U1,U2,V1,W2"]),
    ("IV_3", &["U1,U2,V1,W3"]),
    ("IV_4", &["U1,U2,V1,V2"]),
    ("IV_5", &["U1,U2,V3,W3"]),
    ("V_1", &["U1,U2,U3,V1,V2", "U1,U2,V1,V2,W1"]),
    ("V_2", &["U1,U2,V1,V2,W3"]),
    ("V_3", &["U1,U2,U3,V1,W1"]),
    ("V_4", &["U1,U2,U3,V1,W2", "U1,U2,V1,V3,W1"]),
    ("V_5", &["U1,U2,V1,V3,W2"]),
    ("V_6", &["U1,U2,V1,V3,W3"]),
    ("VI_1", &["U1,U2,U3,V1,V2,V3", "U1,U2,V1,V2,W1,W2"]),
    ("VI_2", &["U1,U2,V1,V3,W2,W3"]),
    ("VI_3", &["U1,U2,U3,V1,V2,W1"]),
    ("VI_4", &["U1,U2,U3,V1,V2,W3", "U1,U2,V1,V2,W1,W3"]),
];

/// First listed representative of a table type.
pub fn table_representative(label: &str) -> Option<SupportPattern> {
    TABLE_TYPES
        .iter()
        .find(|(l, _)| *l == label)
        .map(|(_, reps)| SupportPattern::parse(reps[0]).expect("table representative parses"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelMatch {
    pub labels: BTreeSet<&'static str>,
    /// More than one table type shares the orbit, or an entangled orbit has
    /// no table type at all.
    pub discrepancy: bool,
}

/// Table types whose representative families intersect the orbit of `pattern`.
/// Patterns with fewer than two or more than six cells are left unlabeled.
pub fn paper_label(pattern: SupportPattern, group: &SymmetryGroup) -> LabelMatch {
    let k = pattern.len();
    if !(2..=6).contains(&k) {
        return LabelMatch { labels: BTreeSet::new(), discrepancy: false };
    }
    let canon = canonicalize(pattern, group);
    let labels: BTreeSet<&'static str> = TABLE_TYPES
        .iter()
        .filter(|(_, reps)| {
            reps.iter().any(|r| {
                let rep = SupportPattern::parse(r).unwrap();
                rep.len() == k && canonicalize(rep, group) == canon
            })
        })
        .map(|(l, _)| *l)
        .collect();
    let discrepancy = labels.len() > 1 || (labels.is_empty() && !forced_separable(pattern));
    LabelMatch { labels, discrepancy }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub canonical: SupportPattern,
    pub size: usize,
    pub representatives: Vec<SupportPattern>,
    pub paper_labels: BTreeSet<&'static str>,
    pub forced_separable: bool,
    pub generic_rank: usize,
    pub discrepancy: bool,
}

/// One census row as exported to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub canonical: String,
    pub size: usize,
    pub labels: Vec<&'static str>,
    pub forced_separable: bool,
    pub generic_rank: usize,
    pub discrepancy: bool,
}

impl From<&OrbitClass> for CensusRow {
    fn from(o: &OrbitClass) -> Self {
        CensusRow {
            canonical: o.canonical.to_string(),
            size: o.size,
            labels: o.paper_labels.iter().copied().collect(),
            forced_separable: o.forced_separable,
            generic_rank: o.generic_rank,
            discrepancy: o.discrepancy,
        }
    }
}

/// Orbit decomposition of all k-cell patterns, sorted by orbit size and then
/// canonical bitmask. `seed` drives the generic-rank sampling.
pub fn census(k: usize, group: &SymmetryGroup, seed: u64) -> Result<Vec<OrbitClass>> {
    let patterns = enumerate_patterns(k)?;
    let canon: Vec<(SupportPattern, SupportPattern)> =
        patterns.par_iter().map(|&p| (canonicalize(p, group), p)).collect();
    let mut orbits: BTreeMap<SupportPattern, Vec<SupportPattern>> = BTreeMap::new();
    for (c, p) in canon {
        orbits.entry(c).or_default().push(p);
    }
    let mut out: Vec<OrbitClass> = orbits
        .into_par_iter()
        .map(|(canonical, members)| {
            let label = paper_label(canonical, group);
            OrbitClass {
                canonical,
                size: members.len(),
                representatives: members,
                paper_labels: label.labels,
                forced_separable: forced_separable(canonical),
                generic_rank: generic_rank(canonical, seed, DEFAULT_RANK_TRIALS),
                discrepancy: label.discrepancy,
            }
        })
        .collect();
    out.sort_by_key(|o| (o.size, o.canonical.bits()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> SupportPattern {
        SupportPattern::parse(s).unwrap()
    }

    fn sizes(k: usize, mode: GroupMode) -> Vec<usize> {
        let g = SymmetryGroup::new(mode);
        let mut v: Vec<_> = census(k, &g, 1).unwrap().iter().map(|o| o.size).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn group_orders() {
        assert_eq!(SymmetryGroup::new(GroupMode::RowCol).order(), 36);
        assert_eq!(SymmetryGroup::new(GroupMode::RowColSwap).order(), 72);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_patterns(2).unwrap().len(), 36);
        assert_eq!(enumerate_patterns(4).unwrap().len(), 126);
        assert_eq!(enumerate_patterns(6).unwrap().len(), 84);
        assert!(matches!(enumerate_patterns(0), Err(Error::TermCount(0))));
        assert!(matches!(enumerate_patterns(10), Err(Error::TermCount(10))));
        let p = enumerate_patterns(3).unwrap();
        assert!(p.windows(2).all(|w| w[0].bits() < w[1].bits()));
    }

    #[test]
    fn separability_examples() {
        assert!(forced_separable(pat("U1,U2")));
        assert!(!forced_separable(pat("U1,V2")));
        assert!(forced_separable(pat("U1,V1,W1")));
        assert!(forced_separable(pat("W2")));
    }

    #[test]
    fn generic_rank_examples() {
        assert_eq!(generic_rank(pat("U1,V2,W3"), 3, DEFAULT_RANK_TRIALS), 3);
        assert_eq!(generic_rank(pat("U1,U2,U3"), 3, DEFAULT_RANK_TRIALS), 1);
        assert_eq!(generic_rank(pat("U1,U2,V1,V2"), 3, DEFAULT_RANK_TRIALS), 2);
    }

    #[test]
    fn canonicalize_examples() {
        let g = SymmetryGroup::new(GroupMode::RowColSwap);
        assert_eq!(canonicalize(pat("U2,V3"), &g), canonicalize(pat("U1,V2"), &g));
        assert_eq!(canonicalize(pat("U1,U2,U3,V1"), &g), canonicalize(pat("U1,V1,W1,U2"), &g));
        let rc = SymmetryGroup::new(GroupMode::RowCol);
        assert_ne!(canonicalize(pat("U1,U2,U3,V1"), &rc), canonicalize(pat("U1,V1,W1,U2"), &rc));
        for p in enumerate_patterns(4).unwrap() {
            let c = canonicalize(p, &g);
            assert_eq!(canonicalize(c, &g), c);
            assert!(c.bits() <= p.bits());
        }
    }

    #[test]
    fn census_sizes_small_k() {
        assert_eq!(sizes(2, GroupMode::RowColSwap), vec![18, 18]);
        assert_eq!(sizes(3, GroupMode::RowColSwap), vec![6, 6, 36, 36]);
        assert_eq!(sizes(4, GroupMode::RowColSwap), vec![9, 9, 36, 36, 36]);
        assert_eq!(sizes(6, GroupMode::RowColSwap), vec![6, 6, 36, 36]);
    }

    #[test]
    fn census_two_terms_split() {
        let g = SymmetryGroup::new(GroupMode::RowColSwap);
        let orbits = census(2, &g, 0).unwrap();
        let sep: usize = orbits.iter().filter(|o| o.forced_separable).map(|o| o.size).sum();
        let ent: usize = orbits.iter().filter(|o| !o.forced_separable).map(|o| o.size).sum();
        assert_eq!((sep, ent), (18, 18));
        let entangled = orbits.iter().find(|o| !o.forced_separable).unwrap();
        assert_eq!(entangled.paper_labels, BTreeSet::from(["I"]));
        assert!(!entangled.discrepancy);
        assert!(orbits.iter().all(|o| !o.discrepancy));
    }

    #[test]
    fn orbit_stabilizer_and_totals() {
        for mode in [GroupMode::RowCol, GroupMode::RowColSwap] {
            let g = SymmetryGroup::new(mode);
            for k in 1..=9 {
                let orbits = census(k, &g, 0).unwrap();
                assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), binomial(9, k));
                for o in &orbits {
                    assert_eq!(o.size * g.stabilizer_order(o.canonical), g.order());
                    assert_eq!(g.orbit(o.canonical), o.representatives);
                }
            }
        }
    }

    #[test]
    fn label_examples() {
        let g = SymmetryGroup::new(GroupMode::RowColSwap);
        let m = paper_label(pat("U1,U2,V1,V2"), &g);
        assert_eq!(m.labels, BTreeSet::from(["IV_4"]));
        assert!(!m.discrepancy);
        assert_eq!(paper_label(pat("U2,U3,V2,V3,W1"), &g).labels, BTreeSet::from(["V_2"]));
        let m = paper_label(pat("U1,U2,V1,V3,W2"), &g);
        assert_eq!(m.labels, BTreeSet::from(["V_5", "V_6"]));
        assert!(m.discrepancy);
        let m = paper_label(pat("U1"), &g);
        assert!(m.labels.is_empty() && !m.discrepancy);
        let m = paper_label(pat("U1,U2,U3,V1,V2,V3,W1"), &g);
        assert!(m.labels.is_empty() && !m.discrepancy);
    }

    #[test]
    fn every_table_type_lands_in_an_orbit_of_its_size() {
        let g = SymmetryGroup::new(GroupMode::RowColSwap);
        for (label, reps) in TABLE_TYPES {
            for r in *reps {
                let m = paper_label(pat(r), &g);
                assert!(m.labels.contains(label), "{label} {r} -> {:?}", m.labels);
            }
        }
    }

    #[test]
    fn group_mode_parse() {
        assert_eq!("rowcol".parse::<GroupMode>().unwrap(), GroupMode::RowCol);
        assert_eq!("rowcol+swap".parse::<GroupMode>().unwrap(), GroupMode::RowColSwap);
        assert!("swap".parse::<GroupMode>().is_err());
    }
}
