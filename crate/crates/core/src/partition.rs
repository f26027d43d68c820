//! Partition combinatorics: strips, dominance, the branching order `⪯`,
//! the Pieri proximity relation `~_r`, conjugation and box complements.
//!
//! Partitions are stored without trailing zeros; operations that need an
//! ambient length `n` take it explicitly. Indices in the public API are
//! 1-based, matching the usual `λ_1 ≥ λ_2 ≥ ...` notation.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates weak decrease; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Sorts the parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `λ_j` for 1-based `j`, zero beyond the length.
    pub fn at(&self, j: usize) -> u32 {
        if j == 0 {
            panic!("partition parts are 1-based");
        }
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> u32 {
        self.at(1)
    }

    /// Parts padded with zeros to length `n`; requires `ℓ(λ) ≤ n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        assert!(self.len() <= n, "{self} does not fit in {n} parts");
        let mut v = self.0.clone();
        v.resize(n, 0);
        v
    }

    pub fn fits(&self, n: usize) -> bool {
        self.len() <= n
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.first();
        Partition(
            (1..=m)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// `other ⊂ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|j| other.at(j) <= self.at(j))
    }

    /// Multiplicity `m_l(λ)` of the part `l` among the first `n` parts.
    pub fn multiplicity(&self, l: u32, n: usize) -> usize {
        (1..=n).filter(|&j| self.at(j) == l).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Partition::new(v).map_err(serde::de::Error::custom)
    }
}

/// Convenience constructor for literals; panics on invalid input.
pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition literal")
}

/// Graded order: by size, then lexicographically. Enumerations list
/// partitions ascending in size and, within a size, lexicographically
/// descending (`(2)` before `(1,1)`).
pub fn graded_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.size()
        .cmp(&b.size())
        .then_with(|| b.parts().cmp(a.parts()))
}

/// Size, then lexicographic: a linear extension of the dominance order.
pub fn graded_lex_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.size()
        .cmp(&b.size())
        .then_with(|| a.parts().cmp(b.parts()))
}

pub fn dominance_leq(mu: &Partition, lam: &Partition, n: usize) -> bool {
    let (mut sm, mut sl) = (0u64, 0u64);
    for j in 1..=n.max(mu.len()).max(lam.len()) {
        sm += mu.at(j) as u64;
        sl += lam.at(j) as u64;
        if sm > sl {
            return false;
        }
    }
    true
}

/// `λ/μ` is a horizontal strip: `λ_1 ≥ μ_1 ≥ λ_2 ≥ μ_2 ≥ ...`.
pub fn is_horizontal_strip(lam: &Partition, mu: &Partition) -> bool {
    let len = lam.len().max(mu.len());
    (1..=len).all(|j| lam.at(j) >= mu.at(j) && mu.at(j) >= lam.at(j + 1))
}

/// `λ/μ` is a vertical strip: `μ_j ≤ λ_j ≤ μ_j + 1`.
pub fn is_vertical_strip(lam: &Partition, mu: &Partition) -> bool {
    let len = lam.len().max(mu.len());
    (1..=len).all(|j| mu.at(j) <= lam.at(j) && lam.at(j) <= mu.at(j) + 1)
}

/// Calls `f` on every partition `ν` with `lo_j ≤ ν_j ≤ hi_j`, weakly
/// decreasing; stops early when `f` returns `true`.
fn search_between(lo: &[u32], hi: &[u32], f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    fn rec(
        j: usize,
        lo: &[u32],
        hi: &[u32],
        cur: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if j == lo.len() {
            return f(cur);
        }
        let cap = if j == 0 { hi[0] } else { hi[j].min(cur[j - 1]) };
        if lo[j] > cap {
            return false;
        }
        for v in (lo[j]..=cap).rev() {
            cur.push(v);
            if rec(j + 1, lo, hi, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, lo, hi, &mut Vec::with_capacity(lo.len()), f)
}

/// `μ ⪯ λ` for `μ ∈ Λ_n`, `λ ∈ Λ_{n+1}`: some `ν ∈ Λ_n` with `μ ⊂ ν ⊂ λ`
/// and both `λ/ν`, `ν/μ` horizontal strips.
pub fn precedes(mu: &Partition, lam: &Partition, n: usize) -> bool {
    if !mu.fits(n) || !lam.fits(n + 1) {
        return false;
    }
    let lo = mu.padded(n);
    let hi: Vec<u32> = (1..=n).map(|j| lam.at(j)).collect();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return false;
    }
    search_between(&lo, &hi, &mut |nu| {
        let nu = Partition::new(nu.to_vec()).expect("search yields partitions");
        is_horizontal_strip(lam, &nu) && is_horizontal_strip(&nu, mu)
    })
}

/// `μ ~_r λ`: some `ν ⊂ λ, μ` with `λ/ν`, `μ/ν` vertical strips and
/// `|λ/ν| + |μ/ν| ≤ r`.
pub fn proximity(lam: &Partition, mu: &Partition, r: usize, n: usize) -> bool {
    if !lam.fits(n) || !mu.fits(n) {
        return false;
    }
    let mins: Vec<u32> = (1..=n).map(|j| lam.at(j).min(mu.at(j))).collect();
    let lo: Vec<u32> = mins.iter().map(|&v| v.saturating_sub(1)).collect();
    let budget = (lam.size() + mu.size()) as i64 - r as i64;
    search_between(&lo, &mins, &mut |nu| {
        let nu = Partition::new(nu.to_vec()).expect("search yields partitions");
        2 * nu.size() as i64 >= budget && is_vertical_strip(lam, &nu) && is_vertical_strip(mu, &nu)
    })
}

/// The index sets `J, J^c, J_+, J_-` and signs `ε_j` of a pair `(λ, μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSets {
    pub j: Vec<usize>,
    pub jc: Vec<usize>,
    pub jplus: Vec<usize>,
    pub jminus: Vec<usize>,
    /// `eps[j-1] = ε_j`.
    pub eps: Vec<i8>,
}

impl IndexSets {
    /// Index sets determined by explicit `J_+`, `J_-` inside `{1..n}`.
    pub fn from_signed(jplus: &[usize], jminus: &[usize], n: usize) -> Self {
        let mut eps = vec![0i8; n];
        for &j in jplus {
            eps[j - 1] = 1;
        }
        for &j in jminus {
            eps[j - 1] = -1;
        }
        let j = (1..=n).filter(|&j| eps[j - 1] != 0).collect();
        let jc = (1..=n).filter(|&j| eps[j - 1] == 0).collect();
        IndexSets {
            j,
            jc,
            jplus: jplus.to_vec(),
            jminus: jminus.to_vec(),
            eps,
        }
    }

    pub fn eps_at(&self, j: usize) -> i8 {
        self.eps[j - 1]
    }
}

pub fn index_sets(lam: &Partition, mu: &Partition, n: usize) -> IndexSets {
    let jplus: Vec<usize> = (1..=n).filter(|&j| mu.at(j) > lam.at(j)).collect();
    let jminus: Vec<usize> = (1..=n).filter(|&j| mu.at(j) < lam.at(j)).collect();
    IndexSets::from_signed(&jplus, &jminus, n)
}

/// `m^n - μ`: the partition with parts `m - μ_{n+1-j}`, `j = 1..n`.
pub fn complement(m: u32, n: usize, mu: &Partition) -> Result<Partition> {
    if !mu.fits(n) || mu.first() > m {
        return Err(Error::InvalidPartition(format!(
            "{mu} is not contained in the {m}^{n} box"
        )));
    }
    Partition::new((1..=n).map(|j| m - mu.at(n + 1 - j)).collect())
}

/// `d(λ, μ) = |{ 1 ≤ j ≤ λ_1 : λ'_j = μ'_j + 1 }|` for `μ ⪯ λ`.
pub fn d_count(lam: &Partition, mu: &Partition) -> Result<usize> {
    let n = mu.len().max(lam.len().saturating_sub(1));
    if !precedes(mu, lam, n) {
        return Err(Error::InvalidPartition(format!(
            "{mu} does not precede {lam}"
        )));
    }
    let (lc, mc) = (lam.conjugate(), mu.conjugate());
    Ok((1..=lam.first() as usize)
        .filter(|&j| lc.at(j) == mc.at(j) + 1)
        .count())
}

/// All partitions inside the `n^m` box (at most `m` parts, each at most
/// `n`), in graded order.
pub fn enumerate_subpartitions(m: usize, n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let hi = vec![n; m];
    let lo = vec![0; m];
    search_between(&lo, &hi, &mut |nu| {
        out.push(Partition::new(nu.to_vec()).expect("search yields partitions"));
        false
    });
    out.sort_by(graded_cmp);
    out
}

/// All partitions of length at most `n` and size at most `max_size`, in
/// graded order.
pub fn enumerate_bounded(n: usize, max_size: u32) -> Vec<Partition> {
    let mut out: Vec<Partition> = enumerate_subpartitions(n, max_size)
        .into_iter()
        .filter(|p| p.size() <= max_size)
        .collect();
    out.sort_by(graded_cmp);
    out
}

/// All `μ ∈ Λ_n` with `μ ⪯ λ`, for `λ ∈ Λ_{n+1}`, in graded order.
pub fn predecessors(lam: &Partition, n: usize) -> Vec<Partition> {
    if !lam.fits(n + 1) {
        return Vec::new();
    }
    let lo: Vec<u32> = (1..=n).map(|j| lam.at(j + 2)).collect();
    let hi: Vec<u32> = (1..=n).map(|j| lam.at(j)).collect();
    let mut out = Vec::new();
    search_between(&lo, &hi, &mut |mu| {
        let mu = Partition::new(mu.to_vec()).expect("search yields partitions");
        if precedes(&mu, lam, n) {
            out.push(mu);
        }
        false
    });
    out.sort_by(graded_cmp);
    out
}

/// All `μ ∈ Λ_n` with `μ ~_r λ`, in graded order.
pub fn proximity_neighbors(lam: &Partition, r: usize, n: usize) -> Vec<Partition> {
    let lo: Vec<u32> = (1..=n).map(|j| lam.at(j).saturating_sub(1)).collect();
    let hi: Vec<u32> = (1..=n).map(|j| lam.at(j) + 1).collect();
    let mut out = Vec::new();
    search_between(&lo, &hi, &mut |mu| {
        let mu = Partition::new(mu.to_vec()).expect("search yields partitions");
        if proximity(lam, &mu, r, n) {
            out.push(mu);
        }
        false
    });
    out.sort_by(graded_cmp);
    out
}

/// Subsets of `items` of size `k`, in lexicographic order.
pub fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Disjoint pairs `(I_+, I_-)` of subsets of `k` with `|I_+| + |I_-| = p`.
pub fn signed_subsets(k: &[usize], p: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for i in subsets_of_size(k, p) {
        for mask in 0u32..(1 << p) {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            for (b, &j) in i.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    plus.push(j);
                } else {
                    minus.push(j);
                }
            }
            out.push((plus, minus));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(part(&[]).conjugate(), part(&[]));
        assert_eq!(part(&[2, 2]).conjugate(), part(&[2, 2]));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&part(&[1, 1]), &part(&[2]), 2));
        assert!(!dominance_leq(&part(&[2]), &part(&[1, 1]), 2));
        assert!(dominance_leq(&part(&[1]), &part(&[2]), 1));
    }

    #[test]
    fn graded_lex_extends_dominance() {
        let all = enumerate_bounded(3, 5);
        for a in &all {
            for b in &all {
                if a != b && dominance_leq(a, b, 3) {
                    assert_eq!(graded_lex_cmp(a, b), Ordering::Less, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn strip_examples() {
        assert!(is_horizontal_strip(&part(&[2, 1]), &part(&[1, 1])));
        assert!(!is_horizontal_strip(&part(&[2, 2]), &part(&[1])));
        assert!(is_horizontal_strip(&part(&[3]), &part(&[3])));
        assert!(is_vertical_strip(&part(&[2, 1]), &part(&[1, 1])));
        assert!(!is_vertical_strip(&part(&[3, 1]), &part(&[1, 1])));
        assert!(is_vertical_strip(&part(&[4, 2]), &part(&[4, 2])));
    }

    #[test]
    fn precedes_examples() {
        assert!(precedes(&part(&[1]), &part(&[2, 1]), 1));
        assert!(precedes(&part(&[]), &part(&[2, 1]), 1));
        assert!(!precedes(&part(&[3]), &part(&[2, 1]), 1));
    }

    #[test]
    fn proximity_examples() {
        assert!(proximity(&part(&[1]), &part(&[]), 1, 1));
        assert!(!proximity(&part(&[2]), &part(&[]), 1, 1));
        assert!(proximity(&part(&[1, 1]), &part(&[1]), 2, 2));
    }

    #[test]
    fn index_set_examples() {
        let s = index_sets(&part(&[2, 1]), &part(&[2, 2]), 2);
        assert_eq!(
            (
                s.j.clone(),
                s.jplus.clone(),
                s.jminus.clone(),
                s.eps.clone()
            ),
            (vec![2], vec![2], vec![], vec![0, 1])
        );
        let s = index_sets(&part(&[2, 1]), &part(&[2, 1]), 2);
        assert!(s.j.is_empty());
        assert_eq!(s.jc, vec![1, 2]);
        let s = index_sets(&part(&[2, 1]), &part(&[1, 1]), 2);
        assert_eq!((s.j, s.jminus, s.eps), (vec![1], vec![1], vec![-1, 0]));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(3, 2, &part(&[2])).unwrap(), part(&[3, 1]));
        assert_eq!(complement(2, 2, &part(&[2, 2])).unwrap(), part(&[]));
        assert_eq!(complement(2, 3, &part(&[])).unwrap(), part(&[2, 2, 2]));
        assert!(complement(1, 2, &part(&[2])).is_err());
    }

    #[test]
    fn d_count_examples() {
        assert_eq!(d_count(&part(&[2, 1]), &part(&[1])).unwrap(), 2);
        assert_eq!(d_count(&part(&[1, 1]), &part(&[1])).unwrap(), 1);
        assert_eq!(d_count(&part(&[2, 1]), &part(&[2, 1])).unwrap(), 0);
        assert!(d_count(&part(&[1]), &part(&[3])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_subpartitions(1, 1), vec![part(&[]), part(&[1])]);
        assert_eq!(
            enumerate_subpartitions(2, 1),
            vec![part(&[]), part(&[1]), part(&[1, 1])]
        );
        assert_eq!(
            enumerate_subpartitions(2, 2),
            vec![
                part(&[]),
                part(&[1]),
                part(&[2]),
                part(&[1, 1]),
                part(&[2, 1]),
                part(&[2, 2])
            ]
        );
    }

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn box_counts_are_binomial() {
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(
                    enumerate_subpartitions(m, n).len() as u64,
                    binom((m as u64) + n as u64, n as u64)
                );
            }
        }
    }

    #[test]
    fn signed_subset_counts() {
        // sum over |I|=p of 2^p choices: C(k,p) 2^p
        assert_eq!(signed_subsets(&[1, 2, 3], 2).len(), 12);
        assert_eq!(signed_subsets(&[1, 2], 0), vec![(vec![], vec![])]);
    }

    fn arb_partition(max_len: usize, max_part: u32) -> impl Strategy<Value = Partition> {
        prop::collection::vec(0..=max_part, 0..=max_len).prop_map(Partition::from_unsorted)
    }

    proptest! {
        #[test]
        fn conjugation_is_involutive(l in arb_partition(5, 5)) {
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
            prop_assert_eq!(l.conjugate().size(), l.size());
        }

        #[test]
        fn complement_is_involutive(mu in arb_partition(3, 4)) {
            let c = complement(4, 3, &mu).unwrap();
            prop_assert_eq!(complement(4, 3, &c).unwrap(), mu);
        }

        #[test]
        fn precedes_implies_containment_and_dominance(mu in arb_partition(2, 4), lam in arb_partition(3, 4)) {
            if precedes(&mu, &lam, 2) {
                prop_assert!(lam.contains(&mu));
                prop_assert!(dominance_leq(&mu, &lam, 3));
            }
        }

        #[test]
        fn proximity_symmetric_and_monotone(a in arb_partition(3, 3), b in arb_partition(3, 3), r in 1usize..3) {
            prop_assert_eq!(proximity(&a, &b, r, 3), proximity(&b, &a, r, 3));
            if proximity(&a, &b, r, 3) {
                prop_assert!(proximity(&a, &b, r + 1, 3));
            }
        }

        #[test]
        fn conjugation_swaps_strips(a in arb_partition(4, 4), b in arb_partition(4, 4)) {
            prop_assert_eq!(is_horizontal_strip(&a, &b), is_vertical_strip(&a.conjugate(), &b.conjugate()));
        }

        #[test]
        fn predecessors_match_definition(lam in arb_partition(3, 3)) {
            let preds = predecessors(&lam, 2);
            for mu in enumerate_subpartitions(2, 3) {
                prop_assert_eq!(preds.contains(&mu), precedes(&mu, &lam, 2));
            }
        }

        #[test]
        fn neighbors_match_definition(lam in arb_partition(3, 2), r in 1usize..=3) {
            let nb = proximity_neighbors(&lam, r, 3);
            for mu in enumerate_subpartitions(3, 3) {
                prop_assert_eq!(nb.contains(&mu), proximity(&lam, &mu, r, 3));
            }
        }

        #[test]
        fn proximity_eps_is_difference(lam in arb_partition(3, 3), mu in arb_partition(3, 3)) {
            if proximity(&lam, &mu, 3, 3) {
                let s = index_sets(&lam, &mu, 3);
                for j in 1..=3 {
                    prop_assert_eq!(s.eps_at(j) as i64, mu.at(j) as i64 - lam.at(j) as i64);
                }
            }
        }
    }
}
