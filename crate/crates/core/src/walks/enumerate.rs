//! Streaming depth-first enumeration of canonical walk histories, and the
//! census that tallies them by weight signature.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::history::{LoopType, Move, WalkHistory};
use crate::error::{usage, Error, Result};
use crate::par::Exec;

/// Largest half-length enumerated unless raised with [`set_k_max`].
///
/// The number of histories grows roughly fivefold per unit of `k`; `k = 8`
/// takes well under a second, each further step costs about five times more.
pub const DEFAULT_K_MAX: usize = 8;

static K_MAX: AtomicUsize = AtomicUsize::new(DEFAULT_K_MAX);

pub fn k_max() -> usize {
    K_MAX.load(Ordering::Relaxed)
}

pub fn set_k_max(k: usize) {
    K_MAX.store(k, Ordering::Relaxed);
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(usage("k must be >= 1"));
    }
    if k > k_max() {
        return Err(Error::Resource(format!(
            "k = {k} exceeds the enumeration limit k_max = {}",
            k_max()
        )));
    }
    Ok(())
}

fn dfs<F: FnMut(&WalkHistory)>(h: &mut WalkHistory, total: usize, f: &mut F) {
    let remaining = total - h.len();
    if remaining == 0 {
        if h.current() == 0 {
            f(h);
        }
        return;
    }
    let d = h.current_depth();
    if d > 0 {
        h.push(Move::Up);
        dfs(h, total, f);
        h.pop();
    }
    if remaining > d + 1 {
        for i in 0..h.num_children(h.current()) {
            h.push(Move::Down(i as u8));
            dfs(h, total, f);
            h.pop();
        }
        h.push(Move::New);
        dfs(h, total, f);
        h.pop();
    }
}

/// Visit every canonical closed walk of length `2k` exactly once.
pub fn for_each_history<F: FnMut(&WalkHistory)>(k: usize, mut f: F) -> Result<()> {
    check_k(k)?;
    let mut h = WalkHistory::new();
    dfs(&mut h, 2 * k, &mut f);
    Ok(())
}

/// Collect the move sequences of every history (small `k` only).
pub fn enumerate_histories(k: usize) -> Result<Vec<Vec<Move>>> {
    let mut out = Vec::new();
    for_each_history(k, |h| out.push(h.moves().to_vec()))?;
    Ok(out)
}

/// Feasible walk prefixes of length `len`, used to split the search tree.
fn prefixes(total: usize, len: usize) -> Vec<Vec<Move>> {
    fn go(h: &mut WalkHistory, total: usize, len: usize, out: &mut Vec<Vec<Move>>) {
        if h.len() == len {
            out.push(h.moves().to_vec());
            return;
        }
        let remaining = total - h.len();
        let d = h.current_depth();
        if d > 0 {
            h.push(Move::Up);
            go(h, total, len, out);
            h.pop();
        }
        if remaining > d + 1 {
            for i in 0..h.num_children(h.current()) {
                h.push(Move::Down(i as u8));
                go(h, total, len, out);
                h.pop();
            }
            h.push(Move::New);
            go(h, total, len, out);
            h.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut WalkHistory::new(), total, len, &mut out);
    out
}

/// The data a history's weight depends on: distinct children of the root
/// and, sorted, the nonzero distinct-children counts of the other vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub root_l: u8,
    pub others: Vec<u8>,
}

impl Signature {
    pub fn of(h: &WalkHistory) -> Self {
        let counts = h.child_counts();
        let mut others: Vec<u8> = counts[1..].iter().filter(|&&l| l > 0).map(|&l| l as u8).collect();
        others.sort_unstable_by(|a, b| b.cmp(a));
        Signature { root_l: counts[0] as u8, others }
    }

    /// Number of distinct edges of any history with this signature.
    pub fn alpha(&self) -> usize {
        self.root_l as usize + self.others.iter().map(|&l| l as usize).sum::<usize>()
    }
}

/// Where the two quadruply visited edges of a (1,1)-history sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneOneSite {
    /// Both below the root, in the subtree of the same root child.
    SameSubtree,
    /// Below the root, in subtrees of different root children.
    DifferentSubtrees,
    /// One root edge; the other below it, inside a single excursion.
    RootWithLoopBelow,
    /// One root edge; the other in the subtree of a different root child.
    RootAndSibling,
    /// Both are root edges.
    RootRoot,
    /// One root edge; the other below it, traversed in both excursions.
    RootSharedBelow,
}

impl OneOneSite {
    pub const ALL: [OneOneSite; 6] = [
        OneOneSite::SameSubtree,
        OneOneSite::DifferentSubtrees,
        OneOneSite::RootWithLoopBelow,
        OneOneSite::RootAndSibling,
        OneOneSite::RootRoot,
        OneOneSite::RootSharedBelow,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn classify(h: &WalkHistory) -> Option<OneOneSite> {
        if h.loop_type() != LoopType::OneOne {
            return None;
        }
        let quad: Vec<usize> = h
            .edge_multiplicities()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == 4)
            .map(|(i, _)| i + 1)
            .collect();
        let (e, f) = (quad[0], quad[1]);
        let at_root = |v: usize| h.parent(v) == 0;
        Some(match (at_root(e), at_root(f)) {
            (true, true) => OneOneSite::RootRoot,
            (false, false) => {
                if h.top_ancestor(e) == h.top_ancestor(f) {
                    OneOneSite::SameSubtree
                } else {
                    OneOneSite::DifferentSubtrees
                }
            }
            (root_e, _) => {
                let (top, low) = if root_e { (e, f) } else { (f, e) };
                if !h.is_ancestor(top, low) {
                    OneOneSite::RootAndSibling
                } else {
                    let roots = h.root_positions();
                    let excursion_of = |step: usize| roots.iter().filter(|&&r| r <= step).count();
                    let mut seen = h
                        .edge_sequence()
                        .iter()
                        .enumerate()
                        .filter(|(_, &ed)| ed as usize == low)
                        .map(|(i, _)| excursion_of(i));
                    let first = seen.next();
                    if seen.all(|x| Some(x) == first) {
                        OneOneSite::RootWithLoopBelow
                    } else {
                        OneOneSite::RootSharedBelow
                    }
                }
            }
        })
    }
}

/// Counts attached to one signature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    /// Histories by loop type, indexed by [`LoopType::index`].
    pub by_type: [u64; 5],
    /// Ordered splits into two edge-disjoint 0-loops.
    pub pair_zero: u64,
    /// Ordered splits into three pairwise edge-disjoint 0-loops.
    pub triple_zero: u64,
    /// Ordered splits into an edge-disjoint 1-loop and 0-loop, either order.
    pub pair_one_zero: u64,
    /// (1,1)-histories by [`OneOneSite::index`].
    pub one_one_sites: [u64; 6],
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        for i in 0..5 {
            self.by_type[i] += o.by_type[i];
        }
        for i in 0..6 {
            self.one_one_sites[i] += o.one_one_sites[i];
        }
        self.pair_zero += o.pair_zero;
        self.triple_zero += o.triple_zero;
        self.pair_one_zero += o.pair_one_zero;
    }

    pub fn total(&self) -> u64 {
        self.by_type.iter().sum()
    }
}

fn part_mults(h: &WalkHistory, from: usize, to: usize) -> Vec<u32> {
    let mut m = vec![0u32; h.alpha() + 1];
    for &e in &h.edge_sequence()[from..to] {
        m[e as usize] += 1;
    }
    m
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn part_type(m: &[u32]) -> LoopType {
    LoopType::classify(m.iter().copied())
}

/// Split counts of one history. A split into edge-disjoint parts with
/// the requested types forces the whole walk to be a 0-loop (pairs and
/// triples of 0-loops) or a 1-loop (1-loop plus 0-loop), so other types
/// are skipped.
fn splits(h: &WalkHistory, ty: LoopType, t: &mut Tally) {
    let n = h.len();
    let roots = h.root_positions();
    match ty {
        LoopType::Zero => {
            for (i, &s) in roots.iter().enumerate() {
                let a = part_mults(h, 0, s);
                let b = part_mults(h, s, n);
                if disjoint(&a, &b) && part_type(&a) == LoopType::Zero && part_type(&b) == LoopType::Zero {
                    t.pair_zero += 1;
                }
                for &s2 in &roots[i..] {
                    let b = part_mults(h, s, s2);
                    let c = part_mults(h, s2, n);
                    let ok = disjoint(&a, &b)
                        && disjoint(&a, &c)
                        && disjoint(&b, &c)
                        && [&a, &b, &c].iter().all(|m| part_type(m) == LoopType::Zero);
                    if ok {
                        t.triple_zero += 1;
                    }
                }
            }
        }
        LoopType::One => {
            for &s in &roots {
                let a = part_mults(h, 0, s);
                let b = part_mults(h, s, n);
                if !disjoint(&a, &b) {
                    continue;
                }
                let types = (part_type(&a), part_type(&b));
                if matches!(types, (LoopType::One, LoopType::Zero) | (LoopType::Zero, LoopType::One)) {
                    t.pair_one_zero += 1;
                }
            }
        }
        _ => {}
    }
}

/// All histories of half-length `k`, tallied by signature.
#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub k: usize,
    pub histories: u64,
    pub entries: BTreeMap<Signature, Tally>,
}

impl Census {
    fn record(&mut self, h: &WalkHistory) {
        let ty = h.loop_type();
        let entry = self.entries.entry(Signature::of(h)).or_default();
        entry.by_type[ty.index()] += 1;
        splits(h, ty, entry);
        if let Some(site) = OneOneSite::classify(h) {
            entry.one_one_sites[site.index()] += 1;
        }
        self.histories += 1;
    }

    fn merge(&mut self, other: Census) {
        self.histories += other.histories;
        for (sig, t) in other.entries {
            self.entries.entry(sig).or_default().merge(&t);
        }
    }

    /// Number of histories with `alpha` distinct edges, for every alpha.
    pub fn alpha_counts(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (sig, t) in &self.entries {
            *out.entry(sig.alpha()).or_insert(0) += t.total();
        }
        out
    }

    pub fn type_counts(&self) -> [u64; 5] {
        let mut out = [0; 5];
        for t in self.entries.values() {
            for (o, v) in out.iter_mut().zip(t.by_type) {
                *o += v;
            }
        }
        out
    }

    pub fn one_one_site_counts(&self) -> [u64; 6] {
        let mut out = [0; 6];
        for t in self.entries.values() {
            for (o, v) in out.iter_mut().zip(t.one_one_sites) {
                *o += v;
            }
        }
        out
    }
}

/// Build the census for `k`, splitting the search over walk prefixes.
pub fn build_census(k: usize, exec: Exec) -> Result<Census> {
    check_k(k)?;
    let total = 2 * k;
    let work = prefixes(total, total.min(6));
    let parts = exec.map(work, |prefix| {
        let mut h = WalkHistory::from_moves(&prefix).expect("prefix replays");
        let mut local = Census { k, histories: 0, entries: BTreeMap::new() };
        dfs(&mut h, total, &mut |w: &WalkHistory| local.record(w));
        local
    });
    let mut census = Census { k, histories: 0, entries: BTreeMap::new() };
    for p in parts {
        census.merge(p);
    }
    Ok(census)
}

type CensusCache = Mutex<HashMap<usize, Arc<Census>>>;

fn cache() -> &'static CensusCache {
    static CACHE: OnceLock<CensusCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`build_census`] with the default execution strategy.
pub fn census(k: usize) -> Result<Arc<Census>> {
    check_k(k)?;
    if let Some(c) = cache().lock().expect("census cache poisoned").get(&k) {
        return Ok(Arc::clone(c));
    }
    let built = Arc::new(build_census(k, Exec::default())?);
    cache()
        .lock()
        .expect("census cache poisoned")
        .insert(k, Arc::clone(&built));
    Ok(built)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_listings() {
        let one = enumerate_histories(1).unwrap();
        assert_eq!(one, vec![vec![Move::New, Move::Up]]);
        let h = WalkHistory::from_moves(&one[0]).unwrap();
        assert_eq!((h.alpha(), h.loop_type()), (1, LoopType::Zero));

        let two = enumerate_histories(2).unwrap();
        assert_eq!(two.len(), 3);
        let mut kinds: Vec<(usize, LoopType)> = two
            .iter()
            .map(|m| {
                let h = WalkHistory::from_moves(m).unwrap();
                (h.alpha(), h.loop_type())
            })
            .collect();
        kinds.sort();
        assert_eq!(kinds, vec![(1, LoopType::One), (2, LoopType::Zero), (2, LoopType::Zero)]);
    }

    #[test]
    fn alpha_partition_at_four() {
        let c = build_census(4, Exec::Sequential).unwrap();
        let counts: Vec<(usize, u64)> = c.alpha_counts().into_iter().collect();
        assert_eq!(counts, vec![(1, 1), (2, 14), (3, 28), (4, 14)]);
        assert_eq!(c.type_counts()[LoopType::OneOne.index()], 6);
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = build_census(6, Exec::Sequential).unwrap();
        let b = build_census(6, Exec::Parallel).unwrap();
        assert_eq!(a.histories, b.histories);
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn multiplicities_even_and_sum_to_length() {
        for k in 1..=6 {
            for_each_history(k, |h| {
                let m = h.edge_multiplicities();
                assert!(m.iter().all(|&x| x >= 2 && x % 2 == 0));
                assert_eq!(m.iter().sum::<u32>() as usize, 2 * k);
            })
            .unwrap();
        }
    }

    #[test]
    fn limit_enforced() {
        assert!(matches!(census(k_max() + 1), Err(Error::Resource(_))));
        assert!(matches!(census(0), Err(Error::Usage(_))));
    }
}
