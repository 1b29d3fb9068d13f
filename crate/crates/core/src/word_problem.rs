//! Bounded equality search in `G_n^k` with sound certificates.
//!
//! `Equal` carries an explicit path of single moves; `Distinct` carries an
//! invariant that differs (parity vector or a coloring). Everything else is
//! `Unknown`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biquandle::{conditional_involution, gaussian, swap, FiniteKBiquandle, Involution, MultiplicitySet};
use crate::coloring::{for_each_tuple, propagate_colors};
use crate::error::{Error, Result};
use crate::gnk::{
    apply_move_masks, deletion_sites, swap_sites, tetrahedron_sites, FreeKBraidWord, KSubset, Move,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of moves explored outward from each word.
    pub depth: usize,
    /// Maximum number of distinct words visited over the whole search.
    pub nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            depth: 8,
            nodes: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The generator whose letter count differs mod 2.
    Parity { subset: KSubset },
    /// Source colors whose sink colors differ under `biquandle`.
    Coloring {
        biquandle: String,
        chi: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Consecutive words differ by one move; first is `w1`, last is `w2`.
    Equal { path: Vec<FreeKBraidWord> },
    Distinct { witness: Witness },
    Unknown { explored: usize },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equal { .. } => "equal",
            Verdict::Distinct { .. } => "distinct",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

/// Separating biquandles tried on words of arity `k` over `n` strands.
fn separators(n: usize, k: usize) -> Vec<(String, FiniteKBiquandle)> {
    let mut out = Vec::new();
    if let Ok(g) = gaussian(k) {
        out.push((format!("gaussian({k})"), g));
    }
    if k <= 6 {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let tau = Involution::new(3, &[(a, b)]).expect("valid transposition");
            let full = MultiplicitySet::attainable(&tau, k);
            let members: Vec<Vec<usize>> = full.members().iter().cloned().collect();
            // Singletons and the full set keep the library small.
            for v in &members {
                if let Ok(mu) = MultiplicitySet::new(k, 1, [v.clone()]) {
                    if let Ok(b) = conditional_involution(&tau, &mu, k) {
                        out.push((format!("conditional(tau={tau}, mu={mu})"), b));
                    }
                }
            }
        }
    }
    if k == 2 && n <= 16 {
        if let Ok(s) = swap(n) {
            out.push((format!("swap({n})"), s));
        }
    }
    out
}

const EXHAUSTIVE_LIMIT: usize = 4096;
const SAMPLES: usize = 256;

/// Looks for a coloring that tells the words apart.
pub fn coloring_separation(w1: &FreeKBraidWord, w2: &FreeKBraidWord) -> Option<Witness> {
    let n = w1.n();
    for (name, b) in separators(n, w1.k()) {
        let m = b.m();
        let mut found = None;
        let mut test = |chi: &[usize]| {
            if found.is_some() {
                return;
            }
            let l = propagate_colors(w1, &b, chi).expect("valid colors");
            let r = propagate_colors(w2, &b, chi).expect("valid colors");
            if l != r {
                found = Some(Witness::Coloring {
                    biquandle: name.clone(),
                    chi: chi.to_vec(),
                    left: l,
                    right: r,
                });
            }
        };
        if name.starts_with("swap") {
            let chi: Vec<usize> = (0..n).collect();
            test(&chi);
        } else if (m as f64).powi(n as i32) <= EXHAUSTIVE_LIMIT as f64 {
            for_each_tuple(n, m, &mut test);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6b62_7261_6964);
            for _ in 0..SAMPLES {
                let chi: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
                test(&chi);
            }
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

type Parents = HashMap<Vec<u64>, Option<Vec<u64>>>;

struct Side {
    parents: Parents,
    frontier: Vec<Vec<u64>>,
}

impl Side {
    fn new(start: Vec<u64>) -> Self {
        let mut parents = HashMap::new();
        parents.insert(start.clone(), None);
        Side {
            parents,
            frontier: vec![start],
        }
    }

    fn chain(&self, from: &[u64]) -> Vec<Vec<u64>> {
        let mut out = vec![from.to_vec()];
        let mut cur = from.to_vec();
        while let Some(Some(p)) = self.parents.get(&cur) {
            out.push(p.clone());
            cur = p.clone();
        }
        out
    }
}

fn successors(w: &[u64], k: usize, inserts: Option<&[u64]>, out: &mut Vec<Vec<u64>>) {
    out.clear();
    let mut push = |mv: Move| {
        if let Some(x) = apply_move_masks(w, k, &mv) {
            out.push(x);
        }
    };
    for pos in deletion_sites(w) {
        push(Move::Delete { pos });
    }
    for pos in tetrahedron_sites(w, k) {
        push(Move::Tetrahedron { pos });
    }
    for pos in swap_sites(w, k) {
        push(Move::Swap { pos });
    }
    if let Some(subsets) = inserts {
        for pos in 0..=w.len() {
            for &s in subsets {
                let mut x = Vec::with_capacity(w.len() + 2);
                x.extend_from_slice(&w[..pos]);
                x.push(s);
                x.push(s);
                x.extend_from_slice(&w[pos..]);
                out.push(x);
            }
        }
    }
}

enum SearchOutcome {
    Found(Vec<Vec<u64>>),
    NotFound,
}

/// Bidirectional breadth-first search; each side grows at most `depth`
/// layers. Insertions are allowed only while the word stays within
/// `max_len`.
fn bidirectional(
    a: Vec<u64>,
    b: Vec<u64>,
    k: usize,
    inserts: Option<&[u64]>,
    max_len: usize,
    budget: SearchBudget,
    explored: &mut usize,
) -> SearchOutcome {
    let mut sides = [Side::new(a.clone()), Side::new(b.clone())];
    *explored += if a == b { 1 } else { 2 };
    let mut layers = [0usize; 2];
    let mut buf = Vec::new();
    loop {
        // Grow the side with the smaller frontier that still has depth left.
        let candidates: Vec<usize> = (0..2)
            .filter(|&i| layers[i] < budget.depth && !sides[i].frontier.is_empty())
            .collect();
        let Some(&s) = candidates
            .iter()
            .min_by_key(|&&i| (sides[i].frontier.len(), i))
        else {
            return SearchOutcome::NotFound;
        };
        let o = 1 - s;
        let frontier = std::mem::take(&mut sides[s].frontier);
        let mut next = Vec::new();
        for w in &frontier {
            let ins = if w.len() + 2 <= max_len { inserts } else { None };
            successors(w, k, ins, &mut buf);
            for x in buf.drain(..) {
                if sides[s].parents.contains_key(&x) {
                    continue;
                }
                sides[s].parents.insert(x.clone(), Some(w.clone()));
                if sides[o].parents.contains_key(&x) {
                    let mut from_s = sides[s].chain(&x);
                    let from_o = sides[o].chain(&x);
                    from_s.reverse();
                    from_s.extend(from_o.into_iter().skip(1));
                    if s == 1 {
                        from_s.reverse();
                    }
                    return SearchOutcome::Found(from_s);
                }
                *explored += 1;
                if *explored >= budget.nodes {
                    return SearchOutcome::NotFound;
                }
                next.push(x);
            }
        }
        sides[s].frontier = next;
        layers[s] += 1;
    }
}

/// Decides `w1 = w2` in `G_n^k` within the budget.
///
/// Distinctness is tried first (parity, then colorings); then a search using
/// only non-lengthening moves; then a search that also inserts `a_m a_m`.
/// `depth` bounds the number of moves taken from each end, so paths have at
/// most `2 * depth` moves.
pub fn equal_bounded(w1: &FreeKBraidWord, w2: &FreeKBraidWord, budget: SearchBudget) -> Result<Verdict> {
    if w1.n() != w2.n() || w1.k() != w2.k() {
        return Err(Error::Mismatch {
            n1: w1.n(),
            k1: w1.k(),
            n2: w2.n(),
            k2: w2.k(),
        });
    }
    if w1 == w2 {
        return Ok(Verdict::Equal {
            path: vec![w1.clone()],
        });
    }
    if let Some(subset) = w1.parity_vector().first_difference(&w2.parity_vector()) {
        return Ok(Verdict::Distinct {
            witness: Witness::Parity { subset },
        });
    }
    if let Some(witness) = coloring_separation(w1, w2) {
        return Ok(Verdict::Distinct { witness });
    }

    let (n, k) = (w1.n(), w1.k());
    let m1 = w1.masks();
    let m2 = w2.masks();
    // Cancel a common prefix and suffix; the path is lifted back afterwards.
    let pre = m1.iter().zip(&m2).take_while(|(a, b)| a == b).count();
    let suf = m1[pre..]
        .iter()
        .rev()
        .zip(m2[pre..].iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    let core1 = m1[pre..m1.len() - suf].to_vec();
    let core2 = m2[pre..m2.len() - suf].to_vec();

    let mut explored = 0;
    let max_len = core1.len().max(core2.len());
    let mut outcome = bidirectional(core1.clone(), core2.clone(), k, None, max_len, budget, &mut explored);
    if matches!(outcome, SearchOutcome::NotFound) && explored < budget.nodes {
        let subsets: Vec<u64> = KSubset::all(n, k).iter().map(|s| s.mask()).collect();
        let remaining = SearchBudget {
            depth: budget.depth,
            nodes: budget.nodes - explored,
        };
        let mut more = 0;
        outcome = bidirectional(core1, core2, k, Some(&subsets), max_len + 4, remaining, &mut more);
        explored += more;
    }
    match outcome {
        SearchOutcome::Found(path) => {
            let path = path
                .into_iter()
                .map(|core| {
                    let mut full = m1[..pre].to_vec();
                    full.extend(core);
                    full.extend_from_slice(&m1[m1.len() - suf..]);
                    FreeKBraidWord::from_masks_unchecked(n, k, &full)
                })
                .collect();
            Ok(Verdict::Equal { path })
        }
        SearchOutcome::NotFound => Ok(Verdict::Unknown { explored }),
    }
}

/// Whether consecutive words of `path` are one move apart.
pub fn verify_path(path: &[FreeKBraidWord]) -> bool {
    path.windows(2).all(|p| p[0].neighbors().contains(&p[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, k: usize, s: &str) -> FreeKBraidWord {
        FreeKBraidWord::parse(n, k, s).unwrap()
    }

    fn assert_equal(v: &Verdict, w1: &FreeKBraidWord, w2: &FreeKBraidWord) {
        match v {
            Verdict::Equal { path } => {
                assert_eq!(path.first(), Some(w1));
                assert_eq!(path.last(), Some(w2));
                assert!(verify_path(path));
            }
            other => panic!("expected Equal, got {other:?}"),
        }
    }

    #[test]
    fn reflexive_and_tetrahedron() {
        let a = w(3, 2, "a{1,2} a{1,3}");
        assert_eq!(
            equal_bounded(&a, &a, SearchBudget::default()).unwrap(),
            Verdict::Equal { path: vec![a.clone()] }
        );
        let l = w(3, 2, "a{1,2} a{1,3} a{2,3}");
        let r = w(3, 2, "a{2,3} a{1,3} a{1,2}");
        assert_equal(&equal_bounded(&l, &r, SearchBudget::default()).unwrap(), &l, &r);
    }

    #[test]
    fn parity_separates() {
        let v = equal_bounded(&w(3, 2, "a{1,2}"), &w(3, 2, "a{1,3}"), SearchBudget::default()).unwrap();
        assert!(matches!(v, Verdict::Distinct { witness: Witness::Parity { .. } }));
    }

    #[test]
    fn coloring_separates_same_parity() {
        // Same letters, different order, not commuting: the swap coloring
        // sees different strand permutations.
        let a = w(3, 2, "a{1,2} a{2,3}");
        let b = w(3, 2, "a{2,3} a{1,2}");
        let v = equal_bounded(&a, &b, SearchBudget::default()).unwrap();
        assert!(matches!(v, Verdict::Distinct { witness: Witness::Coloring { .. } }), "{v:?}");
    }

    #[test]
    fn mismatch_is_error() {
        assert!(equal_bounded(&w(3, 2, "e"), &w(4, 2, "e"), SearchBudget::default()).is_err());
    }

    #[test]
    fn abc_squared_is_trivial() {
        let l = w(3, 2, "a{1,2} a{1,3} a{2,3} a{1,2} a{1,3} a{2,3}");
        let e = w(3, 2, "e");
        assert_equal(&equal_bounded(&l, &e, SearchBudget::default()).unwrap(), &l, &e);
    }

    #[test]
    fn prefix_is_lifted() {
        let l = w(4, 2, "a{3,4} a{1,2} a{1,3} a{2,3} a{1,4}");
        let r = w(4, 2, "a{3,4} a{2,3} a{1,3} a{1,2} a{1,4}");
        assert_equal(&equal_bounded(&l, &r, SearchBudget::default()).unwrap(), &l, &r);
    }

    #[test]
    fn zero_depth_is_literal_only() {
        let l = w(3, 2, "a{1,2} a{1,2}");
        let e = w(3, 2, "e");
        let v = equal_bounded(&l, &e, SearchBudget { depth: 0, nodes: 10 }).unwrap();
        assert!(matches!(v, Verdict::Unknown { .. }));
    }
}
