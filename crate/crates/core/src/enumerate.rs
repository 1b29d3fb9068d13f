//! Exhaustive enumeration of k-biquandles on a small carrier, up to
//! relabeling of the carrier, and classification against the known
//! families.
//!
//! The search assigns images to sorted tuples in lexicographic order. Every
//! assignment is propagated along the `Σ_k`-orbit (equivariance) and paired
//! with its inverse assignment (involution), so both axioms hold
//! structurally. Partial tables are pruned by the tetrahedron identity on
//! every fully determined input; complete tables are then filtered by far
//! commutativity and the full tetrahedron check.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biquandle::{
    far_commutativity_failure, far_window_pairs, hat_windows, orbit_representatives,
    tetrahedron_failure, valid_flat_tables3, flat_derived3, FiniteKBiquandle, Involution,
    MultiplicitySet, TupleCodec, multiplicity_vector,
};
use crate::error::{Error, Result};

/// Default cap on partial assignments.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    pub nontrivial_only: bool,
    pub budget: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            nontrivial_only: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Search nodes (orbit assignments attempted).
    pub partial_assignments: u64,
    /// Complete equivariant involutive tables reached.
    pub candidates: u64,
    /// Partial tables cut by a determined tetrahedron violation.
    pub tetrahedron_prunes: u64,
    pub far_commutativity_failures: u64,
    pub tetrahedron_failures: u64,
    /// Complete tables passing every axiom, before isomorphism rejection.
    pub solutions: u64,
}

impl SearchStats {
    fn merge(&mut self, o: &SearchStats) {
        self.partial_assignments += o.partial_assignments;
        self.candidates += o.candidates;
        self.tetrahedron_prunes += o.tetrahedron_prunes;
        self.far_commutativity_failures += o.far_commutativity_failures;
        self.tetrahedron_failures += o.tetrahedron_failures;
        self.solutions += o.solutions;
    }
}

/// Known families, from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Trivial,
    ComponentwiseInvolution,
    ConditionalInvolution,
    FlatDerived,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// The most specific matching family.
    pub tag: Family,
    /// Every family the biquandle belongs to.
    pub families: Vec<Family>,
    /// A conditional-involution presentation `(τ, μ)` when one exists.
    pub conditional: Option<String>,
}

impl Classification {
    pub fn is(&self, family: Family) -> bool {
        self.families.contains(&family)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedClass {
    /// Canonical representative (least table over relabelings).
    pub biquandle: FiniteKBiquandle,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub m: usize,
    pub k: usize,
    pub nontrivial_only: bool,
    pub classes: Vec<EnumeratedClass>,
    pub stats: SearchStats,
}

pub fn enumerate_kbiquandles(m: usize, k: usize, nontrivial_only: bool) -> Result<EnumerationResult> {
    enumerate_with(
        m,
        k,
        EnumerationOptions {
            nontrivial_only,
            ..Default::default()
        },
    )
}

struct Space {
    k: usize,
    m: usize,
    codec: TupleCodec,
    /// `perm_image[p][x]`: index of tuple `x` with positions permuted by `p`.
    perm_image: Vec<Vec<u32>>,
    reps: Vec<u32>,
    hats: Vec<Vec<usize>>,
    far_pairs: Vec<(usize, Vec<usize>, Vec<usize>)>,
}

impl Space {
    fn new(m: usize, k: usize) -> Self {
        let codec = TupleCodec { m, len: k };
        let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
        let mut perm_image = Vec::with_capacity(perms.len());
        let mut x = vec![0; k];
        let mut y = vec![0; k];
        for p in &perms {
            let mut row = Vec::with_capacity(codec.count());
            for idx in 0..codec.count() {
                codec.decode_into(idx, &mut x);
                for (i, &pi) in p.iter().enumerate() {
                    y[pi] = x[i];
                }
                row.push(codec.encode(&y) as u32);
            }
            perm_image.push(row);
        }
        let reps = orbit_representatives(k, m)
            .iter()
            .map(|r| codec.encode(r) as u32)
            .collect();
        Space {
            k,
            m,
            codec,
            perm_image,
            reps,
            hats: hat_windows(k),
            far_pairs: far_window_pairs(k),
        }
    }
}

struct Search<'a> {
    space: &'a Space,
    table: Vec<u32>,
    trail: Vec<u32>,
    stats: SearchStats,
    found: BTreeSet<Vec<u32>>,
    counter: &'a AtomicU64,
    abort: &'a AtomicBool,
    budget: u64,
}

impl<'a> Search<'a> {
    fn set(&mut self, x: u32, y: u32) -> bool {
        let cur = self.table[x as usize];
        if cur == NONE {
            self.table[x as usize] = y;
            self.trail.push(x);
            true
        } else {
            cur == y
        }
    }

    /// Assigns `B(x) = y` on the whole orbit and `B(y) = x` on its orbit.
    fn assign(&mut self, x: u32, y: u32) -> bool {
        for p in 0..self.space.perm_image.len() {
            let px = self.space.perm_image[p][x as usize];
            let py = self.space.perm_image[p][y as usize];
            if !self.set(px, py) || !self.set(py, px) {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail above mark");
            self.table[x as usize] = NONE;
        }
    }

    fn window(&self, x: &mut [usize], positions: &[usize]) -> bool {
        let m = self.space.m;
        let mut idx = 0usize;
        for &p in positions {
            idx = idx * m + x[p];
        }
        let img = self.table[idx];
        if img == NONE {
            return false;
        }
        let mut img = img as usize;
        for &p in positions.iter().rev() {
            x[p] = img % m;
            img /= m;
        }
        true
    }

    /// False when some tetrahedron input is fully determined and violated.
    fn partial_tetrahedron_ok(&self) -> bool {
        let k = self.space.k;
        let codec = TupleCodec {
            m: self.space.m,
            len: k + 1,
        };
        let mut x = vec![0; k + 1];
        let mut left = vec![0; k + 1];
        let mut right = vec![0; k + 1];
        'outer: for idx in 0..codec.count() {
            codec.decode_into(idx, &mut x);
            left.copy_from_slice(&x);
            for w in self.space.hats.iter().rev() {
                if !self.window(&mut left, w) {
                    continue 'outer;
                }
            }
            right.copy_from_slice(&x);
            for w in &self.space.hats {
                if !self.window(&mut right, w) {
                    continue 'outer;
                }
            }
            if left != right {
                return false;
            }
        }
        true
    }

    fn tick(&mut self) -> bool {
        self.stats.partial_assignments += 1;
        let total = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if total > self.budget {
            self.abort.store(true, Ordering::Relaxed);
        }
        !self.abort.load(Ordering::Relaxed)
    }

    fn run(&mut self, from: usize) {
        let next = (from..self.space.reps.len())
            .find(|&i| self.table[self.space.reps[i] as usize] == NONE);
        let Some(pos) = next else {
            self.complete();
            return;
        };
        let r = self.space.reps[pos];
        for y in 0..self.space.codec.count() as u32 {
            if !self.tick() {
                return;
            }
            let mark = self.trail.len();
            if self.assign(r, y) {
                if self.partial_tetrahedron_ok() {
                    self.run(pos + 1);
                } else {
                    self.stats.tetrahedron_prunes += 1;
                }
            }
            self.undo(mark);
        }
    }

    fn complete(&mut self) {
        self.stats.candidates += 1;
        let b = FiniteKBiquandle::from_table_unchecked(self.space.k, self.space.m, self.table.clone());
        let mut cases = 0;
        if tetrahedron_failure(&b, &self.space.hats, &mut cases).is_some() {
            self.stats.tetrahedron_failures += 1;
            return;
        }
        if far_commutativity_failure(&b, &self.space.far_pairs, &mut cases).is_some() {
            self.stats.far_commutativity_failures += 1;
            return;
        }
        self.stats.solutions += 1;
        self.found.insert(b.canonical_form().table().to_vec());
    }
}

/// Enumerates every k-biquandle on `{0, ..., m-1}` up to isomorphism.
///
/// Subtrees below the first orbit representative run in parallel on the
/// current rayon pool; the result does not depend on the pool size.
pub fn enumerate_with(m: usize, k: usize, opts: EnumerationOptions) -> Result<EnumerationResult> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidParameters(format!(
            "need m >= 1 and k >= 1, got m={m} k={k}"
        )));
    }
    if m > 6 || k > 5 || m.pow(k as u32) > 1 << 16 {
        return Err(Error::InvalidParameters(format!(
            "m={m}, k={k} is beyond the supported enumeration range"
        )));
    }
    let space = Space::new(m, k);
    let counter = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let first = space.reps[0];
    let size = space.codec.count();

    let parts: Vec<(SearchStats, BTreeSet<Vec<u32>>)> = (0..size as u32)
        .into_par_iter()
        .map(|y| {
            let mut s = Search {
                space: &space,
                table: vec![NONE; size],
                trail: Vec::new(),
                stats: SearchStats::default(),
                found: BTreeSet::new(),
                counter: &counter,
                abort: &abort,
                budget: opts.budget,
            };
            if s.tick() && s.assign(first, y) {
                if s.partial_tetrahedron_ok() {
                    s.run(1);
                } else {
                    s.stats.tetrahedron_prunes += 1;
                }
            }
            (s.stats, s.found)
        })
        .collect();

    if abort.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded(opts.budget));
    }

    let mut stats = SearchStats::default();
    let mut tables = BTreeSet::new();
    for (st, found) in parts {
        stats.merge(&st);
        tables.extend(found);
    }
    let classes = tables
        .into_iter()
        .map(|t| FiniteKBiquandle::from_table_unchecked(k, m, t))
        .filter(|b| !(opts.nontrivial_only && b.is_identity()))
        .map(|b| {
            let classification = classify(&b);
            EnumeratedClass {
                biquandle: b,
                classification,
            }
        })
        .collect();
    Ok(EnumerationResult {
        m,
        k,
        nontrivial_only: opts.nontrivial_only,
        classes,
        stats,
    })
}

/// Finds `μ` with `B = B_{τ,μ}`, if any.
pub fn conditional_presentation(b: &FiniteKBiquandle, tau: &Involution) -> Option<MultiplicitySet> {
    if tau.m() != b.m() {
        return None;
    }
    let codec = b.codec();
    let mut fired: std::collections::BTreeMap<Vec<usize>, bool> = Default::default();
    for idx in 0..codec.count() {
        let x = codec.decode(idx);
        let y = codec.decode(b.table()[idx] as usize);
        let tx: Vec<usize> = x.iter().map(|&c| tau.apply(c)).collect();
        if tx == x {
            if y != x {
                return None;
            }
            continue;
        }
        let fires = if y == tx {
            true
        } else if y == x {
            false
        } else {
            return None;
        };
        let v = multiplicity_vector(tau, &x);
        match fired.insert(v, fires) {
            Some(prev) if prev != fires => return None,
            _ => {}
        }
    }
    let members = fired.into_iter().filter(|(_, f)| *f).map(|(v, _)| v);
    MultiplicitySet::new(b.k(), tau.t(), members).ok()
}

fn flat_derived_tables(m: usize) -> &'static BTreeSet<Vec<u32>> {
    static CACHE: OnceLock<Vec<BTreeSet<Vec<u32>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (0..=3)
            .map(|m| {
                if m == 0 {
                    return BTreeSet::new();
                }
                valid_flat_tables3(m)
                    .iter()
                    .filter_map(|f| flat_derived3(f).ok())
                    .map(|b| b.table().to_vec())
                    .collect()
            })
            .collect()
    });
    &all[m]
}

/// Matches a biquandle against the trivial, componentwise-involution,
/// conditional-involution and (for `k = 3`, `m <= 3`) flat-derived
/// families. Each family is closed under relabeling, so matching is done
/// against every involution directly.
pub fn classify(b: &FiniteKBiquandle) -> Classification {
    let mut families = Vec::new();
    let mut conditional = None;
    if b.is_identity() {
        families.push(Family::Trivial);
    }
    let involutions = Involution::all(b.m());
    for tau in involutions.iter().filter(|t| t.t() > 0) {
        if let Some(mu) = conditional_presentation(b, tau) {
            if mu.is_empty() {
                continue;
            }
            if mu == MultiplicitySet::attainable(tau, b.k()) && !families.contains(&Family::ComponentwiseInvolution) {
                families.push(Family::ComponentwiseInvolution);
            }
            if conditional.is_none() {
                conditional = Some(format!("tau={tau} mu={mu}"));
            }
        }
    }
    if conditional.is_some() || b.is_identity() {
        families.push(Family::ConditionalInvolution);
        if conditional.is_none() {
            conditional = Some("mu={}".into());
        }
    }
    if b.k() == 3 && b.m() <= 3 && flat_derived_tables(b.m()).contains(b.table()) {
        families.push(Family::FlatDerived);
    }
    families.sort();
    let tag = families.first().copied().unwrap_or(Family::Other);
    if families.is_empty() {
        families.push(Family::Other);
    }
    Classification {
        tag,
        families,
        conditional,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquandle::{check_axioms, conditional_involution, gaussian, is_isomorphic};

    #[test]
    fn single_point_carrier_has_only_identity() {
        for k in 1..=4 {
            let r = enumerate_kbiquandles(1, k, true).unwrap();
            assert!(r.classes.is_empty());
            let all = enumerate_kbiquandles(1, k, false).unwrap();
            assert_eq!(all.classes.len(), 1);
        }
    }

    #[test]
    fn z2_arity3_unique_nontrivial() {
        let r = enumerate_kbiquandles(2, 3, true).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert!(is_isomorphic(&r.classes[0].biquandle, &gaussian(3).unwrap()));
        assert_eq!(r.classes[0].classification.tag, Family::ComponentwiseInvolution);
    }

    #[test]
    fn enumerated_entries_pass_axioms_and_are_distinct() {
        let r = enumerate_kbiquandles(3, 2, false).unwrap();
        for (i, a) in r.classes.iter().enumerate() {
            assert!(check_axioms(&a.biquandle).passed());
            for b in &r.classes[i + 1..] {
                assert!(!is_isomorphic(&a.biquandle, &b.biquandle));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumerationOptions {
            nontrivial_only: true,
            budget: 10,
        };
        assert!(matches!(enumerate_with(3, 3, opts), Err(Error::BudgetExceeded(10))));
    }

    #[test]
    fn classify_examples() {
        let g = classify(&gaussian(3).unwrap());
        assert_eq!(g.tag, Family::ComponentwiseInvolution);
        assert!(g.is(Family::ConditionalInvolution));
        let id = classify(&FiniteKBiquandle::identity(3, 3).unwrap());
        assert_eq!(id.tag, Family::Trivial);

        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        let mu = MultiplicitySet::new(3, 1, [vec![2]]).unwrap();
        let b = conditional_involution(&tau, &mu, 3).unwrap().relabel(&[1, 2, 0]).unwrap();
        let c = classify(&b);
        assert_eq!(c.tag, Family::ConditionalInvolution);
        assert_eq!(c.conditional.as_deref(), Some("tau=(1 2) mu={(2)}"));

        let s = classify(&crate::biquandle::swap(3).unwrap());
        assert_eq!(s.tag, Family::Other);
    }
}

