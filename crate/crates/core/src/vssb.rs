//! The virtual surface singular braid monoid `VSSB_n`, its action on
//! `G_n^2 × Σ_n`, the permutation map `ρ_n` and the map `φ_n`.
//!
//! Words act with their rightmost letter first: `(uw)·s = u·(w·s)`. The
//! permutation update `σ·(i i+1)` applies the transposition first, then `σ`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biquandle::FiniteKBiquandle;
use crate::coloring::binding_number;
use crate::error::{Error, Result};
use crate::gnk::{tokens, FreeKBraidWord, KSubset};
use crate::perm::Permutation;
use crate::word_problem::{equal_bounded, SearchBudget, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    CInv,
    V,
}

impl Kind {
    pub const CLASSICAL: [Kind; 4] = [Kind::A, Kind::B, Kind::C, Kind::CInv];
    pub const ALL: [Kind; 5] = [Kind::A, Kind::B, Kind::C, Kind::CInv, Kind::V];

    fn symbol(self) -> char {
        match self {
            Kind::A => 'a',
            Kind::B => 'b',
            Kind::C => 'c',
            Kind::CInv => 'C',
            Kind::V => 'v',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: Kind,
    /// 1-based, in `1..n`.
    pub index: usize,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VssbWord {
    n: usize,
    letters: Vec<Generator>,
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=64).contains(&n) {
        return Err(Error::InvalidParameters(format!("need 2 <= n <= 64, got n={n}")));
    }
    Ok(())
}

impl VssbWord {
    pub fn new(n: usize, letters: Vec<Generator>) -> Result<Self> {
        check_n(n)?;
        for g in &letters {
            if g.index == 0 || g.index >= n {
                return Err(Error::IndexOutOfRange {
                    index: g.index,
                    max: n - 1,
                });
            }
        }
        Ok(VssbWord { n, letters })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Letters `a b c v` followed by an index; `C` is `c⁻¹`. `e` or blank
    /// input is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        check_n(n)?;
        let mut letters = Vec::new();
        let toks: Vec<(usize, &str)> = tokens(text).collect();
        if toks.len() == 1 && toks[0].1 == "e" {
            return Ok(VssbWord { n, letters });
        }
        for (pos, tok) in toks {
            let syntax = |msg: &str| Error::Syntax {
                pos,
                token: tok.to_string(),
                msg: msg.to_string(),
            };
            let mut chars = tok.chars();
            let kind = match chars.next() {
                Some('a') => Kind::A,
                Some('b') => Kind::B,
                Some('c') => Kind::C,
                Some('C') => Kind::CInv,
                Some('v') => Kind::V,
                _ => return Err(syntax("expected one of a, b, c, C, v")),
            };
            let digits = chars.as_str();
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(syntax("expected a generator index"));
            }
            let index: usize = digits.parse().map_err(|_| syntax("index too large"))?;
            if index == 0 || index >= n {
                return Err(Error::IndexOutOfRange { index, max: n - 1 });
            }
            letters.push(Generator { kind, index });
        }
        Ok(VssbWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &VssbWord) -> Result<VssbWord> {
        if self.n != other.n {
            return Err(Error::InvalidParameters(format!(
                "strand counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(VssbWord { n: self.n, letters })
    }
}

impl fmt::Display for VssbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VssbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VssbWord(n={}, {self})", self.n)
    }
}

/// A point `(g, σ)` of `G_n^2 × Σ_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionState {
    pub g: FreeKBraidWord,
    pub sigma: Permutation,
}

impl ActionState {
    pub fn new(g: FreeKBraidWord, sigma: Permutation) -> Result<Self> {
        if g.k() != 2 || g.n() != sigma.degree() {
            return Err(Error::InvalidParameters(format!(
                "state needs a G_n^2 word and a permutation of degree n; got k={}, n={}, degree {}",
                g.k(),
                g.n(),
                sigma.degree()
            )));
        }
        Ok(ActionState { g, sigma })
    }

    /// `(1, 1)`.
    pub fn base(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(ActionState {
            g: FreeKBraidWord::identity(n, 2)?,
            sigma: Permutation::identity(n),
        })
    }

    fn apply(&mut self, gen: Generator) {
        let n = self.sigma.degree();
        let i = gen.index;
        match gen.kind {
            Kind::A | Kind::B => {}
            Kind::C | Kind::CInv => {
                let (p, q) = (self.sigma.image(i), self.sigma.image(i + 1));
                let letter = KSubset::new(n, &[p.min(q), p.max(q)]).expect("distinct images");
                self.g.prepend(letter).expect("same strand count");
                self.sigma = transposition(n, i).then(&self.sigma);
            }
            Kind::V => {
                self.sigma = transposition(n, i).then(&self.sigma);
            }
        }
    }
}

fn transposition(n: usize, i: usize) -> Permutation {
    Permutation::transposition(n, i, i + 1).expect("index in range")
}

/// `gen · s`.
pub fn act(gen: Generator, s: &ActionState) -> Result<ActionState> {
    let n = s.sigma.degree();
    if gen.index == 0 || gen.index >= n {
        return Err(Error::IndexOutOfRange {
            index: gen.index,
            max: n - 1,
        });
    }
    let mut out = s.clone();
    out.apply(gen);
    Ok(out)
}

/// `w · s`, rightmost letter first.
pub fn act_word(w: &VssbWord, s: &ActionState) -> Result<ActionState> {
    if w.n() != s.sigma.degree() {
        return Err(Error::InvalidParameters(format!(
            "word has n={} but state has n={}",
            w.n(),
            s.sigma.degree()
        )));
    }
    let mut out = s.clone();
    for &gen in w.letters.iter().rev() {
        out.apply(gen);
    }
    Ok(out)
}

/// `φ_n(w)`, unreduced.
pub fn phi(w: &VssbWord) -> FreeKBraidWord {
    act_word(w, &ActionState::base(w.n()).expect("valid n"))
        .expect("matching n")
        .g
}

/// `ρ_n(w)`: the product of the letters' transpositions in letter order.
pub fn rho(w: &VssbWord) -> Permutation {
    w.letters
        .iter()
        .fold(Permutation::identity(w.n()), |acc, g| match g.kind {
            Kind::A | Kind::B => acc,
            _ => acc.then(&transposition(w.n(), g.index)),
        })
}

pub fn is_pure(w: &VssbWord) -> bool {
    rho(w).is_identity()
}

/// Adjacent transposition indices `i_1, ..., i_r` whose product in letter
/// order is `p`.
pub fn adjacent_factorization(p: &Permutation) -> Vec<usize> {
    let n = p.degree();
    let mut images = p.images();
    let mut steps = Vec::new();
    // Post-composing with (i i+1) swaps the values i and i+1 in the image
    // list; sort the list that way and read the steps backwards.
    loop {
        let mut pos = vec![0; n + 1];
        for (x, &v) in images.iter().enumerate() {
            pos[v] = x;
        }
        let Some(i) = (1..n).find(|&i| pos[i + 1] < pos[i]) else {
            break;
        };
        images.swap(pos[i], pos[i + 1]);
        steps.push(i);
    }
    steps.reverse();
    steps
}

/// `b_{χ1,χ2}(φ_n(w))` for a 2-biquandle.
pub fn vssb_invariant(w: &VssbWord, b: &FiniteKBiquandle, chi1: &[usize], chi2: &[usize]) -> Result<u8> {
    if b.k() != 2 {
        return Err(Error::InvalidParameters(format!(
            "the invariant needs a 2-biquandle, got k={}",
            b.k()
        )));
    }
    binding_number(&phi(w), b, chi1, chi2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    R,
    V,
    #[serde(rename = "A+V")]
    AV,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::R => "R",
            Family::V => "V",
            Family::AV => "A+V",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Family::A),
            "R" => Ok(Family::R),
            "V" => Ok(Family::V),
            "A+V" | "AV" => Ok(Family::AV),
            other => Err(Error::InvalidParameters(format!(
                "unknown relation family `{other}` (expected A, R, V or A+V)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPair {
    pub label: String,
    /// Values of the metavariables, e.g. `i=1 k=2 x=c`.
    pub params: String,
    pub left: VssbWord,
    pub right: VssbWord,
}

struct Builder {
    n: usize,
    out: Vec<RelationPair>,
}

impl Builder {
    fn push(&mut self, label: &str, params: String, left: &[(Kind, usize)], right: &[(Kind, usize)]) {
        let word = |ls: &[(Kind, usize)]| {
            VssbWord::new(
                self.n,
                ls.iter().map(|&(kind, index)| Generator { kind, index }).collect(),
            )
            .expect("relation indices in range")
        };
        let (left, right) = (word(left), word(right));
        self.out.push(RelationPair {
            label: label.to_string(),
            params,
            left,
            right,
        });
    }
}

fn sym(k: Kind) -> char {
    k.symbol()
}

use Kind::{A as KA, B as KB, C as KC, CInv as KCI, V as KV};

fn a_relations(bld: &mut Builder) {
    let n = bld.n;
    let gens = 1..n;
    for i in gens.clone() {
        bld.push("A1", format!("i={i}"), &[(KC, i), (KCI, i)], &[]);
        bld.push("A1", format!("i={i} inverse-first"), &[(KCI, i), (KC, i)], &[]);
    }
    for i in gens.clone() {
        for j in i + 2..n {
            for x in Kind::CLASSICAL {
                for y in Kind::CLASSICAL {
                    let p = format!("i={i} j={j} x={} y={}", sym(x), sym(y));
                    bld.push("A2", p, &[(x, i), (y, j)], &[(y, j), (x, i)]);
                }
            }
        }
    }
    let adjacent: Vec<(usize, usize)> = gens
        .clone()
        .flat_map(|i| [(i, i.wrapping_sub(1)), (i, i + 1)])
        .filter(|&(_, k)| k >= 1 && k < n)
        .collect();
    for &(i, k) in &adjacent {
        for x in Kind::CLASSICAL {
            let p = format!("i={i} k={k} x={}", sym(x));
            bld.push("A3", p, &[(x, i), (KC, k), (KC, i)], &[(KC, k), (KC, i), (x, k)]);
        }
    }
    for &(i, k) in &adjacent {
        for x in Kind::CLASSICAL {
            let p = format!("i={i} k={k} x={}", sym(x));
            bld.push("A4", p, &[(x, i), (KCI, k), (KCI, i)], &[(KCI, k), (KCI, i), (x, k)]);
        }
    }
    for &(i, k) in &adjacent {
        bld.push("A5", format!("i={i} k={k}"), &[(KA, i), (KB, k)], &[(KB, k), (KA, i)]);
    }
    for i in 3..n {
        let c4 = [(KC, i - 1), (KC, i - 2), (KC, i), (KC, i - 1)];
        for (label, s, t) in [("A6", KA, KB), ("A7", KB, KA)] {
            let mut left = vec![(s, i), (t, i - 2)];
            left.extend(c4);
            left.extend(c4);
            bld.push(label, format!("i={i}"), &left, &[(s, i), (t, i - 2)]);
        }
    }
    for i in gens.clone() {
        bld.push("A8", format!("i={i}"), &[(KA, i), (KA, i)], &[(KA, i)]);
    }
    for i in gens.clone() {
        bld.push("A9", format!("i={i}"), &[(KB, i), (KB, i)], &[(KB, i)]);
    }
    for i in gens.clone() {
        bld.push("A10", format!("i={i}"), &[(KA, i), (KB, i), (KC, i), (KC, i)], &[(KA, i), (KB, i)]);
    }
    for &(i, k) in &adjacent {
        let c3 = [(KC, i), (KC, k), (KC, i)];
        let mut left = vec![(KA, i), (KB, k)];
        left.extend(c3);
        left.extend(c3);
        bld.push("A11", format!("i={i} k={k}"), &left, &[(KA, i), (KB, k)]);
    }
}

fn r_relations(bld: &mut Builder) {
    let n = bld.n;
    for i in 1..n {
        bld.push("R1", format!("i={i}"), &[(KC, i), (KCI, i)], &[]);
        bld.push("R1", format!("i={i} inverse-first"), &[(KCI, i), (KC, i)], &[]);
    }
    for i in 1..n {
        for j in i + 2..n {
            for x in Kind::CLASSICAL {
                for y in Kind::CLASSICAL {
                    let p = format!("i={i} j={j} x={} y={}", sym(x), sym(y));
                    bld.push("R2", p, &[(x, i), (y, j)], &[(y, j), (x, i)]);
                }
            }
        }
    }
    for i in 1..n {
        bld.push("R3", format!("i={i}"), &[(KA, i), (KC, i)], &[(KC, i), (KA, i)]);
    }
    for i in 1..n {
        bld.push("R4", format!("i={i}"), &[(KB, i), (KC, i)], &[(KC, i), (KB, i)]);
    }
    for i in 1..n - 1 {
        let p = format!("i={i}");
        let j = i + 1;
        bld.push("R5", p.clone(), &[(KC, j), (KC, i), (KC, j)], &[(KC, i), (KC, j), (KC, i)]);
        bld.push("R6", p.clone(), &[(KA, j), (KC, i), (KC, j)], &[(KC, i), (KC, j), (KA, i)]);
        bld.push("R7", p.clone(), &[(KB, j), (KC, i), (KC, j)], &[(KC, i), (KC, j), (KB, i)]);
        bld.push("R8", p.clone(), &[(KA, i), (KC, j), (KC, i)], &[(KC, j), (KC, i), (KA, j)]);
        bld.push("R9", p.clone(), &[(KB, i), (KC, j), (KC, i)], &[(KC, j), (KC, i), (KB, j)]);
        bld.push("R10", p, &[(KA, i), (KB, j)], &[(KB, j), (KA, i)]);
    }
    for i in 1..n {
        let p = format!("i={i}");
        bld.push("R11", p.clone(), &[(KA, i), (KB, i)], &[(KB, i), (KA, i)]);
        bld.push("R12", p.clone(), &[(KA, i), (KA, i)], &[(KA, i)]);
        bld.push("R13", p.clone(), &[(KB, i), (KB, i)], &[(KB, i)]);
        bld.push("R14", p, &[(KA, i), (KB, i), (KC, i), (KC, i)], &[(KA, i), (KB, i)]);
    }
    for i in 1..n - 1 {
        let c3 = [(KC, i), (KC, i + 1), (KC, i)];
        let mut left = vec![(KA, i), (KB, i + 1)];
        left.extend(c3);
        left.extend(c3);
        bld.push("R15", format!("i={i}"), &left, &[(KA, i), (KB, i + 1)]);
    }
    for i in 1..n.saturating_sub(2) {
        let c4 = [(KC, i + 1), (KC, i), (KC, i + 2), (KC, i + 1)];
        let mut left = vec![(KA, i), (KB, i + 2)];
        left.extend(c4);
        left.extend(c4);
        bld.push("R16", format!("i={i}"), &left, &[(KA, i), (KB, i + 2)]);
    }
}

fn v_relations(bld: &mut Builder) {
    let n = bld.n;
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) <= 1 {
                continue;
            }
            for x in Kind::ALL {
                let p = format!("i={i} j={j} x={}", sym(x));
                bld.push("V1", p, &[(KV, i), (x, j)], &[(x, j), (KV, i)]);
            }
        }
    }
    for i in 1..n {
        bld.push("V2", format!("i={i}"), &[(KV, i), (KV, i)], &[]);
    }
    for i in 1..n {
        for j in [i.wrapping_sub(1), i + 1] {
            if j == 0 || j >= n {
                continue;
            }
            for x in Kind::ALL {
                let p = format!("i={i} j={j} x={}", sym(x));
                bld.push("V3", p, &[(x, i), (KV, j), (KV, i)], &[(KV, j), (KV, i), (x, j)]);
            }
        }
    }
    for i in 1..n {
        for x in [KA, KB] {
            let p = format!("i={i} x={}", sym(x));
            bld.push("V4", p, &[(x, i), (KV, i)], &[(KV, i), (x, i)]);
        }
    }
}

/// Every instance of the chosen relation family on `n` strands.
pub fn relations(n: usize, family: Family) -> Result<Vec<RelationPair>> {
    check_n(n)?;
    let mut bld = Builder { n, out: Vec::new() };
    match family {
        Family::A => a_relations(&mut bld),
        Family::R => r_relations(&mut bld),
        Family::V => v_relations(&mut bld),
        Family::AV => {
            a_relations(&mut bld);
            v_relations(&mut bld);
        }
    }
    Ok(bld.out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoFailure {
    pub label: String,
    pub params: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoReport {
    pub n: usize,
    pub family: Family,
    pub checked: usize,
    pub failures: Vec<RhoFailure>,
}

pub fn check_rho_respects(n: usize, family: Family) -> Result<RhoReport> {
    let rels = relations(n, family)?;
    let failures = rels
        .iter()
        .filter(|r| rho(&r.left) != rho(&r.right))
        .map(|r| RhoFailure {
            label: r.label.clone(),
            params: r.params.clone(),
            left: format!("{} -> {}", r.left, rho(&r.left)),
            right: format!("{} -> {}", r.right, rho(&r.right)),
        })
        .collect();
    Ok(RhoReport {
        n,
        family,
        checked: rels.len(),
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceVerdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub label: String,
    pub params: String,
    pub left: String,
    pub right: String,
    pub verdict: InstanceVerdict,
    pub states: usize,
    /// States on which the g-components were neither proved equal nor
    /// separated.
    pub unknown_states: usize,
    /// Longest g-component seen on either side, over all states.
    pub max_g_len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicativityReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub n: usize,
    pub family: Family,
    pub depth: usize,
    pub nodes: usize,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
    pub multiplicativity: MultiplicativityReport,
}

impl PhiReport {
    pub fn failures(&self) -> Vec<&InstanceReport> {
        self.instances
            .iter()
            .filter(|r| r.verdict == InstanceVerdict::Fail)
            .collect()
    }

    pub fn unknowns(&self) -> Vec<&InstanceReport> {
        self.instances
            .iter()
            .filter(|r| r.verdict == InstanceVerdict::Unknown)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty() && self.multiplicativity.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiCheckOptions {
    /// Random states in addition to `(1, 1)`.
    pub samples: usize,
    pub seed: u64,
    pub budget: SearchBudget,
    /// Pairs of random pure words for the multiplicativity check.
    pub pure_samples: usize,
}

impl Default for PhiCheckOptions {
    fn default() -> Self {
        PhiCheckOptions {
            samples: 7,
            seed: 1,
            budget: SearchBudget::default(),
            pure_samples: 64,
        }
    }
}

/// Random `(g, σ)` with `|g| <= 4`.
pub fn random_state(n: usize, rng: &mut impl Rng) -> ActionState {
    let subsets = KSubset::all(n, 2);
    let len = rng.gen_range(0..=4);
    let letters = (0..len).map(|_| *subsets.choose(rng).expect("n >= 2")).collect();
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    ActionState {
        g: FreeKBraidWord::from_letters(n, 2, letters).expect("valid letters"),
        sigma: Permutation::from_images(&images).expect("shuffled identity"),
    }
}

/// Random word of length `<= max_len` over all generator kinds.
pub fn random_word(n: usize, max_len: usize, rng: &mut impl Rng) -> VssbWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Generator {
            kind: *Kind::ALL.choose(rng).expect("nonempty"),
            index: rng.gen_range(1..n),
        })
        .collect();
    VssbWord { n, letters }
}

/// Appends virtual crossings so that the word becomes pure.
pub fn make_pure(w: &VssbWord) -> VssbWord {
    let fix = adjacent_factorization(&rho(w).inverse());
    let mut letters = w.letters.clone();
    letters.extend(fix.into_iter().map(|index| Generator { kind: Kind::V, index }));
    VssbWord { n: w.n, letters }
}

fn check_instance(r: &RelationPair, states: &[ActionState], budget: SearchBudget) -> InstanceReport {
    let mut report = InstanceReport {
        label: r.label.clone(),
        params: r.params.clone(),
        left: r.left.to_string(),
        right: r.right.to_string(),
        verdict: InstanceVerdict::Pass,
        states: states.len(),
        unknown_states: 0,
        max_g_len: 0,
        detail: None,
    };
    for (si, s) in states.iter().enumerate() {
        let l = act_word(&r.left, s).expect("matching n");
        let rr = act_word(&r.right, s).expect("matching n");
        report.max_g_len = report.max_g_len.max(l.g.len()).max(rr.g.len());
        if l.sigma != rr.sigma {
            report.verdict = InstanceVerdict::Fail;
            report.detail = Some(format!(
                "state {si}: permutations differ ({} vs {})",
                l.sigma, rr.sigma
            ));
            return report;
        }
        match equal_bounded(&l.g, &rr.g, budget).expect("same (n, k)") {
            Verdict::Equal { .. } => {}
            Verdict::Distinct { witness } => {
                report.verdict = InstanceVerdict::Fail;
                report.detail = Some(format!(
                    "state {si}: g-components {} and {} are distinct ({witness:?})",
                    l.g, rr.g
                ));
                return report;
            }
            Verdict::Unknown { .. } => report.unknown_states += 1,
        }
    }
    if report.unknown_states > 0 {
        report.verdict = InstanceVerdict::Unknown;
    }
    report
}

/// Checks that both sides of every relation act identically on `(1, 1)`
/// and on random states, and that `φ_n` is multiplicative on pure words.
pub fn check_phi_well_defined(n: usize, family: Family, opts: PhiCheckOptions) -> Result<PhiReport> {
    let rels = relations(n, family)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut states = vec![ActionState::base(n)?];
    states.extend((0..opts.samples).map(|_| random_state(n, &mut rng)));

    let instances: Vec<InstanceReport> = rels
        .par_iter()
        .map(|r| check_instance(r, &states, opts.budget))
        .collect();

    let mut failures = Vec::new();
    for _ in 0..opts.pure_samples {
        let u = make_pure(&random_word(n, 6, &mut rng));
        let w = make_pure(&random_word(n, 6, &mut rng));
        let uw = u.concat(&w).expect("same n");
        let left = phi(&uw);
        let right = phi(&u).concat(&phi(&w)).expect("same n");
        let exact = SearchBudget { depth: 0, nodes: 1 };
        if !matches!(equal_bounded(&left, &right, exact)?, Verdict::Equal { .. }) {
            failures.push(format!("u = {u}, w = {w}: phi(uw) = {left}, phi(u)phi(w) = {right}"));
        }
    }

    Ok(PhiReport {
        n,
        family,
        depth: opts.budget.depth,
        nodes: opts.budget.nodes,
        seed: opts.seed,
        instances,
        multiplicativity: MultiplicativityReport {
            samples: opts.pure_samples,
            failures,
        },
    })
}
