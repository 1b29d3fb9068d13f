//! Words in the free k-braid groups `G_n^k`, their relation moves, and the
//! strand graph a word determines.
//!
//! Generators `a_m` are indexed by k-element subsets `m` of `{1, ..., n}`.
//! The defining relations are the involutions `a_m^2 = 1`, far commutativity
//! `a_m a_m' = a_m' a_m` for `|m ∩ m'| < k - 1`, and the tetrahedron relations
//! over every (k+1)-set `U`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported strand count (subsets are stored as bitmasks).
pub const MAX_STRANDS: usize = 64;

/// A k-element subset of `{1, ..., n}`, the index of a generator `a_m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSubset {
    n: u8,
    mask: u64,
}

impl KSubset {
    /// Builds a subset from strictly increasing 1-based indices.
    pub fn new(n: usize, elements: &[usize]) -> Result<Self> {
        if n == 0 || n > MAX_STRANDS {
            return Err(Error::InvalidParameters(format!(
                "strand count {n} outside 1..={MAX_STRANDS}"
            )));
        }
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::IndexOutOfRange { index: e, max: n });
            }
            if e <= prev {
                return Err(Error::UnsortedSubset(format_elements(elements)));
            }
            prev = e;
            mask |= 1 << (e - 1);
        }
        if elements.is_empty() {
            return Err(Error::InvalidParameters("empty subset".into()));
        }
        Ok(KSubset { n: n as u8, mask })
    }

    /// Builds a subset from a bitmask (bit `i - 1` set for element `i`).
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_STRANDS {
            return Err(Error::InvalidParameters(format!(
                "strand count {n} outside 1..={MAX_STRANDS}"
            )));
        }
        if mask == 0 || (n < 64 && mask >> n != 0) {
            return Err(Error::InvalidParameters(format!(
                "mask {mask:#x} is not a nonempty subset of 1..={n}"
            )));
        }
        Ok(KSubset { n: n as u8, mask })
    }

    pub(crate) fn from_mask_unchecked(n: usize, mask: u64) -> Self {
        KSubset { n: n as u8, mask }
    }

    /// All k-subsets of `{1, ..., n}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<KSubset> {
        use itertools::Itertools;
        (1..=n)
            .combinations(k)
            .map(|c| KSubset::new(n, &c).expect("combinations are sorted"))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Sorted 1-based elements.
    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k());
        let mut m = self.mask;
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    pub fn contains(&self, strand: usize) -> bool {
        strand >= 1 && strand <= self.n() && self.mask >> (strand - 1) & 1 == 1
    }

    pub fn intersection_len(&self, other: &KSubset) -> usize {
        (self.mask & other.mask).count_ones() as usize
    }
}

fn format_elements(elements: &[usize]) -> String {
    let parts: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Ord for KSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.k())
            .cmp(&(other.n, other.k()))
            .then_with(|| {
                let diff = self.mask ^ other.mask;
                if diff == 0 {
                    Ordering::Equal
                } else if self.mask >> diff.trailing_zeros() & 1 == 1 {
                    // the smallest element of the symmetric difference decides
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    }
}

impl PartialOrd for KSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", format_elements(&self.elements()))
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A word in the generators of `G_n^k` (a diagram of a free k-braid).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeKBraidWord {
    n: usize,
    k: usize,
    letters: Vec<KSubset>,
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n || n > MAX_STRANDS {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n <= {MAX_STRANDS}, got n={n} k={k}"
        )));
    }
    Ok(())
}

impl FreeKBraidWord {
    /// The empty word (identity of `G_n^k`).
    pub fn identity(n: usize, k: usize) -> Result<Self> {
        check_nk(n, k)?;
        Ok(FreeKBraidWord {
            n,
            k,
            letters: Vec::new(),
        })
    }

    pub fn from_letters(n: usize, k: usize, letters: Vec<KSubset>) -> Result<Self> {
        check_nk(n, k)?;
        for l in &letters {
            if l.n() != n || l.k() != k {
                return Err(Error::InvalidParameters(format!(
                    "letter {l} does not belong to G_{n}^{k}"
                )));
            }
        }
        Ok(FreeKBraidWord { n, k, letters })
    }

    /// Convenience constructor from lists of 1-based indices.
    pub fn from_indices(n: usize, k: usize, letters: &[&[usize]]) -> Result<Self> {
        let letters = letters
            .iter()
            .map(|l| KSubset::new(n, l))
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(n, k, letters)
    }

    pub(crate) fn from_masks_unchecked(n: usize, k: usize, masks: &[u64]) -> Self {
        FreeKBraidWord {
            n,
            k,
            letters: masks
                .iter()
                .map(|&m| KSubset::from_mask_unchecked(n, m))
                .collect(),
        }
    }

    pub(crate) fn masks(&self) -> Vec<u64> {
        self.letters.iter().map(|l| l.mask).collect()
    }

    /// Parses whitespace-separated letters `a{i1,...,ik}`; `e` (or blank
    /// input) is the empty word. Indices must be strictly increasing.
    pub fn parse(n: usize, k: usize, text: &str) -> Result<Self> {
        check_nk(n, k)?;
        let mut letters = Vec::new();
        let mut saw_e = false;
        for (pos, token) in tokens(text) {
            if token == "e" {
                saw_e = true;
                continue;
            }
            let letter = parse_letter(n, k, pos, token)?;
            letters.push(letter);
        }
        if saw_e && !letters.is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                token: "e".into(),
                msg: "`e` denotes the empty word and cannot be mixed with letters".into(),
            });
        }
        Ok(FreeKBraidWord { n, k, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> &[KSubset] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::Mismatch {
                n1: self.n,
                k1: self.k,
                n2: other.n,
                k2: other.k,
            });
        }
        Ok(())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FreeKBraidWord {
            n: self.n,
            k: self.k,
            letters,
        })
    }

    /// Prepends one generator (used by the monoid action).
    pub fn prepend(&mut self, letter: KSubset) -> Result<()> {
        if letter.n() != self.n || letter.k() != self.k {
            return Err(Error::InvalidParameters(format!(
                "letter {letter} does not belong to G_{}^{}",
                self.n, self.k
            )));
        }
        self.letters.insert(0, letter);
        Ok(())
    }

    /// Cancels adjacent equal letters until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<KSubset> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeKBraidWord {
            n: self.n,
            k: self.k,
            letters: out,
        }
    }

    /// Per-generator letter counts mod 2.
    pub fn parity_vector(&self) -> ParityVector {
        let subsets = KSubset::all(self.n, self.k);
        let mut bits = vec![false; subsets.len()];
        for l in &self.letters {
            let idx = subsets
                .binary_search(l)
                .expect("letters are k-subsets of 1..n");
            bits[idx] ^= true;
        }
        ParityVector {
            n: self.n,
            k: self.k,
            bits,
        }
    }

    /// Every move available at this word, in a fixed order.
    pub fn moves(&self) -> Vec<Move> {
        let masks = self.masks();
        let mut out = Vec::new();
        out.extend(
            deletion_sites(&masks).map(|pos| Move::Delete { pos }),
        );
        out.extend(
            swap_sites(&masks, self.k).map(|pos| Move::Swap { pos }),
        );
        out.extend(
            tetrahedron_sites(&masks, self.k).map(|pos| Move::Tetrahedron { pos }),
        );
        let subsets = KSubset::all(self.n, self.k);
        for pos in 0..=masks.len() {
            for &letter in &subsets {
                out.push(Move::Insert { pos, letter });
            }
        }
        out
    }

    /// Applies a move; `None` when it is not applicable here.
    pub fn apply_move(&self, mv: &Move) -> Option<Self> {
        let masks = self.masks();
        let next = apply_move_masks(&masks, self.k, mv)?;
        Some(FreeKBraidWord::from_masks_unchecked(self.n, self.k, &next))
    }

    /// All words one relation move away.
    pub fn neighbors(&self) -> BTreeSet<FreeKBraidWord> {
        self.moves()
            .iter()
            .filter_map(|mv| self.apply_move(mv))
            .collect()
    }

    /// The oriented strand graph of the word.
    pub fn realize(&self) -> BraidGraph {
        let n = self.n;
        let mut counts = vec![0usize; n];
        for l in &self.letters {
            for s in l.elements() {
                counts[s - 1] += 1;
            }
        }
        let mut strand_edges = Vec::with_capacity(n);
        let mut next = 0usize;
        for c in &counts {
            strand_edges.push((next..next + c + 1).collect::<Vec<_>>());
            next += c + 1;
        }
        let mut cursor = vec![0usize; n];
        let mut vertices = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            let mut incoming = Vec::with_capacity(self.k);
            let mut outgoing = Vec::with_capacity(self.k);
            for s in l.elements() {
                let c = cursor[s - 1];
                incoming.push(strand_edges[s - 1][c]);
                outgoing.push(strand_edges[s - 1][c + 1]);
                cursor[s - 1] += 1;
            }
            vertices.push(Vertex {
                subset: *l,
                incoming,
                outgoing,
            });
        }
        BraidGraph {
            n,
            k: self.k,
            edge_count: next,
            strand_edges,
            vertices,
        }
    }
}

impl fmt::Display for FreeKBraidWord {
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

impl fmt::Debug for FreeKBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[G_{}^{}] {}", self.n, self.k, self)
    }
}

/// Splits on whitespace, yielding byte offsets.
pub(crate) fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - text.as_ptr() as usize, t))
}

fn parse_letter(n: usize, k: usize, pos: usize, token: &str) -> Result<KSubset> {
    let syntax = |msg: &str| Error::Syntax {
        pos,
        token: token.to_string(),
        msg: msg.to_string(),
    };
    let body = token
        .strip_prefix("a{")
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| syntax("expected a letter of the form a{i1,...,ik}"))?;
    let mut elements = Vec::with_capacity(k);
    for part in body.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| syntax("expected a positive integer index"))?;
        elements.push(v);
    }
    if elements.len() != k {
        return Err(syntax(&format!("expected {k} indices, got {}", elements.len())));
    }
    KSubset::new(n, &elements).map_err(|e| match e {
        Error::UnsortedSubset(_) => syntax("indices must be strictly increasing"),
        Error::IndexOutOfRange { index, max } => {
            syntax(&format!("index {index} outside 1..={max}"))
        }
        other => other,
    })
}

/// Parses the file form of a word: a header line `n=<int> k=<int>` followed
/// by the word.
pub fn parse_word_file(text: &str) -> Result<FreeKBraidWord> {
    let mut lines = text.lines();
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l,
            None => {
                return Err(Error::Syntax {
                    pos: 0,
                    token: String::new(),
                    msg: "missing `n=<int> k=<int>` header".into(),
                })
            }
        }
    };
    let header_offset = header.as_ptr() as usize - text.as_ptr() as usize;
    let (mut n, mut k) = (None, None);
    for (pos, tok) in tokens(header) {
        let bad = || Error::Syntax {
            pos: header_offset + pos,
            token: tok.to_string(),
            msg: "expected `n=<int>` or `k=<int>`".into(),
        };
        let (key, value) = tok.split_once('=').ok_or_else(bad)?;
        let value: usize = value.parse().map_err(|_| bad())?;
        match key {
            "n" => n = Some(value),
            "k" => k = Some(value),
            _ => return Err(bad()),
        }
    }
    let (n, k) = match (n, k) {
        (Some(n), Some(k)) => (n, k),
        _ => {
            return Err(Error::Syntax {
                pos: header_offset,
                token: header.to_string(),
                msg: "header must give both n and k".into(),
            })
        }
    };
    let rest_start = header_offset + header.len();
    let rest = &text[rest_start..];
    FreeKBraidWord::parse(n, k, rest).map_err(|e| match e {
        Error::Syntax { pos, token, msg } => Error::Syntax {
            pos: pos + rest_start,
            token,
            msg,
        },
        other => other,
    })
}

/// One relation move on a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Delete the equal pair at `pos, pos + 1`.
    Delete { pos: usize },
    /// Insert `a_m a_m` before position `pos`.
    Insert {
        pos: usize,
        #[serde(with = "subset_serde")]
        letter: KSubset,
    },
    /// Swap the far-commuting letters at `pos, pos + 1`.
    Swap { pos: usize },
    /// Reverse the tetrahedron block of length k+1 starting at `pos`.
    Tetrahedron { pos: usize },
}

mod subset_serde {
    use super::KSubset;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        n: usize,
        elements: Vec<usize>,
    }

    pub fn serialize<S: Serializer>(s: &KSubset, ser: S) -> Result<S::Ok, S::Error> {
        Repr {
            n: s.n(),
            elements: s.elements(),
        }
        .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<KSubset, D::Error> {
        let r = Repr::deserialize(de)?;
        KSubset::new(r.n, &r.elements).map_err(serde::de::Error::custom)
    }
}

impl Move {
    /// Whether the move can shorten or preserve the word length.
    pub fn is_non_increasing(&self) -> bool {
        !matches!(self, Move::Insert { .. })
    }
}

pub(crate) fn deletion_sites(masks: &[u64]) -> impl Iterator<Item = usize> + '_ {
    (0..masks.len().saturating_sub(1)).filter(move |&i| masks[i] == masks[i + 1])
}

pub(crate) fn swap_sites(masks: &[u64], k: usize) -> impl Iterator<Item = usize> + '_ {
    (0..masks.len().saturating_sub(1)).filter(move |&i| {
        masks[i] != masks[i + 1] && ((masks[i] & masks[i + 1]).count_ones() as usize) + 1 < k
    })
}

/// A block of k+1 letters is a tetrahedron side when its letters are the
/// k+1 distinct facets of one (k+1)-set.
pub(crate) fn is_tetrahedron_block(block: &[u64], k: usize) -> bool {
    if block.len() != k + 1 {
        return false;
    }
    let union = block.iter().fold(0u64, |acc, m| acc | m);
    if union.count_ones() as usize != k + 1 {
        return false;
    }
    let mut missing = 0u64;
    for m in block {
        let gone = union & !m;
        if gone.count_ones() != 1 || missing & gone != 0 {
            return false;
        }
        missing |= gone;
    }
    true
}

pub(crate) fn tetrahedron_sites(masks: &[u64], k: usize) -> impl Iterator<Item = usize> + '_ {
    let span = k + 1;
    (0..(masks.len() + 1).saturating_sub(span))
        .filter(move |&i| is_tetrahedron_block(&masks[i..i + span], k))
}

pub(crate) fn apply_move_masks(masks: &[u64], k: usize, mv: &Move) -> Option<Vec<u64>> {
    match *mv {
        Move::Delete { pos } => {
            if pos + 1 < masks.len() && masks[pos] == masks[pos + 1] {
                let mut out = Vec::with_capacity(masks.len() - 2);
                out.extend_from_slice(&masks[..pos]);
                out.extend_from_slice(&masks[pos + 2..]);
                Some(out)
            } else {
                None
            }
        }
        Move::Insert { pos, letter } => {
            if pos > masks.len() || letter.k() != k {
                return None;
            }
            let mut out = Vec::with_capacity(masks.len() + 2);
            out.extend_from_slice(&masks[..pos]);
            out.push(letter.mask());
            out.push(letter.mask());
            out.extend_from_slice(&masks[pos..]);
            Some(out)
        }
        Move::Swap { pos } => {
            if pos + 1 < masks.len()
                && masks[pos] != masks[pos + 1]
                && ((masks[pos] & masks[pos + 1]).count_ones() as usize) + 1 < k
            {
                let mut out = masks.to_vec();
                out.swap(pos, pos + 1);
                Some(out)
            } else {
                None
            }
        }
        Move::Tetrahedron { pos } => {
            if pos + k < masks.len() && is_tetrahedron_block(&masks[pos..pos + k + 1], k) {
                let mut out = masks.to_vec();
                out[pos..pos + k + 1].reverse();
                Some(out)
            } else {
                None
            }
        }
    }
}

/// Letter counts mod 2, one entry per k-subset in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityVector {
    n: usize,
    k: usize,
    bits: Vec<bool>,
}

impl ParityVector {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn dimension(&self) -> usize {
        self.bits.len()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// Subsets whose generator occurs an odd number of times.
    pub fn support(&self) -> Vec<KSubset> {
        KSubset::all(self.n, self.k)
            .into_iter()
            .zip(&self.bits)
            .filter(|(_, &b)| b)
            .map(|(s, _)| s)
            .collect()
    }

    /// First subset on which two vectors differ.
    pub fn first_difference(&self, other: &ParityVector) -> Option<KSubset> {
        KSubset::all(self.n, self.k)
            .into_iter()
            .zip(self.bits.iter().zip(&other.bits))
            .find(|(_, (a, b))| a != b)
            .map(|(s, _)| s)
    }
}

/// A vertex of the strand graph: one per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub subset: KSubset,
    /// Incoming edges in ascending strand order.
    pub incoming: Vec<usize>,
    /// Opposite outgoing edges, paired with `incoming` by position.
    pub outgoing: Vec<usize>,
}

/// The oriented graph of a word: strand `i` is a path of edges from its
/// source to its sink, split at every vertex whose subset contains `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidGraph {
    pub n: usize,
    pub k: usize,
    pub edge_count: usize,
    /// Edge ids along each strand, source edge first.
    pub strand_edges: Vec<Vec<usize>>,
    pub vertices: Vec<Vertex>,
}

impl BraidGraph {
    pub fn source_edges(&self) -> Vec<usize> {
        self.strand_edges.iter().map(|e| e[0]).collect()
    }

    pub fn sink_edges(&self) -> Vec<usize> {
        self.strand_edges
            .iter()
            .map(|e| *e.last().expect("every strand has an edge"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, k: usize, s: &str) -> FreeKBraidWord {
        FreeKBraidWord::parse(n, k, s).unwrap()
    }

    #[test]
    fn subset_validation() {
        assert!(KSubset::new(3, &[1, 2]).is_ok());
        assert!(matches!(
            KSubset::new(3, &[2, 1]),
            Err(Error::UnsortedSubset(_))
        ));
        assert!(matches!(
            KSubset::new(3, &[1, 4]),
            Err(Error::IndexOutOfRange { index: 4, max: 3 })
        ));
        assert!(KSubset::new(3, &[1, 1]).is_err());
    }

    #[test]
    fn subset_order_is_lexicographic() {
        let all = KSubset::all(5, 3);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        let lists: Vec<Vec<usize>> = all.iter().map(|s| s.elements()).collect();
        let mut lists_sorted = lists.clone();
        lists_sorted.sort();
        assert_eq!(lists, lists_sorted);
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn parse_and_print() {
        let word = w(4, 2, "a{1,2}  a{3,4}");
        assert_eq!(word.to_string(), "a{1,2} a{3,4}");
        assert_eq!(w(4, 2, "e").to_string(), "e");
        assert_eq!(w(4, 2, "   ").len(), 0);
    }

    #[test]
    fn parse_rejects_unsorted_with_position() {
        let err = FreeKBraidWord::parse(4, 2, "a{1,2} a{3,1}").unwrap_err();
        match err {
            Error::Syntax { pos, token, .. } => {
                assert_eq!(pos, 7);
                assert_eq!(token, "a{3,1}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(FreeKBraidWord::parse(4, 2, "a{1,2,3}").is_err());
        assert!(FreeKBraidWord::parse(4, 2, "b{1,2}").is_err());
        assert!(FreeKBraidWord::parse(4, 2, "a{1,5}").is_err());
        assert!(FreeKBraidWord::parse(2, 3, "e").is_err());
        assert!(FreeKBraidWord::parse(2, 0, "e").is_err());
    }

    #[test]
    fn word_file_header() {
        let word = parse_word_file("n=4 k=3\na{1,2,3} a{2,3,4}\n").unwrap();
        assert_eq!((word.n(), word.k(), word.len()), (4, 3, 2));
        let err = parse_word_file("n=4 k=3\na{1,2,3} a{3,2,4}\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 17, .. }), "{err:?}");
        assert!(parse_word_file("n=4\ne").is_err());
    }

    #[test]
    fn free_reduce_examples() {
        assert!(w(3, 2, "a{1,2} a{1,2}").free_reduce().is_empty());
        assert_eq!(
            w(3, 2, "a{1,2} a{1,3} a{1,3} a{2,3}").free_reduce(),
            w(3, 2, "a{1,2} a{2,3}")
        );
        assert!(w(3, 2, "e").free_reduce().is_empty());
        // cascading cancellation
        assert!(w(3, 2, "a{1,2} a{1,3} a{1,3} a{1,2}").free_reduce().is_empty());
    }

    #[test]
    fn neighbor_examples() {
        let n1 = w(4, 2, "a{1,2} a{3,4}").neighbors();
        assert!(n1.contains(&w(4, 2, "a{3,4} a{1,2}")));

        let n2 = w(3, 2, "a{1,2} a{1,3} a{2,3}").neighbors();
        assert!(n2.contains(&w(3, 2, "a{2,3} a{1,3} a{1,2}")));

        let n3 = w(3, 2, "e").neighbors();
        assert!(n3.contains(&w(3, 2, "a{1,2} a{1,2}")));
        assert_eq!(n3.len(), 3);
    }

    #[test]
    fn no_swap_for_overlapping_letters() {
        // |{1,2} ∩ {1,3}| = 1 = k - 1, not far
        let n = w(3, 2, "a{1,2} a{1,3}").neighbors();
        assert!(!n.contains(&w(3, 2, "a{1,3} a{1,2}")));
    }

    #[test]
    fn tetrahedron_blocks_every_labeling() {
        let k = 3;
        let block = |s: &str| w(4, 3, s).masks();
        assert!(is_tetrahedron_block(
            &block("a{1,2,3} a{1,2,4} a{1,3,4} a{2,3,4}"),
            k
        ));
        assert!(is_tetrahedron_block(
            &block("a{1,2,3} a{1,3,4} a{2,3,4} a{1,2,4}"),
            k
        ));
        assert!(!is_tetrahedron_block(
            &block("a{1,2,3} a{1,2,3} a{1,3,4} a{2,3,4}"),
            k
        ));
        let five = FreeKBraidWord::parse(5, 3, "a{1,2,3} a{1,2,4} a{1,3,5} a{2,3,4}").unwrap();
        assert!(!is_tetrahedron_block(&five.masks(), k));
    }

    /// With only the ascending tetrahedron relation, (acdb)^2 = 1 would not
    /// follow in G_4^3: this assignment into S_3 satisfies the involutions
    /// and (abcd)^2 = 1 but not (acdb)^2 = 1. Every labeling is needed.
    #[test]
    fn ascending_tetrahedron_alone_does_not_force_other_orderings() {
        use crate::perm::Permutation;
        let t = |i, j| Permutation::transposition(3, i, j).unwrap();
        let (a, b, c, d) = (t(2, 3), t(1, 2), t(2, 3), t(1, 3));
        let prod = |xs: &[&Permutation]| {
            xs.iter()
                .fold(Permutation::identity(3), |acc, x| acc.then(x))
        };
        let id = Permutation::identity(3);
        let abcd = prod(&[&a, &b, &c, &d]);
        let acdb = prod(&[&a, &c, &d, &b]);
        assert_eq!(abcd.then(&abcd), id);
        assert_ne!(acdb.then(&acdb), id);
    }

    #[test]
    fn parity_examples() {
        assert!(w(3, 2, "a{1,2} a{1,2}").parity_vector().is_zero());
        let p = w(3, 2, "a{1,2} a{2,3} a{2,3}").parity_vector();
        assert_eq!(p.bits(), &[true, false, false]);
        assert_eq!(p.support(), vec![KSubset::new(3, &[1, 2]).unwrap()]);
        assert_eq!(
            w(3, 2, "a{1,2} a{1,3} a{2,3}").parity_vector(),
            w(3, 2, "a{2,3} a{1,3} a{1,2}").parity_vector()
        );
        assert_eq!(w(5, 3, "e").parity_vector().dimension(), 10);
    }

    #[test]
    fn realize_examples() {
        let g = w(3, 2, "e").realize();
        assert_eq!(g.edge_count, 3);
        assert!(g.vertices.is_empty());
        assert!(g.strand_edges.iter().all(|e| e.len() == 1));

        let g = w(3, 2, "e").realize();
        assert_eq!(g.source_edges(), g.sink_edges());

        let g = FreeKBraidWord::parse(4, 3, "a{1,2,3}").unwrap().realize();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edge_count, 7);
        let split: usize = g
            .strand_edges
            .iter()
            .take(3)
            .map(|e| e.len())
            .sum();
        assert_eq!(split, 6);

        let g = w(3, 3, "a{1,2,3}").realize();
        assert_eq!((g.vertices.len(), g.edge_count), (1, 6));

        let g = w(2, 2, "a{1,2} a{1,2}").realize();
        assert_eq!(g.vertices.len(), 2);
        assert!(g.strand_edges.iter().all(|e| e.len() == 3));

        let g = FreeKBraidWord::parse(3, 2, "a{1,2} a{1,2}").unwrap().realize();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.strand_edges[0].len(), 3);
        assert_eq!(g.strand_edges[1].len(), 3);
        for v in &g.vertices {
            assert_eq!(v.incoming.len(), 2);
            assert_eq!(v.outgoing.len(), 2);
            for (i, o) in v.incoming.iter().zip(&v.outgoing) {
                assert_eq!(o, &(i + 1));
            }
        }
    }
}
