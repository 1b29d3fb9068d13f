//! Finite k-biquandles: a carrier `X = {0, ..., m-1}` with a map
//! `B: X^k -> X^k` that commutes with permutations of the factors, is an
//! involution, commutes on windows overlapping in at most `k - 2` factors,
//! and satisfies the tetrahedron identity on `X^{k+1}`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Encoding of tuples in `X^len` as base-`m` integers, most significant
/// digit first, so that numeric order is lexicographic order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TupleCodec {
    pub m: usize,
    pub len: usize,
}

impl TupleCodec {
    pub fn count(&self) -> usize {
        self.m.pow(self.len as u32)
    }

    pub fn encode(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &d| acc * self.m + d)
    }

    pub fn decode_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.m;
            idx /= self.m;
        }
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.len];
        self.decode_into(idx, &mut out);
        out
    }
}

/// A finite map `B: X^k -> X^k`, stored as a full lookup table.
///
/// Values built through [`FiniteKBiquandle::from_orbit_table`] and the
/// family constructors are equivariant by construction: the map is fixed on
/// sorted tuples and extended along the `Σ_k` action. [`check_axioms`]
/// verifies everything exhaustively.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteKBiquandle {
    k: usize,
    m: usize,
    table: Vec<u32>,
}

fn validate_km(k: usize, m: usize) -> Result<()> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameters(format!(
            "need k >= 1 and m >= 1, got k={k} m={m}"
        )));
    }
    match m.checked_pow(k as u32) {
        Some(c) if c <= 1 << 24 => Ok(()),
        _ => Err(Error::InvalidParameters(format!(
            "table for m={m}, k={k} is too large"
        ))),
    }
}

/// Index permutation sorting `x` stably: `x[order[j]]` is the `j`-th
/// smallest entry.
fn sort_order(x: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&i| x[i]);
    order
}

/// Sorted tuples of `X^k` in lexicographic order (one per `Σ_k`-orbit).
pub fn orbit_representatives(k: usize, m: usize) -> Vec<Vec<usize>> {
    (0..m).combinations_with_replacement(k).collect()
}

impl FiniteKBiquandle {
    /// The identity map (the trivial k-biquandle).
    pub fn identity(k: usize, m: usize) -> Result<Self> {
        validate_km(k, m)?;
        let count = TupleCodec { m, len: k }.count();
        Ok(FiniteKBiquandle {
            k,
            m,
            table: (0..count as u32).collect(),
        })
    }

    /// Builds the map from its values on sorted tuples and extends it
    /// equivariantly. Fails if a representative is missing or its image is
    /// not fixed by the representative's stabilizer.
    pub fn from_orbit_table(
        k: usize,
        m: usize,
        reps: &BTreeMap<Vec<usize>, Vec<usize>>,
    ) -> Result<Self> {
        validate_km(k, m)?;
        for (r, y) in reps {
            if r.len() != k || y.len() != k {
                return Err(Error::TupleLength {
                    got: r.len().max(y.len()),
                    expected: k,
                });
            }
            if let Some(&c) = r.iter().chain(y).find(|&&c| c >= m) {
                return Err(Error::OutOfCarrier { color: c, m });
            }
            if r.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Format(format!(
                    "orbit key {} is not sorted",
                    fmt_tuple(r)
                )));
            }
        }
        let codec = TupleCodec { m, len: k };
        let mut table = vec![0u32; codec.count()];
        let mut x = vec![0usize; k];
        for idx in 0..codec.count() {
            codec.decode_into(idx, &mut x);
            let order = sort_order(&x);
            let r: Vec<usize> = order.iter().map(|&i| x[i]).collect();
            let y = reps
                .get(&r)
                .ok_or_else(|| Error::MissingRepresentative(fmt_tuple(&r)))?;
            if idx == codec.encode(&r) {
                for j in 1..k {
                    if r[j - 1] == r[j] && y[j - 1] != y[j] {
                        return Err(Error::NotEquivariant(format!(
                            "{} -> {}",
                            fmt_tuple(&r),
                            fmt_tuple(y)
                        )));
                    }
                }
            }
            let mut out = vec![0usize; k];
            for (j, &i) in order.iter().enumerate() {
                out[i] = y[j];
            }
            table[idx] = codec.encode(&out) as u32;
        }
        Ok(FiniteKBiquandle { k, m, table })
    }

    /// Evaluates `f` on sorted tuples only and extends equivariantly.
    pub fn from_fn(k: usize, m: usize, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<Self> {
        validate_km(k, m)?;
        let reps: BTreeMap<Vec<usize>, Vec<usize>> = orbit_representatives(k, m)
            .into_iter()
            .map(|r| {
                let y = f(&r);
                (r, y)
            })
            .collect();
        Self::from_orbit_table(k, m, &reps)
    }

    /// Evaluates `f` on every tuple. The result need not be equivariant;
    /// use this to test candidate maps with [`check_axioms`].
    pub fn from_map_unchecked(
        k: usize,
        m: usize,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        validate_km(k, m)?;
        let codec = TupleCodec { m, len: k };
        let mut table = Vec::with_capacity(codec.count());
        let mut x = vec![0usize; k];
        for idx in 0..codec.count() {
            codec.decode_into(idx, &mut x);
            let y = f(&x);
            if y.len() != k {
                return Err(Error::TupleLength {
                    got: y.len(),
                    expected: k,
                });
            }
            if let Some(&c) = y.iter().find(|&&c| c >= m) {
                return Err(Error::OutOfCarrier { color: c, m });
            }
            table.push(codec.encode(&y) as u32);
        }
        Ok(FiniteKBiquandle { k, m, table })
    }

    pub(crate) fn from_table_unchecked(k: usize, m: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), m.pow(k as u32));
        FiniteKBiquandle { k, m, table }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Full table: entry `i` is the encoded image of the tuple encoded by
    /// `i` (base `m`, first coordinate most significant).
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub(crate) fn codec(&self) -> TupleCodec {
        TupleCodec {
            m: self.m,
            len: self.k,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    fn check_tuple(&self, x: &[usize], expected: usize) -> Result<()> {
        if x.len() != expected {
            return Err(Error::TupleLength {
                got: x.len(),
                expected,
            });
        }
        if let Some(&c) = x.iter().find(|&&c| c >= self.m) {
            return Err(Error::OutOfCarrier { color: c, m: self.m });
        }
        Ok(())
    }

    /// `B(x)`.
    pub fn apply(&self, x: &[usize]) -> Result<Vec<usize>> {
        self.check_tuple(x, self.k)?;
        let codec = self.codec();
        Ok(codec.decode(self.table[codec.encode(x)] as usize))
    }

    /// `B_idx(x)`: `B` on the coordinates listed in `idx` (1-based,
    /// strictly increasing), identity elsewhere.
    pub fn apply_on_subset(&self, x: &[usize], idx: &[usize]) -> Result<Vec<usize>> {
        self.check_tuple(x, x.len())?;
        if idx.len() != self.k {
            return Err(Error::InvalidParameters(format!(
                "window {idx:?} does not have {} entries",
                self.k
            )));
        }
        let mut prev = 0;
        for &i in idx {
            if i == 0 || i > x.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    max: x.len(),
                });
            }
            if i <= prev {
                return Err(Error::UnsortedSubset(format!("{idx:?}")));
            }
            prev = i;
        }
        let positions: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let mut out = x.to_vec();
        self.apply_window(&mut out, &positions);
        Ok(out)
    }

    /// In-place windowed application on 0-based positions.
    #[inline]
    pub(crate) fn apply_window(&self, x: &mut [usize], positions: &[usize]) {
        let mut idx = 0usize;
        for &p in positions {
            idx = idx * self.m + x[p];
        }
        let mut img = self.table[idx] as usize;
        for &p in positions.iter().rev() {
            x[p] = img % self.m;
            img /= self.m;
        }
    }

    /// Values on sorted tuples.
    pub fn orbit_table(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let codec = self.codec();
        orbit_representatives(self.k, self.m)
            .into_iter()
            .map(|r| {
                let y = codec.decode(self.table[codec.encode(&r)] as usize);
                (r, y)
            })
            .collect()
    }

    /// Conjugates by a carrier bijection `σ` (given as images of
    /// `0..m`): the result maps `σ(x)` to `σ(B(x))`.
    pub fn relabel(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.len() != self.m || !is_bijection(sigma) {
            return Err(Error::InvalidParameters(format!(
                "{sigma:?} is not a bijection of 0..{}",
                self.m
            )));
        }
        Ok(self.relabel_unchecked(sigma))
    }

    fn relabel_unchecked(&self, sigma: &[usize]) -> Self {
        let codec = self.codec();
        let mut table = vec![0u32; self.table.len()];
        let mut x = vec![0usize; self.k];
        let mut y = vec![0usize; self.k];
        for (idx, &img) in self.table.iter().enumerate() {
            codec.decode_into(idx, &mut x);
            codec.decode_into(img as usize, &mut y);
            x.iter_mut().for_each(|c| *c = sigma[*c]);
            y.iter_mut().for_each(|c| *c = sigma[*c]);
            table[codec.encode(&x)] = codec.encode(&y) as u32;
        }
        FiniteKBiquandle {
            k: self.k,
            m: self.m,
            table,
        }
    }

    /// The lexicographically least table over all `m!` relabelings.
    pub fn canonical_form(&self) -> Self {
        let mut best = self.clone();
        for sigma in (0..self.m).permutations(self.m) {
            let cand = self.relabel_unchecked(&sigma);
            if cand.table < best.table {
                best = cand;
            }
        }
        best
    }

    /// Biquandle file form.
    pub fn to_file(&self) -> BiquandleFile {
        BiquandleFile {
            k: self.k,
            m: self.m,
            table: self
                .orbit_table()
                .into_iter()
                .map(|(r, y)| (fmt_tuple(&r), fmt_tuple(&y)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }
}

fn is_bijection(sigma: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    true
}

pub(crate) fn fmt_tuple(x: &[usize]) -> String {
    x.iter().map(|c| c.to_string()).join(",")
}

impl fmt::Debug for FiniteKBiquandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteKBiquandle(k={}, m={}, {{", self.k, self.m)?;
        for (i, (r, y)) in self.orbit_table().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", fmt_tuple(r), fmt_tuple(y))?;
        }
        write!(f, "}})")
    }
}

/// JSON form: `k`, `m`, and a table from sorted-tuple strings to image
/// tuple strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiquandleFile {
    pub k: usize,
    pub m: usize,
    pub table: BTreeMap<String, String>,
}

fn parse_tuple(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("bad tuple `{s}`")))
        })
        .collect()
}

impl BiquandleFile {
    /// Validates equivariance compatibility and, unless `skip_axioms`, all
    /// k-biquandle axioms.
    pub fn into_biquandle(self, skip_axioms: bool) -> Result<FiniteKBiquandle> {
        let mut reps = BTreeMap::new();
        for (key, value) in &self.table {
            reps.insert(parse_tuple(key)?, parse_tuple(value)?);
        }
        if reps.len() != self.table.len() {
            return Err(Error::Format("duplicate orbit keys".into()));
        }
        let b = FiniteKBiquandle::from_orbit_table(self.k, self.m, &reps)?;
        if reps.len() != orbit_representatives(self.k, self.m).len() {
            return Err(Error::Format(format!(
                "expected {} orbit entries, found {}",
                orbit_representatives(self.k, self.m).len(),
                reps.len()
            )));
        }
        if !skip_axioms {
            let report = check_axioms(&b);
            if let Some(failed) = report.first_failure() {
                return Err(Error::AxiomFailure {
                    axiom: failed.axiom.to_string(),
                    detail: failed
                        .counterexample
                        .as_ref()
                        .map(|c| c.to_string())
                        .unwrap_or_default(),
                });
            }
        }
        Ok(b)
    }
}

/// Parses a biquandle JSON document.
pub fn load_biquandle(text: &str, skip_axioms: bool) -> Result<FiniteKBiquandle> {
    let file: BiquandleFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.into_biquandle(skip_axioms)
}

// ---------------------------------------------------------------------------
// Axioms

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Equivariance,
    Involution,
    FarCommutativity,
    Tetrahedron,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Equivariance => "equivariance",
            Axiom::Involution => "involution",
            Axiom::FarCommutativity => "far_commutativity",
            Axiom::Tetrahedron => "tetrahedron",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub context: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "input ({}) gives ({}) vs ({}) [{}]",
            fmt_tuple(&self.input),
            fmt_tuple(&self.left),
            fmt_tuple(&self.right),
            self.context
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    pub cases: u64,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub k: usize,
    pub m: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("all axioms are checked")
    }
}

/// Pairs of k-windows in `0..len` used for far commutativity, one entry
/// per unordered pair with overlap at most `k - 2`.
pub(crate) fn far_window_pairs(k: usize) -> Vec<(usize, Vec<usize>, Vec<usize>)> {
    let max_overlap = k.saturating_sub(2);
    let mut out = Vec::new();
    for overlap in 0..=max_overlap {
        let len = 2 * k - overlap;
        let windows: Vec<Vec<usize>> = (0..len).combinations(k).collect();
        for (i, a) in windows.iter().enumerate() {
            for b in &windows[i + 1..] {
                let common = a.iter().filter(|x| b.contains(x)).count();
                if common == overlap {
                    out.push((len, a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

/// Windows `{1..k+1} \ {i}` for `i = 1..k+1`, 0-based.
pub(crate) fn hat_windows(k: usize) -> Vec<Vec<usize>> {
    (0..=k)
        .map(|skip| (0..=k).filter(|&j| j != skip).collect())
        .collect()
}

fn one_based(w: &[usize]) -> String {
    format!("{{{}}}", w.iter().map(|i| (i + 1).to_string()).join(","))
}

fn check_equivariance(b: &FiniteKBiquandle) -> AxiomCheck {
    let codec = b.codec();
    let mut cases = 0;
    let mut x = vec![0; b.k];
    for idx in 0..codec.count() {
        codec.decode_into(idx, &mut x);
        let bx = codec.decode(b.table[idx] as usize);
        for j in 1..b.k {
            cases += 1;
            let mut px = x.clone();
            px.swap(j - 1, j);
            let left = codec.decode(b.table[codec.encode(&px)] as usize);
            let mut right = bx.clone();
            right.swap(j - 1, j);
            if left != right {
                return AxiomCheck {
                    axiom: Axiom::Equivariance,
                    passed: false,
                    cases,
                    counterexample: Some(Counterexample {
                        input: x.clone(),
                        left,
                        right,
                        context: format!("B∘π vs π∘B for π = ({} {})", j, j + 1),
                    }),
                };
            }
        }
    }
    AxiomCheck {
        axiom: Axiom::Equivariance,
        passed: true,
        cases,
        counterexample: None,
    }
}

fn check_involution(b: &FiniteKBiquandle) -> AxiomCheck {
    let codec = b.codec();
    for (idx, &img) in b.table.iter().enumerate() {
        let back = b.table[img as usize] as usize;
        if back != idx {
            return AxiomCheck {
                axiom: Axiom::Involution,
                passed: false,
                cases: idx as u64 + 1,
                counterexample: Some(Counterexample {
                    input: codec.decode(idx),
                    left: codec.decode(back),
                    right: codec.decode(idx),
                    context: "B(B(x)) vs x".into(),
                }),
            };
        }
    }
    AxiomCheck {
        axiom: Axiom::Involution,
        passed: true,
        cases: b.table.len() as u64,
        counterexample: None,
    }
}

/// First far-commutativity failure, if any: (input, left, right, windows).
pub(crate) fn far_commutativity_failure(
    b: &FiniteKBiquandle,
    pairs: &[(usize, Vec<usize>, Vec<usize>)],
    cases: &mut u64,
) -> Option<Counterexample> {
    for (len, wa, wb) in pairs {
        let codec = TupleCodec { m: b.m, len: *len };
        let mut x = vec![0; *len];
        for idx in 0..codec.count() {
            *cases += 1;
            codec.decode_into(idx, &mut x);
            let mut left = x.clone();
            b.apply_window(&mut left, wb);
            b.apply_window(&mut left, wa);
            let mut right = x.clone();
            b.apply_window(&mut right, wa);
            b.apply_window(&mut right, wb);
            if left != right {
                return Some(Counterexample {
                    input: x,
                    left,
                    right,
                    context: format!("B_{} B_{} vs B_{} B_{}", one_based(wa), one_based(wb), one_based(wb), one_based(wa)),
                });
            }
        }
    }
    None
}

pub(crate) fn tetrahedron_failure(
    b: &FiniteKBiquandle,
    hats: &[Vec<usize>],
    cases: &mut u64,
) -> Option<Counterexample> {
    let codec = TupleCodec {
        m: b.m,
        len: b.k + 1,
    };
    let mut x = vec![0; b.k + 1];
    for idx in 0..codec.count() {
        *cases += 1;
        codec.decode_into(idx, &mut x);
        // B_1̂ B_2̂ ⋯ B_(k+1)̂ applied to x: rightmost factor first
        let mut left = x.clone();
        for w in hats.iter().rev() {
            b.apply_window(&mut left, w);
        }
        let mut right = x.clone();
        for w in hats {
            b.apply_window(&mut right, w);
        }
        if left != right {
            return Some(Counterexample {
                input: x,
                left,
                right,
                context: "B_1̂⋯B_(k+1)̂ vs B_(k+1)̂⋯B_1̂".into(),
            });
        }
    }
    None
}

/// Exhaustively checks all four k-biquandle axioms on the finite carrier.
pub fn check_axioms(b: &FiniteKBiquandle) -> AxiomReport {
    let mut checks = vec![check_equivariance(b), check_involution(b)];

    let pairs = far_window_pairs(b.k);
    let mut cases = 0;
    let ce = far_commutativity_failure(b, &pairs, &mut cases);
    checks.push(AxiomCheck {
        axiom: Axiom::FarCommutativity,
        passed: ce.is_none(),
        cases,
        counterexample: ce,
    });

    let mut cases = 0;
    let ce = tetrahedron_failure(b, &hat_windows(b.k), &mut cases);
    checks.push(AxiomCheck {
        axiom: Axiom::Tetrahedron,
        passed: ce.is_none(),
        cases,
        counterexample: ce,
    });

    AxiomReport {
        k: b.k,
        m: b.m,
        checks,
    }
}

/// Whether two biquandles differ by a carrier relabeling.
pub fn is_isomorphic(a: &FiniteKBiquandle, b: &FiniteKBiquandle) -> bool {
    a.k == b.k && a.m == b.m && a.canonical_form() == b.canonical_form()
}

// ---------------------------------------------------------------------------
// Constructions

/// `X = Z_2`, `B(x_1, ..., x_k) = (x_1 + 1, ..., x_k + 1)`.
pub fn gaussian(k: usize) -> Result<FiniteKBiquandle> {
    FiniteKBiquandle::from_fn(k, 2, |x| x.iter().map(|c| 1 - c).collect())
}

/// The 2-biquandle exchanging the two factors, `B(x, y) = (y, x)`.
pub fn swap(m: usize) -> Result<FiniteKBiquandle> {
    FiniteKBiquandle::from_fn(2, m, |x| vec![x[1], x[0]])
}

/// An involution of `{0, ..., m-1}` as a product of disjoint transpositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Involution {
    m: usize,
    pairs: Vec<(usize, usize)>,
}

impl Involution {
    pub fn new(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut used = vec![false; m];
        let mut norm = Vec::with_capacity(pairs.len());
        for &(p, q) in pairs {
            if p >= m || q >= m {
                return Err(Error::InvalidInvolution(format!(
                    "({p} {q}) leaves the carrier 0..{m}"
                )));
            }
            if p == q || used[p] || used[q] {
                return Err(Error::InvalidInvolution(format!(
                    "transpositions {pairs:?} are not disjoint"
                )));
            }
            used[p] = true;
            used[q] = true;
            norm.push((p.min(q), p.max(q)));
        }
        norm.sort_unstable();
        Ok(Involution { m, pairs: norm })
    }

    pub fn identity(m: usize) -> Self {
        Involution {
            m,
            pairs: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of transpositions.
    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn fixed_points(&self) -> usize {
        self.m - 2 * self.pairs.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        for &(p, q) in &self.pairs {
            if x == p {
                return q;
            }
            if x == q {
                return p;
            }
        }
        x
    }

    /// Index of the transposition moving `x`.
    pub fn pair_of(&self, x: usize) -> Option<usize> {
        self.pairs.iter().position(|&(p, q)| x == p || x == q)
    }

    /// Every involution of `{0, ..., m-1}`, identity first.
    pub fn all(m: usize) -> Vec<Involution> {
        fn rec(
            m: usize,
            start: usize,
            used: &mut Vec<bool>,
            cur: &mut Vec<(usize, usize)>,
            out: &mut Vec<Involution>,
        ) {
            out.push(Involution {
                m,
                pairs: cur.clone(),
            });
            for p in start..m {
                if used[p] {
                    continue;
                }
                for q in p + 1..m {
                    if used[q] {
                        continue;
                    }
                    used[p] = true;
                    used[q] = true;
                    cur.push((p, q));
                    rec(m, p + 1, used, cur, out);
                    cur.pop();
                    used[p] = false;
                    used[q] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(m, 0, &mut vec![false; m], &mut Vec::new(), &mut out);
        out.sort_by(|a, b| (a.t(), &a.pairs).cmp(&(b.t(), &b.pairs)));
        out
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "id");
        }
        for (p, q) in &self.pairs {
            write!(f, "({p} {q})")?;
        }
        Ok(())
    }
}

/// Componentwise involution, `B(x) = (τ(x_1), ..., τ(x_k))`.
pub fn involution_kbiquandle(tau: &Involution, k: usize) -> Result<FiniteKBiquandle> {
    FiniteKBiquandle::from_fn(k, tau.m, |x| x.iter().map(|&c| tau.apply(c)).collect())
}

/// `m_i(x)`: how many components of `x` are moved by the `i`-th
/// transposition of `τ`.
pub fn multiplicity_vector(tau: &Involution, x: &[usize]) -> Vec<usize> {
    let mut v = vec![0; tau.t()];
    for &c in x {
        if let Some(i) = tau.pair_of(c) {
            v[i] += 1;
        }
    }
    v
}

/// A subset `μ` of `M_k`, the vectors `(m_1, ..., m_t)` of nonnegative
/// integers with `1 <= Σ m_i <= k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicitySet {
    k: usize,
    t: usize,
    members: std::collections::BTreeSet<Vec<usize>>,
}

impl MultiplicitySet {
    pub fn new(k: usize, t: usize, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let members: std::collections::BTreeSet<Vec<usize>> = members.into_iter().collect();
        for v in &members {
            let s: usize = v.iter().sum();
            if v.len() != t || s < 1 || s > k {
                return Err(Error::InvalidMultiplicity(format!("{v:?}")));
            }
        }
        Ok(MultiplicitySet { k, t, members })
    }

    pub fn empty(k: usize, t: usize) -> Self {
        MultiplicitySet {
            k,
            t,
            members: Default::default(),
        }
    }

    /// All of `M_k` for `t` transpositions.
    pub fn full(k: usize, t: usize) -> Self {
        MultiplicitySet {
            k,
            t,
            members: vectors_with_sum_range(t, 1, k).into_iter().collect(),
        }
    }

    /// The members of `M_k` realized by some tuple in `X^k` under `τ`.
    pub fn attainable(tau: &Involution, k: usize) -> Self {
        let lo = if tau.fixed_points() == 0 { k } else { 1 };
        MultiplicitySet {
            k,
            t: tau.t(),
            members: vectors_with_sum_range(tau.t(), lo.max(1), k)
                .into_iter()
                .collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn members(&self) -> &std::collections::BTreeSet<Vec<usize>> {
        &self.members
    }

    pub fn contains(&self, v: &[usize]) -> bool {
        self.members.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for MultiplicitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({})", fmt_tuple(v))?;
        }
        write!(f, "}}")
    }
}

fn vectors_with_sum_range(t: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(t, left - v, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(t, hi, &mut Vec::new(), &mut all);
    all.retain(|v| {
        let s: usize = v.iter().sum();
        s >= lo && s <= hi
    });
    all.sort();
    all
}

/// `B_{τ,μ}(x) = τ(x)` when `m(x) ∈ μ`, else `x`.
pub fn conditional_involution(
    tau: &Involution,
    mu: &MultiplicitySet,
    k: usize,
) -> Result<FiniteKBiquandle> {
    if mu.t != tau.t() || mu.k != k {
        return Err(Error::InvalidMultiplicity(format!(
            "{mu} was built for k={}, t={} but τ = {tau} has t={} and k={k}",
            mu.k,
            mu.t,
            tau.t()
        )));
    }
    let b = FiniteKBiquandle::from_fn(k, tau.m, |x| {
        if mu.contains(&multiplicity_vector(tau, x)) {
            x.iter().map(|&c| tau.apply(c)).collect()
        } else {
            x.to_vec()
        }
    })?;
    debug_assert!(check_axioms(&b).passed(), "B_(τ,μ) must be a k-biquandle");
    Ok(b)
}

// ---------------------------------------------------------------------------
// Flat biquandles

/// A flat biquandle: two binary operations on `{0, ..., m-1}`; a crossing
/// of a left strand colored `a` with a right strand colored `b` produces
/// `(a ∘ b, b ∗ a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlatBiquandle {
    m: usize,
    star: Vec<usize>,
    circ: Vec<usize>,
}

impl FlatBiquandle {
    /// Tables are row-major: `star[x * m + y] = x ∗ y`.
    pub fn new(m: usize, star: Vec<usize>, circ: Vec<usize>) -> Result<Self> {
        if m == 0 || star.len() != m * m || circ.len() != m * m {
            return Err(Error::InvalidParameters(format!(
                "flat tables must have {} entries",
                m * m
            )));
        }
        if let Some(&c) = star.iter().chain(&circ).find(|&&c| c >= m) {
            return Err(Error::OutOfCarrier { color: c, m });
        }
        Ok(FlatBiquandle { m, star, circ })
    }

    pub fn from_fns(
        m: usize,
        star: impl Fn(usize, usize) -> usize,
        circ: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let s = (0..m * m).map(|i| star(i / m, i % m)).collect();
        let c = (0..m * m).map(|i| circ(i / m, i % m)).collect();
        Self::new(m, s, c)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `x ∗ y`
    pub fn star(&self, x: usize, y: usize) -> usize {
        self.star[x * self.m + y]
    }

    /// `x ∘ y`
    pub fn circ(&self, x: usize, y: usize) -> usize {
        self.circ[x * self.m + y]
    }

    /// Colors after strand `i` (left) crosses strand `j` (right).
    fn cross(&self, x: &mut [usize], i: usize, j: usize) {
        let (a, b) = (x[i], x[j]);
        x[i] = self.circ(a, b);
        x[j] = self.star(b, a);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub passed: bool,
    /// Values of `x, y[, z]` and both sides at the first failure.
    pub counterexample: Option<(Vec<usize>, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatReport {
    pub k: usize,
    pub checks: Vec<IdentityCheck>,
}

impl FlatReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check_identity2(
    name: &str,
    m: usize,
    f: impl Fn(usize, usize) -> (usize, usize),
) -> IdentityCheck {
    for x in 0..m {
        for y in 0..m {
            let (l, r) = f(x, y);
            if l != r {
                return IdentityCheck {
                    identity: name.into(),
                    passed: false,
                    counterexample: Some((vec![x, y], l, r)),
                };
            }
        }
    }
    IdentityCheck {
        identity: name.into(),
        passed: true,
        counterexample: None,
    }
}

fn check_identity3(
    name: &str,
    m: usize,
    f: impl Fn(usize, usize, usize) -> (usize, usize),
) -> IdentityCheck {
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let (l, r) = f(x, y, z);
                if l != r {
                    return IdentityCheck {
                        identity: name.into(),
                        passed: false,
                        counterexample: Some((vec![x, y, z], l, r)),
                    };
                }
            }
        }
    }
    IdentityCheck {
        identity: name.into(),
        passed: true,
        counterexample: None,
    }
}

/// Checks the identities a flat biquandle needs to induce a k-biquandle:
/// for `k >= 2`, `x = (x∘y)∗(y∗x)` and `x∗y = x∘y`; for `k >= 3` also
/// `x∗(y∘z) = x∗y` and `(x∘y)∗z = (x∘z)∗y`.
pub fn flat_check(f: &FlatBiquandle, k: usize) -> FlatReport {
    let m = f.m;
    let mut checks = Vec::new();
    if k >= 2 {
        checks.push(check_identity2("x = (x∘y)∗(y∗x)", m, |x, y| {
            (x, f.star(f.circ(x, y), f.star(y, x)))
        }));
        checks.push(check_identity2("x∗y = x∘y", m, |x, y| {
            (f.star(x, y), f.circ(x, y))
        }));
    }
    if k >= 3 {
        checks.push(check_identity3("x∗(y∘z) = x∗y", m, |x, y, z| {
            (f.star(x, f.circ(y, z)), f.star(x, y))
        }));
        checks.push(check_identity3("(x∘y)∗z = (x∘z)∗y", m, |x, y, z| {
            (f.star(f.circ(x, y), z), f.star(f.circ(x, z), y))
        }));
    }
    FlatReport { k, checks }
}

/// Splits a k-crossing into pairwise crossings applied in `order`.
pub fn flat_split(f: &FlatBiquandle, x: &[usize], order: &[(usize, usize)]) -> Vec<usize> {
    let mut y = x.to_vec();
    for &(i, j) in order {
        f.cross(&mut y, i, j);
    }
    y
}

/// The two splittings of a triple crossing.
pub const SPLIT_FORWARD: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
pub const SPLIT_BACKWARD: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

/// The 3-biquandle induced by a flat biquandle:
/// `B(x1,x2,x3) = ((x1∘x2)∘x3, (x2∗x1)∘(x3∗(x1∘x2)), (x3∗(x1∘x2))∗(x2∗x1))`.
pub fn flat_derived3(f: &FlatBiquandle) -> Result<FiniteKBiquandle> {
    let report = flat_check(f, 3);
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::FlatIdentity(c.identity.clone()));
    }
    let formula = |x: &[usize]| {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let x1c2 = f.circ(x1, x2);
        let x2s1 = f.star(x2, x1);
        let x3s = f.star(x3, x1c2);
        vec![f.circ(x1c2, x3), f.circ(x2s1, x3s), f.star(x3s, x2s1)]
    };
    let b = FiniteKBiquandle::from_map_unchecked(3, f.m, formula)?;
    let codec = b.codec();
    for idx in 0..codec.count() {
        let x = codec.decode(idx);
        let other = flat_split(f, &x, &SPLIT_BACKWARD);
        if codec.encode(&other) != b.table[idx] as usize {
            return Err(Error::AxiomFailure {
                axiom: "splitting independence".into(),
                detail: format!(
                    "({}) splits to ({}) vs ({})",
                    fmt_tuple(&x),
                    fmt_tuple(&codec.decode(b.table[idx] as usize)),
                    fmt_tuple(&other)
                ),
            });
        }
    }
    Ok(b)
}

/// All single-operation flat tables (`∗ = ∘`) on `m` elements that pass
/// [`flat_check`] for arity 3.
pub fn valid_flat_tables3(m: usize) -> Vec<FlatBiquandle> {
    let cells = m * m;
    let total = m.pow(cells as u32);
    let mut out = Vec::new();
    let mut op = vec![0usize; cells];
    for idx in 0..total {
        TupleCodec { m, len: cells }.decode_into(idx, &mut op);
        let f = FlatBiquandle {
            m,
            star: op.clone(),
            circ: op.clone(),
        };
        if flat_check(&f, 3).passed() {
            out.push(f);
        }
    }
    out
}

/// Every k-biquandle built by the constructions in this module on small
/// carriers: the Gaussian one, componentwise involutions (`m <= 4`),
/// conditional involutions over nonempty attainable `μ` (`m <= 3`), the
/// flat-derived ones (`k = 3`, `m <= 3`) and the swap (`k = 2`, `m <= 4`).
/// Names are stable and unique.
pub fn constructed_library(k: usize) -> Vec<(String, FiniteKBiquandle)> {
    let mut out = Vec::new();
    let Ok(g) = gaussian(k) else {
        return out;
    };
    out.push((format!("gaussian({k})"), g));
    for m in 1..=4usize {
        if m.pow(k as u32) > 1 << 12 {
            break;
        }
        for tau in Involution::all(m) {
            if let Ok(b) = involution_kbiquandle(&tau, k) {
                out.push((format!("involution(m={m}, tau={tau})"), b));
            }
        }
    }
    for m in 1..=3usize {
        if m.pow(k as u32) > 1 << 12 {
            break;
        }
        for tau in Involution::all(m).into_iter().filter(|t| t.t() > 0) {
            let attainable: Vec<Vec<usize>> = MultiplicitySet::attainable(&tau, k).members().iter().cloned().collect();
            if attainable.len() > 8 {
                continue;
            }
            for bits in 1u32..(1 << attainable.len()) {
                let chosen = attainable
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, v)| v.clone());
                let mu = MultiplicitySet::new(k, tau.t(), chosen).expect("attainable vectors lie in M_k");
                if let Ok(b) = conditional_involution(&tau, &mu, k) {
                    out.push((format!("conditional(m={m}, tau={tau}, mu={mu})"), b));
                }
            }
        }
    }
    if k == 3 {
        for m in 1..=3 {
            for (i, f) in valid_flat_tables3(m).iter().enumerate() {
                if let Ok(b) = flat_derived3(f) {
                    out.push((format!("flat(m={m}, #{i})"), b));
                }
            }
        }
    }
    if k == 2 {
        for m in 2..=4 {
            out.push((format!("swap({m})"), swap(m).expect("m >= 1")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_members_are_kbiquandles() {
        for k in 1..=3 {
            let lib = constructed_library(k);
            assert!(lib.len() > 5);
            for (name, b) in &lib {
                assert!(check_axioms(b).passed(), "{name}");
            }
        }
    }

    #[test]
    fn gaussian_examples() {
        let g2 = gaussian(2).unwrap();
        assert_eq!(g2.apply(&[0, 1]).unwrap(), vec![1, 0]);
        let g3 = gaussian(3).unwrap();
        assert_eq!(g3.apply(&[0, 1, 0]).unwrap(), vec![1, 0, 1]);
        assert_eq!(g3.apply(&[0, 0, 0]).unwrap(), vec![1, 1, 1]);
        assert!(check_axioms(&g3).passed());
        assert!(!is_isomorphic(&g3, &FiniteKBiquandle::identity(3, 2).unwrap()));
    }

    #[test]
    fn apply_rejects_bad_input() {
        let g = gaussian(2).unwrap();
        assert!(matches!(
            g.apply(&[0, 2]),
            Err(Error::OutOfCarrier { color: 2, m: 2 })
        ));
        assert!(matches!(g.apply(&[0]), Err(Error::TupleLength { .. })));
        assert!(g.apply_on_subset(&[0, 0, 0], &[3, 1]).is_err());
        assert!(g.apply_on_subset(&[0, 0, 0], &[1, 4]).is_err());
        assert!(g.apply_on_subset(&[0, 0, 0], &[1]).is_err());
    }

    #[test]
    fn apply_on_subset_examples() {
        let g = gaussian(2).unwrap();
        assert_eq!(g.apply_on_subset(&[0, 0, 0], &[1, 3]).unwrap(), vec![1, 0, 1]);
        assert_eq!(
            g.apply_on_subset(&[0, 1], &[1, 2]).unwrap(),
            g.apply(&[0, 1]).unwrap()
        );
        let once = g.apply_on_subset(&[0, 1, 1, 0], &[2, 4]).unwrap();
        assert_eq!(g.apply_on_subset(&once, &[2, 4]).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn orbit_table_rejects_stabilizer_violation() {
        let mut reps = BTreeMap::new();
        reps.insert(vec![0, 0], vec![0, 1]);
        reps.insert(vec![0, 1], vec![0, 1]);
        reps.insert(vec![1, 1], vec![1, 1]);
        assert!(matches!(
            FiniteKBiquandle::from_orbit_table(2, 2, &reps),
            Err(Error::NotEquivariant(_))
        ));
        reps.remove(&vec![0, 0]);
        assert!(matches!(
            FiniteKBiquandle::from_orbit_table(2, 2, &reps),
            Err(Error::MissingRepresentative(_))
        ));
    }

    #[test]
    fn orbit_storage_size() {
        assert_eq!(orbit_representatives(3, 3).len(), 10);
        assert_eq!(orbit_representatives(3, 2).len(), 4);
    }

    #[test]
    fn identity_passes() {
        for (k, m) in [(1, 3), (2, 3), (3, 2), (4, 2)] {
            assert!(check_axioms(&FiniteKBiquandle::identity(k, m).unwrap()).passed());
        }
    }

    #[test]
    fn swap_is_a_two_biquandle() {
        // exhaustive over the 4 tuples of Z_2 (and 9 of Z_3): equivariant,
        // involutive, and the tetrahedron holds since the three factor
        // transpositions of S_3 multiply to an element of order 2
        for m in [2, 3] {
            assert!(check_axioms(&swap(m).unwrap()).passed());
        }
    }

    #[test]
    fn non_equivariant_map_reports_counterexample() {
        let b = FiniteKBiquandle::from_map_unchecked(2, 2, |x| vec![1 - x[0], x[1]]).unwrap();
        let report = check_axioms(&b);
        let eq = report.get(Axiom::Equivariance);
        assert!(!eq.passed);
        let ce = eq.counterexample.as_ref().unwrap();
        assert_eq!(ce.input, vec![0, 0]);
        assert_eq!(ce.left, vec![1, 0]);
        assert_eq!(ce.right, vec![0, 1]);
    }

    #[test]
    fn non_involutive_map_fails() {
        // constant map on Z_2 with k = 2 is equivariant but not involutive
        let b = FiniteKBiquandle::from_fn(2, 2, |_| vec![0, 0]).unwrap();
        let report = check_axioms(&b);
        assert!(report.get(Axiom::Equivariance).passed);
        assert!(!report.get(Axiom::Involution).passed);
    }

    #[test]
    fn involution_examples() {
        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        let b = involution_kbiquandle(&tau, 3).unwrap();
        assert_eq!(b.apply(&[0, 1, 2]).unwrap(), vec![1, 0, 2]);
        let id = involution_kbiquandle(&Involution::identity(3), 3).unwrap();
        assert!(id.is_identity());
        let z2 = involution_kbiquandle(&Involution::new(2, &[(0, 1)]).unwrap(), 3).unwrap();
        assert_eq!(z2, gaussian(3).unwrap());
        assert!(Involution::new(3, &[(0, 1), (1, 2)]).is_err());
        assert!(Involution::new(3, &[(0, 0)]).is_err());
        assert!(Involution::new(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn involution_counts() {
        // 1, 1, 2, 4, 10, 26 involutions on 0..m
        let counts: Vec<usize> = (0..6).map(|m| Involution::all(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26]);
    }

    #[test]
    fn multiplicity_examples() {
        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        assert_eq!(multiplicity_vector(&tau, &[0, 1, 2]), vec![2]);
        assert_eq!(multiplicity_vector(&tau, &[2, 2, 2]), vec![0]);
        assert_eq!(multiplicity_vector(&tau, &[0, 0, 1]), vec![3]);
    }

    #[test]
    fn multiplicity_sets() {
        assert_eq!(MultiplicitySet::full(3, 1).members().len(), 3);
        // (a, b) with 1 <= a + b <= 3: 2 + 3 + 4
        assert_eq!(MultiplicitySet::full(3, 2).members().len(), 9);
        assert!(MultiplicitySet::new(3, 1, [vec![4]]).is_err());
        assert!(MultiplicitySet::new(3, 1, [vec![0]]).is_err());
        let z2 = Involution::new(2, &[(0, 1)]).unwrap();
        let att = MultiplicitySet::attainable(&z2, 3);
        assert_eq!(att.members().iter().cloned().collect::<Vec<_>>(), vec![vec![3]]);
    }

    #[test]
    fn conditional_involution_examples() {
        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        let empty = conditional_involution(&tau, &MultiplicitySet::empty(3, 1), 3).unwrap();
        assert!(empty.is_identity());

        let mu1 = MultiplicitySet::new(3, 1, [vec![1]]).unwrap();
        let b = conditional_involution(&tau, &mu1, 3).unwrap();
        assert_eq!(b.apply(&[0, 2, 2]).unwrap(), vec![1, 2, 2]);
        assert_eq!(b.apply(&[0, 1, 2]).unwrap(), vec![0, 1, 2]);

        let z2 = Involution::new(2, &[(0, 1)]).unwrap();
        let full = conditional_involution(&z2, &MultiplicitySet::full(3, 1), 3).unwrap();
        assert_eq!(full, gaussian(3).unwrap());

        let wrong_t = MultiplicitySet::full(3, 2);
        assert!(conditional_involution(&tau, &wrong_t, 3).is_err());
    }

    #[test]
    fn conditional_involutions_are_distinct_up_to_relabeling() {
        // μ = {(1)} vs μ = {(2)} on Z_3, k = 3: no relabeling conjugates them
        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        let a = conditional_involution(&tau, &MultiplicitySet::new(3, 1, [vec![1]]).unwrap(), 3)
            .unwrap();
        let b = conditional_involution(&tau, &MultiplicitySet::new(3, 1, [vec![2]]).unwrap(), 3)
            .unwrap();
        assert!(!is_isomorphic(&a, &b));
        let relabeled = a.relabel(&[2, 0, 1]).unwrap();
        assert!(is_isomorphic(&a, &relabeled));
        assert_ne!(a, relabeled);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant() {
        let tau = Involution::new(4, &[(0, 1), (2, 3)]).unwrap();
        let mu = MultiplicitySet::new(2, 2, [vec![1, 1], vec![0, 2]]).unwrap();
        let b = conditional_involution(&tau, &mu, 2).unwrap();
        let c = b.canonical_form();
        assert_eq!(c.canonical_form(), c);
        for sigma in (0..4).permutations(4) {
            assert_eq!(b.relabel(&sigma).unwrap().canonical_form(), c);
        }
    }

    #[test]
    fn flat_check_examples() {
        let trivial = FlatBiquandle::from_fns(3, |x, _| x, |x, _| x).unwrap();
        for k in 1..=4 {
            assert!(flat_check(&trivial, k).passed());
        }
        let shift2 = FlatBiquandle::from_fns(2, |x, _| (x + 1) % 2, |x, _| (x + 1) % 2).unwrap();
        assert!(flat_check(&shift2, 3).passed());
        let shift4 = FlatBiquandle::from_fns(4, |x, _| (x + 1) % 4, |x, _| (x + 1) % 4).unwrap();
        let report = flat_check(&shift4, 3);
        assert!(!report.passed());
        let first = &report.checks[0];
        assert_eq!(first.identity, "x = (x∘y)∗(y∗x)");
        assert_eq!(first.counterexample, Some((vec![0, 0], 0, 2)));
    }

    #[test]
    fn flat_derived_examples() {
        let trivial = FlatBiquandle::from_fns(3, |x, _| x, |x, _| x).unwrap();
        assert!(flat_derived3(&trivial).unwrap().is_identity());
        let shift2 = FlatBiquandle::from_fns(2, |x, _| (x + 1) % 2, |x, _| (x + 1) % 2).unwrap();
        let b = flat_derived3(&shift2).unwrap();
        assert!(b.is_identity());
        assert!(check_axioms(&b).passed());
        let shift4 = FlatBiquandle::from_fns(4, |x, _| (x + 1) % 4, |x, _| (x + 1) % 4).unwrap();
        assert!(matches!(flat_derived3(&shift4), Err(Error::FlatIdentity(_))));
    }

    #[test]
    fn flat_split_matches_formula() {
        // forward splitting reproduces the closed formula on a non-symmetric table
        let f = FlatBiquandle::from_fns(3, |x, y| (x + 2 * y) % 3, |x, y| (2 * x + y) % 3).unwrap();
        for x1 in 0..3 {
            for x2 in 0..3 {
                for x3 in 0..3 {
                    let got = flat_split(&f, &[x1, x2, x3], &SPLIT_FORWARD);
                    let a = f.circ(f.circ(x1, x2), x3);
                    let b = f.circ(f.star(x2, x1), f.star(x3, f.circ(x1, x2)));
                    let c = f.star(f.star(x3, f.circ(x1, x2)), f.star(x2, x1));
                    assert_eq!(got, vec![a, b, c]);
                }
            }
        }
    }

    #[test]
    fn file_round_trip_and_validation() {
        let tau = Involution::new(3, &[(0, 1)]).unwrap();
        let b = conditional_involution(&tau, &MultiplicitySet::new(3, 1, [vec![1], vec![3]]).unwrap(), 3)
            .unwrap();
        let json = b.to_json();
        assert_eq!(load_biquandle(&json, false).unwrap(), b);

        let bad = r#"{"k":2,"m":2,"table":{"0,0":"0,0","0,1":"0,0","1,1":"1,1"}}"#;
        assert!(matches!(
            load_biquandle(bad, false),
            Err(Error::AxiomFailure { .. })
        ));
        assert!(load_biquandle(bad, true).is_ok());
        let incomplete = r#"{"k":2,"m":2,"table":{"0,0":"0,0"}}"#;
        assert!(load_biquandle(incomplete, true).is_err());
        let unsorted = r#"{"k":2,"m":2,"table":{"0,0":"0,0","1,0":"1,0","1,1":"1,1"}}"#;
        assert!(load_biquandle(unsorted, true).is_err());
    }
}
