//! Good colorings of strand graphs, binding numbers and the fundamental
//! k-biquandle presentation.

use serde::{Deserialize, Serialize};

use crate::biquandle::FiniteKBiquandle;
use crate::error::{Error, Result};
use crate::gnk::{BraidGraph, FreeKBraidWord};

/// An assignment of carrier elements to the edges of a word's strand graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub graph: BraidGraph,
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn source_colors(&self) -> Vec<usize> {
        self.graph
            .source_edges()
            .iter()
            .map(|&e| self.colors[e])
            .collect()
    }

    pub fn sink_colors(&self) -> Vec<usize> {
        self.graph
            .sink_edges()
            .iter()
            .map(|&e| self.colors[e])
            .collect()
    }

    /// Whether every vertex maps its incoming colors to its outgoing colors
    /// under `b`, coordinates in ascending strand order.
    pub fn is_good(&self, b: &FiniteKBiquandle) -> bool {
        if b.k() != self.graph.k || self.colors.len() != self.graph.edge_count {
            return false;
        }
        if self.colors.iter().any(|&c| c >= b.m()) {
            return false;
        }
        self.graph.vertices.iter().all(|v| {
            let x: Vec<usize> = v.incoming.iter().map(|&e| self.colors[e]).collect();
            let y: Vec<usize> = v.outgoing.iter().map(|&e| self.colors[e]).collect();
            b.apply(&x).map(|bx| bx == y).unwrap_or(false)
        })
    }
}

fn check_pair(w: &FreeKBraidWord, b: &FiniteKBiquandle) -> Result<()> {
    if w.k() != b.k() {
        return Err(Error::InvalidParameters(format!(
            "word has k={} but biquandle has k={}",
            w.k(),
            b.k()
        )));
    }
    Ok(())
}

fn check_chi(chi: &[usize], n: usize, m: usize) -> Result<()> {
    if chi.len() != n {
        return Err(Error::TupleLength {
            got: chi.len(),
            expected: n,
        });
    }
    if let Some(&c) = chi.iter().find(|&&c| c >= m) {
        return Err(Error::OutOfCarrier { color: c, m });
    }
    Ok(())
}

/// Extends source colors `chi_in` to the unique good coloring and returns it
/// together with the sink colors, indexed by strand.
pub fn propagate(
    w: &FreeKBraidWord,
    b: &FiniteKBiquandle,
    chi_in: &[usize],
) -> Result<(Coloring, Vec<usize>)> {
    check_pair(w, b)?;
    check_chi(chi_in, w.n(), b.m())?;
    let graph = w.realize();
    let mut colors = vec![usize::MAX; graph.edge_count];
    for (s, &e) in graph.source_edges().iter().enumerate() {
        colors[e] = chi_in[s];
    }
    let mut x = vec![0; w.k()];
    let positions: Vec<usize> = (0..w.k()).collect();
    for v in &graph.vertices {
        for (xi, &e) in x.iter_mut().zip(&v.incoming) {
            *xi = colors[e];
        }
        b.apply_window(&mut x, &positions);
        for (&yi, &e) in x.iter().zip(&v.outgoing) {
            colors[e] = yi;
        }
    }
    let coloring = Coloring { graph, colors };
    let out = coloring.sink_colors();
    Ok((coloring, out))
}

/// Sink colors only; cheaper than [`propagate`] for sweeps.
pub fn propagate_colors(w: &FreeKBraidWord, b: &FiniteKBiquandle, chi_in: &[usize]) -> Result<Vec<usize>> {
    check_pair(w, b)?;
    check_chi(chi_in, w.n(), b.m())?;
    let mut chi = chi_in.to_vec();
    let mut window = Vec::with_capacity(w.k());
    for l in w.letters() {
        window.clear();
        window.extend(l.elements().iter().map(|s| s - 1));
        b.apply_window(&mut chi, &window);
    }
    Ok(chi)
}

/// 1 if the coloring starting at `chi1` ends at `chi2`, else 0.
pub fn binding_number(
    w: &FreeKBraidWord,
    b: &FiniteKBiquandle,
    chi1: &[usize],
    chi2: &[usize],
) -> Result<u8> {
    check_chi(chi2, w.n(), b.m())?;
    let out = propagate_colors(w, b, chi1)?;
    Ok(u8::from(out == chi2))
}

/// Calls `f` on every tuple of `{0..m}^n` in lexicographic order.
pub fn for_each_tuple(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut x = vec![0; n];
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < m {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Number of good colorings, by propagating every source assignment.
pub fn count_colorings(w: &FreeKBraidWord, b: &FiniteKBiquandle) -> Result<u64> {
    check_pair(w, b)?;
    let mut count = 0u64;
    let mut err = None;
    for_each_tuple(w.n(), b.m(), |chi| match propagate(w, b, chi) {
        Ok((c, _)) => {
            if c.is_good(b) {
                count += 1;
            }
        }
        Err(e) => err = Some(e),
    });
    match err {
        Some(e) => Err(e),
        None => Ok(count),
    }
}

/// One vertex equation: generator `output` equals the `component`-th
/// coordinate of `B` applied to the `inputs` generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub vertex: usize,
    /// 1-based.
    pub component: usize,
    pub output: usize,
    pub inputs: Vec<usize>,
}

/// Generators are the edges of the strand graph; relations are the vertex
/// equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalPresentation {
    pub n: usize,
    pub k: usize,
    pub generators: usize,
    pub relations: Vec<Relation>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

pub fn fundamental_presentation(w: &FreeKBraidWord) -> FundamentalPresentation {
    let g = w.realize();
    let mut relations = Vec::with_capacity(g.vertices.len() * g.k);
    for (vi, v) in g.vertices.iter().enumerate() {
        for (j, &out) in v.outgoing.iter().enumerate() {
            relations.push(Relation {
                vertex: vi,
                component: j + 1,
                output: out,
                inputs: v.incoming.clone(),
            });
        }
    }
    FundamentalPresentation {
        n: g.n,
        k: g.k,
        generators: g.edge_count,
        relations,
        sources: g.source_edges(),
        sinks: g.sink_edges(),
    }
}

/// Counts assignments of carrier elements to generators satisfying every
/// relation, by backtracking. Generators are visited so that each relation
/// is checked as soon as its generators are all assigned.
pub fn hom_count(p: &FundamentalPresentation, b: &FiniteKBiquandle) -> Result<u64> {
    if p.k != b.k() {
        return Err(Error::InvalidParameters(format!(
            "presentation has k={} but biquandle has k={}",
            p.k,
            b.k()
        )));
    }
    for r in &p.relations {
        if r.inputs.len() != p.k
            || r.component == 0
            || r.component > p.k
            || r.output >= p.generators
            || r.inputs.iter().any(|&g| g >= p.generators)
        {
            return Err(Error::InvalidParameters(format!("malformed relation {r:?}")));
        }
    }

    // Order generators: repeatedly take a generator whose defining
    // relations have all inputs ordered; fall back to any remaining one.
    let mut defined_by: Vec<Vec<usize>> = vec![Vec::new(); p.generators];
    for (i, r) in p.relations.iter().enumerate() {
        defined_by[r.output].push(i);
    }
    let mut placed = vec![false; p.generators];
    let mut order = Vec::with_capacity(p.generators);
    while order.len() < p.generators {
        let ready = (0..p.generators).find(|&g| {
            !placed[g]
                && defined_by[g]
                    .iter()
                    .all(|&r| p.relations[r].inputs.iter().all(|&i| placed[i]))
        });
        let g = ready.unwrap_or_else(|| (0..p.generators).find(|&g| !placed[g]).expect("unplaced generator"));
        placed[g] = true;
        order.push(g);
    }
    let mut rank = vec![0; p.generators];
    for (i, &g) in order.iter().enumerate() {
        rank[g] = i;
    }
    // Relations to check right after assigning order[i].
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); p.generators];
    for (i, r) in p.relations.iter().enumerate() {
        let last = r
            .inputs
            .iter()
            .chain(std::iter::once(&r.output))
            .map(|&g| rank[g])
            .max()
            .expect("relation has generators");
        check_at[last].push(i);
    }

    fn rec(
        depth: usize,
        order: &[usize],
        check_at: &[Vec<usize>],
        p: &FundamentalPresentation,
        b: &FiniteKBiquandle,
        values: &mut [usize],
        x: &mut Vec<usize>,
    ) -> u64 {
        if depth == order.len() {
            return 1;
        }
        let g = order[depth];
        let mut total = 0;
        for c in 0..b.m() {
            values[g] = c;
            let ok = check_at[depth].iter().all(|&ri| {
                let r = &p.relations[ri];
                x.clear();
                x.extend(r.inputs.iter().map(|&i| values[i]));
                let y = b.apply(x).expect("inputs in carrier");
                y[r.component - 1] == values[r.output]
            });
            if ok {
                total += rec(depth + 1, order, check_at, p, b, values, x);
            }
        }
        total
    }

    let mut values = vec![0; p.generators];
    let mut x = Vec::with_capacity(p.k);
    Ok(rec(0, &order, &check_at, p, b, &mut values, &mut x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquandle::{gaussian, swap};

    fn w(n: usize, k: usize, s: &str) -> FreeKBraidWord {
        FreeKBraidWord::parse(n, k, s).unwrap()
    }

    #[test]
    fn propagation_examples() {
        let g2 = gaussian(2).unwrap();
        let e = w(4, 2, "e");
        assert_eq!(propagate(&e, &g2, &[0, 1, 1, 0]).unwrap().1, vec![0, 1, 1, 0]);
        let a = w(4, 2, "a{1,2}");
        let (c, out) = propagate(&a, &g2, &[0, 1, 0, 1]).unwrap();
        assert_eq!(out, vec![1, 0, 0, 1]);
        assert!(c.is_good(&g2));
        assert_eq!(c.source_colors(), vec![0, 1, 0, 1]);
        let aa = w(2, 2, "a{1,2} a{1,2}");
        assert_eq!(propagate_colors(&aa, &g2, &[1, 0]).unwrap(), vec![1, 0]);
    }

    #[test]
    fn binding_examples() {
        let g2 = gaussian(2).unwrap();
        let e = w(4, 2, "e");
        assert_eq!(binding_number(&e, &g2, &[0, 1, 0, 1], &[0, 1, 0, 1]).unwrap(), 1);
        assert_eq!(binding_number(&e, &g2, &[0, 1, 0, 1], &[1, 1, 0, 1]).unwrap(), 0);
        let a = w(4, 2, "a{1,2}");
        assert_eq!(binding_number(&a, &g2, &[0, 1, 0, 1], &[1, 0, 0, 1]).unwrap(), 1);
    }

    #[test]
    fn input_validation() {
        let g2 = gaussian(2).unwrap();
        let a = w(4, 2, "a{1,2}");
        assert!(matches!(propagate(&a, &g2, &[0, 1]), Err(Error::TupleLength { .. })));
        assert!(matches!(propagate(&a, &g2, &[0, 1, 2, 0]), Err(Error::OutOfCarrier { color: 2, .. })));
        let a3 = w(4, 3, "a{1,2,3}");
        assert!(propagate(&a3, &g2, &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn counts() {
        let g2 = gaussian(2).unwrap();
        assert_eq!(count_colorings(&w(4, 2, "a{1,2}"), &g2).unwrap(), 16);
        assert_eq!(count_colorings(&w(2, 2, "a{1,2} a{1,2}"), &swap(2).unwrap()).unwrap(), 4);
        assert_eq!(count_colorings(&w(3, 2, "e"), &swap(3).unwrap()).unwrap(), 27);
    }

    #[test]
    fn presentation_shape() {
        let p = fundamental_presentation(&w(3, 2, "e"));
        assert_eq!((p.generators, p.relations.len()), (3, 0));
        let p = fundamental_presentation(&w(4, 3, "a{1,2,3}"));
        assert_eq!((p.generators, p.relations.len()), (7, 3));
        let p = fundamental_presentation(&w(3, 3, "a{1,2,3}"));
        assert_eq!((p.generators, p.relations.len()), (6, 3));
        let p = fundamental_presentation(&w(2, 2, "a{1,2} a{1,2}"));
        assert_eq!((p.generators, p.relations.len()), (6, 4));
    }

    #[test]
    fn hom_count_examples() {
        let p = fundamental_presentation(&w(3, 2, "e"));
        assert_eq!(hom_count(&p, &swap(2).unwrap()).unwrap(), 8);
        let p = fundamental_presentation(&w(2, 2, "a{1,2}"));
        assert_eq!(hom_count(&p, &gaussian(2).unwrap()).unwrap(), 4);
        let p = fundamental_presentation(&w(3, 2, "a{1,2} a{2,3} a{1,3}"));
        assert_eq!(hom_count(&p, &swap(3).unwrap()).unwrap(), 27);
    }

    /// Exhaustive: good colorings over all edge assignments are exactly the
    /// propagated ones.
    #[test]
    fn colorings_are_determined_by_sources() {
        let b = swap(2).unwrap();
        let word = w(3, 2, "a{1,2} a{2,3}");
        let graph = word.realize();
        let mut good = 0;
        for_each_tuple(graph.edge_count, 2, |colors| {
            let c = Coloring {
                graph: graph.clone(),
                colors: colors.to_vec(),
            };
            if c.is_good(&b) {
                good += 1;
                let (p, _) = propagate(&word, &b, &c.source_colors()).unwrap();
                assert_eq!(p.colors, c.colors);
            }
        });
        assert_eq!(good, 8);
    }
}
