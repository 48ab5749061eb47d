//! Deciding whether `sup_{i,w} W(i,w) / W(e,w)` is finite.
//!
//! For families whose weight `λ_{j,w}` depends on `w` only through a finite
//! state that is updated letter by letter, the ratio evolves along a walk in
//! the product of two copies of that state machine (one for `ξ_i`, one for
//! `ξ_e`). The supremum is infinite exactly when a reachable cycle of that
//! pair graph multiplies the ratio by more than one.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::words::{for_each_word_of_length, truncated_dimension, BasisEnumeration, Word};

use super::right::commutant_ratio;
use super::{Family, WeightSystem};

/// Pair graphs larger than this are not analysed.
const MAX_PAIR_NODES: usize = 1024;
/// Cycle means (in log space) above this count as growth.
const GROWTH_EPS: f64 = 1e-12;
/// Largest number of words the direct sweep will visit.
const MAX_SWEEP_WORDS: usize = 1 << 22;
/// Repetitions of the growth cycle sampled into a certificate.
const CERT_SAMPLES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The supremum over all words is finite; `exact_sup` holds it.
    Bounded,
    /// Finite over the inspected range, undecided beyond it.
    BoundedSoFar,
    /// The supremum is infinite; a growth certificate is attached.
    Diverging,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::BoundedSoFar => "bounded_so_far",
            Verdict::Diverging => "diverging",
        }
    }
}

/// A word family along which `W(letter, w) / W(e, w)` grows geometrically:
/// `w_m = cycle^m prefix`, with each extra repetition multiplying the ratio
/// by `growth_per_cycle`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCertificate {
    pub letter: u8,
    pub prefix: Word,
    pub cycle: Word,
    pub growth_per_cycle: f64,
    /// `(m, W(letter, w_m) / W(e, w_m))` computed directly from the weights.
    pub samples: Vec<(usize, f64)>,
}

impl GrowthCertificate {
    pub fn word(&self, repetitions: usize) -> Word {
        self.cycle.pow(repetitions).concat(&self.prefix)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutantSup {
    /// Largest ratio over `|w| <= depth`.
    pub value: f64,
    pub depth: usize,
    /// `(i, w)` attaining `value` (first in graded order).
    pub witness: (u8, Word),
    pub verdict: Verdict,
    /// The supremum over all words, when the family allows deciding it.
    pub exact_sup: Option<f64>,
    pub certificate: Option<GrowthCertificate>,
    pub method: &'static str,
}

/// Sweeps `|w| <= depth` and decides the verdict for the family.
pub fn commutant_sup(ws: &WeightSystem, depth: usize) -> Result<CommutantSup> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let sweep_depth = ws.table_depth().map_or(depth, |d| d.min(depth));
    let (value, witness) = sweep(ws, sweep_depth)?;
    let mut report = CommutantSup {
        value,
        depth: sweep_depth,
        witness,
        verdict: Verdict::BoundedSoFar,
        exact_sup: None,
        certificate: None,
        method: "finite_range",
    };
    match ws.family() {
        Family::Constant { .. } | Family::Scaled { .. } => {
            report.verdict = Verdict::Bounded;
            report.exact_sup = Some(1.0);
            report.method = "closed_form";
        }
        Family::FinitePerturbation { cutoff, .. } => {
            // factors beyond position cutoff+1 use the tail on both paths and cancel
            let sup = if *cutoff < sweep_depth {
                value
            } else {
                sweep(ws, cutoff + 1)?.0
            };
            report.verdict = Verdict::Bounded;
            report.exact_sup = Some(sup);
            report.method = "enumeration";
        }
        Family::Periodic { .. } | Family::TwoLetterM { .. } => {
            let machine = StateMachine::of(ws).expect("finite-state family");
            match analyse(ws, &machine) {
                PairAnalysis::TooLarge => {}
                PairAnalysis::Bounded(sup) => {
                    report.verdict = Verdict::Bounded;
                    report.exact_sup = Some(sup.max(value));
                    report.method = "pair_automaton";
                }
                PairAnalysis::Growth(cert) => {
                    report.verdict = Verdict::Diverging;
                    report.exact_sup = Some(f64::INFINITY);
                    report.certificate = Some(cert);
                    report.method = "pair_automaton";
                }
                PairAnalysis::Unverified => {
                    report.method = "pair_automaton";
                }
            }
        }
        Family::Tabulated { source, .. } => {
            if let Some(src) = source {
                report.verdict = Verdict::Bounded;
                report.exact_sup = Some(src.sup().0);
                report.method = "right_table";
            }
        }
    }
    Ok(report)
}

fn sweep(ws: &WeightSystem, depth: usize) -> Result<(f64, (u8, Word))> {
    let n = ws.n();
    match truncated_dimension(n, depth) {
        Some(d) if d <= MAX_SWEEP_WORDS => {}
        _ => return Err(Error::Size(format!("sweeping n = {n} to depth {depth} is too large"))),
    }
    let mut best = (f64::NEG_INFINITY, (1u8, Word::empty()));
    for k in 0..=depth {
        for_each_word_of_length(n, k, |w| {
            for i in 1..=n as u8 {
                let r = commutant_ratio(ws, i, w);
                if r > best.0 {
                    best = (r, (i, Word::from_raw(w.to_vec())));
                }
            }
        });
    }
    Ok(best)
}

/// A deterministic machine whose state after reading the base word `w`
/// determines every `λ_{j,w}`.
pub(crate) struct StateMachine {
    n: usize,
    start: usize,
    /// `next[s * n + j - 1]`: state of `jw` from the state of `w`.
    next: Vec<usize>,
    /// `weight[s * n + j - 1] = λ_{j,w}`.
    weight: Vec<f64>,
}

impl StateMachine {
    pub(crate) fn of(ws: &WeightSystem) -> Option<Self> {
        let n = ws.n();
        match ws.family() {
            Family::Constant { .. } | Family::Scaled { .. } => Some(StateMachine {
                n,
                start: 0,
                next: vec![0; n],
                weight: (1..=n as u8).map(|j| ws.weight(j, &[])).collect(),
            }),
            Family::Periodic { period, .. } => {
                let basis = BasisEnumeration::new(n, period - 1).ok()?;
                let classes = basis.dimension();
                let mut next = Vec::with_capacity(classes * n);
                let mut weight = Vec::with_capacity(classes * n);
                for s in 0..classes {
                    let u = basis.letters_at(s);
                    for j in 1..=n as u8 {
                        weight.push(ws.weight(j, &u));
                        next.push(if u.len() + 1 < *period {
                            basis.prepend_index(j, s).expect("within period")
                        } else {
                            0
                        });
                    }
                }
                Some(StateMachine { n, start: 0, next, weight })
            }
            Family::TwoLetterM { .. } => {
                // states: e, 1^k (k >= 1), 1^k 2, anything else
                let reps: [&[u8]; 4] = [&[], &[1], &[2], &[2, 1]];
                let next = vec![1, 2, 1, 3, 2, 3, 3, 3];
                let weight = reps.iter().flat_map(|u| [ws.weight(1, u), ws.weight(2, u)]).collect();
                Some(StateMachine { n, start: 0, next, weight })
            }
            _ => None,
        }
    }
}

enum PairAnalysis {
    TooLarge,
    Bounded(f64),
    Growth(GrowthCertificate),
    /// A growing cycle was found but its certificate did not check out.
    Unverified,
}

struct PairGraph {
    n: usize,
    /// `(numerator state, denominator state)` per node.
    nodes: Vec<(usize, usize)>,
    /// `target[v * n + j - 1]`.
    target: Vec<usize>,
    /// Log of the ratio factor on that edge.
    log_factor: Vec<f64>,
    /// Start node for each letter `i` (ratio `W(i, ·) / W(e, ·)`).
    starts: Vec<usize>,
}

impl PairGraph {
    fn build(m: &StateMachine) -> Option<PairGraph> {
        let n = m.n;
        let mut index = std::collections::HashMap::new();
        let mut nodes = Vec::new();
        let mut queue = VecDeque::new();
        let mut starts = Vec::with_capacity(n);
        let mut intern = |pair: (usize, usize), nodes: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| {
            *index.entry(pair).or_insert_with(|| {
                nodes.push(pair);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            })
        };
        for j in 0..n {
            let s = intern((m.next[m.start * n + j], m.start), &mut nodes, &mut queue);
            starts.push(s);
        }
        let mut target = Vec::new();
        let mut log_factor = Vec::new();
        while let Some(v) = queue.pop_front() {
            if nodes.len() > MAX_PAIR_NODES {
                return None;
            }
            let (a, b) = nodes[v];
            target.resize(nodes.len().max(v + 1) * n, usize::MAX);
            log_factor.resize(target.len(), 0.0);
            for j in 0..n {
                let t = intern((m.next[a * n + j], m.next[b * n + j]), &mut nodes, &mut queue);
                target[v * n + j] = t;
                log_factor[v * n + j] = m.weight[a * n + j].ln() - m.weight[b * n + j].ln();
            }
        }
        if nodes.len() > MAX_PAIR_NODES {
            return None;
        }
        target.resize(nodes.len() * n, usize::MAX);
        log_factor.resize(nodes.len() * n, 0.0);
        Some(PairGraph {
            n,
            nodes,
            target,
            log_factor,
            starts,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

fn analyse(ws: &WeightSystem, m: &StateMachine) -> PairAnalysis {
    let Some(g) = PairGraph::build(m) else {
        return PairAnalysis::TooLarge;
    };
    let (mean, cycle_start, cycle_letters) = max_cycle_mean(&g);
    if mean > GROWTH_EPS {
        return match certificate(ws, &g, cycle_start, &cycle_letters) {
            Some(c) => PairAnalysis::Growth(c),
            None => PairAnalysis::Unverified,
        };
    }
    PairAnalysis::Bounded(longest_path_sup(&g))
}

/// Karp's maximum cycle mean. Returns the mean, a node on a maximising
/// cycle, and the letters (in application order) that traverse it.
fn max_cycle_mean(g: &PairGraph) -> (f64, usize, Vec<u8>) {
    let v_count = g.len();
    let n = g.n;
    let neg = f64::NEG_INFINITY;
    let mut d = vec![vec![neg; v_count]; v_count + 1];
    let mut pred = vec![vec![usize::MAX; v_count]; v_count + 1];
    d[0].iter_mut().for_each(|x| *x = 0.0);
    for k in 1..=v_count {
        let (prev, cur) = d.split_at_mut(k);
        let (prev, cur) = (&prev[k - 1], &mut cur[0]);
        for u in 0..v_count {
            if prev[u] == neg {
                continue;
            }
            for j in 0..n {
                let e = u * n + j;
                let t = g.target[e];
                let cand = prev[u] + g.log_factor[e];
                if cand > cur[t] {
                    cur[t] = cand;
                    pred[k][t] = e;
                }
            }
        }
    }
    let mut best = (neg, 0usize);
    for v in 0..v_count {
        if d[v_count][v] == neg {
            continue;
        }
        let mut worst = f64::INFINITY;
        for k in 0..v_count {
            if d[k][v] > neg {
                worst = worst.min((d[v_count][v] - d[k][v]) / (v_count - k) as f64);
            }
        }
        if worst > best.0 {
            best = (worst, v);
        }
    }
    // walk back from the maximiser; the walk contains a critical cycle
    let mut walk_nodes = vec![best.1];
    let mut walk_edges = Vec::with_capacity(v_count);
    let mut v = best.1;
    for k in (1..=v_count).rev() {
        let e = pred[k][v];
        walk_edges.push(e);
        v = e / n;
        walk_nodes.push(v);
    }
    walk_nodes.reverse();
    walk_edges.reverse();
    // walk_edges[p] goes from walk_nodes[p] to walk_nodes[p + 1]
    let mut prefix = vec![0.0; walk_edges.len() + 1];
    for (p, &e) in walk_edges.iter().enumerate() {
        prefix[p + 1] = prefix[p] + g.log_factor[e];
    }
    let mut cyc = (neg, 0usize, 0usize);
    let mut last_seen = vec![usize::MAX; v_count];
    for (q, &node) in walk_nodes.iter().enumerate() {
        let p = last_seen[node];
        if p != usize::MAX {
            let mean = (prefix[q] - prefix[p]) / (q - p) as f64;
            if mean > cyc.0 {
                cyc = (mean, p, q);
            }
        }
        last_seen[node] = q;
    }
    let (mean, p, q) = cyc;
    let letters = walk_edges[p..q].iter().map(|e| (e % n) as u8 + 1).collect();
    let _ = mean;
    (best.0, walk_nodes[p], letters)
}

/// Shortest letter sequence from a start node to `goal`, with its letter `i`.
fn path_to(g: &PairGraph, goal: usize) -> Option<(u8, Vec<u8>)> {
    let n = g.n;
    let mut parent: Vec<Option<(usize, u8)>> = vec![None; g.len()];
    let mut origin = vec![0u8; g.len()];
    let mut seen = vec![false; g.len()];
    let mut queue = VecDeque::new();
    for (i, &s) in g.starts.iter().enumerate() {
        if !seen[s] {
            seen[s] = true;
            origin[s] = i as u8 + 1;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == goal {
            let mut letters = Vec::new();
            let mut cur = v;
            while let Some((p, j)) = parent[cur] {
                letters.push(j);
                cur = p;
            }
            letters.reverse();
            return Some((origin[v], letters));
        }
        for j in 0..n {
            let t = g.target[v * n + j];
            if !seen[t] {
                seen[t] = true;
                origin[t] = origin[v];
                parent[t] = Some((v, j as u8 + 1));
                queue.push_back(t);
            }
        }
    }
    None
}

fn certificate(ws: &WeightSystem, g: &PairGraph, node: usize, cycle_apps: &[u8]) -> Option<GrowthCertificate> {
    let (letter, prefix_apps) = path_to(g, node)?;
    // words are written with the first applied letter rightmost
    let prefix = Word::from_raw(prefix_apps.iter().rev().copied().collect());
    let cycle = Word::from_raw(cycle_apps.iter().rev().copied().collect());
    let mut cert = GrowthCertificate {
        letter,
        prefix,
        cycle,
        growth_per_cycle: 0.0,
        samples: Vec::with_capacity(CERT_SAMPLES),
    };
    for m in 1..=CERT_SAMPLES {
        let w = cert.word(m);
        cert.samples.push((m, commutant_ratio(ws, letter, w.letters())));
    }
    let growth = cert.samples[1].1 / cert.samples[0].1;
    let geometric = cert
        .samples
        .windows(2)
        .all(|p| ((p[1].1 / p[0].1) / growth - 1.0).abs() < 1e-9);
    if !(growth > 1.0 && geometric) {
        return None;
    }
    cert.growth_per_cycle = growth;
    Some(cert)
}

/// Largest product of edge factors over walks from a start node, for a
/// graph without growing cycles.
fn longest_path_sup(g: &PairGraph) -> f64 {
    let n = g.n;
    let mut best = vec![0.0f64; g.len()];
    for &s in &g.starts {
        best[s] = 1.0;
    }
    for _ in 0..=g.len() {
        let mut changed = false;
        for v in 0..g.len() {
            if best[v] == 0.0 {
                continue;
            }
            for j in 0..n {
                let e = v * n + j;
                let cand = best[v] * g.log_factor[e].exp();
                let t = g.target[e];
                if cand > best[t] * (1.0 + 1e-14) {
                    best[t] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    best.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_subclass_is_bounded_by_two() {
        let p = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let r = commutant_sup(&p, 10).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.verdict, Verdict::Bounded);
        assert_eq!(r.exact_sup, Some(2.0));
    }

    #[test]
    fn two_letter_m_above_one_diverges() {
        let ws = WeightSystem::two_letter_m(4.0, 1.0).unwrap();
        let r = commutant_sup(&ws, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Diverging);
        assert!((r.value - 1024.0).abs() < 1e-9);
        let cert = r.certificate.unwrap();
        let w3 = cert.word(3);
        assert!((commutant_ratio(&ws, cert.letter, w3.letters()) / cert.samples[2].1 - 1.0).abs() < 1e-12);
        assert!((cert.growth_per_cycle.powf(1.0 / cert.cycle.len() as f64) - 2.0).abs() < 1e-12);
        for k in 0..=10 {
            let ones = Word::repeat_letter(1, k);
            let r = commutant_ratio(&ws, 2, ones.letters());
            assert!((r / 2f64.powi(k as i32) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_letter_m_below_one_is_bounded() {
        let ws = WeightSystem::two_letter_m(0.81, 0.9).unwrap();
        let r = commutant_sup(&ws, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.exact_sup.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_families_are_bounded_by_one() {
        let ws = WeightSystem::scaled(vec![0.3, 7.0, 2.0]).unwrap();
        let r = commutant_sup(&ws, 4).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn periodic_with_growing_cycle() {
        // eb > ad: the ratio along (21)^k from ξ_2 grows like (eb/ad)^k
        let ws = WeightSystem::periodic2(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let r = commutant_sup(&ws, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Diverging);
        let cert = r.certificate.unwrap();
        assert!(cert.growth_per_cycle > 1.0);
        for k in 1..6 {
            let wk = Word::parse("21", 2).unwrap().pow(k);
            let ratio = commutant_ratio(&ws, 2, wk.letters());
            assert!((ratio / 2f64.powi(k as i32) - 1.0).abs() < 1e-12);
        }
        let ws = WeightSystem::periodic2(3.0, 3.0, 5.0, 5.0, 5.0, 5.0).unwrap();
        let r = commutant_sup(&ws, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Bounded);
        assert!(r.exact_sup.unwrap() >= r.value - 1e-12);
        assert!(r.exact_sup.unwrap() <= 5.0 / 3.0 + 1e-12);
    }

    #[test]
    fn finite_perturbation_exact_sup_covers_cutoff() {
        let ws = WeightSystem::finite_perturbation(
            3,
            [((1, Word::parse("212", 2).unwrap()), 9.0)],
            vec![1.0, 1.0],
        )
        .unwrap();
        let shallow = commutant_sup(&ws, 1).unwrap();
        let deep = commutant_sup(&ws, 6).unwrap();
        assert_eq!(shallow.verdict, Verdict::Bounded);
        assert_eq!(shallow.exact_sup, deep.exact_sup);
        assert!((deep.value - deep.exact_sup.unwrap()).abs() < 1e-12);
    }
}
