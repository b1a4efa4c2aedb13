use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::modsolve::solve_mod;
use super::outcome::{SearchOutcome, Witness};
use crate::error::{Error, Result};
use crate::rational::{TorusPoint, Q};
use crate::setalg::{
    generic_blocks_with_len, pattern_positions, BlockSequence, FiniteIndexSet, Pattern, PatternKey,
};
use crate::toruspoly::StableForm;

/// Points adjoined at one pattern occurrence: window offset and the 1-based
/// block receiving it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Insertion {
    pub offset: u32,
    pub block: usize,
}

/// A distortion α_i ↦ α_i ∪ (γ_i + n) applied at occurrences of `pattern`,
/// with its effect on f(α_β) for every tracked β.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationMove {
    /// Block matched by the first slot of the pattern.
    pub first_block: usize,
    pub pattern: Pattern,
    pub insertion: Vec<Insertion>,
    pub effect: Vec<TorusPoint>,
}

impl PerturbationMove {
    /// γ_j per slot index (0-based), as window offsets.
    pub fn adjoined(&self) -> BTreeMap<usize, FiniteIndexSet> {
        let mut out: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for ins in &self.insertion {
            out.entry(ins.block - self.first_block)
                .or_default()
                .push(ins.offset);
        }
        out.into_iter()
            .map(|(j, v)| (j, FiniteIndexSet::from_unsorted(v)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct PerturbationConfig {
    /// Window length as a multiple of k; insertions go in the middle third.
    pub window_multiple: u32,
    /// Occurrence guarantees tried in turn for the generic start.
    pub generic_sizes: Vec<u32>,
    /// Most points adjoined by one move (further capped by the degree).
    pub max_insert: usize,
    /// Largest common denominator handed to the exact phase.
    pub max_modulus: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            window_multiple: 3,
            generic_sizes: vec![8, 32, 128, 512],
            max_insert: 2,
            max_modulus: 1_000_000,
        }
    }
}

/// f(W ∪ I) − f(W) for a window configuration W and adjoined points I.
/// Only subsets meeting I contribute, so when W holds everything within k of
/// I this is the change the insertion causes in any set agreeing with W there.
pub fn insertion_effect(
    f: &StableForm,
    window: &FiniteIndexSet,
    inserted: &FiniteIndexSet,
) -> TorusPoint {
    &f.evaluate(&window.union(inserted)) - &f.evaluate(window)
}

/// Drives max over tracked β of ‖f(α_β)‖ to at most ε by adjoining points at
/// pattern occurrences of generic blocks. A greedy phase applies the best
/// single move while it strictly helps; an exact phase then solves for move
/// counts that cancel the residual modulo the common denominator. Moves are
/// placed at occurrences at least one window apart, so their effects add.
pub fn perturbation_search(
    f: &StableForm,
    l: u32,
    tracked: &[FiniteIndexSet],
    eps: &Q,
    budget: u64,
    cfg: &PerturbationConfig,
) -> Result<SearchOutcome> {
    let k = f.k();
    let d = f.degree();
    if l + d + 1 > k {
        return Err(Error::Parameter(format!(
            "need l ≤ k − d − 1, got l = {l}, k = {k}, d = {d}"
        )));
    }
    if tracked.is_empty() {
        return Err(Error::Parameter("tracked must list at least one β".into()));
    }
    if let Some(b) = tracked.iter().find(|b| b.is_empty() || !b.is_syndetic(l)) {
        return Err(Error::Parameter(format!(
            "tracked β = {b:?} is not a non-empty member of S_{l}"
        )));
    }
    if cfg.window_multiple < 3 {
        return Err(Error::Parameter("window must span at least 3k".into()));
    }
    let len = tracked
        .iter()
        .filter_map(|b| b.max_elem())
        .max()
        .unwrap_or(1) as usize;
    let m = cfg.window_multiple * k;

    let mut last = None;
    for &size in &cfg.generic_sizes {
        let attempt = Attempt::run(f, l, tracked, eps, budget, cfg, len, m, size)?;
        let done = attempt.found();
        last = Some(attempt);
        if done {
            break;
        }
    }
    last.ok_or_else(|| Error::Parameter("no generic sizes configured".into()))
}

struct Attempt;

impl Attempt {
    #[allow(clippy::too_many_arguments)]
    fn run(
        f: &StableForm,
        l: u32,
        tracked: &[FiniteIndexSet],
        eps: &Q,
        budget: u64,
        cfg: &PerturbationConfig,
        len: usize,
        m: u32,
        size: u32,
    ) -> Result<SearchOutcome> {
        let k = f.k();
        let start = generic_blocks_with_len(k, l, m, size, len)?.blocks;
        let mut blocks: Vec<BTreeSet<u32>> =
            start.blocks().iter().map(|b| b.iter().collect()).collect();
        let mut cur: Vec<TorusPoint> = tracked
            .iter()
            .map(|b| start.union(b).map(|a| f.evaluate(&a)))
            .collect::<Result<_>>()?;

        let positions = pattern_positions(&start, k, m);
        let moves = enumerate_moves_from(f, tracked, &positions, m, cfg.max_insert.min(d_cap(f)));
        let mut cursor: Vec<usize> = vec![0; moves.len()];
        let mut used: BTreeSet<u64> = BTreeSet::new();
        let mut examined = 0u64;
        let mut applied = 0u64;
        let place = |key: &PatternKey, cursor: &mut usize, used: &BTreeSet<u64>| -> Option<u64> {
            let list = &positions[key];
            while *cursor < list.len() {
                let n = list[*cursor];
                let lo = n.saturating_sub(m as u64 - 1);
                if used.range(lo..n + m as u64).next().is_none() {
                    return Some(n);
                }
                *cursor += 1;
            }
            None
        };
        let apply = |mv: &Move,
                     n: u64,
                     blocks: &mut Vec<BTreeSet<u32>>,
                     cur: &mut Vec<TorusPoint>,
                     used: &mut BTreeSet<u64>| {
            for ins in &mv.insertion {
                blocks[ins.block - 1].insert((n + ins.offset as u64) as u32);
            }
            for (c, e) in cur.iter_mut().zip(&mv.effect) {
                c.add_assign_ref(e);
            }
            used.insert(n);
        };

        // Greedy phase.
        let mut value = max_norm(&cur);
        while value > *eps && applied < budget {
            let mut best: Option<(Q, usize, u64)> = None;
            for (t, mv) in moves.iter().enumerate() {
                let Some(n) = place(&mv.key, &mut cursor[t], &used) else {
                    continue;
                };
                examined += 1;
                let v = cur
                    .iter()
                    .zip(&mv.effect)
                    .map(|(c, e)| (c + e).norm())
                    .max()
                    .expect("tracked is non-empty");
                if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                    best = Some((v, t, n));
                }
            }
            match best {
                Some((v, t, n)) if v < value => {
                    apply(&moves[t], n, &mut blocks, &mut cur, &mut used);
                    applied += 1;
                    value = v;
                }
                _ => break,
            }
        }

        // Exact phase.
        let mut note = None;
        if value > *eps {
            match exact_counts(&cur, &moves, cfg.max_modulus) {
                Err(why) => note = Some(why),
                Ok(counts) => {
                    let total: u64 = counts.iter().sum();
                    if applied + total > budget {
                        note = Some(format!("exact phase needs {total} moves beyond the budget"));
                    } else {
                        'outer: for (t, &c) in counts.iter().enumerate() {
                            for _ in 0..c {
                                let Some(n) = place(&moves[t].key, &mut cursor[t], &used) else {
                                    note = Some(format!(
                                        "ran out of occurrences with {size} per pattern"
                                    ));
                                    break 'outer;
                                };
                                apply(&moves[t], n, &mut blocks, &mut cur, &mut used);
                                applied += 1;
                            }
                        }
                        value = max_norm(&cur);
                    }
                }
            }
        }

        // Independent re-evaluation of the final sequence.
        let seq = BlockSequence::new(
            blocks
                .into_iter()
                .map(FiniteIndexSet::from_unsorted)
                .collect(),
        )?;
        let direct: Vec<TorusPoint> = tracked
            .iter()
            .map(|b| seq.union(b).map(|a| f.evaluate(&a)))
            .collect::<Result<_>>()?;
        if direct != cur {
            return Err(Error::Inconsistent(
                "accumulated move effects disagree with direct evaluation".into(),
            ));
        }
        let ok = value <= *eps && seq.is_well_formed(k, l);
        if value <= *eps && !ok {
            note = Some("perturbed blocks lost well-formedness".into());
        }
        Ok(SearchOutcome {
            witness: ok.then(|| Witness::Blocks(seq)),
            value,
            sets_examined: examined,
            canonical_rank: None,
            exhaustive: false,
            exploratory: false,
            sets_screened: None,
            moves_applied: Some(applied),
            note: if ok { None } else { note },
        })
    }
}

fn d_cap(f: &StableForm) -> usize {
    f.degree() as usize
}

struct Move {
    key: PatternKey,
    insertion: Vec<Insertion>,
    effect: Vec<TorusPoint>,
}

fn max_norm(v: &[TorusPoint]) -> Q {
    v.iter()
        .map(TorusPoint::norm)
        .max()
        .expect("tracked is non-empty")
}

/// Every interior pattern (one whose non-empty slots run through the whole
/// window) paired with every way of adjoining up to `max_insert` free middle
/// offsets to its blocks. Moves with zero effect are dropped.
fn enumerate_moves_from(
    f: &StableForm,
    tracked: &[FiniteIndexSet],
    positions: &BTreeMap<PatternKey, Vec<u64>>,
    m: u32,
    max_insert: usize,
) -> Vec<Move> {
    let k = f.k();
    let mut out = Vec::new();
    for key in positions.keys() {
        let (first, slots) = key;
        let interior = slots.iter().all(|s| match (s.min_elem(), s.max_elem()) {
            (Some(lo), Some(hi)) => lo <= k && hi + k > m,
            _ => true,
        });
        if !interior {
            continue;
        }
        let taken = slots
            .iter()
            .fold(FiniteIndexSet::empty(), |a, s| a.union(s));
        let free: Vec<u32> = (k + 1..=2 * k).filter(|x| !taken.contains(*x)).collect();
        let active: Vec<usize> = (0..slots.len())
            .filter(|&j| !slots[j].is_empty())
            .map(|j| first + j)
            .collect();
        for size in 1..=max_insert.min(free.len()) {
            for offs in combinations(&free, size) {
                for assign in assignments(&active, size) {
                    let insertion: Vec<Insertion> = offs
                        .iter()
                        .zip(&assign)
                        .map(|(&offset, &block)| Insertion { offset, block })
                        .collect();
                    let effect = tracked
                        .iter()
                        .map(|beta| {
                            let w = slots
                                .iter()
                                .enumerate()
                                .filter(|(j, _)| beta.contains((first + j) as u32))
                                .fold(FiniteIndexSet::empty(), |a, (_, s)| a.union(s));
                            let ins = FiniteIndexSet::from_unsorted(
                                insertion
                                    .iter()
                                    .filter(|i| beta.contains(i.block as u32))
                                    .map(|i| i.offset),
                            );
                            insertion_effect(f, &w, &ins)
                        })
                        .collect::<Vec<_>>();
                    if effect.iter().all(TorusPoint::is_zero) {
                        continue;
                    }
                    out.push(Move {
                        key: key.clone(),
                        insertion,
                        effect,
                    });
                }
            }
        }
    }
    out
}

/// The moves available on the generic start for the given tracked sets.
pub fn enumerate_moves(
    f: &StableForm,
    l: u32,
    tracked: &[FiniteIndexSet],
    generic_size: u32,
    cfg: &PerturbationConfig,
) -> Result<Vec<PerturbationMove>> {
    let k = f.k();
    let m = cfg.window_multiple * k;
    let len = tracked
        .iter()
        .filter_map(|b| b.max_elem())
        .max()
        .unwrap_or(1) as usize;
    let start = generic_blocks_with_len(k, l, m, generic_size, len)?.blocks;
    let positions = pattern_positions(&start, k, m);
    enumerate_moves_from(f, tracked, &positions, m, cfg.max_insert.min(d_cap(f)))
        .into_iter()
        .map(|mv| {
            Ok(PerturbationMove {
                first_block: mv.key.0,
                pattern: Pattern::new(m, k, mv.key.1)?,
                insertion: mv.insertion,
                effect: mv.effect,
            })
        })
        .collect()
}

fn combinations(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in combinations(&items[i + 1..], size - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

fn assignments(active: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..size {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                active.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Non-negative move counts c_t with Σ c_t·effect_t ≡ −cur (mod 1).
fn exact_counts(
    cur: &[TorusPoint],
    moves: &[Move],
    max_modulus: u64,
) -> std::result::Result<Vec<u64>, String> {
    let mut q = num_bigint::BigInt::from(1);
    let all = cur
        .iter()
        .chain(moves.iter().flat_map(|mv| mv.effect.iter()));
    for p in all {
        for c in p.coords() {
            q = q.lcm(c.denom());
        }
    }
    let q = q
        .to_u64()
        .filter(|&q| q <= max_modulus)
        .ok_or_else(|| format!("common denominator {q} exceeds {max_modulus}"))?;
    let scaled = |x: &Q| -> u64 {
        let v = x * Q::from_integer(q.into());
        v.to_integer()
            .mod_floor(&q.into())
            .to_u64()
            .expect("reduced below q")
    };
    let rows: Vec<(usize, usize)> = (0..cur.len())
        .flat_map(|b| (0..cur[b].dim()).map(move |c| (b, c)))
        .collect();
    let a: Vec<Vec<u64>> = rows
        .iter()
        .map(|&(b, c)| {
            moves
                .iter()
                .map(|mv| scaled(&mv.effect[b].coords()[c]))
                .collect()
        })
        .collect();
    let rhs: Vec<u64> = rows
        .iter()
        .map(|&(b, c)| (q - scaled(&cur[b].coords()[c])) % q)
        .collect();
    solve_mod(&a, &rhs, q)
        .ok_or_else(|| "residual lies outside the lattice spanned by the moves".to_string())
}
