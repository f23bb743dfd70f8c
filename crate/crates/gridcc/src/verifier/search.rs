//! Exhaustive violator search by color-subset elimination.
//!
//! For every subset Q of the region's palette up to a size cap, the union
//! of Q's color classes is peeled component by component; a stuck
//! component is a violator. Subsets are pruned through a co-occurrence
//! relation: a color pair enters the same Q only if both colors appear
//! within some common w×w window of the region. With w at least the
//! span bound on violators this loses nothing, and it collapses the
//! 2-subset search over a λ region to a workable size.

use super::peel::{peel_cells, PeelResult};
use super::{is_violator, ColoredRegion, VerifierError, ViolatorReport};
use crate::colorings::ColorId;
use crate::grid::VertexSet;
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_subset_size: u32,
    /// Side of the square window used for the co-occurrence pruning
    /// relation. Use at least the region's largest dimension to disable
    /// pruning entirely.
    pub cooccur_window: u32,
    pub deadline: Option<Instant>,
    pub parallel: bool,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub violator: Option<ViolatorReport>,
    pub subsets_checked: u64,
    /// False iff the deadline cut the enumeration short.
    pub completed: bool,
}

/// Standalone entry point: complete for every violator in the region when
/// `max_subset_size = p`, since the co-occurrence window is widened to the
/// whole region here. `verify_lambda` passes the tighter λ window instead.
pub fn find_violator_exhaustive(
    region: &ColoredRegion,
    p: u32,
    max_subset_size: u32,
) -> Result<Option<ViolatorReport>, VerifierError> {
    if max_subset_size < 1 || max_subset_size > p {
        return Err(VerifierError::Precondition(format!(
            "max_subset_size {max_subset_size} not in [1, p={p}]"
        )));
    }
    let opts = SearchOptions {
        max_subset_size,
        cooccur_window: region.window().width.max(region.window().height),
        deadline: None,
        parallel: false,
    };
    Ok(search(region, p, &opts)?.violator)
}

/// Sparse symmetric co-occurrence relation over the filtered palette.
struct Cooc {
    words: usize,
    bits: Vec<u64>,
}

impl Cooc {
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1u64 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1u64 << (i % 64);
    }
}

/// Two colors co-occur iff some aligned w×w window contains both, i.e.
/// they appear at Chebyshev distance < w in both axes.
fn cooccurrence(region: &ColoredRegion, filtered: &[ColorId], w: u32) -> Cooc {
    let max_id = filtered.last().copied().unwrap_or(0) as usize;
    let mut fmap = vec![usize::MAX; max_id + 1];
    for (i, &id) in filtered.iter().enumerate() {
        fmap[id as usize] = i;
    }
    let lookup = |id: ColorId| {
        let id = id as usize;
        if id <= max_id { fmap[id] } else { usize::MAX }
    };
    let n = filtered.len();
    let words = (n + 63) / 64;
    let mut cooc = Cooc { words, bits: vec![0; n * words] };
    let win = region.window();
    let (cols, rows, w) = (win.width as usize, win.height as usize, w as usize);
    for x in 0..rows {
        for y in 0..cols {
            let cu = lookup(region.color_at_index(x * cols + y));
            if cu == usize::MAX {
                continue;
            }
            for yy in y + 1..cols.min(y + w) {
                let cv = lookup(region.color_at_index(x * cols + yy));
                if cv != usize::MAX && cv != cu {
                    cooc.set(cu, cv);
                }
            }
            for xx in x + 1..rows.min(x + w) {
                for yy in y.saturating_sub(w - 1)..cols.min(y + w) {
                    let cv = lookup(region.color_at_index(xx * cols + yy));
                    if cv != usize::MAX && cv != cu {
                        cooc.set(cu, cv);
                    }
                }
            }
        }
    }
    cooc
}

enum Flow {
    Continue,
    Stop,
}

/// DFS over co-occurrence cliques rooted at `start`, in lexicographic
/// order by filtered-palette index. Visits every subset as it is formed.
fn dfs_from(
    start: usize,
    cooc: &Cooc,
    max_size: usize,
    visit: &mut impl FnMut(&[usize]) -> Flow,
) -> Flow {
    let words = cooc.words;
    let mut subset = vec![start];
    let mut cand = cooc.row(start).to_vec();
    mask_below(&mut cand, start + 1);
    if let Flow::Stop = visit(&subset) {
        return Flow::Stop;
    }
    rec(&mut subset, &cand, cooc, max_size, words, visit)
}

fn rec(
    subset: &mut Vec<usize>,
    cand: &[u64],
    cooc: &Cooc,
    max_size: usize,
    words: usize,
    visit: &mut impl FnMut(&[usize]) -> Flow,
) -> Flow {
    if subset.len() == max_size {
        return Flow::Continue;
    }
    for wi in 0..words {
        let mut word = cand[wi];
        while word != 0 {
            let j = wi * 64 + word.trailing_zeros() as usize;
            word &= word - 1;
            subset.push(j);
            if let Flow::Stop = visit(subset) {
                return Flow::Stop;
            }
            let mut next = vec![0u64; words];
            for (k, n) in next.iter_mut().enumerate() {
                *n = cand[k] & cooc.row(j)[k];
            }
            mask_below(&mut next, j + 1);
            if let Flow::Stop = rec(subset, &next, cooc, max_size, words, visit) {
                return Flow::Stop;
            }
            subset.pop();
        }
    }
    Flow::Continue
}

fn mask_below(bits: &mut [u64], from: usize) {
    for (wi, w) in bits.iter_mut().enumerate() {
        if (wi + 1) * 64 <= from {
            *w = 0;
        } else if wi * 64 < from {
            *w &= !((1u64 << (from - wi * 64)) - 1);
        }
    }
}

/// Evaluates one color subset: peels each connected component of the
/// union of the subset's classes and reports the first stuck component.
fn eval_subset(
    region: &ColoredRegion,
    filtered: &[ColorId],
    subset: &[usize],
    p: u32,
) -> Option<ViolatorReport> {
    let window = region.window();
    let union: std::collections::BTreeSet<_> = subset
        .iter()
        .flat_map(|&i| region.class_cells(filtered[i]).iter().map(|&idx| window.coord_at(idx)))
        .collect();
    for comp in super::peel::components_of(&union) {
        if comp.len() < 2 {
            continue;
        }
        if let PeelResult::Violator(v) = peel_cells(comp, region) {
            let verified = {
                let s = VertexSet::from_coords(window, v.vertices.iter().copied()).unwrap();
                is_violator(&s, region, p)
            };
            assert!(verified, "search produced a report that fails the violator definition");
            return Some(v.with_p(p));
        }
    }
    None
}

pub fn search(
    region: &ColoredRegion,
    p: u32,
    opts: &SearchOptions,
) -> Result<SearchOutcome, VerifierError> {
    // Every color of a violator occurs at least twice in it, so colors
    // with a single occurrence in the region can be dropped outright.
    let filtered: Vec<ColorId> = region
        .palette()
        .iter()
        .copied()
        .filter(|&id| region.class_cells(id).len() >= 2)
        .collect();
    if filtered.is_empty() {
        return Ok(SearchOutcome { violator: None, subsets_checked: 0, completed: true });
    }
    let cooc = cooccurrence(region, &filtered, opts.cooccur_window);
    let max_size = opts.max_subset_size as usize;
    let n = filtered.len();

    if !opts.parallel {
        let mut checked = 0u64;
        let mut found: Option<ViolatorReport> = None;
        let mut completed = true;
        'outer: for start in 0..n {
            let flow = dfs_from(start, &cooc, max_size, &mut |subset| {
                checked += 1;
                if checked % 1024 == 0 {
                    if let Some(d) = opts.deadline {
                        if Instant::now() >= d {
                            completed = false;
                            return Flow::Stop;
                        }
                    }
                }
                match eval_subset(region, &filtered, subset, p) {
                    Some(v) => {
                        found = Some(v);
                        Flow::Stop
                    }
                    None => Flow::Continue,
                }
            });
            if let Flow::Stop = flow {
                break 'outer;
            }
        }
        return Ok(SearchOutcome { violator: found, subsets_checked: checked, completed });
    }

    // Parallel over the first color of the subset. Workers abandon their
    // subtree once a smaller-indexed subtree has reported a violator; the
    // winner is the hit with the smallest start index, which matches the
    // serial enumeration order because each subtree runs serially.
    let winner_start = AtomicUsize::new(usize::MAX);
    let timed_out = AtomicBool::new(false);
    let checked = AtomicU64::new(0);
    let hits: Mutex<Vec<(usize, Vec<usize>, ViolatorReport)>> = Mutex::new(Vec::new());
    (0..n).into_par_iter().for_each(|start| {
        if winner_start.load(Ordering::Relaxed) < start || timed_out.load(Ordering::Relaxed) {
            return;
        }
        let mut local = 0u64;
        dfs_from(start, &cooc, max_size, &mut |subset| {
            local += 1;
            if local % 1024 == 0 {
                if winner_start.load(Ordering::Relaxed) < start {
                    return Flow::Stop;
                }
                if let Some(d) = opts.deadline {
                    if Instant::now() >= d {
                        timed_out.store(true, Ordering::Relaxed);
                        return Flow::Stop;
                    }
                }
            }
            match eval_subset(region, &filtered, subset, p) {
                Some(v) => {
                    winner_start.fetch_min(start, Ordering::Relaxed);
                    hits.lock().unwrap().push((start, subset.to_vec(), v));
                    Flow::Stop
                }
                None => Flow::Continue,
            }
        });
        checked.fetch_add(local, Ordering::Relaxed);
    });

    let hits = hits.into_inner().unwrap();
    if let Some((start, subset, violator)) = hits.into_iter().min_by_key(|(s, _, _)| *s) {
        // Recount deterministically: number of subsets a serial run would
        // have visited up to and including the winning one.
        let mut count = 0u64;
        'recount: for s in 0..=start {
            let flow = dfs_from(s, &cooc, max_size, &mut |cur| {
                count += 1;
                if s == start && cur == subset.as_slice() {
                    Flow::Stop
                } else {
                    Flow::Continue
                }
            });
            if let Flow::Stop = flow {
                break 'recount;
            }
        }
        return Ok(SearchOutcome { violator: Some(violator), subsets_checked: count, completed: true });
    }
    Ok(SearchOutcome {
        violator: None,
        subsets_checked: checked.load(Ordering::Relaxed),
        completed: !timed_out.load(Ordering::Relaxed),
    })
}
