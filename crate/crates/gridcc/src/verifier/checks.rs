//! Executable forms of the structural statements behind the construction:
//! the small-violator span property of μ, the boundary observation for
//! block-crossing edges, the column-crossing property of paths, the
//! zig-zag separator claim, and the span lemma for λ.

use super::{ColoredRegion, VerifierError};
use crate::colorings::{
    lambda, partition_ab, partition_rc, BlockSide, ColorId, Family, Params, ResidueSide,
};
use crate::grid::{grow_connected, Coord, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Outcome of a structural check: number of cases exercised, and a
/// witness for the first failure if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub pass: bool,
    pub cases: u64,
    pub witness: Option<Vec<Coord>>,
    pub detail: String,
}

impl CheckReport {
    fn pass(cases: u64) -> Self {
        CheckReport { pass: true, cases, witness: None, detail: String::new() }
    }

    fn fail(cases: u64, witness: Vec<Coord>, detail: String) -> Self {
        CheckReport { pass: false, cases, witness: Some(witness), detail }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum LemmaSmallMode {
    /// Enumerate all subsets of every w×w window anchored in one μ-period.
    /// Requires w ≤ 4 (2^(w²) subsets per anchor).
    ExhaustiveWindow(u32),
    /// Random connected sets with spans at most 4p.
    Random { trials: u64, seed: u64 },
}

/// True iff some vertex of `cells` carries a color no other member has.
pub fn set_has_unique_color(region: &ColoredRegion, cells: &[Coord]) -> bool {
    let mut counts = std::collections::HashMap::new();
    for &c in cells {
        *counts.entry(region.color_at(c)).or_insert(0u32) += 1;
    }
    counts.values().any(|&n| n == 1)
}

/// Every nonempty row-and-column contiguous set spanning at most 4p rows
/// and 4p columns contains a vertex with a unique μ-color.
pub fn check_lemma_small(params: &Params, mode: LemmaSmallMode) -> Result<CheckReport, VerifierError> {
    match mode {
        LemmaSmallMode::ExhaustiveWindow(w) => {
            if w == 0 || w > 4 {
                return Err(VerifierError::Precondition(format!(
                    "exhaustive window side {w} not in [1, 4]"
                )));
            }
            Ok(lemma_small_exhaustive(params, w))
        }
        LemmaSmallMode::Random { trials, seed } => Ok(lemma_small_random(params, trials, seed)),
    }
}

fn lemma_small_exhaustive(params: &Params, w: u32) -> CheckReport {
    debug_assert!(w <= 4 * params.p_eff);
    let cells = (w * w) as usize;
    let row_mask = (1u32 << w) - 1;
    let mut cases = 0u64;
    for ax in 0..params.mu_period {
        for ay in 0..params.mu_period {
            // group the window's cells by μ color
            let window = Window::new(ax, ay, w, w);
            let mut groups: Vec<(ColorId, u32)> = Vec::with_capacity(cells);
            for (bit, c) in window.iter().enumerate() {
                let id = Family::Mu.color_id_at(c, params);
                match groups.iter_mut().find(|(g, _)| *g == id) {
                    Some((_, mask)) => *mask |= 1 << bit,
                    None => groups.push((id, 1 << bit)),
                }
            }
            for mask in 1u32..1 << cells {
                if !mask_is_contiguous(mask, w, row_mask) {
                    continue;
                }
                cases += 1;
                if !groups.iter().any(|&(_, g)| (mask & g).count_ones() == 1) {
                    let witness: Vec<Coord> =
                        (0..cells).filter(|b| mask & (1 << b) != 0).map(|b| window.coord_at(b)).collect();
                    return CheckReport::fail(
                        cases,
                        witness,
                        format!("no unique mu color in window anchored at ({ax},{ay})"),
                    );
                }
            }
        }
    }
    CheckReport::pass(cases)
}

/// Both projections of the mask over a w×w window are intervals.
fn mask_is_contiguous(mask: u32, w: u32, row_mask: u32) -> bool {
    let mut row_occ = 0u32;
    let mut col_occ = 0u32;
    for r in 0..w {
        let bits = (mask >> (r * w)) & row_mask;
        if bits != 0 {
            row_occ |= 1 << r;
        }
        col_occ |= bits;
    }
    bits_are_interval(row_occ) && bits_are_interval(col_occ)
}

fn bits_are_interval(bits: u32) -> bool {
    debug_assert!(bits != 0);
    let shifted = bits >> bits.trailing_zeros();
    shifted & (shifted + 1) == 0
}

fn lemma_small_random(params: &Params, trials: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 4 * params.p_eff;
    // one span-bound window's worth of colors, sampled at all period phases
    let region = ColoredRegion::of_family(
        Family::Mu,
        params,
        Window::square(params.mu_period + side),
    );
    for trial in 0..trials {
        let x0 = rng.gen_range(0..params.mu_period);
        let y0 = rng.gen_range(0..params.mu_period);
        let window = Window::new(x0, y0, side, side);
        let target = rng.gen_range(1..=(side * 2) as usize);
        let s = grow_connected(&mut rng, window, |s| s.len() >= target).expect("window is nonempty");
        let cells: Vec<Coord> = s.iter().collect();
        if !set_has_unique_color(&region, &cells) {
            return CheckReport::fail(trial + 1, cells, "connected set without unique mu color".into());
        }
    }
    CheckReport::pass(trials)
}

/// Every edge whose endpoints lie in different 3×3 blocks has exactly one
/// endpoint in R: adjacent cells in different blocks differ by 1 in
/// ⌊x/3⌋+⌊y/3⌋. Checked exhaustively over a window plus one row/column.
pub fn check_obs_block(window: Window) -> CheckReport {
    let mut cases = 0u64;
    for c in window.iter() {
        for n in [Coord::new(c.x + 1, c.y), Coord::new(c.x, c.y + 1)] {
            if crate::colorings::block_index(c) == crate::colorings::block_index(n) {
                continue;
            }
            cases += 1;
            let in_r = [c, n].iter().filter(|&&v| partition_rc(v) == BlockSide::R).count();
            if in_r != 1 {
                return CheckReport::fail(
                    cases,
                    vec![c, n],
                    format!("{in_r} endpoints in R on a block-crossing edge"),
                );
            }
        }
    }
    CheckReport::pass(cases)
}

fn validate_path(path: &[Coord]) -> Result<(), VerifierError> {
    if path.is_empty() {
        return Err(VerifierError::NotAPath("empty vertex list".into()));
    }
    let distinct: HashSet<&Coord> = path.iter().collect();
    if distinct.len() != path.len() {
        return Err(VerifierError::NotAPath("repeated vertex".into()));
    }
    for pair in path.windows(2) {
        if !pair[0].is_adjacent(pair[1]) {
            return Err(VerifierError::NotAPath(format!(
                "{} and {} are not adjacent",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// A path with endpoint columns y₁ < y₂ crosses every column boundary in
/// between: for each b in (y₁, y₂] some edge (a,b−1)(a,b) lies on it.
/// Checked for both axes.
pub fn check_obs_bridge(path: &[Coord]) -> Result<CheckReport, VerifierError> {
    validate_path(path)?;
    let (first, last) = (path[0], path[path.len() - 1]);
    let mut cases = 0u64;
    let (ylo, yhi) = (first.y.min(last.y), first.y.max(last.y));
    for b in ylo + 1..=yhi {
        cases += 1;
        let crossed = path
            .windows(2)
            .any(|e| e[0].x == e[1].x && e[0].y.min(e[1].y) == b - 1 && e[0].y.max(e[1].y) == b);
        if !crossed {
            return Ok(CheckReport::fail(cases, path.to_vec(), format!("no edge crosses columns {}-{}", b - 1, b)));
        }
    }
    let (xlo, xhi) = (first.x.min(last.x), first.x.max(last.x));
    for a in xlo + 1..=xhi {
        cases += 1;
        let crossed = path
            .windows(2)
            .any(|e| e[0].y == e[1].y && e[0].x.min(e[1].x) == a - 1 && e[0].x.max(e[1].x) == a);
        if !crossed {
            return Ok(CheckReport::fail(cases, path.to_vec(), format!("no edge crosses rows {}-{}", a - 1, a)));
        }
    }
    Ok(CheckReport::pass(cases))
}

/// The zig-zag separator claim: a path whose endpoint columns straddle a
/// column b divisible by 3 (with y₁+1 < b < y₂) contains a vertex of
/// C∩B with column in [b−2, b+1].
pub fn check_zigzag_claim(path: &[Coord], b: u32) -> Result<CheckReport, VerifierError> {
    validate_path(path)?;
    let (mut e1, mut e2) = (path[0], path[path.len() - 1]);
    if e1.y > e2.y {
        std::mem::swap(&mut e1, &mut e2);
    }
    if b % 3 != 0 {
        return Err(VerifierError::Precondition(format!("b = {b} is not divisible by 3")));
    }
    if !(e1.y + 1 < b && b < e2.y) {
        return Err(VerifierError::Precondition(format!(
            "endpoint columns {} and {} do not straddle b = {b}",
            e1.y, e2.y
        )));
    }
    let hit = path.iter().any(|&c| {
        partition_rc(c) == BlockSide::C
            && partition_ab(c) == ResidueSide::B
            && c.y + 2 >= b
            && c.y <= b + 1
    });
    if hit {
        Ok(CheckReport::pass(1))
    } else {
        Ok(CheckReport::fail(1, path.to_vec(), format!("no C∩B vertex with column in [{}, {}]", b - 2, b + 1)))
    }
}

/// Connected sets spanning exactly 6p+9 rows (or columns) carry at least
/// p+1 distinct λ colors. Exercises straight segments, staircases, and
/// random connected sets, at random period phases.
pub fn check_lemma_existence(params: &Params, trials: u64, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = 6 * params.p_eff + 9;
    for trial in 0..trials {
        let x0 = rng.gen_range(0..params.period);
        let y0 = rng.gen_range(0..params.period);
        let span_rows = trial % 2 == 0;
        let cells: Vec<Coord> = match (trial / 2) % 3 {
            0 => segment(x0, y0, m, span_rows),
            1 => staircase(&mut rng, x0, y0, m, span_rows),
            _ => grown_spanning(&mut rng, x0, y0, m, span_rows),
        };
        let distinct: HashSet<_> = cells.iter().map(|&c| lambda(c, params)).collect();
        if (distinct.len() as u32) < params.p_eff + 1 {
            return CheckReport::fail(
                trial + 1,
                cells,
                format!("only {} colors on a set spanning {m}", distinct.len()),
            );
        }
    }
    CheckReport::pass(trials)
}

fn segment(x0: u32, y0: u32, m: u32, span_rows: bool) -> Vec<Coord> {
    (0..m)
        .map(|i| if span_rows { Coord::new(x0 + i, y0) } else { Coord::new(x0, y0 + i) })
        .collect()
}

fn staircase(rng: &mut ChaCha8Rng, x0: u32, y0: u32, m: u32, span_rows: bool) -> Vec<Coord> {
    let mut cells = vec![Coord::new(x0, y0)];
    let (mut main, mut side) = (0u32, 0u32);
    while main + 1 < m {
        if rng.gen_bool(0.5) {
            side += 1;
        } else {
            main += 1;
        }
        let c = if span_rows {
            Coord::new(x0 + main, y0 + side)
        } else {
            Coord::new(x0 + side, y0 + main)
        };
        cells.push(c);
    }
    cells
}

fn grown_spanning(rng: &mut ChaCha8Rng, x0: u32, y0: u32, m: u32, span_rows: bool) -> Vec<Coord> {
    let window = Window::new(x0, y0, m, m);
    let s = grow_connected(rng, window, |s| {
        if s.is_empty() {
            return false;
        }
        let (rows, cols) = s.span().unwrap();
        if span_rows { rows >= m } else { cols >= m }
    })
    .expect("window is nonempty");
    s.iter().collect()
}

/// A uniformly grown self-avoiding walk inside `window`; stops early if
/// it walks itself into a corner.
pub fn random_simple_path(seed: u64, window: Window, target_len: usize) -> Vec<Coord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = window.coord_at(rng.gen_range(0..window.area()));
    let mut path = vec![start];
    let mut visited: HashSet<Coord> = path.iter().copied().collect();
    while path.len() < target_len {
        let head = *path.last().unwrap();
        let options: Vec<Coord> = head
            .neighbors()
            .filter(|n| window.contains(*n) && !visited.contains(n))
            .collect();
        if options.is_empty() {
            break;
        }
        let next = options[rng.gen_range(0..options.len())];
        visited.insert(next);
        path.push(next);
    }
    path
}

/// A random monotone staircase path between two random corners of a
/// random sub-rectangle of `window`.
pub fn random_monotone_path(seed: u64, window: Window) -> Vec<Coord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = window.x0 + rng.gen_range(0..window.height);
    let x1 = window.x0 + rng.gen_range(0..window.height);
    let y0 = window.y0 + rng.gen_range(0..window.width);
    let y1 = window.y0 + rng.gen_range(0..window.width);
    let (mut x, mut y) = (x0, y0);
    let mut path = vec![Coord::new(x, y)];
    while x != x1 || y != y1 {
        let step_x = if x == x1 {
            false
        } else if y == y1 {
            true
        } else {
            rng.gen_bool(0.5)
        };
        if step_x {
            x = if x1 > x { x + 1 } else { x - 1 };
        } else {
            y = if y1 > y { y + 1 } else { y - 1 };
        }
        path.push(Coord::new(x, y));
    }
    path
}
