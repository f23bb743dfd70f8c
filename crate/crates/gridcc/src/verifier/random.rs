//! Randomized violator search for p beyond exhaustive reach.
//!
//! Two sampling strategies run interleaved:
//!   (a) grow a random connected set and test the violator definition on
//!       it directly;
//!   (b) pick a random span-bound window, sample up to p colors from
//!       those occurring at least twice inside it, and peel the union of
//!       their classes restricted to the window.
//! Both are deterministic from the seed.

use super::peel::{components_of, peel_cells, PeelResult};
use super::{is_violator, ColoredRegion, ViolatorReport};
use crate::grid::{grow_connected, Coord, VertexSet, Window};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Searches `region` for a violator at the given p. `span_window` is the
/// side of the sampling window; use the coloring's violator span bound
/// (6p'+8 for λ).
pub fn find_violator_random(
    region: &ColoredRegion,
    p: u32,
    trials: u64,
    seed: u64,
    span_window: u32,
) -> Option<ViolatorReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let window = random_subwindow(&mut rng, region.window(), span_window);
        let found = if trial % 2 == 0 {
            trial_grown_set(&mut rng, region, window, p)
        } else {
            trial_color_subset(&mut rng, region, window, p)
        };
        if let Some(v) = found {
            let s = VertexSet::from_coords(region.window(), v.vertices.iter().copied()).unwrap();
            assert!(is_violator(&s, region, p), "random search produced a bad report");
            return Some(v.with_p(p));
        }
    }
    None
}

fn random_subwindow(rng: &mut ChaCha8Rng, outer: Window, side: u32) -> Window {
    let w = side.min(outer.width);
    let h = side.min(outer.height);
    let x0 = outer.x0 + rng.gen_range(0..=outer.height - h);
    let y0 = outer.y0 + rng.gen_range(0..=outer.width - w);
    Window::new(x0, y0, w, h)
}

fn trial_grown_set(
    rng: &mut ChaCha8Rng,
    region: &ColoredRegion,
    window: Window,
    p: u32,
) -> Option<ViolatorReport> {
    let cap = (4 * window.width.max(window.height) as usize).min(window.area()).max(2);
    let target = rng.gen_range(2..=cap);
    let s = grow_connected(rng, window, |s| s.len() >= target).ok()?;
    // re-anchor into the region's window before testing
    let s = VertexSet::from_coords(region.window(), s.iter()).ok()?;
    if is_violator(&s, region, p) {
        let cells: Vec<Coord> = s.iter().collect();
        Some(ViolatorReport::from_cells(&cells, region, p))
    } else {
        None
    }
}

fn trial_color_subset(
    rng: &mut ChaCha8Rng,
    region: &ColoredRegion,
    window: Window,
    p: u32,
) -> Option<ViolatorReport> {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for c in window.iter() {
        *counts.entry(region.color_at(c)).or_insert(0) += 1;
    }
    // a violator's colors each occur at least twice in any window containing it
    let eligible: Vec<u32> = counts.iter().filter(|&(_, &n)| n >= 2).map(|(&id, _)| id).collect();
    if eligible.is_empty() {
        return None;
    }
    let k = (p as usize).min(eligible.len());
    let chosen: BTreeSet<u32> = eligible.choose_multiple(rng, k).copied().collect();
    let union: BTreeSet<Coord> =
        window.iter().filter(|&c| chosen.contains(&region.color_at(c))).collect();
    for comp in components_of(&union) {
        if comp.len() < 2 {
            continue;
        }
        if let PeelResult::Violator(v) = peel_cells(comp, region) {
            return Some(v);
        }
    }
    None
}
