//! Violator detection and certification.
//!
//! A violator is a connected subgraph with at most p colors and no
//! uniquely colored vertex; a coloring is p-centered iff none exists.
//! This module materializes colorings over finite regions, searches for
//! violators (exhaustively by color subset, or randomized), produces
//! elimination-forest certificates, and runs the structural checks that
//! back the construction.

mod checks;
mod oracle;
mod peel;
mod random;
mod search;

pub use checks::{
    check_lemma_existence, check_lemma_small, check_obs_block, check_obs_bridge, check_zigzag_claim,
    random_monotone_path, random_simple_path, set_has_unique_color, CheckReport, LemmaSmallMode,
};
pub use oracle::oracle_enumerate_connected;
pub use peel::{peel_unique, treedepth_certificate, PeelResult};
pub use random::find_violator_random;
pub use search::{find_violator_exhaustive, search, SearchOptions, SearchOutcome};

use crate::colorings::{ColorId, Family, Params};
use crate::grid::{Coord, VertexSet, Window};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("input is not a path: {0}")]
    NotAPath(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("region area {0} exceeds the enumeration cap of {1}")]
    RegionTooLarge(usize, usize),
    #[error(transparent)]
    Coloring(#[from] crate::colorings::ColoringError),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// A coloring materialized over a finite window, with per-color classes.
#[derive(Debug, Clone)]
pub struct ColoredRegion {
    window: Window,
    color_of: Vec<ColorId>,
    palette: Vec<ColorId>,
    classes: HashMap<ColorId, Vec<usize>>,
}

impl ColoredRegion {
    pub fn from_fn(window: Window, color: impl Fn(Coord) -> ColorId) -> Self {
        let color_of: Vec<ColorId> = window.iter().map(color).collect();
        let mut classes: HashMap<ColorId, Vec<usize>> = HashMap::new();
        for (idx, &id) in color_of.iter().enumerate() {
            classes.entry(id).or_default().push(idx);
        }
        let mut palette: Vec<ColorId> = classes.keys().copied().collect();
        palette.sort_unstable();
        ColoredRegion { window, color_of, palette, classes }
    }

    /// Materializes one of the built-in coloring families.
    pub fn of_family(family: Family, params: &Params, window: Window) -> Self {
        Self::from_fn(window, |c| family.color_id_at(c, params))
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Distinct colors present, sorted by id.
    pub fn palette(&self) -> &[ColorId] {
        &self.palette
    }

    pub fn color_at(&self, c: Coord) -> ColorId {
        let idx = self.window.index_of(c).expect("coordinate outside region");
        self.color_of[idx]
    }

    pub fn color_at_index(&self, idx: usize) -> ColorId {
        self.color_of[idx]
    }

    /// Row-major cell indices of one color class.
    pub fn class_cells(&self, id: ColorId) -> &[usize] {
        self.classes.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// A certified counterexample: connected, at most p colors, and every
/// color occurring at least twice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolatorReport {
    /// Member vertices in row-major order.
    pub vertices: Vec<Coord>,
    /// Distinct colors, sorted by id.
    pub colors: Vec<ColorId>,
    pub p: u32,
}

impl ViolatorReport {
    pub(crate) fn from_cells(cells: &[Coord], region: &ColoredRegion, p: u32) -> Self {
        let mut vertices = cells.to_vec();
        vertices.sort_unstable();
        let mut colors: Vec<ColorId> = vertices.iter().map(|&c| region.color_at(c)).collect();
        colors.sort_unstable();
        colors.dedup();
        ViolatorReport { vertices, colors, p }
    }

    pub fn with_p(mut self, p: u32) -> Self {
        self.p = p;
        self
    }
}

/// A node of an elimination forest; `level` is the peeling round in which
/// the vertex was removed, `parent` indexes into the forest's node list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestNode {
    pub coord: Coord,
    pub parent: Option<usize>,
    pub level: u32,
}

/// The treedepth certificate produced by unique-color peeling: its depth
/// (number of rounds on the deepest branch) never exceeds the number of
/// distinct colors in the peeled set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationForest {
    pub nodes: Vec<ForestNode>,
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerificationMode {
    Exhaustive,
    Partial,
    Random,
}

impl std::fmt::Display for VerificationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerificationMode::Exhaustive => "exhaustive",
            VerificationMode::Partial => "partial",
            VerificationMode::Random => "random",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerificationMode,
    /// The requested p.
    pub p: u32,
    /// The effective power-of-two p' actually colored with.
    pub p_eff: u32,
    pub region: Window,
    pub subsets_checked: u64,
    pub max_subset_size: u32,
    pub violator: Option<ViolatorReport>,
    pub wall_time_secs: f64,
}

/// True iff `s` is connected, uses at most `p` colors, and no color occurs
/// exactly once among its vertices. Implements the violator definition
/// directly; used to re-check every report the search engines produce.
pub fn is_violator(s: &VertexSet, region: &ColoredRegion, p: u32) -> bool {
    if s.is_empty() || s.connected_components().len() != 1 {
        return false;
    }
    let mut counts: HashMap<ColorId, u32> = HashMap::new();
    for c in s.iter() {
        *counts.entry(region.color_at(c)).or_insert(0) += 1;
    }
    counts.len() as u32 <= p && counts.values().all(|&n| n >= 2)
}

/// Certifies that λ (via the general-p wrapper) is p-centered over the
/// smallest region that, by periodicity and the span lemma, contains a
/// representative of every violator class: `[0, T + 6p' + 8)²`.
///
/// `cap` limits the color-subset size searched; the run is exhaustive for
/// the requested p only when the cap reaches p. A `None` cap defaults to
/// `min(p, 2)` — full certification beyond 2-color subsets is not desk
/// scale for p' ≥ 4.
pub fn verify_lambda(
    p: u32,
    budget: Option<Duration>,
    cap: Option<u32>,
) -> Result<VerificationReport, VerifierError> {
    let start = Instant::now();
    let params = Params::new(p)?;
    crate::colorings::validate_periods(&params)?;
    let side = params.general_period() + params.window_bound;
    let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(side));
    let max_subset_size = cap.unwrap_or_else(|| p.min(2)).clamp(1, p);
    let deadline = budget.map(|b| start + b);
    let outcome = search(
        &region,
        p,
        &SearchOptions {
            max_subset_size,
            cooccur_window: params.window_bound,
            deadline,
            parallel: true,
        },
    )?;
    let mode = if outcome.completed && max_subset_size == p {
        VerificationMode::Exhaustive
    } else {
        VerificationMode::Partial
    };
    Ok(VerificationReport {
        mode,
        p,
        p_eff: params.p_eff,
        region: region.window(),
        subsets_checked: outcome.subsets_checked,
        max_subset_size,
        violator: outcome.violator,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Coord;

    fn mu_path_region() -> (ColoredRegion, Params) {
        let params = Params::new(8).unwrap();
        let region =
            ColoredRegion::of_family(Family::Mu, &params, Window::new(0, 0, 3, 65));
        (region, params)
    }

    /// The 65-vertex path {(x,1) : x in [0,64]} under μ at p=8.
    pub(crate) fn mu_path_set(region: &ColoredRegion) -> VertexSet {
        VertexSet::from_coords(region.window(), (0..=64).map(|x| Coord::new(x, 1))).unwrap()
    }

    #[test]
    fn mu_path_is_a_violator_at_p8() {
        let (region, _) = mu_path_region();
        let s = mu_path_set(&region);
        assert!(is_violator(&s, &region, 8));
    }

    #[test]
    fn singleton_is_never_a_violator() {
        let (region, _) = mu_path_region();
        let s = VertexSet::from_coords(region.window(), [Coord::new(0, 0)]).unwrap();
        assert!(!is_violator(&s, &region, 8));
    }

    #[test]
    fn theta_ten_vertex_set_is_a_violator_at_p5() {
        let params = Params::new(5).unwrap();
        let region = ColoredRegion::of_family(Family::Theta, &params, Window::square(8));
        let cells = [
            (0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (3, 2),
        ];
        let s = VertexSet::from_coords(
            region.window(),
            cells.iter().map(|&(x, y)| Coord::new(x, y)),
        )
        .unwrap();
        assert!(is_violator(&s, &region, 5));
    }

    #[test]
    fn verify_lambda_p1_is_exhaustive_and_clean() {
        let report = verify_lambda(1, None, None).unwrap();
        assert_eq!(report.mode, VerificationMode::Exhaustive);
        assert!(report.violator.is_none());
        assert_eq!(report.max_subset_size, 1);
    }

    #[test]
    fn verification_report_json_roundtrip() {
        let report = verify_lambda(1, None, None).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
