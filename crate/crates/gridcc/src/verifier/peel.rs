//! Unique-color peeling: the complete procedure behind both violator
//! search and treedepth certification.
//!
//! Each round removes every vertex whose color occurs exactly once in the
//! current component, then recurses into the resulting components. A
//! nonempty component with no unique color is exactly a violator, and no
//! vertex of a violator is ever removed (such a vertex would be unique in
//! the enclosing component, hence unique in the violator itself), so the
//! procedure is complete regardless of removal order.

use super::{ColoredRegion, EliminationForest, ForestNode, VerifierError, ViolatorReport};
use crate::colorings::ColorId;
use crate::grid::{Coord, VertexSet};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone)]
pub enum PeelResult {
    Forest(EliminationForest),
    Violator(ViolatorReport),
}

/// Peels a connected nonempty set. Returns the elimination forest whose
/// levels are the removal rounds, or the first stuck component as a
/// violator report (its `p` is set to its own color count; callers verifying
/// against a target p override it).
pub fn peel_unique(s: &VertexSet, region: &ColoredRegion) -> Result<PeelResult, VerifierError> {
    if s.is_empty() {
        return Err(VerifierError::EmptySet);
    }
    debug_assert_eq!(s.connected_components().len(), 1, "peel_unique requires a connected set");
    Ok(peel_cells(s.iter().collect(), region))
}

/// Peeling on a raw connected coordinate list; the allocation-light path
/// used by the subset search.
pub(crate) fn peel_cells(cells: Vec<Coord>, region: &ColoredRegion) -> PeelResult {
    let mut nodes = Vec::with_capacity(cells.len());
    let mut depth = 0;
    match peel_component(cells, region, None, 0, &mut nodes, &mut depth) {
        Some(violator) => PeelResult::Violator(violator),
        None => PeelResult::Forest(EliminationForest { nodes, depth }),
    }
}

fn peel_component(
    cells: Vec<Coord>,
    region: &ColoredRegion,
    parent: Option<usize>,
    level: u32,
    nodes: &mut Vec<ForestNode>,
    depth: &mut u32,
) -> Option<ViolatorReport> {
    let mut counts: HashMap<ColorId, u32> = HashMap::new();
    for &c in &cells {
        *counts.entry(region.color_at(c)).or_insert(0) += 1;
    }
    let unique: Vec<Coord> = cells
        .iter()
        .copied()
        .filter(|&c| counts[&region.color_at(c)] == 1)
        .collect();
    if unique.is_empty() {
        let p = counts.len() as u32;
        return Some(ViolatorReport::from_cells(&cells, region, p));
    }
    *depth = (*depth).max(level + 1);
    let anchor = nodes.len();
    for &c in &unique {
        nodes.push(ForestNode { coord: c, parent, level });
    }
    let removed: BTreeSet<Coord> = unique.into_iter().collect();
    let rest: BTreeSet<Coord> = cells.into_iter().filter(|c| !removed.contains(c)).collect();
    for comp in components_of(&rest) {
        if let Some(v) = peel_component(comp, region, Some(anchor), level + 1, nodes, depth) {
            return Some(v);
        }
    }
    None
}

/// Connected components of a coordinate set, each returned in row-major
/// order, components ordered by smallest member.
pub(crate) fn components_of(cells: &BTreeSet<Coord>) -> Vec<Vec<Coord>> {
    let mut remaining = cells.clone();
    let mut out = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        remaining.remove(&start);
        while let Some(c) = stack.pop() {
            comp.insert(c);
            for n in c.neighbors() {
                if remaining.remove(&n) {
                    stack.push(n);
                }
            }
        }
        out.push(comp.into_iter().collect());
    }
    out
}

/// Runs peeling on every component of the union of the classes of `q`.
/// Succeeds with one forest per component (depth at most |q|) or fails
/// with the violator encountered.
pub fn treedepth_certificate(
    q: &[ColorId],
    region: &ColoredRegion,
) -> Result<Vec<EliminationForest>, ViolatorReport> {
    assert!(!q.is_empty(), "treedepth_certificate requires at least one color");
    let window = region.window();
    let union: BTreeSet<Coord> = q
        .iter()
        .flat_map(|&id| region.class_cells(id).iter().map(|&idx| window.coord_at(idx)))
        .collect();
    let mut forests = Vec::new();
    for comp in components_of(&union) {
        match peel_cells(comp, region) {
            PeelResult::Forest(f) => forests.push(f),
            PeelResult::Violator(v) => return Err(v),
        }
    }
    Ok(forests)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::{Family, Params};
    use crate::grid::Window;
    use crate::verifier::is_violator;

    #[test]
    fn mu_path_violator_survives_peeling_intact() {
        let params = Params::new(8).unwrap();
        let region = ColoredRegion::of_family(Family::Mu, &params, Window::new(0, 0, 3, 65));
        let path = VertexSet::from_coords(region.window(), (0..=64).map(|x| Coord::new(x, 1))).unwrap();
        match peel_unique(&path, &region).unwrap() {
            PeelResult::Violator(v) => {
                // no vertex is unique at round 0, so the report is the full path
                assert_eq!(v.vertices.len(), 65);
                assert_eq!(v.vertices, path.iter().collect::<Vec<_>>());
                let s = VertexSet::from_coords(region.window(), v.vertices.iter().copied()).unwrap();
                assert!(is_violator(&s, &region, 8));
            }
            PeelResult::Forest(_) => panic!("expected a violator"),
        }
    }

    #[test]
    fn rainbow_set_peels_in_one_round() {
        // all 16 colors distinct
        let window = Window::square(4);
        let region = ColoredRegion::from_fn(window, |c| c.x * 4 + c.y);
        let s = VertexSet::from_coords(window, window.iter()).unwrap();
        match peel_unique(&s, &region).unwrap() {
            PeelResult::Forest(f) => {
                assert_eq!(f.depth, 1);
                assert_eq!(f.nodes.len(), 16);
                assert!(f.nodes.iter().all(|n| n.level == 0 && n.parent.is_none()));
            }
            PeelResult::Violator(_) => panic!("rainbow sets have no violator"),
        }
    }

    #[test]
    fn small_lambda_window_peels_within_color_budget() {
        let params = Params::new(2).unwrap();
        let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(2));
        let s = VertexSet::from_coords(region.window(), region.window().iter()).unwrap();
        match peel_unique(&s, &region).unwrap() {
            PeelResult::Forest(f) => assert!(f.depth <= 4),
            PeelResult::Violator(_) => panic!("lambda is proper"),
        }
    }

    #[test]
    fn peel_depth_bounded_by_color_count() {
        let params = Params::new(2).unwrap();
        let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(40));
        for seed in 0..50 {
            let s = crate::grid::random_connected_set(seed, region.window(), 30).unwrap();
            let colors: std::collections::HashSet<_> = s.iter().map(|c| region.color_at(c)).collect();
            match peel_unique(&s, &region).unwrap() {
                PeelResult::Forest(f) => {
                    assert!(f.depth as usize <= colors.len());
                    assert_eq!(f.nodes.len(), s.len());
                }
                PeelResult::Violator(v) => panic!("unexpected violator {v:?}"),
            }
        }
    }

    #[test]
    fn peel_rejects_empty_input() {
        let region = ColoredRegion::from_fn(Window::square(2), |_| 0);
        let s = VertexSet::new(region.window());
        assert!(matches!(peel_unique(&s, &region), Err(VerifierError::EmptySet)));
    }

    #[test]
    fn singleton_color_subsets_of_lambda_are_isolated() {
        let params = Params::new(2).unwrap();
        let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(30));
        for &id in region.palette() {
            let forests = treedepth_certificate(&[id], &region).unwrap();
            for f in forests {
                assert_eq!(f.depth, 1);
                assert_eq!(f.nodes.len(), 1);
            }
        }
    }
}
