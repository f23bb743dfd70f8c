//! Independent ground truth for tiny regions: enumerate every connected
//! induced subgraph and test the violator definition on each, with no
//! peeling, pruning, or color-subset logic shared with the search engines.

use super::{ColoredRegion, VerifierError, ViolatorReport};
use crate::colorings::ColorId;
use std::collections::HashMap;

const MAX_ORACLE_AREA: usize = 25;

/// Returns the first violator in enumeration order (if any) and the total
/// number of connected sets visited. Errors if the region has more than
/// 25 cells.
pub fn oracle_enumerate_connected(
    region: &ColoredRegion,
    p: u32,
) -> Result<(Option<ViolatorReport>, u64), VerifierError> {
    let window = region.window();
    let n = window.area();
    if n > MAX_ORACLE_AREA {
        return Err(VerifierError::RegionTooLarge(n, MAX_ORACLE_AREA));
    }
    let mut adj = vec![0u32; n];
    for (idx, c) in window.iter().enumerate() {
        for nb in c.neighbors() {
            if let Some(j) = window.index_of(nb) {
                adj[idx] |= 1 << j;
            }
        }
    }
    let mut enumerated = 0u64;
    let mut found: Option<u32> = None;
    // enumerate sets grouped by their minimum vertex
    for start in 0..n {
        let forbidden = (1u32 << start) - 1;
        let bit = 1u32 << start;
        extend(bit, adj[start] & !forbidden, forbidden, &adj, region, p, &mut enumerated, &mut found);
        if found.is_some() {
            break;
        }
    }
    let violator = found.map(|mask| {
        let cells: Vec<_> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| window.coord_at(i)).collect();
        ViolatorReport::from_cells(&cells, region, p)
    });
    Ok((violator, enumerated))
}

/// Recursively grows `cur` by candidates in `cand`; siblings already tried
/// move into `forbidden` so every connected superset is visited once.
#[allow(clippy::too_many_arguments)]
fn extend(
    cur: u32,
    cand: u32,
    forbidden: u32,
    adj: &[u32],
    region: &ColoredRegion,
    p: u32,
    enumerated: &mut u64,
    found: &mut Option<u32>,
) {
    *enumerated += 1;
    if is_violator_mask(cur, region, p) {
        *found = Some(cur);
        return;
    }
    let mut cand = cand;
    let mut forbidden = forbidden;
    while cand != 0 {
        let bit = cand & cand.wrapping_neg();
        cand &= !bit;
        let v = bit.trailing_zeros() as usize;
        let grown = cand | (adj[v] & !(cur | bit | forbidden));
        extend(cur | bit, grown, forbidden, adj, region, p, enumerated, found);
        if found.is_some() {
            return;
        }
        forbidden |= bit;
    }
}

fn is_violator_mask(mask: u32, region: &ColoredRegion, p: u32) -> bool {
    if mask.count_ones() < 2 {
        return false;
    }
    let mut counts: HashMap<ColorId, u32> = HashMap::new();
    let mut bits = mask;
    while bits != 0 {
        let idx = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        *counts.entry(region.color_at_index(idx)).or_insert(0) += 1;
    }
    counts.len() as u32 <= p && counts.values().all(|&c| c >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::{Family, Params};
    use crate::grid::{Coord, Window};

    #[test]
    fn counts_connected_sets_of_a_square() {
        // the 2x2 grid is a 4-cycle: 4 + 4 + 4 + 1 nonempty connected sets
        let region = ColoredRegion::from_fn(Window::square(2), |c| c.x * 2 + c.y);
        let (v, enumerated) = oracle_enumerate_connected(&region, 4).unwrap();
        assert!(v.is_none());
        assert_eq!(enumerated, 13);
    }

    #[test]
    fn rejects_large_regions() {
        let region = ColoredRegion::from_fn(Window::new(0, 0, 6, 5), |_| 0);
        assert!(matches!(
            oracle_enumerate_connected(&region, 1),
            Err(VerifierError::RegionTooLarge(30, 25))
        ));
    }

    #[test]
    fn constant_coloring_yields_a_domino() {
        let region = ColoredRegion::from_fn(Window::square(3), |_| 7);
        let (v, _) = oracle_enumerate_connected(&region, 1).unwrap();
        let v = v.expect("any edge is a violator");
        assert_eq!(v.vertices, vec![Coord::new(0, 0), Coord::new(0, 1)]);
        assert_eq!(v.colors, vec![7]);
    }

    #[test]
    fn lambda_window_is_clean() {
        let params = Params::new(2).unwrap();
        let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(5));
        let (v, enumerated) = oracle_enumerate_connected(&region, 2).unwrap();
        assert!(v.is_none(), "unexpected violator: {v:?}");
        assert!(enumerated > 25);
    }
}
