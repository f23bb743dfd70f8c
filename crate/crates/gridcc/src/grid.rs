//! Finite representations of the infinite grid: coordinates, windows,
//! dense vertex sets, adjacency, spans, contiguity and connectivity.
//!
//! The grid has vertex set ℕ² (0 included) and edges between vertices at
//! Manhattan distance 1. `x` is the row index, `y` the column index, with
//! (0,0) the lower-left corner.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("empty set has no span")]
    EmptySet,
    #[error("target size {target} exceeds window area {area}")]
    TargetTooLarge { target: usize, area: usize },
    #[error("coordinate ({0}, {1}) lies outside the window")]
    OutOfWindow(u32, u32),
}

/// A grid vertex. Both coordinates are nonnegative by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub x: u32,
    pub y: u32,
}

impl Coord {
    pub fn new(x: u32, y: u32) -> Self {
        Coord { x, y }
    }

    /// The 2–4 grid neighbors with nonnegative coordinates, in the fixed
    /// order (−x, +x, −y, +y) with out-of-range entries skipped.
    pub fn neighbors(self) -> impl Iterator<Item = Coord> {
        let Coord { x, y } = self;
        [
            x.checked_sub(1).map(|x| Coord::new(x, y)),
            Some(Coord::new(x + 1, y)),
            y.checked_sub(1).map(|y| Coord::new(x, y)),
            Some(Coord::new(x, y + 1)),
        ]
        .into_iter()
        .flatten()
    }

    /// Grid adjacency: Manhattan distance exactly 1.
    pub fn is_adjacent(self, other: Coord) -> bool {
        let dx = self.x.abs_diff(other.x);
        let dy = self.y.abs_diff(other.y);
        dx + dy == 1
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A finite axis-aligned view of the grid: rows `[x0, x0+height)`,
/// columns `[y0, y0+width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub x0: u32,
    pub y0: u32,
    /// Extent along y (number of columns).
    pub width: u32,
    /// Extent along x (number of rows).
    pub height: u32,
}

impl Window {
    /// Panics if `width` or `height` is zero.
    pub fn new(x0: u32, y0: u32, width: u32, height: u32) -> Self {
        assert!(width > 0 && height > 0, "window dimensions must be positive");
        Window { x0, y0, width, height }
    }

    /// A `side`×`side` window anchored at the origin.
    pub fn square(side: u32) -> Self {
        Window::new(0, 0, side, side)
    }

    pub fn area(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.x0
            && c.x < self.x0 + self.height
            && c.y >= self.y0
            && c.y < self.y0 + self.width
    }

    /// Row-major cell index (x varies slowest).
    pub fn index_of(&self, c: Coord) -> Option<usize> {
        if self.contains(c) {
            Some((c.x - self.x0) as usize * self.width as usize + (c.y - self.y0) as usize)
        } else {
            None
        }
    }

    pub fn coord_at(&self, idx: usize) -> Coord {
        debug_assert!(idx < self.area());
        let w = self.width as usize;
        Coord::new(self.x0 + (idx / w) as u32, self.y0 + (idx % w) as u32)
    }

    /// All cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.area()).map(|i| self.coord_at(i))
    }
}

/// A set of grid vertices backed by a dense bit field over a window.
///
/// Sets never span multiple windows; callers enlarge the window instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    window: Window,
    bits: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(window: Window) -> Self {
        let words = (window.area() + 63) / 64;
        VertexSet { window, bits: vec![0; words], len: 0 }
    }

    pub fn from_coords<I: IntoIterator<Item = Coord>>(window: Window, coords: I) -> Result<Self, GridError> {
        let mut s = VertexSet::new(window);
        for c in coords {
            s.insert(c)?;
        }
        Ok(s)
    }

    /// Builds a set from raw bit words (same layout as `bits()`).
    pub fn from_words(window: Window, bits: Vec<u64>) -> Self {
        let words = (window.area() + 63) / 64;
        assert_eq!(bits.len(), words);
        let mut len = 0;
        for (i, w) in bits.iter().enumerate() {
            let mut w = *w;
            // mask tail bits beyond the window area
            if (i + 1) * 64 > window.area() {
                let valid = window.area() - i * 64;
                if valid < 64 {
                    w &= (1u64 << valid) - 1;
                }
            }
            len += w.count_ones() as usize;
        }
        let mut s = VertexSet { window, bits, len };
        // normalize the tail
        let area = window.area();
        if area % 64 != 0 {
            if let Some(last) = s.bits.last_mut() {
                *last &= (1u64 << (area % 64)) - 1;
            }
        }
        s.len = len;
        s
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, c: Coord) -> Result<bool, GridError> {
        let idx = self.window.index_of(c).ok_or(GridError::OutOfWindow(c.x, c.y))?;
        Ok(self.insert_index(idx))
    }

    pub fn insert_index(&mut self, idx: usize) -> bool {
        let (w, b) = (idx / 64, idx % 64);
        let mask = 1u64 << b;
        let fresh = self.bits[w] & mask == 0;
        if fresh {
            self.bits[w] |= mask;
            self.len += 1;
        }
        fresh
    }

    pub fn remove_index(&mut self, idx: usize) -> bool {
        let (w, b) = (idx / 64, idx % 64);
        let mask = 1u64 << b;
        let present = self.bits[w] & mask != 0;
        if present {
            self.bits[w] &= !mask;
            self.len -= 1;
        }
        present
    }

    pub fn contains(&self, c: Coord) -> bool {
        match self.window.index_of(c) {
            Some(idx) => self.contains_index(idx),
            None => false,
        }
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits[idx / 64] & (1u64 << (idx % 64)) != 0
    }

    /// Member cell indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Members in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Coord> + '_ {
        self.indices().map(|i| self.window.coord_at(i))
    }

    /// First member in row-major order.
    pub fn smallest(&self) -> Option<Coord> {
        self.iter().next()
    }

    /// (rows, cols) spanned: `max π_x − min π_x + 1` and likewise for y.
    pub fn span(&self) -> Result<(u32, u32), GridError> {
        if self.is_empty() {
            return Err(GridError::EmptySet);
        }
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (u32::MAX, 0u32, u32::MAX, 0u32);
        for c in self.iter() {
            min_x = min_x.min(c.x);
            max_x = max_x.max(c.x);
            min_y = min_y.min(c.y);
            max_y = max_y.max(c.y);
        }
        Ok((max_x - min_x + 1, max_y - min_y + 1))
    }

    /// True iff both projections π_x and π_y are integer intervals.
    pub fn is_row_col_contiguous(&self) -> Result<bool, GridError> {
        if self.is_empty() {
            return Err(GridError::EmptySet);
        }
        let mut rows = vec![false; self.window.height as usize];
        let mut cols = vec![false; self.window.width as usize];
        for c in self.iter() {
            rows[(c.x - self.window.x0) as usize] = true;
            cols[(c.y - self.window.y0) as usize] = true;
        }
        Ok(occupancy_contiguous(&rows) && occupancy_contiguous(&cols))
    }

    /// Partition into maximal grid-connected subsets, ordered by their
    /// smallest member in row-major order.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut components = Vec::new();
        let mut seen = vec![0u64; self.bits.len()];
        let w = self.window.width as usize;
        let area = self.window.area();
        let mut stack = Vec::new();
        for start in self.indices() {
            if seen[start / 64] & (1u64 << (start % 64)) != 0 {
                continue;
            }
            let mut comp = VertexSet::new(self.window);
            stack.push(start);
            seen[start / 64] |= 1u64 << (start % 64);
            while let Some(idx) = stack.pop() {
                comp.insert_index(idx);
                let col = idx % w;
                let mut push = |n: usize| {
                    if self.contains_index(n) && seen[n / 64] & (1u64 << (n % 64)) == 0 {
                        seen[n / 64] |= 1u64 << (n % 64);
                        stack.push(n);
                    }
                };
                if idx >= w {
                    push(idx - w);
                }
                if idx + w < area {
                    push(idx + w);
                }
                if col > 0 {
                    push(idx - 1);
                }
                if col + 1 < w {
                    push(idx + 1);
                }
            }
            components.push(comp);
        }
        components
    }
}

fn occupancy_contiguous(occ: &[bool]) -> bool {
    let first = match occ.iter().position(|&b| b) {
        Some(i) => i,
        None => return false,
    };
    let last = occ.iter().rposition(|&b| b).unwrap();
    occ[first..=last].iter().all(|&b| b)
}

/// Grows a connected set of exactly `target_size` vertices inside `window`
/// by uniformly random boundary expansion. Reproducible from `seed`.
pub fn random_connected_set(seed: u64, window: Window, target_size: usize) -> Result<VertexSet, GridError> {
    let area = window.area();
    if target_size > area {
        return Err(GridError::TargetTooLarge { target: target_size, area });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grow_connected(&mut rng, window, |s| s.len() >= target_size)
}

/// Boundary-expansion growth until `done(set)` holds (checked after every
/// insertion, and once on the singleton seed set). Used by the randomized
/// checks that need sets of a given size or span.
pub fn grow_connected<R: rand::Rng>(
    rng: &mut R,
    window: Window,
    mut done: impl FnMut(&VertexSet) -> bool,
) -> Result<VertexSet, GridError> {
    let area = window.area();
    let mut set = VertexSet::new(window);
    let start = rng.gen_range(0..area);
    set.insert_index(start);
    let mut boundary: Vec<usize> = neighbor_indices(window, start).collect();
    while !done(&set) {
        // drop stale candidates lazily
        let mut picked = None;
        while !boundary.is_empty() {
            let i = rng.gen_range(0..boundary.len());
            let cand = boundary.swap_remove(i);
            if !set.contains_index(cand) {
                picked = Some(cand);
                break;
            }
        }
        let cand = match picked {
            Some(c) => c,
            // window exhausted
            None => break,
        };
        set.insert_index(cand);
        boundary.extend(neighbor_indices(window, cand).filter(|&n| !set.contains_index(n)));
    }
    Ok(set)
}

fn neighbor_indices(window: Window, idx: usize) -> impl Iterator<Item = usize> {
    let w = window.width as usize;
    let area = window.area();
    let col = idx % w;
    [
        (idx >= w).then(|| idx - w),
        (idx + w < area).then(|| idx + w),
        (col > 0).then(|| idx - 1),
        (col + 1 < w).then(|| idx + 1),
    ]
    .into_iter()
    .flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(v: &[(u32, u32)]) -> Vec<Coord> {
        v.iter().map(|&(x, y)| Coord::new(x, y)).collect()
    }

    #[test]
    fn neighbors_of_corner() {
        let n: Vec<_> = Coord::new(0, 0).neighbors().collect();
        assert_eq!(n, coords(&[(1, 0), (0, 1)]));
    }

    #[test]
    fn neighbors_of_edge_vertex() {
        let n: Vec<_> = Coord::new(5, 0).neighbors().collect();
        assert_eq!(n, coords(&[(4, 0), (6, 0), (5, 1)]));
    }

    #[test]
    fn neighbors_of_interior_vertex() {
        let n: Vec<_> = Coord::new(3, 7).neighbors().collect();
        assert_eq!(n, coords(&[(2, 7), (4, 7), (3, 6), (3, 8)]));
    }

    #[test]
    fn span_of_horizontal_path() {
        let w = Window::new(0, 0, 4, 10);
        let s = VertexSet::from_coords(w, (0..9).map(|x| Coord::new(x, 1))).unwrap();
        assert_eq!(s.span().unwrap(), (9, 1));
    }

    #[test]
    fn span_of_singleton_and_row_pair() {
        let w = Window::square(8);
        let s = VertexSet::from_coords(w, [Coord::new(2, 3)]).unwrap();
        assert_eq!(s.span().unwrap(), (1, 1));
        let s = VertexSet::from_coords(w, coords(&[(0, 0), (0, 5)])).unwrap();
        assert_eq!(s.span().unwrap(), (1, 6));
    }

    #[test]
    fn span_of_empty_set_is_an_error() {
        let s = VertexSet::new(Window::square(3));
        assert_eq!(s.span(), Err(GridError::EmptySet));
        assert_eq!(s.is_row_col_contiguous(), Err(GridError::EmptySet));
    }

    #[test]
    fn contiguity_examples() {
        let w = Window::square(4);
        let s = VertexSet::from_coords(w, coords(&[(0, 0), (1, 1)])).unwrap();
        assert!(s.is_row_col_contiguous().unwrap());
        let s = VertexSet::from_coords(w, coords(&[(0, 0), (2, 0)])).unwrap();
        assert!(!s.is_row_col_contiguous().unwrap());
    }

    #[test]
    fn components_partition() {
        let w = Window::square(6);
        let s = VertexSet::from_coords(w, coords(&[(0, 0), (0, 1), (5, 5)])).unwrap();
        let comps = s.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].iter().collect::<Vec<_>>(), coords(&[(0, 0), (0, 1)]));
        assert_eq!(comps[1].iter().collect::<Vec<_>>(), coords(&[(5, 5)]));
    }

    #[test]
    fn components_of_empty_set() {
        let s = VertexSet::new(Window::square(3));
        assert!(s.connected_components().is_empty());
    }

    #[test]
    fn full_window_is_one_component() {
        let w = Window::square(3);
        let s = VertexSet::from_coords(w, w.iter()).unwrap();
        let comps = s.connected_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 9);
    }

    #[test]
    fn random_connected_set_contracts() {
        let w = Window::new(3, 5, 10, 10);
        for seed in 0..50 {
            let s = random_connected_set(seed, w, 17).unwrap();
            assert_eq!(s.len(), 17);
            assert_eq!(s.connected_components().len(), 1);
            assert!(s.is_row_col_contiguous().unwrap());
            let again = random_connected_set(seed, w, 17).unwrap();
            assert_eq!(s, again);
        }
    }

    #[test]
    fn random_connected_set_rejects_oversize() {
        let w = Window::square(3);
        assert!(matches!(
            random_connected_set(0, w, 10),
            Err(GridError::TargetTooLarge { .. })
        ));
    }

    // Connected subsets of the grid are row and column contiguous; checked
    // exhaustively over all subsets of a 4x4 window.
    #[test]
    fn connected_implies_contiguous_exhaustive_4x4() {
        let w = Window::square(4);
        for mask in 1u32..(1 << 16) {
            let mut s = VertexSet::new(w);
            for b in 0..16 {
                if mask & (1 << b) != 0 {
                    s.insert_index(b);
                }
            }
            if s.connected_components().len() == 1 {
                assert!(s.is_row_col_contiguous().unwrap(), "mask {mask:#x}");
            }
        }
    }

    #[test]
    fn components_are_a_partition_and_mutually_nonadjacent() {
        for seed in 0..20 {
            let w = Window::square(8);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = VertexSet::new(w);
            for i in 0..w.area() {
                if rand::Rng::gen_bool(&mut rng, 0.4) {
                    s.insert_index(i);
                }
            }
            let comps = s.connected_components();
            let total: usize = comps.iter().map(|c| c.len()).sum();
            assert_eq!(total, s.len());
            for (i, a) in comps.iter().enumerate() {
                assert_eq!(a.connected_components().len(), 1.min(a.len()));
                for b in comps.iter().skip(i + 1) {
                    for u in a.iter() {
                        assert!(!b.contains(u));
                        for n in u.neighbors() {
                            assert!(!b.contains(n), "components touch at {u}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn span_is_translation_invariant() {
        let w1 = Window::new(0, 0, 6, 6);
        let w2 = Window::new(10, 20, 6, 6);
        for seed in 0..20 {
            let s = random_connected_set(seed, w1, 9).unwrap();
            let t = VertexSet::from_coords(w2, s.iter().map(|c| Coord::new(c.x + 10, c.y + 20))).unwrap();
            assert_eq!(s.span().unwrap(), t.span().unwrap());
        }
    }
}
