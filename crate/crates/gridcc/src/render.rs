//! Figure output: label grids, partition shading, and the two separator
//! band figures, as ASCII token grids, binary P6 pixmaps, or minimal SVG.
//!
//! Orientation is the same everywhere: (0,0) at the lower left, y growing
//! rightward, x growing upward — so the row x = 0 is emitted last.
//! Every cell annotation is recomputed from the coloring functions, and
//! the per-cell RGB encoding is injective, so documents can be parsed
//! back and compared against the colorings exactly.

use crate::colorings::{
    block_index, mu, partition_ab, partition_rc, theta, BlockSide, Params, ResidueSide,
};
use crate::grid::{Coord, Window};
use thiserror::Error;

const MAX_RENDER_AREA: usize = 1_000_000;
const CELL_PX: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("region area {0} exceeds the render cap of {MAX_RENDER_AREA}")]
    OversizedRegion(usize),
    #[error("zigzag band column {0} is not divisible by 3")]
    InvalidBand(u32),
    #[error(transparent)]
    Coloring(#[from] crate::colorings::ColoringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Fig. 1: each cell's ρ_l^α with shading darker for larger l.
    MuLabels,
    /// Fig. 2: θ residues, light for side 0, dark for side 1.
    ThetaLabels,
    /// Fig. 3: the R/C and A/B partitions.
    Partitions,
    /// Fig. 4: C∩B cells with column in [b−2, b+1]; requires 3 | b.
    ZigzagBand { b: u32 },
    /// Fig. 5: A cells of block column i.
    BlockColumnBand { i: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Pixmap,
    Vector,
}

#[derive(Debug, Clone, Copy)]
pub struct FigureSpec {
    pub kind: FigureKind,
    pub region: Window,
    pub p: u32,
    pub format: Format,
}

impl FigureSpec {
    fn validate(&self) -> Result<Params, RenderError> {
        if self.region.area() > MAX_RENDER_AREA {
            return Err(RenderError::OversizedRegion(self.region.area()));
        }
        if let FigureKind::ZigzagBand { b } = self.kind {
            if b % 3 != 0 {
                return Err(RenderError::InvalidBand(b));
            }
        }
        Ok(Params::new(self.p)?)
    }
}

/// The annotation drawn in a cell.
pub fn cell_token(kind: FigureKind, c: Coord, params: &Params) -> String {
    match kind {
        FigureKind::MuLabels => {
            let m = mu(c, params);
            format!("{}_{}^{}", m.rho, m.level, m.alpha)
        }
        FigureKind::ThetaLabels => {
            let t = theta(c, params.p_requested);
            format!("{}{}", if t.side == 0 { 'r' } else { 'c' }, t.residue)
        }
        FigureKind::Partitions => {
            let rc = if partition_rc(c) == BlockSide::R { 'R' } else { 'C' };
            let ab = if partition_ab(c) == ResidueSide::A { 'A' } else { 'B' };
            format!("{rc}{ab}")
        }
        FigureKind::ZigzagBand { b } => {
            let hit = partition_rc(c) == BlockSide::C
                && partition_ab(c) == ResidueSide::B
                && c.y + 2 >= b
                && c.y <= b + 1;
            (if hit { "#" } else { "." }).to_string()
        }
        FigureKind::BlockColumnBand { i } => {
            let hit = block_index(c).y == i && partition_ab(c) == ResidueSide::A;
            (if hit { "#" } else { "." }).to_string()
        }
    }
}

/// Injective per-kind RGB encoding. μ cells share lightness within a
/// level and strictly darken as l grows; θ separates the two sides by
/// brightness; band figures are two-tone.
pub fn cell_rgb(kind: FigureKind, c: Coord, params: &Params) -> [u8; 3] {
    match kind {
        FigureKind::MuLabels => {
            let m = mu(c, params);
            // gray level by l, hue tint by (α, ρ) with zero channel-sum drift
            // keep gray ± 40 inside [15, 255]
            let gray = (215 - m.level * 160 / params.lg4p.max(1)) as i32;
            let id = m.alpha as u32 * params.rho_modulus_max + m.rho;
            let dr = (id % 41) as i32 - 20;
            let dg = (id / 41 % 41) as i32 - 20;
            [(gray + dr) as u8, (gray + dg) as u8, (gray - dr - dg) as u8]
        }
        FigureKind::ThetaLabels => {
            let t = theta(c, params.p_requested);
            [if t.side == 0 { 225 } else { 90 }, (t.residue % 256) as u8, 160]
        }
        FigureKind::Partitions => match (partition_rc(c), partition_ab(c)) {
            (BlockSide::R, ResidueSide::A) => [235, 235, 235],
            (BlockSide::R, ResidueSide::B) => [180, 180, 180],
            (BlockSide::C, ResidueSide::A) => [110, 110, 110],
            (BlockSide::C, ResidueSide::B) => [50, 50, 50],
        },
        FigureKind::ZigzagBand { .. } | FigureKind::BlockColumnBand { .. } => {
            if cell_token(kind, c, params) == "#" {
                [96, 96, 96]
            } else {
                [255, 255, 255]
            }
        }
    }
}

pub fn render(spec: &FigureSpec) -> Result<Vec<u8>, RenderError> {
    let params = spec.validate()?;
    Ok(match spec.format {
        Format::Ascii => render_ascii(spec, &params).into_bytes(),
        Format::Pixmap => render_pixmap(spec, &params),
        Format::Vector => render_vector(spec, &params).into_bytes(),
    })
}

/// Rows from the top (largest x) down, tokens space-separated.
fn render_ascii(spec: &FigureSpec, params: &Params) -> String {
    let r = spec.region;
    let mut out = String::new();
    for x in (r.x0..r.x0 + r.height).rev() {
        let row: Vec<String> = (r.y0..r.y0 + r.width)
            .map(|y| cell_token(spec.kind, Coord::new(x, y), params))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Binary P6, one pixel per cell, top row = largest x.
fn render_pixmap(spec: &FigureSpec, params: &Params) -> Vec<u8> {
    let r = spec.region;
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    for x in (r.x0..r.x0 + r.height).rev() {
        for y in r.y0..r.y0 + r.width {
            out.extend(cell_rgb(spec.kind, Coord::new(x, y), params));
        }
    }
    out
}

/// Minimal standalone SVG: one rect (and one text label) per cell, one
/// cell per line, emitted in the same top-down order as the other formats.
fn render_vector(spec: &FigureSpec, params: &Params) -> String {
    let r = spec.region;
    let (w, h) = (r.width * CELL_PX, r.height * CELL_PX);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    );
    for x in (r.x0..r.x0 + r.height).rev() {
        for y in r.y0..r.y0 + r.width {
            let c = Coord::new(x, y);
            let [cr, cg, cb] = cell_rgb(spec.kind, c, params);
            let px = (y - r.y0) * CELL_PX;
            let py = (r.x0 + r.height - 1 - x) * CELL_PX;
            let token = cell_token(spec.kind, c, params);
            let text_fill = if (cr as u32 + cg as u32 + cb as u32) < 384 { "#fff" } else { "#000" };
            out.push_str(&format!(
                "<rect x=\"{px}\" y=\"{py}\" width=\"{CELL_PX}\" height=\"{CELL_PX}\" \
                 fill=\"#{cr:02x}{cg:02x}{cb:02x}\"/><text x=\"{tx}\" y=\"{ty}\" \
                 font-size=\"5\" text-anchor=\"middle\" fill=\"{text_fill}\">{token}</text>\n",
                tx = px + CELL_PX / 2,
                ty = py + CELL_PX / 2 + 2,
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Parses an ASCII document back into row-major (x descending reversed to
/// ascending) token grid matching `Window::iter` order.
pub fn parse_ascii(doc: &str, region: Window) -> Option<Vec<String>> {
    let mut rows: Vec<Vec<String>> = doc
        .lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    rows.reverse(); // back to x ascending
    if rows.len() != region.height as usize
        || rows.iter().any(|r| r.len() != region.width as usize)
    {
        return None;
    }
    Some(rows.into_iter().flatten().collect())
}

/// Parses a P6 document back into per-cell RGB in `Window::iter` order.
pub fn parse_pixmap(doc: &[u8], region: Window) -> Option<Vec<[u8; 3]>> {
    let header = format!("P6\n{} {}\n255\n", region.width, region.height);
    let body = doc.strip_prefix(header.as_bytes())?;
    if body.len() != region.area() * 3 {
        return None;
    }
    let mut rows: Vec<Vec<[u8; 3]>> = body
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect::<Vec<_>>()
        .chunks_exact(region.width as usize)
        .map(|r| r.to_vec())
        .collect();
    rows.reverse();
    Some(rows.into_iter().flatten().collect())
}

/// Parses the SVG text labels back into `Window::iter` order.
pub fn parse_vector(doc: &str, region: Window) -> Option<Vec<String>> {
    let mut tokens = Vec::with_capacity(region.area());
    for line in doc.lines() {
        let Some(at) = line.find("<text ") else { continue };
        let rest = &line[at..];
        let start = rest.find('>')? + 1;
        let end = rest.find("</text>")?;
        tokens.push(rest[start..end].to_string());
    }
    if tokens.len() != region.area() {
        return None;
    }
    let mut rows: Vec<Vec<String>> = tokens
        .chunks_exact(region.width as usize)
        .map(|r| r.to_vec())
        .collect();
    rows.reverse();
    Some(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn kinds() -> [FigureKind; 5] {
        [
            FigureKind::MuLabels,
            FigureKind::ThetaLabels,
            FigureKind::Partitions,
            FigureKind::ZigzagBand { b: 6 },
            FigureKind::BlockColumnBand { i: 2 },
        ]
    }

    #[test]
    fn origin_cell_tokens_at_p4() {
        let params = Params::new(4).unwrap();
        let c = Coord::new(0, 0);
        assert_eq!(cell_token(FigureKind::MuLabels, c, &params), "0_4^0");
        let p3 = Params::new(3).unwrap();
        assert_eq!(cell_token(FigureKind::ThetaLabels, c, &p3), "r0");
        assert_eq!(cell_token(FigureKind::Partitions, c, &params), "RB");
    }

    #[test]
    fn zigzag_band_requires_multiple_of_three() {
        let spec = FigureSpec {
            kind: FigureKind::ZigzagBand { b: 7 },
            region: Window::square(6),
            p: 4,
            format: Format::Ascii,
        };
        assert_eq!(render(&spec), Err(RenderError::InvalidBand(7)));
    }

    #[test]
    fn oversized_region_rejected() {
        let spec = FigureSpec {
            kind: FigureKind::Partitions,
            region: Window::new(0, 0, 2000, 2000),
            p: 2,
            format: Format::Ascii,
        };
        assert_eq!(render(&spec), Err(RenderError::OversizedRegion(4_000_000)));
    }

    #[test]
    fn ascii_puts_row_zero_last() {
        let params = Params::new(4).unwrap();
        let spec = FigureSpec {
            kind: FigureKind::MuLabels,
            region: Window::square(3),
            p: 4,
            format: Format::Ascii,
        };
        let doc = String::from_utf8(render(&spec).unwrap()).unwrap();
        let last = doc.lines().last().unwrap();
        let expected: Vec<String> = (0..3)
            .map(|y| cell_token(FigureKind::MuLabels, Coord::new(0, y), &params))
            .collect();
        assert_eq!(last, expected.join(" "));
    }

    #[test]
    fn mu_shading_monotone_in_level() {
        let params = Params::new(4).unwrap();
        // channel sum is a strictly decreasing function of l
        let mut sums: HashMap<u32, i32> = HashMap::new();
        for c in Window::square(32).iter() {
            let m = mu(c, &params);
            let [r, g, b] = cell_rgb(FigureKind::MuLabels, c, &params);
            let s = r as i32 + g as i32 + b as i32;
            assert_eq!(*sums.entry(m.level).or_insert(s), s);
        }
        let mut levels: Vec<u32> = sums.keys().copied().collect();
        levels.sort_unstable();
        for pair in levels.windows(2) {
            assert!(sums[&pair[1]] < sums[&pair[0]], "level {} not darker", pair[1]);
        }
    }

    #[test]
    fn rgb_injective_on_tokens() {
        for p in [2u32, 3, 4, 8] {
            let params = Params::new(p).unwrap();
            for kind in kinds() {
                let mut seen: HashMap<[u8; 3], String> = HashMap::new();
                for c in Window::square(60).iter() {
                    let token = cell_token(kind, c, &params);
                    let rgb = cell_rgb(kind, c, &params);
                    let prev = seen.entry(rgb).or_insert_with(|| token.clone());
                    assert_eq!(*prev, token, "rgb collision for {kind:?} at {c}");
                }
            }
        }
    }

    #[test]
    fn roundtrip_all_formats_random_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in kinds() {
            for _ in 0..25 {
                let region = Window::new(
                    rng.gen_range(0..50),
                    rng.gen_range(0..50),
                    rng.gen_range(1..12),
                    rng.gen_range(1..12),
                );
                let p = *[2u32, 3, 4, 8].iter().nth(rng.gen_range(0..4)).unwrap();
                let params = Params::new(p).unwrap();
                for format in [Format::Ascii, Format::Pixmap, Format::Vector] {
                    let spec = FigureSpec { kind, region, p, format };
                    let doc = render(&spec).unwrap();
                    match format {
                        Format::Ascii => {
                            let tokens = parse_ascii(std::str::from_utf8(&doc).unwrap(), region)
                                .expect("parse");
                            for (tok, c) in tokens.iter().zip(region.iter()) {
                                assert_eq!(*tok, cell_token(kind, c, &params));
                            }
                        }
                        Format::Pixmap => {
                            let pixels = parse_pixmap(&doc, region).expect("parse");
                            for (px, c) in pixels.iter().zip(region.iter()) {
                                assert_eq!(*px, cell_rgb(kind, c, &params));
                            }
                        }
                        Format::Vector => {
                            let tokens = parse_vector(std::str::from_utf8(&doc).unwrap(), region)
                                .expect("parse");
                            for (tok, c) in tokens.iter().zip(region.iter()) {
                                assert_eq!(*tok, cell_token(kind, c, &params));
                            }
                        }
                    }
                }
            }
        }
    }
}
