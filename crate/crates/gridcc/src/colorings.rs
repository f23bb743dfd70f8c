//! The three grid colorings and their supporting machinery.
//!
//! `mu` has no small violators, `theta` (intuition only) has no large ones,
//! and `lambda` interleaves a block-scaled `mu` with `theta`-style bands to
//! rule out all violators. All functions here are pure and total; callers
//! may evaluate them from any number of threads.

use crate::grid::{Coord, Window};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ColorId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("p must be a positive integer")]
    InvalidP,
    #[error("color field out of range: {0}")]
    InvalidColor(String),
    #[error("color id {0} is not a valid {1} id")]
    InvalidColorId(ColorId, &'static str),
    #[error("computed period {period} failed the translation check for {family} at p'={p_eff}")]
    PeriodValidation { family: &'static str, period: u32, p_eff: u32 },
}

/// Parameter bundle for a chosen p.
///
/// `p_eff` is the smallest power of two that is at least `max(p_requested, 2)`;
/// the power-of-two construction is applied at `p_eff` and remains p-centered
/// for the requested p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p_requested: u32,
    pub p_eff: u32,
    /// log₂(4·p_eff), exact.
    pub lg4p: u32,
    /// Largest ρ modulus, 8·p_eff.
    pub rho_modulus_max: u32,
    /// Band modulus of λ's B cells, 6·p_eff + 6.
    pub b_modulus: u32,
    /// Every λ-violator spans at most this many rows and columns (6·p_eff + 8).
    pub window_bound: u32,
    /// Per-axis period of λ, lcm(24·p_eff, 6·p_eff + 6).
    pub period: u32,
    /// Per-axis period of μ, 8·p_eff.
    pub mu_period: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Params {
    pub fn new(p_requested: u32) -> Result<Self, ColoringError> {
        if p_requested == 0 {
            return Err(ColoringError::InvalidP);
        }
        let p_eff = p_requested.max(2).next_power_of_two();
        let lg4p = (4 * p_eff).trailing_zeros();
        Ok(Params {
            p_requested,
            p_eff,
            lg4p,
            rho_modulus_max: 8 * p_eff,
            b_modulus: 6 * p_eff + 6,
            window_bound: 6 * p_eff + 8,
            period: lcm(24 * p_eff as u64, 6 * p_eff as u64 + 6) as u32,
            mu_period: 8 * p_eff,
        })
    }

    /// Per-axis period of `lambda_general`: 2 for p = 1 (parity coloring),
    /// otherwise the λ period.
    pub fn general_period(&self) -> u32 {
        if self.p_requested == 1 { 2 } else { self.period }
    }
}

/// μ color: (α, l, ρ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MuColor {
    pub alpha: u8,
    pub level: u32,
    pub rho: u32,
}

/// θ color: (side, residue), side 0 for cells with x+y even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaColor {
    pub side: u8,
    pub residue: u32,
}

/// λ color: A cells carry the block μ color plus the (mod 3, mod 3)
/// residues; B cells carry an axis bit and a band residue mod 6p+6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambdaColor {
    A { mu: MuColor, rx: u8, ry: u8 },
    B { axis: u8, residue: u32 },
}

impl std::fmt::Display for MuColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.level, self.rho)
    }
}

impl std::fmt::Display for ThetaColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.side, self.residue)
    }
}

impl std::fmt::Display for LambdaColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaColor::A { mu, rx, ry } => write!(f, "A({mu},{rx},{ry})"),
            LambdaColor::B { axis, residue } => write!(f, "B({axis},{residue})"),
        }
    }
}

/// The largest i ≤ lg(4p) with 2^i dividing n; every power of two divides 0,
/// so f(0) = lg(4p).
pub fn f_val(n: u32, params: &Params) -> u32 {
    if n == 0 {
        params.lg4p
    } else {
        n.trailing_zeros().min(params.lg4p)
    }
}

pub fn mu(c: Coord, params: &Params) -> MuColor {
    let fx = f_val(c.x, params);
    let fy = f_val(c.y, params);
    if fx >= fy {
        MuColor { alpha: 0, level: fx, rho: c.y % (1 << (fx + 1)) }
    } else {
        MuColor { alpha: 1, level: fy, rho: c.x % (1 << (fy + 1)) }
    }
}

/// θ uses the requested p directly (no power-of-two rounding).
pub fn theta(c: Coord, p: u32) -> ThetaColor {
    let m = 2 * p + 2;
    if (c.x + c.y) % 2 == 0 {
        ThetaColor { side: 0, residue: c.x % m }
    } else {
        ThetaColor { side: 1, residue: c.y % m }
    }
}

/// The block-parity partition of λ's construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSide {
    R,
    C,
}

/// The residue-parity partition of λ's construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueSide {
    A,
    B,
}

/// R iff ⌊x/3⌋ + ⌊y/3⌋ is even.
pub fn partition_rc(c: Coord) -> BlockSide {
    if (c.x / 3 + c.y / 3) % 2 == 0 { BlockSide::R } else { BlockSide::C }
}

/// A iff mod(x,3) + mod(y,3) is odd.
pub fn partition_ab(c: Coord) -> ResidueSide {
    if (c.x % 3 + c.y % 3) % 2 == 1 { ResidueSide::A } else { ResidueSide::B }
}

/// The 3×3 block-contraction map I.
pub fn block_index(c: Coord) -> Coord {
    Coord::new(c.x / 3, c.y / 3)
}

pub fn lambda(c: Coord, params: &Params) -> LambdaColor {
    match partition_ab(c) {
        ResidueSide::A => LambdaColor::A {
            mu: mu(block_index(c), params),
            rx: (c.x % 3) as u8,
            ry: (c.y % 3) as u8,
        },
        ResidueSide::B => match partition_rc(c) {
            BlockSide::R => LambdaColor::B { axis: 0, residue: c.x % params.b_modulus },
            BlockSide::C => LambdaColor::B { axis: 1, residue: c.y % params.b_modulus },
        },
    }
}

/// The arbitrary-p wrapper: for p = 1 the parity 2-coloring (proper, hence
/// 1-centered), otherwise λ at the effective power of two.
pub fn lambda_general(c: Coord, params: &Params) -> LambdaColor {
    if params.p_requested == 1 {
        LambdaColor::B { axis: ((c.x + c.y) % 2) as u8, residue: 0 }
    } else {
        lambda(c, params)
    }
}

// ---------------------------------------------------------------------------
// Canonical integer encodings.
//
// Frozen layouts (CSV outputs depend on them):
//   μ:  alpha·(lg4p+1)·8p' + level·8p' + rho
//   θ:  side·(2p+2) + residue                      (p is the requested p)
//   λ:  variant A → mu_id·9 + rx·3 + ry
//       variant B → (2·(lg4p+1)·8p')·9 + axis·(6p'+6) + residue
// ---------------------------------------------------------------------------

/// Number of distinct μ ids (not all of them occur on the grid).
pub fn mu_id_capacity(params: &Params) -> u32 {
    2 * (params.lg4p + 1) * params.rho_modulus_max
}

fn validate_mu(m: &MuColor, params: &Params) -> Result<(), ColoringError> {
    let err = |msg: String| Err(ColoringError::InvalidColor(msg));
    if m.alpha > 1 {
        return err(format!("mu alpha {} not a bit", m.alpha));
    }
    if m.level > params.lg4p {
        return err(format!("mu level {} exceeds lg(4p) = {}", m.level, params.lg4p));
    }
    if m.rho >= 1 << (m.level + 1) {
        return err(format!("mu rho {} >= 2^{}", m.rho, m.level + 1));
    }
    if m.rho == 0 && !(m.level == params.lg4p && m.alpha == 0) {
        return err("mu rho = 0 requires level = lg(4p) and alpha = 0".into());
    }
    if m.alpha == 1 && m.rho == 1 << m.level {
        return err(format!("mu cannot have alpha = 1 and rho = 2^{}", m.level));
    }
    Ok(())
}

pub fn encode_mu(m: &MuColor, params: &Params) -> Result<ColorId, ColoringError> {
    validate_mu(m, params)?;
    let stride = params.rho_modulus_max;
    Ok(m.alpha as u32 * (params.lg4p + 1) * stride + m.level * stride + m.rho)
}

pub fn decode_mu(id: ColorId, params: &Params) -> Result<MuColor, ColoringError> {
    let stride = params.rho_modulus_max;
    if id >= mu_id_capacity(params) {
        return Err(ColoringError::InvalidColorId(id, "mu"));
    }
    let alpha = (id / ((params.lg4p + 1) * stride)) as u8;
    let rest = id % ((params.lg4p + 1) * stride);
    let m = MuColor { alpha, level: rest / stride, rho: rest % stride };
    validate_mu(&m, params).map_err(|_| ColoringError::InvalidColorId(id, "mu"))?;
    Ok(m)
}

pub fn encode_theta(t: &ThetaColor, params: &Params) -> Result<ColorId, ColoringError> {
    let m = 2 * params.p_requested + 2;
    if t.side > 1 || t.residue >= m {
        return Err(ColoringError::InvalidColor(format!("theta ({},{})", t.side, t.residue)));
    }
    Ok(t.side as u32 * m + t.residue)
}

pub fn decode_theta(id: ColorId, params: &Params) -> Result<ThetaColor, ColoringError> {
    let m = 2 * params.p_requested + 2;
    if id >= 2 * m {
        return Err(ColoringError::InvalidColorId(id, "theta"));
    }
    Ok(ThetaColor { side: (id / m) as u8, residue: id % m })
}

/// Ids below this value are variant-A λ ids; B ids follow.
pub fn lambda_a_capacity(params: &Params) -> u32 {
    mu_id_capacity(params) * 9
}

pub fn encode_lambda(l: &LambdaColor, params: &Params) -> Result<ColorId, ColoringError> {
    match l {
        LambdaColor::A { mu, rx, ry } => {
            if *rx > 2 || *ry > 2 {
                return Err(ColoringError::InvalidColor(format!("lambda residues ({rx},{ry})")));
            }
            let mu_id = encode_mu(mu, params)?;
            Ok(mu_id * 9 + *rx as u32 * 3 + *ry as u32)
        }
        LambdaColor::B { axis, residue } => {
            if *axis > 1 || *residue >= params.b_modulus {
                return Err(ColoringError::InvalidColor(format!("lambda B ({axis},{residue})")));
            }
            Ok(lambda_a_capacity(params) + *axis as u32 * params.b_modulus + residue)
        }
    }
}

pub fn decode_lambda(id: ColorId, params: &Params) -> Result<LambdaColor, ColoringError> {
    let a_cap = lambda_a_capacity(params);
    if id < a_cap {
        let mu = decode_mu(id / 9, params).map_err(|_| ColoringError::InvalidColorId(id, "lambda"))?;
        let rest = id % 9;
        Ok(LambdaColor::A { mu, rx: (rest / 3) as u8, ry: (rest % 3) as u8 })
    } else {
        let rest = id - a_cap;
        if rest >= 2 * params.b_modulus {
            return Err(ColoringError::InvalidColorId(id, "lambda"));
        }
        Ok(LambdaColor::B {
            axis: (rest / params.b_modulus) as u8,
            residue: rest % params.b_modulus,
        })
    }
}

/// A coloring family selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Mu,
    Theta,
    Lambda,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mu" => Ok(Family::Mu),
            "theta" => Ok(Family::Theta),
            "lambda" => Ok(Family::Lambda),
            other => Err(format!("unknown coloring family '{other}'")),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Mu => "mu",
            Family::Theta => "theta",
            Family::Lambda => "lambda",
        };
        f.write_str(s)
    }
}

impl Family {
    /// Per-axis period of the family's coloring. λ here means the
    /// general-p wrapper.
    pub fn period(&self, params: &Params) -> u32 {
        match self {
            Family::Mu => params.mu_period,
            Family::Theta => 2 * params.p_requested + 2,
            Family::Lambda => params.general_period(),
        }
    }

    /// Theoretical color-count bound from the construction.
    pub fn bound(&self, params: &Params) -> u32 {
        match self {
            Family::Mu => 32 * params.p_eff,
            Family::Theta => 2 * (2 * params.p_requested + 2),
            Family::Lambda => 140 * params.p_eff + 12,
        }
    }

    /// Canonical id of the family's color at `c`.
    pub fn color_id_at(&self, c: Coord, params: &Params) -> ColorId {
        match self {
            Family::Mu => encode_mu(&mu(c, params), params).expect("mu produces valid colors"),
            Family::Theta => encode_theta(&theta(c, params.p_requested), params)
                .expect("theta produces valid colors"),
            Family::Lambda => encode_lambda(&lambda_general(c, params), params)
                .expect("lambda produces valid colors"),
        }
    }

    /// Human-readable tuple form of the color at `c`.
    pub fn color_display_at(&self, c: Coord, params: &Params) -> String {
        match self {
            Family::Mu => mu(c, params).to_string(),
            Family::Theta => theta(c, params.p_requested).to_string(),
            Family::Lambda => lambda_general(c, params).to_string(),
        }
    }
}

/// All colors appearing in one full period square, sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    pub count: usize,
    pub ids: Vec<ColorId>,
}

pub fn enumerate_colors(family: Family, params: &Params) -> Palette {
    let t = family.period(params);
    let mut seen = std::collections::BTreeSet::new();
    for c in Window::square(t).iter() {
        seen.insert(family.color_id_at(c, params));
    }
    let ids: Vec<ColorId> = seen.into_iter().collect();
    Palette { count: ids.len(), ids }
}

/// Exact μ color count from the construction: 32p − 3·lg(p) − 12.
pub fn mu_exact_count(params: &Params) -> u32 {
    32 * params.p_eff - 3 * params.p_eff.trailing_zeros() - 12
}

// ---------------------------------------------------------------------------
// Period validation. The periods above are computed from the moduli of the
// definitions; verification runs must not trust the formulas, so they check
// translation invariance exhaustively before relying on them.
// ---------------------------------------------------------------------------

/// True iff the family's coloring satisfies φ(x,y) = φ(x+t,y) = φ(x,y+t)
/// for all (x,y) in a 2t×2t region.
pub fn check_translation(family: Family, params: &Params, t: u32) -> bool {
    let extent = 2 * t;
    for c in Window::square(extent).iter() {
        let id = family.color_id_at(c, params);
        if id != family.color_id_at(Coord::new(c.x + t, c.y), params)
            || id != family.color_id_at(Coord::new(c.x, c.y + t), params)
        {
            return false;
        }
    }
    true
}

/// Validates the computed μ and λ periods; called at the start of every
/// verification run. A failure aborts with a distinct error.
pub fn validate_periods(params: &Params) -> Result<(), ColoringError> {
    if !check_translation(Family::Mu, params, params.mu_period) {
        return Err(ColoringError::PeriodValidation {
            family: "mu",
            period: params.mu_period,
            p_eff: params.p_eff,
        });
    }
    let t = Family::Lambda.period(params);
    if !check_translation(Family::Lambda, params, t) {
        return Err(ColoringError::PeriodValidation {
            family: "lambda",
            period: t,
            p_eff: params.p_eff,
        });
    }
    Ok(())
}
