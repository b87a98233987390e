//! Single-color tilings, domino classification and weights, k-tilings and
//! interaction counting.

use crate::geometry::{diagonal_unchecked, faces_of_rank, Face, ParityConvention};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

/// A domino, anchored at its left cell (horizontal) or bottom cell (vertical).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Domino {
    pub anchor: Face,
    pub orient: Orientation,
}

impl Domino {
    pub fn horizontal(anchor: Face) -> Self {
        Domino { anchor, orient: Orientation::Horizontal }
    }

    pub fn vertical(anchor: Face) -> Self {
        Domino { anchor, orient: Orientation::Vertical }
    }

    /// The two faces covered, anchor first.
    pub fn faces(self) -> (Face, Face) {
        match self.orient {
            Orientation::Horizontal => (self.anchor, self.anchor.east()),
            Orientation::Vertical => (self.anchor, self.anchor.north()),
        }
    }

    pub fn in_diamond(self, rank: u32) -> bool {
        let (a, b) = self.faces();
        a.in_diamond(rank) && b.in_diamond(rank)
    }
}

/// Compass classification: orientation plus the shade of the anchor face.
/// The compass name is the direction the domino slides in one shuffle step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompassType {
    North,
    South,
    East,
    West,
}

impl CompassType {
    /// Slide displacement (du, dv).
    pub fn delta(self) -> (i32, i32) {
        match self {
            CompassType::North => (0, 1),
            CompassType::South => (0, -1),
            CompassType::East => (1, 0),
            CompassType::West => (-1, 0),
        }
    }
}

/// Classify a domino under the given checkerboard convention. Horizontal
/// dominoes with a white anchor are South movers, with a gray anchor North;
/// vertical dominoes with a white anchor are West movers, with gray East.
pub fn classify(dom: Domino, conv: ParityConvention) -> CompassType {
    let white = conv.is_white(dom.anchor);
    match (dom.orient, white) {
        (Orientation::Horizontal, true) => CompassType::South,
        (Orientation::Horizontal, false) => CompassType::North,
        (Orientation::Vertical, true) => CompassType::West,
        (Orientation::Vertical, false) => CompassType::East,
    }
}

/// Weight parameters: tuples C = (c_1..c_N), B = (b_1..b_N) of positive
/// reals and the interaction strength t >= 0 (f64::INFINITY is accepted and
/// means the t -> infinity degeneration).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
}

impl WeightConfig {
    pub fn new(c: Vec<f64>, b: Vec<f64>, t: f64) -> Result<Self> {
        if c.iter().chain(b.iter()).any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::config("all c_i and b_i must be positive finite reals"));
        }
        if t.is_nan() || t < 0.0 {
            return Err(Error::config("t must be >= 0 (or +inf)"));
        }
        Ok(WeightConfig { c, b, t })
    }

    pub fn uniform(n: u32, t: f64) -> Result<Self> {
        WeightConfig::new(vec![1.0; n as usize], vec![1.0; n as usize], t)
    }

    /// c_i, 1-based.
    pub fn c(&self, i: u32) -> f64 {
        self.c[(i - 1) as usize]
    }

    /// b_i, 1-based.
    pub fn b(&self, i: u32) -> f64 {
        self.b[(i - 1) as usize]
    }

    pub fn supports_rank(&self, n: u32) -> bool {
        self.c.len() >= n as usize && self.b.len() >= n as usize
    }
}

const EMPTY: u32 = u32::MAX;

/// A single-color tiling: the domino list plus a face -> domino index grid
/// for O(1) neighborhood queries.
#[derive(Debug, Clone)]
pub struct Tiling {
    rank: u32,
    dominoes: Vec<Domino>,
    grid: Vec<u32>,
}

#[inline]
fn grid_index(rank: u32, f: Face) -> Option<usize> {
    let n = rank as i32;
    if f.u < -n || f.u >= n || f.v < -n || f.v >= n {
        return None;
    }
    Some(((f.v + n) as usize) * (2 * rank as usize) + (f.u + n) as usize)
}

impl Tiling {
    pub fn new(rank: u32, dominoes: Vec<Domino>) -> Self {
        let mut grid = vec![EMPTY; 4 * (rank as usize) * (rank as usize)];
        for (id, dom) in dominoes.iter().enumerate() {
            let (a, b) = dom.faces();
            for f in [a, b] {
                if let Some(ix) = grid_index(rank, f) {
                    grid[ix] = id as u32;
                }
            }
        }
        Tiling { rank, dominoes, grid }
    }

    pub fn empty(rank: u32) -> Self {
        Tiling::new(rank, Vec::new())
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    /// The domino covering `f`, if any.
    pub fn domino_at(&self, f: Face) -> Option<Domino> {
        let ix = grid_index(self.rank, f)?;
        let id = self.grid[ix];
        if id == EMPTY {
            None
        } else {
            Some(self.dominoes[id as usize])
        }
    }

    /// True iff a horizontal domino is anchored (left cell) at `f`.
    pub fn horizontal_at(&self, f: Face) -> bool {
        matches!(self.domino_at(f),
            Some(d) if d.orient == Orientation::Horizontal && d.anchor == f)
    }

    /// True iff a vertical domino is anchored (bottom cell) at `f`.
    pub fn vertical_at(&self, f: Face) -> bool {
        matches!(self.domino_at(f),
            Some(d) if d.orient == Orientation::Vertical && d.anchor == f)
    }

    /// Dominoes sorted by (v, u, orientation); a canonical identity key.
    pub fn canonical_key(&self) -> Vec<(i32, i32, Orientation)> {
        let mut key: Vec<_> = self
            .dominoes
            .iter()
            .map(|d| (d.anchor.v, d.anchor.u, d.orient))
            .collect();
        key.sort_unstable();
        key
    }
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.canonical_key() == other.canonical_key()
    }
}
impl Eq for Tiling {}

/// Exact-cover check: every face of the rank-N diamond covered exactly once,
/// and no domino sticks out. Returns false rather than erroring.
pub fn validate(t: &Tiling) -> bool {
    let mut seen = vec![0u8; 4 * (t.rank as usize) * (t.rank as usize)];
    for dom in &t.dominoes {
        if !dom.in_diamond(t.rank) {
            return false;
        }
        let (a, b) = dom.faces();
        for f in [a, b] {
            match grid_index(t.rank, f) {
                Some(ix) => {
                    if seen[ix] != 0 {
                        return false;
                    }
                    seen[ix] = 1;
                }
                None => return false,
            }
        }
    }
    t.dominoes.len() == (t.rank * (t.rank + 1)) as usize
}

/// Weight of one domino: horizontal on diagonal 2m-1 (left cell) weighs c_m,
/// on diagonal 2m weighs b_{N-m+1}; vertical dominoes weigh 1.
pub fn domino_weight(dom: Domino, w: &WeightConfig, rank: u32) -> Result<f64> {
    if !dom.in_diamond(rank) {
        return Err(Error::invariant(format!(
            "domino at ({},{}) sticks out of the rank-{} diamond",
            dom.anchor.u, dom.anchor.v, rank
        )));
    }
    match dom.orient {
        Orientation::Vertical => Ok(1.0),
        Orientation::Horizontal => {
            let d = diagonal_unchecked(dom.anchor, rank);
            if d <= 0 {
                return Err(Error::invariant(format!(
                    "horizontal domino with left cell on diagonal {d}"
                )));
            }
            let d = d as u32;
            if d % 2 == 1 {
                Ok(w.c(d.div_ceil(2)))
            } else {
                Ok(w.b(rank - d / 2 + 1))
            }
        }
    }
}

/// Product of the domino weights.
pub fn tiling_weight(t: &Tiling, w: &WeightConfig) -> Result<f64> {
    if !validate(t) {
        return Err(Error::invariant("tiling_weight on an invalid tiling"));
    }
    let mut acc = 1.0;
    for dom in &t.dominoes {
        acc *= domino_weight(*dom, w, t.rank)?;
    }
    Ok(acc)
}

/// Count the interactions between a smaller-color tiling `ta` and a
/// larger-color tiling `tb` of the same rank.
///
/// The four superimposed configurations, each anchored at a white face w of
/// the rank's checkerboard:
///   I.   smaller horizontal at w, larger horizontal at w;
///   II.  smaller horizontal at w, larger horizontal at w - e_x;
///   III. smaller horizontal at w, larger vertical at w;
///   IV.  smaller vertical at w, larger horizontal at w - e_x.
/// The order of the arguments matters.
pub fn count_interactions(ta: &Tiling, tb: &Tiling) -> Result<u64> {
    if ta.rank != tb.rank {
        return Err(Error::invariant(format!(
            "rank mismatch: {} vs {}",
            ta.rank, tb.rank
        )));
    }
    let conv = ParityConvention::for_rank(ta.rank);
    let mut count = 0u64;
    for w in faces_of_rank(ta.rank) {
        if !conv.is_white(w) {
            continue;
        }
        if ta.horizontal_at(w) {
            if tb.horizontal_at(w) {
                count += 1;
            }
            if tb.horizontal_at(w.west()) {
                count += 1;
            }
            if tb.vertical_at(w) {
                count += 1;
            }
        }
        if ta.vertical_at(w) && tb.horizontal_at(w.west()) {
            count += 1;
        }
    }
    Ok(count)
}

/// An ordered k-tuple of same-rank tilings; smaller index = smaller color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTiling {
    rank: u32,
    colors: Vec<Tiling>,
}

impl KTiling {
    pub fn new(rank: u32, colors: Vec<Tiling>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::config("a k-tiling needs at least one color"));
        }
        if colors.iter().any(|t| t.rank() != rank) {
            return Err(Error::invariant("k-tiling colors must share one rank"));
        }
        Ok(KTiling { rank, colors })
    }

    /// The empty k-tiling of rank 0.
    pub fn empty(k: u32) -> Self {
        assert!(k >= 1, "a k-tiling needs at least one color");
        KTiling { rank: 0, colors: vec![Tiling::empty(0); k as usize] }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn k(&self) -> u32 {
        self.colors.len() as u32
    }

    pub fn color(&self, l: usize) -> &Tiling {
        &self.colors[l]
    }

    pub fn colors(&self) -> &[Tiling] {
        &self.colors
    }

    pub fn is_valid(&self) -> bool {
        self.colors.iter().all(validate)
    }

    /// Total interactions over all ordered color pairs a < b.
    pub fn total_interactions(&self) -> Result<u64> {
        let k = self.colors.len();
        let mut total = 0;
        for a in 0..k {
            for b in (a + 1)..k {
                total += count_interactions(&self.colors[a], &self.colors[b])?;
            }
        }
        Ok(total)
    }

    pub fn canonical_key(&self) -> Vec<Vec<(i32, i32, Orientation)>> {
        self.colors.iter().map(Tiling::canonical_key).collect()
    }
}

/// Weight of a k-tiling: t^(total interactions) times the product of the
/// per-color tiling weights.
pub fn ktiling_weight(kt: &KTiling, w: &WeightConfig) -> Result<f64> {
    let mut acc = 1.0;
    for t in &kt.colors {
        acc *= tiling_weight(t, w)?;
    }
    let e = kt.total_interactions()?;
    Ok(acc * w.t.powi(e as i32))
}

// --- dump format -----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DumpDomino {
    u: i32,
    v: i32,
    o: Orientation,
}

/// The on-disk JSON schema for k-tilings.
#[derive(Debug, Serialize, Deserialize)]
pub struct Dump {
    rank: u32,
    colors: u32,
    tilings: Vec<Vec<DumpDomino>>,
}

impl KTiling {
    /// Serialize; dominoes are emitted sorted by (color, v, u).
    pub fn to_dump_json(&self) -> String {
        let tilings = self
            .colors
            .iter()
            .map(|t| {
                let mut doms = t.dominoes().to_vec();
                doms.sort_unstable_by_key(|d| (d.anchor.v, d.anchor.u));
                doms.into_iter()
                    .map(|d| DumpDomino { u: d.anchor.u, v: d.anchor.v, o: d.orient })
                    .collect()
            })
            .collect();
        let dump = Dump { rank: self.rank, colors: self.k(), tilings };
        serde_json::to_string(&dump).expect("dump serialization cannot fail")
    }

    /// Parse a dump; dominoes are accepted in any order. Each color must be a
    /// valid tiling of the stated rank.
    pub fn from_dump_json(s: &str) -> Result<Self> {
        let dump: Dump = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if dump.tilings.len() != dump.colors as usize {
            return Err(Error::Parse(format!(
                "dump says {} colors but carries {} tilings",
                dump.colors,
                dump.tilings.len()
            )));
        }
        let colors: Vec<Tiling> = dump
            .tilings
            .into_iter()
            .map(|doms| {
                Tiling::new(
                    dump.rank,
                    doms.into_iter()
                        .map(|d| Domino { anchor: Face::new(d.u, d.v), orient: d.o })
                        .collect(),
                )
            })
            .collect();
        for (l, t) in colors.iter().enumerate() {
            if !validate(t) {
                return Err(Error::Parse(format!("color {} is not a valid tiling", l + 1)));
            }
        }
        KTiling::new(dump.rank, colors)
    }
}

// --- fixtures shared by tests across the crate ------------------------------

/// The rank-1 tiling of two vertical dominoes.
pub fn rank1_vertical() -> Tiling {
    Tiling::new(
        1,
        vec![Domino::vertical(Face::new(-1, -1)), Domino::vertical(Face::new(0, -1))],
    )
}

/// The rank-1 tiling of two horizontal dominoes.
pub fn rank1_horizontal() -> Tiling {
    Tiling::new(
        1,
        vec![Domino::horizontal(Face::new(-1, -1)), Domino::horizontal(Face::new(-1, 0))],
    )
}
