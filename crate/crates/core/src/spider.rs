//! The generalized spider move on cell weights and machine verification of
//! its local partition-function relations, plus the per-diagonal
//! creation/destruction count on double tilings.
//!
//! A cell is a 4-cycle of the dimer graph: four faces around an interior
//! lattice point, with edge weights a (top), b (right), c (bottom), d
//! (left). Boundary conditions describe which of the four faces are matched
//! into the cell; exactly six in/out patterns are possible.

use crate::tiling::{KTiling, Tiling};
use crate::{Error, Result};
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Edge weights of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWeights {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl CellWeights {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        if !a.is_positive() || !b.is_positive() || !c.is_positive() || !d.is_positive() {
            return Err(Error::config("cell weights must be positive"));
        }
        Ok(CellWeights { a, b, c, d })
    }

    pub fn unit() -> Self {
        let one = BigRational::one;
        CellWeights { a: one(), b: one(), c: one(), d: one() }
    }

    /// Delta = ac + bd.
    pub fn delta(&self) -> BigRational {
        &self.a * &self.c + &self.b * &self.d
    }

    /// Gamma = (ac + bd) / (act + bd).
    pub fn gamma(&self, t: &BigRational) -> BigRational {
        self.delta() / (&self.a * &self.c * t + &self.b * &self.d)
    }
}

/// The spider move on weights: a' = c/Delta, b' = d/Delta, c' = a/Delta,
/// d' = b/Delta.
pub fn transform(cw: &CellWeights) -> CellWeights {
    let delta = cw.delta();
    CellWeights {
        a: &cw.c / &delta,
        b: &cw.d / &delta,
        c: &cw.a / &delta,
        d: &cw.b / &delta,
    }
}

/// One color's boundary condition, named by the shuffle move it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bc {
    Creation,
    Destruction,
    Right,
    Left,
    Up,
    Down,
}

pub const ALL_BC: [Bc; 6] =
    [Bc::Creation, Bc::Destruction, Bc::Right, Bc::Left, Bc::Up, Bc::Down];

impl std::fmt::Display for Bc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Bc::Creation => "c",
            Bc::Destruction => "d",
            Bc::Right => "->",
            Bc::Left => "<-",
            Bc::Up => "up",
            Bc::Down => "down",
        };
        write!(f, "{s}")
    }
}

/// Is the pair in the creation set C?
pub fn in_c(alpha: Bc, beta: Bc) -> bool {
    let low = |x: Bc| matches!(x, Bc::Creation | Bc::Left | Bc::Down);
    (alpha == Bc::Creation && low(beta)) || (low(alpha) && beta == Bc::Creation)
}

/// Is the pair in the destruction set D?
pub fn in_d(alpha: Bc, beta: Bc) -> bool {
    let low = |x: Bc| matches!(x, Bc::Destruction | Bc::Left | Bc::Down);
    (alpha == Bc::Destruction && low(beta)) || (low(alpha) && beta == Bc::Destruction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

// Edge bits. Before a move only the four cell edges exist; after it the cell
// also has the four unit-weight legs to the decoration vertices.
const EA: u16 = 1; // top
const EB: u16 = 2; // right
const EC: u16 = 4; // bottom
const ED: u16 = 8; // left
const L_NW: u16 = 16;
const L_NE: u16 = 32;
const L_SE: u16 = 64;
const L_SW: u16 = 128;

fn configs(bc: Bc, side: Side) -> &'static [u16] {
    match side {
        Side::Before => match bc {
            Bc::Creation => &[0],
            Bc::Destruction => &[EA | EC, EB | ED],
            Bc::Right => &[ED],
            Bc::Left => &[EB],
            Bc::Up => &[EC],
            Bc::Down => &[EA],
        },
        Side::After => match bc {
            Bc::Creation => &[EA | EC, EB | ED],
            Bc::Destruction => &[L_NW | L_NE | L_SE | L_SW],
            Bc::Right => &[EB | L_SW | L_NW],
            Bc::Left => &[ED | L_NE | L_SE],
            Bc::Up => &[EA | L_SW | L_SE],
            Bc::Down => &[EC | L_NW | L_NE],
        },
    }
}

fn config_weight(cfg: u16, cw: &CellWeights) -> BigRational {
    let mut w = BigRational::one();
    if cfg & EA != 0 {
        w *= &cw.a;
    }
    if cfg & EB != 0 {
        w *= &cw.b;
    }
    if cfg & EC != 0 {
        w *= &cw.c;
    }
    if cfg & ED != 0 {
        w *= &cw.d;
    }
    w
}

/// Local interactions of a (blue, red) configuration pair. Before the move:
/// both colors on the top edge; blue right with red bottom; blue top with
/// the red NW vertex matched outward. After it: both on the bottom edge;
/// blue bottom with red left; blue NE leg with red top.
fn pattern_count(blue: u16, red: u16, side: Side) -> u32 {
    let mut n = 0;
    match side {
        Side::Before => {
            if blue & EA != 0 && red & EA != 0 {
                n += 1;
            }
            if blue & EB != 0 && red & EC != 0 {
                n += 1;
            }
            if blue & EA != 0 && red & (EA | ED) == 0 {
                n += 1;
            }
        }
        Side::After => {
            if blue & EC != 0 && red & EC != 0 {
                n += 1;
            }
            if blue & EC != 0 && red & ED != 0 {
                n += 1;
            }
            if blue & L_NE != 0 && red & EA != 0 {
                n += 1;
            }
        }
    }
    n
}

fn rational_pow(t: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= t;
    }
    acc
}

/// Two-color local partition function of a cell: the sum over the blue and
/// red configurations compatible with the boundary conditions of the product
/// of occupied-edge weights times t^(local interactions). `cw` is read as
/// the edge weights of the queried side.
pub fn local_z(cw: &CellWeights, alpha: Bc, beta: Bc, side: Side, t: &BigRational) -> BigRational {
    let mut z = BigRational::zero();
    for &blue in configs(alpha, side) {
        for &red in configs(beta, side) {
            let e = pattern_count(blue, red, side);
            z += config_weight(blue, cw) * config_weight(red, cw) * rational_pow(t, e);
        }
    }
    z
}

/// One-color local partition function (no interactions).
pub fn local_z_one(cw: &CellWeights, bc: Bc, side: Side) -> BigRational {
    configs(bc, side).iter().map(|&cfg| config_weight(cfg, cw)).sum()
}

/// Result of checking all 36 boundary-condition relations for one draw of
/// weights and t.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    /// (alpha, beta, lhs, rhs, pass): lhs is the before-side partition
    /// function, rhs the after side scaled by Delta^2 Gamma^(+-1).
    pub relations: Vec<(Bc, Bc, BigRational, BigRational, bool)>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.4)
    }

    pub fn first_failure(&self) -> Option<&(Bc, Bc, BigRational, BigRational, bool)> {
        self.relations.iter().find(|r| !r.4)
    }
}

/// Check Z_{ab} = Delta^2 Gamma Z'_{ab} on C, Delta^2 Gamma^(-1) Z'_{ab} on
/// D, and Delta^2 Z'_{ab} otherwise, exactly, for all 36 pairs.
pub fn verify_lemma(cw: &CellWeights, t: &BigRational) -> Result<LemmaReport> {
    if t.is_negative() {
        return Err(Error::config("t must be >= 0"));
    }
    let after = transform(cw);
    let delta = cw.delta();
    let gamma = cw.gamma(t);
    let delta2 = &delta * &delta;
    let mut relations = Vec::with_capacity(36);
    for alpha in ALL_BC {
        for beta in ALL_BC {
            let lhs = local_z(cw, alpha, beta, Side::Before, t);
            let z_after = local_z(&after, alpha, beta, Side::After, t);
            let factor = if in_c(alpha, beta) {
                &delta2 * &gamma
            } else if in_d(alpha, beta) {
                &delta2 / &gamma
            } else {
                delta2.clone()
            };
            let rhs = factor * z_after;
            let pass = lhs == rhs;
            relations.push((alpha, beta, lhs, rhs, pass));
        }
    }
    Ok(LemmaReport { relations })
}

// --- boundary conditions read off an actual tiling -----------------------------

/// Interior lattice points that are cells of the rank-`n` step, i.e. the
/// centers of the 4-cycles where spider moves act: |px| + |py| <= n with
/// px + py = n (mod 2).
pub fn cells_of_rank(n: u32) -> Vec<(i32, i32)> {
    let n_i = n as i32;
    let mut out = Vec::new();
    for py in -n_i..=n_i {
        for px in -n_i..=n_i {
            if px.abs() + py.abs() <= n_i && (px + py - n_i).rem_euclid(2) == 0 {
                out.push((px, py));
            }
        }
    }
    out
}

/// The boundary condition of one color at the cell centered on lattice
/// point (px, py): which of the four cell edges its dimers occupy.
pub fn cell_bc(t: &Tiling, cell: (i32, i32)) -> Result<Bc> {
    let (px, py) = cell;
    let nw = crate::geometry::Face::new(px - 1, py);
    let sw = crate::geometry::Face::new(px - 1, py - 1);
    let se = crate::geometry::Face::new(px, py - 1);
    let a = t.horizontal_at(nw);
    let b = t.vertical_at(se);
    let c = t.horizontal_at(sw);
    let d = t.vertical_at(sw);
    match (a, b, c, d) {
        (true, false, true, false) | (false, true, false, true) => Ok(Bc::Destruction),
        (true, false, false, false) => Ok(Bc::Down),
        (false, false, true, false) => Ok(Bc::Up),
        (false, true, false, false) => Ok(Bc::Left),
        (false, false, false, true) => Ok(Bc::Right),
        (false, false, false, false) => Ok(Bc::Creation),
        _ => Err(Error::invariant(format!(
            "impossible edge set at cell ({px},{py}): a={a} b={b} c={c} d={d}"
        ))),
    }
}

/// Local interaction count of the (smaller, larger) pair at one cell, read
/// off the actual configurations; summing this over all cells reproduces the
/// domino interaction count.
pub fn cell_interactions(smaller: &Tiling, larger: &Tiling, cell: (i32, i32)) -> u32 {
    let (px, py) = cell;
    let nw = crate::geometry::Face::new(px - 1, py);
    let sw = crate::geometry::Face::new(px - 1, py - 1);
    let se = crate::geometry::Face::new(px, py - 1);
    let mut n = 0;
    let blue_a = smaller.horizontal_at(nw);
    if blue_a && larger.horizontal_at(nw) {
        n += 1;
    }
    if smaller.vertical_at(se) && larger.horizontal_at(sw) {
        n += 1;
    }
    if blue_a && !larger.horizontal_at(nw) && !larger.vertical_at(sw) {
        n += 1;
    }
    n
}

/// For a 2-tiling: along every SW-NE diagonal of cells, the number of cells
/// with boundary-condition pair in C minus those in D must be exactly 1.
pub fn diagonal_count_check(kt: &KTiling) -> Result<bool> {
    if kt.k() != 2 {
        return Err(Error::config("the diagonal count is defined for 2-tilings"));
    }
    if !kt.is_valid() {
        return Err(Error::invariant("diagonal_count_check on an invalid 2-tiling"));
    }
    let n = kt.rank();
    // Diagonals indexed by py - px.
    let mut tallies: std::collections::BTreeMap<i32, i64> = std::collections::BTreeMap::new();
    for cell in cells_of_rank(n) {
        let alpha = cell_bc(kt.color(0), cell)?;
        let beta = cell_bc(kt.color(1), cell)?;
        let tally = tallies.entry(cell.1 - cell.0).or_insert(0);
        if in_c(alpha, beta) {
            *tally += 1;
        } else if in_d(alpha, beta) {
            *tally -= 1;
        }
    }
    Ok(tallies.values().all(|&v| v == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::tiling::{count_interactions, rank1_horizontal, rank1_vertical, WeightConfig};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn transform_examples() {
        let unit = CellWeights::unit();
        assert_eq!(unit.delta(), rat(2));
        let u2 = transform(&unit);
        assert_eq!(u2.a, ratio(1, 2));
        assert_eq!(u2.d, ratio(1, 2));
        let cw = CellWeights::new(rat(2), rat(3), rat(5), rat(7)).unwrap();
        assert_eq!(cw.delta(), rat(31));
        assert_eq!(transform(&cw).a, ratio(5, 31));
    }

    #[test]
    fn double_transform_scaling() {
        let mut s = RngStream::new(9).substream(&[1]);
        for _ in 0..50 {
            let mut next = || rat(1 + s.next_below(20) as i64) / rat(1 + s.next_below(9) as i64);
            let cw = CellWeights::new(next(), next(), next(), next()).unwrap();
            let once = transform(&cw);
            let twice = transform(&once);
            // a'' * Delta' * Delta = a, and likewise around the cell.
            let scale = once.delta() * cw.delta();
            assert_eq!(&twice.a * &scale, cw.a);
            assert_eq!(&twice.b * &scale, cw.b);
            assert_eq!(&twice.c * &scale, cw.c);
            assert_eq!(&twice.d * &scale, cw.d);
        }
    }

    #[test]
    fn one_color_creation_counts_both_fillings() {
        assert_eq!(local_z_one(&CellWeights::unit(), Bc::Creation, Side::After), rat(2));
        // Each directional condition is a single dimer; destruction sums the
        // two in-cell matchings.
        assert_eq!(local_z_one(&CellWeights::unit(), Bc::Right, Side::Before), rat(1));
        assert_eq!(local_z_one(&CellWeights::unit(), Bc::Destruction, Side::Before), rat(2));
    }

    #[test]
    fn worked_destruction_down_identity() {
        // Before-side numerator for (d, down) is a^2 c t + a b d, and the
        // relation with factor Delta^2 / Gamma reduces to c' = a / Delta.
        let cw = CellWeights::new(rat(2), rat(3), rat(5), rat(7)).unwrap();
        let t = ratio(1, 2);
        let lhs = local_z(&cw, Bc::Destruction, Bc::Down, Side::Before, &t);
        let expect = &cw.a * &cw.a * &cw.c * &t + &cw.a * &cw.b * &cw.d;
        assert_eq!(lhs, expect);
        let after = transform(&cw);
        let z_after = local_z(&after, Bc::Destruction, Bc::Down, Side::After, &t);
        assert_eq!(z_after, after.c);
        let delta2 = cw.delta() * cw.delta();
        assert_eq!(lhs, delta2 / cw.gamma(&t) * z_after);
    }

    #[test]
    fn unit_weights_t1_reduce_to_four_z() {
        // Gamma = 1 at t = 1, so all 36 relations read Z = 4 Z'.
        assert_eq!(CellWeights::unit().gamma(&rat(1)), rat(1));
        let report = verify_lemma(&CellWeights::unit(), &rat(1)).unwrap();
        assert!(report.all_pass());
        let after = transform(&CellWeights::unit());
        for alpha in ALL_BC {
            for beta in ALL_BC {
                let lhs = local_z(&CellWeights::unit(), alpha, beta, Side::Before, &rat(1));
                let rhs = local_z(&after, alpha, beta, Side::After, &rat(1));
                assert_eq!(lhs, rat(4) * rhs);
            }
        }
    }

    #[test]
    fn gamma_uniform_is_two_over_one_plus_t() {
        for t in [rat(0), ratio(1, 2), rat(2), rat(7)] {
            let g = CellWeights::unit().gamma(&t);
            assert_eq!(g, rat(2) / (rat(1) + &t));
        }
    }

    #[test]
    fn thirty_six_relations_hold_on_random_draws() {
        let mut s = RngStream::new(17).substream(&[7]);
        for trial in 0..100 {
            let mut next = || rat(1 + s.next_below(12) as i64) / rat(1 + s.next_below(7) as i64);
            let cw = CellWeights::new(next(), next(), next(), next()).unwrap();
            for t in [rat(0), ratio(1, 2), rat(2)] {
                let report = verify_lemma(&cw, &t).unwrap();
                assert!(
                    report.all_pass(),
                    "trial {trial}: first failure {:?}",
                    report.first_failure()
                );
            }
        }
    }

    #[test]
    fn t_one_factorizes_into_one_color_products() {
        let mut s = RngStream::new(23).substream(&[3]);
        for _ in 0..20 {
            let mut next = || rat(1 + s.next_below(9) as i64) / rat(1 + s.next_below(5) as i64);
            let cw = CellWeights::new(next(), next(), next(), next()).unwrap();
            for alpha in ALL_BC {
                for beta in ALL_BC {
                    for side in [Side::Before, Side::After] {
                        assert_eq!(
                            local_z(&cw, alpha, beta, side, &rat(1)),
                            local_z_one(&cw, alpha, side) * local_z_one(&cw, beta, side)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cell_layout_counts() {
        assert_eq!(cells_of_rank(0).len(), 1);
        assert_eq!(cells_of_rank(1).len(), 4);
        assert_eq!(cells_of_rank(2).len(), 9);
        assert_eq!(cells_of_rank(3).len(), 16);
    }

    #[test]
    fn rank1_cell_bcs() {
        let h = rank1_horizontal();
        assert_eq!(cell_bc(&h, (0, 1)).unwrap(), Bc::Up);
        assert_eq!(cell_bc(&h, (0, -1)).unwrap(), Bc::Down);
        assert_eq!(cell_bc(&h, (-1, 0)).unwrap(), Bc::Creation);
        assert_eq!(cell_bc(&h, (1, 0)).unwrap(), Bc::Creation);
        let v = rank1_vertical();
        assert_eq!(cell_bc(&v, (-1, 0)).unwrap(), Bc::Left);
        assert_eq!(cell_bc(&v, (1, 0)).unwrap(), Bc::Right);
        assert_eq!(cell_bc(&v, (0, 1)).unwrap(), Bc::Creation);
        assert_eq!(cell_bc(&v, (0, -1)).unwrap(), Bc::Creation);
    }

    #[test]
    fn cell_interactions_sum_to_domino_count() {
        // Exhaustive at ranks 1 and 2, plus the rank-3 worked example pairs.
        for rank in [1u32, 2] {
            for a in crate::oracle::enumerate_tilings(rank).unwrap() {
                for b in crate::oracle::enumerate_tilings(rank).unwrap() {
                    let total: u32 =
                        cells_of_rank(rank).iter().map(|&c| cell_interactions(&a, &b, c)).sum();
                    assert_eq!(total as u64, count_interactions(&a, &b).unwrap());
                }
            }
        }
        let ts = [
            crate::partitions::fixtures::example3_blue(),
            crate::partitions::fixtures::example3_red(),
            crate::partitions::fixtures::example3_green(),
        ];
        for a in &ts {
            for b in &ts {
                let total: u32 =
                    cells_of_rank(3).iter().map(|&c| cell_interactions(a, b, c)).sum();
                assert_eq!(total as u64, count_interactions(a, b).unwrap());
            }
        }
    }

    #[test]
    fn diagonal_count_exhaustive_small_ranks() {
        for rank in [1u32, 2] {
            for kt in crate::oracle::enumerate_ktilings(rank, 2).unwrap() {
                assert!(diagonal_count_check(&kt).unwrap());
            }
        }
    }

    #[test]
    fn diagonal_count_on_sampled_tilings() {
        let w = WeightConfig::uniform(6, 0.5).unwrap();
        for seed in 0..20u64 {
            let kt = crate::shuffle::sample(6, 2, &w, seed).unwrap();
            assert!(diagonal_count_check(&kt).unwrap());
        }
    }

    #[test]
    fn diagonal_count_rejects_wrong_k() {
        let kt = KTiling::new(1, vec![rank1_vertical()]).unwrap();
        assert!(diagonal_count_check(&kt).is_err());
    }
}
