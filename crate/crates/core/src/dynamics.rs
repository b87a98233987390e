//! The colored interlacing-particle Markov chain: one parallel update grows
//! the array by one rank. Forced moves preserve interlacing; free particles
//! jump with a t-weighted Bernoulli law. This is an independent
//! implementation of the same measure as the shuffle, coupled to it
//! draw-for-draw through the keyed rng.

use crate::partitions::{array_to_ktiling, ColoredParticleArray};
use crate::rng::RngStream;
use crate::shuffle::horizontal_probability;
use crate::tiling::{KTiling, WeightConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    ForcedJump,
    ForcedStay,
    Free,
}

/// Classify particle i (1-based) of a level row after step one has set
/// ytilde: a particle one step under its own ytilde must jump, a particle
/// one step under the next-higher ytilde must stay.
pub fn forced_move(x_row: &[i64], ytilde: &[i64], i: usize) -> Result<MoveKind> {
    let n = x_row.len();
    if i < 1 || i > n {
        return Err(Error::invariant(format!("particle index {i} out of 1..={n}")));
    }
    let x = x_row[i - 1];
    let jump = i <= ytilde.len() && x == ytilde[i - 1] - 1;
    let stay = i >= 2 && i - 1 <= ytilde.len() && x == ytilde[i - 2] - 1;
    match (jump, stay) {
        (true, true) => Err(Error::invariant(
            "particle simultaneously forced to jump and stay: corrupt state",
        )),
        (true, false) => Ok(MoveKind::ForcedJump),
        (false, true) => Ok(MoveKind::ForcedStay),
        (false, false) => Ok(MoveKind::Free),
    }
}

/// ytilde_j with the boundary convention ytilde_n = -n (q-coordinates).
fn ytilde_at(ytilde: &[i64], j: usize, n: usize) -> i64 {
    if j <= ytilde.len() {
        ytilde[j - 1]
    } else {
        debug_assert_eq!(j, n);
        -(n as i64)
    }
}

/// The creation exponent of free particle i of color l (0-based) at level n:
/// colors m > l with some j such that ytilde_j^(m) <= x_i <= x_j^(m), plus
/// colors m < l with some j such that ytilde_j^(m) <= x_i + 1 <= x_j^(m).
pub fn t_power(
    x_rows: &[Vec<i64>],
    ytilde_rows: &[Vec<i64>],
    n: usize,
    l: usize,
    i: usize,
) -> u32 {
    let x = x_rows[l][i - 1];
    let mut count = 0u32;
    for (m, (xm, ym)) in x_rows.iter().zip(ytilde_rows.iter()).enumerate() {
        if m == l {
            continue;
        }
        let target = if m > l { x } else { x + 1 };
        let hit = (1..=n).any(|j| ytilde_at(ym, j, n) <= target && target <= xm[j - 1]);
        if hit {
            count += 1;
        }
    }
    count
}

/// One parallel update: set ytilde^(n) = x^(n-1), resolve forced moves, then
/// let each free particle of color l at level n jump with probability
/// c_n b_{N-n+2} t^e / (1 + c_n b_{N-n+2} t^e). Returns the rank-(N+1) array.
pub fn parallel_update(
    arr: &ColoredParticleArray,
    w: &WeightConfig,
    rng: &RngStream,
) -> Result<ColoredParticleArray> {
    let old_rank = arr.rank;
    let new_rank = old_rank + 1;
    if !w.supports_rank(new_rank) {
        return Err(Error::config(format!(
            "weights cover rank {} but the update needs rank {}",
            w.c.len(),
            new_rank
        )));
    }
    let k = arr.colors as usize;
    let mut x_new: Vec<Vec<Vec<i64>>> = vec![Vec::with_capacity(new_rank as usize); k];
    let mut y_new: Vec<Vec<Vec<i64>>> = vec![Vec::with_capacity(new_rank as usize); k];
    for n in 1..=new_rank as usize {
        let x_old: Vec<Vec<i64>> = (0..k)
            .map(|l| {
                if n <= old_rank as usize {
                    arr.x[l][n - 1].clone()
                } else {
                    (1..=n as i64).map(|i| -i).collect()
                }
            })
            .collect();
        let ytilde: Vec<Vec<i64>> = (0..k)
            .map(|l| if n >= 2 { arr.x[l][n - 2].clone() } else { Vec::new() })
            .collect();
        for l in 0..k {
            let mut row = x_old[l].clone();
            for i in 1..=n {
                match forced_move(&x_old[l], &ytilde[l], i)? {
                    MoveKind::ForcedJump => row[i - 1] += 1,
                    MoveKind::ForcedStay => {}
                    MoveKind::Free => {
                        let e = t_power(&x_old, &ytilde, n, l, i);
                        let p = horizontal_probability(w, old_rank, n as u32, e);
                        let key = [old_rank as i64, l as i64, n as i64, x_old[l][i - 1]];
                        if rng.draw_bernoulli(&key, p) {
                            row[i - 1] += 1;
                        }
                    }
                }
            }
            x_new[l].push(row);
            y_new[l].push(ytilde[l].clone());
        }
    }
    let out = ColoredParticleArray { rank: new_rank, colors: arr.colors, x: x_new, y: y_new };
    if !out.is_valid() {
        return Err(Error::invariant("parallel update broke interlacing"));
    }
    Ok(out)
}

/// Grow a particle array from the empty configuration.
pub fn sample_array(n: u32, k: u32, w: &WeightConfig, seed: u64) -> Result<ColoredParticleArray> {
    if k == 0 {
        return Err(Error::config("k must be at least 1"));
    }
    let rng = RngStream::new(seed);
    let mut arr = ColoredParticleArray::vacuum(0, k);
    for _ in 0..n {
        arr = parallel_update(&arr, w, &rng)?;
    }
    Ok(arr)
}

/// The particle-dynamics sampler mapped back to a k-tiling.
pub fn sample(n: u32, k: u32, w: &WeightConfig, seed: u64) -> Result<KTiling> {
    array_to_ktiling(&sample_array(n, k, w, seed)?)
}
