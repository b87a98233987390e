//! Partitions, Maya diagrams, interlacing, the tiling <-> partition <->
//! particle bijections, and the partition-side interaction counter.
//!
//! Particle positions live on Z + 1/2; internally we use the integer
//! coordinate q = x - 1/2, which for a face of the diamond equals its
//! lower-left corner u. The i-th particle of a partition sits at
//! q = lambda_i - i.

use crate::geometry::{Face, ParityConvention};
use crate::tiling::{classify, validate, CompassType, Domino, KTiling, Tiling};
use crate::{Error, Result};

/// An integer partition; weakly decreasing parts, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::config(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// The i-th part, 1-based, zero beyond the last part.
    pub fn part(&self, i: usize) -> i64 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1] as i64
        } else {
            0
        }
    }

    /// Diagonal value lambda_i - i of row i (1-based); the q-coordinate of
    /// the i-th Maya particle.
    pub fn diag(&self, i: usize) -> i64 {
        self.part(i) - i as i64
    }
}

/// Transpose of the Young diagram.
pub fn conjugate(p: &Partition) -> Partition {
    let mut out = Vec::new();
    let mut j = 1u32;
    loop {
        let count = p.parts.iter().filter(|&&x| x >= j).count() as u32;
        if count == 0 {
            break;
        }
        out.push(count);
        j += 1;
    }
    Partition { parts: out }
}

/// lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...
pub fn interlaces(lambda: &Partition, mu: &Partition) -> bool {
    let n = lambda.len().max(mu.len()) + 1;
    for i in 1..=n {
        if lambda.part(i) < mu.part(i) || mu.part(i) < lambda.part(i + 1) {
            return false;
        }
    }
    true
}

/// Interlacing of the conjugates; equivalently lambda/mu is a vertical strip.
pub fn co_interlaces(lambda: &Partition, mu: &Partition) -> bool {
    interlaces(&conjugate(lambda), &conjugate(mu))
}

/// Maya diagram: the particle positions of a partition on Z + 1/2, stored in
/// q = x - 1/2 coordinates for the non-vacuum rows (descending). Rows beyond
/// the stored prefix sit at their vacuum positions q = -i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MayaDiagram {
    pub particles: Vec<i64>,
}

impl MayaDiagram {
    /// Doubled half-integer positions 2x = 2q + 1 of the first `count`
    /// particles (continuing into the vacuum), descending.
    pub fn positions_doubled(&self, count: usize) -> Vec<i64> {
        (1..=count)
            .map(|i| {
                let q = if i <= self.particles.len() {
                    self.particles[i - 1]
                } else {
                    -(i as i64)
                };
                2 * q + 1
            })
            .collect()
    }

    /// Is position q occupied by a particle?
    pub fn occupied(&self, q: i64) -> bool {
        let l = self.particles.len() as i64;
        if q < -l {
            return true; // vacuum tail
        }
        self.particles.contains(&q)
    }
}

/// Particle encoding x_i = lambda_i - i + 1/2 (q_i = lambda_i - i).
pub fn maya(p: &Partition) -> MayaDiagram {
    MayaDiagram {
        particles: (1..=p.len()).map(|i| p.diag(i)).collect(),
    }
}

/// Inverse of `maya`: recover the partition from non-vacuum particles.
pub fn maya_to_partition(m: &MayaDiagram) -> Result<Partition> {
    let parts: Vec<u32> = m
        .particles
        .iter()
        .enumerate()
        .map(|(ix, &q)| {
            u32::try_from(q + ix as i64 + 1)
                .map_err(|_| Error::invariant(format!("negative part from particle q={q}")))
        })
        .collect::<Result<_>>()?;
    Partition::new(parts)
}

/// The interlaced sequence of one color of a rank-N tiling:
/// mu^(1) <= lambda^(1) >=' mu^(2) <= ... <= lambda^(N) >=' mu^(N+1),
/// with mu^(1) = mu^(N+1) = empty forced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterlacedSequence {
    pub rank: u32,
    /// lambda^(1) ..= lambda^(N)
    pub lambdas: Vec<Partition>,
    /// mu^(1) ..= mu^(N+1)
    pub mus: Vec<Partition>,
}

impl InterlacedSequence {
    pub fn all_empty(rank: u32) -> Self {
        InterlacedSequence {
            rank,
            lambdas: vec![Partition::empty(); rank as usize],
            mus: vec![Partition::empty(); rank as usize + 1],
        }
    }

    pub fn lambda(&self, n: usize) -> &Partition {
        &self.lambdas[n - 1]
    }

    pub fn mu(&self, n: usize) -> &Partition {
        &self.mus[n - 1]
    }

    /// Checks shape, forced empty ends, the interlacing chain and the
    /// particle bounds.
    pub fn is_valid(&self) -> bool {
        let n = self.rank as usize;
        if self.lambdas.len() != n || self.mus.len() != n + 1 {
            return false;
        }
        if !self.mus[0].is_empty() || !self.mus[n].is_empty() {
            return false;
        }
        for m in 1..=n {
            if !interlaces(self.lambda(m), self.mu(m)) {
                return false;
            }
            if !co_interlaces(self.lambda(m), self.mu(m + 1)) {
                return false;
            }
            // Window bounds: -m <= lambda_i - i, and lambda_1 - 1 <= N - m.
            if self.lambda(m).len() > m || self.lambda(m).diag(1) > self.rank as i64 - m as i64 {
                return false;
            }
            if self.mu(m).len() + 1 > m || self.mu(m).diag(1) > self.rank as i64 - m as i64 {
                return false;
            }
        }
        true
    }
}

/// Face at position u on slice d of the rank-N diamond (d = v - u + N).
fn slice_face(u: i64, d: u32, rank: u32) -> Face {
    Face::new(u as i32, (d as i64 + u - rank as i64) as i32)
}

/// u-window of slice d: odd slices 2n-1 span [-n, N-n], even slices 2n-2
/// span [-n+1, N-n].
fn slice_window(d: u32, rank: u32) -> (i64, i64) {
    let n = rank as i64;
    let d = d as i64;
    if d % 2 == 1 {
        let lev = (d + 1) / 2;
        (-lev, n - lev)
    } else {
        let lev = d / 2 + 1;
        (-lev + 1, n - lev)
    }
}

fn slice_particles(t: &Tiling, d: u32, conv: ParityConvention) -> Result<Vec<i64>> {
    let (lo, hi) = slice_window(d, t.rank());
    let mut qs = Vec::new();
    for u in (lo..=hi).rev() {
        let f = slice_face(u, d, t.rank());
        let dom = t
            .domino_at(f)
            .ok_or_else(|| Error::invariant(format!("uncovered face ({},{})", f.u, f.v)))?;
        match classify(dom, conv) {
            CompassType::North | CompassType::West => qs.push(u),
            CompassType::South | CompassType::East => {}
        }
    }
    Ok(qs)
}

fn partition_from_slice(qs: &[i64], expected: usize) -> Result<Partition> {
    if qs.len() != expected {
        return Err(Error::invariant(format!(
            "slice carries {} particles, expected {}",
            qs.len(),
            expected
        )));
    }
    maya_to_partition(&MayaDiagram { particles: qs.to_vec() })
}

/// Read the interlaced sequence off a valid tiling: slice 2n-2 carries
/// mu^(n), slice 2n-1 carries lambda^(n); North/West dominoes carry
/// particles, South/East dominoes holes.
pub fn tiling_to_sequence(t: &Tiling) -> Result<InterlacedSequence> {
    if !validate(t) {
        return Err(Error::invariant("tiling_to_sequence on an invalid tiling"));
    }
    let rank = t.rank();
    if rank == 0 {
        return Ok(InterlacedSequence::all_empty(0));
    }
    let conv = ParityConvention::for_rank(rank);
    let mut lambdas = Vec::with_capacity(rank as usize);
    let mut mus = Vec::with_capacity(rank as usize + 1);
    for n in 1..=rank as usize {
        let mu_q = slice_particles(t, 2 * n as u32 - 2, conv)?;
        mus.push(partition_from_slice(&mu_q, n - 1)?);
        let lam_q = slice_particles(t, 2 * n as u32 - 1, conv)?;
        lambdas.push(partition_from_slice(&lam_q, n)?);
    }
    let mu_last = slice_particles(t, 2 * rank, conv)?;
    mus.push(partition_from_slice(&mu_last, rank as usize)?);
    let seq = InterlacedSequence { rank, lambdas, mus };
    if !seq.is_valid() {
        return Err(Error::invariant("tiling produced a non-interlaced sequence"));
    }
    Ok(seq)
}

/// Rebuild the tiling from its interlaced sequence (inverse bijection).
///
/// On each transition the dominoes are forced: between lambda^(n) and
/// mu^(n+1) the i-th particles pair (staying pairs give a West vertical,
/// dropping by one a North horizontal); between mu^(n) and lambda^(n) the
/// holes pair in descending order (equal positions give an East vertical, a
/// drop a South horizontal).
pub fn sequence_to_tiling(seq: &InterlacedSequence) -> Result<Tiling> {
    if !seq.is_valid() {
        return Err(Error::invariant("sequence_to_tiling on an invalid sequence"));
    }
    let rank = seq.rank;
    let mut dominoes = Vec::with_capacity((rank * (rank + 1)) as usize);
    for n in 1..=rank as usize {
        let d_lam = 2 * n as u32 - 1;
        // Holes of the two slices of the c-transition, descending.
        let hole_set = |p: &Partition, d: u32, count: usize| -> Vec<i64> {
            let (lo, hi) = slice_window(d, rank);
            let qs: Vec<i64> = (1..=count).map(|i| p.diag(i)).collect();
            (lo..=hi).rev().filter(|u| !qs.contains(u)).collect()
        };
        let mu_holes = hole_set(seq.mu(n), d_lam - 1, n - 1);
        let lam_holes = hole_set(seq.lambda(n), d_lam, n);
        if mu_holes.len() != lam_holes.len() {
            return Err(Error::invariant("hole count mismatch on a c-transition"));
        }
        for (hm, hl) in mu_holes.iter().zip(lam_holes.iter()) {
            if hl == hm {
                dominoes.push(Domino::vertical(slice_face(*hm, d_lam - 1, rank)));
            } else if *hl == hm - 1 {
                dominoes.push(Domino::horizontal(slice_face(*hl, d_lam, rank)));
            } else {
                return Err(Error::invariant(format!(
                    "holes {hm} and {hl} cannot be covered (transition {n})"
                )));
            }
        }
        // Particles of the b-transition pair by index.
        for i in 1..=n {
            let qx = seq.lambda(n).diag(i);
            let qy = seq.mu(n + 1).diag(i);
            if qy == qx {
                dominoes.push(Domino::vertical(slice_face(qx, d_lam, rank)));
            } else if qy == qx - 1 {
                dominoes.push(Domino::horizontal(slice_face(qy, d_lam + 1, rank)));
            } else {
                return Err(Error::invariant(format!(
                    "particles x={qx}, y={qy} violate interlacing (transition {n})"
                )));
            }
        }
    }
    let t = Tiling::new(rank, dominoes);
    if !validate(&t) {
        return Err(Error::invariant("reconstructed dominoes do not tile the diamond"));
    }
    Ok(t)
}

/// Half-integer particle positions of a k-tiling, in q = x - 1/2 integer
/// coordinates: x[l][n-1][i-1] = q of particle i at level n of color l+1,
/// and likewise y for the even slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredParticleArray {
    pub rank: u32,
    pub colors: u32,
    /// x[l][n-1]: level n has n entries, strictly decreasing.
    pub x: Vec<Vec<Vec<i64>>>,
    /// y[l][n-1]: level n has n-1 entries, strictly decreasing.
    pub y: Vec<Vec<Vec<i64>>>,
}

impl ColoredParticleArray {
    /// The vacuum array (all partitions empty).
    pub fn vacuum(rank: u32, colors: u32) -> Self {
        let x: Vec<Vec<i64>> = (1..=rank as i64)
            .map(|n| (1..=n).map(|i| -i).collect())
            .collect();
        let y: Vec<Vec<i64>> = (1..=rank as i64)
            .map(|n| (1..n).map(|i| -i).collect())
            .collect();
        ColoredParticleArray {
            rank,
            colors,
            x: vec![x; colors as usize],
            y: vec![y; colors as usize],
        }
    }

    /// Interlacing and window bounds for every color.
    pub fn is_valid(&self) -> bool {
        let big_n = self.rank as i64;
        if self.x.len() != self.colors as usize || self.y.len() != self.colors as usize {
            return false;
        }
        for l in 0..self.colors as usize {
            if self.x[l].len() != self.rank as usize || self.y[l].len() != self.rank as usize {
                return false;
            }
            for n in 1..=self.rank as usize {
                let x = &self.x[l][n - 1];
                let y = &self.y[l][n - 1];
                if x.len() != n || y.len() != n - 1 {
                    return false;
                }
                let n_i = n as i64;
                for i in 1..=n {
                    if x[i - 1] < -n_i || x[i - 1] > big_n - n_i {
                        return false;
                    }
                }
                for i in 1..n {
                    // x_i >= y_i > x_{i+1}
                    if !(x[i - 1] >= y[i - 1] && y[i - 1] > x[i]) {
                        return false;
                    }
                    if y[i - 1] < -n_i + 1 || y[i - 1] > big_n - n_i {
                        return false;
                    }
                }
                if n < self.rank as usize {
                    let y_up = &self.y[l][n];
                    for i in 1..=n {
                        // x_i^(n) >= y_i^(n+1) >= x_i^(n) - 1
                        if !(x[i - 1] >= y_up[i - 1] && y_up[i - 1] >= x[i - 1] - 1) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn sequence_of_color(&self, l: usize) -> Result<InterlacedSequence> {
        let n = self.rank as usize;
        if n == 0 {
            return Ok(InterlacedSequence::all_empty(0));
        }
        let mut lambdas = Vec::with_capacity(n);
        let mut mus = Vec::with_capacity(n + 1);
        for lev in 1..=n {
            lambdas.push(maya_to_partition(&MayaDiagram {
                particles: self.x[l][lev - 1].clone(),
            })?);
            mus.push(maya_to_partition(&MayaDiagram {
                particles: self.y[l][lev - 1].clone(),
            })?);
        }
        mus.push(Partition::empty());
        Ok(InterlacedSequence { rank: self.rank, lambdas, mus })
    }

    /// JSON with positions as doubled (always odd) integers.
    pub fn to_doubled_json(&self) -> String {
        let dbl = |rows: &Vec<Vec<Vec<i64>>>| -> Vec<Vec<Vec<i64>>> {
            rows.iter()
                .map(|per| per.iter().map(|r| r.iter().map(|q| 2 * q + 1).collect()).collect())
                .collect()
        };
        serde_json::to_string(&serde_json::json!({
            "rank": self.rank,
            "colors": self.colors,
            "x2": dbl(&self.x),
            "y2": dbl(&self.y),
        }))
        .expect("array serialization cannot fail")
    }
}

/// Particle arrays of every color of a k-tiling.
pub fn ktiling_to_array(kt: &KTiling) -> Result<ColoredParticleArray> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for t in kt.colors() {
        let seq = tiling_to_sequence(t)?;
        x.push(
            (1..=kt.rank() as usize)
                .map(|n| (1..=n).map(|i| seq.lambda(n).diag(i)).collect())
                .collect(),
        );
        y.push(
            (1..=kt.rank() as usize)
                .map(|n| (1..n).map(|i| seq.mu(n).diag(i)).collect())
                .collect(),
        );
    }
    let arr = ColoredParticleArray { rank: kt.rank(), colors: kt.k(), x, y };
    if !arr.is_valid() {
        return Err(Error::invariant("k-tiling produced an invalid particle array"));
    }
    Ok(arr)
}

/// Inverse of `ktiling_to_array`.
pub fn array_to_ktiling(arr: &ColoredParticleArray) -> Result<KTiling> {
    let colors = (0..arr.colors as usize)
        .map(|l| sequence_to_tiling(&arr.sequence_of_color(l)?))
        .collect::<Result<Vec<_>>>()?;
    KTiling::new(arr.rank, colors)
}

/// The partition-side interaction counter between a smaller color `seq_a`
/// and a larger color `seq_b`.
///
/// On each of the N c-transitions, rows i of a and j of b contribute
/// min(db_lam, da_lam) - max(db_mu, da_mu) + [db_lam < da_lam] whenever that
/// window is nonempty (diagonal values lambda_r - r, mu_r - r). On each of
/// the N b-transitions (lambda^(n) over mu^(n+1)), a pair contributes one
/// unit whenever lambda_b(j)-j = mu_b(j)-j+1 = mu_a(i)-i = lambda_a(i)-i.
pub fn interactions_from_partitions(
    seq_a: &InterlacedSequence,
    seq_b: &InterlacedSequence,
) -> Result<u64> {
    if seq_a.rank != seq_b.rank {
        return Err(Error::invariant(format!(
            "rank mismatch: {} vs {}",
            seq_a.rank, seq_b.rank
        )));
    }
    let rows = seq_a.rank as usize + 2;
    let mut total: u64 = 0;
    for n in 1..=seq_a.rank as usize {
        let (la, ma) = (seq_a.lambda(n), seq_a.mu(n));
        let (lb, mb) = (seq_b.lambda(n), seq_b.mu(n));
        for i in 1..=rows {
            for j in 1..=rows {
                let hi = lb.diag(j).min(la.diag(i));
                let lo = mb.diag(j).max(ma.diag(i));
                if hi >= lo {
                    total += (hi - lo) as u64;
                    if lb.diag(j) < la.diag(i) {
                        total += 1;
                    }
                }
            }
        }
        let (ma_up, mb_up) = (seq_a.mu(n + 1), seq_b.mu(n + 1));
        for i in 1..=rows {
            for j in 1..=rows {
                let v = lb.diag(j);
                if mb_up.diag(j) + 1 == v && ma_up.diag(i) == v && la.diag(i) == v {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{rank1_horizontal, rank1_vertical, Orientation};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&p(&[4, 3, 2, 2, 1])), p(&[5, 4, 2, 1]));
        assert_eq!(conjugate(&Partition::empty()), Partition::empty());
    }

    #[test]
    fn conjugate_is_an_involution() {
        let mut s = crate::rng::RngStream::new(41).substream(&[0]);
        for _ in 0..1000 {
            let len = s.next_below(6) as usize;
            let mut parts: Vec<u32> = (0..len).map(|_| s.next_below(9) as u32).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            assert_eq!(conjugate(&conjugate(&lam)), lam);
        }
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlaces(&p(&[2, 1]), &p(&[2])));
        assert!(!interlaces(&p(&[1]), &p(&[2])));
        assert!(co_interlaces(&p(&[2]), &p(&[2])));
        assert!(interlaces(&p(&[1, 1]), &p(&[1, 1])));
        // A two-column-wide skew row is not a vertical strip.
        assert!(!co_interlaces(&p(&[3, 1]), &p(&[1, 1])));
    }

    #[test]
    fn maya_positions() {
        // Vacuum: particles at -1/2, -3/2, -5/2, ...
        let vac = maya(&Partition::empty());
        assert_eq!(vac.positions_doubled(3), vec![-1, -3, -5]);
        assert!(vac.occupied(-1) && vac.occupied(-7));
        assert!(!vac.occupied(0) && !vac.occupied(3));
        // (4,3,2,2,1): first five positions 7/2, 3/2, -1/2, -3/2, -7/2.
        let m = maya(&p(&[4, 3, 2, 2, 1]));
        assert_eq!(m.positions_doubled(5), vec![7, 3, -1, -3, -7]);
        assert_eq!(maya_to_partition(&m).unwrap(), p(&[4, 3, 2, 2, 1]));
    }

    #[test]
    fn maya_pattern_matches_diagram() {
        // Reading q = -7..=5 left to right for (4,3,2,2,1).
        let m = maya(&p(&[4, 3, 2, 2, 1]));
        let pattern: String = (-7..=5)
            .map(|q| if m.occupied(q) { 'o' } else { '.' })
            .collect();
        assert_eq!(pattern, "oo.o.oo.o.o..");
    }

    #[test]
    fn rank1_sequences() {
        let sv = tiling_to_sequence(&rank1_vertical()).unwrap();
        assert_eq!(sv.lambda(1), &Partition::empty());
        let sh = tiling_to_sequence(&rank1_horizontal()).unwrap();
        assert_eq!(sh.lambda(1), &p(&[1]));
        for s in [&sv, &sh] {
            assert!(s.is_valid());
            assert_eq!(s.mu(1), &Partition::empty());
            assert_eq!(s.mu(2), &Partition::empty());
        }
    }

    #[test]
    fn all_empty_sequence_reconstructs_all_vertical() {
        for rank in 0..=5u32 {
            let t = sequence_to_tiling(&InterlacedSequence::all_empty(rank)).unwrap();
            assert!(validate(&t));
            assert!(t.dominoes().iter().all(|d| d.orient == Orientation::Vertical));
            let back = tiling_to_sequence(&t).unwrap();
            assert_eq!(back, InterlacedSequence::all_empty(rank));
        }
    }

    #[test]
    fn example3_sequences_match_published_tuples() {
        let blue = tiling_to_sequence(&fixtures::example3_blue()).unwrap();
        assert_eq!(blue.lambda(1), &p(&[2]));
        assert_eq!(blue.mu(2), &p(&[2]));
        assert_eq!(blue.lambda(2), &p(&[2, 1]));
        assert_eq!(blue.mu(3), &p(&[1]));
        assert_eq!(blue.lambda(3), &p(&[1, 1]));

        let red = tiling_to_sequence(&fixtures::example3_red()).unwrap();
        assert_eq!(red.lambda(1), &p(&[3]));
        assert_eq!(red.mu(2), &p(&[2]));
        assert_eq!(red.lambda(2), &p(&[2]));
        assert_eq!(red.mu(3), &p(&[1]));
        assert_eq!(red.lambda(3), &p(&[1]));

        let green = tiling_to_sequence(&fixtures::example3_green()).unwrap();
        assert_eq!(green.lambda(1), &p(&[1]));
        assert_eq!(green.mu(2), &Partition::empty());
        assert_eq!(green.lambda(2), &p(&[1]));
        assert_eq!(green.mu(3), &Partition::empty());
        assert_eq!(green.lambda(3), &Partition::empty());
    }

    #[test]
    fn example3_roundtrips() {
        for t in [
            fixtures::example3_blue(),
            fixtures::example3_red(),
            fixtures::example3_green(),
        ] {
            let seq = tiling_to_sequence(&t).unwrap();
            let back = sequence_to_tiling(&seq).unwrap();
            assert_eq!(t, back);
        }
    }

    #[test]
    fn example3_array_roundtrip_and_vacuum() {
        let kt = KTiling::new(
            3,
            vec![
                fixtures::example3_blue(),
                fixtures::example3_red(),
                fixtures::example3_green(),
            ],
        )
        .unwrap();
        let arr = ktiling_to_array(&kt).unwrap();
        assert!(arr.is_valid());
        // Blue lambda^(1) = (2): q = 1. Red lambda^(1) = (3): q = 2.
        assert_eq!(arr.x[0][0], vec![1]);
        assert_eq!(arr.x[1][0], vec![2]);
        let back = array_to_ktiling(&arr).unwrap();
        assert_eq!(kt.canonical_key(), back.canonical_key());

        // The all-empty k-tiling maps to the vacuum array x_i = -i.
        let vac_colors = (0..3)
            .map(|_| sequence_to_tiling(&InterlacedSequence::all_empty(2)).unwrap())
            .collect();
        let vac_kt = KTiling::new(2, vac_colors).unwrap();
        let vac_arr = ktiling_to_array(&vac_kt).unwrap();
        assert_eq!(vac_arr, ColoredParticleArray::vacuum(2, 3));
    }

    #[test]
    fn interaction_counter_on_empty_and_rank1() {
        let e = InterlacedSequence::all_empty(3);
        assert_eq!(interactions_from_partitions(&e, &e).unwrap(), 0);

        // The rank-1 table must agree with the domino-side counter.
        let v = rank1_vertical();
        let h = rank1_horizontal();
        for a in [&v, &h] {
            for b in [&v, &h] {
                let sa = tiling_to_sequence(a).unwrap();
                let sb = tiling_to_sequence(b).unwrap();
                assert_eq!(
                    interactions_from_partitions(&sa, &sb).unwrap(),
                    crate::tiling::count_interactions(a, b).unwrap(),
                );
            }
        }
    }

    #[test]
    fn example3_counters_agree() {
        let ts = [
            fixtures::example3_blue(),
            fixtures::example3_red(),
            fixtures::example3_green(),
        ];
        for a in 0..3 {
            for b in (a + 1)..3 {
                let sa = tiling_to_sequence(&ts[a]).unwrap();
                let sb = tiling_to_sequence(&ts[b]).unwrap();
                assert_eq!(
                    interactions_from_partitions(&sa, &sb).unwrap(),
                    crate::tiling::count_interactions(&ts[a], &ts[b]).unwrap(),
                    "colors {a},{b}"
                );
            }
        }
    }

    #[test]
    fn doubled_json_is_odd() {
        let arr = ColoredParticleArray::vacuum(3, 2);
        let json = arr.to_doubled_json();
        let val: serde_json::Value = serde_json::from_str(&json).unwrap();
        for per_color in val["x2"].as_array().unwrap() {
            for row in per_color.as_array().unwrap() {
                for q in row.as_array().unwrap() {
                    assert_eq!(q.as_i64().unwrap().rem_euclid(2), 1);
                }
            }
        }
    }
}
