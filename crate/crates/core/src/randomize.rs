//! RQMC randomizations: random shift mod 1 for lattices; digital shift,
//! left linear matrix scramble plus shift, and nested uniform scrambling for
//! digital nets.
//!
//! Every random draw is a pure function of (seed, replicate, coordinate,
//! node), so replicates and disjoint index ranges can be produced in any
//! order and always agree.

use crate::error::{Error, Result};
use crate::gf2::{mask_u64, BinaryMatrix};
use crate::pointsets::{interlace_words, interlaced_digits, DigitalNetBase2, PointSetDef};
use crate::rng::{hash_path, CounterRng};

/// Which randomization to apply. Shift mod 1 applies to lattices only; the
/// digital randomizations apply to digital nets only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Randomization {
    None,
    ShiftMod1,
    DigitalShift,
    LmsPlusShift,
    Nus,
}

/// A nonsingular lower-triangular w×w scrambling matrix over Z₂.
/// Row r is stored LSB-first: bit m holds L[r][m], m ≤ r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerTriangular {
    w: u32,
    rows: Vec<u64>,
}

impl LowerTriangular {
    pub fn new(w: u32, rows: Vec<u64>) -> Result<Self> {
        if rows.len() != w as usize {
            return Err(Error::InvalidArgument("row count must equal w".into()));
        }
        for (r, &row) in rows.iter().enumerate() {
            if row >> r != 1 {
                // either an entry above the diagonal or a zero diagonal
                return if row >> (r + 1) != 0 {
                    Err(Error::InvalidArgument(format!("entry above the diagonal in row {r}")))
                } else {
                    Err(Error::SingularMatrix(format!(
                        "zero diagonal at row {r}: lower-triangular scrambles must have a unit \
                         diagonal over Z2"
                    )))
                };
            }
        }
        Ok(LowerTriangular { w, rows })
    }

    pub fn identity(w: u32) -> Self {
        LowerTriangular { w, rows: (0..w).map(|r| 1u64 << r).collect() }
    }

    /// Unit diagonal with i.i.d. uniform strictly-lower bits.
    pub fn random(w: u32, rng: &mut CounterRng) -> Self {
        let rows = (0..w)
            .map(|r| {
                let below = if r == 0 { 0 } else { rng.next_u64() & mask_u64(r) };
                below | (1u64 << r)
            })
            .collect();
        LowerTriangular { w, rows }
    }

    /// L·C over Z₂ for a column-stored matrix with the same number of rows.
    pub fn mul_matrix(&self, c: &BinaryMatrix) -> Result<BinaryMatrix> {
        if c.rows() != self.w {
            return Err(Error::InvalidArgument("scramble width must match output digits".into()));
        }
        let w = self.w;
        let cols = (0..c.cols())
            .map(|col| {
                let lsb = col_to_lsb(c.col_word(col), w);
                let mut out = 0u64;
                for (r, &row) in self.rows.iter().enumerate() {
                    if ((row & lsb).count_ones() & 1) == 1 {
                        out |= 1u64 << (w - 1 - r as u32);
                    }
                }
                out
            })
            .collect();
        BinaryMatrix::from_col_words(w, cols)
    }
}

#[inline]
fn col_to_lsb(col_word: u64, w: u32) -> u64 {
    col_word.reverse_bits() >> (64 - w)
}

/// Shift every lattice point by u, coordinate-wise mod 1.
pub fn shift_lattice(points: &[f64], dim: usize, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != dim {
        return Err(Error::InvalidArgument("shift dimension mismatch".into()));
    }
    if u.iter().any(|&x| !(0.0..1.0).contains(&x)) {
        return Err(Error::InvalidArgument("shift must lie in [0,1)^s".into()));
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            let v = x + u[idx % dim];
            if v >= 1.0 {
                v - 1.0
            } else {
                v
            }
        })
        .collect())
}

/// XOR the digits of every point with the digits of u (one word per
/// coordinate, w digits).
pub fn digital_shift_words(words: &mut [u64], dim: usize, shift: &[u64]) -> Result<()> {
    if shift.len() != dim {
        return Err(Error::InvalidArgument("shift dimension mismatch".into()));
    }
    for (idx, w) in words.iter_mut().enumerate() {
        *w ^= shift[idx % dim];
    }
    Ok(())
}

/// Replace each generating matrix C_j by L_j·C_j.
pub fn lms(net: &DigitalNetBase2, scrambles: &[LowerTriangular]) -> Result<DigitalNetBase2> {
    if scrambles.len() != net.dim() {
        return Err(Error::InvalidArgument("one scramble matrix per coordinate".into()));
    }
    let matrices = net
        .matrices()
        .iter()
        .zip(scrambles)
        .map(|(c, l)| l.mul_matrix(c))
        .collect::<Result<Vec<_>>>()?;
    DigitalNetBase2::from_matrices_unchecked(net.k(), net.w(), matrices)
}

/// Nested uniform scramble of one coordinate value. The flip tree runs over
/// the first k digits, one independent bit per (level, prefix) node; digits
/// k+1..w are drawn fresh per point.
#[inline]
pub fn nus_word(word: u64, w: u32, k: u32, key: u64, point_index: u64) -> u64 {
    let mut prefix: u64 = 0; // original digits seen so far, top-aligned value
    let mut out = 0u64;
    for level in 0..k {
        let bit = word >> (w - 1 - level) & 1;
        let flip = hash_path(key, &[1, level as u64, prefix]) & 1;
        out |= (bit ^ flip) << (w - 1 - level);
        prefix = (prefix << 1) | bit;
    }
    if w > k {
        let tail_bits = w - k;
        let tail = hash_path(key, &[2, prefix, point_index]) >> (64 - tail_bits);
        out |= tail;
    }
    out
}

/// A point set paired with a randomization and a replicate index.
#[derive(Clone, Debug)]
pub struct RandomizedPointSet {
    pub base: PointSetDef,
    pub randomization: Randomization,
    pub seed: u64,
    pub replicate: u64,
}

enum NetRandState {
    Plain,
    Shift(Vec<u64>),
    LmsShift { net: DigitalNetBase2, shift: Vec<u64> },
    Nus { keys: Vec<u64> },
}

impl RandomizedPointSet {
    pub fn new(base: PointSetDef, randomization: Randomization, seed: u64, replicate: u64) -> Result<Self> {
        match (&base, randomization) {
            (PointSetDef::Lattice(_), Randomization::ShiftMod1 | Randomization::None) => {}
            (PointSetDef::Lattice(_), _) => {
                return Err(Error::Unsupported(
                    "digital randomizations apply to digital nets, not lattices".into(),
                ))
            }
            (_, Randomization::ShiftMod1) => {
                return Err(Error::Unsupported("shift mod 1 applies to lattices only".into()))
            }
            _ => {}
        }
        Ok(RandomizedPointSet { base, randomization, seed, replicate })
    }

    fn coord_rng(&self, j: u64) -> CounterRng {
        CounterRng::new(self.seed).substream(self.replicate).substream(j)
    }

    fn net_state(&self, net: &DigitalNetBase2) -> Result<NetRandState> {
        let w = net.w();
        let s = net.dim();
        Ok(match self.randomization {
            Randomization::None => NetRandState::Plain,
            Randomization::DigitalShift => {
                let shift = (0..s).map(|j| self.coord_rng(j as u64).bits(w)).collect();
                NetRandState::Shift(shift)
            }
            Randomization::LmsPlusShift => {
                let mut scrambles = Vec::with_capacity(s);
                let mut shift = Vec::with_capacity(s);
                for j in 0..s {
                    let mut rng = self.coord_rng(j as u64);
                    scrambles.push(LowerTriangular::random(w, &mut rng.substream(0)));
                    shift.push(rng.substream(1).bits(w));
                }
                NetRandState::LmsShift { net: lms(net, &scrambles)?, shift }
            }
            Randomization::Nus => {
                let keys = (0..s)
                    .map(|j| hash_path(self.seed, &[self.replicate, j as u64]))
                    .collect();
                NetRandState::Nus { keys }
            }
            Randomization::ShiftMod1 => unreachable!("rejected at construction"),
        })
    }

    fn net_words_range(
        &self,
        net: &DigitalNetBase2,
        state: &NetRandState,
        start: u64,
        end: u64,
    ) -> Vec<u64> {
        let s = net.dim();
        let k = net.k();
        let w = net.w();
        let mut out = Vec::with_capacity(((end - start) as usize) * s);
        for i in start..end {
            for j in 0..s {
                let word = match state {
                    NetRandState::Plain => net.point_word(i, j),
                    NetRandState::Shift(shift) => net.point_word(i, j) ^ shift[j],
                    NetRandState::LmsShift { net: scrambled, shift } => {
                        scrambled.point_word(i, j) ^ shift[j]
                    }
                    NetRandState::Nus { keys } => {
                        nus_word(net.point_word(i, j), w, k, keys[j], i)
                    }
                };
                out.push(word);
            }
        }
        out
    }

    /// Randomized digit words for a net-like base over [start, end).
    /// For interlaced bases the inner net is randomized first and the digits
    /// interlaced afterwards.
    pub fn words_range(&self, start: u64, end: u64) -> Result<(Vec<u64>, u32)> {
        if end > self.base.n() || start > end {
            return Err(Error::IndexOutOfRange { index: end, bound: self.base.n() });
        }
        match &self.base {
            PointSetDef::Interlaced { inner, d } => {
                let state = self.net_state(inner)?;
                let inner_words = self.net_words_range(inner, &state, start, end);
                let out = interlace_words(&inner_words, inner.dim(), inner.w(), *d)?;
                Ok((out, interlaced_digits(inner.w(), *d)))
            }
            PointSetDef::Net(_) | PointSetDef::Plr(_) | PointSetDef::Sobol { .. } => {
                let net = self.base.as_net()?;
                let state = self.net_state(&net)?;
                Ok((self.net_words_range(&net, &state, start, end), net.w()))
            }
            _ => Err(Error::Unsupported("digit words exist for digital nets only".into())),
        }
    }

    /// Randomized points in [0,1)^s over the index range [start, end),
    /// row-major. Disjoint ranges concatenate to the full set.
    pub fn points_range(&self, start: u64, end: u64) -> Result<Vec<f64>> {
        if end > self.base.n() || start > end {
            return Err(Error::IndexOutOfRange { index: end, bound: self.base.n() });
        }
        match &self.base {
            PointSetDef::Lattice(lat) => {
                let s = lat.dim();
                let mut pts = Vec::with_capacity(((end - start) as usize) * s);
                for i in start..end {
                    pts.extend(lat.point(i)?);
                }
                match self.randomization {
                    Randomization::None => Ok(pts),
                    Randomization::ShiftMod1 => {
                        let u: Vec<f64> =
                            (0..s).map(|j| self.coord_rng(j as u64).next_f64()).collect();
                        shift_lattice(&pts, s, &u)
                    }
                    _ => unreachable!("rejected at construction"),
                }
            }
            PointSetDef::IidUniform { s, .. } => {
                let mut pts = Vec::with_capacity(((end - start) as usize) * s);
                for i in start..end {
                    for j in 0..*s {
                        let h = hash_path(self.seed, &[self.replicate, i, j as u64]);
                        pts.push((h >> 11) as f64 * (1.0 / (1u64 << 53) as f64));
                    }
                }
                Ok(pts)
            }
            PointSetDef::Hoplr(h) => {
                let s = h.dim();
                let w = h.w();
                let mut words = Vec::with_capacity(((end - start) as usize) * s);
                for i in start..end {
                    for j in 0..s {
                        words.push(h.point_word(i, j));
                    }
                }
                match self.randomization {
                    Randomization::None => {}
                    Randomization::DigitalShift => {
                        let shift: Vec<u64> =
                            (0..s).map(|j| self.coord_rng(j as u64).bits(w)).collect();
                        digital_shift_words(&mut words, s, &shift)?;
                    }
                    _ => {
                        return Err(Error::Unsupported(
                            "high-order point lists support the digital shift".into(),
                        ))
                    }
                }
                let scale = 0.5f64.powi(w as i32);
                Ok(words.into_iter().map(|x| x as f64 * scale).collect())
            }
            _ => {
                let (words, w) = self.words_range(start, end)?;
                let scale = 0.5f64.powi(w as i32);
                Ok(words.into_iter().map(|x| x as f64 * scale).collect())
            }
        }
    }

    /// The full randomized point set.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.points_range(0, self.base.n())
    }
}
