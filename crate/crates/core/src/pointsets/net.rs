//! Digital nets in base 2.

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, MAX_K, MAX_W};

/// A digital net in base 2 with n = 2^k points, w output digits per
/// coordinate, and one w×k generating matrix per coordinate. The top k×k
/// block of every matrix has rank k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitalNetBase2 {
    k: u32,
    w: u32,
    matrices: Vec<BinaryMatrix>,
}

impl DigitalNetBase2 {
    pub fn new(k: u32, w: u32, matrices: Vec<BinaryMatrix>) -> Result<Self> {
        let net = Self::from_matrices_unchecked(k, w, matrices)?;
        for (j, m) in net.matrices.iter().enumerate() {
            if m.top_square_rank() != k {
                return Err(Error::SingularMatrix(format!(
                    "top {k}x{k} block of generating matrix {} is singular",
                    j + 1
                )));
            }
        }
        Ok(net)
    }

    /// Construct without the rank-k check on the leading blocks. Interlaced
    /// nets use this: their output matrices interleave rows of several inner
    /// matrices and carry no leading-block guarantee.
    pub fn from_matrices_unchecked(k: u32, w: u32, matrices: Vec<BinaryMatrix>) -> Result<Self> {
        if k < 1 || k > MAX_K {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= {MAX_K}, got {k}")));
        }
        if w < k || w > MAX_W {
            return Err(Error::InvalidArgument(format!("need k <= w <= {MAX_W}, got w={w}")));
        }
        if matrices.is_empty() {
            return Err(Error::InvalidArgument("net needs at least one coordinate".into()));
        }
        for (j, m) in matrices.iter().enumerate() {
            if m.rows() != w || m.cols() != k {
                return Err(Error::InvalidArgument(format!(
                    "matrix {} has shape {}x{}, expected {w}x{k}",
                    j + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(DigitalNetBase2 { k, w, matrices })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u64 {
        1u64 << self.k
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[BinaryMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &BinaryMatrix {
        &self.matrices[j]
    }

    /// Digit word of point i, coordinate j: the point value times 2^w as an
    /// integer. Digits of i, least significant first, select matrix columns.
    #[inline]
    pub fn point_word(&self, i: u64, j: usize) -> u64 {
        let m = &self.matrices[j];
        let mut acc = 0u64;
        let mut bits = i;
        while bits != 0 {
            let c = bits.trailing_zeros();
            acc ^= m.col_word(c);
            bits &= bits - 1;
        }
        acc
    }

    /// All coordinates of point i as digit words.
    pub fn point_words(&self, i: u64) -> Result<Vec<u64>> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n() });
        }
        Ok((0..self.dim()).map(|j| self.point_word(i, j)).collect())
    }

    /// Point i in [0,1)^s as floats (exact for w ≤ 52).
    pub fn point(&self, i: u64) -> Result<Vec<f64>> {
        let scale = 0.5f64.powi(self.w as i32);
        Ok(self.point_words(i)?.into_iter().map(|word| word as f64 * scale).collect())
    }

    /// All n·s digit words, row-major by point index.
    pub fn all_words(&self) -> Vec<u64> {
        let n = self.n();
        let s = self.dim();
        let mut out = vec![0u64; n as usize * s];
        for i in 0..n {
            for j in 0..s {
                out[i as usize * s + j] = self.point_word(i, j);
            }
        }
        out
    }

    /// Restrict to the listed coordinates (0-based).
    pub fn project(&self, coords: &[u32]) -> Result<DigitalNetBase2> {
        let matrices = coords
            .iter()
            .map(|&j| {
                self.matrices
                    .get(j as usize)
                    .cloned()
                    .ok_or(Error::IndexOutOfRange { index: j as u64, bound: self.dim() as u64 })
            })
            .collect::<Result<Vec<_>>>()?;
        DigitalNetBase2::from_matrices_unchecked(self.k, self.w, matrices)
    }

    /// The 2^k'-point prefix: columns beyond k' dropped. The prefix of a
    /// valid net is a well-defined point set but need not be
    /// projection-regular, so no rank check is applied.
    pub fn embedded(&self, k_level: u32) -> Result<DigitalNetBase2> {
        if k_level < 1 || k_level > self.k {
            return Err(Error::InvalidArgument("level exceeds net size".into()));
        }
        let matrices = self.matrices.iter().map(|m| m.truncate_cols(k_level)).collect();
        DigitalNetBase2::from_matrices_unchecked(k_level, self.w, matrices)
    }

    /// Same net with only the first `w` output digits.
    pub fn truncate_digits(&self, w: u32) -> Result<DigitalNetBase2> {
        if w < self.k || w > self.w {
            return Err(Error::InvalidArgument("need k <= w <= current w".into()));
        }
        let matrices = self.matrices.iter().map(|m| m.truncate_rows(w)).collect();
        DigitalNetBase2::from_matrices_unchecked(self.k, w, matrices)
    }

    /// Identity-matrix net: coordinate values are the van der Corput radical
    /// inverses when w = k.
    pub fn identity(k: u32, w: u32, dim: usize) -> Result<DigitalNetBase2> {
        let mut cols = Vec::with_capacity(k as usize);
        for c in 0..k {
            cols.push(1u64 << (w - 1 - c));
        }
        let m = BinaryMatrix::from_col_words(w, cols)?;
        DigitalNetBase2::new(k, w, vec![m; dim])
    }
}

/// Radical-inverse (van der Corput) value of i in base 2 with k digits.
pub fn van_der_corput(i: u64, k: u32) -> f64 {
    let mut v = 0u64;
    for b in 0..k {
        if i >> b & 1 == 1 {
            v |= 1 << (k - 1 - b);
        }
    }
    v as f64 * 0.5f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_net_examples() {
        let net = DigitalNetBase2::identity(3, 3, 1).unwrap();
        assert_eq!(net.point(0).unwrap(), vec![0.0]);
        assert_eq!(net.point(1).unwrap(), vec![0.5]);
        // i = 6: digits 0,1,1 pick columns 1 and 2
        assert_eq!(net.point(6).unwrap(), vec![0.375]);
        assert!(net.point(8).is_err());
    }

    #[test]
    fn identity_net_is_van_der_corput() {
        let k = 5;
        let net = DigitalNetBase2::identity(k, k, 1).unwrap();
        for i in 0..(1u64 << k) {
            assert_eq!(net.point(i).unwrap()[0], van_der_corput(i, k));
        }
    }

    #[test]
    fn one_dimensional_projection_is_full_grid() {
        // each coordinate, truncated to k digits, is {0, 1/n, ..., (n-1)/n}
        let k = 4;
        let m1 = BinaryMatrix::from_col_words(6, vec![0b100000, 0b110000, 0b011000, 0b111100])
            .unwrap();
        let m2 = BinaryMatrix::from_col_words(6, vec![0b010000, 0b100000, 0b001100, 0b101000])
            .unwrap();
        let net = DigitalNetBase2::new(k, 6, vec![m1, m2]).unwrap();
        for j in 0..2 {
            let mut prefixes: Vec<u64> =
                (0..16).map(|i| net.point_word(i, j) >> (6 - k)).collect();
            prefixes.sort_unstable();
            assert_eq!(prefixes, (0..16).collect::<Vec<u64>>());
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = BinaryMatrix::from_col_words(3, vec![0b100, 0b100, 0b001]).unwrap();
        assert!(DigitalNetBase2::new(3, 3, vec![m]).is_err());
    }
}
