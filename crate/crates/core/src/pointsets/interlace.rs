//! Digit interlacing of digital nets.

use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, MAX_W};
use crate::pointsets::net::DigitalNetBase2;

/// Output digit count of an interlaced net built from inner matrices with
/// `w_inner` rows each: all d·w_inner interleaved rows, capped at 63.
pub fn interlaced_digits(w_inner: u32, d: u32) -> u32 {
    (w_inner * d).min(MAX_W)
}

/// Interlace an sd-coordinate net into an s-coordinate net with factor d.
/// Row (m−1)d+ℓ of output matrix j is row m of inner matrix (j−1)d+ℓ.
pub fn interlace(inner: &DigitalNetBase2, d: u32) -> Result<DigitalNetBase2> {
    if d == 0 {
        return Err(Error::InvalidArgument("interlacing factor must be >= 1".into()));
    }
    if d == 1 {
        return Ok(inner.clone());
    }
    if inner.dim() % d as usize != 0 {
        return Err(Error::InvalidArgument(format!(
            "inner coordinate count {} not divisible by d={d}",
            inner.dim()
        )));
    }
    let s = inner.dim() / d as usize;
    let w_out = interlaced_digits(inner.w(), d);
    let k = inner.k();
    let mut matrices = Vec::with_capacity(s);
    for j in 0..s {
        let mut m = BinaryMatrix::zero(w_out, k);
        for r in 0..w_out {
            let block_row = r / d; // row of the inner matrix (0-based)
            let ell = r % d; // which inner coordinate within the block
            let src = inner.matrix(j * d as usize + ell as usize);
            for c in 0..k {
                if src.bit(block_row, c) {
                    m.set_bit(r, c, true);
                }
            }
        }
        matrices.push(m);
    }
    DigitalNetBase2::from_matrices_unchecked(k, w_out, matrices)
}

/// Interlace already-generated points (digit words with w_inner digits per
/// inner coordinate). Used for randomized point sets, where the scrambling is
/// applied to the inner net before interlacing.
pub fn interlace_words(inner_words: &[u64], sd: usize, w_inner: u32, d: u32) -> Result<Vec<u64>> {
    if d == 0 || sd % d as usize != 0 {
        return Err(Error::InvalidArgument("bad interlacing arguments".into()));
    }
    if inner_words.len() % sd != 0 {
        return Err(Error::InvalidArgument("word buffer does not tile into points".into()));
    }
    let s = sd / d as usize;
    let w_out = interlaced_digits(w_inner, d);
    let n = inner_words.len() / sd;
    let mut out = vec![0u64; n * s];
    for i in 0..n {
        for j in 0..s {
            let mut word = 0u64;
            for r in 0..w_out {
                let block_row = r / d;
                let ell = r % d;
                let src = inner_words[i * sd + j * d as usize + ell as usize];
                if src >> (w_inner - 1 - block_row) & 1 == 1 {
                    word |= 1 << (w_out - 1 - r);
                }
            }
            out[i * s + j] = word;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_is_identity() {
        let net = DigitalNetBase2::identity(3, 5, 2).unwrap();
        assert_eq!(interlace(&net, 1).unwrap(), net);
    }

    #[test]
    fn rows_interleave_in_order() {
        let m1 = BinaryMatrix::from_col_words(2, vec![0b10, 0b01]).unwrap();
        let m2 = BinaryMatrix::from_col_words(2, vec![0b01, 0b11]).unwrap();
        let inner = DigitalNetBase2::new(2, 2, vec![m1.clone(), m2.clone()]).unwrap();
        let out = interlace(&inner, 2).unwrap();
        assert_eq!(out.dim(), 1);
        assert_eq!(out.w(), 4);
        let m = out.matrix(0);
        for c in 0..2 {
            assert_eq!(m.bit(0, c), m1.bit(0, c));
            assert_eq!(m.bit(1, c), m2.bit(0, c));
            assert_eq!(m.bit(2, c), m1.bit(1, c));
            assert_eq!(m.bit(3, c), m2.bit(1, c));
        }
    }

    #[test]
    fn coordinate_count_divides() {
        let inner = DigitalNetBase2::identity(2, 2, 4).unwrap();
        assert_eq!(interlace(&inner, 2).unwrap().dim(), 2);
        let inner3 = DigitalNetBase2::identity(2, 2, 3).unwrap();
        assert!(interlace(&inner3, 2).is_err());
    }

    #[test]
    fn output_depends_only_on_own_block() {
        // changing inner coordinates outside block j leaves output j unchanged
        let m1 = BinaryMatrix::from_col_words(3, vec![0b100, 0b010, 0b001]).unwrap();
        let m2 = BinaryMatrix::from_col_words(3, vec![0b010, 0b100, 0b011]).unwrap();
        let m3 = BinaryMatrix::from_col_words(3, vec![0b001, 0b110, 0b100]).unwrap();
        let m4 = BinaryMatrix::from_col_words(3, vec![0b101, 0b010, 0b100]).unwrap();
        let a = DigitalNetBase2::new(3, 3, vec![m1.clone(), m2.clone(), m3, m4.clone()]).unwrap();
        let m3b = BinaryMatrix::from_col_words(3, vec![0b011, 0b010, 0b100]).unwrap();
        let b = DigitalNetBase2::new(3, 3, vec![m1, m2, m3b, m4]).unwrap();
        let ia = interlace(&a, 2).unwrap();
        let ib = interlace(&b, 2).unwrap();
        assert_eq!(ia.matrix(0), ib.matrix(0));
        assert_ne!(ia.matrix(1), ib.matrix(1));
    }

    #[test]
    fn words_match_matrix_route() {
        let m1 = BinaryMatrix::from_col_words(4, vec![0b1000, 0b0100, 0b0010]).unwrap();
        let m2 = BinaryMatrix::from_col_words(4, vec![0b0110, 0b1000, 0b0101]).unwrap();
        let inner = DigitalNetBase2::new(3, 4, vec![m1, m2]).unwrap();
        let out = interlace(&inner, 2).unwrap();
        let words = interlace_words(&inner.all_words(), 2, 4, 2).unwrap();
        for i in 0..8u64 {
            assert_eq!(out.point_word(i, 0), words[i as usize]);
        }
    }
}
