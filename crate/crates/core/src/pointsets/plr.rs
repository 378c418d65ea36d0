//! Polynomial lattice rules in base 2 and their high-order variant.

use crate::error::{Error, Result};
use crate::gf2::{expansion_digits, expansion_matrix, gcd_poly, poly_mul_mod, BinaryPoly, MAX_K};
use crate::pointsets::net::DigitalNetBase2;

/// A polynomial lattice rule: modulus Q(z) of degree k and a generating
/// vector of polynomials of degree < k, each coprime with Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialLatticeRule {
    modulus: BinaryPoly,
    gen: Vec<BinaryPoly>,
    w: u32,
}

impl PolynomialLatticeRule {
    pub fn new(modulus: BinaryPoly, gen: Vec<BinaryPoly>, w: u32) -> Result<Self> {
        let k = modulus.degree().ok_or(Error::ZeroModulus)?;
        if k < 1 || k > MAX_K {
            return Err(Error::InvalidArgument(format!("modulus degree {k} out of range")));
        }
        if gen.is_empty() {
            return Err(Error::InvalidArgument("empty generating vector".into()));
        }
        for (j, a) in gen.iter().enumerate() {
            if let Some(da) = a.degree() {
                if da >= k {
                    return Err(Error::InvalidArgument(format!(
                        "generating polynomial {} has degree {da} >= {k}",
                        j + 1
                    )));
                }
            }
            if gcd_poly(*a, modulus)? != BinaryPoly::ONE {
                return Err(Error::InvalidArgument(format!(
                    "generating polynomial {} shares a factor with the modulus",
                    j + 1
                )));
            }
        }
        Ok(PolynomialLatticeRule { modulus, gen, w })
    }

    pub fn modulus(&self) -> BinaryPoly {
        self.modulus
    }

    pub fn k(&self) -> u32 {
        self.modulus.degree().unwrap()
    }

    pub fn n(&self) -> u64 {
        1u64 << self.k()
    }

    pub fn dim(&self) -> usize {
        self.gen.len()
    }

    pub fn gen(&self) -> &[BinaryPoly] {
        &self.gen
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    /// The digital net whose matrices are the Hankel expansions of a_j/Q.
    pub fn to_net(&self) -> Result<DigitalNetBase2> {
        let matrices = self
            .gen
            .iter()
            .map(|&a| expansion_matrix(a, self.modulus, self.w))
            .collect::<Result<Vec<_>>>()?;
        DigitalNetBase2::new(self.k(), self.w, matrices)
    }

    /// Direct evaluation of coordinate j at index i: the first w fractional
    /// digits of h_i(z)·a_j(z)/Q(z), where h_i has the binary digits of i as
    /// coefficients (least significant digit = constant term).
    pub fn point_word_direct(&self, i: u64, j: usize) -> Result<u64> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n() });
        }
        let h = BinaryPoly::from_bits(i);
        let r = poly_mul_mod(h, self.gen[j], self.modulus)?;
        let digits = expansion_digits(r, self.modulus, self.w as usize)?;
        let mut word = 0u64;
        for (idx, &d) in digits.iter().enumerate() {
            if d == 1 {
                word |= 1u64 << (self.w - 1 - idx as u32);
            }
        }
        Ok(word)
    }
}

/// The first 2^k points of a high-order rule with modulus of degree α·k.
/// Unlike a plain polynomial lattice rule, the truncated generating columns
/// need not have an invertible top k×k block, so this is a point list rather
/// than a digital net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighOrderRule {
    modulus_tilde: BinaryPoly,
    gen: Vec<BinaryPoly>,
    k: u32,
    w: u32,
    cols: Vec<Vec<u64>>, // first k expansion columns per coordinate
}

impl HighOrderRule {
    pub fn new(modulus_tilde: BinaryPoly, gen: Vec<BinaryPoly>, k: u32, w: u32) -> Result<Self> {
        let deg = modulus_tilde.degree().ok_or(Error::ZeroModulus)?;
        if k < 1 || k > MAX_K || deg % k != 0 {
            return Err(Error::InvalidArgument(format!(
                "modulus degree {deg} is not a multiple of k={k}"
            )));
        }
        if w < k {
            return Err(Error::InvalidArgument("need w >= k".into()));
        }
        let mut cols = Vec::with_capacity(gen.len());
        for a in &gen {
            if let Some(da) = a.degree() {
                if da >= deg {
                    return Err(Error::InvalidArgument(
                        "generating degrees must be below the modulus degree".into(),
                    ));
                }
            }
            if gcd_poly(*a, modulus_tilde)? != BinaryPoly::ONE {
                return Err(Error::InvalidArgument(
                    "generating polynomial shares a factor with the modulus".into(),
                ));
            }
            let m = expansion_matrix(*a, modulus_tilde, w)?;
            cols.push((0..k).map(|c| m.col_word(c)).collect());
        }
        Ok(HighOrderRule { modulus_tilde, gen, k, w, cols })
    }

    pub fn order(&self) -> u32 {
        self.modulus_tilde.degree().unwrap() / self.k
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
        self.gen.len()
    }

    pub fn modulus(&self) -> BinaryPoly {
        self.modulus_tilde
    }

    pub fn gen(&self) -> &[BinaryPoly] {
        &self.gen
    }

    #[inline]
    pub fn point_word(&self, i: u64, j: usize) -> u64 {
        let mut acc = 0u64;
        let mut bits = i;
        while bits != 0 {
            let c = bits.trailing_zeros();
            acc ^= self.cols[j][c as usize];
            bits &= bits - 1;
        }
        acc
    }

    /// Digit words of point i (index encodes h(z) with deg(h) < k).
    pub fn point_words(&self, i: u64) -> Result<Vec<u64>> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n() });
        }
        Ok((0..self.dim()).map(|j| self.point_word(i, j)).collect())
    }

    /// All 2^k points, row-major digit words.
    pub fn all_words(&self) -> Vec<u64> {
        let s = self.dim();
        let mut out = vec![0u64; self.n() as usize * s];
        for i in 0..self.n() {
            for j in 0..s {
                out[i as usize * s + j] = self.point_word(i, j);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u64) -> BinaryPoly {
        BinaryPoly::from_bits(bits)
    }

    #[test]
    fn smallest_plr() {
        // Q = z, a = (1), w = 1: single column (1), points {0, 0.5}
        let plr = PolynomialLatticeRule::new(p(0b10), vec![BinaryPoly::ONE], 1).unwrap();
        let net = plr.to_net().unwrap();
        assert_eq!(net.matrix(0).col_word(0), 0b1);
        assert_eq!(net.point(0).unwrap(), vec![0.0]);
        assert_eq!(net.point(1).unwrap(), vec![0.5]);
    }

    #[test]
    fn first_rows_of_small_plr() {
        // Q = z^2+z+1, a = (1), w = 4: digit streams of 1/Q and z/Q give
        // first two rows (0 1 / 1 1).
        let plr = PolynomialLatticeRule::new(p(0b111), vec![BinaryPoly::ONE], 4).unwrap();
        let net = plr.to_net().unwrap();
        let m = net.matrix(0);
        assert!(!m.bit(0, 0) && m.bit(0, 1));
        assert!(m.bit(1, 0) && m.bit(1, 1));
    }

    #[test]
    fn top_block_invertible_for_admissible_gen() {
        let q = p(0b10011); // z^4+z+1, irreducible
        for bits in 1u64..16 {
            let plr = PolynomialLatticeRule::new(q, vec![p(bits)], 8).unwrap();
            let net = plr.to_net().unwrap();
            assert_eq!(net.matrix(0).top_square_rank(), 4);
        }
    }

    #[test]
    fn net_points_match_direct_evaluation() {
        // for every modulus degree <= 6 touched here, the matrix route and
        // the division route agree at every index
        for (qbits, gens) in
            [(0b111u64, vec![1u64, 2, 3]), (0b1011, vec![1, 3, 6]), (0b1000001, vec![1, 35])]
        {
            let q = p(qbits);
            let gen: Vec<BinaryPoly> = gens.into_iter().map(p).collect();
            let plr = match PolynomialLatticeRule::new(q, gen, 16) {
                Ok(plr) => plr,
                Err(_) => continue, // q with a shared factor in the list
            };
            let net = plr.to_net().unwrap();
            for i in 0..plr.n() {
                for j in 0..plr.dim() {
                    assert_eq!(
                        net.point_word(i, j),
                        plr.point_word_direct(i, j).unwrap(),
                        "mismatch at i={i}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn admissibility_enforced() {
        let q = p(0b110); // z^2+z = z(z+1)
        assert!(PolynomialLatticeRule::new(q, vec![p(0b10)], 4).is_err()); // gcd = z
        assert!(PolynomialLatticeRule::new(q, vec![p(0b100)], 4).is_err()); // degree too high
    }

    #[test]
    fn hoplr_alpha_one_is_plain_plr() {
        let q = p(0b1011);
        let gen = vec![p(1), p(0b101)];
        let plr = PolynomialLatticeRule::new(q, gen.clone(), 8).unwrap();
        let net = plr.to_net().unwrap();
        let hop = HighOrderRule::new(q, gen, 3, 8).unwrap();
        assert_eq!(hop.order(), 1);
        for i in 0..8 {
            assert_eq!(net.point_words(i).unwrap(), hop.point_words(i).unwrap());
        }
    }

    #[test]
    fn hoplr_truncates_to_first_points() {
        // alpha = 2, k = 1, modulus z^2+z+1: points are {0, first digits of 1/Q}
        let q = p(0b111);
        let hop = HighOrderRule::new(q, vec![BinaryPoly::ONE], 1, 6).unwrap();
        assert_eq!(hop.n(), 2);
        assert_eq!(hop.point_words(0).unwrap(), vec![0]);
        // digits of 1/Q: 0,1,1,0,1,1
        assert_eq!(hop.point_words(1).unwrap(), vec![0b011011]);
        // and those equal the first 2 points of the full 4-point rule
        let full = PolynomialLatticeRule::new(q, vec![BinaryPoly::ONE], 6).unwrap();
        let full_net = full.to_net().unwrap();
        for i in 0..2 {
            assert_eq!(full_net.point_words(i).unwrap(), hop.point_words(i).unwrap());
        }
    }

    #[test]
    fn hoplr_point_count_is_2_to_k() {
        let q = p(0b1000011); // degree 6 = alpha*k with alpha=2, k=3
        let hop = HighOrderRule::new(q, vec![p(1)], 3, 10).unwrap();
        assert_eq!(hop.n(), 8);
        assert_eq!(hop.order(), 2);
        assert!(HighOrderRule::new(q, vec![p(1)], 4, 10).is_err()); // 6 not divisible by 4
    }
}
