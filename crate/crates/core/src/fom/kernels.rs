//! Kernel functions φ for the weighted merit combiner.
//!
//! Dyadic kernels take ⌊log₂ x⌋ from the binary representation of the
//! coordinate (digit word or float exponent), never from a floating-point
//! logarithm, so boundary values 2^{-ℓ} classify exactly.

use crate::error::{Error, Result};

/// One point coordinate: either a plain real in [0,1) or an exact dyadic
/// value word/2^w.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coord {
    Real(f64),
    Dyadic { word: u64, w: u32 },
}

impl Coord {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Coord::Real(x) => x,
            Coord::Dyadic { word, w } => word as f64 * 0.5f64.powi(w as i32),
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        match self {
            Coord::Real(x) => x == 0.0,
            Coord::Dyadic { word, .. } => word == 0,
        }
    }

    /// ⌊log₂ x⌋, or None for x = 0. Exact: from the word's bit length or the
    /// float's exponent field.
    #[inline]
    pub fn floor_log2(self) -> Option<i32> {
        match self {
            Coord::Dyadic { word, w } => {
                if word == 0 {
                    None
                } else {
                    Some(63 - word.leading_zeros() as i32 - w as i32)
                }
            }
            Coord::Real(x) => {
                if x == 0.0 {
                    return None;
                }
                debug_assert!(x > 0.0 && x < 1.0);
                let bits = x.to_bits();
                let exp = ((bits >> 52) & 0x7ff) as i32;
                if exp != 0 {
                    Some(exp - 1023)
                } else {
                    // subnormal: value = mantissa * 2^-1074
                    let mant = bits & ((1u64 << 52) - 1);
                    Some(63 - mant.leading_zeros() as i32 - 1074)
                }
            }
        }
    }

    /// True iff x ≥ 2^{-k}.
    #[inline]
    pub fn ge_pow2_neg(self, k: u32) -> bool {
        match self.floor_log2() {
            None => false,
            Some(e) => e >= -(k as i32),
        }
    }
}

/// 2^e for integer e, exact.
#[inline]
pub fn exp2i(e: i32) -> f64 {
    2.0f64.powi(e)
}

/// Bernoulli numbers b_0..b_n (b_1 = -1/2 convention).
fn bernoulli_numbers(n: usize) -> Vec<f64> {
    let mut b = vec![0.0f64; n + 1];
    b[0] = 1.0;
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) b_j = 0
        let mut acc = 0.0;
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += binomial(m + 1, j) * bj;
        }
        b[m] = -acc / binomial(m + 1, m);
    }
    b
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Coefficients of B_alpha(x) in ascending powers: B_n(x) = Σ C(n,i) b_{n-i} x^i.
fn bernoulli_poly_coeffs(alpha: usize) -> Vec<f64> {
    let b = bernoulli_numbers(alpha);
    (0..=alpha).map(|i| binomial(alpha, i) * b[alpha - i]).collect()
}

/// The lattice kernel φ(x) = -(-4π²)^{α/2} B_α(x)/α! for even integer α ≥ 2.
#[derive(Clone, Debug)]
pub struct PAlphaKernel {
    /// Coefficients of the scaled Bernoulli polynomial, ascending powers.
    coeffs: Vec<f64>,
}

impl PAlphaKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        let a = alpha as u32;
        if alpha <= 0.0 || alpha != a as f64 || a % 2 != 0 {
            return Err(Error::Unsupported(format!(
                "the Bernoulli kernel form needs an even integer alpha, got {alpha}; \
                 use the dual-lattice oracle for other alpha"
            )));
        }
        let half = (a / 2) as i32;
        let four_pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        let mut factor = -(-four_pi2).powi(half);
        for i in 1..=a {
            factor /= i as f64;
        }
        let coeffs = bernoulli_poly_coeffs(a as usize).into_iter().map(|c| c * factor).collect();
        Ok(PAlphaKernel { coeffs })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// μ(α) = (1 - 2^{1-α})^{-1} for α > 1.
pub fn mu_alpha(alpha: f64) -> Result<f64> {
    if alpha <= 1.0 {
        return Err(Error::InvalidArgument(format!("need alpha > 1, got {alpha}")));
    }
    Ok(1.0 / (1.0 - (1.0 - alpha).exp2()))
}

/// The digital-shift kernel φ_α(x) = μ(α) − 1[x>0]·2^{(1+⌊log₂x⌋)(α−1)}(μ(α)+1).
pub fn kernel_p_alpha_tilde(c: Coord, alpha: f64) -> Result<f64> {
    let mu = mu_alpha(alpha)?;
    Ok(phi_tilde_with_mu(c, alpha, mu))
}

#[inline]
pub fn phi_tilde_with_mu(c: Coord, alpha: f64, mu: f64) -> f64 {
    match c.floor_log2() {
        None => mu,
        Some(e) => {
            let t = (1 + e) as f64 * (alpha - 1.0);
            let pw = if t == t.trunc() { exp2i(t as i32) } else { t.exp2() };
            mu - pw * (mu + 1.0)
        }
    }
}

/// The order-1 Sobolev kernel 1/6 − 1[x>0]·2^{⌊log₂x⌋−1}, computed as
/// φ₂(x)/12 so that 12·kernel_sobolev1(x) reproduces kernel_p_alpha_tilde(x, 2)
/// bit for bit.
#[inline]
pub fn kernel_sobolev1(c: Coord) -> f64 {
    phi_tilde_with_mu(c, 2.0, 2.0) / 12.0
}

/// φ_k(u) for the closed-form star-discrepancy bound: −⌊log₂u⌋/2 if
/// u ≥ 2^{-k}, else 1 + k/2.
#[inline]
pub fn kernel_r2prime(c: Coord, k: u32) -> f64 {
    match c.floor_log2() {
        Some(e) if e >= -(k as i32) => -(e as f64) / 2.0,
        _ => 1.0 + k as f64 / 2.0,
    }
}

/// Which interlaced worst-case/variance bound a FOM uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterlacedVariant {
    /// First deterministic bound; any integer α ≥ 2, d ≥ 2; q = 1.
    A,
    /// Second deterministic bound; 1 < d ≤ α; q = 1; tighter where valid.
    B,
    /// Scrambled-variance bound; q = 2.
    C,
}

/// Per-digit kernel φ_{α,d,ℓ} of the interlaced bounds, with the convention
/// 2^{⌊log₂ 0⌋} = 0.
#[derive(Clone, Debug)]
pub struct InterlacedKernel {
    pub variant: InterlacedVariant,
    pub alpha: u32,
    pub d: u32,
}

impl InterlacedKernel {
    pub fn new(variant: InterlacedVariant, alpha: f64, d: u32) -> Result<Self> {
        let a = alpha as u32;
        if alpha <= 0.0 || alpha != a as f64 {
            return Err(Error::InvalidArgument(format!(
                "interlaced bounds need integer alpha, got {alpha}"
            )));
        }
        match variant {
            InterlacedVariant::A => {
                if a < 2 || d < 2 {
                    return Err(Error::InvalidArgument(
                        "first interlaced bound needs alpha >= 2 and d >= 2".into(),
                    ));
                }
            }
            InterlacedVariant::B => {
                if d <= 1 || d > a {
                    return Err(Error::InvalidArgument(
                        "second interlaced bound holds only for 1 < d <= alpha".into(),
                    ));
                }
            }
            InterlacedVariant::C => {
                if a < 1 || d < 1 {
                    return Err(Error::InvalidArgument("need alpha >= 1 and d >= 1".into()));
                }
            }
        }
        Ok(InterlacedKernel { variant, alpha: a, d })
    }

    /// φ_{α,d,ℓ}(x) for the 1-based position ℓ within the block. Only the
    /// second bound depends on ℓ.
    pub fn phi_ell(&self, ell: u32, c: Coord) -> f64 {
        let e = c.floor_log2();
        match self.variant {
            InterlacedVariant::A => {
                let m = self.alpha.min(self.d);
                let num = match e {
                    None => 1.0,
                    Some(e) => 1.0 - exp2f(((m - 1) as i64 * e as i64) as f64)
                        * (exp2i(m as i32) - 1.0),
                };
                num / (exp2f((self.alpha as f64 + 2.0) / 2.0) * (exp2i(m as i32 - 1) - 1.0))
            }
            InterlacedVariant::B => {
                let dm1 = self.d - 1;
                let num = match e {
                    None => 1.0,
                    Some(e) => {
                        1.0 - exp2f((dm1 as i64 * e as i64) as f64) * (exp2i(self.d as i32) - 1.0)
                    }
                };
                exp2i(dm1 as i32) * num / (exp2i(ell as i32) * (exp2i(dm1 as i32) - 1.0))
            }
            InterlacedVariant::C => {
                let m = self.alpha.min(self.d);
                let num = match e {
                    None => 1.0,
                    Some(e) => {
                        1.0 - exp2f((2 * m as i64 * e as i64) as f64)
                            * (exp2i(2 * m as i32 + 1) - 1.0)
                    }
                };
                num / (exp2i(self.alpha as i32) * (exp2i(2 * m as i32) - 1.0))
            }
        }
    }

    /// Weight-transform base: γ̃_u = γ_u·factor^{|u|}.
    pub fn weight_factor(&self) -> f64 {
        match self.variant {
            InterlacedVariant::A => {
                exp2f(self.alpha as f64 * (2 * self.d - 1) as f64 / 2.0)
            }
            InterlacedVariant::B => 1.0,
            InterlacedVariant::C => {
                let e = 2 * self.d.saturating_sub(self.alpha) as i32
                    + ((2 * self.d - 1) * self.alpha) as i32;
                exp2i(e)
            }
        }
    }

    /// The norm exponent q the bound is stated with.
    pub fn natural_q(&self) -> f64 {
        match self.variant {
            InterlacedVariant::A | InterlacedVariant::B => 1.0,
            InterlacedVariant::C => 2.0,
        }
    }

    /// Composite per-output-coordinate kernel −1 + Π_ℓ (1 + φ_ℓ(x_ℓ)) over
    /// one block of d inner coordinates.
    pub fn block_phi(&self, block: &[Coord]) -> f64 {
        debug_assert_eq!(block.len(), self.d as usize);
        let mut prod = 1.0;
        for (idx, &c) in block.iter().enumerate() {
            prod *= 1.0 + self.phi_ell(idx as u32 + 1, c);
        }
        prod - 1.0
    }
}

#[inline]
fn exp2f(t: f64) -> f64 {
    if t == t.trunc() && t.abs() < 1020.0 {
        exp2i(t as i32)
    } else {
        t.exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn dy(word: u64, w: u32) -> Coord {
        Coord::Dyadic { word, w }
    }

    #[test]
    fn floor_log2_exact_on_boundaries() {
        assert_eq!(dy(0, 8).floor_log2(), None);
        assert_eq!(dy(1 << 7, 8).floor_log2(), Some(-1)); // 0.5
        assert_eq!(dy(1 << 6, 8).floor_log2(), Some(-2)); // 0.25
        assert_eq!(dy((1 << 7) - 1, 8).floor_log2(), Some(-2)); // just below 0.5
        assert_eq!(Coord::Real(0.5).floor_log2(), Some(-1));
        assert_eq!(Coord::Real(0.49999999).floor_log2(), Some(-2));
        assert_eq!(Coord::Real(2f64.powi(-20)).floor_log2(), Some(-20));
    }

    #[test]
    fn p_alpha_kernel_values() {
        let k2 = PAlphaKernel::new(2.0).unwrap();
        assert!((k2.eval(0.0) - PI * PI / 3.0).abs() < 1e-12);
        assert!((k2.eval(0.5) + PI * PI / 6.0).abs() < 1e-12);
        // B_2 symmetry
        for x in [0.1, 0.3, 0.45] {
            assert!((k2.eval(x) - k2.eval(1.0 - x)).abs() < 1e-12);
        }
        // odd alpha refused
        assert!(PAlphaKernel::new(3.0).is_err());
        let k4 = PAlphaKernel::new(4.0).unwrap();
        // -(-4π²)² B_4(0)/4! = -16π⁴·(-1/30)/24 = 2π⁴/90... B_4(0) = -1/30
        let expect = 16.0 * PI.powi(4) * (1.0 / 30.0) / 24.0;
        assert!((k4.eval(0.0) - expect).abs() < 1e-10);
    }

    #[test]
    fn p_alpha_tilde_values() {
        assert_eq!(kernel_p_alpha_tilde(dy(0, 4), 2.0).unwrap(), 2.0);
        assert!((kernel_p_alpha_tilde(dy(0, 4), 3.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(kernel_p_alpha_tilde(dy(8, 4), 2.0).unwrap(), -1.0); // x = 0.5
        assert!(kernel_p_alpha_tilde(dy(0, 4), 1.0).is_err());
    }

    #[test]
    fn sobolev1_values() {
        assert!((kernel_sobolev1(dy(0, 4)) - 1.0 / 6.0).abs() < 1e-16);
        assert!((kernel_sobolev1(dy(8, 4)) + 1.0 / 12.0).abs() < 1e-16);
    }

    #[test]
    fn sobolev1_times_12_is_phi2_bitwise() {
        // every possible leading-digit position for 20-digit words
        for word in [0u64, 1, 2, 3, 5, 8, 513, 1 << 19, (1 << 20) - 1] {
            let c = dy(word, 20);
            let lhs = kernel_sobolev1(c) * 12.0;
            let rhs = kernel_p_alpha_tilde(c, 2.0).unwrap();
            assert!(
                lhs == rhs,
                "word {word}: {lhs:?} != {rhs:?} (bits {:x} vs {:x})",
                lhs.to_bits(),
                rhs.to_bits()
            );
        }
    }

    #[test]
    fn r2prime_phi_values() {
        assert_eq!(kernel_r2prime(dy(0, 6), 2), 2.0); // 1 + k/2
        assert_eq!(kernel_r2prime(dy(1 << 5, 6), 1), 0.5); // x = 0.5
        assert_eq!(kernel_r2prime(dy(1, 6), 2), 2.0); // x = 2^-6 < 2^-2
        assert_eq!(kernel_r2prime(dy(1 << 4, 6), 2), 1.0); // x = 0.25
    }

    #[test]
    fn interlaced_c_values() {
        let k = InterlacedKernel::new(InterlacedVariant::C, 2.0, 2).unwrap();
        assert!((k.phi_ell(1, dy(0, 8)) - 1.0 / 60.0).abs() < 1e-16);
        assert_eq!(k.weight_factor(), 64.0); // D_{2,2} = 2^{0+6}
        // d = 1 collapses the block product to a single kernel
        let k1 = InterlacedKernel::new(InterlacedVariant::C, 3.0, 1).unwrap();
        let c = dy(3, 8);
        assert!((k1.block_phi(&[c]) - k1.phi_ell(1, c)).abs() < 1e-15);
    }

    #[test]
    fn interlaced_a_is_ell_independent() {
        let k = InterlacedKernel::new(InterlacedVariant::A, 2.0, 2).unwrap();
        for word in [0u64, 1, 7, 128] {
            let c = dy(word, 8);
            assert_eq!(k.phi_ell(1, c), k.phi_ell(2, c));
        }
        assert!((k.weight_factor() - 2f64.powf(3.0)).abs() < 1e-12); // 2^{2·(2·2−1)/2}
    }

    #[test]
    fn interlaced_b_validation() {
        assert!(InterlacedKernel::new(InterlacedVariant::B, 2.0, 1).is_err());
        assert!(InterlacedKernel::new(InterlacedVariant::B, 2.0, 3).is_err());
        let k = InterlacedKernel::new(InterlacedVariant::B, 3.0, 2).unwrap();
        // φ depends on ℓ through the 2^ℓ denominator
        let c = dy(64, 8);
        assert!((k.phi_ell(1, c) - 2.0 * k.phi_ell(2, c)).abs() < 1e-15);
        assert_eq!(k.weight_factor(), 1.0);
    }
}
