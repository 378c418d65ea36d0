//! Arithmetic over Z₂[z] and binary linear algebra.
//!
//! Polynomials are stored as `u64` bit masks with the coefficient of z^i at
//! bit i, so the integer encoding used in parameter files is just the raw
//! bits. The zero polynomial has degree "minus infinity", represented as
//! `None`.

use crate::error::{Error, Result};

/// Largest supported size exponent k (number of points n = 2^k).
pub const MAX_K: u32 = 30;
/// Largest supported number of binary output digits.
pub const MAX_W: u32 = 63;

/// A polynomial over Z₂, bit i = coefficient of z^i.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BinaryPoly(pub u64);

impl BinaryPoly {
    pub const ZERO: BinaryPoly = BinaryPoly(0);
    pub const ONE: BinaryPoly = BinaryPoly(1);
    /// The monomial z.
    pub const Z: BinaryPoly = BinaryPoly(2);

    pub fn from_bits(bits: u64) -> Self {
        BinaryPoly(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros())
        }
    }

    /// Addition = subtraction = XOR over Z₂.
    pub fn add(self, rhs: Self) -> Self {
        BinaryPoly(self.0 ^ rhs.0)
    }

    /// Carryless product, full width. Panics on overflow past degree 63,
    /// which cannot happen for the degrees this crate supports (≤ 30 each
    /// via `MAX_K`, ≤ 60 for high-order moduli times degree < k operands).
    pub fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        if a == 0 || b == 0 {
            return BinaryPoly::ZERO;
        }
        let da = 63 - a.leading_zeros();
        let db = 63 - b.leading_zeros();
        assert!(da + db <= 63, "carryless product overflows u64");
        let mut acc = 0u64;
        let mut bb = b;
        let mut shift = 0;
        while bb != 0 {
            if bb & 1 == 1 {
                acc ^= a << shift;
            }
            bb >>= 1;
            shift += 1;
        }
        BinaryPoly(acc)
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(self, divisor: Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let dd = divisor.degree().unwrap();
        let mut rem = self.0;
        let mut quo = 0u64;
        while let Some(dr) = BinaryPoly(rem).degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            quo |= 1 << shift;
            rem ^= divisor.0 << shift;
        }
        Ok((BinaryPoly(quo), BinaryPoly(rem)))
    }

    pub fn rem(self, modulus: Self) -> Result<Self> {
        Ok(self.div_rem(modulus)?.1)
    }
}

impl std::fmt::Debug for BinaryPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..64).rev() {
            if self.0 >> i & 1 == 1 {
                if !first {
                    write!(f, "+")?;
                }
                match i {
                    0 => write!(f, "1")?,
                    1 => write!(f, "z")?,
                    _ => write!(f, "z^{i}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

/// (a·b) mod q over Z₂, with reduction interleaved so intermediates stay in
/// 64 bits for deg(q) ≤ 63.
pub fn poly_mul_mod(a: BinaryPoly, b: BinaryPoly, q: BinaryPoly) -> Result<BinaryPoly> {
    if q.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let dq = q.degree().unwrap();
    if dq == 0 {
        // modulus is the constant 1: everything reduces to 0
        return Ok(BinaryPoly::ZERO);
    }
    let mut a = a.rem(q)?.0;
    let b = b.rem(q)?.0;
    let top = 1u64 << dq;
    let mut acc = 0u64;
    for i in 0..=b.ilog2_or_zero() {
        if b >> i & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        if a & top != 0 {
            a ^= q.0;
        }
    }
    Ok(BinaryPoly(acc))
}

trait Ilog2OrZero {
    fn ilog2_or_zero(self) -> u32;
}
impl Ilog2OrZero for u64 {
    fn ilog2_or_zero(self) -> u32 {
        if self == 0 {
            0
        } else {
            63 - self.leading_zeros()
        }
    }
}

/// Monic greatest common divisor. Over Z₂ every nonzero polynomial is monic.
pub fn gcd_poly(a: BinaryPoly, b: BinaryPoly) -> Result<BinaryPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidArgument("gcd of two zero polynomials".into()));
    }
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let r = x.rem(y)?;
        x = y;
        y = r;
    }
    Ok(x)
}

/// z^(2^e) mod q by repeated squaring.
fn frobenius_power(e: u32, q: BinaryPoly) -> Result<BinaryPoly> {
    let mut x = BinaryPoly::Z.rem(q)?;
    for _ in 0..e {
        x = poly_mul_mod(x, x, q)?;
    }
    Ok(x)
}

/// Rabin irreducibility test over Z₂: q of degree d is irreducible iff
/// z^(2^d) ≡ z (mod q) and gcd(z^(2^(d/p)) − z, q) = 1 for every prime p | d.
pub fn is_irreducible(q: BinaryPoly) -> Result<bool> {
    let d = match q.degree() {
        None => return Err(Error::InvalidArgument("zero polynomial".into())),
        Some(0) => return Err(Error::InvalidArgument("constant polynomial".into())),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    // q must not be divisible by z (constant term) unless q = z itself
    let zd = frobenius_power(d, q)?;
    if zd.add(BinaryPoly::Z).rem(q)? != BinaryPoly::ZERO {
        return Ok(false);
    }
    for p in prime_factors(d) {
        let x = frobenius_power(d / p, q)?;
        let g = gcd_poly(x.add(BinaryPoly::Z), q)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest irreducible polynomial of degree k under the integer encoding.
/// This is the default modulus rule for searches.
pub fn default_modulus(k: u32) -> Result<BinaryPoly> {
    if k == 0 || k > 2 * MAX_K {
        return Err(Error::InvalidArgument(format!("modulus degree {k} out of range")));
    }
    let lo = 1u64 << k;
    for bits in lo..(lo << 1) {
        let q = BinaryPoly(bits);
        if is_irreducible(q)? {
            return Ok(q);
        }
    }
    unreachable!("an irreducible polynomial exists for every degree");
}

/// True iff z generates the multiplicative group of Z₂[z]/q, for irreducible q.
pub fn is_primitive(q: BinaryPoly) -> Result<bool> {
    // z must be a unit mod q, so the constant term must be 1
    if q.0 & 1 == 0 || !is_irreducible(q)? {
        return Ok(false);
    }
    let d = q.degree().unwrap();
    let order: u64 = (1u64 << d) - 1;
    for p in prime_factors_u64(order) {
        if pow_mod(BinaryPoly::Z, order / p, q)? == BinaryPoly::ONE {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// x^e mod q by square and multiply.
pub fn pow_mod(x: BinaryPoly, mut e: u64, q: BinaryPoly) -> Result<BinaryPoly> {
    let mut base = x.rem(q)?;
    let mut acc = BinaryPoly::ONE.rem(q)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(acc, base, q)?;
        }
        base = poly_mul_mod(base, base, q)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Primitive polynomials of each degree in (degree, encoding) order.
/// `count` polynomials are returned; used to assign one polynomial per Sobol'
/// coordinate starting at the second coordinate.
pub fn primitive_polynomials(count: usize) -> Vec<BinaryPoly> {
    let mut out = Vec::with_capacity(count);
    let mut degree = 1u32;
    while out.len() < count {
        let lo = 1u64 << degree;
        for bits in lo..(lo << 1) {
            let q = BinaryPoly(bits);
            if is_primitive(q).unwrap_or(false) {
                out.push(q);
                if out.len() == count {
                    break;
                }
            }
        }
        degree += 1;
    }
    out
}

/// The digit stream x_1, x_2, … of the formal expansion of a(z)/q(z) as a
/// series in z^{-1}, for deg(a) < deg(q).
pub fn expansion_digits(a: BinaryPoly, q: BinaryPoly, count: usize) -> Result<Vec<u8>> {
    if q.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let k = q.degree().unwrap();
    if let Some(da) = a.degree() {
        if da >= k {
            return Err(Error::InvalidArgument("deg(a) must be < deg(q)".into()));
        }
    }
    let top = 1u64 << k;
    let mut r = a.0;
    let mut digits = Vec::with_capacity(count);
    for _ in 0..count {
        r <<= 1;
        if r & top != 0 {
            r ^= q.0;
            digits.push(1u8);
        } else {
            digits.push(0u8);
        }
    }
    Ok(digits)
}

/// A w×k matrix over Z₂. Column c is stored as a `u64` whose bit (w−1−r)
/// holds entry (r, c) for 0-based row r, i.e. the integer encoding
/// Σ_ℓ bit(ℓ,c)·2^{w−ℓ} used in net parameter files.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: u32,
    cols: u32,
    col_words: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zero(rows: u32, cols: u32) -> Self {
        assert!(rows >= 1 && rows <= MAX_W && cols >= 1 && cols <= MAX_W);
        BinaryMatrix { rows, cols, col_words: vec![0; cols as usize] }
    }

    pub fn identity(n: u32) -> Self {
        let mut m = BinaryMatrix::zero(n, n);
        for c in 0..n {
            m.col_words[c as usize] = 1u64 << (n - 1 - c);
        }
        m
    }

    pub fn from_col_words(rows: u32, col_words: Vec<u64>) -> Result<Self> {
        if rows < 1 || rows > MAX_W || col_words.is_empty() {
            return Err(Error::InvalidArgument("bad matrix dimensions".into()));
        }
        let mask = mask_u64(rows);
        if col_words.iter().any(|&w| w & !mask != 0) {
            return Err(Error::InvalidArgument("column word exceeds row count".into()));
        }
        let cols = col_words.len() as u32;
        Ok(BinaryMatrix { rows, cols, col_words })
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn col_word(&self, c: u32) -> u64 {
        self.col_words[c as usize]
    }

    pub fn col_words(&self) -> &[u64] {
        &self.col_words
    }

    pub fn bit(&self, r: u32, c: u32) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.col_words[c as usize] >> (self.rows - 1 - r) & 1 == 1
    }

    pub fn set_bit(&mut self, r: u32, c: u32, v: bool) {
        let b = 1u64 << (self.rows - 1 - r);
        if v {
            self.col_words[c as usize] |= b;
        } else {
            self.col_words[c as usize] &= !b;
        }
    }

    /// Row r as a bit word with bit c (LSB side) = entry (r, c).
    pub fn row_word(&self, r: u32) -> u64 {
        let mut w = 0u64;
        let shift = self.rows - 1 - r;
        for c in 0..self.cols {
            w |= (self.col_words[c as usize] >> shift & 1) << c;
        }
        w
    }

    /// Keep only the first `rows` rows.
    pub fn truncate_rows(&self, rows: u32) -> Self {
        assert!(rows >= 1 && rows <= self.rows);
        let shift = self.rows - rows;
        BinaryMatrix {
            rows,
            cols: self.cols,
            col_words: self.col_words.iter().map(|&w| w >> shift).collect(),
        }
    }

    /// Keep only the first `cols` columns.
    pub fn truncate_cols(&self, cols: u32) -> Self {
        assert!(cols >= 1 && cols <= self.cols);
        BinaryMatrix { rows: self.rows, cols, col_words: self.col_words[..cols as usize].to_vec() }
    }

    /// Rank over Z₂ by row elimination.
    pub fn rank(&self) -> u32 {
        let rows: Vec<u64> = (0..self.rows).map(|r| self.row_word(r)).collect();
        rank_of_rows(&rows)
    }

    /// Rank of the top cols×cols block; a valid generating matrix has full one.
    pub fn top_square_rank(&self) -> u32 {
        self.truncate_rows(self.cols.min(self.rows)).rank()
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.bit(r, c) { 1 } else { 0 })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn mask_u64(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Rank over Z₂ of a set of row words.
pub fn rank_of_rows(rows: &[u64]) -> u32 {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let hb = 63 - b.leading_zeros();
            if v >> hb & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            rank += 1;
        }
    }
    rank
}

/// The w×k generating matrix of the expansion a(z)/q(z): column c holds the
/// digits x_1..x_w of z^c·a(z)/q(z), so entry (r, c) = x_{r+1+c} where x is
/// the digit stream of a/q. Each row is the previous one shifted left, with
/// the last entry given by the recurrence with characteristic polynomial q.
pub fn expansion_matrix(a: BinaryPoly, q: BinaryPoly, w: u32) -> Result<BinaryMatrix> {
    let k = match q.degree() {
        None => return Err(Error::ZeroModulus),
        Some(k) => k,
    };
    if k == 0 {
        return Err(Error::InvalidArgument("modulus must have degree >= 1".into()));
    }
    if let Some(da) = a.degree() {
        if da >= k {
            return Err(Error::InvalidArgument("deg(a) must be < deg(q)".into()));
        }
    }
    if w < k || w > MAX_W {
        return Err(Error::InvalidArgument(format!("need k <= w <= {MAX_W}, got w={w}, k={k}")));
    }
    let digits = expansion_digits(a, q, (w + k - 1) as usize)?;
    let mut cols = Vec::with_capacity(k as usize);
    for c in 0..k {
        let mut word = 0u64;
        for r in 0..w {
            if digits[(r + c) as usize] == 1 {
                word |= 1u64 << (w - 1 - r);
            }
        }
        cols.push(word);
    }
    BinaryMatrix::from_col_words(w, cols)
}
