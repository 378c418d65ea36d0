//! Rank-1 lattice rules.

use crate::error::{Error, Result};

/// Rank-1 lattice point set {i·a/n mod 1 : 0 ≤ i < n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Lattice {
    n: u64,
    gen: Vec<u64>,
}

impl Rank1Lattice {
    pub fn new(n: u64, gen: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("lattice needs n >= 1".into()));
        }
        if gen.is_empty() {
            return Err(Error::InvalidArgument("empty generating vector".into()));
        }
        if gen.iter().any(|&a| a >= n) {
            return Err(Error::InvalidArgument("generating components must lie in Z_n".into()));
        }
        Ok(Rank1Lattice { n, gen })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.gen.len()
    }

    pub fn gen(&self) -> &[u64] {
        &self.gen
    }

    /// Coordinate j of point i as the residue (i·a_j mod n); the point value
    /// is this over n.
    #[inline]
    pub fn residue(&self, i: u64, j: usize) -> u64 {
        ((i as u128 * self.gen[j] as u128) % self.n as u128) as u64
    }

    /// Point i, coordinate j equal to (i·a_j mod n)/n.
    pub fn point(&self, i: u64) -> Result<Vec<f64>> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n });
        }
        let n = self.n as f64;
        Ok((0..self.dim()).map(|j| self.residue(i, j) as f64 / n).collect())
    }

    /// All n points, row-major.
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n as usize * self.dim());
        for i in 0..self.n {
            out.extend(self.point(i).unwrap());
        }
        out
    }

    /// The embedded rule with modulus n' = 2^k' sharing this generator;
    /// requires n to be a power of two and n' ≤ n.
    pub fn embedded(&self, k_level: u32) -> Result<Rank1Lattice> {
        if !self.n.is_power_of_two() {
            return Err(Error::InvalidArgument("embedded levels need n = 2^k".into()));
        }
        let np = 1u64 << k_level;
        if np > self.n {
            return Err(Error::InvalidArgument("level exceeds lattice size".into()));
        }
        Rank1Lattice::new(np, self.gen.iter().map(|&a| a % np).collect())
    }
}

/// The Korobov vector (1, a, a² mod n, …, a^{s−1} mod n).
pub fn korobov_vector(a: u64, s: usize, n: u64) -> Result<Vec<u64>> {
    if a < 1 || a >= n {
        return Err(Error::InvalidArgument(format!("Korobov parameter {a} outside [1, {n})")));
    }
    let mut v = Vec::with_capacity(s);
    let mut x = 1u64;
    for _ in 0..s {
        v.push(x);
        x = ((x as u128 * a as u128) % n as u128) as u64;
    }
    Ok(v)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The units of Z_n in ascending order (for n = 1 this is {0}, the empty
/// product convention so the one-point lattice stays representable).
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&a| gcd_u64(a, n) == 1).collect()
}
