//! Sobol' nets: upper-triangular generating matrices from direction numbers.

use crate::error::{Error, Result};
use crate::gf2::{primitive_polynomials, BinaryMatrix, BinaryPoly};
use crate::pointsets::net::DigitalNetBase2;

/// Direction-number data for one coordinate (coordinate ≥ 2): a primitive
/// polynomial of degree e and the initial values m_1..m_e, each odd with
/// m_c < 2^c. Values past the provided list follow the standard recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SobolCoord {
    pub poly: BinaryPoly,
    pub m: Vec<u64>,
}

/// Direction numbers for coordinates 2..s; coordinate 1 is the identity
/// matrix (van der Corput) by convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SobolSpec {
    coords: Vec<SobolCoord>,
}

impl SobolSpec {
    pub fn new(coords: Vec<SobolCoord>) -> Result<Self> {
        for (idx, c) in coords.iter().enumerate() {
            let e = c.poly.degree().unwrap_or(0) as usize;
            if e == 0 {
                return Err(Error::InvalidArgument("constant Sobol' polynomial".into()));
            }
            if c.m.len() != e {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {} needs {e} initial direction numbers, got {}",
                    idx + 2,
                    c.m.len()
                )));
            }
            for (ci, &m) in c.m.iter().enumerate() {
                let cpow = ci as u32 + 1;
                if m % 2 == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "even direction number m_{{{},{}}} = {m}",
                        idx + 2,
                        cpow
                    )));
                }
                if m >= 1u64 << cpow {
                    return Err(Error::InvalidArgument(format!(
                        "direction number m_{{{},{}}} = {m} out of range [1, 2^{cpow})",
                        idx + 2,
                        cpow
                    )));
                }
            }
        }
        Ok(SobolSpec { coords })
    }

    /// The canonical assignment: coordinate j ≥ 2 uses the (j−1)-th primitive
    /// polynomial in (degree, encoding) order, with the given m lists.
    pub fn with_default_polynomials(m_lists: Vec<Vec<u64>>) -> Result<Self> {
        let polys = primitive_polynomials(m_lists.len());
        SobolSpec::new(
            m_lists.into_iter().zip(polys).map(|(m, poly)| SobolCoord { poly, m }).collect(),
        )
    }

    /// All initial direction numbers equal to 1 for `s` coordinates total.
    pub fn unit(s: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidArgument("need s >= 1".into()));
        }
        let polys = primitive_polynomials(s - 1);
        SobolSpec::new(
            polys
                .into_iter()
                .map(|poly| {
                    let e = poly.degree().unwrap() as usize;
                    SobolCoord { poly, m: vec![1; e] }
                })
                .collect(),
        )
    }

    /// Number of coordinates this spec can serve (including coordinate 1).
    pub fn dim(&self) -> usize {
        self.coords.len() + 1
    }

    pub fn coords(&self) -> &[SobolCoord] {
        &self.coords
    }

    /// The degree of coordinate j's polynomial (j ≥ 2, 1-based).
    pub fn degree_of(&self, j: usize) -> u32 {
        self.coords[j - 2].poly.degree().unwrap()
    }

    /// Direction numbers m_1..m_count for coordinate j ≥ 2 (1-based),
    /// extending the initial values by the recurrence
    /// m_c = 2a_1 m_{c-1} ⊕ 2²a_2 m_{c-2} ⊕ … ⊕ 2^{e-1} a_{e-1} m_{c-e+1}
    ///       ⊕ 2^e m_{c-e} ⊕ m_{c-e}.
    pub fn direction_numbers(&self, j: usize, count: usize) -> Vec<u64> {
        let coord = &self.coords[j - 2];
        let e = coord.poly.degree().unwrap() as usize;
        let mut m: Vec<u64> = coord.m.iter().copied().take(count).collect();
        while m.len() < count {
            let c = m.len(); // next index is c+1 (1-based)
            let mut v = (m[c - e] << e) ^ m[c - e];
            for t in 1..e {
                // a_t is the coefficient of z^{e-t} in the polynomial
                if coord.poly.bits() >> (e - t) & 1 == 1 {
                    v ^= m[c - t] << t;
                }
            }
            m.push(v);
        }
        m
    }

    /// The k×k generating matrices for s coordinates: column c of coordinate
    /// j holds m_{j,c}/2^c, i.e. column word m_c·2^{k−c}; upper triangular
    /// with unit diagonal.
    pub fn net(&self, s: usize, k: u32) -> Result<DigitalNetBase2> {
        if s < 1 {
            return Err(Error::InvalidArgument("need s >= 1".into()));
        }
        if s > self.dim() {
            return Err(Error::InvalidArgument(format!(
                "direction numbers cover {} coordinates, requested {s}",
                self.dim()
            )));
        }
        let mut matrices = Vec::with_capacity(s);
        matrices.push(BinaryMatrix::identity(k));
        for j in 2..=s {
            let m = self.direction_numbers(j, k as usize);
            let cols: Vec<u64> = (1..=k).map(|c| m[c as usize - 1] << (k - c)).collect();
            matrices.push(BinaryMatrix::from_col_words(k, cols)?);
        }
        DigitalNetBase2::new(k, k, matrices)
    }
}
