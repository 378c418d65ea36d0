//! Point-set constructions: rank-1 lattices, digital nets in base 2,
//! polynomial lattice rules, Sobol' nets, high-order and interlaced variants.

pub mod interlace;
pub mod lattice;
pub mod net;
pub mod plr;
pub mod sobol;

pub use interlace::{interlace, interlace_words, interlaced_digits};
pub use lattice::{korobov_vector, units_mod, Rank1Lattice};
pub use net::{van_der_corput, DigitalNetBase2};
pub use plr::{HighOrderRule, PolynomialLatticeRule};
pub use sobol::{SobolCoord, SobolSpec};

use crate::error::{Error, Result};

/// Any point set this crate can define, search for, and randomize.
#[derive(Clone, Debug, PartialEq)]
pub enum PointSetDef {
    Lattice(Rank1Lattice),
    Net(DigitalNetBase2),
    Plr(PolynomialLatticeRule),
    Sobol { spec: SobolSpec, s: usize, k: u32 },
    Hoplr(HighOrderRule),
    /// An interlaced digital net; the inner net keeps its own coordinates.
    Interlaced { inner: DigitalNetBase2, d: u32 },
    /// Degenerate "point set" of i.i.d. uniforms, the Monte Carlo baseline.
    /// Points only exist under a randomization with a seeded stream.
    IidUniform { n: u64, s: usize },
}

impl PointSetDef {
    pub fn n(&self) -> u64 {
        match self {
            PointSetDef::Lattice(l) => l.n(),
            PointSetDef::Net(net) => net.n(),
            PointSetDef::Plr(p) => p.n(),
            PointSetDef::Sobol { k, .. } => 1u64 << k,
            PointSetDef::Hoplr(h) => h.n(),
            PointSetDef::Interlaced { inner, .. } => inner.n(),
            PointSetDef::IidUniform { n, .. } => *n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PointSetDef::Lattice(l) => l.dim(),
            PointSetDef::Net(net) => net.dim(),
            PointSetDef::Plr(p) => p.dim(),
            PointSetDef::Sobol { s, .. } => *s,
            PointSetDef::Hoplr(h) => h.dim(),
            PointSetDef::Interlaced { inner, d } => inner.dim() / *d as usize,
            PointSetDef::IidUniform { s, .. } => *s,
        }
    }

    /// Resolve to a digital net where the kind admits one.
    pub fn as_net(&self) -> Result<DigitalNetBase2> {
        match self {
            PointSetDef::Net(net) => Ok(net.clone()),
            PointSetDef::Plr(p) => p.to_net(),
            PointSetDef::Sobol { spec, s, k } => spec.net(*s, *k),
            PointSetDef::Interlaced { inner, d } => interlace(inner, *d),
            _ => Err(Error::Unsupported("not representable as a digital net".into())),
        }
    }

    /// The deterministic points, row-major. IidUniform has no deterministic
    /// points and errors here.
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            PointSetDef::Lattice(l) => Ok(l.points()),
            PointSetDef::Hoplr(h) => {
                let scale = 0.5f64.powi(h.w() as i32);
                Ok(h.all_words().into_iter().map(|w| w as f64 * scale).collect())
            }
            PointSetDef::IidUniform { .. } => Err(Error::Unsupported(
                "i.i.d. uniform baseline has points only under a seeded randomization".into(),
            )),
            _ => {
                let net = self.as_net()?;
                let scale = 0.5f64.powi(net.w() as i32);
                Ok(net.all_words().into_iter().map(|w| w as f64 * scale).collect())
            }
        }
    }
}
