//! Projection weights γ_u over nonempty coordinate subsets.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// A set of coordinate indices, 0-based, sorted and distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoordSet(Vec<u32>);

impl CoordSet {
    pub fn new(mut coords: Vec<u32>) -> Result<Self> {
        coords.sort_unstable();
        coords.dedup();
        if coords.is_empty() {
            return Err(Error::InvalidArgument("empty coordinate subset".into()));
        }
        Ok(CoordSet(coords))
    }

    pub fn singleton(j: u32) -> Self {
        CoordSet(vec![j])
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn max_coord(&self) -> u32 {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// Union with a coordinate not already present.
    pub fn with(&self, j: u32) -> Self {
        let mut v = self.0.clone();
        v.push(j);
        v.sort_unstable();
        CoordSet(v)
    }
}

/// Projection weights: product, order-dependent, POD, or explicit per subset.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// γ_u = Π_{j∈u} γ_j; the vector length declares the dimension.
    Product { gammas: Vec<f64> },
    /// γ_u = Γ_{|u|}; `order_gammas[m-1]` holds Γ_m, missing orders weigh 0.
    OrderDependent { order_gammas: Vec<f64> },
    /// γ_u = Γ_{|u|}·Π_{j∈u} γ_j.
    Pod { order_gammas: Vec<f64>, gammas: Vec<f64> },
    /// Stored per subset; absent subsets weigh 0. `dim` bounds coordinates.
    Explicit { map: BTreeMap<CoordSet, f64>, dim: u32 },
}

impl WeightSpec {
    pub fn product(gammas: Vec<f64>) -> Result<Self> {
        check_nonneg(&gammas)?;
        Ok(WeightSpec::Product { gammas })
    }

    /// Product weights γ_j = g for every coordinate.
    pub fn uniform_product(g: f64, dim: usize) -> Result<Self> {
        WeightSpec::product(vec![g; dim])
    }

    pub fn order_dependent(order_gammas: Vec<f64>) -> Result<Self> {
        check_nonneg(&order_gammas)?;
        Ok(WeightSpec::OrderDependent { order_gammas })
    }

    pub fn pod(order_gammas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        check_nonneg(&order_gammas)?;
        check_nonneg(&gammas)?;
        Ok(WeightSpec::Pod { order_gammas, gammas })
    }

    pub fn explicit(entries: Vec<(CoordSet, f64)>, dim: u32) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (u, g) in entries {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidArgument("negative or non-finite weight".into()));
            }
            if u.max_coord() >= dim {
                return Err(Error::InvalidArgument(format!(
                    "subset coordinate {} beyond declared dimension {dim}",
                    u.max_coord() + 1
                )));
            }
            map.insert(u, g);
        }
        Ok(WeightSpec::Explicit { map, dim })
    }

    /// The weight of a nonempty subset u ⊆ {0,…,s−1}.
    pub fn weight_of(&self, u: &CoordSet) -> Result<f64> {
        match self {
            WeightSpec::Product { gammas } => {
                let dim = gammas.len() as u32;
                if u.max_coord() >= dim {
                    return Err(coord_beyond(u.max_coord(), dim));
                }
                Ok(u.coords().iter().map(|&j| gammas[j as usize]).product())
            }
            WeightSpec::OrderDependent { order_gammas } => {
                Ok(order_gammas.get(u.order() - 1).copied().unwrap_or(0.0))
            }
            WeightSpec::Pod { order_gammas, gammas } => {
                let dim = gammas.len() as u32;
                if u.max_coord() >= dim {
                    return Err(coord_beyond(u.max_coord(), dim));
                }
                let gamma_o = order_gammas.get(u.order() - 1).copied().unwrap_or(0.0);
                let prod: f64 = u.coords().iter().map(|&j| gammas[j as usize]).product();
                Ok(gamma_o * prod)
            }
            WeightSpec::Explicit { map, dim } => {
                if u.max_coord() >= *dim {
                    return Err(coord_beyond(u.max_coord(), *dim));
                }
                Ok(map.get(u).copied().unwrap_or(0.0))
            }
        }
    }

    /// Rescale by a geometric per-order factor c^{|u|}. Kind-preserving:
    /// product weights absorb c per coordinate.
    pub fn scale_geometric(&self, c: f64) -> WeightSpec {
        match self {
            WeightSpec::Product { gammas } => {
                WeightSpec::Product { gammas: gammas.iter().map(|g| g * c).collect() }
            }
            WeightSpec::OrderDependent { order_gammas } => WeightSpec::OrderDependent {
                order_gammas: order_gammas
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g * c.powi(i as i32 + 1))
                    .collect(),
            },
            WeightSpec::Pod { order_gammas, gammas } => WeightSpec::Pod {
                order_gammas: order_gammas.clone(),
                gammas: gammas.iter().map(|g| g * c).collect(),
            },
            WeightSpec::Explicit { map, dim } => WeightSpec::Explicit {
                map: map.iter().map(|(u, g)| (u.clone(), g * c.powi(u.order() as i32))).collect(),
                dim: *dim,
            },
        }
    }

    /// Rescale by an arbitrary per-order factor: the result's `weight_of(u)`
    /// equals `factor(|u|) * self.weight_of(u)`. Product weights become POD
    /// since a general factor is not absorbable per coordinate; `max_order`
    /// bounds the orders the factor is evaluated at.
    pub fn transform_per_order(&self, factor: &dyn Fn(usize) -> f64, max_order: usize) -> WeightSpec {
        let table: Vec<f64> = (1..=max_order).map(|m| factor(m)).collect();
        match self {
            WeightSpec::Product { gammas } => {
                WeightSpec::Pod { order_gammas: table, gammas: gammas.clone() }
            }
            WeightSpec::OrderDependent { order_gammas } => WeightSpec::OrderDependent {
                order_gammas: order_gammas
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g * table.get(i).copied().unwrap_or(0.0))
                    .collect(),
            },
            WeightSpec::Pod { order_gammas, gammas } => WeightSpec::Pod {
                order_gammas: order_gammas
                    .iter()
                    .enumerate()
                    .map(|(i, g)| g * table.get(i).copied().unwrap_or(0.0))
                    .collect(),
                gammas: gammas.clone(),
            },
            WeightSpec::Explicit { map, dim } => WeightSpec::Explicit {
                map: map
                    .iter()
                    .map(|(u, g)| {
                        (u.clone(), g * table.get(u.order() - 1).copied().unwrap_or(0.0))
                    })
                    .collect(),
                dim: *dim,
            },
        }
    }

    /// Dimension bound when the kind declares one.
    pub fn declared_dim(&self) -> Option<u32> {
        match self {
            WeightSpec::Product { gammas } => Some(gammas.len() as u32),
            WeightSpec::Pod { gammas, .. } => Some(gammas.len() as u32),
            WeightSpec::Explicit { dim, .. } => Some(*dim),
            WeightSpec::OrderDependent { .. } => None,
        }
    }

    /// Largest order with a (possibly) nonzero weight in dimension `s`.
    pub fn max_live_order(&self, s: usize) -> usize {
        match self {
            WeightSpec::Product { .. } => s,
            WeightSpec::OrderDependent { order_gammas } | WeightSpec::Pod { order_gammas, .. } => {
                let mut hi = 0;
                for (i, g) in order_gammas.iter().enumerate() {
                    if *g != 0.0 {
                        hi = i + 1;
                    }
                }
                hi.min(s)
            }
            WeightSpec::Explicit { map, .. } => {
                map.iter().filter(|(_, g)| **g != 0.0).map(|(u, _)| u.order()).max().unwrap_or(0)
            }
        }
    }
}

fn check_nonneg(vals: &[f64]) -> Result<()> {
    if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidArgument("weights must be finite and >= 0".into()));
    }
    Ok(())
}

fn coord_beyond(j: u32, dim: u32) -> Error {
    Error::InvalidArgument(format!("coordinate {} beyond declared dimension {dim}", j + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(coords: &[u32]) -> CoordSet {
        CoordSet::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn product_weight_examples() {
        let w = WeightSpec::product(vec![0.5, 0.5]).unwrap();
        assert_eq!(w.weight_of(&set(&[0, 1])).unwrap(), 0.25);
        // geometric product weights 0.7^{|u|}
        let w = WeightSpec::uniform_product(0.7, 3).unwrap();
        let g = w.weight_of(&set(&[0, 1, 2])).unwrap();
        assert!((g - 0.343).abs() < 1e-15);
        // coordinate beyond the declared dimension
        assert!(w.weight_of(&set(&[3])).is_err());
    }

    #[test]
    fn order_dependent_example() {
        // CLI "order-dependent:0,0,10.,0.1,0.001" -> Γ_1=0, Γ_2=10, Γ_3=0.1, Γ_4=0.001
        let w = WeightSpec::order_dependent(vec![0.0, 10.0, 0.1, 0.001]).unwrap();
        assert_eq!(w.weight_of(&set(&[2, 4])).unwrap(), 10.0);
        assert_eq!(w.weight_of(&set(&[0])).unwrap(), 0.0);
        // orders beyond the list weigh zero
        assert_eq!(w.weight_of(&set(&[0, 1, 2, 3, 4])).unwrap(), 0.0);
    }

    #[test]
    fn explicit_defaults_to_zero() {
        let w = WeightSpec::explicit(vec![(set(&[0, 1]), 0.5)], 4).unwrap();
        assert_eq!(w.weight_of(&set(&[0, 1])).unwrap(), 0.5);
        assert_eq!(w.weight_of(&set(&[1, 2])).unwrap(), 0.0);
        assert!(w.weight_of(&set(&[5])).is_err());
    }

    #[test]
    fn pod_degenerates_to_product_and_order_dependent() {
        // exhaustive over all nonempty subsets of s = 10 coordinates
        let s = 10u32;
        let gammas: Vec<f64> = (0..s).map(|j| 0.3 + 0.05 * j as f64).collect();
        let orders: Vec<f64> = (1..=s).map(|m| 1.0 / m as f64).collect();
        let pod_unit_orders = WeightSpec::pod(vec![1.0; s as usize], gammas.clone()).unwrap();
        let product = WeightSpec::product(gammas.clone()).unwrap();
        let pod_unit_gammas = WeightSpec::pod(orders.clone(), vec![1.0; s as usize]).unwrap();
        let od = WeightSpec::order_dependent(orders).unwrap();
        for mask in 1u32..(1 << s) {
            let coords: Vec<u32> = (0..s).filter(|j| mask >> j & 1 == 1).collect();
            let u = CoordSet::new(coords).unwrap();
            assert_eq!(
                pod_unit_orders.weight_of(&u).unwrap(),
                product.weight_of(&u).unwrap()
            );
            assert_eq!(pod_unit_gammas.weight_of(&u).unwrap(), od.weight_of(&u).unwrap());
        }
    }

    #[test]
    fn product_union_property() {
        let gammas = vec![0.9, 0.8, 0.7, 0.6];
        let w = WeightSpec::product(gammas.clone()).unwrap();
        let u = set(&[0, 2]);
        assert!(
            (w.weight_of(&u.with(3)).unwrap() - w.weight_of(&u).unwrap() * gammas[3]).abs()
                < 1e-15
        );
    }

    #[test]
    fn identity_transform_is_identity() {
        let w = WeightSpec::order_dependent(vec![1.0, 2.0, 3.0]).unwrap();
        let t = w.transform_per_order(&|_| 1.0, 3);
        for m in 1..=3usize {
            let u = CoordSet::new((0..m as u32).collect()).unwrap();
            assert_eq!(w.weight_of(&u).unwrap(), t.weight_of(&u).unwrap());
        }
    }

    #[test]
    fn interlaced_c_factor_example() {
        // D_{2,2} = 2^{2·max(0,0)+(2·2-1)·2} = 2^6 = 64; |u|=2 scaling 4096
        let d_factor = 64.0f64;
        let w = WeightSpec::uniform_product(1.0, 4).unwrap();
        let t = w.scale_geometric(d_factor);
        let u = set(&[0, 1]);
        assert_eq!(t.weight_of(&u).unwrap(), 4096.0);
    }

    #[test]
    fn sobolev_factor_on_singletons() {
        let w = WeightSpec::uniform_product(1.0, 3).unwrap();
        let t = w.scale_geometric(1.0 / 12.0);
        assert!((t.weight_of(&set(&[1])).unwrap() - 1.0 / 12.0).abs() < 1e-18);
    }

    #[test]
    fn transforms_compose() {
        let w = WeightSpec::pod(vec![1.0, 0.5, 0.25], vec![0.9, 0.8, 0.7]).unwrap();
        let f = |m: usize| 2.0f64.powi(m as i32);
        let g = |m: usize| 1.0 / (m as f64 + 1.0);
        let fg = |m: usize| f(m) * g(m);
        let a = w.transform_per_order(&f, 3).transform_per_order(&g, 3);
        let b = w.transform_per_order(&fg, 3);
        for m in 1..=3usize {
            let u = CoordSet::new((0..m as u32).collect()).unwrap();
            assert!((a.weight_of(&u).unwrap() - b.weight_of(&u).unwrap()).abs() < 1e-15);
        }
        // geometric scaling composes with itself exactly
        let c = w.scale_geometric(2.0).scale_geometric(3.0);
        let d = w.scale_geometric(6.0);
        for m in 1..=3usize {
            let u = CoordSet::new((0..m as u32).collect()).unwrap();
            assert!((c.weight_of(&u).unwrap() - d.weight_of(&u).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_weights_rejected() {
        assert!(WeightSpec::product(vec![0.5, -0.1]).is_err());
        assert!(WeightSpec::order_dependent(vec![f64::NAN]).is_err());
    }
}
