//! Weighted figures of merit: the projection combiner, kernel families,
//! t-value criteria, and independent test oracles.

pub mod dual;
pub mod kernels;
pub mod tvalue;

pub use dual::oracle_p_alpha_dual;
pub use kernels::{
    kernel_p_alpha_tilde, kernel_r2prime, kernel_sobolev1, Coord, InterlacedKernel,
    InterlacedVariant, PAlphaKernel,
};
pub use tvalue::{t_value, t_value_box_oracle, t_value_bound};

use crate::error::{Error, Result};
use crate::pointsets::{DigitalNetBase2, Rank1Lattice};
use crate::weights::{CoordSet, WeightSpec};
use std::collections::BTreeMap;

/// Guard on the number of projections the generic combiner will enumerate.
pub const SUBSET_GUARD: usize = 1 << 20;

/// Neumaier-compensated accumulator; merit sums mix signs over up to 2^20
/// terms, so plain summation is not used in the n-loops.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.c
    }
}

/// The merit families of the combiner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FomFamily {
    /// Fourier/Bernoulli lattice criterion, even integer α.
    PAlpha,
    /// Walsh/digital-shift criterion, real α > 1.
    PAlphaTilde,
    /// Order-1 Sobolev (shift- and scramble-invariant) criterion.
    Sobolev1,
    /// Interlaced worst-case bound, first form (q = 1).
    IAlphaDa,
    /// Interlaced worst-case bound, second form (1 < d ≤ α, q = 1).
    IAlphaDb,
    /// Interlaced scrambled-variance bound (q = 2).
    IAlphaDc,
    /// Closed-form star-discrepancy bound for nets.
    R2Prime,
    /// t-value star-discrepancy bound per projection.
    TValueBound,
    /// Raw t-value per projection (sum/max-of-t criteria).
    TValueRaw,
}

impl FomFamily {
    pub fn is_kernel(self) -> bool {
        !matches!(self, FomFamily::TValueBound | FomFamily::TValueRaw)
    }

    pub fn is_interlaced(self) -> bool {
        matches!(self, FomFamily::IAlphaDa | FomFamily::IAlphaDb | FomFamily::IAlphaDc)
    }

    /// The exponent the family's per-projection sum is stated with; used to
    /// undo the power in the q = ∞ (weighted max) combiner.
    pub fn natural_exponent(self) -> f64 {
        match self {
            FomFamily::PAlpha | FomFamily::PAlphaTilde | FomFamily::Sobolev1
            | FomFamily::IAlphaDc => 2.0,
            _ => 1.0,
        }
    }
}

/// Norm exponent q of the combiner; ∞ takes the weighted max.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinite,
}

impl NormExponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            NormExponent::Finite(q) => Some(q),
            NormExponent::Infinite => None,
        }
    }
}

/// A figure-of-merit specification: family, smoothness, interlacing factor,
/// norm exponent, and projection weights.
#[derive(Clone, Debug)]
pub struct FomSpec {
    pub family: FomFamily,
    pub alpha: f64,
    pub d: u32,
    pub q: NormExponent,
    pub weights: WeightSpec,
}

impl FomSpec {
    pub fn new(
        family: FomFamily,
        alpha: f64,
        d: u32,
        q: NormExponent,
        weights: WeightSpec,
    ) -> Result<Self> {
        if let NormExponent::Finite(qv) = q {
            if !(qv >= 1.0) {
                return Err(Error::InvalidArgument(format!("need q in [1, inf], got {qv}")));
            }
        }
        match family {
            FomFamily::PAlpha => {
                PAlphaKernel::new(alpha)?;
            }
            FomFamily::PAlphaTilde => {
                kernels::mu_alpha(alpha)?;
            }
            FomFamily::IAlphaDa => {
                InterlacedKernel::new(InterlacedVariant::A, alpha, d)?;
            }
            FomFamily::IAlphaDb => {
                InterlacedKernel::new(InterlacedVariant::B, alpha, d)?;
            }
            FomFamily::IAlphaDc => {
                InterlacedKernel::new(InterlacedVariant::C, alpha, d)?;
            }
            FomFamily::Sobolev1 | FomFamily::R2Prime | FomFamily::TValueBound
            | FomFamily::TValueRaw => {}
        }
        Ok(FomSpec { family, alpha, d, q, weights })
    }

    /// The interlaced kernel of an interlaced family.
    pub fn interlaced_kernel(&self) -> Result<InterlacedKernel> {
        let variant = match self.family {
            FomFamily::IAlphaDa => InterlacedVariant::A,
            FomFamily::IAlphaDb => InterlacedVariant::B,
            FomFamily::IAlphaDc => InterlacedVariant::C,
            _ => return Err(Error::InvalidArgument("not an interlaced family".into())),
        };
        InterlacedKernel::new(variant, self.alpha, self.d)
    }
}

/// A merit value: the additive total D^q (or the weighted max for q = ∞),
/// with the unweighted per-projection base merits when the evaluation
/// enumerated them.
#[derive(Clone, Debug)]
pub struct MeritValue {
    pub total: f64,
    pub per_projection: Option<BTreeMap<CoordSet, f64>>,
}

/// Evaluated points in either plain-float or exact dyadic form, row-major.
#[derive(Clone, Debug)]
pub enum PointData {
    Real { dim: usize, pts: Vec<f64> },
    Dyadic { dim: usize, w: u32, words: Vec<u64> },
}

impl PointData {
    pub fn from_lattice(lat: &Rank1Lattice) -> Self {
        PointData::Real { dim: lat.dim(), pts: lat.points() }
    }

    pub fn from_net(net: &DigitalNetBase2) -> Self {
        PointData::Dyadic { dim: net.dim(), w: net.w(), words: net.all_words() }
    }

    pub fn from_reals(dim: usize, pts: Vec<f64>) -> Result<Self> {
        if dim == 0 || pts.len() % dim != 0 {
            return Err(Error::InvalidArgument("point buffer does not tile into points".into()));
        }
        Ok(PointData::Real { dim, pts })
    }

    pub fn from_words(dim: usize, w: u32, words: Vec<u64>) -> Result<Self> {
        if dim == 0 || words.len() % dim != 0 {
            return Err(Error::InvalidArgument("word buffer does not tile into points".into()));
        }
        Ok(PointData::Dyadic { dim, w, words })
    }

    pub fn n(&self) -> usize {
        match self {
            PointData::Real { dim, pts } => pts.len() / dim,
            PointData::Dyadic { dim, words, .. } => words.len() / dim,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PointData::Real { dim, .. } | PointData::Dyadic { dim, .. } => *dim,
        }
    }

    #[inline]
    pub fn coord(&self, i: usize, j: usize) -> Coord {
        match self {
            PointData::Real { dim, pts } => Coord::Real(pts[i * dim + j]),
            PointData::Dyadic { dim, w, words } => {
                Coord::Dyadic { word: words[i * dim + j], w: *w }
            }
        }
    }
}

/// A resolved plain (non-interlaced, non-t-value) kernel.
pub enum PlainKernel {
    PAlpha(PAlphaKernel),
    PTilde { alpha: f64, mu: f64 },
    Sobolev1,
    R2Prime { k: u32 },
}

impl PlainKernel {
    pub fn resolve(spec: &FomSpec, points: &PointData) -> Result<PlainKernel> {
        match spec.family {
            FomFamily::PAlpha => Ok(PlainKernel::PAlpha(PAlphaKernel::new(spec.alpha)?)),
            FomFamily::PAlphaTilde => Ok(PlainKernel::PTilde {
                alpha: spec.alpha,
                mu: kernels::mu_alpha(spec.alpha)?,
            }),
            FomFamily::Sobolev1 => Ok(PlainKernel::Sobolev1),
            FomFamily::R2Prime => {
                let n = points.n() as u64;
                if n == 0 || !n.is_power_of_two() {
                    return Err(Error::InvalidArgument(
                        "the closed-form bound needs a digital net with n = 2^k points".into(),
                    ));
                }
                Ok(PlainKernel::R2Prime { k: n.trailing_zeros() })
            }
            f => Err(Error::Unsupported(format!(
                "family {f:?} has no pointwise kernel; use the t-value evaluator"
            ))),
        }
    }

    #[inline]
    pub fn eval(&self, c: Coord) -> f64 {
        match self {
            PlainKernel::PAlpha(k) => k.eval(c.value()),
            PlainKernel::PTilde { alpha, mu } => kernels::phi_tilde_with_mu(c, *alpha, *mu),
            PlainKernel::Sobolev1 => kernel_sobolev1(c),
            PlainKernel::R2Prime { k } => kernel_r2prime(c, *k),
        }
    }
}

/// All projections the weights declare live, in canonical order.
pub fn live_subsets(weights: &WeightSpec, s: usize) -> Result<Vec<CoordSet>> {
    let mut out = Vec::new();
    match weights {
        WeightSpec::Explicit { map, .. } => {
            for (u, g) in map {
                if *g != 0.0 {
                    if u.max_coord() as usize >= s {
                        return Err(Error::InvalidArgument(format!(
                            "explicit weight on coordinate {} beyond dimension {s}",
                            u.max_coord() + 1
                        )));
                    }
                    out.push(u.clone());
                }
            }
        }
        WeightSpec::Product { gammas } | WeightSpec::Pod { gammas, .. } => {
            if gammas.len() < s {
                return Err(Error::InvalidArgument(format!(
                    "weights declare {} coordinates, points have {s}",
                    gammas.len()
                )));
            }
            let support: Vec<u32> =
                (0..s as u32).filter(|&j| gammas[j as usize] != 0.0).collect();
            let live_orders: Option<Vec<usize>> = match weights {
                WeightSpec::Pod { order_gammas, .. } => Some(
                    (1..=support.len())
                        .filter(|&m| order_gammas.get(m - 1).copied().unwrap_or(0.0) != 0.0)
                        .collect(),
                ),
                _ => None,
            };
            match live_orders {
                None => {
                    if support.len() >= 25
                        || (1usize << support.len()) - 1 > SUBSET_GUARD
                    {
                        return Err(Error::GuardExceeded {
                            cardinality: (1u128 << support.len()) - 1,
                            guard: SUBSET_GUARD as u128,
                        });
                    }
                    for mask in 1u32..(1u32 << support.len()) {
                        let coords: Vec<u32> = (0..support.len())
                            .filter(|&b| mask >> b & 1 == 1)
                            .map(|b| support[b])
                            .collect();
                        out.push(CoordSet::new(coords)?);
                    }
                    out.sort();
                }
                Some(orders) => {
                    push_orders(&support, &orders, &mut out)?;
                }
            }
        }
        WeightSpec::OrderDependent { order_gammas } => {
            let support: Vec<u32> = (0..s as u32).collect();
            let orders: Vec<usize> = (1..=s)
                .filter(|&m| order_gammas.get(m - 1).copied().unwrap_or(0.0) != 0.0)
                .collect();
            push_orders(&support, &orders, &mut out)?;
        }
    }
    Ok(out)
}

/// Visit every m-combination of {0..n} in lexicographic order.
pub fn for_each_combination(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 || m > n {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        f(&idx);
        let mut i = m as isize - 1;
        while i >= 0 && idx[i as usize] == n - m + i as usize {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        idx[i] += 1;
        for t in i + 1..m {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

fn push_orders(support: &[u32], orders: &[usize], out: &mut Vec<CoordSet>) -> Result<()> {
    let mut total: u128 = 0;
    for &m in orders {
        total += binomial_u128(support.len(), m);
    }
    if total > SUBSET_GUARD as u128 {
        return Err(Error::GuardExceeded { cardinality: total, guard: SUBSET_GUARD as u128 });
    }
    for &m in orders {
        for_each_combination(support.len(), m, |idx| {
            out.push(CoordSet::new(idx.iter().map(|&i| support[i]).collect()).unwrap());
        });
    }
    out.sort();
    out.dedup();
    Ok(())
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Combine per-projection base merits with weights and exponent q.
/// For finite q the total is Σ_u γ_u^q·B_u (the base already carries the
/// family's power); for q = ∞ it is max_u γ_u·max(B_u,0)^{1/e} with e the
/// family's natural exponent.
pub fn combine(
    subsets: &[CoordSet],
    base: impl Fn(&CoordSet) -> Result<f64>,
    weights: &WeightSpec,
    q: NormExponent,
    natural_e: f64,
    raise_base_to_q: bool,
) -> Result<MeritValue> {
    let mut per = BTreeMap::new();
    match q {
        NormExponent::Finite(qv) => {
            let mut acc = KahanSum::new();
            for u in subsets {
                let g = weights.weight_of(u)?;
                if g == 0.0 {
                    continue;
                }
                let b = base(u)?;
                per.insert(u.clone(), b);
                let term = if raise_base_to_q { g.powf(qv) * pow_q(b, qv) } else { g.powf(qv) * b };
                acc.add(term);
            }
            Ok(MeritValue { total: acc.total(), per_projection: Some(per) })
        }
        NormExponent::Infinite => {
            let mut best = 0.0f64;
            for u in subsets {
                let g = weights.weight_of(u)?;
                if g == 0.0 {
                    continue;
                }
                let b = base(u)?;
                per.insert(u.clone(), b);
                let root = if raise_base_to_q {
                    b.max(0.0)
                } else {
                    root_q(b.max(0.0), natural_e)
                };
                best = best.max(g * root);
            }
            Ok(MeritValue { total: best, per_projection: Some(per) })
        }
    }
}

#[inline]
fn pow_q(b: f64, q: f64) -> f64 {
    if q == 1.0 {
        b
    } else if q == 2.0 {
        b * b
    } else {
        b.powf(q)
    }
}

#[inline]
fn root_q(b: f64, e: f64) -> f64 {
    if e == 1.0 {
        b
    } else if e == 2.0 {
        b.sqrt()
    } else {
        b.powf(1.0 / e)
    }
}

/// The general combiner over every projection the weights declare:
/// D^q = Σ_u γ_u^q·(1/n)Σ_i Π_{j∈u} φ(x_{i,j}), or the weighted max for
/// q = ∞. R'₂ subtracts the weight mass so its base is S_u − 1.
pub fn eval_kernel_fom(points: &PointData, spec: &FomSpec) -> Result<MeritValue> {
    if spec.family.is_interlaced() {
        return eval_interlaced_fom(points, spec);
    }
    if !spec.family.is_kernel() {
        return Err(Error::Unsupported(
            "t-value families have no kernel; use the t-value evaluator".into(),
        ));
    }
    let kernel = PlainKernel::resolve(spec, points)?;
    let n = points.n();
    let s = points.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    // φ values per (point, coordinate)
    let mut phi = vec![0.0f64; n * s];
    for i in 0..n {
        for j in 0..s {
            phi[i * s + j] = kernel.eval(points.coord(i, j));
        }
    }
    let subsets = live_subsets(&spec.weights, s)?;
    let is_r2 = matches!(spec.family, FomFamily::R2Prime);
    let base = |u: &CoordSet| -> Result<f64> {
        let mut acc = KahanSum::new();
        for i in 0..n {
            let mut prod = 1.0;
            for &j in u.coords() {
                prod *= phi[i * s + j as usize];
            }
            acc.add(prod);
        }
        let s_u = acc.total() / n as f64;
        Ok(if is_r2 { s_u - 1.0 } else { s_u })
    };
    combine(&subsets, base, &spec.weights, spec.q, spec.family.natural_exponent(), false)
}

/// O(n·s) evaluation for product weights:
/// D^q = −1 + (1/n)Σ_i Π_j (1 + γ_j^q φ(x_{i,j})).
pub fn eval_product_weight_fast(points: &PointData, spec: &FomSpec) -> Result<MeritValue> {
    let gammas = match &spec.weights {
        WeightSpec::Product { gammas } => gammas.clone(),
        _ => return Err(Error::Unsupported("fast path needs product weights".into())),
    };
    let qv = spec.q.finite().ok_or_else(|| {
        Error::Unsupported("fast product path needs a finite norm exponent".into())
    })?;
    if spec.family.is_interlaced() || !spec.family.is_kernel()
        || matches!(spec.family, FomFamily::R2Prime)
    {
        return Err(Error::Unsupported(
            "fast product path covers the plain kernel families".into(),
        ));
    }
    let kernel = PlainKernel::resolve(spec, points)?;
    let n = points.n();
    let s = points.dim();
    if gammas.len() < s {
        return Err(Error::InvalidArgument("weights declare fewer coordinates than points".into()));
    }
    let gq: Vec<f64> = gammas.iter().take(s).map(|g| g.powf(qv)).collect();
    let mut acc = KahanSum::new();
    for i in 0..n {
        let mut prod = 1.0;
        for (j, &g) in gq.iter().enumerate() {
            prod *= 1.0 + g * kernel.eval(points.coord(i, j));
        }
        acc.add(prod);
    }
    Ok(MeritValue { total: acc.total() / n as f64 - 1.0, per_projection: None })
}

/// Interlaced merit: `points` holds the s·d inner coordinates; the combiner
/// runs over subsets of the s output coordinates with transformed weights and
/// the composite block kernel.
pub fn eval_interlaced_fom(points: &PointData, spec: &FomSpec) -> Result<MeritValue> {
    let kernel = spec.interlaced_kernel()?;
    let d = spec.d as usize;
    let sd = points.dim();
    if sd % d != 0 {
        return Err(Error::InvalidArgument(format!(
            "inner dimension {sd} not divisible by interlacing factor {d}"
        )));
    }
    match spec.q {
        NormExponent::Finite(qv) if qv == kernel.natural_q() => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "this interlaced bound is stated with q = {}",
                kernel.natural_q()
            )))
        }
    }
    let s = sd / d;
    let n = points.n();
    // composite Φ per (point, output coordinate)
    let mut phi = vec![0.0f64; n * s];
    let mut block = vec![Coord::Real(0.0); d];
    for i in 0..n {
        for j in 0..s {
            for (ell, b) in block.iter_mut().enumerate() {
                *b = points.coord(i, j * d + ell);
            }
            phi[i * s + j] = kernel.block_phi(&block);
        }
    }
    let weights = spec.weights.scale_geometric(kernel.weight_factor());
    let subsets = live_subsets(&weights, s)?;
    let base = |u: &CoordSet| -> Result<f64> {
        let mut acc = KahanSum::new();
        for i in 0..n {
            let mut prod = 1.0;
            for &j in u.coords() {
                prod *= phi[i * s + j as usize];
            }
            acc.add(prod);
        }
        Ok(acc.total() / n as f64)
    };
    combine(&subsets, base, &weights, spec.q, spec.family.natural_exponent(), false)
}

/// R'₂ with its stated linear weights: Σ_u γ_u·(S_u − 1), with k inferred
/// from the point count (n = 2^k).
pub fn eval_r2prime(points: &PointData, weights: &WeightSpec) -> Result<MeritValue> {
    let spec = FomSpec::new(
        FomFamily::R2Prime,
        2.0,
        1,
        NormExponent::Finite(1.0),
        weights.clone(),
    )?;
    eval_kernel_fom(points, &spec)
}

/// R'₂ with an explicit digit-count parameter k for φ_k, independent of the
/// number of points supplied.
pub fn eval_r2prime_with_k(points: &PointData, weights: &WeightSpec, k: u32) -> Result<MeritValue> {
    let kernel = PlainKernel::R2Prime { k };
    let n = points.n();
    let s = points.dim();
    let mut phi = vec![0.0f64; n * s];
    for i in 0..n {
        for j in 0..s {
            phi[i * s + j] = kernel.eval(points.coord(i, j));
        }
    }
    let subsets = live_subsets(weights, s)?;
    let base = |u: &CoordSet| -> Result<f64> {
        let mut acc = KahanSum::new();
        for i in 0..n {
            let mut prod = 1.0;
            for &j in u.coords() {
                prod *= phi[i * s + j as usize];
            }
            acc.add(prod);
        }
        Ok(acc.total() / n as f64 - 1.0)
    };
    combine(&subsets, base, weights, NormExponent::Finite(1.0), 1.0, false)
}

/// t-value-based merits: the star-discrepancy bound per projection
/// (TValueBound) or the raw t-value (TValueRaw), combined per Eq. (8).
pub fn eval_tvalue_fom(net: &DigitalNetBase2, spec: &FomSpec) -> Result<MeritValue> {
    let raw = match spec.family {
        FomFamily::TValueBound => false,
        FomFamily::TValueRaw => true,
        _ => return Err(Error::InvalidArgument("not a t-value family".into())),
    };
    let s = net.dim();
    let subsets = live_subsets(&spec.weights, s)?;
    let base = |u: &CoordSet| -> Result<f64> {
        let t = t_value(net, u)?;
        Ok(if raw { t as f64 } else { t_value_bound(net.k(), t, u.order()) })
    };
    combine(&subsets, base, &spec.weights, spec.q, 1.0, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BinaryMatrix;
    use crate::rng::CounterRng;

    const PI: f64 = std::f64::consts::PI;

    fn p2_spec(weights: WeightSpec) -> FomSpec {
        FomSpec::new(FomFamily::PAlpha, 2.0, 1, NormExponent::Finite(2.0), weights).unwrap()
    }

    #[test]
    fn p2_single_point_anchor() {
        // one point at the origin: P_2 = 2π²B_2(0) = π²/3 (= 2ζ(2))
        let pts = PointData::from_reals(1, vec![0.0]).unwrap();
        let m = eval_kernel_fom(&pts, &p2_spec(WeightSpec::uniform_product(1.0, 1).unwrap()))
            .unwrap();
        assert!((m.total - PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn p2_two_point_anchor() {
        // {0, 1/2}: dual lattice = even integers, P_2 = ζ(2)/2 = π²/12
        let pts = PointData::from_reals(1, vec![0.0, 0.5]).unwrap();
        let m = eval_kernel_fom(&pts, &p2_spec(WeightSpec::uniform_product(1.0, 1).unwrap()))
            .unwrap();
        assert!((m.total - PI * PI / 12.0).abs() < 1e-12);
    }

    #[test]
    fn ptilde_two_point_net() {
        // (φ₂(0) + φ₂(1/2))/2 = (2 − 1)/2
        let pts = PointData::from_words(1, 1, vec![0, 1]).unwrap();
        let spec = FomSpec::new(
            FomFamily::PAlphaTilde,
            2.0,
            1,
            NormExponent::Finite(2.0),
            WeightSpec::uniform_product(1.0, 1).unwrap(),
        )
        .unwrap();
        let m = eval_kernel_fom(&pts, &spec).unwrap();
        assert!((m.total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn r2prime_single_point() {
        // single point {0}, s=1, γ=1, k=2: −1 + (1 + k/2) = 1
        let pts = PointData::from_words(1, 4, vec![0]).unwrap();
        let w = WeightSpec::uniform_product(1.0, 1).unwrap();
        let m = eval_r2prime_with_k(&pts, &w, 2).unwrap();
        assert!((m.total - 1.0).abs() < 1e-15);
        // and on a full k=2 van der Corput grid with inferred k:
        // φ_2(0)=2, φ_2(1/4)=1, φ_2(1/2)=1/2, φ_2(3/4)=1/2 → mean 1 → total 0
        let grid = PointData::from_words(1, 4, vec![0, 4, 8, 12]).unwrap();
        let m2 = eval_r2prime(&grid, &w).unwrap();
        assert!((m2.total - 0.0).abs() < 1e-15);
    }

    #[test]
    fn product_fast_matches_generic_on_random_net() {
        let mut rng = CounterRng::new(11);
        for trial in 0..8 {
            let s = 3;
            let k = 3;
            let mut mats = Vec::new();
            while mats.len() < s {
                let cols: Vec<u64> = (0..k).map(|_| rng.next_u64() & 0x7).collect();
                if let Ok(m) = BinaryMatrix::from_col_words(3, cols) {
                    if m.top_square_rank() == 3 {
                        mats.push(m);
                    }
                }
            }
            let net = DigitalNetBase2::new(3, 3, mats).unwrap();
            let pts = PointData::from_net(&net);
            let weights = WeightSpec::product(vec![0.9, 0.5, 0.3]).unwrap();
            let spec = FomSpec::new(
                FomFamily::PAlphaTilde,
                2.0,
                1,
                NormExponent::Finite(2.0),
                weights,
            )
            .unwrap();
            let slow = eval_kernel_fom(&pts, &spec).unwrap().total;
            let fast = eval_product_weight_fast(&pts, &spec).unwrap().total;
            let scale = slow.abs().max(1e-30);
            assert!(
                ((slow - fast) / scale).abs() < 1e-12,
                "trial {trial}: {slow} vs {fast}"
            );
        }
    }

    #[test]
    fn product_fast_degenerate_cases() {
        let pts = PointData::from_reals(2, vec![0.0, 0.0, 0.5, 0.25]).unwrap();
        let spec = p2_spec(WeightSpec::product(vec![0.0, 0.0]).unwrap());
        assert_eq!(eval_product_weight_fast(&pts, &spec).unwrap().total, 0.0);
        // s = 1 reduces to γ^q·mean(φ)
        let pts1 = PointData::from_reals(1, vec![0.0, 0.5]).unwrap();
        let spec1 = p2_spec(WeightSpec::product(vec![0.7]).unwrap());
        let fast = eval_product_weight_fast(&pts1, &spec1).unwrap().total;
        let k2 = PAlphaKernel::new(2.0).unwrap();
        let expect = 0.7f64.powf(2.0) * (k2.eval(0.0) + k2.eval(0.5)) / 2.0;
        assert!((fast - expect).abs() < 1e-14);
        // non-product weights refused
        let spec_od = FomSpec::new(
            FomFamily::PAlpha,
            2.0,
            1,
            NormExponent::Finite(2.0),
            WeightSpec::order_dependent(vec![1.0]).unwrap(),
        )
        .unwrap();
        assert!(eval_product_weight_fast(&pts1, &spec_od).is_err());
    }

    #[test]
    fn kernel_undefined_for_tvalue_families() {
        let pts = PointData::from_reals(1, vec![0.0]).unwrap();
        let spec = FomSpec::new(
            FomFamily::TValueRaw,
            2.0,
            1,
            NormExponent::Finite(1.0),
            WeightSpec::uniform_product(1.0, 1).unwrap(),
        )
        .unwrap();
        assert!(eval_kernel_fom(&pts, &spec).is_err());
    }

    #[test]
    fn monotone_in_weights() {
        let pts = PointData::from_words(2, 2, vec![0, 0, 1, 2, 2, 1, 3, 3]).unwrap();
        let w1 = WeightSpec::explicit(
            vec![
                (CoordSet::new(vec![0]).unwrap(), 1.0),
                (CoordSet::new(vec![0, 1]).unwrap(), 1.0),
            ],
            2,
        )
        .unwrap();
        let w2 = WeightSpec::explicit(
            vec![
                (CoordSet::new(vec![0]).unwrap(), 1.0),
                (CoordSet::new(vec![0, 1]).unwrap(), 2.0),
            ],
            2,
        )
        .unwrap();
        for (fam, alpha) in [(FomFamily::PAlphaTilde, 2.0), (FomFamily::Sobolev1, 2.0)] {
            let base = |w: WeightSpec| {
                let spec = FomSpec::new(fam, alpha, 1, NormExponent::Finite(2.0), w).unwrap();
                eval_kernel_fom(&pts, &spec).unwrap()
            };
            let m1 = base(w1.clone());
            let m2 = base(w2.clone());
            let s_u = m1.per_projection.unwrap()[&CoordSet::new(vec![0, 1]).unwrap()];
            if s_u >= 0.0 {
                assert!(m2.total >= m1.total);
            }
        }
    }

    #[test]
    fn qinf_max_combiner_ignores_duplicates() {
        // max is invariant to duplicating a projection entry: evaluate with
        // the same subsets twice via explicit weights
        let pts = PointData::from_words(2, 2, vec![0, 0, 1, 2, 2, 1, 3, 3]).unwrap();
        let u1 = CoordSet::new(vec![0]).unwrap();
        let u2 = CoordSet::new(vec![1]).unwrap();
        let w = WeightSpec::explicit(vec![(u1, 0.8), (u2, 0.8)], 2).unwrap();
        let spec = FomSpec::new(FomFamily::PAlphaTilde, 2.0, 1, NormExponent::Infinite, w)
            .unwrap();
        let m = eval_kernel_fom(&pts, &spec).unwrap();
        assert!(m.total >= 0.0);
        let per = m.per_projection.unwrap();
        let expect = per
            .values()
            .map(|b| 0.8 * b.max(0.0).sqrt())
            .fold(0.0f64, f64::max);
        assert!((m.total - expect).abs() < 1e-15);
    }
}
