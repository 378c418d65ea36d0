//! t-values of digital nets and their projections.

use crate::error::{Error, Result};
use crate::fom::kernels::binomial;
use crate::gf2::rank_of_rows;
use crate::pointsets::DigitalNetBase2;
use crate::weights::CoordSet;

/// Visit every composition of `total` into `parts` nonnegative parts; stop
/// early when the visitor returns false. Returns false iff stopped early.
fn for_each_composition(total: u32, parts: usize, f: &mut impl FnMut(&[u32]) -> bool) -> bool {
    let mut q = vec![0u32; parts];
    fn rec(q: &mut Vec<u32>, pos: usize, rem: u32, f: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if pos + 1 == q.len() {
            q[pos] = rem;
            return f(q);
        }
        for v in 0..=rem {
            q[pos] = v;
            if !rec(q, pos + 1, rem - v, f) {
                return false;
            }
        }
        true
    }
    rec(&mut q, 0, total, f)
}

/// The t-value of the projection of a digital net onto the coordinates in
/// `u`: the smallest t such that for every composition (q_j) of k−t, the
/// matrix stacking the first q_j rows of each generating matrix has full
/// rank k−t over Z₂.
pub fn t_value(net: &DigitalNetBase2, u: &CoordSet) -> Result<u32> {
    let k = net.k();
    let mats: Vec<&crate::gf2::BinaryMatrix> = u
        .coords()
        .iter()
        .map(|&j| {
            if (j as usize) < net.dim() {
                Ok(net.matrix(j as usize))
            } else {
                Err(Error::IndexOutOfRange { index: j as u64, bound: net.dim() as u64 })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    // row words of the first k rows of each projected matrix
    let rows: Vec<Vec<u64>> =
        mats.iter().map(|m| (0..k).map(|r| m.row_word(r)).collect()).collect();
    // largest m such that every composition of m yields rank m
    let mut best = 0u32;
    let mut stack: Vec<u64> = Vec::with_capacity(k as usize);
    for m in 1..=k {
        let ok = for_each_composition(m, rows.len(), &mut |comp| {
            stack.clear();
            for (c, &q) in comp.iter().enumerate() {
                for r in 0..q {
                    stack.push(rows[c][r as usize]);
                }
            }
            rank_of_rows(&stack) == m
        });
        if ok {
            best = m;
        } else {
            break;
        }
    }
    Ok(k - best)
}

/// Brute-force t-value by counting points in every dyadic box shape: the
/// smallest t such that each box of volume 2^{t−k} holds exactly 2^t points.
/// Points are given as digit words (first k digits used); guard: k ≤ 8 and
/// |coords| ≤ 3.
pub fn t_value_box_oracle_words(
    words: &[u64],
    dim: usize,
    w: u32,
    k: u32,
    coords: &[u32],
) -> Result<u32> {
    if k > 8 || coords.len() > 3 || coords.is_empty() {
        return Err(Error::GuardExceeded {
            cardinality: (coords.len() as u128) << k,
            guard: 3 << 8,
        });
    }
    let n = words.len() / dim;
    if n != 1usize << k {
        return Err(Error::InvalidArgument("need n = 2^k points".into()));
    }
    for t in 0..=k {
        let m = k - t;
        let mut counts = vec![0u32; 1usize << m];
        let ok = for_each_composition(m, coords.len(), &mut |comp| {
            counts.iter_mut().for_each(|c| *c = 0);
            for i in 0..n {
                let mut cell: u64 = 0;
                for (c, &q) in comp.iter().enumerate() {
                    let word = words[i * dim + coords[c] as usize];
                    let top = if q == 0 { 0 } else { word >> (w - q) };
                    cell = (cell << q) | top;
                }
                counts[cell as usize] += 1;
            }
            counts[..1usize << m].iter().all(|&c| c == 1u32 << t)
        });
        if ok {
            return Ok(t);
        }
    }
    unreachable!("t = k always passes: the single box holds all 2^k points");
}

/// Box-counting oracle on a net's own points.
pub fn t_value_box_oracle(net: &DigitalNetBase2, u: &CoordSet) -> Result<u32> {
    let words = net.all_words();
    t_value_box_oracle_words(&words, net.dim(), net.w(), net.k(), u.coords())
}

/// The star-discrepancy bound (2^t/n)·Σ_{j=0}^{min(order−1, k−t)} C(k−t, j).
pub fn t_value_bound(k: u32, t: u32, order: usize) -> f64 {
    let m = (k - t) as usize;
    let hi = (order - 1).min(m);
    let mut sum = 0.0;
    for j in 0..=hi {
        sum += binomial(m, j);
    }
    2f64.powi(t as i32) / 2f64.powi(k as i32) * sum
}
