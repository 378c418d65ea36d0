//! Counter-based deterministic random number streams.
//!
//! All randomness in this crate flows through [`CounterRng`], a SplitMix64-style
//! counter generator. Output `i` of a stream is a pure function of
//! (key, i), so streams can be split per coordinate or per replicate and
//! consumed in any order without changing the values drawn. This is what makes
//! search and randomization results independent of scheduling.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective mixer with good avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A counter-based 64-bit generator with explicit stream splitting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { key: mix64(seed.wrapping_add(GOLDEN)), counter: 0 }
    }

    /// Derive an independent substream. Substreams with distinct ids never
    /// collide with each other or with the parent stream.
    pub fn substream(&self, id: u64) -> CounterRng {
        CounterRng {
            key: mix64(self.key ^ mix64(id.wrapping_mul(GOLDEN).wrapping_add(1))),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter += 1;
        mix64(self.key.wrapping_add(c.wrapping_mul(GOLDEN)))
    }

    /// Uniform value in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`, unbiased via rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// The low `nbits` of the next output, `0 < nbits <= 64`.
    #[inline]
    pub fn bits(&mut self, nbits: u32) -> u64 {
        debug_assert!(nbits >= 1 && nbits <= 64);
        self.next_u64() >> (64 - nbits)
    }
}

/// Stateless hash of a path of integers to one 64-bit value. Used for
/// O(1)-memory scramble trees where each node's bit must be recomputable.
pub fn hash_path(key: u64, path: &[u64]) -> u64 {
    let mut h = key;
    for &p in path {
        h = mix64(h ^ p.wrapping_mul(GOLDEN).wrapping_add(0x1000_0001));
    }
    h
}
