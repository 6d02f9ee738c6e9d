//! Seeded random streams.
//!
//! Every trial draws from its own ChaCha8 stream, derived from a master seed
//! and a 64-bit stream index. Results therefore do not depend on how trials
//! are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RandomStream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Streams { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Independent stream number `index`.
    pub fn stream(&self, index: u64) -> RandomStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(index);
        rng
    }

    /// Stream for trial `trial` of the sweep point with `n` vectors.
    pub fn trial(&self, n: usize, trial: usize) -> RandomStream {
        self.stream(((n as u64) << 24) | trial as u64)
    }

    /// A child family whose streams do not collide with this one's.
    pub fn child(&self, label: u64) -> Streams {
        // splitmix64 finalizer
        let mut z = self.master ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Streams::new(z ^ (z >> 31))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_index_same_stream() {
        let s = Streams::new(7);
        let (mut a, mut b) = (s.stream(3), s.stream(3));
        for _ in 0..4 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
    }

    #[test]
    fn distinct_indices_differ() {
        let s = Streams::new(7);
        let x: u64 = s.stream(0).random();
        let y: u64 = s.stream(1).random();
        let z: u64 = s.child(1).stream(0).random();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }
}
