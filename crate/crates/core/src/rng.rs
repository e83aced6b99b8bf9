//! Portable random numbers.
//!
//! Every trajectory in this crate is a pure function of a 64-bit seed. The
//! generator is xoshiro256++ seeded through SplitMix64 (the seeding routine of
//! `rand_xoshiro`), and the derived draws are pinned here rather than taken
//! from a general-purpose distribution library:
//!
//! * `below(n)`: Lemire's multiply-shift with rejection, unbiased on `0..n`;
//! * `unit()`: the top 53 bits of one output scaled by `2^-53`, in `[0, 1)`;
//! * `coin()`: the lowest bit of one output.
//!
//! Independent streams are derived with [`mix`], a SplitMix64 finalizer
//! applied to the pair `(master, index)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// The generator used by trials and instance generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlsRng(Xoshiro256PlusPlus);

impl SlsRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        SlsRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }
}

impl RngCore for SlsRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Draw helpers shared by every generator implementing [`RngCore`].
pub trait Draw: RngCore {
    /// Uniform integer in `0..n`. Panics if `n == 0`.
    #[inline]
    fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
            }
        }
        (m >> 64) as usize
    }

    /// Uniform float in `[0, 1)` with 53 bits of resolution.
    #[inline]
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

impl<R: RngCore + ?Sized> Draw for R {}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of stream `index` from `master`.
///
/// `mix(m, i) = splitmix64(m ^ splitmix64(i))`. Nested calls derive seeds for
/// multi-level indices, e.g. `mix(mix(master, n_vars), instance)`.
#[inline]
pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}
