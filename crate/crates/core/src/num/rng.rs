use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seedable, splittable random stream.
///
/// A stream is identified by a master seed and a stream id. Equal pairs give
/// bit-identical sequences; distinct stream ids select disjoint ChaCha
/// streams under the same key.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// A fresh stream under the same master seed, keyed by `tag`.
    ///
    /// Children of distinct parents or distinct tags land on distinct stream
    /// ids with overwhelming probability; the derivation does not consume any
    /// state of `self`.
    pub fn child(&self, tag: u64) -> RngStream {
        RngStream::new(self.seed, splitmix64(self.stream ^ splitmix64(tag)))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}
