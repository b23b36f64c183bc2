//! Seeded random streams.
//!
//! Every Monte Carlo loop draws from substreams derived from one master seed.
//! Work is partitioned into fixed blocks whose stream index depends only on
//! the block position, so results are identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// The generator used by all samplers.
pub type RandomStream = ChaCha12Rng;

/// Number of channel draws sharing one substream.
pub const BLOCK_LEN: usize = 4096;

/// Identifies one independent substream of a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub seed: u64,
    pub stream: u64,
}

impl StreamId {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(self) -> RandomStream {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Splits `total` items into consecutive blocks of [`BLOCK_LEN`].
pub(crate) fn blocks(total: usize) -> impl Iterator<Item = (u64, usize)> {
    (0..total.div_ceil(BLOCK_LEN)).map(move |b| {
        let len = BLOCK_LEN.min(total - b * BLOCK_LEN);
        (b as u64, len)
    })
}
