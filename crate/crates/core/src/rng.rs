//! Seedable, portable random source shared by the model and the generator.
//!
//! ChaCha8 with a 64-bit seed expanded through `seed_from_u64`. Ensemble
//! members use `base_seed + member_index`. The full generator position can
//! be exported as a hex string and restored bit-exactly.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SnapshotError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamRng(ChaCha8Rng);

const STATE_HEX_LEN: usize = 2 * (32 + 8 + 16);

impl StreamRng {
    pub fn from_seed(seed: u64) -> Self {
        StreamRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent sub-stream of the same seed, used for per-source draws.
    pub fn from_seed_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        StreamRng(rng)
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    /// Key, stream id and word position as 112 lowercase hex digits.
    pub fn state_hex(&self) -> String {
        let mut bytes = Vec::with_capacity(STATE_HEX_LEN / 2);
        bytes.extend_from_slice(&self.0.get_seed());
        bytes.extend_from_slice(&self.0.get_stream().to_be_bytes());
        bytes.extend_from_slice(&self.0.get_word_pos().to_be_bytes());
        hex::encode(bytes)
    }

    pub fn from_state_hex(s: &str) -> Result<Self, SnapshotError> {
        if s.len() != STATE_HEX_LEN {
            return Err(SnapshotError::Malformed(format!(
                "rng state must be {STATE_HEX_LEN} hex digits, got {}",
                s.len()
            )));
        }
        let bytes = hex::decode(s).map_err(|e| SnapshotError::Malformed(format!("rng state: {e}")))?;
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&bytes[..32]);
        let stream = u64::from_be_bytes(bytes[32..40].try_into().expect("8 bytes"));
        let word_pos = u128::from_be_bytes(bytes[40..56].try_into().expect("16 bytes"));
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(stream);
        rng.set_word_pos(word_pos);
        Ok(StreamRng(rng))
    }
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}
