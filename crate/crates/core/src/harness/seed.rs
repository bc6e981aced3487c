//! Sub-seed derivation. Every random stream in an experiment is a pure
//! function of the master seed and its position in the sweep.

pub(crate) mod stream {
    pub const GRAPH: u64 = 1;
    pub const PROBES: u64 = 2;
    pub const DRAW: u64 = 3;
    pub const SIGNAL: u64 = 4;
    pub const IMAGE: u64 = 5;
    pub const FRAME: u64 = 6;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream addressed by `path` (for example
/// `[stream, m_index, trial]`) under `master`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |h, &p| splitmix64(h ^ splitmix64(p)))
}
