//! Mode mapping, sampled basis tables and the radial grid.

mod format;
mod grid;
mod mapping;
mod tables;

pub use format::{read_basis, write_basis};
pub use grid::{default_radial_grid, PeakProfile, RadialGrid};
pub use mapping::{default_mode_mapping, ModeMapping};
pub use tables::{synthesize_basis, BasisParts, BasisTables};

/// 64-bit FNV-1a, used to fingerprint inputs recorded in matrix metadata.
pub(crate) fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for word in words {
        for byte in word.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(PRIME);
        }
    }
    hash
}
