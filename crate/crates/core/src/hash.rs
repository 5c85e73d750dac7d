//! Stable 64-bit content hashing (FNV-1a).
//!
//! Prompt hashes are persisted in the prediction cache and compared across
//! processes, so the hash must not depend on the process (std's SipHash is
//! randomly keyed per run).

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over a byte slice.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// FNV-1a over a string's UTF-8 bytes.
pub fn fnv1a64_str(s: &str) -> u64 {
    fnv1a64(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_vectors() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn stable_across_calls() {
        assert_eq!(fnv1a64_str("prompt text"), fnv1a64_str("prompt text"));
        assert_ne!(fnv1a64_str("prompt text"), fnv1a64_str("prompt text "));
    }
}
