/// Lowercase hex, two characters per byte.
pub fn byte_to_hex(bytes: &[u8]) -> String {
    const DIGITS: &[u8; 16] = b"0123456789abcdef";
    let mut out = String::with_capacity(bytes.len() * 2);
    for &b in bytes {
        out.push(DIGITS[(b >> 4) as usize] as char);
        out.push(DIGITS[(b & 0x0f) as usize] as char);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HexError {
    #[error("hex string has odd length {0}")]
    OddLength(usize),
    #[error("invalid hex character {ch:?} at offset {offset}")]
    InvalidChar { offset: usize, ch: char },
}

/// Parses lowercase hex produced by [`byte_to_hex`].
pub fn hex_to_byte(hex: &str) -> Result<Vec<u8>, HexError> {
    if !hex.len().is_multiple_of(2) {
        return Err(HexError::OddLength(hex.len()));
    }
    let nibble = |offset: usize, c: u8| match c {
        b'0'..=b'9' => Ok(c - b'0'),
        b'a'..=b'f' => Ok(c - b'a' + 10),
        _ => Err(HexError::InvalidChar {
            offset,
            ch: hex[offset..].chars().next().unwrap_or('?'),
        }),
    };
    hex.as_bytes()
        .chunks_exact(2)
        .enumerate()
        .map(|(i, pair)| Ok(nibble(2 * i, pair[0])? << 4 | nibble(2 * i + 1, pair[1])?))
        .collect()
}

/// Parses exactly 32 bytes of hex.
pub(crate) fn hex_to_digest(hex: &str) -> Result<[u8; 32], String> {
    let bytes = hex_to_byte(hex).map_err(|e| e.to_string())?;
    bytes
        .try_into()
        .map_err(|v: Vec<u8>| format!("expected 32 bytes, got {}", v.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(byte_to_hex(&[0x00, 0xff]), "00ff");
        assert_eq!(byte_to_hex(&[0x0a]), "0a");
        assert_eq!(byte_to_hex(&[]), "");
        assert_eq!(hex_to_byte("00ff").unwrap(), vec![0, 255]);
    }

    #[test]
    fn errors() {
        assert_eq!(hex_to_byte("abc"), Err(HexError::OddLength(3)));
        assert_eq!(
            hex_to_byte("0g"),
            Err(HexError::InvalidChar { offset: 1, ch: 'g' })
        );
        assert!(matches!(hex_to_byte("AB"), Err(HexError::InvalidChar { offset: 0, .. })));
        assert!(hex_to_byte("é0").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            prop_assert_eq!(hex_to_byte(&byte_to_hex(&bytes)).unwrap(), bytes);
        }
    }
}
