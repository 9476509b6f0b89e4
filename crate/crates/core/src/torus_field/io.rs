use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::field::{FieldKind, ScalarField};
use super::grid::GridSpec;

const MAGIC: &[u8; 4] = b"OKF1";
const HEADER_LEN: usize = 8;

/// Encodes a field as `OKF1` bytes.
///
/// Layout: magic, kind code, dim, two zero bytes, `dim` little-endian `u32`
/// sizes, then the values as little-endian `f64`, last axis fastest.
pub fn encode_field(field: &ScalarField) -> Vec<u8> {
    let spec = field.spec();
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * spec.dim() + 8 * spec.len());
    out.extend_from_slice(MAGIC);
    out.push(field.kind().code());
    out.push(spec.dim() as u8);
    out.extend_from_slice(&[0, 0]);
    for &n in spec.sizes() {
        out.extend_from_slice(&(n as u32).to_le_bytes());
    }
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<ScalarField> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let kind = FieldKind::from_code(bytes[4])
        .ok_or_else(|| Error::Format(format!("unknown kind byte {}", bytes[4])))?;
    let dim = bytes[5] as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::Format(format!("unsupported dimension {dim}")));
    }
    if bytes[6] != 0 || bytes[7] != 0 {
        return Err(Error::Format("reserved header bytes are not zero".into()));
    }
    let sizes_end = HEADER_LEN + 4 * dim;
    if bytes.len() < sizes_end {
        return Err(Error::Format("truncated".into()));
    }
    let sizes: Vec<usize> = bytes[HEADER_LEN..sizes_end]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let count = sizes
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .and_then(|c| c.checked_mul(8).map(|_| c))
        .ok_or_else(|| Error::Format("size overflow".into()))?;
    let payload = &bytes[sizes_end..];
    if payload.len() != count * 8 {
        return Err(Error::Format(format!(
            "truncated: header declares {count} values, payload holds {} bytes",
            payload.len()
        )));
    }
    let spec = GridSpec::new(&sizes).map_err(|e| Error::Format(e.to_string()))?;
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarField::new(spec, values, kind).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_field(field: &ScalarField, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_field(field))?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<ScalarField> {
    decode_field(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ScalarField {
        let g = GridSpec::new(&[4, 6]).unwrap();
        ScalarField::from_fn(&g, |x| (x[0] * 7.0).sin() + x[1])
    }

    #[test]
    fn header_layout() {
        let bytes = encode_field(&sample());
        assert_eq!(&bytes[..8], b"OKF1\x00\x02\x00\x00");
        assert_eq!(&bytes[8..16], &[4, 0, 0, 0, 6, 0, 0, 0]);
        assert_eq!(bytes.len(), 16 + 24 * 8);
    }

    #[test]
    fn corrupt_magic() {
        let mut bytes = encode_field(&sample());
        bytes[0] = b'X';
        assert!(decode_field(&bytes).unwrap_err().to_string().contains("bad magic"));
    }

    #[test]
    fn truncated_payload() {
        let bytes = encode_field(&sample());
        let err = decode_field(&bytes[..bytes.len() - 8]).unwrap_err();
        assert!(err.to_string().contains("truncated"));
    }

    #[test]
    fn unknown_kind_and_overflow() {
        let mut bytes = encode_field(&sample());
        bytes[4] = 9;
        assert!(decode_field(&bytes).unwrap_err().to_string().contains("kind"));
        let mut huge = b"OKF1\x00\x03\x00\x00".to_vec();
        for _ in 0..3 {
            huge.extend_from_slice(&u32::MAX.to_le_bytes());
        }
        assert!(decode_field(&huge).unwrap_err().to_string().contains("overflow"));
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.okf");
        let f = sample();
        write_field(&f, &path).unwrap();
        assert_eq!(read_field(&path).unwrap(), f);
    }

    proptest! {
        #[test]
        fn bitwise_roundtrip(values in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::ZERO | proptest::num::f64::SUBNORMAL, 32)) {
            let g = GridSpec::new(&[4, 8]).unwrap();
            let f = ScalarField::generic(g, values.clone()).unwrap();
            let back = decode_field(&encode_field(&f)).unwrap();
            let same = back.values().iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits());
            prop_assert!(same);
        }
    }
}
