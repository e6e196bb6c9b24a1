//! Canonical element framing: one tag byte, a 4-byte big-endian payload
//! length, then the payload.

use crate::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Tag {
    G = 0x01,
    Gt = 0x02,
    Scalar = 0x03,
}

pub const HEADER_LEN: usize = 5;

pub fn frame(tag: Tag, payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.push(tag as u8);
    out.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    out.extend_from_slice(payload);
    out
}

/// Strips the header, requiring the whole input to be exactly one frame.
pub fn unframe(tag: Tag, bytes: &[u8]) -> Result<&[u8], GroupError> {
    let (payload, rest) = split_frame(tag, bytes)?;
    if !rest.is_empty() {
        return Err(GroupError::BadLength {
            expected: bytes.len() - rest.len(),
            found: bytes.len(),
        });
    }
    Ok(payload)
}

/// Reads one frame from the front of `bytes`, returning the payload and the
/// remaining input.
pub fn split_frame(tag: Tag, bytes: &[u8]) -> Result<(&[u8], &[u8]), GroupError> {
    if bytes.len() < HEADER_LEN {
        return Err(GroupError::Truncated);
    }
    if bytes[0] != tag as u8 {
        return Err(GroupError::BadTag {
            expected: tag as u8,
            found: bytes[0],
        });
    }
    let len = u32::from_be_bytes([bytes[1], bytes[2], bytes[3], bytes[4]]) as usize;
    let body = &bytes[HEADER_LEN..];
    if body.len() < len {
        return Err(GroupError::Truncated);
    }
    Ok(body.split_at(len))
}

pub fn left_pad(bytes: &[u8], width: usize) -> Vec<u8> {
    debug_assert!(bytes.len() <= width);
    let mut out = vec![0u8; width - bytes.len()];
    out.extend_from_slice(bytes);
    out
}
