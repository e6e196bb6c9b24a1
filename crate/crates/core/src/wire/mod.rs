//! Deterministic byte encodings of messages, proofs, tickets, parameters,
//! actor state and the verifier log.
//!
//! A message is an envelope `version (u8) || kind (u8) || body length (u32
//! BE) || body`. A body is a sequence of fields in declaration order, each a
//! 4-byte big-endian length followed by its bytes. Group elements and
//! scalars use their canonical tagged encodings; lists and nested records are
//! fields holding a sub-body.

use std::fmt;

use eticket_groups::{GroupError, PairingGroup, Scalar};
use thiserror::Error;

use crate::params::SetupError;
use crate::policy::PolicyError;

mod codec;
mod params;
mod state;
mod table_log;

pub use self::params::{decode_params, encode_params, params_backend};
pub use self::state::{CaState, SellerState, UserState};
pub use self::table_log::{append_entry, load_table, parse_log, persist_table, table_bytes};

pub const WIRE_VERSION: u8 = 1;

/// Upper bound on the size of a single message or log record.
const MAX_BODY: usize = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum MessageKind {
    SellerRegistration = 1,
    SellerCredential = 2,
    UserRegistration = 3,
    UserCredential = 4,
    SellerAuth = 5,
    TicketRequest = 6,
    TicketIssue = 7,
    ValidationChallenge = 8,
    TicketTranscript = 9,
    ValidationDecision = 10,
    Params = 11,
    Ticket = 12,
    VerifierEntry = 13,
    CaState = 14,
    SellerState = 15,
    UserState = 16,
}

impl MessageKind {
    pub const ALL: [MessageKind; 16] = [
        Self::SellerRegistration,
        Self::SellerCredential,
        Self::UserRegistration,
        Self::UserCredential,
        Self::SellerAuth,
        Self::TicketRequest,
        Self::TicketIssue,
        Self::ValidationChallenge,
        Self::TicketTranscript,
        Self::ValidationDecision,
        Self::Params,
        Self::Ticket,
        Self::VerifierEntry,
        Self::CaState,
        Self::SellerState,
        Self::UserState,
    ];

    pub fn from_u8(b: u8) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| *k as u8 == b)
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("truncated")]
    Truncated,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error(transparent)]
    Element(#[from] GroupError),
    #[error("invalid UTF-8")]
    Utf8,
    #[error("invalid value: {0}")]
    BadValue(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {offset} in `{field}`: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub field: &'static str,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WireError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported wire version {0}")]
    VersionMismatch(u8),
    #[error("unknown message type {0}")]
    UnknownType(u8),
    #[error("expected a {expected} message, found {found}")]
    WrongType { expected: MessageKind, found: MessageKind },
    #[error("invalid parameters: {0}")]
    Params(#[from] SetupError),
    #[error("invalid policy universe: {0}")]
    Policy(#[from] PolicyError),
    #[error("io error: {0}")]
    Io(String),
    #[error("corrupt log record at byte {offset}: {reason}")]
    CorruptRecord { offset: usize, reason: String },
}

impl From<std::io::Error> for WireError {
    fn from(e: std::io::Error) -> Self {
        WireError::Io(e.to_string())
    }
}

/// Builds a body field by field.
pub struct Writer<'a, B: PairingGroup> {
    grp: &'a B,
    buf: Vec<u8>,
}

impl<'a, B: PairingGroup> Writer<'a, B> {
    pub fn new(grp: &'a B) -> Self {
        Self { grp, buf: Vec::new() }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(&(b.len() as u32).to_be_bytes());
        self.buf.extend_from_slice(b);
    }

    pub fn g(&mut self, a: &B::G) {
        let e = self.grp.encode_g(a);
        self.bytes(&e);
    }

    pub fn gt(&mut self, a: &B::Gt) {
        let e = self.grp.encode_gt(a);
        self.bytes(&e);
    }

    pub fn scalar(&mut self, s: &Scalar) {
        let e = self.grp.encode_scalar(s);
        self.bytes(&e);
    }

    pub fn str(&mut self, s: &str) {
        self.bytes(s.as_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.bytes(&v.to_be_bytes());
    }

    pub fn i64(&mut self, v: i64) {
        self.bytes(&v.to_be_bytes());
    }

    pub fn bool(&mut self, v: bool) {
        self.bytes(&[u8::from(v)]);
    }

    pub fn nested(&mut self, f: impl FnOnce(&mut Writer<'a, B>)) {
        let mut w = Writer::new(self.grp);
        f(&mut w);
        self.bytes(&w.buf);
    }

    pub fn item<T: Wire<B>>(&mut self, v: &T) {
        self.nested(|w| v.write(w));
    }

    /// A count followed by one field per element.
    pub fn list<T>(&mut self, items: &[T], mut f: impl FnMut(&mut Writer<'a, B>, &T)) {
        self.nested(|w| {
            w.u64(items.len() as u64);
            for it in items {
                f(w, it);
            }
        });
    }

    pub fn items<T: Wire<B>>(&mut self, items: &[T]) {
        self.list(items, |w, v| w.item(v));
    }

    pub fn option<T: Wire<B>>(&mut self, v: Option<&T>) {
        self.nested(|w| {
            w.bool(v.is_some());
            if let Some(v) = v {
                w.item(v);
            }
        });
    }
}

/// Reads a body field by field, reporting absolute offsets.
pub struct Reader<'a, B: PairingGroup> {
    grp: &'a B,
    buf: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a, B: PairingGroup> Reader<'a, B> {
    pub fn new(grp: &'a B, buf: &'a [u8], base: usize) -> Self {
        Self { grp, buf, pos: 0, base }
    }

    pub fn grp(&self) -> &'a B {
        self.grp
    }

    fn err(&self, field: &'static str, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.base + self.pos,
            field,
            kind,
        }
    }

    /// Raw field bytes and the absolute offset of their first byte.
    fn raw(&mut self, field: &'static str) -> Result<(&'a [u8], usize), ParseError> {
        let rest = &self.buf[self.pos..];
        if rest.len() < 4 {
            return Err(self.err(field, ParseErrorKind::Truncated));
        }
        let len = u32::from_be_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
        if rest.len() - 4 < len {
            return Err(self.err(field, ParseErrorKind::Truncated));
        }
        let start = self.base + self.pos + 4;
        self.pos += 4 + len;
        Ok((&rest[4..4 + len], start))
    }

    pub fn bytes(&mut self, field: &'static str) -> Result<&'a [u8], ParseError> {
        self.raw(field).map(|(b, _)| b)
    }

    fn element<T>(
        &mut self,
        field: &'static str,
        decode: impl FnOnce(&B, &[u8]) -> Result<T, GroupError>,
    ) -> Result<T, ParseError> {
        let at = self.base + self.pos;
        let (b, _) = self.raw(field)?;
        decode(self.grp, b).map_err(|e| ParseError {
            offset: at,
            field,
            kind: e.into(),
        })
    }

    pub fn g(&mut self, field: &'static str) -> Result<B::G, ParseError> {
        self.element(field, |g, b| g.decode_g(b))
    }

    pub fn gt(&mut self, field: &'static str) -> Result<B::Gt, ParseError> {
        self.element(field, |g, b| g.decode_gt(b))
    }

    pub fn scalar(&mut self, field: &'static str) -> Result<Scalar, ParseError> {
        self.element(field, |g, b| g.decode_scalar(b))
    }

    pub fn str(&mut self, field: &'static str) -> Result<String, ParseError> {
        let at = self.base + self.pos;
        let b = self.bytes(field)?;
        String::from_utf8(b.to_vec()).map_err(|_| ParseError {
            offset: at,
            field,
            kind: ParseErrorKind::Utf8,
        })
    }

    fn fixed<const N: usize>(&mut self, field: &'static str) -> Result<[u8; N], ParseError> {
        let at = self.base + self.pos;
        let b = self.bytes(field)?;
        b.try_into().map_err(|_| ParseError {
            offset: at,
            field,
            kind: ParseErrorKind::BadValue(format!("expected {N} bytes, got {}", b.len())),
        })
    }

    pub fn u64(&mut self, field: &'static str) -> Result<u64, ParseError> {
        self.fixed::<8>(field).map(u64::from_be_bytes)
    }

    pub fn i64(&mut self, field: &'static str) -> Result<i64, ParseError> {
        self.fixed::<8>(field).map(i64::from_be_bytes)
    }

    pub fn bool(&mut self, field: &'static str) -> Result<bool, ParseError> {
        let at = self.base + self.pos;
        match self.fixed::<1>(field)? {
            [0] => Ok(false),
            [1] => Ok(true),
            [b] => Err(ParseError {
                offset: at,
                field,
                kind: ParseErrorKind::BadValue(format!("boolean byte {b}")),
            }),
        }
    }

    pub fn nested<T>(
        &mut self,
        field: &'static str,
        f: impl FnOnce(&mut Reader<'a, B>) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let (b, start) = self.raw(field)?;
        let mut r = Reader::new(self.grp, b, start);
        let v = f(&mut r)?;
        r.finish(field)?;
        Ok(v)
    }

    pub fn item<T: Wire<B>>(&mut self, field: &'static str) -> Result<T, ParseError> {
        self.nested(field, T::read)
    }

    pub fn list<T>(
        &mut self,
        field: &'static str,
        mut f: impl FnMut(&mut Reader<'a, B>) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.nested(field, |r| {
            let at = r.base + r.pos;
            let n = r.u64(field)?;
            // every element takes at least its 4-byte length prefix
            if n > (r.buf.len() - r.pos) as u64 / 4 {
                return Err(ParseError {
                    offset: at,
                    field,
                    kind: ParseErrorKind::BadValue(format!("list length {n}")),
                });
            }
            (0..n).map(|_| f(r)).collect()
        })
    }

    pub fn items<T: Wire<B>>(&mut self, field: &'static str) -> Result<Vec<T>, ParseError> {
        self.list(field, |r| r.item(field))
    }

    pub fn option<T: Wire<B>>(&mut self, field: &'static str) -> Result<Option<T>, ParseError> {
        self.nested(field, |r| {
            if r.bool(field)? {
                r.item(field).map(Some)
            } else {
                Ok(None)
            }
        })
    }

    pub fn finish(&self, field: &'static str) -> Result<(), ParseError> {
        let left = self.buf.len() - self.pos;
        if left == 0 {
            Ok(())
        } else {
            Err(self.err(field, ParseErrorKind::TrailingBytes(left)))
        }
    }
}

/// A value with a field-list encoding.
pub trait Wire<B: PairingGroup>: Sized {
    fn write(&self, w: &mut Writer<'_, B>);
    fn read(r: &mut Reader<'_, B>) -> Result<Self, ParseError>;
}

/// A value sent or stored as a whole envelope.
pub trait Message<B: PairingGroup>: Wire<B> {
    const KIND: MessageKind;
}

/// Frames a body.
pub fn envelope(kind: MessageKind, body: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len() + 6);
    out.push(WIRE_VERSION);
    out.push(kind as u8);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(body);
    out
}

/// Splits an envelope into its kind and body.
pub fn open_envelope(bytes: &[u8]) -> Result<(MessageKind, &[u8]), WireError> {
    let header_err = |field| ParseError {
        offset: bytes.len(),
        field,
        kind: ParseErrorKind::Truncated,
    };
    let (&version, rest) = bytes.split_first().ok_or(header_err("version"))?;
    if version != WIRE_VERSION {
        return Err(WireError::VersionMismatch(version));
    }
    let (&kind, rest) = rest.split_first().ok_or(header_err("type"))?;
    let kind = MessageKind::from_u8(kind).ok_or(WireError::UnknownType(kind))?;
    if rest.len() < 4 {
        return Err(header_err("length").into());
    }
    let len = u32::from_be_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
    let body = &rest[4..];
    if len > MAX_BODY || body.len() < len {
        return Err(ParseError {
            offset: 2,
            field: "length",
            kind: ParseErrorKind::Truncated,
        }
        .into());
    }
    if body.len() > len {
        return Err(ParseError {
            offset: 6 + len,
            field: "envelope",
            kind: ParseErrorKind::TrailingBytes(body.len() - len),
        }
        .into());
    }
    Ok((kind, body))
}

/// Offset of the body inside an envelope.
pub const BODY_OFFSET: usize = 6;

pub fn encode_as<B: PairingGroup, T: Wire<B>>(grp: &B, kind: MessageKind, v: &T) -> Vec<u8> {
    let mut w = Writer::new(grp);
    v.write(&mut w);
    envelope(kind, &w.buf)
}

pub fn decode_as<B: PairingGroup, T: Wire<B>>(grp: &B, kind: MessageKind, bytes: &[u8]) -> Result<T, WireError> {
    let (found, body) = open_envelope(bytes)?;
    if found != kind {
        return Err(WireError::WrongType { expected: kind, found });
    }
    let mut r = Reader::new(grp, body, BODY_OFFSET);
    let v = T::read(&mut r)?;
    r.finish("body")?;
    Ok(v)
}

pub fn encode<B: PairingGroup, M: Message<B>>(grp: &B, m: &M) -> Vec<u8> {
    encode_as(grp, M::KIND, m)
}

pub fn decode<B: PairingGroup, M: Message<B>>(grp: &B, bytes: &[u8]) -> Result<M, WireError> {
    decode_as(grp, M::KIND, bytes)
}

/// Kind of an envelope without decoding its body.
pub fn peek_kind(bytes: &[u8]) -> Result<MessageKind, WireError> {
    open_envelope(bytes).map(|(k, _)| k)
}
