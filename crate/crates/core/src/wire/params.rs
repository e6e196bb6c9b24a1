use eticket_groups::{descriptor_backend, BackendId, PairingGroup};

use super::{envelope, open_envelope, MessageKind, ParseError, ParseErrorKind, Reader, WireError, Writer, BODY_OFFSET};
use crate::params::{ParamElements, Params, SetupError};
use crate::policy::{PolicyUniverse, RangePolicy, SetPolicy};

/// Serializes the group descriptor, the policy universe and every public
/// element as one blob.
pub fn encode_params<B: PairingGroup>(params: &Params<B>) -> Vec<u8> {
    let grp = &params.grp;
    let mut w = Writer::new(grp);
    w.bytes(&grp.descriptor());
    w.nested(|w| write_universe(w, &params.universe));
    w.nested(|w| write_elements(w, params.elements()));
    envelope(MessageKind::Params, &w.into_bytes())
}

/// Rebuilds parameters, checking that the published tags are consistent.
pub fn decode_params<B: PairingGroup>(bytes: &[u8]) -> Result<Params<B>, WireError> {
    let (kind, body) = open_envelope(bytes)?;
    if kind != MessageKind::Params {
        return Err(WireError::WrongType {
            expected: MessageKind::Params,
            found: kind,
        });
    }
    let descriptor = first_field(body)?;
    let grp = B::from_descriptor(descriptor).map_err(|e| ParseError {
        offset: BODY_OFFSET + 4,
        field: "group descriptor",
        kind: e.into(),
    })?;
    let mut r = Reader::new(&grp, body, BODY_OFFSET);
    r.bytes("group descriptor")?;
    let (ranges, sets, base, width) = r.nested("universe", read_universe)?;
    let universe = PolicyUniverse::with_width(ranges, sets, base, width)?;
    let elements = r.nested("elements", read_elements)?;
    r.finish("params")?;
    let params = Params::new(grp.clone(), universe, elements)?;
    if !params.tags_consistent() {
        return Err(SetupError::InconsistentTags.into());
    }
    Ok(params)
}

/// Backend a parameter blob was generated for.
pub fn params_backend(bytes: &[u8]) -> Result<BackendId, WireError> {
    let (kind, body) = open_envelope(bytes)?;
    if kind != MessageKind::Params {
        return Err(WireError::WrongType {
            expected: MessageKind::Params,
            found: kind,
        });
    }
    let descriptor = first_field(body)?;
    descriptor_backend(descriptor).map_err(|e| {
        ParseError {
            offset: BODY_OFFSET + 4,
            field: "group descriptor",
            kind: e.into(),
        }
        .into()
    })
}

fn first_field(body: &[u8]) -> Result<&[u8], ParseError> {
    let truncated = ParseError {
        offset: BODY_OFFSET,
        field: "group descriptor",
        kind: ParseErrorKind::Truncated,
    };
    let len = body
        .get(..4)
        .map(|b| u32::from_be_bytes(b.try_into().expect("4 bytes")) as usize)
        .ok_or(truncated.clone())?;
    body.get(4..4 + len).ok_or(truncated)
}

fn write_universe<B: PairingGroup>(w: &mut Writer<'_, B>, u: &PolicyUniverse) {
    w.list(u.ranges(), |w, r| {
        w.str(&r.name);
        w.i64(r.lower);
        w.i64(r.upper);
    });
    w.list(u.sets(), |w, s| {
        w.str(&s.name);
        w.list(&s.items, |w, item| w.str(item));
    });
    w.u64(u.base());
    w.u64(u64::from(u.width()));
}

type UniverseParts = (Vec<RangePolicy>, Vec<SetPolicy>, u64, u32);

fn read_universe<B: PairingGroup>(r: &mut Reader<'_, B>) -> Result<UniverseParts, ParseError> {
    let ranges = r.list("range policies", |r| {
        Ok(RangePolicy {
            name: r.str("range name")?,
            lower: r.i64("range lower bound")?,
            upper: r.i64("range upper bound")?,
        })
    })?;
    let sets = r.list("set policies", |r| {
        Ok(SetPolicy {
            name: r.str("set name")?,
            items: r.list("set items", |r| r.str("set item"))?,
        })
    })?;
    let base = r.u64("digit base")?;
    let at = r.base + r.pos;
    let width = r.u64("digit width")?;
    let width = u32::try_from(width).map_err(|_| ParseError {
        offset: at,
        field: "digit width",
        kind: ParseErrorKind::BadValue(width.to_string()),
    })?;
    Ok((ranges, sets, base, width))
}

fn write_elements<B: PairingGroup>(w: &mut Writer<'_, B>, e: &ParamElements<B>) {
    for x in [&e.g, &e.g0, &e.g1, &e.g2, &e.g3] {
        w.g(x);
    }
    w.list(&e.range_attr_bases, |w, x| w.g(x));
    for x in [
        &e.range_base,
        &e.cred_rand_base,
        &e.item_tag_base,
        &e.user_key_base,
        &e.seller_key_base,
        &e.blinding_base,
    ] {
        w.g(x);
    }
    w.list(&e.set_bases, |w, x| w.g(x));
    w.g(&e.ca_public_key);
    w.g(&e.range_tag_key);
    w.list(&e.digit_tags, |w, x| w.g(x));
    w.list(&e.power_bases, |w, x| w.g(x));
    w.list(&e.set_public_keys, |w, x| w.g(x));
    w.list(&e.item_tags, |w, tags| w.list(tags, |w, x| w.g(x)));
}

fn read_elements<B: PairingGroup>(r: &mut Reader<'_, B>) -> Result<ParamElements<B>, ParseError> {
    let gs = |r: &mut Reader<'_, B>, field| r.list(field, |r| r.g(field));
    Ok(ParamElements {
        g: r.g("g")?,
        g0: r.g("g0")?,
        g1: r.g("g1")?,
        g2: r.g("g2")?,
        g3: r.g("g3")?,
        range_attr_bases: gs(r, "range attribute bases")?,
        range_base: r.g("range base")?,
        cred_rand_base: r.g("credential randomness base")?,
        item_tag_base: r.g("item tag base")?,
        user_key_base: r.g("user key base")?,
        seller_key_base: r.g("seller key base")?,
        blinding_base: r.g("blinding base")?,
        set_bases: gs(r, "set bases")?,
        ca_public_key: r.g("authority public key")?,
        range_tag_key: r.g("range tag key")?,
        digit_tags: gs(r, "digit tags")?,
        power_bases: gs(r, "power bases")?,
        set_public_keys: gs(r, "set public keys")?,
        item_tags: r.list("item tags", |r| gs(r, "item tags"))?,
    })
}
