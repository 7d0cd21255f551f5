//! Bit-level helpers shared by vertices, tuples and faces.
//!
//! Throughout the crate a point of `{0,1}^d` is a `u64` whose bit `i` holds
//! coordinate `i` (variable `x_{i+1}` in text formats). Text renders coordinate
//! `i` as character `i`, so `"100"` is the point with only `x1` set.

/// Renders the low `width` bits of `value`, coordinate 0 first.
pub fn format_bits(value: u64, width: usize) -> String {
    (0..width)
        .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a string of `0`/`1` characters; `None` on any other character or
/// if the string is longer than 64.
pub fn parse_bits(text: &str) -> Option<u64> {
    if text.len() > 64 {
        return None;
    }
    text.bytes().enumerate().try_fold(0u64, |acc, (i, b)| match b {
        b'0' => Some(acc),
        b'1' => Some(acc | 1 << i),
        _ => None,
    })
}

/// Mask with the low `width` bits set.
#[inline]
pub fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Deletes the bits selected by `removed` and packs the rest downwards.
#[inline]
pub fn delete_bits(value: u64, removed: u64) -> u64 {
    if removed == 0 {
        return value;
    }
    let mut out = 0u64;
    let mut pos = 0;
    let mut keep = !removed;
    while keep != 0 && (value >> keep.trailing_zeros()) != 0 {
        let i = keep.trailing_zeros();
        out |= (value >> i & 1) << pos;
        pos += 1;
        keep &= keep - 1;
    }
    out
}
