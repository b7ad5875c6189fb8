//! Bit strings and the codes written into pebble placements.
//!
//! Ports are written big-endian in `1 + ⌊log₂ deg⌋` bits, so the reader only
//! needs the degree of the node it stands on to know how many bits to take.
//! The doubling transform (`1 → 11`, `0 → 10`) produces strings whose aligned
//! bit pairs are never `00`, which makes an aligned `00` pair a safe separator.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("port {port} out of range for degree {degree}")]
    PortRange { port: usize, degree: usize },
    #[error("need {needed} bits at offset {offset}, only {len} available")]
    CodeUnderrun {
        offset: usize,
        needed: usize,
        len: usize,
    },
    #[error("decoded port {value} is not below degree {degree}")]
    InvalidPortCode { value: usize, degree: usize },
    #[error("malformed transformed string: {0}")]
    MalformedTransform(String),
    #[error("majority of an empty segment list")]
    EmptyInput,
    #[error("invalid bit character {0:?}")]
    BadChar(char),
}

/// A finite sequence of bits, rendered as ASCII `0`/`1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitString>) -> BitString {
        let mut out = BitString::new();
        for p in parts {
            out.extend_from(p);
        }
        out
    }

    /// True if `00` occurs anywhere, aligned or not.
    pub fn contains_double_zero(&self) -> bool {
        self.0.windows(2).any(|w| !w[0] && !w[1])
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodecError::BadChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

/// `1 + ⌊log₂ deg⌋`, the code width for a port at a node of degree `deg ≥ 1`.
pub fn port_width(deg: usize) -> usize {
    assert!(deg >= 1, "degree must be positive");
    (usize::BITS - deg.leading_zeros()) as usize
}

/// Big-endian binary of `port`, zero-padded to [`port_width`]`(deg)` bits.
pub fn port_code(port: usize, deg: usize) -> Result<BitString, CodecError> {
    if port >= deg {
        return Err(CodecError::PortRange { port, degree: deg });
    }
    let width = port_width(deg);
    Ok(BitString(
        (0..width).rev().map(|i| (port >> i) & 1 == 1).collect(),
    ))
}

/// Reads one port code at `offset`; returns the port and the offset just past it.
pub fn decode_port(bits: &BitString, offset: usize, deg: usize) -> Result<(usize, usize), CodecError> {
    let width = port_width(deg);
    let end = offset + width;
    if end > bits.len() {
        return Err(CodecError::CodeUnderrun {
            offset,
            needed: width,
            len: bits.len(),
        });
    }
    let value = bits.0[offset..end]
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
    if value >= deg {
        return Err(CodecError::InvalidPortCode { value, degree: deg });
    }
    Ok((value, end))
}

/// Doubling code: every `1` becomes `11` and every `0` becomes `10`.
pub fn transform(g: &BitString) -> BitString {
    BitString(g.0.iter().flat_map(|&b| [true, b]).collect())
}

pub fn inverse_transform(gh: &BitString) -> Result<BitString, CodecError> {
    if !gh.len().is_multiple_of(2) {
        return Err(CodecError::MalformedTransform(format!("odd length {}", gh.len())));
    }
    gh.0.chunks(2)
        .enumerate()
        .map(|(i, pair)| {
            if pair[0] {
                Ok(pair[1])
            } else {
                Err(CodecError::MalformedTransform(format!(
                    "pair {i} starts with 0"
                )))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(BitString)
}

/// Splits at aligned `00` pairs (bit positions `2k`, `2k+1`).
///
/// Segments between separators are returned in order, including empty ones.
/// A trailing odd bit is kept in the last segment.
pub fn split_on_double_zero(g: &BitString) -> Vec<BitString> {
    let mut segments = Vec::new();
    let mut current = Vec::new();
    for pair in g.0.chunks(2) {
        if pair == [false, false] {
            segments.push(BitString(std::mem::take(&mut current)));
        } else {
            current.extend_from_slice(pair);
        }
    }
    segments.push(BitString(current));
    segments
}

/// Most frequent segment and its count; ties go to the earliest first occurrence.
pub fn majority_with_count(segments: &[BitString]) -> Result<(BitString, usize), CodecError> {
    let mut best: Option<(&BitString, usize)> = None;
    for (i, seg) in segments.iter().enumerate() {
        if segments[..i].contains(seg) {
            continue;
        }
        let count = segments[i..].iter().filter(|s| *s == seg).count();
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((seg, count));
        }
    }
    best.map(|(s, c)| (s.clone(), c)).ok_or(CodecError::EmptyInput)
}

pub fn majority_segment(segments: &[BitString]) -> Result<BitString, CodecError> {
    majority_with_count(segments).map(|(s, _)| s)
}
