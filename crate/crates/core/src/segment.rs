//! Cuspidal lines, cuspidal representations, segments and multisegments.
//!
//! A cuspidal representation is modelled as `ν^e ρ₀` where `ρ₀` is the base
//! point of an abstract [`CuspidalLine`] and `e` an exact rational. Segments
//! are arithmetic progressions `[ν^a ρ, ν^b ρ]` with `b - a` a nonnegative
//! integer.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact exponent of the unramified twist `ν`.
pub type Rational = num_rational::Rational64;

/// Identifier of the line carrying the trivial character of `G₁`.
pub const TRIVIAL_LINE: &str = "1";

pub(crate) fn half() -> Rational {
    Rational::new(1, 2)
}

pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// Serde adapter writing a rational as a string such as `"-1/2"`.
pub mod rational_str {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

/// A family of cuspidal representations `{ν^c ρ₀}` of a fixed `G_k`.
///
/// Lines are abstract: the library only records an identifier, the size `k`
/// and the identifier of the dual line. `dual(dual(L)) = L` always holds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspidalLine {
    id: String,
    size: u32,
    dual_id: String,
}

impl CuspidalLine {
    /// The line of unramified characters of `G₁`; self-dual.
    pub fn trivial() -> Self {
        CuspidalLine {
            id: TRIVIAL_LINE.to_string(),
            size: 1,
            dual_id: TRIVIAL_LINE.to_string(),
        }
    }

    pub fn self_dual(id: impl Into<String>, size: u32) -> Result<Self> {
        let id = id.into();
        Self::new(id.clone(), size, id)
    }

    pub fn new(id: impl Into<String>, size: u32, dual_id: impl Into<String>) -> Result<Self> {
        if size == 0 {
            return Err(Error::ZeroLineSize);
        }
        Ok(CuspidalLine {
            id: id.into(),
            size,
            dual_id: dual_id.into(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn dual_id(&self) -> &str {
        &self.dual_id
    }

    pub fn is_trivial(&self) -> bool {
        self.id == TRIVIAL_LINE && self.size == 1 && self.dual_id == TRIVIAL_LINE
    }

    pub fn is_self_dual(&self) -> bool {
        self.id == self.dual_id
    }

    pub fn dual(&self) -> Self {
        CuspidalLine {
            id: self.dual_id.clone(),
            size: self.size,
            dual_id: self.id.clone(),
        }
    }
}

/// The cuspidal representation `ν^exp ρ₀` with `ρ₀` the base point of `line`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cuspidal {
    line: CuspidalLine,
    exp: Rational,
}

impl Cuspidal {
    pub fn new(line: CuspidalLine, exp: Rational) -> Self {
        Cuspidal { line, exp }
    }

    /// `ν^exp` on the trivial line.
    pub fn nu(exp: Rational) -> Self {
        Cuspidal::new(CuspidalLine::trivial(), exp)
    }

    pub fn line(&self) -> &CuspidalLine {
        &self.line
    }

    pub fn exp(&self) -> Rational {
        self.exp
    }

    pub fn size(&self) -> u32 {
        self.line.size
    }

    /// `ν^shift` times this cuspidal.
    pub fn twist(&self, shift: Rational) -> Self {
        Cuspidal::new(self.line.clone(), self.exp + shift)
    }

    /// The contragredient `(ν^e ρ₀)^∨ = ν^{-e} ρ₀^∨`.
    pub fn dual(&self) -> Self {
        Cuspidal::new(self.line.dual(), -self.exp)
    }

    /// Integer `m` with `other = ν^m self`, if both lie on one cuspidal line.
    pub fn offset_to(&self, other: &Cuspidal) -> Option<i64> {
        if self.line != other.line {
            return None;
        }
        let d = other.exp - self.exp;
        d.is_integer().then(|| d.to_integer())
    }

    pub fn same_cuspidal_line(&self, other: &Cuspidal) -> bool {
        self.offset_to(other).is_some()
    }
}

impl fmt::Display for Cuspidal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu({})", self.exp)?;
        if !self.line.is_trivial() {
            write!(f, "*rho({},{}", self.line.id, self.line.size)?;
            if !self.line.is_self_dual() {
                write!(f, ",{}", self.line.dual_id)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CuspidalRepr {
    line: String,
    size: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual: Option<String>,
    exp: String,
}

impl Serialize for Cuspidal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CuspidalRepr {
            line: self.line.id.clone(),
            size: self.line.size,
            dual: (!self.line.is_self_dual()).then(|| self.line.dual_id.clone()),
            exp: self.exp.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cuspidal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CuspidalRepr::deserialize(deserializer)?;
        let exp = parse_rational(&repr.exp)
            .ok_or_else(|| D::Error::custom(format!("bad exponent {:?}", repr.exp)))?;
        let dual = repr.dual.unwrap_or_else(|| repr.line.clone());
        let line = CuspidalLine::new(repr.line, repr.size, dual).map_err(D::Error::custom)?;
        Ok(Cuspidal::new(line, exp))
    }
}

/// Which end of a segment an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The segment `[a, ν^{len-1} a]` with `a = base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    base: Cuspidal,
    len: u32,
}

impl Segment {
    pub fn new(base: Cuspidal, len: u32) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptySegment);
        }
        Ok(Segment { base, len })
    }

    /// `[start, end]`; the ends must be on one line with `end = ν^m start`, `m ≥ 0`.
    pub fn from_ends(start: Cuspidal, end: Cuspidal) -> Result<Self> {
        match start.offset_to(&end) {
            Some(m) if m >= 0 => Segment::new(start, (m + 1) as u32),
            _ => Err(Error::SegmentEnds(start.to_string(), end.to_string())),
        }
    }

    /// `[ν^a, ν^b]` on the trivial line.
    pub fn nu(a: Rational, b: Rational) -> Result<Self> {
        Segment::from_ends(Cuspidal::nu(a), Cuspidal::nu(b))
    }

    pub fn singleton(c: Cuspidal) -> Self {
        Segment { base: c, len: 1 }
    }

    /// `a(Δ)`.
    pub fn start(&self) -> &Cuspidal {
        &self.base
    }

    /// `b(Δ)`.
    pub fn end(&self) -> Cuspidal {
        self.base.twist(int(self.len as i64 - 1))
    }

    pub fn line(&self) -> &CuspidalLine {
        &self.base.line
    }

    pub fn rel_len(&self) -> u32 {
        self.len
    }

    pub fn abs_len(&self) -> u32 {
        self.len * self.base.size()
    }

    pub fn start_exp(&self) -> Rational {
        self.base.exp
    }

    pub fn end_exp(&self) -> Rational {
        self.base.exp + int(self.len as i64 - 1)
    }

    /// The cuspidals `a, νa, …, b` in increasing order.
    pub fn cuspidals(&self) -> impl Iterator<Item = Cuspidal> + '_ {
        (0..self.len).map(move |k| self.base.twist(int(k as i64)))
    }

    pub fn contains(&self, c: &Cuspidal) -> bool {
        matches!(self.base.offset_to(c), Some(m) if m >= 0 && m < self.len as i64)
    }

    /// Whether every cuspidal of `other` lies in `self`.
    pub fn contains_segment(&self, other: &Segment) -> bool {
        self.contains(other.start()) && self.contains(&other.end())
    }

    pub fn twist(&self, shift: Rational) -> Self {
        Segment {
            base: self.base.twist(shift),
            len: self.len,
        }
    }

    /// `Δ^∨ = [ν^{-b} ρ^∨, ν^{-a} ρ^∨]`.
    pub fn dual(&self) -> Self {
        Segment {
            base: self.end().dual(),
            len: self.len,
        }
    }

    /// Drops `k` cuspidals from one end. `Side::Right` gives `Δ^{(k)}`
    /// (drops at the `b`-end), `Side::Left` gives `^{(k)}Δ`. `Ok(None)` is the
    /// empty segment.
    pub fn truncate(&self, k: u32, side: Side) -> Result<Option<Segment>> {
        if k > self.len {
            return Err(Error::TruncationTooLong { k, len: self.len });
        }
        if k == self.len {
            return Ok(None);
        }
        let base = match side {
            Side::Right => self.base.clone(),
            Side::Left => self.base.twist(int(k as i64)),
        };
        Ok(Some(Segment {
            base,
            len: self.len - k,
        }))
    }

    /// Integer offsets `(a, b)` of the ends relative to `origin`, if on its line.
    fn offsets_from(&self, origin: &Cuspidal) -> Option<(i64, i64)> {
        let a = origin.offset_to(&self.base)?;
        Some((a, a + self.len as i64 - 1))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.base, self.end())
    }
}

// Order used by canonical forms: line, then `b` descending, then length descending.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.line()
            .cmp(other.line())
            .then_with(|| other.end_exp().cmp(&self.end_exp()))
            .then_with(|| other.len.cmp(&self.len))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Neither segment contains the other and their union is again a segment.
pub fn is_linked(d1: &Segment, d2: &Segment) -> bool {
    let Some((a1, b1)) = d1.offsets_from(d1.start()) else {
        return false;
    };
    let Some((a2, b2)) = d2.offsets_from(d1.start()) else {
        return false;
    };
    let nested = (a1 <= a2 && b2 <= b1) || (a2 <= a1 && b1 <= b2);
    let contiguous = a2 <= b1 + 1 && a1 <= b2 + 1;
    !nested && contiguous
}

/// `d1` and `d2` are linked and `b(d2) = ν^m b(d1)` with `m > 0`.
pub fn precedes(d1: &Segment, d2: &Segment) -> bool {
    is_linked(d1, d2) && matches!(d1.end().offset_to(&d2.end()), Some(m) if m > 0)
}

/// A multiset of segments held in a Zelevinsky-admissible order: for `i < j`,
/// `segments[i]` does not precede `segments[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct Multisegment {
    segments: Vec<Segment>,
}

impl Multisegment {
    /// Reorders into the canonical admissible order.
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        let m = Multisegment { segments };
        debug_assert!(m.is_admissible());
        m
    }

    /// Keeps the given order, rejecting it if it is not admissible.
    pub fn from_ordered(segments: Vec<Segment>) -> Result<Self> {
        let m = Multisegment { segments };
        if m.is_admissible() {
            Ok(m)
        } else {
            Err(Error::Precondition(
                "segment order is not Zelevinsky-admissible".into(),
            ))
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_size(&self) -> u32 {
        self.segments.iter().map(Segment::abs_len).sum()
    }

    pub fn is_admissible(&self) -> bool {
        let s = &self.segments;
        (0..s.len()).all(|i| (i + 1..s.len()).all(|j| !precedes(&s[i], &s[j])))
    }

    /// Every segment has relative length one (the Zelevinsky generic case).
    pub fn is_generic(&self) -> bool {
        self.segments.iter().all(|d| d.rel_len() == 1)
    }

    pub fn dual(&self) -> Self {
        Multisegment::new(self.segments.iter().map(Segment::dual).collect())
    }

    pub fn twist(&self, shift: Rational) -> Self {
        Multisegment::new(self.segments.iter().map(|d| d.twist(shift)).collect())
    }
}

/// The canonical admissible reordering of `segs`.
pub fn normalize_multisegment(segs: Vec<Segment>) -> Multisegment {
    Multisegment::new(segs)
}

impl TryFrom<Vec<Segment>> for Multisegment {
    type Error = Error;

    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        Multisegment::from_ordered(segments)
    }
}

impl From<Multisegment> for Vec<Segment> {
    fn from(m: Multisegment) -> Self {
        m.segments
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z(")?;
        for (i, d) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Exponent of the centre `(a + b) / 2` of a segment.
pub fn centre(d: &Segment) -> Rational {
    (d.start_exp() + d.end_exp()) * half()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn seg(a: i64, b: i64) -> Segment {
        Segment::nu(int(a), int(b)).unwrap()
    }

    #[test]
    fn linked_examples() {
        assert!(is_linked(&seg(0, 1), &seg(2, 3)));
        assert!(!is_linked(&seg(0, 1), &seg(0, 1)));
        assert!(!is_linked(&seg(0, 0), &seg(2, 2)));
        assert!(!is_linked(&seg(0, 3), &seg(1, 2)));
        assert!(is_linked(&seg(0, 2), &seg(1, 4)));
    }

    #[test]
    fn linked_requires_integer_offset_and_same_line() {
        let half_seg = Segment::nu(r(1, 2), r(3, 2)).unwrap();
        assert!(!is_linked(&seg(0, 0), &half_seg));
        let other = CuspidalLine::self_dual("A", 1).unwrap();
        let d = Segment::new(Cuspidal::new(other, int(1)), 1).unwrap();
        assert!(!is_linked(&seg(0, 0), &d));
    }

    #[test]
    fn precedes_examples() {
        assert!(precedes(&seg(0, 0), &seg(1, 1)));
        assert!(!precedes(&seg(1, 1), &seg(0, 0)));
        assert!(precedes(&seg(0, 1), &seg(1, 2)));
    }

    #[test]
    fn dual_examples() {
        let st2 = Segment::nu(r(-1, 2), r(1, 2)).unwrap();
        assert_eq!(st2.dual(), st2);
        assert_eq!(seg(0, 2).dual(), seg(-2, 0));
        let a = CuspidalLine::new("A", 2, "B").unwrap();
        let d = Segment::new(Cuspidal::new(a.clone(), r(1, 3)), 3).unwrap();
        assert_eq!(d.dual().line().id(), "B");
        assert_eq!(d.dual().dual(), d);
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(seg(0, 2).truncate(1, Side::Right).unwrap(), Some(seg(0, 1)));
        assert_eq!(seg(0, 2).truncate(2, Side::Left).unwrap(), Some(seg(2, 2)));
        assert_eq!(seg(0, 0).truncate(1, Side::Right).unwrap(), None);
        assert_eq!(
            seg(0, 0).truncate(2, Side::Left),
            Err(Error::TruncationTooLong { k: 2, len: 1 })
        );
    }

    #[test]
    fn normalize_examples() {
        let m = normalize_multisegment(vec![seg(0, 0), seg(1, 1)]);
        assert_eq!(m.segments(), &[seg(1, 1), seg(0, 0)]);
        let m = normalize_multisegment(vec![seg(5, 5), seg(0, 0)]);
        assert_eq!(m.segments(), &[seg(5, 5), seg(0, 0)]);
        let m = normalize_multisegment(vec![seg(-1, -1), seg(0, 1)]);
        assert_eq!(m.segments(), &[seg(0, 1), seg(-1, -1)]);
    }

    #[test]
    fn from_ordered_rejects_inadmissible() {
        assert!(Multisegment::from_ordered(vec![seg(0, 0), seg(1, 1)]).is_err());
        assert!(Multisegment::from_ordered(vec![seg(1, 1), seg(0, 0)]).is_ok());
    }

    #[test]
    fn lengths() {
        let a = CuspidalLine::self_dual("A", 3).unwrap();
        let d = Segment::new(Cuspidal::new(a, int(0)), 4).unwrap();
        assert_eq!(d.rel_len(), 4);
        assert_eq!(d.abs_len(), 12);
        assert_eq!(d.end().exp(), int(3));
    }

    #[test]
    fn from_ends_rejects_bad_spacing() {
        assert!(Segment::nu(int(0), r(1, 2)).is_err());
        assert!(Segment::nu(int(2), int(0)).is_err());
    }

    #[test]
    fn json_shape() {
        let d = Segment::nu(r(-1, 2), r(1, 2)).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"base":{"line":"1","size":1,"exp":"-1/2"},"len":2}"#);
        let back: Segment = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3/2"), Some(r(-3, 2)));
        assert_eq!(parse_rational("4"), Some(int(4)));
        assert_eq!(parse_rational("2/4"), Some(r(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
