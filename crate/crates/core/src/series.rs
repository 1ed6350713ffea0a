//! Ordered principal series, the badness and good-pair predicates, commutation
//! classes and the rearrangement moves that push a prescribed cuspidal away
//! from the ends of a series.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::{half, int, is_linked, Cuspidal, Rational, Segment};

/// One factor of a principal series.
///
/// `Q` and `Z` factors of relative length one are stored as `Cuspidal`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", from = "RawFactor")]
pub enum Factor {
    Cuspidal(Cuspidal),
    /// The essentially square-integrable `Q(Δ)`.
    Q(Segment),
    /// The Zelevinsky module `Z(Δ)`.
    Z(Segment),
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawFactor {
    Cuspidal(Cuspidal),
    Q(Segment),
    Z(Segment),
}

impl From<RawFactor> for Factor {
    fn from(raw: RawFactor) -> Self {
        match raw {
            RawFactor::Cuspidal(c) => Factor::Cuspidal(c),
            RawFactor::Q(d) => Factor::q(d),
            RawFactor::Z(d) => Factor::z(d),
        }
    }
}

impl Factor {
    pub fn q(d: Segment) -> Self {
        if d.rel_len() == 1 {
            Factor::Cuspidal(d.start().clone())
        } else {
            Factor::Q(d)
        }
    }

    pub fn z(d: Segment) -> Self {
        if d.rel_len() == 1 {
            Factor::Cuspidal(d.start().clone())
        } else {
            Factor::Z(d)
        }
    }

    /// The `n` with this factor a representation of `G_n`.
    pub fn size(&self) -> u32 {
        match self {
            Factor::Cuspidal(c) => c.size(),
            Factor::Q(d) | Factor::Z(d) => d.abs_len(),
        }
    }

    pub fn as_cuspidal(&self) -> Option<&Cuspidal> {
        match self {
            Factor::Cuspidal(c) => Some(c),
            _ => None,
        }
    }

    /// The underlying segment; a cuspidal is its own singleton segment.
    pub fn segment(&self) -> Segment {
        match self {
            Factor::Cuspidal(c) => Segment::singleton(c.clone()),
            Factor::Q(d) | Factor::Z(d) => d.clone(),
        }
    }

    pub fn cuspidals(&self) -> Vec<Cuspidal> {
        self.segment().cuspidals().collect()
    }

    pub fn dual(&self) -> Self {
        match self {
            Factor::Cuspidal(c) => Factor::Cuspidal(c.dual()),
            Factor::Q(d) => Factor::Q(d.dual()),
            Factor::Z(d) => Factor::Z(d.dual()),
        }
    }

    pub fn twist(&self, shift: Rational) -> Self {
        match self {
            Factor::Cuspidal(c) => Factor::Cuspidal(c.twist(shift)),
            Factor::Q(d) => Factor::Q(d.twist(shift)),
            Factor::Z(d) => Factor::Z(d.twist(shift)),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Cuspidal(c) => write!(f, "{c}"),
            Factor::Q(d) => write!(f, "Q[{d}]"),
            Factor::Z(d) => write!(f, "Z[{d}]"),
        }
    }
}

/// A parabolically induced product `π₁ × π₂ × … × π_r`; the order matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct PrincipalSeries {
    factors: Vec<Factor>,
}

impl PrincipalSeries {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(PrincipalSeries { factors })
    }

    pub fn from_cuspidals(cuspidals: impl IntoIterator<Item = Cuspidal>) -> Result<Self> {
        PrincipalSeries::new(cuspidals.into_iter().map(Factor::Cuspidal).collect())
    }

    /// Characters `ν^e` of the trivial line.
    pub fn characters(exps: impl IntoIterator<Item = Rational>) -> Result<Self> {
        PrincipalSeries::from_cuspidals(exps.into_iter().map(Cuspidal::nu))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_size(&self) -> u32 {
        self.factors.iter().map(Factor::size).sum()
    }

    pub fn is_cuspidal_induced(&self) -> bool {
        self.factors.iter().all(|f| f.as_cuspidal().is_some())
    }

    /// The cuspidal factors, or an error naming the first non-cuspidal one.
    pub fn cuspidals(&self) -> Result<Vec<Cuspidal>> {
        self.factors
            .iter()
            .map(|f| {
                f.as_cuspidal()
                    .cloned()
                    .ok_or_else(|| Error::NotCuspidalInduced(f.to_string()))
            })
            .collect()
    }

    pub fn twist(&self, shift: Rational) -> Self {
        PrincipalSeries {
            factors: self.factors.iter().map(|f| f.twist(shift)).collect(),
        }
    }

    /// Reorders the factors: `result[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PrincipalSeries {
            factors: perm.iter().map(|&i| self.factors[i].clone()).collect(),
        }
    }
}

impl TryFrom<Vec<Factor>> for PrincipalSeries {
    type Error = Error;

    fn try_from(factors: Vec<Factor>) -> Result<Self> {
        PrincipalSeries::new(factors)
    }
}

impl From<PrincipalSeries> for Vec<Factor> {
    fn from(ps: PrincipalSeries) -> Self {
        ps.factors
    }
}

impl fmt::Display for PrincipalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// An irreducible generic `Q(Δ₁) × … × Q(Δ_r)` with pairwise unlinked segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct GenericRep {
    segments: Vec<Segment>,
}

impl GenericRep {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Precondition(
                "a generic representation needs at least one segment".into(),
            ));
        }
        for (i, a) in segments.iter().enumerate() {
            for b in &segments[i + 1..] {
                if is_linked(a, b) {
                    return Err(Error::LinkedSegments(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(GenericRep { segments })
    }

    pub fn single(d: Segment) -> Self {
        GenericRep { segments: vec![d] }
    }

    /// `St_n`: `Q` of the centred length-`n` segment on the trivial line.
    pub fn steinberg(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("Steinberg needs n >= 1".into()));
        }
        let a = -Rational::new(n as i64 - 1, 2);
        Ok(GenericRep::single(Segment::new(Cuspidal::nu(a), n)?))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn size(&self) -> u32 {
        self.segments.iter().map(Segment::abs_len).sum()
    }

    pub fn as_single(&self) -> Option<&Segment> {
        match self.segments.as_slice() {
            [d] => Some(d),
            _ => None,
        }
    }

    pub fn factors(&self) -> Vec<Factor> {
        self.segments.iter().cloned().map(Factor::q).collect()
    }

    pub fn dual(&self) -> Self {
        GenericRep {
            segments: self.segments.iter().map(Segment::dual).collect(),
        }
    }

    pub fn twist(&self, shift: Rational) -> Self {
        GenericRep {
            segments: self.segments.iter().map(|d| d.twist(shift)).collect(),
        }
    }
}

impl TryFrom<Vec<Segment>> for GenericRep {
    type Error = Error;

    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        GenericRep::new(segments)
    }
}

impl From<GenericRep> for Vec<Segment> {
    fn from(g: GenericRep) -> Self {
        g.segments
    }
}

impl fmt::Display for GenericRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(")?;
        for (i, d) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// The cuspidals `ν^{t-1/2} a(Δ)` for `t = 0, …, l_r(Δ)` whose appearance, in
/// order, makes a series bad to `Δ`.
pub fn bad_pattern(d: &Segment) -> Vec<Cuspidal> {
    (0..=d.rel_len() as i64)
        .map(|t| d.start().twist(int(t) - half()))
        .collect()
}

/// Positions of a subsequence witnessing that `ps` is bad to `d`, found by a
/// greedy left-to-right scan.
pub fn bad_subsequence(ps: &PrincipalSeries, d: &Segment) -> Result<Option<Vec<usize>>> {
    let cuspidals = ps.cuspidals()?;
    let pattern = bad_pattern(d);
    let mut hits = Vec::with_capacity(pattern.len());
    for (pos, c) in cuspidals.iter().enumerate() {
        if hits.len() < pattern.len() && *c == pattern[hits.len()] {
            hits.push(pos);
        }
    }
    Ok((hits.len() == pattern.len()).then_some(hits))
}

pub fn is_bad_to(ps: &PrincipalSeries, d: &Segment) -> Result<bool> {
    Ok(bad_subsequence(ps, d)?.is_some())
}

/// Greedy badness test on a bare word of cuspidals against a precomputed
/// [`bad_pattern`], without allocating.
pub fn word_contains_pattern(word: &[Cuspidal], pattern: &[Cuspidal]) -> bool {
    let mut k = 0;
    for c in word {
        if k < pattern.len() && *c == pattern[k] {
            k += 1;
        }
    }
    k == pattern.len()
}

/// Outcome of the good-pair test: both conditions must hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodPairVerdict {
    /// No two segment starts of the generic representation share a cuspidal line.
    pub cond_a: bool,
    /// The series is good to every segment.
    pub cond_b: bool,
}

impl GoodPairVerdict {
    pub fn is_good(&self) -> bool {
        self.cond_a && self.cond_b
    }
}

pub fn check_sizes(ps: &PrincipalSeries, pi_size: u32) -> Result<()> {
    if ps.total_size() != pi_size + 1 {
        return Err(Error::SizeMismatch {
            expected: pi_size + 1,
            found: ps.total_size(),
        });
    }
    Ok(())
}

pub fn is_good_pair(ps: &PrincipalSeries, pi: &GenericRep) -> Result<GoodPairVerdict> {
    if !ps.is_cuspidal_induced() {
        ps.cuspidals()?;
    }
    check_sizes(ps, pi.size())?;
    let segs = pi.segments();
    let cond_a = segs.iter().enumerate().all(|(i, a)| {
        segs[i + 1..]
            .iter()
            .all(|b| !a.start().same_cuspidal_line(b.start()))
    });
    let mut cond_b = true;
    for d in segs {
        if is_bad_to(ps, d)? {
            cond_b = false;
            break;
        }
    }
    Ok(GoodPairVerdict { cond_a, cond_b })
}

/// Two cuspidals are linked when they are adjacent on one line.
pub fn cuspidals_linked(x: &Cuspidal, y: &Cuspidal) -> bool {
    matches!(x.offset_to(y), Some(1) | Some(-1))
}

/// Whether `ps2` is reachable from `ps1` by swapping adjacent unlinked
/// cuspidal factors.
///
/// Decided by the projection criterion: the words agree after erasing
/// everything but `x` and `y`, for every linked pair `{x, y}`.
pub fn commutation_equivalent(ps1: &PrincipalSeries, ps2: &PrincipalSeries) -> Result<bool> {
    let w1 = ps1.cuspidals()?;
    let w2 = ps2.cuspidals()?;
    let mut s1 = w1.clone();
    let mut s2 = w2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Err(Error::DifferentMultisets);
    }
    s1.dedup();
    for (i, x) in s1.iter().enumerate() {
        for y in &s1[i + 1..] {
            if !cuspidals_linked(x, y) {
                continue;
            }
            let keep = |c: &&Cuspidal| *c == x || *c == y;
            if !w1.iter().filter(keep).eq(w2.iter().filter(keep)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Gelfand–Kazhdan involution on a product: reverse the factors and dualise each.
pub fn theta(ps: &PrincipalSeries) -> PrincipalSeries {
    PrincipalSeries {
        factors: ps.factors.iter().rev().map(Factor::dual).collect(),
    }
}

/// Which end of the rearranged series avoids its forbidden cuspidal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndCondition {
    /// The first factor differs from `ν^{-1/2} a(Δ)`.
    A,
    /// The last factor differs from `ν^{1/2} b(Δ)`.
    B,
}

/// The branch of the rearrangement procedure that produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RearrangementCase {
    /// The input already satisfies one of the end conditions.
    Identity,
    /// Some cuspidal strictly inside the pattern is missing; the pattern
    /// splits into two mutually unlinked halves.
    MissingStep,
    /// First occurrences are out of order below the top step; move that
    /// occurrence to the front.
    OutOfOrderFront,
    /// First occurrences are out of order at the top step; move the last
    /// low cuspidal to the back.
    OutOfOrderBack,
    /// The prescribed move was blocked by a linked neighbour; a free minimal
    /// or maximal factor was used instead.
    FreeEnd,
}

/// Witness that a series is commutation-equivalent to one satisfying an end
/// condition. `permutation[i]` is the input position of output factor `i`;
/// `swaps` lists adjacent transpositions `(p, p + 1)` by `p`, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RearrangementCertificate {
    pub permutation: Vec<usize>,
    pub swaps: Vec<usize>,
    pub satisfied: EndCondition,
    pub case: RearrangementCase,
}

impl RearrangementCertificate {
    pub fn apply(&self, ps: &PrincipalSeries) -> PrincipalSeries {
        ps.permuted(&self.permutation)
    }

    /// Replays the swap list on `ps`.
    pub fn replay(&self, ps: &PrincipalSeries) -> PrincipalSeries {
        let mut factors = ps.factors.clone();
        for &p in &self.swaps {
            factors.swap(p, p + 1);
        }
        PrincipalSeries { factors }
    }
}

/// Which variant to use when the pattern has a missing interior step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MissingStepVariant {
    /// Move the last low cuspidal to the back.
    #[default]
    Back,
    /// Move the first high cuspidal to the front.
    Front,
}

struct Arrangement<'a> {
    input: &'a [Cuspidal],
    order: Vec<usize>,
    swaps: Vec<usize>,
}

impl<'a> Arrangement<'a> {
    fn at(&self, pos: usize) -> &Cuspidal {
        &self.input[self.order[pos]]
    }

    fn can_move_front(&self, pos: usize) -> bool {
        (0..pos).all(|p| !cuspidals_linked(self.at(p), self.at(pos)))
    }

    fn can_move_back(&self, pos: usize) -> bool {
        (pos + 1..self.order.len()).all(|p| !cuspidals_linked(self.at(p), self.at(pos)))
    }

    fn move_front(&mut self, pos: usize) {
        for p in (0..pos).rev() {
            self.order.swap(p, p + 1);
            self.swaps.push(p);
        }
    }

    fn move_back(&mut self, pos: usize) {
        for p in pos..self.order.len() - 1 {
            self.order.swap(p, p + 1);
            self.swaps.push(p);
        }
    }
}

/// Finds a commutation-equivalent reordering of `ps` whose first factor is not
/// `ν^{-1/2} a(d)` or whose last factor is not `ν^{1/2} b(d)`.
///
/// Requires at least two factors, all on the cuspidal line of
/// `ν^{-1/2} a(d)`, and `ps` good to `d`.
pub fn rearrange_good(
    ps: &PrincipalSeries,
    d: &Segment,
    variant: MissingStepVariant,
) -> Result<RearrangementCertificate> {
    let input = ps.cuspidals()?;
    let n = input.len();
    if n < 2 {
        return Err(Error::Precondition(
            "rearrangement needs at least two factors".into(),
        ));
    }
    let pattern = bad_pattern(d);
    let low = &pattern[0];
    for c in &input {
        if !low.same_cuspidal_line(c) {
            return Err(Error::MixedLines(c.to_string(), low.to_string()));
        }
    }
    if is_bad_to(ps, d)? {
        return Err(Error::BadToSegment(d.to_string()));
    }

    let top = pattern.len() - 1; // c + 1
    let mut arr = Arrangement {
        input: &input,
        order: (0..n).collect(),
        swaps: Vec::new(),
    };
    let finish = |arr: Arrangement, satisfied, case| RearrangementCertificate {
        permutation: arr.order,
        swaps: arr.swaps,
        satisfied,
        case,
    };

    if arr.at(0) != low {
        return Ok(finish(arr, EndCondition::A, RearrangementCase::Identity));
    }
    if arr.at(n - 1) != &pattern[top] {
        return Ok(finish(arr, EndCondition::B, RearrangementCase::Identity));
    }
    // Both ends are pattern letters; with c = 0 that alone would be bad.
    debug_assert!(top >= 2);

    // Step index j with c = ν^{j - 1/2} a(d).
    let step = |c: &Cuspidal| low.offset_to(c).expect("same line checked above");
    let steps: Vec<i64> = input.iter().map(step).collect();
    let step_at = |arr: &Arrangement, pos: usize| steps[arr.order[pos]];

    if let Some(missing) = (1..top as i64).find(|j| !steps.contains(j)) {
        match variant {
            MissingStepVariant::Back => {
                let pos = (0..n).rev().find(|&p| step_at(&arr, p) < missing).unwrap();
                debug_assert!(arr.can_move_back(pos));
                arr.move_back(pos);
                return Ok(finish(arr, EndCondition::B, RearrangementCase::MissingStep));
            }
            MissingStepVariant::Front => {
                let pos = (0..n).find(|&p| step_at(&arr, p) > missing).unwrap();
                debug_assert!(arr.can_move_front(pos));
                arr.move_front(pos);
                return Ok(finish(arr, EndCondition::A, RearrangementCase::MissingStep));
            }
        }
    }

    // Every pattern letter occurs. first[j] is the first position of step j.
    let c = top as i64 - 1;
    let first: Vec<usize> = (0..=top as i64)
        .map(|j| (0..n).find(|&p| step_at(&arr, p) == j).unwrap())
        .collect();
    let s = (1..c as usize)
        .find(|&j| first[j] > first[j + 1])
        .ok_or_else(|| Error::BadToSegment(d.to_string()))?;

    if s + 1 != c as usize {
        let pos = first[s + 1];
        if arr.can_move_front(pos) {
            arr.move_front(pos);
            return Ok(finish(
                arr,
                EndCondition::A,
                RearrangementCase::OutOfOrderFront,
            ));
        }
    } else {
        let pos = (first[s + 1]..n)
            .rev()
            .find(|&p| step_at(&arr, p) < c)
            .unwrap();
        if arr.can_move_back(pos) {
            arr.move_back(pos);
            return Ok(finish(
                arr,
                EndCondition::B,
                RearrangementCase::OutOfOrderBack,
            ));
        }
    }

    if let Some(pos) = (1..n).find(|&p| arr.at(p) != low && arr.can_move_front(p)) {
        arr.move_front(pos);
        return Ok(finish(arr, EndCondition::A, RearrangementCase::FreeEnd));
    }
    if let Some(pos) = (0..n - 1).find(|&p| arr.at(p) != &pattern[top] && arr.can_move_back(p)) {
        arr.move_back(pos);
        return Ok(finish(arr, EndCondition::B, RearrangementCase::FreeEnd));
    }
    Err(Error::Precondition(format!(
        "no commutation-equivalent reordering of {ps} frees an end for {d}"
    )))
}
