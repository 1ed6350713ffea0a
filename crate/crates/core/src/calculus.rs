//! Segment-level Bernstein–Zelevinsky derivatives, the product rule,
//! cuspidal supports, restriction Hom bounds, Whittaker dimensions and
//! Jacquet modules of `Q(Δ)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{AnswerKind, MultiplicityAnswer};
use crate::segment::{half, int, Cuspidal, CuspidalLine, Multisegment, Rational, Segment, Side};
use crate::series::{check_sizes, Factor, GenericRep, PrincipalSeries};

/// Result of differentiating a single factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Derivative<T> {
    /// The derivative vanishes.
    Zero,
    /// The trivial representation of `G₀`.
    Empty,
    Nonzero(T),
}

impl<T> Derivative<T> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Derivative::Zero)
    }

    fn map<U>(self, f: impl FnOnce(T) -> U) -> Derivative<U> {
        match self {
            Derivative::Zero => Derivative::Zero,
            Derivative::Empty => Derivative::Empty,
            Derivative::Nonzero(t) => Derivative::Nonzero(f(t)),
        }
    }
}

fn from_truncation(t: Option<Segment>) -> Derivative<Segment> {
    match t {
        Some(d) => Derivative::Nonzero(d),
        None => Derivative::Empty,
    }
}

/// The `i`-th derivative of `Q(d)`. The right derivative truncates the left
/// end, the left derivative truncates the right end.
pub fn derivative_q(d: &Segment, i: u32, side: Side) -> Derivative<Segment> {
    let r = d.line().size();
    if !i.is_multiple_of(r) || i > d.abs_len() {
        return Derivative::Zero;
    }
    let trunc_side = match side {
        Side::Right => Side::Left,
        Side::Left => Side::Right,
    };
    from_truncation(d.truncate(i / r, trunc_side).expect("bounded by abs_len"))
}

/// The `i`-th derivative of `Z(d)`: nonzero only at `i = 0` and `i = r`, where
/// the right derivative drops `b(d)` and the left derivative drops `a(d)`.
pub fn derivative_z(d: &Segment, i: u32, side: Side) -> Derivative<Segment> {
    let r = d.line().size();
    if i == 0 {
        Derivative::Nonzero(d.clone())
    } else if i == r {
        from_truncation(d.truncate(1, side).expect("segments are nonempty"))
    } else {
        Derivative::Zero
    }
}

pub fn derivative_factor(f: &Factor, i: u32, side: Side) -> Derivative<Factor> {
    match f {
        Factor::Cuspidal(c) => {
            if i == 0 {
                Derivative::Nonzero(f.clone())
            } else if i == c.size() {
                Derivative::Empty
            } else {
                Derivative::Zero
            }
        }
        Factor::Q(d) => derivative_q(d, i, side).map(Factor::q),
        Factor::Z(d) => derivative_z(d, i, side).map(Factor::z),
    }
}

/// The levels at which a factor has a nonzero derivative, with the results.
pub fn derivative_levels(f: &Factor, side: Side) -> Vec<(u32, Option<Factor>)> {
    let r = match f {
        Factor::Cuspidal(c) => c.size(),
        Factor::Q(d) | Factor::Z(d) => d.line().size(),
    };
    (0..=f.size() / r)
        .map(|j| j * r)
        .filter_map(|i| match derivative_factor(f, i, side) {
            Derivative::Zero => None,
            Derivative::Empty => Some((i, None)),
            Derivative::Nonzero(g) => Some((i, Some(g))),
        })
        .collect()
}

/// A multiset of ordered products, each with a positive coefficient.
///
/// Identical ordered factor lists are merged; the empty list stands for the
/// trivial representation of `G₀`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<Vec<Factor>, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: u64,
    pub factors: Vec<Factor>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, factors: Vec<Factor>, coeff: u64) {
        if coeff > 0 {
            *self.terms.entry(factors).or_insert(0) += coeff;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Factor], u64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn coeff(&self, factors: &[Factor]) -> u64 {
        self.terms.get(factors).copied().unwrap_or(0)
    }

    pub fn twist(&self, shift: Rational) -> FormalSum {
        let mut out = FormalSum::new();
        for (k, v) in self.terms() {
            out.add(k.iter().map(|f| f.twist(shift)).collect(), v);
        }
        out
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.terms()
            .map(|(k, v)| Term {
                coeff: v,
                factors: k.to_vec(),
            })
            .collect()
    }
}

impl Serialize for FormalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut out = FormalSum::new();
        for t in Vec::<Term>::deserialize(d)? {
            out.add(t.factors, t.coeff);
        }
        Ok(out)
    }
}

/// Semisimplified `i`-th derivative of `f₁ × … × f_k`: one term per
/// composition `i₁ + … + i_k = i` with every `f_j^{(i_j)}` nonzero.
pub fn product_rule(factors: &[Factor], i: u32, side: Side) -> FormalSum {
    let levels: Vec<_> = factors.iter().map(|f| derivative_levels(f, side)).collect();
    let mut out = FormalSum::new();
    let mut current = Vec::new();
    expand(&levels, 0, i, &mut current, &mut out);
    out
}

fn expand(
    levels: &[Vec<(u32, Option<Factor>)>],
    j: usize,
    remaining: u32,
    current: &mut Vec<Factor>,
    out: &mut FormalSum,
) {
    if j == levels.len() {
        if remaining == 0 {
            out.add(current.clone(), 1);
        }
        return;
    }
    for (level, result) in &levels[j] {
        if *level > remaining {
            break;
        }
        if let Some(f) = result {
            current.push(f.clone());
        }
        expand(levels, j + 1, remaining - level, current, out);
        if result.is_some() {
            current.pop();
        }
    }
}

/// A multiset of cuspidal representations, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CuspidalSupport(Vec<Cuspidal>);

impl CuspidalSupport {
    pub fn new(mut cuspidals: Vec<Cuspidal>) -> Self {
        cuspidals.sort();
        CuspidalSupport(cuspidals)
    }

    pub fn as_slice(&self) -> &[Cuspidal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, c: &Cuspidal) -> usize {
        self.0.iter().filter(|x| *x == c).count()
    }

    pub fn contains(&self, c: &Cuspidal) -> bool {
        self.0.binary_search(c).is_ok()
    }

    /// Multiset union.
    pub fn union(&self, other: &CuspidalSupport) -> CuspidalSupport {
        CuspidalSupport::new(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn twist(&self, shift: Rational) -> CuspidalSupport {
        CuspidalSupport(self.0.iter().map(|c| c.twist(shift)).collect())
    }

    /// The `ℤ`-orbits `{ν^k c : k ∈ ℤ}` met by the support, each named by its
    /// line and the fractional part of the exponent.
    pub fn z_orbits(&self) -> BTreeSet<(CuspidalLine, Rational)> {
        self.0
            .iter()
            .map(|c| (c.line().clone(), c.exp() - c.exp().floor()))
            .collect()
    }
}

/// Objects with a cuspidal support.
pub trait Support {
    fn csupp(&self) -> CuspidalSupport;
}

impl Support for Segment {
    fn csupp(&self) -> CuspidalSupport {
        CuspidalSupport::new(self.cuspidals().collect())
    }
}

impl Support for Factor {
    fn csupp(&self) -> CuspidalSupport {
        CuspidalSupport::new(self.cuspidals())
    }
}

impl Support for [Factor] {
    fn csupp(&self) -> CuspidalSupport {
        CuspidalSupport::new(self.iter().flat_map(Factor::cuspidals).collect())
    }
}

impl Support for PrincipalSeries {
    fn csupp(&self) -> CuspidalSupport {
        self.factors().csupp()
    }
}

impl Support for Multisegment {
    fn csupp(&self) -> CuspidalSupport {
        CuspidalSupport::new(
            self.segments()
                .iter()
                .flat_map(Segment::cuspidals)
                .collect(),
        )
    }
}

impl Support for GenericRep {
    fn csupp(&self) -> CuspidalSupport {
        CuspidalSupport::new(
            self.segments()
                .iter()
                .flat_map(Segment::cuspidals)
                .collect(),
        )
    }
}

pub fn csupp<T: Support + ?Sized>(x: &T) -> CuspidalSupport {
    x.csupp()
}

/// The two restriction bounds and their minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BzBound {
    /// Right derivatives of the source against left derivatives of the target.
    pub part_a: u64,
    /// Left derivatives of the source against right derivatives of the target.
    pub part_b: u64,
}

impl BzBound {
    pub fn value(&self) -> u64 {
        self.part_a.min(self.part_b)
    }
}

fn matched_pairs(source: &FormalSum, target: &FormalSum) -> u64 {
    let target: Vec<_> = target.terms().map(|(t, c)| (t.csupp(), c)).collect();
    source
        .terms()
        .map(|(s, cs)| {
            let supp = s.csupp();
            target
                .iter()
                .filter(|(t, _)| *t == supp)
                .map(|(_, ct)| cs * ct)
                .sum::<u64>()
        })
        .sum()
}

/// Support-level bound on `dim Hom_{G_{n-1}}(ps, f₁ × … × f_r)`.
///
/// Part A sums, over `i = 1..n`, the pairs of terms of `ν^{1/2} ps^{(i)}` and
/// `^{(i-1)}target` with equal cuspidal support; part B does the same with
/// `ν^{-1/2} ^{(i)}ps` and `target^{(i-1)}`. Each matched pair counts as one.
pub fn bz_bound_detail(ps: &PrincipalSeries, target: &[Factor]) -> Result<BzBound> {
    let target_size: u32 = target.iter().map(Factor::size).sum();
    check_sizes(ps, target_size)?;
    let n = ps.total_size();
    let mut part_a = 0;
    let mut part_b = 0;
    for i in 1..=n {
        let src_r = product_rule(ps.factors(), i, Side::Right).twist(half());
        let tgt_l = product_rule(target, i - 1, Side::Left);
        part_a += matched_pairs(&src_r, &tgt_l);
        let src_l = product_rule(ps.factors(), i, Side::Left).twist(-half());
        let tgt_r = product_rule(target, i - 1, Side::Right);
        part_b += matched_pairs(&src_l, &tgt_r);
    }
    Ok(BzBound { part_a, part_b })
}

/// `min(A, B)` of [`bz_bound_detail`] for an irreducible factor target.
pub fn bz_hom_upper_bound(ps: &PrincipalSeries, target: &Factor) -> Result<u64> {
    Ok(bz_bound_detail(ps, std::slice::from_ref(target))?.value())
}

/// Dimension of the space of Whittaker functionals, multiplicative in products.
pub trait WhittakerDim {
    fn whittaker_dim(&self) -> u32;
}

impl WhittakerDim for Factor {
    fn whittaker_dim(&self) -> u32 {
        match self {
            Factor::Cuspidal(_) | Factor::Q(_) => 1,
            // Normalised Z factors have relative length at least two.
            Factor::Z(_) => 0,
        }
    }
}

impl WhittakerDim for PrincipalSeries {
    fn whittaker_dim(&self) -> u32 {
        self.factors().iter().map(Factor::whittaker_dim).product()
    }
}

impl WhittakerDim for Multisegment {
    fn whittaker_dim(&self) -> u32 {
        self.is_generic() as u32
    }
}

impl WhittakerDim for GenericRep {
    fn whittaker_dim(&self) -> u32 {
        1
    }
}

pub fn whittaker_dim<T: WhittakerDim + ?Sized>(x: &T) -> u32 {
    x.whittaker_dim()
}

/// Compares an exact Hom dimension with vanishing higher Ext against the
/// Euler–Poincaré pairing `dim Wh(ps) · dim Wh(pi)`. `None` when the answer
/// is not exact or Ext vanishing is not asserted.
pub fn euler_poincare_check(
    ps: &PrincipalSeries,
    pi: &GenericRep,
    answer: &MultiplicityAnswer,
) -> Option<bool> {
    match (answer.kind, answer.ext_vanishes) {
        (AnswerKind::Exact { value }, Some(true)) => {
            Some(u64::from(ps.whittaker_dim() * pi.whittaker_dim()) == value)
        }
        _ => None,
    }
}

/// Which parabolic the Jacquet module is taken along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JacquetSide {
    Standard,
    Opposite,
}

/// `Q(left) ⊗ Q(right)` on `G_{n-l} × G_l`; `None` is the trivial rep of `G₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacquetShadow {
    pub left: Option<Segment>,
    pub right: Option<Segment>,
}

/// Jacquet module of `Q(d)` along the `(n - l, l)` parabolic or its opposite.
/// `Ok(None)` when it vanishes, which happens unless the line size divides `l`.
pub fn jacquet_shadow(d: &Segment, l: u32, side: JacquetSide) -> Result<Option<JacquetShadow>> {
    let n = d.abs_len();
    if l > n {
        return Err(Error::JacquetLevel { l, len: n });
    }
    let m = d.line().size();
    if !l.is_multiple_of(m) {
        return Ok(None);
    }
    let p = l / m;
    let k = d.rel_len();
    let rho = d.start();
    let piece = |from: u32, count: u32| {
        (count > 0).then(|| Segment::new(rho.twist(int(from as i64)), count).expect("count > 0"))
    };
    Ok(Some(match side {
        JacquetSide::Standard => JacquetShadow {
            left: piece(p, k - p),
            right: piece(0, p),
        },
        JacquetSide::Opposite => JacquetShadow {
            left: piece(0, k - p),
            right: piece(k - p, p),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_segment, parse_series};

    fn seg(s: &str) -> Segment {
        parse_segment(s).unwrap()
    }

    fn nu(e: i64) -> Factor {
        Factor::Cuspidal(Cuspidal::nu(int(e)))
    }

    #[test]
    fn derivative_q_examples() {
        let d = seg("nu(-1)..nu(1)");
        assert_eq!(
            derivative_q(&d, 1, Side::Right),
            Derivative::Nonzero(seg("nu(0)..nu(1)"))
        );
        assert_eq!(
            derivative_q(&d, 1, Side::Left),
            Derivative::Nonzero(seg("nu(-1)..nu(0)"))
        );
        assert_eq!(
            derivative_q(&d, 0, Side::Right),
            Derivative::Nonzero(d.clone())
        );
        assert_eq!(derivative_q(&d, 3, Side::Right), Derivative::Empty);
        assert_eq!(derivative_q(&d, 4, Side::Right), Derivative::Zero);
        let d2 = seg("nu(0)*rho(s,2)..nu(1)*rho(s,2)");
        assert!(derivative_q(&d2, 1, Side::Right).is_zero());
        assert_eq!(
            derivative_q(&d2, 2, Side::Right),
            Derivative::Nonzero(seg("nu(1)*rho(s,2)..nu(1)*rho(s,2)"))
        );
    }

    #[test]
    fn derivative_z_examples() {
        let d = seg("nu(0)..nu(2)");
        assert_eq!(
            derivative_z(&d, 1, Side::Right),
            Derivative::Nonzero(seg("nu(0)..nu(1)"))
        );
        assert!(derivative_z(&d, 2, Side::Right).is_zero());
        assert_eq!(
            derivative_z(&d, 1, Side::Left),
            Derivative::Nonzero(seg("nu(1)..nu(2)"))
        );
        assert_eq!(
            derivative_z(&seg("nu(0)..nu(0)"), 1, Side::Left),
            Derivative::Empty
        );
    }

    #[test]
    fn product_rule_two_characters() {
        let fs = [nu(0), nu(1)];
        let d1 = product_rule(&fs, 1, Side::Right);
        assert_eq!(d1.len(), 2);
        assert_eq!(d1.coeff(&[nu(0)]), 1);
        assert_eq!(d1.coeff(&[nu(1)]), 1);
        let d2 = product_rule(&fs, 2, Side::Right);
        assert_eq!(
            d2.to_terms(),
            vec![Term {
                coeff: 1,
                factors: vec![]
            }]
        );
        assert!(product_rule(&fs, 3, Side::Right).is_empty());
    }

    #[test]
    fn product_rule_merges_identical_terms() {
        let fs = [nu(0), nu(0)];
        let d = product_rule(&fs, 1, Side::Left);
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeff(&[nu(0)]), 2);
    }

    #[test]
    fn formal_sum_json() {
        let d = product_rule(&[nu(0), nu(0)], 1, Side::Left);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(
            json,
            r#"[{"coeff":2,"factors":[{"cuspidal":{"line":"1","size":1,"exp":"0"}}]}]"#
        );
        assert_eq!(serde_json::from_str::<FormalSum>(&json).unwrap(), d);
    }

    #[test]
    fn csupp_examples() {
        let xi3 = parse_series("nu(-1) x nu(0) x nu(1)").unwrap();
        assert_eq!(
            csupp(&xi3).as_slice(),
            &[
                Cuspidal::nu(int(-1)),
                Cuspidal::nu(int(0)),
                Cuspidal::nu(int(1))
            ]
        );
        assert_eq!(csupp(&seg("nu(0)..nu(2)")).len(), 3);
        let a = parse_series("Q[nu(0)..nu(1)] x nu(1)").unwrap();
        let b = parse_series("nu(1) x Z[nu(0)..nu(1)]").unwrap();
        assert_eq!(csupp(&a), csupp(&b));
        assert_eq!(csupp(&a).count(&Cuspidal::nu(int(1))), 2);
    }

    #[test]
    fn z_orbits_group_by_integer_shift() {
        let ps = parse_series("nu(-1/2) x nu(3/2) x nu(0) x nu(0)*rho(s,2)").unwrap();
        assert_eq!(csupp(&ps).z_orbits().len(), 3);
    }

    #[test]
    fn bz_bound_two_characters_vs_trivial() {
        let ps = parse_series("nu(-1/2) x nu(1/2)").unwrap();
        let b = bz_bound_detail(&ps, &[nu(0)]).unwrap();
        assert!(b.value() >= 2);
    }

    #[test]
    fn bz_bound_missing_step_family() {
        // ν^{1/2}(νρ × ρ) × χ against Z([ρ, νρ]) with ρ of size two.
        let ps = parse_series("nu(3/2)*rho(s,2) x nu(1/2)*rho(s,2) x nu(1/3)").unwrap();
        let target = Factor::z(seg("nu(0)*rho(s,2)..nu(1)*rho(s,2)"));
        let b = bz_bound_detail(&ps, std::slice::from_ref(&target)).unwrap();
        assert_eq!(b.part_a, 1);
        assert_eq!(bz_hom_upper_bound(&ps, &target).unwrap(), 1);
    }

    #[test]
    fn bz_bound_disjoint_support() {
        let ps = parse_series("nu(20)*rho(s,2) x nu(21)*rho(s,2) x nu(1/3)").unwrap();
        let target = Factor::z(seg("nu(0)*rho(s,2)..nu(1)*rho(s,2)"));
        assert_eq!(bz_hom_upper_bound(&ps, &target).unwrap(), 0);
    }

    #[test]
    fn bz_bound_size_mismatch() {
        let ps = parse_series("nu(0)").unwrap();
        assert!(matches!(
            bz_hom_upper_bound(&ps, &nu(0)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn whittaker_examples() {
        assert_eq!(
            whittaker_dim(&parse_series("nu(0) x nu(1) x nu(2)").unwrap()),
            1
        );
        let triv = Multisegment::new(vec![seg("nu(-1/2)..nu(1/2)")]);
        assert_eq!(whittaker_dim(&triv), 0);
        assert_eq!(whittaker_dim(&GenericRep::steinberg(4).unwrap()), 1);
        assert_eq!(
            whittaker_dim(&parse_series("Q[nu(0)..nu(3)] x nu(9)").unwrap()),
            1
        );
        assert_eq!(
            whittaker_dim(&parse_series("Z[nu(0)..nu(1)] x nu(9)").unwrap()),
            0
        );
    }

    #[test]
    fn euler_poincare_examples() {
        let ps = parse_series("nu(1/2) x nu(-1/2)").unwrap();
        let pi = GenericRep::steinberg(1).unwrap();
        let ok = MultiplicityAnswer::exact(1, Some(true), "test");
        assert_eq!(euler_poincare_check(&ps, &pi, &ok), Some(true));
        let wrong = MultiplicityAnswer::exact(2, Some(true), "test");
        assert_eq!(euler_poincare_check(&ps, &pi, &wrong), Some(false));
        let unknown = MultiplicityAnswer::exact(2, None, "test");
        assert_eq!(euler_poincare_check(&ps, &pi, &unknown), None);
    }

    #[test]
    fn jacquet_examples() {
        let d = seg("nu(0)..nu(2)");
        let std = jacquet_shadow(&d, 1, JacquetSide::Standard)
            .unwrap()
            .unwrap();
        assert_eq!(std.left, Some(seg("nu(1)..nu(2)")));
        assert_eq!(std.right, Some(seg("nu(0)..nu(0)")));
        let opp = jacquet_shadow(&d, 1, JacquetSide::Opposite)
            .unwrap()
            .unwrap();
        assert_eq!(opp.left, Some(seg("nu(0)..nu(1)")));
        assert_eq!(opp.right, Some(seg("nu(2)..nu(2)")));
        let d2 = seg("nu(0)*rho(s,2)..nu(1)*rho(s,2)");
        assert_eq!(jacquet_shadow(&d2, 1, JacquetSide::Standard).unwrap(), None);
        assert!(jacquet_shadow(&d, 4, JacquetSide::Standard).is_err());
        let whole = jacquet_shadow(&d, 0, JacquetSide::Standard)
            .unwrap()
            .unwrap();
        assert_eq!((whole.left, whole.right), (Some(d.clone()), None));
    }
}
