//! Multiplicities `dim Hom_{G_{n-1}}(Π, π)` for principal series `Π` of `G_n`
//! and generic or `Z(Δ)` targets, the list of non-generic subquotients with a
//! Steinberg quotient, and the non-generic quotient test.

use serde::{Deserialize, Serialize};

use crate::calculus::{bz_bound_detail, WhittakerDim};
use crate::error::{Error, Result};
use crate::segment::{
    centre, int, rational_str, Cuspidal, CuspidalLine, Multisegment, Rational, Segment,
};
use crate::series::{check_sizes, is_good_pair, theta, Factor, GenericRep, PrincipalSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnswerKind {
    Exact { value: u64 },
    Bounds { lower: u64, upper: u64 },
    NotCovered,
}

/// Which result produced an answer, and the steps taken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tag: String,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityAnswer {
    #[serde(flatten)]
    pub kind: AnswerKind,
    /// `Some(true)` when all higher Ext groups vanish; `None` when unknown.
    pub ext_vanishes: Option<bool>,
    pub provenance: Provenance,
}

impl MultiplicityAnswer {
    pub fn exact(value: u64, ext_vanishes: Option<bool>, tag: &str) -> Self {
        MultiplicityAnswer {
            kind: AnswerKind::Exact { value },
            ext_vanishes,
            provenance: Provenance {
                tag: tag.into(),
                trace: Vec::new(),
            },
        }
    }

    pub fn bounds(lower: u64, upper: u64, tag: &str) -> Self {
        debug_assert!(lower <= upper);
        MultiplicityAnswer {
            kind: AnswerKind::Bounds { lower, upper },
            ext_vanishes: None,
            provenance: Provenance {
                tag: tag.into(),
                trace: Vec::new(),
            },
        }
    }

    fn with_trace(mut self, trace: Vec<String>) -> Self {
        self.provenance.trace = trace;
        self
    }

    pub fn value(&self) -> Option<u64> {
        match self.kind {
            AnswerKind::Exact { value } => Some(value),
            _ => None,
        }
    }

    pub fn lower(&self) -> Option<u64> {
        match self.kind {
            AnswerKind::Exact { value } => Some(value),
            AnswerKind::Bounds { lower, .. } => Some(lower),
            AnswerKind::NotCovered => None,
        }
    }

    pub fn upper(&self) -> Option<u64> {
        match self.kind {
            AnswerKind::Exact { value } => Some(value),
            AnswerKind::Bounds { upper, .. } => Some(upper),
            AnswerKind::NotCovered => None,
        }
    }

    pub fn tag(&self) -> &str {
        &self.provenance.tag
    }
}

/// `ν^{e₁} × … × ν^{e_n}` on `line` with `e_j = -(n-1)/2 + (j-1)`.
fn ascending_on(line: &CuspidalLine, n: u32) -> PrincipalSeries {
    let start = -Rational::new(n as i64 - 1, 2);
    PrincipalSeries::from_cuspidals(
        (0..n as i64).map(|j| Cuspidal::new(line.clone(), start + int(j))),
    )
    .expect("n >= 1")
}

/// The ascending character series `ν^{-(n-1)/2} × ν^{-(n-3)/2} × … × ν^{(n-1)/2}`.
pub fn xi(n: u32) -> Result<PrincipalSeries> {
    if n < 2 {
        return Err(Error::Precondition("xi(n) needs n >= 2".into()));
    }
    Ok(ascending_on(&CuspidalLine::trivial(), n))
}

/// `Q([ν^{-(n-1)/2}, ν^{-(n-1-2i)/2}]) × ν^{-(n-3-2i)/2} × … × ν^{(n-1)/2}` on `line`.
fn intermediate_family(line: &CuspidalLine, n: u32, i: u32) -> PrincipalSeries {
    let low = -Rational::new(n as i64 - 1, 2);
    let seg = Segment::new(Cuspidal::new(line.clone(), low), i + 1).expect("i + 1 >= 1");
    let mut factors = vec![Factor::q(seg)];
    factors.extend(
        (i as i64 + 1..n as i64)
            .map(|j| Factor::Cuspidal(Cuspidal::new(line.clone(), low + int(j)))),
    );
    PrincipalSeries::new(factors).expect("nonempty")
}

/// Shifts both sides by `-centre(Δ)` when `pi = Q(Δ)` with `Δ` on a line of
/// size one, so that `Δ` becomes centred at zero. Otherwise the shift is zero.
pub fn normalize_common_twist(
    ps: &PrincipalSeries,
    pi: &GenericRep,
) -> (PrincipalSeries, GenericRep, Rational) {
    let shift = match pi.as_single() {
        Some(d) if d.line().size() == 1 => -centre(d),
        _ => int(0),
    };
    (ps.twist(shift), pi.twist(shift), shift)
}

/// `dim Hom_{G_{n-1}}(ps, pi)` for `ps` of `G_n` and a generic irreducible `pi`
/// of `G_{n-1}`, exact where a theorem applies and bounded otherwise.
pub fn multiplicity(ps: &PrincipalSeries, pi: &GenericRep) -> Result<MultiplicityAnswer> {
    check_sizes(ps, pi.size())?;
    let (ps, pi, shift) = normalize_common_twist(ps, pi);
    let mut trace = Vec::new();
    if shift != int(0) {
        trace.push(format!("twisted both sides by nu({shift})"));
    }
    let n = ps.total_size();
    let cusp = ps.is_cuspidal_induced();

    if let Some(d) = pi.as_single() {
        let line = d.line();
        if line.size() == 1 {
            trace.push(format!(
                "target is the Steinberg representation of G_{}",
                n - 1
            ));
            if cusp {
                // Every adjacent pair of the ascending series is linked, so its
                // commutation class is just itself; compare literally.
                if ps == ascending_on(line, n) {
                    trace.push("series is the ascending product".into());
                    return Ok(
                        MultiplicityAnswer::exact(n as u64, None, "steinberg-ascending")
                            .with_trace(trace),
                    );
                }
                trace.push("series is not the ascending product".into());
                return Ok(
                    MultiplicityAnswer::exact(1, Some(true), "steinberg-reordered")
                        .with_trace(trace),
                );
            }
            for i in 1..n.saturating_sub(1) {
                if ps == intermediate_family(line, n, i) {
                    trace.push(format!("series is the intermediate family member i = {i}"));
                    return Ok(MultiplicityAnswer::exact(
                        (n - i) as u64,
                        None,
                        "intermediate-family",
                    )
                    .with_trace(trace));
                }
                if ps == theta(&intermediate_family(&line.dual(), n, i)) {
                    trace.push(format!(
                        "series is the involution image of the intermediate family member i = {i}"
                    ));
                    return Ok(MultiplicityAnswer::exact(
                        (n - i) as u64,
                        None,
                        "intermediate-family-theta",
                    )
                    .with_trace(trace));
                }
            }
        } else if cusp {
            trace.push(format!(
                "target is a generalized Steinberg on a line of size {}",
                line.size()
            ));
            return Ok(
                MultiplicityAnswer::exact(1, Some(true), "generalized-steinberg").with_trace(trace),
            );
        }
    }

    if cusp {
        let verdict = is_good_pair(&ps, &pi)?;
        if verdict.is_good() {
            trace.push("pair is good".into());
            return Ok(MultiplicityAnswer::exact(1, Some(true), "good-pair").with_trace(trace));
        }
        if !verdict.cond_a {
            trace.push("two segments of the target start on one cuspidal line".into());
        }
        if !verdict.cond_b {
            trace.push("series is bad to a segment of the target".into());
        }
    } else {
        trace.push("series is not induced from cuspidals".into());
    }

    let bz = bz_bound_detail(&ps, &pi.factors())?;
    let lower = u64::from(ps.whittaker_dim() * pi.whittaker_dim() == 1);
    trace.push(format!(
        "no exact result applies; restriction bounds A = {}, B = {}",
        bz.part_a, bz.part_b
    ));
    if lower == 1 {
        trace.push("lower bound 1 from the Euler-Poincare pairing of two generic sides".into());
    }
    Ok(MultiplicityAnswer::bounds(lower, bz.value(), "bz-bounds").with_trace(trace))
}

/// `dim Hom_{G_{n-1}}(ps, Z(d))` for `d` on a line of size at least two.
pub fn multiplicity_z(ps: &PrincipalSeries, d: &Segment) -> Result<MultiplicityAnswer> {
    let k = d.line().size();
    if k < 2 {
        return Err(Error::Precondition(
            "Z targets are supported only on lines of size at least 2".into(),
        ));
    }
    check_sizes(ps, d.abs_len())?;
    if d.rel_len() == 1 && ps.is_cuspidal_induced() {
        return Ok(
            MultiplicityAnswer::exact(1, Some(true), "generalized-steinberg")
                .with_trace(vec!["Z of a single cuspidal is that cuspidal".into()]),
        );
    }
    Ok(
        MultiplicityAnswer::bounds(0, 1, "z-target-bound").with_trace(vec![format!(
            "Z target on a line of size {k}: multiplicity at most one"
        )]),
    )
}

/// Parameters `(a, b, c)` with `π_i ↪ ν^a St_{i-1} × ν^b 1₂ × ν^c St_{n-i-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientDescriptor {
    pub index: u32,
    pub multisegment: Multisegment,
    pub embedding_params: Option<EmbeddingParams>,
    /// The two twisted Steinberg summands of the Langlands parameter.
    pub langlands_note: Option<(String, String)>,
}

fn twisted_st(e: Rational, k: u32) -> String {
    format!("nu({e}) St_{k}")
}

fn subquotients_on(line: &CuspidalLine, n: u32) -> Vec<SubquotientDescriptor> {
    let n_i = n as i64;
    let pt = |num: i64| Cuspidal::new(line.clone(), Rational::new(num, 2));
    let single = |num: i64| Segment::singleton(pt(num));
    let mut out = vec![SubquotientDescriptor {
        index: 0,
        multisegment: Multisegment::new((1..=n_i).map(|j| single(n_i - 2 * j + 1)).collect()),
        embedding_params: None,
        langlands_note: None,
    }];
    for i in 1..n_i {
        let segs = (1..n_i)
            .map(|j| {
                if j < i {
                    single(n_i - 2 * j + 1)
                } else if j == i {
                    Segment::from_ends(pt(n_i - 2 * j - 1), pt(n_i - 2 * j + 1)).expect("adjacent")
                } else {
                    single(n_i - 2 * j - 1)
                }
            })
            .collect();
        out.push(SubquotientDescriptor {
            index: i as u32,
            multisegment: Multisegment::new(segs),
            embedding_params: Some(EmbeddingParams {
                a: Rational::new(n_i - i + 1, 2),
                b: Rational::new(n_i - 2 * i, 2),
                c: Rational::new(-(i + 1), 2),
            }),
            langlands_note: Some((
                twisted_st(Rational::new(-i, 2), (n_i - i) as u32),
                twisted_st(Rational::new(n_i - i, 2), i as u32),
            )),
        });
    }
    out
}

/// The `n` irreducible subquotients of `xi(n)` with a Steinberg quotient on
/// restriction: `St_n` first, then `π₁, …, π_{n-1}`.
pub fn steinberg_subquotients(n: u32) -> Result<Vec<SubquotientDescriptor>> {
    if n < 2 {
        return Err(Error::Precondition(
            "steinberg_subquotients needs n >= 2".into(),
        ));
    }
    Ok(subquotients_on(&CuspidalLine::trivial(), n))
}

/// Whether the non-generic irreducible `Z(tau)` has `Q(d)` as a quotient on
/// restriction to `G_{n-1}`.
pub fn nongeneric_quotient_test(tau: &Multisegment, d: &Segment) -> Result<bool> {
    if tau.is_generic() {
        return Err(Error::GenericMultisegment);
    }
    let n = tau.total_size();
    if n != d.abs_len() + 1 {
        return Err(Error::SizeMismatch {
            expected: d.abs_len() + 1,
            found: n,
        });
    }
    let line = d.line();
    if line.size() >= 2 {
        return Ok(false);
    }
    let shift = -centre(d);
    let tau = tau.twist(shift);
    Ok(subquotients_on(line, n)
        .iter()
        .skip(1)
        .any(|s| s.multisegment == tau))
}

/// Necessary shape for a non-generic `Z(tau)` to map onto a generic target:
/// every segment has relative length at most two, and at most one has two.
pub fn generic_length2_screen(tau: &Multisegment) -> bool {
    let lens: Vec<u32> = tau.segments().iter().map(Segment::rel_len).collect();
    lens.iter().all(|&l| l <= 2) && lens.iter().filter(|&&l| l == 2).count() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::euler_poincare_check;
    use crate::expr::{parse_generic, parse_multisegment, parse_segment, parse_series};

    fn ps(s: &str) -> PrincipalSeries {
        parse_series(s).unwrap()
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(2).unwrap(), ps("nu(-1/2) x nu(1/2)"));
        assert_eq!(xi(3).unwrap(), ps("nu(-1) x nu(0) x nu(1)"));
        assert!(xi(1).is_err());
    }

    #[test]
    fn common_twist() {
        let pi = parse_generic("Q[nu(1/2)..nu(1/2)]").unwrap();
        let (p, q, s) = normalize_common_twist(&ps("nu(0) x nu(1)"), &pi);
        assert_eq!(s, Rational::new(-1, 2));
        assert_eq!(p, ps("nu(-1/2) x nu(1/2)"));
        assert_eq!(q, GenericRep::steinberg(1).unwrap());
        let (p2, q2, s2) = normalize_common_twist(&p, &q);
        assert_eq!((p2, q2, s2), (p, q, int(0)));
    }

    #[test]
    fn steinberg_examples() {
        let st1 = GenericRep::steinberg(1).unwrap();
        let a = multiplicity(&xi(2).unwrap(), &st1).unwrap();
        assert_eq!(a.kind, AnswerKind::Exact { value: 2 });
        assert_eq!(a.ext_vanishes, None);
        let b = multiplicity(&ps("nu(1/2) x nu(-1/2)"), &st1).unwrap();
        assert_eq!(b.kind, AnswerKind::Exact { value: 1 });
        assert_eq!(b.ext_vanishes, Some(true));
        let twisted = multiplicity(
            &ps("nu(0) x nu(1)"),
            &parse_generic("Q[nu(1/2)..nu(1/2)]").unwrap(),
        )
        .unwrap();
        assert_eq!(twisted.value(), Some(2));
    }

    #[test]
    fn intermediate_family_examples() {
        let st3 = GenericRep::steinberg(3).unwrap();
        let p1 = ps("Q[nu(-3/2)..nu(-1/2)] x nu(1/2) x nu(3/2)");
        let a = multiplicity(&p1, &st3).unwrap();
        assert_eq!(a.value(), Some(3));
        assert_eq!(a.tag(), "intermediate-family");
        let b = multiplicity(&theta(&p1), &st3).unwrap();
        assert_eq!(b.value(), Some(3));
        assert_eq!(b.tag(), "intermediate-family-theta");
        let permuted = ps("nu(1/2) x Q[nu(-3/2)..nu(-1/2)] x nu(3/2)");
        assert!(multiplicity(&permuted, &st3).unwrap().value().is_none());
    }

    #[test]
    fn generalized_steinberg_example() {
        let pi = parse_generic("Q[nu(0)*rho(s,2)..nu(0)*rho(s,2)]").unwrap();
        let a = multiplicity(&ps("nu(0) x nu(1) x nu(2)"), &pi).unwrap();
        assert_eq!(a.kind, AnswerKind::Exact { value: 1 });
        assert_eq!(a.ext_vanishes, Some(true));
    }

    #[test]
    fn good_pair_and_bounds() {
        let pi = parse_generic("Q(nu(0)..nu(1); nu(1/3)..nu(1/3))").unwrap();
        let good = multiplicity(&ps("nu(20) x nu(21) x nu(22) x nu(23)"), &pi).unwrap();
        assert_eq!(good.tag(), "good-pair");
        // Bad to [ν⁰, ν¹]: the pattern ν^{-1/2}, ν^{1/2}, ν^{3/2} occurs in order.
        let bad = multiplicity(&ps("nu(-1/2) x nu(1/2) x nu(3/2) x nu(7)"), &pi).unwrap();
        assert_eq!(bad.tag(), "bz-bounds");
        let (lo, hi) = (bad.lower().unwrap(), bad.upper().unwrap());
        assert!(lo == 1 && hi >= 1);
    }

    #[test]
    fn answers_pass_euler_poincare() {
        let st1 = GenericRep::steinberg(1).unwrap();
        let series = ps("nu(1/2) x nu(-1/2)");
        let a = multiplicity(&series, &st1).unwrap();
        assert_eq!(euler_poincare_check(&series, &st1, &a), Some(true));
    }

    #[test]
    fn size_mismatch() {
        let r = multiplicity(&ps("nu(0)"), &GenericRep::steinberg(1).unwrap());
        assert!(matches!(r, Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn answer_json_shape() {
        let a = MultiplicityAnswer::exact(2, None, "steinberg-ascending");
        let v: serde_json::Value = serde_json::to_value(&a).unwrap();
        assert_eq!(v["kind"], "exact");
        assert_eq!(v["value"], 2);
        assert!(v["ext_vanishes"].is_null());
        assert_eq!(v["provenance"]["tag"], "steinberg-ascending");
        let b = MultiplicityAnswer::bounds(0, 1, "z-target-bound");
        let v: serde_json::Value = serde_json::to_value(&b).unwrap();
        assert_eq!(
            (v["lower"].as_u64(), v["upper"].as_u64()),
            (Some(0), Some(1))
        );
        let back: MultiplicityAnswer = serde_json::from_value(v).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn multiplicity_z_examples() {
        let d = parse_segment("nu(0)*rho(s,2)..nu(1)*rho(s,2)").unwrap();
        let a = multiplicity_z(&ps("nu(0) x nu(1) x nu(2) x nu(3) x nu(4)"), &d).unwrap();
        assert_eq!(a.kind, AnswerKind::Bounds { lower: 0, upper: 1 });
        let d1 = parse_segment("nu(0)*rho(s,2)..nu(0)*rho(s,2)").unwrap();
        let b = multiplicity_z(&ps("nu(0) x nu(1) x nu(2)"), &d1).unwrap();
        assert_eq!(b.value(), Some(1));
        let k1 = parse_segment("nu(0)..nu(1)").unwrap();
        assert!(multiplicity_z(&ps("nu(0) x nu(1) x nu(2)"), &k1).is_err());
    }

    #[test]
    fn subquotient_examples() {
        let two = steinberg_subquotients(2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(
            two[0].multisegment,
            parse_multisegment("Z(nu(1/2)..nu(1/2); nu(-1/2)..nu(-1/2))").unwrap()
        );
        assert_eq!(
            two[1].multisegment,
            parse_multisegment("Z(nu(-1/2)..nu(1/2))").unwrap()
        );
        let three = steinberg_subquotients(3).unwrap();
        assert_eq!(
            three[1].multisegment,
            parse_multisegment("Z(nu(0)..nu(1); nu(-1)..nu(-1))").unwrap()
        );
        assert_eq!(
            three[2].multisegment,
            parse_multisegment("Z(nu(1)..nu(1); nu(-1)..nu(0))").unwrap()
        );
        let p = three[1].embedding_params.unwrap();
        assert_eq!(
            (p.a, p.b, p.c),
            (int(3) / int(2), Rational::new(1, 2), int(-1))
        );
        assert!(steinberg_subquotients(1).is_err());
    }

    #[test]
    fn nongeneric_examples() {
        let st2 = parse_segment("nu(-1/2)..nu(1/2)").unwrap();
        let pi1 = parse_multisegment("Z(nu(0)..nu(1); nu(-1)..nu(-1))").unwrap();
        assert!(nongeneric_quotient_test(&pi1, &st2).unwrap());
        let triv = parse_multisegment("Z(nu(-1)..nu(1))").unwrap();
        assert!(!nongeneric_quotient_test(&triv, &st2).unwrap());
        let generic = parse_multisegment("Z(nu(0)..nu(0); nu(5)..nu(5); nu(9)..nu(9))").unwrap();
        assert_eq!(
            nongeneric_quotient_test(&generic, &st2),
            Err(Error::GenericMultisegment)
        );
        let twisted = parse_multisegment("Z(nu(1)..nu(2); nu(0)..nu(0))").unwrap();
        let st2_shift = parse_segment("nu(1/2)..nu(3/2)").unwrap();
        assert!(nongeneric_quotient_test(&twisted, &st2_shift).unwrap());
        let on2 = parse_segment("nu(0)*rho(s,2)..nu(0)*rho(s,2)").unwrap();
        let tau = parse_multisegment("Z(nu(0)..nu(2))").unwrap();
        assert!(!nongeneric_quotient_test(&tau, &on2).unwrap());
    }

    #[test]
    fn screen_examples() {
        assert!(generic_length2_screen(
            &parse_multisegment("Z(nu(0)..nu(1); nu(-1)..nu(-1))").unwrap()
        ));
        assert!(!generic_length2_screen(
            &parse_multisegment("Z(nu(0)..nu(1); nu(2)..nu(3))").unwrap()
        ));
        assert!(!generic_length2_screen(
            &parse_multisegment("Z(nu(0)..nu(2))").unwrap()
        ));
    }
}
