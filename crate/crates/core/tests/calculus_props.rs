use gln_branching::calculus::derivative_levels;
use gln_branching::{
    bz_hom_upper_bound, csupp, derivative_z, euler_poincare_check, is_good_pair, jacquet_shadow,
    multiplicity, parse_segment, parse_series, product_rule, Cuspidal, CuspidalLine, Derivative,
    Factor, GenericRep, JacquetSide, PrincipalSeries, Rational, Segment, Side, Support,
};
use proptest::prelude::*;

fn line(size: u32) -> CuspidalLine {
    if size == 1 {
        CuspidalLine::trivial()
    } else {
        CuspidalLine::self_dual(format!("r{size}"), size).unwrap()
    }
}

fn factor() -> impl Strategy<Value = Factor> {
    (0u8..3, 1u32..3, -3i64..4, 1u32..4).prop_map(|(kind, size, e, len)| {
        let base = Cuspidal::new(line(size), Rational::from_integer(e));
        let d = Segment::new(base.clone(), len).unwrap();
        match kind {
            0 => Factor::Cuspidal(base),
            1 => Factor::q(d),
            _ => Factor::z(d),
        }
    })
}

/// Nonzero derivative levels counted from the definitions: `Q` of relative
/// length `l` at every multiple of `r` up to `l·r`, `Z` and cuspidals at `0`
/// and `r`.
fn level_count(f: &Factor) -> u64 {
    match f {
        Factor::Q(d) => d.rel_len() as u64 + 1,
        _ => 2,
    }
}

fn is_submultiset(small: &[Cuspidal], big: &[Cuspidal]) -> bool {
    let mut big = big.to_vec();
    small.iter().all(|c| match big.iter().position(|b| b == c) {
        Some(p) => {
            big.remove(p);
            true
        }
        None => false,
    })
}

proptest! {
    #[test]
    fn product_rule_term_count(factors in prop::collection::vec(factor(), 1..6), left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let n: u32 = factors.iter().map(Factor::size).sum();
        let total: u64 = (0..=n).map(|i| product_rule(&factors, i, side).total()).sum();
        let expected: u64 = factors.iter().map(level_count).product();
        prop_assert_eq!(total, expected);
        prop_assert!(product_rule(&factors, n + 1, side).is_empty());
    }

    #[test]
    fn product_rule_conserves_support(factors in prop::collection::vec(factor(), 1..5), left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let input = factors.as_slice().csupp();
        let n: u32 = factors.iter().map(Factor::size).sum();
        for i in 0..=n {
            for (term, _) in product_rule(&factors, i, side).terms() {
                let size: u32 = term.iter().map(Factor::size).sum();
                prop_assert_eq!(size + i, n);
                prop_assert!(is_submultiset(term.csupp().as_slice(), input.as_slice()));
            }
        }
    }

    #[test]
    fn z_derivative_chains_as_truncation(size in 1u32..3, e in -3i64..3, len in 1u32..5, left in any::<bool>()) {
        let side = if left { Side::Left } else { Side::Right };
        let d = Segment::new(Cuspidal::new(line(size), Rational::from_integer(e)), len).unwrap();
        let once = derivative_z(&d, size, side);
        match once {
            Derivative::Nonzero(d1) => {
                prop_assert_eq!(Some(d1.clone()), d.truncate(1, side).unwrap());
                let twice = derivative_z(&d1, size, side);
                let expected = match d.truncate(2, side).unwrap() {
                    Some(s) => Derivative::Nonzero(s),
                    None => Derivative::Empty,
                };
                prop_assert_eq!(twice, expected);
            }
            Derivative::Empty => prop_assert_eq!(len, 1),
            Derivative::Zero => prop_assert!(false, "level r never vanishes"),
        }
    }

    #[test]
    fn jacquet_exchanged_by_duality(size in 1u32..3, e in -3i64..3, k in 1u32..6, p in 0u32..6) {
        let d = Segment::new(Cuspidal::new(line(size), Rational::from_integer(e)), k).unwrap();
        let p = p.min(k);
        let l = p * size;
        let la = d.abs_len();
        let std = jacquet_shadow(&d, l, JacquetSide::Standard).unwrap().unwrap();
        let opp_rev = jacquet_shadow(&d, la - l, JacquetSide::Opposite).unwrap().unwrap();
        prop_assert_eq!((std.left.clone(), std.right.clone()), (opp_rev.right, opp_rev.left));
        let dual = jacquet_shadow(&d.dual(), l, JacquetSide::Opposite).unwrap().unwrap();
        prop_assert_eq!(dual.left, std.left.map(|s| s.dual()));
        prop_assert_eq!(dual.right, std.right.map(|s| s.dual()));
    }

    #[test]
    fn good_pairs_have_positive_bound_and_pass_euler_poincare(
        exps in prop::collection::vec(-4i64..5, 2..6),
        start in -3i64..3,
    ) {
        let ps = PrincipalSeries::from_cuspidals(
            exps.iter().map(|&e| Cuspidal::nu(Rational::new(e, 2))),
        ).unwrap();
        let n = ps.total_size();
        let pi = GenericRep::single(
            Segment::new(Cuspidal::nu(Rational::from_integer(start)), n - 1).unwrap(),
        );
        if !is_good_pair(&ps, &pi).unwrap().is_good() { return Ok(()); }
        prop_assert!(bz_hom_upper_bound(&ps, &Factor::q(pi.segments()[0].clone())).unwrap() >= 1);
        let answer = multiplicity(&ps, &pi).unwrap();
        prop_assert_eq!(euler_poincare_check(&ps, &pi, &answer), Some(true));
    }
}

#[test]
fn repeated_top_factor_gives_coefficient_two() {
    // ν^{1/2}(ν^{m-2}ρ × ν^{m-2}ρ × ν^{m-3}ρ × … × ρ) × χ with ρ of size k.
    for k in 2..=3u32 {
        for m in 2..=5i64 {
            let rho = CuspidalLine::self_dual("p", k).unwrap();
            let c = |e: Rational| Factor::Cuspidal(Cuspidal::new(rho.clone(), e));
            let half = Rational::new(1, 2);
            let mut factors = vec![c(half + Rational::from_integer(m - 2))];
            factors.extend(
                (0..=m - 2)
                    .rev()
                    .map(|j| c(half + Rational::from_integer(j))),
            );
            factors.push(Factor::Cuspidal(Cuspidal::nu(Rational::new(1, 3))));
            let sum = product_rule(&factors, k + 1, Side::Left).twist(-half);
            let target: Vec<Factor> = (0..=m - 2)
                .rev()
                .map(|j| c(Rational::from_integer(j)))
                .collect();
            assert_eq!(sum.coeff(&target), 2, "k = {k}, m = {m}");
        }
    }
}

#[test]
fn product_rule_matches_enumerated_compositions() {
    let ps = parse_series("Q[nu(0)..nu(2)] x Z[nu(1)..nu(2)] x nu(5)").unwrap();
    let factors = ps.factors();
    let levels: Vec<_> = factors
        .iter()
        .map(|f| derivative_levels(f, Side::Right))
        .collect();
    for i in 0..=ps.total_size() {
        let mut count = 0;
        for a in &levels[0] {
            for b in &levels[1] {
                for c in &levels[2] {
                    if a.0 + b.0 + c.0 == i {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(product_rule(factors, i, Side::Right).total(), count);
    }
}

#[test]
fn csupp_of_segment_and_reordering() {
    let d = parse_segment("nu(0)..nu(2)").unwrap();
    assert_eq!(csupp(&d).len(), 3);
    let a = parse_series("Q[nu(0)..nu(1)] x Q[nu(3)..nu(3)]").unwrap();
    let b = parse_series("nu(3) x nu(1) x nu(0)").unwrap();
    assert_eq!(csupp(&a), csupp(&b));
}
