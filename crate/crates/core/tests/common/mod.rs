//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use gln_branching::{Cuspidal, CuspidalLine, PrincipalSeries, Rational, Segment};

/// A letter: a line tag and twice the exponent.
pub type Letter = (u8, i64);

pub fn line_of(tag: u8) -> CuspidalLine {
    match tag {
        0 => CuspidalLine::trivial(),
        1 => CuspidalLine::self_dual("s", 1).unwrap(),
        t => CuspidalLine::self_dual(format!("r{t}"), 1).unwrap(),
    }
}

pub fn cuspidal(l: Letter) -> Cuspidal {
    Cuspidal::new(line_of(l.0), Rational::new(l.1, 2))
}

pub fn series(word: &[Letter]) -> PrincipalSeries {
    PrincipalSeries::from_cuspidals(word.iter().map(|&l| cuspidal(l))).unwrap()
}

pub fn letters_linked(x: Letter, y: Letter) -> bool {
    x.0 == y.0 && (x.1 - y.1).abs() == 2
}

/// Exhaustive subsequence search for the pattern `ν^{t-1/2} a` with `a`
/// given by `(tag, 2·exp)` and `len` cuspidals in the segment.
pub fn brute_bad(word: &[Letter], start: Letter, len: usize) -> bool {
    let pattern: Vec<Letter> = (0..=len as i64)
        .map(|t| (start.0, start.1 + 2 * t - 1))
        .collect();
    fn search(word: &[Letter], pattern: &[Letter], from: usize) -> bool {
        match pattern.split_first() {
            None => true,
            Some((head, rest)) => {
                (from..word.len()).any(|p| word[p] == *head && search(word, rest, p + 1))
            }
        }
    }
    search(word, &pattern, 0)
}

pub fn segment(start: Letter, len: usize) -> Segment {
    Segment::new(cuspidal(start), len as u32).unwrap()
}

/// All words reachable by swapping adjacent unlinked letters.
pub fn commutation_class(word: &[Letter]) -> HashSet<Vec<Letter>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        for p in 0..w.len().saturating_sub(1) {
            if w[p] != w[p + 1] && !letters_linked(w[p], w[p + 1]) {
                let mut next = w.clone();
                next.swap(p, p + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// All words of length `n` over `alphabet`.
pub fn words(alphabet: &[Letter], n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}
