//! Block sizes of standard parabolic subgroups and the splittings of a
//! segment into short pieces that index the Steinberg subquotients.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::{Cuspidal, Multisegment, Rational, Segment};

/// Ordered block sizes `(n₁, …, n_r)` of a standard parabolic of `G_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Precondition(
                "a partition needs at least one part and every part >= 1".into(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"1,2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Precondition(format!("bad partition part {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Semisimple rank of the Levi `G_{n₁} × … × G_{n_r}`: `Σ (n_j - 1)`.
pub fn levi_ss_rank(p: &Partition) -> u32 {
    p.parts.iter().map(|&k| k - 1).sum()
}

/// Whether the parabolic meets `G_{n-1}` in its Borel subgroup: the Borel
/// itself, or a single block of size two among blocks of size one.
pub fn flag_embedding_exists(p: &Partition) -> bool {
    let twos = p.parts.iter().filter(|&&k| k == 2).count();
    p.parts.iter().all(|&k| k <= 2) && twos <= 1
}

/// Splittings of a length-`n` segment into consecutive pieces of length one
/// or two, at most one of length two, read from the top. The all-ones
/// splitting comes first, then the splitting with the two at block `i`.
pub fn segment_partitions(n: u32) -> Vec<Partition> {
    let mut out = vec![Partition {
        parts: vec![1; n as usize],
    }];
    for i in 0..n.saturating_sub(1) as usize {
        let mut parts = vec![1; n as usize - 1];
        parts[i] = 2;
        out.push(Partition { parts });
    }
    out
}

pub fn segment_partition_count(n: u32) -> Result<usize> {
    if n < 2 {
        return Err(Error::Precondition(
            "segment_partition_count needs n >= 2".into(),
        ));
    }
    Ok(segment_partitions(n).len())
}

/// Cuts the centred segment `[ν^{-(n-1)/2}, ν^{(n-1)/2}]` into the blocks of
/// `p`, starting from the top exponent.
pub fn partition_to_multisegment(p: &Partition) -> Multisegment {
    let n = p.n() as i64;
    let mut top = n - 1; // twice the current top exponent
    let mut segs = Vec::with_capacity(p.parts.len());
    for &k in &p.parts {
        let low = top - 2 * (k as i64 - 1);
        let base = Cuspidal::nu(Rational::new(low, 2));
        segs.push(Segment::new(base, k).expect("parts are positive"));
        top = low - 2;
    }
    Multisegment::new(segs)
}
