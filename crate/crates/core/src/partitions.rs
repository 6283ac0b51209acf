//! Integer partitions with Frobenius and Maya coordinates, border strips and
//! the Hamming metric.
//!
//! Half-integers are stored doubled: the value `x` is the odd integer `2x`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::{rat, Rational};

/// A half-integer stored as its (odd) double.
pub type Half = i64;

/// Rational value of a doubled half-integer.
pub fn half_value(h: Half) -> Rational {
    rat(h, 2)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be positive and weakly decreasing: {0:?}")]
    NotAPartition(Vec<u32>),
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
    #[error("{mu} is not in the Hamming neighborhood of {lambda}")]
    NotNeighbor { lambda: Partition, mu: Partition },
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if ok {
            Ok(Partition { parts })
        } else {
            Err(PartitionError::NotAPartition(parts))
        }
    }

    /// Builds from any list of parts, dropping zeros and sorting.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `λ_i` with 1-based `i`; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            panic!("parts are 1-indexed");
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first).map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32).collect();
        Partition { parts }
    }

    /// Multiplicities `m_i` of each part size `i ≥ 1`, indexed from 1.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0) as usize + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// `z_λ = Π i^{m_i} m_i!`.
    pub fn z(&self) -> num_bigint::BigInt {
        let mut z = num_bigint::BigInt::from(1);
        for (i, &m) in self.multiplicities().iter().enumerate().skip(1) {
            for k in 1..=m {
                z *= i as u64;
                z *= k as u64;
            }
        }
        z
    }

    pub fn frobenius(&self) -> FrobeniusData {
        let conj = self.conjugate();
        let d = self.parts.iter().enumerate().filter(|(i, &p)| p as usize > *i).count();
        let arms: Vec<u32> = (0..d).map(|i| self.parts[i] - i as u32 - 1).collect();
        let legs: Vec<u32> = (0..d).map(|i| conj.parts[i] - i as u32 - 1).collect();
        let plus = arms.iter().map(|&a| 2 * a as i64 + 1).collect();
        let minus = legs.iter().map(|&b| -(2 * b as i64 + 1)).collect();
        FrobeniusData { d, arms, legs, plus, minus }
    }

    /// The Maya sequence as its finite deviation from the vacuum.
    pub fn maya(&self) -> MayaSet {
        let f = self.frobenius();
        MayaSet { particles: f.plus.into_iter().collect(), holes: f.minus.into_iter().collect() }
    }

    /// `S_λ` entry at 1-based position `j`, doubled.
    pub fn maya_entry(&self, j: usize) -> Half {
        2 * (self.part(j) as i64 - j as i64) + 1
    }

    /// Cells `(row, col)` (0-based) of the Young diagram.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    /// Hook length and leg length of a cell.
    pub fn hook(&self, cell: (usize, usize)) -> (u32, u32) {
        let (i, j) = cell;
        let arm = self.parts[i] - j as u32 - 1;
        let leg = self.parts.iter().skip(i + 1).filter(|&&p| p as usize > j).count() as u32;
        (arm + leg + 1, leg)
    }

    /// All border strips of this partition of the given size.
    pub fn border_strips(&self, n: u32) -> Vec<BorderStrip> {
        self.all_border_strips().into_iter().filter(|s| s.size == n).collect()
    }

    /// Every removable border strip, in order of the Maya swap `(from, to)`.
    pub fn all_border_strips(&self) -> Vec<BorderStrip> {
        let maya = self.maya();
        let n = self.size() as i64;
        let window: Vec<Half> = (-(n + 1)..=n).map(|j| 2 * j + 1).collect();
        let mut out = Vec::new();
        for &x in window.iter().filter(|&&x| maya.contains(x)) {
            for &y in window.iter().filter(|&&y| y < x && !maya.contains(y)) {
                let height = window.iter().filter(|&&z| y < z && z < x && maya.contains(z)).count() as u32;
                let mut m = maya.clone();
                m.remove(x);
                m.insert(y);
                out.push(BorderStrip {
                    host: self.clone(),
                    from: x,
                    to: y,
                    size: ((x - y) / 2) as u32,
                    height,
                    result: m.to_partition(),
                });
            }
        }
        out
    }
}

/// All partitions of `n` in reverse lexicographic order: `(n)` first, `(1^n)` last.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of size at most `n`, grouped by size.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(enumerate_partitions).collect()
}

/// Partitions of `n` into parts of size at least `min_part`, reverse lexicographic.
pub fn partitions_with_min_part(n: u32, min_part: u32) -> Vec<Partition> {
    enumerate_partitions(n).into_iter().filter(|p| p.parts.iter().all(|&x| x >= min_part)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub d: usize,
    pub arms: Vec<u32>,
    pub legs: Vec<u32>,
    /// `a_i + 1/2`, doubled, decreasing.
    pub plus: Vec<Half>,
    /// `−b_i − 1/2`, doubled, increasing.
    pub minus: Vec<Half>,
}

impl FrobeniusData {
    /// The set `C_λ` (doubled), positive entries first.
    pub fn c_set(&self) -> Vec<Half> {
        self.plus.iter().chain(&self.minus).copied().collect()
    }
}

/// Maya sequence stored as particles (occupied positive positions) and holes
/// (empty negative positions); all other negative positions are occupied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MayaSet {
    pub particles: BTreeSet<Half>,
    pub holes: BTreeSet<Half>,
}

impl MayaSet {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn contains(&self, x: Half) -> bool {
        if x > 0 {
            self.particles.contains(&x)
        } else {
            !self.holes.contains(&x)
        }
    }

    /// Marks `x` occupied. Returns false if it already was.
    pub fn insert(&mut self, x: Half) -> bool {
        if x > 0 {
            self.particles.insert(x)
        } else {
            self.holes.remove(&x)
        }
    }

    /// Marks `x` empty. Returns false if it already was.
    pub fn remove(&mut self, x: Half) -> bool {
        if x > 0 {
            self.particles.remove(&x)
        } else {
            self.holes.insert(x)
        }
    }

    pub fn charge(&self) -> i64 {
        self.particles.len() as i64 - self.holes.len() as i64
    }

    /// Number of occupied positions strictly above `x`.
    pub fn count_above(&self, x: Half) -> usize {
        let p = self.particles.range(x + 1..).count();
        if x >= 0 {
            return p;
        }
        // Negative positions in (x, 0): (−x − 1)/2 of them, minus holes there.
        let negatives = ((-x - 1) / 2) as usize;
        p + negatives - self.holes.range(x + 1..0).count()
    }

    /// Partition of a charge-zero state.
    pub fn to_partition(&self) -> Partition {
        assert_eq!(self.charge(), 0, "partition of a charged Maya state");
        let low = self.holes.iter().next().copied().unwrap_or(-1).min(-1);
        let high = self.particles.iter().next_back().copied().unwrap_or(1).max(1);
        let mut parts = Vec::new();
        let mut j = 0i64;
        let mut x = high;
        while x >= low {
            if self.contains(x) {
                j += 1;
                let p = (x - 1) / 2 + j;
                if p > 0 {
                    parts.push(p as u32);
                }
            }
            x -= 2;
        }
        Partition { parts }
    }
}

/// A removable border strip, identified by the Maya swap `from → to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderStrip {
    pub host: Partition,
    /// Occupied position vacated by the removal (doubled).
    pub from: Half,
    /// Empty position filled by the removal (doubled).
    pub to: Half,
    pub size: u32,
    pub height: u32,
    pub result: Partition,
}

/// `(1/2)|C_λ Δ C_μ|`.
pub fn hamming_distance(l: &Partition, m: &Partition) -> usize {
    let a: BTreeSet<Half> = l.frobenius().c_set().into_iter().collect();
    let b: BTreeSet<Half> = m.frobenius().c_set().into_iter().collect();
    a.symmetric_difference(&b).count() / 2
}

/// Indices `(a, b, a', b')` (1-based) with `S_λ ∖ S_μ = {s_a, s_b}` and
/// `S_μ ∖ S_λ = {s'_{a'}, s'_{b'}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    pub a2: usize,
    pub b2: usize,
}

fn witness(l: &Partition, m: &Partition) -> Option<Witness> {
    let len = l.len().max(m.len());
    let ml = l.maya();
    let mm = m.maya();
    let only_l: Vec<usize> = (1..=len).filter(|&j| !mm.contains(l.maya_entry(j))).collect();
    let only_m: Vec<usize> = (1..=len).filter(|&j| !ml.contains(m.maya_entry(j))).collect();
    match (only_l.as_slice(), only_m.as_slice()) {
        ([a, b], [a2, b2]) => Some(Witness { a: *a, b: *b, a2: *a2, b2: *b2 }),
        _ => None,
    }
}

/// All `μ` with `|μ| = |λ|` and `d(λ, μ) = 2`, with their index witnesses.
pub fn neighborhood(l: &Partition) -> Vec<(Partition, Witness)> {
    enumerate_partitions(l.size())
        .into_iter()
        .filter(|m| m != l && hamming_distance(l, m) == 2)
        .map(|m| {
            let w = witness(l, &m).expect("distance-two pair has a witness");
            (m, w)
        })
        .collect()
}

/// The two strip pairs relating neighbours `λ` and `μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripPairs {
    /// Smaller strip in `λ` and its partner in `μ`.
    pub g1: BorderStrip,
    pub g1p: BorderStrip,
    /// Larger strip in `λ` and its partner in `μ`.
    pub g2: BorderStrip,
    pub g2p: BorderStrip,
    /// `+1` if `λ` exceeds `μ` at the first differing part, else `−1`.
    pub w: i32,
}

pub fn first_difference_sign(l: &Partition, m: &Partition) -> i32 {
    let n = l.len().max(m.len());
    for i in 1..=n {
        if l.part(i) != m.part(i) {
            return if l.part(i) > m.part(i) { 1 } else { -1 };
        }
    }
    panic!("first_difference_sign of equal partitions");
}

/// Finds the strips `γ ⊂ λ`, `γ' ⊂ μ` with `λ ∖ γ = μ ∖ γ'` by matching removal results.
pub fn strip_pairs(l: &Partition, m: &Partition) -> Result<StripPairs, PartitionError> {
    let not_neighbor = || PartitionError::NotNeighbor { lambda: l.clone(), mu: m.clone() };
    if l.size() != m.size() || l == m || hamming_distance(l, m) != 2 {
        return Err(not_neighbor());
    }
    let sl = l.all_border_strips();
    let sm = m.all_border_strips();
    let mut pairs: Vec<(BorderStrip, BorderStrip)> = Vec::new();
    for g in &sl {
        for h in sm.iter().filter(|h| h.result == g.result) {
            pairs.push((g.clone(), h.clone()));
        }
    }
    if pairs.len() != 2 {
        return Err(not_neighbor());
    }
    pairs.sort_by_key(|(g, _)| g.size);
    let (g2, g2p) = pairs.pop().unwrap();
    let (g1, g1p) = pairs.pop().unwrap();
    Ok(StripPairs { g1, g1p, g2, g2p, w: first_difference_sign(l, m) })
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Partition {
    type Err = PartitionError;
    /// Accepts `7+2+1`; `0` or the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts: Result<Vec<u32>, _> = s.split('+').map(|t| t.trim().parse::<u32>()).collect();
        let parts = parts.map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(parts).map_err(|_| PartitionError::Parse(s.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `part(&[7, 2, 1])`.
pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition literal")
}
