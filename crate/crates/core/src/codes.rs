//! The Hamming code of length `2^(n+1) - 1`, the Preparata-like code `P_f`
//! inside it, and the partition of the Hamming code into translates of `P_f`.
//!
//! Coordinates are indexed by points of `PG(n, 2)`: the X-part coordinate `a`
//! is the point `(a, 0)` and the Y-part coordinate `y` is the point `(y, 1)`.
//! In this indexing coordinate `i` of the bit-vector view is point `i + 1`,
//! the Hamming code is the set of words whose points sum to zero, and its
//! weight-3 words are exactly the lines.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{all_lines, parallelism_defect, space_size, ColorClass, Line, Parallelism, Point};
use crate::gf2::FieldElem;
use crate::vbf::Vbf;

/// Largest degree for which the Hamming code is listed word by word.
pub const HAMMING_ENUM_MAX_N: u32 = 3;
/// Largest degree for which `P_f` is listed word by word.
pub const PREPARATA_ENUM_MAX_N: u32 = 3;
/// Largest degree for which [`partition_parallelism`] visits every line.
pub const PARTITION_MAX_N: u32 = 9;

/// A binary word `(1_X, 1_Y)`, stored as a bitset over points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodewordXY {
    n: u32,
    bits: Vec<u64>,
}

impl CodewordXY {
    pub fn zero(n: u32) -> Self {
        CodewordXY {
            n,
            bits: vec![0; space_size(n).div_ceil(64)],
        }
    }

    /// The word supported on the given points; repeated points cancel.
    pub fn from_points(n: u32, points: &[Point]) -> Result<Self> {
        let mut c = Self::zero(n);
        for &p in points {
            if p == 0 || p as usize >= space_size(n) {
                return Err(Error::Malformed(format!(
                    "{p:#x} is not a coordinate of the length-{} code",
                    space_size(n) - 1
                )));
            }
            c.toggle(p);
        }
        Ok(c)
    }

    pub fn from_sets(n: u32, xs: &[FieldElem], ys: &[FieldElem]) -> Result<Self> {
        let top = 1u32 << n;
        if let Some(&a) = xs.iter().find(|&&a| a == 0 || a >= top) {
            return Err(Error::Malformed(format!("{a:#x} is not a valid X coordinate")));
        }
        if let Some(&y) = ys.iter().find(|&&y| y >= top) {
            return Err(Error::Malformed(format!("{y:#x} is not a valid Y coordinate")));
        }
        let pts: Vec<Point> = xs.iter().copied().chain(ys.iter().map(|&y| y | top)).collect();
        Self::from_points(n, &pts)
    }

    /// The word of a line.
    pub fn from_line(n: u32, line: &Line) -> Self {
        Self::from_points(n, &line.points()).expect("line points are coordinates")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Code length `2^(n+1) - 1`.
    pub fn code_length(&self) -> usize {
        space_size(self.n) - 1
    }

    #[inline]
    pub fn contains_point(&self, p: Point) -> bool {
        self.bits[p as usize / 64] >> (p % 64) & 1 == 1
    }

    #[inline]
    pub fn toggle(&mut self, p: Point) {
        self.bits[p as usize / 64] ^= 1 << (p % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn distance(&self, other: &Self) -> u32 {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "codewords of different lengths");
        CodewordXY {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Support as points, ascending.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for (i, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push((i * 64) as Point + w.trailing_zeros());
                w &= w - 1;
            }
        }
        out
    }

    pub fn x_set(&self) -> Vec<FieldElem> {
        let top = 1u32 << self.n;
        self.points().into_iter().filter(|&p| p < top).collect()
    }

    pub fn y_set(&self) -> Vec<FieldElem> {
        let top = 1u32 << self.n;
        self.points()
            .into_iter()
            .filter(|&p| p >= top)
            .map(|p| p ^ top)
            .collect()
    }

    /// The bit-vector view: X coordinates `1..2^n`, then Y coordinates `0..2^n`.
    pub fn to_bit_vector(&self) -> Vec<bool> {
        (1..space_size(self.n) as Point)
            .map(|p| self.contains_point(p))
            .collect()
    }

    pub fn from_bit_vector(n: u32, bits: &[bool]) -> Result<Self> {
        if bits.len() != space_size(n) - 1 {
            return Err(Error::Malformed(format!(
                "bit vector of length {}, expected {}",
                bits.len(),
                space_size(n) - 1
            )));
        }
        let pts: Vec<Point> = (1..)
            .zip(bits)
            .filter(|(_, &b)| b)
            .map(|(p, _)| p)
            .collect();
        Self::from_points(n, &pts)
    }

    /// As a line, if the support is one.
    pub fn as_line(&self) -> Option<Line> {
        match self.points()[..] {
            [p, q, r] if p ^ q == r => Some(Line::through(p, q)),
            _ => None,
        }
    }

    /// Parses `<hexX>:<hexY>` for a code over `F_{2^n}`.
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let (xs, ys) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Malformed(format!("codeword {s:?} lacks ':'")))?;
        let half = 1usize << n;
        let xm = parse_hex_mask(xs, half)?;
        let ym = parse_hex_mask(ys, half)?;
        if xm.first().is_some_and(|&b| b) {
            return Err(Error::Malformed("X part contains the zero coordinate".into()));
        }
        let mut pts = Vec::new();
        pts.extend((0..half).filter(|&i| xm[i]).map(|i| i as Point));
        pts.extend((0..half).filter(|&i| ym[i]).map(|i| (i | half) as Point));
        Self::from_points(n, &pts)
    }
}

/// `<hexX>:<hexY>`, each a bitmask with bit `a` set for coordinate `a`.
impl fmt::Display for CodewordXY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = 1usize << self.n;
        let x: Vec<bool> = (0..half).map(|i| self.contains_point(i as Point)).collect();
        let y: Vec<bool> = (0..half)
            .map(|i| self.contains_point((i | half) as Point))
            .collect();
        write!(f, "{}:{}", hex_mask(&x), hex_mask(&y))
    }
}

fn hex_mask(bits: &[bool]) -> String {
    let digits: Vec<u8> = bits
        .chunks(4)
        .map(|c| c.iter().rev().fold(0u8, |acc, &b| acc << 1 | b as u8))
        .collect();
    let s: String = digits
        .iter()
        .rev()
        .skip_while(|&&d| d == 0)
        .map(|&d| char::from_digit(d as u32, 16).unwrap())
        .collect();
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn parse_hex_mask(s: &str, len: usize) -> Result<Vec<bool>> {
    let s = s.trim();
    let s = s.strip_prefix("0x").unwrap_or(s);
    if s.is_empty() {
        return Err(Error::Malformed("empty hex mask".into()));
    }
    let mut bits = vec![false; len];
    for (i, ch) in s.chars().rev().enumerate() {
        let d = ch
            .to_digit(16)
            .ok_or_else(|| Error::Malformed(format!("bad hex digit {ch:?}")))?;
        for b in 0..4 {
            if d >> b & 1 == 1 {
                let idx = 4 * i + b;
                if idx >= len {
                    return Err(Error::Malformed(format!("mask {s} exceeds {len} bits")));
                }
                bits[idx] = true;
            }
        }
    }
    Ok(bits)
}

/// Parses one codeword per non-empty line, ignoring `#` comments.
pub fn parse_codewords(n: u32, text: &str) -> Result<Vec<CodewordXY>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| CodewordXY::parse(n, l))
        .collect()
}

pub fn format_codewords(words: &[CodewordXY]) -> String {
    words.iter().map(|w| format!("{w}\n")).collect()
}

/// Sum of the support as points: `(XOR X + XOR Y, |Y| mod 2)`.
fn syndrome(c: &CodewordXY) -> Point {
    c.points().into_iter().fold(0, |acc, p| acc ^ p)
}

/// `|Y|` is even and `XOR X = XOR Y`.
pub fn hamming_contains(c: &CodewordXY) -> bool {
    syndrome(c) == 0
}

/// The sums `(Σ Y, Σ f(X) + Σ f(Y))` that drive membership in `P_f`.
fn preparata_sums(f: &Vbf, c: &CodewordXY) -> (FieldElem, FieldElem) {
    let top = 1u32 << c.n;
    let (mut s, mut d) = (0, 0);
    for p in c.points() {
        if p >= top {
            s ^= p ^ top;
            d ^= f.eval(p ^ top);
        } else {
            d ^= f.eval(p);
        }
    }
    (s, d)
}

/// Conditions (1)-(3) of `P_f`: `|Y|` even, `ΣX = ΣY`, and
/// `Σ f(X) = Σ f(Y) + f(ΣY)`.
pub fn preparata_contains(f: &Vbf, c: &CodewordXY) -> bool {
    if f.n() != c.n || !hamming_contains(c) {
        return false;
    }
    let (s, d) = preparata_sums(f, c);
    f.eval(s) == d
}

/// Every word of the Hamming code of length `2^(n+1) - 1`, in a fixed order.
pub fn enumerate_hamming(n: u32) -> Result<Vec<CodewordXY>> {
    if n > HAMMING_ENUM_MAX_N {
        return Err(Error::DegreeTooLarge {
            n,
            what: "Hamming code enumeration",
            limit: HAMMING_ENUM_MAX_N,
        });
    }
    // The unit points are pivots of the parity check; the rest are free.
    let free: Vec<Point> = (1..space_size(n) as Point)
        .filter(|p| !p.is_power_of_two())
        .collect();
    Ok((0u64..1 << free.len())
        .map(|mask| {
            let mut c = CodewordXY::zero(n);
            let mut s = 0;
            for (i, &p) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    c.toggle(p);
                    s ^= p;
                }
            }
            for b in 0..=n {
                if s >> b & 1 == 1 {
                    c.toggle(1 << b);
                }
            }
            c
        })
        .collect())
}

/// A uniformly random Hamming codeword.
pub fn random_hamming_word<R: Rng + ?Sized>(n: u32, rng: &mut R) -> CodewordXY {
    let mut c = CodewordXY::zero(n);
    let mut s = 0;
    for p in (1..space_size(n) as Point).filter(|p| !p.is_power_of_two()) {
        if rng.gen::<bool>() {
            c.toggle(p);
            s ^= p;
        }
    }
    for b in 0..=n {
        if s >> b & 1 == 1 {
            c.toggle(1 << b);
        }
    }
    c
}

/// All words of `P_f`, ordered by their bit-vector view read as an integer.
pub fn enumerate_preparata(f: &Vbf) -> Result<Vec<CodewordXY>> {
    let n = f.n();
    if n > PREPARATA_ENUM_MAX_N {
        return Err(Error::DegreeTooLarge {
            n,
            what: "Preparata enumeration",
            limit: PREPARATA_ENUM_MAX_N,
        });
    }
    let len = space_size(n) - 1;
    Ok((0u64..1 << len)
        .into_par_iter()
        .filter_map(|m| {
            let pts: Vec<Point> = (0..len as u32)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            let c = CodewordXY::from_points(n, &pts).expect("in range");
            preparata_contains(f, &c).then_some(c)
        })
        .collect())
}

/// Minimum pairwise distance.
pub fn min_distance(words: &[CodewordXY]) -> Result<u32> {
    if words.len() < 2 {
        return Err(Error::TooFewWords);
    }
    Ok((0..words.len())
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .map(|w| words[i].distance(w))
                .min()
                .unwrap_or(u32::MAX)
        })
        .min()
        .expect("at least two words"))
}

/// A part of the translate partition: the base code or `P ⊕ t_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TranslateLabel {
    Base,
    Alpha(FieldElem),
}

impl TranslateLabel {
    /// `Base` as 0, `Alpha(a)` as `a`.
    pub fn as_elem(&self) -> FieldElem {
        match *self {
            TranslateLabel::Base => 0,
            TranslateLabel::Alpha(a) => a,
        }
    }
}

impl fmt::Display for TranslateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateLabel::Base => write!(f, "base"),
            TranslateLabel::Alpha(a) => write!(f, "{a:#x}"),
        }
    }
}

impl FromStr for TranslateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "base" {
            return Ok(TranslateLabel::Base);
        }
        crate::gf2::parse_hex(s)
            .filter(|&a| a != 0 && a <= u32::MAX as u64)
            .map(|a| TranslateLabel::Alpha(a as u32))
            .ok_or_else(|| Error::Malformed(format!("bad translate label {s:?}")))
    }
}

/// The translate vectors `t_α`, supported on `{e1, α, e1 + α}` with
/// `e1 = (0, 1)` and `α` ranging over `ℋ ∖ {0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslateSet {
    pub base_point: Point,
    pub labels: Vec<FieldElem>,
    pub vectors: Vec<CodewordXY>,
}

impl TranslateSet {
    pub fn vector(&self, alpha: FieldElem) -> &CodewordXY {
        &self.vectors[alpha as usize - 1]
    }
}

/// `t_α` as a word: `X = {α}`, `Y = {0, α}`.
pub fn translate_vector(n: u32, alpha: FieldElem) -> CodewordXY {
    let e1 = 1u32 << n;
    CodewordXY::from_points(n, &[e1, alpha, e1 | alpha]).expect("alpha is nonzero")
}

pub fn translates(n: u32) -> TranslateSet {
    let labels: Vec<FieldElem> = (1..1u32 << n).collect();
    TranslateSet {
        base_point: 1 << n,
        vectors: labels.iter().map(|&a| translate_vector(n, a)).collect(),
        labels,
    }
}

/// The unique part of the partition containing `c`.
///
/// Toggling `t_α` flips `α` in `X` and `{0, α}` in `Y`, so with `s = Σ Y` and
/// `d = Σ f(X) + Σ f(Y)` the word `c ⊕ t_α` lies in `P_f` exactly when
/// `f(s + α) = d`. Every `α` is tested so that a second solution is caught.
pub fn assign_translate(f: &Vbf, c: &CodewordXY) -> Result<TranslateLabel> {
    if c.n != f.n() {
        return Err(Error::DimensionMismatch(c.n, f.n()));
    }
    if !hamming_contains(c) {
        return Err(Error::NotInHamming);
    }
    let (s, d) = preparata_sums(f, c);
    let mut found = None;
    let mut hits = 0;
    for a in 0..1u32 << f.n() {
        if f.eval(s ^ a) == d {
            hits += 1;
            found = Some(a);
        }
    }
    match (hits, found) {
        (1, Some(0)) => Ok(TranslateLabel::Base),
        (1, Some(a)) => Ok(TranslateLabel::Alpha(a)),
        (0, _) => Err(Error::NoTranslateFound),
        _ => Err(Error::MultipleTranslatesFound(hits)),
    }
}

/// The same assignment through explicit membership tests of `c ⊕ t_α`.
pub fn assign_translate_by_membership(f: &Vbf, c: &CodewordXY) -> Result<TranslateLabel> {
    if !hamming_contains(c) {
        return Err(Error::NotInHamming);
    }
    let n = f.n();
    let mut labels = Vec::new();
    if preparata_contains(f, c) {
        labels.push(TranslateLabel::Base);
    }
    for a in 1..1u32 << n {
        if preparata_contains(f, &c.xor(&translate_vector(n, a))) {
            labels.push(TranslateLabel::Alpha(a));
        }
    }
    match labels[..] {
        [l] => Ok(l),
        [] => Err(Error::NoTranslateFound),
        _ => Err(Error::MultipleTranslatesFound(labels.len())),
    }
}

/// Lines grouped by the translate their weight-3 words fall in.
pub fn partition_parallelism(f: &Vbf) -> Result<Parallelism> {
    let n = f.n();
    if n > PARTITION_MAX_N {
        return Err(Error::DegreeTooLarge {
            n,
            what: "partition parallelism",
            limit: PARTITION_MAX_N,
        });
    }
    let lines = all_lines(n);
    let labels: Vec<TranslateLabel> = lines
        .par_iter()
        .map(|l| assign_translate(f, &CodewordXY::from_line(n, l)))
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<FieldElem, Vec<Line>> = BTreeMap::new();
    for (l, label) in lines.into_iter().zip(labels) {
        classes.entry(label.as_elem()).or_default().push(l);
    }
    let par = Parallelism {
        n,
        classes: classes
            .into_iter()
            .map(|(color, lines)| ColorClass { color, lines })
            .collect(),
    };
    match parallelism_defect(&par, n) {
        None => Ok(par),
        Some(why) => Err(Error::NotAParallelism(why)),
    }
}

/// How two labelled parallelisms relate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParallelismComparison {
    /// Same spreads under the same labels.
    Equal,
    /// Same spreads, labels permuted.
    Relabeled { moved: usize },
    /// `shared` spreads occur in both.
    Different { shared: usize },
}

impl fmt::Display for ParallelismComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParallelismComparison::Equal => write!(f, "equal"),
            ParallelismComparison::Relabeled { moved } => {
                write!(f, "equal up to relabeling ({moved} labels moved)")
            }
            ParallelismComparison::Different { shared } => {
                write!(f, "different ({shared} spreads in common)")
            }
        }
    }
}

pub fn compare_parallelisms(a: &Parallelism, b: &Parallelism) -> ParallelismComparison {
    let spreads = |p: &Parallelism| -> BTreeMap<Vec<Line>, FieldElem> {
        p.classes
            .iter()
            .map(|c| {
                let mut ls = c.lines.clone();
                ls.sort_unstable();
                (ls, c.color)
            })
            .collect()
    };
    let (sa, sb) = (spreads(a), spreads(b));
    let shared = sa.keys().filter(|k| sb.contains_key(*k)).count();
    if shared != sa.len() || shared != sb.len() {
        return ParallelismComparison::Different { shared };
    }
    let moved = sa.iter().filter(|(k, c)| sb[*k] != **c).count();
    if moved == 0 {
        ParallelismComparison::Equal
    } else {
        ParallelismComparison::Relabeled { moved }
    }
}

/// Partition of the Hamming code into translates of an arbitrary code given
/// by its word list (length 15 only).
#[derive(Debug, Clone)]
pub struct CodePartition {
    /// Word added to the input code so that it contains zero.
    pub shift: CodewordXY,
    pub parts: BTreeMap<TranslateLabel, Vec<CodewordXY>>,
}

/// Partitions the Hamming code by the translates `B ⊕ t_α` of
/// `B = code ⊕ w`, where `w` is zero if the code contains it and the first
/// word otherwise.
pub fn partition_by_code(n: u32, code: &[CodewordXY]) -> Result<CodePartition> {
    let first = code.first().ok_or(Error::TooFewWords)?;
    if let Some(c) = code.iter().find(|c| c.n != n) {
        return Err(Error::DimensionMismatch(c.n, n));
    }
    if !code.iter().all(hamming_contains) {
        return Err(Error::NotInHamming);
    }
    let zero = CodewordXY::zero(n);
    let shift = if code.contains(&zero) {
        zero
    } else {
        first.clone()
    };
    let base: HashSet<CodewordXY> = code.iter().map(|c| c.xor(&shift)).collect();
    let ts = translates(n);
    let mut parts: BTreeMap<TranslateLabel, Vec<CodewordXY>> = BTreeMap::new();
    for c in enumerate_hamming(n)? {
        let mut labels = Vec::new();
        if base.contains(&c) {
            labels.push(TranslateLabel::Base);
        }
        for (&a, t) in ts.labels.iter().zip(&ts.vectors) {
            if base.contains(&c.xor(t)) {
                labels.push(TranslateLabel::Alpha(a));
            }
        }
        match labels[..] {
            [l] => parts.entry(l).or_default().push(c),
            [] => return Err(Error::NoTranslateFound),
            _ => return Err(Error::MultipleTranslatesFound(labels.len())),
        }
    }
    Ok(CodePartition { shift, parts })
}

/// Outcome of labelling a batch of random Hamming words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub n: u32,
    pub words: usize,
    /// Words per label; `Base` included.
    pub per_label: BTreeMap<TranslateLabel, usize>,
}

/// Labels `count` random Hamming words; any failure of uniqueness aborts.
pub fn audit_partition<R: Rng + ?Sized>(f: &Vbf, count: usize, rng: &mut R) -> Result<AuditReport> {
    let words: Vec<CodewordXY> = (0..count).map(|_| random_hamming_word(f.n(), rng)).collect();
    let labels: Vec<TranslateLabel> = words
        .par_iter()
        .map(|c| assign_translate(f, c))
        .collect::<Result<_>>()?;
    let mut per_label = BTreeMap::new();
    for l in labels {
        *per_label.entry(l).or_insert(0) += 1;
    }
    Ok(AuditReport {
        n: f.n(),
        words: count,
        per_label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::build_parallelism;
    use crate::geometry::{verify_parallelism, verify_spread};
    use crate::gf2::FieldCtx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cube(n: u32) -> Vbf {
        Vbf::power(FieldCtx::with_default_modulus(n).unwrap(), 3)
    }

    fn xy(n: u32, xs: &[u32], ys: &[u32]) -> CodewordXY {
        CodewordXY::from_sets(n, xs, ys).unwrap()
    }

    #[test]
    fn views_agree() {
        let c = xy(3, &[1, 5], &[0, 6]);
        assert_eq!(c.points(), vec![1, 5, 8, 14]);
        assert_eq!(c.x_set(), vec![1, 5]);
        assert_eq!(c.y_set(), vec![0, 6]);
        let bits = c.to_bit_vector();
        assert_eq!(bits.len(), 15);
        let on: Vec<usize> = (0..15).filter(|&i| bits[i]).collect();
        // X coordinates 1..7 occupy indices 0..6, Y coordinates 0..7 indices 7..14.
        assert_eq!(on, vec![0, 4, 7, 13]);
        assert_eq!(CodewordXY::from_bit_vector(3, &bits).unwrap(), c);
        assert!(CodewordXY::from_sets(3, &[0], &[]).is_err());
        assert!(CodewordXY::from_sets(3, &[], &[8]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = xy(3, &[1, 5], &[0, 6]);
        assert_eq!(c.to_string(), "22:41");
        assert_eq!(CodewordXY::parse(3, "22:41").unwrap(), c);
        assert_eq!(CodewordXY::parse(3, "0x22:0x41").unwrap(), c);
        assert_eq!(CodewordXY::zero(3).to_string(), "0:0");
        assert!(CodewordXY::parse(3, "1:0").is_err());
        assert!(CodewordXY::parse(3, "100:0").is_err());
        assert!(CodewordXY::parse(3, "22").is_err());
        let n = 9;
        let big = xy(n, &[1, 511], &[0, 300, 511]);
        assert_eq!(CodewordXY::parse(n, &big.to_string()).unwrap(), big);
        let words = vec![c.clone(), CodewordXY::zero(3)];
        let text = format!("# comment\n{}\n", format_codewords(&words));
        assert_eq!(parse_codewords(3, &text).unwrap(), words);
    }

    #[test]
    fn hamming_membership() {
        for (a, b) in [(1, 2), (3, 5), (6, 7)] {
            assert!(hamming_contains(&xy(3, &[a, b, a ^ b], &[])));
        }
        assert!(hamming_contains(&CodewordXY::zero(3)));
        assert!(!hamming_contains(&xy(3, &[4], &[])));
        assert!(!hamming_contains(&xy(3, &[], &[2])));
    }

    #[test]
    fn preparata_membership() {
        let f = cube(3);
        assert!(preparata_contains(&f, &CodewordXY::zero(3)));
        assert!(!preparata_contains(&f, &xy(3, &[5], &[5])));
        for a in 1..8 {
            assert!(!preparata_contains(&f, &xy(3, &[a], &[0, a])));
            assert!(hamming_contains(&xy(3, &[a], &[0, a])));
        }
    }

    #[test]
    fn length_15_codes() {
        let ham = enumerate_hamming(3).unwrap();
        assert_eq!(ham.len(), 2048);
        assert!(ham.iter().all(hamming_contains));
        assert_eq!(ham.iter().collect::<HashSet<_>>().len(), 2048);
        assert_eq!(min_distance(&ham).unwrap(), 3);

        let f = cube(3);
        let p = enumerate_preparata(&f).unwrap();
        assert_eq!(p.len(), 256);
        assert!(p.contains(&CodewordXY::zero(3)));
        assert_eq!(min_distance(&p).unwrap(), 5);
        assert_eq!(p, enumerate_preparata(&f).unwrap());

        assert!(matches!(enumerate_preparata(&cube(5)), Err(Error::DegreeTooLarge { .. })));
        assert!(matches!(enumerate_hamming(4), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn min_distance_edge_cases() {
        let z = CodewordXY::zero(3);
        assert_eq!(min_distance(&[z.clone(), z.clone()]).unwrap(), 0);
        assert_eq!(min_distance(&[z]), Err(Error::TooFewWords));
    }

    #[test]
    fn translate_vectors() {
        for n in [3, 5] {
            let ts = translates(n);
            assert_eq!(ts.labels.len(), (1 << n) - 1);
            assert_eq!(ts.base_point, 1 << n);
            for (&a, t) in ts.labels.iter().zip(&ts.vectors) {
                assert_eq!(t.weight(), 3);
                assert!(hamming_contains(t));
                assert_eq!(t.x_set(), vec![a]);
                assert_eq!(t.y_set(), vec![0, a]);
            }
            for i in 0..ts.vectors.len() {
                for j in i + 1..ts.vectors.len() {
                    assert_eq!(ts.vectors[i].xor(&ts.vectors[j]).weight(), 4);
                }
            }
        }
    }

    #[test]
    fn partition_at_length_15() {
        let f = cube(3);
        let p: HashSet<CodewordXY> = enumerate_preparata(&f).unwrap().into_iter().collect();
        let mut parts: BTreeMap<TranslateLabel, Vec<CodewordXY>> = BTreeMap::new();
        for c in enumerate_hamming(3).unwrap() {
            let label = assign_translate(&f, &c).unwrap();
            assert_eq!(label, assign_translate_by_membership(&f, &c).unwrap());
            parts.entry(label).or_default().push(c);
        }
        assert_eq!(parts.len(), 8);
        for (label, words) in &parts {
            assert_eq!(words.len(), 256);
            assert_eq!(min_distance(words).unwrap(), 5);
            let shifted: HashSet<CodewordXY> = match label {
                TranslateLabel::Base => words.iter().cloned().collect(),
                TranslateLabel::Alpha(a) => {
                    let t = translate_vector(3, *a);
                    words.iter().map(|w| w.xor(&t)).collect()
                }
            };
            assert_eq!(shifted, p);
        }
        let from_list = partition_by_code(3, &p.iter().cloned().collect::<Vec<_>>()).unwrap();
        assert!(from_list.shift.is_zero());
        assert_eq!(from_list.parts.len(), 8);
        for (label, words) in &from_list.parts {
            let mut expect = parts[label].clone();
            let mut got = words.clone();
            expect.sort();
            got.sort();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn shifted_code_partition() {
        let f = cube(3);
        let p = enumerate_preparata(&f).unwrap();
        let t = translate_vector(3, 3);
        let moved: Vec<CodewordXY> = p.iter().map(|c| c.xor(&t)).collect();
        let part = partition_by_code(3, &moved).unwrap();
        assert!(!part.shift.is_zero());
        assert_eq!(part.parts.len(), 8);
        assert!(part.parts.values().all(|w| w.len() == 256));
        let outside = vec![xy(3, &[1], &[])];
        assert_eq!(partition_by_code(3, &outside).unwrap_err(), Error::NotInHamming);
    }

    #[test]
    fn assignment_examples() {
        for n in [3, 5, 7] {
            let f = cube(n);
            assert_eq!(assign_translate(&f, &CodewordXY::zero(n)).unwrap(), TranslateLabel::Base);
            for a in 1..1u32 << n {
                assert_eq!(
                    assign_translate(&f, &translate_vector(n, a)).unwrap(),
                    TranslateLabel::Alpha(a)
                );
            }
        }
        let f = cube(3);
        assert_eq!(assign_translate(&f, &xy(3, &[1], &[])), Err(Error::NotInHamming));
        // x^3 is 3-to-1 on the nonzero cubes of F_16.
        let not_perm = Vbf::power(FieldCtx::with_default_modulus(4).unwrap(), 3);
        let results: Vec<_> = all_lines(4)
            .iter()
            .map(|l| assign_translate(&not_perm, &CodewordXY::from_line(4, l)))
            .collect();
        assert!(results.contains(&Err(Error::MultipleTranslatesFound(3))));
        assert!(results.contains(&Err(Error::NoTranslateFound)));
    }

    #[test]
    fn random_audit_length_63() {
        let f = cube(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let report = audit_partition(&f, 10_000, &mut rng).unwrap();
        assert_eq!(report.per_label.values().sum::<usize>(), 10_000);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let c = random_hamming_word(5, &mut rng);
            assert_eq!(assign_translate(&f, &c), assign_translate_by_membership(&f, &c));
        }
    }

    #[test]
    fn weight_three_words_are_lines() {
        for n in [3, 5] {
            let size = space_size(n) as Point;
            let mut count = 0;
            for p in 1..size {
                for q in p + 1..size {
                    for r in q + 1..size {
                        let c = CodewordXY::from_points(n, &[p, q, r]).unwrap();
                        if hamming_contains(&c) {
                            count += 1;
                            assert!(c.as_line().is_some());
                        }
                    }
                }
            }
            assert_eq!(count, all_lines(n).len());
        }
        let weight3 = enumerate_hamming(3)
            .unwrap()
            .into_iter()
            .filter(|c| c.weight() == 3)
            .count();
        assert_eq!(weight3, 35);
    }

    #[test]
    fn partition_parallelisms() {
        for n in [3, 5] {
            let f = cube(n);
            let par = partition_parallelism(&f).unwrap();
            assert!(verify_parallelism(&par, n));
            assert_eq!(par.classes.len(), (1 << n) - 1);
            assert!(par.classes.iter().all(|c| c.color != 0 && verify_spread(&c.lines, n)));
            let colored = build_parallelism(&f).unwrap();
            let cmp = compare_parallelisms(&par, &colored);
            assert_eq!(cmp, compare_parallelisms(&colored, &par));
        }
        let f = cube(5);
        let par = build_parallelism(&f).unwrap();
        assert_eq!(compare_parallelisms(&par, &par), ParallelismComparison::Equal);
        let mut swapped = par.clone();
        let c0 = swapped.classes[0].color;
        swapped.classes[0].color = swapped.classes[1].color;
        swapped.classes[1].color = c0;
        assert_eq!(
            compare_parallelisms(&par, &swapped),
            ParallelismComparison::Relabeled { moved: 2 }
        );
    }
}
