//! Points, lines, spreads and parallelisms of `PG(n, 2)`.
//!
//! A point `(x, x1)` of `F_{2^n} x F_2` is the nonzero word `x1 << n | x`, so
//! the distinguished hyperplane `F_{2^n} x {0}` is the set of points with
//! the top bit clear.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{rank_and_span, FieldElem};

/// A nonzero vector of `F_2^(n+1)`.
pub type Point = u32;

pub fn point(x: FieldElem, x1: u32, n: u32) -> Point {
    (x1 & 1) << n | x
}

/// Splits a point into its `F_{2^n}` part and its last coordinate.
pub fn split_point(p: Point, n: u32) -> (FieldElem, u32) {
    (p & ((1 << n) - 1), p >> n & 1)
}

/// Number of points of `PG(n, 2)` plus one, i.e. `2^(n+1)`.
pub fn space_size(n: u32) -> usize {
    1usize << (n + 1)
}

/// A line `{p, q, p + q}`, stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Point; 3]", into = "[Point; 3]")]
pub struct Line([Point; 3]);

impl Line {
    /// The line through two distinct nonzero points.
    pub fn through(p: Point, q: Point) -> Line {
        debug_assert!(p != 0 && q != 0 && p != q);
        let mut pts = [p, q, p ^ q];
        pts.sort_unstable();
        Line(pts)
    }

    pub fn points(&self) -> [Point; 3] {
        self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    pub fn meets(&self, other: &Line) -> bool {
        self.0.iter().any(|&p| other.contains(p))
    }

    /// Index of the line among all lines of the space, as a pair of its two
    /// smallest points. Used for bitmap bookkeeping.
    fn key(&self, n: u32) -> usize {
        (self.0[0] as usize) << (n + 1) | self.0[1] as usize
    }
}

impl TryFrom<[Point; 3]> for Line {
    type Error = Error;

    fn try_from(mut pts: [Point; 3]) -> Result<Line> {
        pts.sort_unstable();
        if pts[0] == 0 || pts[0] == pts[1] || pts[0] ^ pts[1] != pts[2] {
            return Err(Error::Malformed(format!("{pts:?} is not a line")));
        }
        Ok(Line(pts))
    }
}

impl From<Line> for [Point; 3] {
    fn from(l: Line) -> Self {
        l.0
    }
}

/// Gaussian binomial coefficient `[b choose a]_q`; zero unless `0 <= a <= b`.
pub fn gaussian(q: u64, b: i64, a: i64) -> u128 {
    assert!(q >= 2, "gaussian coefficients need q >= 2");
    if a < 0 || a > b {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    // Each partial product is itself a Gaussian coefficient, so the division
    // is exact at every step.
    for i in 1..=a as u32 {
        let num = q
            .checked_pow((b - a) as u32 + i)
            .expect("gaussian coefficient overflows u128")
            - 1;
        let den = q.pow(i) - 1;
        acc = acc.checked_mul(num).expect("gaussian coefficient overflows u128") / den;
    }
    acc
}

/// Every line of `PG(n, 2)` exactly once, in lexicographic order.
pub fn all_lines(n: u32) -> Vec<Line> {
    let top = space_size(n) as Point;
    let mut out = Vec::with_capacity(gaussian(2, n as i64 + 1, 2) as usize);
    for p in 1..top {
        for q in p + 1..top {
            if p ^ q > q {
                out.push(Line([p, q, p ^ q]));
            }
        }
    }
    out
}

/// Lines are pairwise disjoint and cover every point.
pub fn verify_spread(lines: &[Line], n: u32) -> bool {
    let size = space_size(n);
    if lines.len() * 3 != size - 1 {
        return false;
    }
    let mut seen = vec![false; size];
    for l in lines {
        for p in l.points() {
            if p as usize >= size || std::mem::replace(&mut seen[p as usize], true) {
                return false;
            }
        }
    }
    true
}

/// One spread of a parallelism together with its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorClass {
    pub color: FieldElem,
    pub lines: Vec<Line>,
}

/// A partition of the lines of `PG(n, 2)` into labelled spreads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parallelism {
    pub n: u32,
    pub classes: Vec<ColorClass>,
}

impl Parallelism {
    /// Sorts classes by label and lines within each class.
    pub fn normalize(&mut self) {
        for c in &mut self.classes {
            c.lines.sort_unstable();
        }
        self.classes.sort_by_key(|c| c.color);
    }

    pub fn line_count(&self) -> usize {
        self.classes.iter().map(|c| c.lines.len()).sum()
    }

    /// Spread index of every line, keyed by the line's two smallest points.
    pub fn spread_lookup(&self) -> SpreadLookup {
        let size = space_size(self.n);
        let mut table = vec![u32::MAX; size * size];
        for (i, c) in self.classes.iter().enumerate() {
            for l in &c.lines {
                let [p, q, r] = l.points();
                for (a, b) in [(p, q), (p, r), (q, r)] {
                    table[a as usize * size + b as usize] = i as u32;
                    table[b as usize * size + a as usize] = i as u32;
                }
            }
        }
        SpreadLookup { size, table }
    }
}

/// Point-pair to spread-index table of a parallelism.
#[derive(Debug, Clone)]
pub struct SpreadLookup {
    size: usize,
    table: Vec<u32>,
}

impl SpreadLookup {
    /// Index of the spread containing the line through `p` and `q`.
    #[inline]
    pub fn spread_of(&self, p: Point, q: Point) -> u32 {
        self.table[p as usize * self.size + q as usize]
    }
}

/// Why a candidate fails to be a parallelism, or `None` if it is one.
pub fn parallelism_defect(par: &Parallelism, n: u32) -> Option<String> {
    if par.n != n {
        return Some(format!("parallelism is over PG({}, 2), expected PG({n}, 2)", par.n));
    }
    let expected_lines = gaussian(2, n as i64 + 1, 2) as usize;
    let expected_classes = (1usize << n) - 1;
    if par.classes.len() != expected_classes {
        return Some(format!(
            "{} spreads, expected {expected_classes}",
            par.classes.len()
        ));
    }
    let bad_spread = par
        .classes
        .par_iter()
        .position_first(|c| !verify_spread(&c.lines, n));
    if let Some(i) = bad_spread {
        return Some(format!("class {:#x} is not a spread", par.classes[i].color));
    }
    let size = space_size(n);
    let mut seen = vec![false; size * size];
    for c in &par.classes {
        for l in &c.lines {
            if std::mem::replace(&mut seen[l.key(n)], true) {
                return Some(format!("line {:?} appears twice", l.points()));
            }
        }
    }
    // Distinct valid lines, as many as there are lines: the union is all of them.
    let total = par.line_count();
    if total != expected_lines {
        return Some(format!("{total} lines, expected {expected_lines}"));
    }
    None
}

/// Each class is a spread, classes are line-disjoint, and together they
/// contain every line.
pub fn verify_parallelism(par: &Parallelism, n: u32) -> bool {
    parallelism_defect(par, n).is_none()
}

/// A linear hyperplane of `F_2^(n+1)`, given by its normal vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    n: u32,
    normal: u32,
}

impl Hyperplane {
    pub fn from_normal(normal: u32, n: u32) -> Result<Self> {
        if normal == 0 || normal as usize >= space_size(n) {
            return Err(Error::NotAHyperplane(format!(
                "normal {normal:#x} does not define a hyperplane of F_2^{}",
                n + 1
            )));
        }
        Ok(Hyperplane { n, normal })
    }

    /// Recovers the hyperplane from its nonzero points.
    pub fn from_points(points: &[Point], n: u32) -> Result<Self> {
        let width = n + 1;
        let vectors: Vec<u64> = points.iter().map(|&p| p as u64).collect();
        let (rank, basis) = rank_and_span(&vectors, width);
        if rank != n as usize {
            return Err(Error::NotAHyperplane(format!(
                "points span a space of dimension {rank}, expected {n}"
            )));
        }
        let mut distinct = points.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.first() == Some(&0) || distinct.len() != (1usize << n) - 1 {
            return Err(Error::NotAHyperplane(
                "point set is not all nonzero vectors of its span".into(),
            ));
        }
        let normal = crate::gf2::hyperplane_normal(&basis, width).expect("rank is width - 1");
        Ok(Hyperplane {
            n,
            normal: normal as u32,
        })
    }

    /// `F_{2^n} x {0}`.
    pub fn distinguished(n: u32) -> Self {
        Hyperplane { n, normal: 1 << n }
    }

    pub fn normal(&self) -> u32 {
        self.normal
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        (p & self.normal).count_ones() & 1 == 0
    }

    pub fn contains_line(&self, l: &Line) -> bool {
        l.points().iter().all(|&p| self.contains(p))
    }

    pub fn points(&self) -> Vec<Point> {
        (1..space_size(self.n) as Point)
            .filter(|&p| self.contains(p))
            .collect()
    }
}

/// All `2^(n+1) - 1` hyperplanes of `PG(n, 2)`.
pub fn all_hyperplanes(n: u32) -> impl Iterator<Item = Hyperplane> {
    (1..space_size(n) as u32).map(move |u| Hyperplane { n, normal: u })
}

/// Number of lines of `spread` lying inside `h`.
pub fn hyperplane_line_count(spread: &[Line], h: &Hyperplane) -> usize {
    spread.iter().filter(|l| h.contains_line(l)).count()
}
