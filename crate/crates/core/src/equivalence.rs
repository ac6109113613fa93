//! Collineations of `PG(n, 2)`, equivalence witnesses `(σ, κ)` with
//! `σ c_{f'} = c_f κ`, and a backtracking search for them.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::cf_eval;
use crate::error::{Error, Result};
use crate::geometry::{parallelism_defect, space_size, Parallelism, Point, SpreadLookup};
use crate::gf2::{parse_hex, BinMatrix, FieldElem};
use crate::vbf::Vbf;

/// Node limit used when none is given.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000_000;

/// An invertible linear map of `F_2^(n+1)` in block form
/// `κ(x, x1) = (Ax + α x1, Bx + β x1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Collineation {
    n: u32,
    m: BinMatrix,
}

impl Collineation {
    pub fn new(n: u32, m: BinMatrix) -> Result<Self> {
        let dim = n as usize + 1;
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        m.invert()?;
        Ok(Collineation { n, m })
    }

    pub fn identity(n: u32) -> Self {
        Collineation {
            n,
            m: BinMatrix::identity(n as usize + 1),
        }
    }

    /// Assembles `[[A, α], [B, β]]`; `b` is the row vector `B` as a mask.
    pub fn from_blocks(a: &BinMatrix, alpha: FieldElem, b: FieldElem, beta: bool) -> Result<Self> {
        let n = a.rows() as u32;
        if a.cols() != a.rows() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let mut rows: Vec<u64> = (0..n as usize)
            .map(|i| a.row(i) | ((alpha as u64 >> i) & 1) << n)
            .collect();
        rows.push(b as u64 | (beta as u64) << n);
        Self::new(n, BinMatrix::from_rows(n as usize + 1, rows)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn matrix(&self) -> &BinMatrix {
        &self.m
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.m.apply(p as u64) as Point
    }

    /// Whether `κ(ℋ) = ℋ`, i.e. the block `B` vanishes.
    pub fn fixes_h(&self) -> bool {
        self.m.row(self.n as usize) & ((1u64 << self.n) - 1) == 0
    }

    pub fn inverse(&self) -> Collineation {
        Collineation {
            n: self.n,
            m: self.m.invert().expect("collineations are invertible"),
        }
    }
}

/// A color permutation `σ` (with `σ(0) = 0`) and a collineation `κ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub sigma: Vec<FieldElem>,
    pub kappa: Collineation,
}

impl Witness {
    pub fn new(sigma: Vec<FieldElem>, kappa: Collineation) -> Result<Self> {
        let size = 1usize << kappa.n();
        if sigma.len() != size {
            return Err(Error::Malformed(format!(
                "sigma has {} entries, expected {size}",
                sigma.len()
            )));
        }
        let mut seen = vec![false; size];
        for &v in &sigma {
            if v as usize >= size || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::Malformed("sigma is not a permutation".into()));
            }
        }
        if sigma[0] != 0 {
            return Err(Error::Malformed("sigma does not fix 0".into()));
        }
        Ok(Witness { sigma, kappa })
    }

    pub fn identity(n: u32) -> Self {
        Witness {
            sigma: (0..1u32 << n).collect(),
            kappa: Collineation::identity(n),
        }
    }

    pub fn n(&self) -> u32 {
        self.kappa.n()
    }

    /// `σ(u + v) = σ(u) + σ(v)` for all `u, v`.
    pub fn sigma_is_additive(&self) -> bool {
        let s = &self.sigma;
        (0..s.len()).all(|u| (0..s.len()).all(|v| s[u ^ v] == s[u] ^ s[v]))
    }

    pub fn to_json(&self) -> String {
        let file = WitnessFile {
            n: self.n(),
            kappa: self
                .kappa
                .matrix()
                .row_words()
                .iter()
                .map(|r| format!("{r:#x}"))
                .collect(),
            sigma: self.sigma.iter().map(|v| format!("{v:#x}")).collect(),
        };
        serde_json::to_string_pretty(&file).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WitnessFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let hex = |s: &String| {
            parse_hex(s).ok_or_else(|| Error::Malformed(format!("bad hex value {s:?}")))
        };
        let rows = file.kappa.iter().map(hex).collect::<Result<Vec<u64>>>()?;
        if rows.len() != file.n as usize + 1 {
            return Err(Error::Malformed(format!(
                "kappa has {} rows, expected {}",
                rows.len(),
                file.n + 1
            )));
        }
        let m = BinMatrix::from_rows(file.n as usize + 1, rows)?;
        let sigma = file
            .sigma
            .iter()
            .map(|s| hex(s).map(|v| v as FieldElem))
            .collect::<Result<Vec<_>>>()?;
        Witness::new(sigma, Collineation::new(file.n, m)?)
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    n: u32,
    kappa: Vec<String>,
    sigma: Vec<String>,
}

/// `σ(c_{f'}(p, q)) = c_f(κp, κq)` for every pair of points.
pub fn verify_witness(f: &Vbf, f_prime: &Vbf, w: &Witness) -> bool {
    let n = f.n();
    if f_prime.n() != n || w.n() != n {
        return false;
    }
    let size = space_size(n) as Point;
    let image: Vec<Point> = (0..size).map(|p| w.kappa.apply(p)).collect();
    (0..size).into_par_iter().all(|p| {
        (p..size).all(|q| {
            w.sigma[cf_eval(f_prime, p, q) as usize]
                == cf_eval(f, image[p as usize], image[q as usize])
        })
    })
}

/// The same relation checked on labelled parallelisms: every line of `Π2`
/// with color `u` is sent by `κ` to a line of `Π1` with color `σ(u)`.
pub fn verify_parallelism_witness(p1: &Parallelism, p2: &Parallelism, w: &Witness) -> bool {
    let n = p1.n;
    if p2.n != n || w.n() != n {
        return false;
    }
    let lookup = p1.spread_lookup();
    let colors: Vec<FieldElem> = p1.classes.iter().map(|c| c.color).collect();
    p2.classes.iter().all(|class| {
        class.lines.iter().all(|l| {
            let [p, q, _] = l.points();
            let s = lookup.spread_of(w.kappa.apply(p), w.kappa.apply(q));
            s != u32::MAX && colors[s as usize] == w.sigma[class.color as usize]
        })
    })
}

fn linear_lut(m: &BinMatrix, n: u32) -> Vec<FieldElem> {
    (0..1u64 << n).map(|v| m.apply(v) as FieldElem).collect()
}

fn check_square(m: &BinMatrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Witness for `f' = L1 ∘ f ∘ L2`: `σ = L1^-1`, `κ = diag(L2, 1)`.
pub fn witness_from_linear(l1: &BinMatrix, l2: &BinMatrix) -> Result<Witness> {
    let n = l1.rows() as u32;
    check_square(l1, n as usize)?;
    check_square(l2, n as usize)?;
    let sigma = linear_lut(&l1.invert()?, n);
    let kappa = Collineation::from_blocks(l2, 0, 0, true)?;
    Witness::new(sigma, kappa)
}

/// Witness for `f'(x) = σ f(Ax + α) + σ f(α)`: color map `σ^-1`,
/// `κ(x, x1) = (Ax + α x1, x1)`. Valid for quadratic `f`.
pub fn witness_from_affine(sigma: &BinMatrix, a: &BinMatrix, alpha: FieldElem) -> Result<Witness> {
    let n = sigma.rows() as u32;
    check_square(sigma, n as usize)?;
    check_square(a, n as usize)?;
    let color = linear_lut(&sigma.invert()?, n);
    let kappa = Collineation::from_blocks(a, alpha, 0, true)?;
    Witness::new(color, kappa)
}

/// `x -> L1(f(L2 x))`.
pub fn linear_transform(f: &Vbf, l1: &BinMatrix, l2: &BinMatrix) -> Vbf {
    Vbf::from_fn(*f.ctx(), |x| {
        l1.apply(f.eval(l2.apply(x as u64) as FieldElem) as u64) as FieldElem
    })
}

/// `x -> σ f(Ax + α) + σ f(α)`.
pub fn affine_transform(f: &Vbf, sigma: &BinMatrix, a: &BinMatrix, alpha: FieldElem) -> Vbf {
    let shift = f.eval(alpha);
    Vbf::from_fn(*f.ctx(), |x| {
        let inner = a.apply(x as u64) as FieldElem ^ alpha;
        sigma.apply((f.eval(inner) ^ shift) as u64) as FieldElem
    })
}

/// Result of [`search_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Equivalent(Witness),
    Inequivalent,
    BudgetExceeded,
}

/// Search statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
}

const NONE: u32 = u32::MAX;

struct Searcher<'a> {
    n: u32,
    src: &'a SpreadLookup,
    dst: &'a SpreadLookup,
    /// Image of each point of the current span.
    image: Vec<Point>,
    /// Whether a point lies in the image of the current span.
    in_image: Vec<bool>,
    /// Spread map src -> dst and its inverse.
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    trail: Vec<u32>,
    nodes: u64,
    /// Nodes not yet added to `budget`.
    pending: u64,
    budget: &'a AtomicU64,
    limit: u64,
    abort: &'a AtomicBool,
    /// Index of the first-level subtree that owns this searcher.
    slot: usize,
    best: &'a AtomicUsize,
}

enum Walk {
    Found(Vec<Point>),
    Exhausted,
    Stopped,
}

impl Searcher<'_> {
    /// Extends `κ` to span `e_0..e_k` by sending `e_k` to `v`; returns false
    /// (with everything undone) if some line breaks the spread map.
    fn extend(&mut self, k: u32, v: Point) -> bool {
        let low = 1u32 << k;
        for p in 0..low {
            let img = self.image[p as usize] ^ v;
            self.image[(p | low) as usize] = img;
            self.in_image[img as usize] = true;
        }
        let mark = self.trail.len();
        for c in low..2 * low {
            for o in 1..low {
                if c > c ^ o {
                    continue;
                }
                let s = self.src.spread_of(o, c);
                let d = self
                    .dst
                    .spread_of(self.image[o as usize], self.image[c as usize]);
                let ok = match self.fwd[s as usize] {
                    NONE if self.bwd[d as usize] == NONE => {
                        self.fwd[s as usize] = d;
                        self.bwd[d as usize] = s;
                        self.trail.push(s);
                        true
                    }
                    mapped => mapped == d,
                };
                if !ok {
                    self.retract(k, mark);
                    return false;
                }
            }
        }
        true
    }

    fn retract(&mut self, k: u32, mark: usize) {
        for s in self.trail.drain(mark..) {
            self.bwd[self.fwd[s as usize] as usize] = NONE;
            self.fwd[s as usize] = NONE;
        }
        let low = 1u32 << k;
        for p in low..2 * low {
            self.in_image[self.image[p as usize] as usize] = false;
        }
    }

    fn walk(&mut self, k: u32, basis: &mut Vec<Point>) -> Walk {
        if k == self.n + 1 {
            return Walk::Found(basis.clone());
        }
        for v in 1..space_size(self.n) as Point {
            if self.in_image[v as usize] {
                continue;
            }
            self.nodes += 1;
            self.pending += 1;
            if self.pending == 4096 {
                self.budget.fetch_add(self.pending, Ordering::Relaxed);
                self.pending = 0;
                if self.best.load(Ordering::Relaxed) < self.slot {
                    return Walk::Stopped;
                }
            }
            if self.budget.load(Ordering::Relaxed) + self.pending > self.limit {
                self.abort.store(true, Ordering::Relaxed);
            }
            if self.abort.load(Ordering::Relaxed) {
                return Walk::Stopped;
            }
            let mark = self.trail.len();
            if !self.extend(k, v) {
                continue;
            }
            basis.push(v);
            match self.walk(k + 1, basis) {
                Walk::Exhausted => {}
                other => return other,
            }
            basis.pop();
            self.retract(k, mark);
        }
        Walk::Exhausted
    }
}

/// Looks for a collineation `κ` sending every spread of `p2` onto a spread
/// of `p1`. A returned witness satisfies `verify_witness(f1, f2, w)` when
/// `p1 = Π_{f1}` and `p2 = Π_{f2}`.
///
/// Images of the basis points `e_0, ..., e_n` are chosen in turn; after each
/// choice every line inside the new span is checked against the partial
/// spread map. The first-level choices run in parallel and the witness with
/// the smallest first image wins, so the result does not depend on the
/// thread count.
pub fn search_equivalence(
    p1: &Parallelism,
    p2: &Parallelism,
    budget: u64,
) -> Result<(SearchOutcome, SearchStats)> {
    if p1.n != p2.n {
        return Err(Error::DimensionMismatch(p1.n, p2.n));
    }
    let n = p1.n;
    for p in [p1, p2] {
        if let Some(why) = parallelism_defect(p, n) {
            return Err(Error::NotAParallelism(why));
        }
    }
    let dst = p1.spread_lookup();
    let src = p2.spread_lookup();
    let spreads = p1.classes.len();
    let size = space_size(n);
    let used = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let best = AtomicUsize::new(usize::MAX);

    let results: Vec<(Walk, u64)> = (1..size as Point)
        .into_par_iter()
        .map(|v0| {
            let slot = v0 as usize;
            let mut s = Searcher {
                n,
                src: &src,
                dst: &dst,
                image: vec![0; size],
                in_image: vec![false; size],
                fwd: vec![NONE; spreads],
                bwd: vec![NONE; spreads],
                trail: Vec::new(),
                nodes: 1,
                pending: 1,
                budget: &used,
                limit: budget,
                abort: &abort,
                slot,
                best: &best,
            };
            s.in_image[0] = true;
            s.extend(0, v0);
            let mut basis = vec![v0];
            let walk = s.walk(1, &mut basis);
            if matches!(walk, Walk::Found(_)) {
                best.fetch_min(slot, Ordering::Relaxed);
            }
            (walk, s.nodes)
        })
        .collect();

    let stats = SearchStats {
        nodes: results.iter().map(|r| r.1).sum(),
    };
    for (walk, _) in results {
        match walk {
            Walk::Exhausted => continue,
            Walk::Stopped => return Ok((SearchOutcome::BudgetExceeded, stats)),
            Walk::Found(basis) => {
                let w = witness_from_basis(p1, p2, &basis)?;
                if !verify_parallelism_witness(p1, p2, &w) {
                    return Err(Error::Malformed(
                        "search produced a witness that fails verification".into(),
                    ));
                }
                return Ok((SearchOutcome::Equivalent(w), stats));
            }
        }
    }
    Ok((SearchOutcome::Inequivalent, stats))
}

/// Reads `σ` off the spread map induced by the basis images.
fn witness_from_basis(p1: &Parallelism, p2: &Parallelism, basis: &[Point]) -> Result<Witness> {
    let n = p1.n;
    let cols: Vec<u64> = basis.iter().map(|&v| v as u64).collect();
    let kappa = Collineation::new(n, BinMatrix::from_columns(n as usize + 1, &cols))?;
    let lookup = p1.spread_lookup();
    let mut sigma = vec![0; 1 << n];
    for class in &p2.classes {
        let [p, q, _] = class.lines[0].points();
        let s = lookup.spread_of(kappa.apply(p), kappa.apply(q));
        sigma[class.color as usize] = p1.classes[s as usize].color;
    }
    Witness::new(sigma, kappa)
}
