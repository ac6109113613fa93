//! The coloring `c_f` of the lines of `PG(n, 2)` and the parallelism `Π_f`
//! formed by its color classes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    all_lines, parallelism_defect, space_size, split_point, ColorClass, Line, Parallelism, Point,
};
use crate::gf2::{rank_and_span, FieldElem};
use crate::vbf::Vbf;

/// Largest degree for which [`build_parallelism`] materializes every line.
pub const PARALLELISM_MAX_N: u32 = 9;

/// `c_f((x, x1), (y, y1)) = f(x + y) + f(x) + f(y) + f(x1 y + y1 x)`.
#[inline]
pub fn cf_eval(f: &Vbf, p: Point, q: Point) -> FieldElem {
    let n = f.n();
    let (x, x1) = split_point(p, n);
    let (y, y1) = split_point(q, n);
    let mixed = (if x1 == 1 { y } else { 0 }) ^ (if y1 == 1 { x } else { 0 });
    f.eval(x ^ y) ^ f.eval(x) ^ f.eval(y) ^ f.eval(mixed)
}

/// The common value of `c_f` on the three point pairs of `line`.
pub fn line_color(f: &Vbf, line: &Line) -> Result<FieldElem> {
    let [p, q, r] = line.points();
    let colors = [cf_eval(f, p, q), cf_eval(f, p, r), cf_eval(f, q, r)];
    if colors[0] != colors[1] || colors[0] != colors[2] {
        return Err(Error::InconsistentColoring {
            line: line.points(),
            colors,
        });
    }
    if colors[0] == 0 {
        return Err(Error::ZeroColor(line.points()));
    }
    Ok(colors[0])
}

/// Colors of `lines`, computed in parallel, in input order.
pub fn color_lines(f: &Vbf, lines: &[Line]) -> Result<Vec<FieldElem>> {
    lines.par_iter().map(|l| line_color(f, l)).collect()
}

/// Groups the lines of `PG(n, 2)` by color and checks that the classes form
/// a parallelism.
///
/// No crookedness test is made up front: any `f` whose classes turn out to be
/// a parallelism is accepted.
pub fn build_parallelism(f: &Vbf) -> Result<Parallelism> {
    let n = f.n();
    if n > PARALLELISM_MAX_N {
        return Err(Error::DegreeTooLarge {
            n,
            what: "parallelism construction",
            limit: PARALLELISM_MAX_N,
        });
    }
    let lines = all_lines(n);
    let colors = color_lines(f, &lines)?;
    let mut buckets: Vec<Vec<Line>> = vec![Vec::new(); 1 << n];
    for (l, c) in lines.into_iter().zip(colors) {
        buckets[c as usize].push(l);
    }
    let classes = buckets
        .into_iter()
        .enumerate()
        .filter(|(_, ls)| !ls.is_empty())
        .map(|(c, lines)| ColorClass {
            color: c as FieldElem,
            lines,
        })
        .collect();
    let par = Parallelism { n, classes };
    match parallelism_defect(&par, n) {
        None => Ok(par),
        Some(why) => Err(Error::NotAParallelism(why)),
    }
}

/// `{ c_f(p, q) : q in ℋ }`, sorted.
pub fn hyperplane_image(f: &Vbf, p: Point) -> Result<Vec<FieldElem>> {
    let n = f.n();
    if p == 0 || p >> n != 0 {
        return Err(Error::PointNotInHyperplane(p));
    }
    let mut seen = vec![false; 1 << n];
    for q in 0..1u32 << n {
        seen[cf_eval(f, p, q) as usize] = true;
    }
    Ok((0..1u32 << n).filter(|&v| seen[v as usize]).collect())
}

/// Dimension of the span of `values` in `F_2^n`.
pub fn span_rank(values: &[FieldElem], n: u32) -> usize {
    let v: Vec<u64> = values.iter().map(|&x| x as u64).collect();
    rank_and_span(&v, n).0
}

/// Two intersecting lines inside ℋ with colors `u` and `v`.
pub fn intersecting_lines_in_h(f: &Vbf, u: FieldElem, v: FieldElem) -> Option<(Line, Line)> {
    let n = f.n();
    let top = 1u32 << n;
    (1..top).find_map(|p| {
        let with = |c: FieldElem| {
            (1..top)
                .find(|&q| q != p && cf_eval(f, p, q) == c)
                .map(|q| Line::through(p, q))
        };
        Some((with(u)?, with(v)?))
    })
}

/// For the codimension-2 subspace `𝒞 = { p in ℋ : <p, w> = 0 }` (`w` a
/// nonzero `n`-bit word), the color of a spread with a line inside `𝒞` and
/// another line inside `ℋ` but not inside `𝒞`.
pub fn configuration_spread(par: &Parallelism, w: u32) -> Option<FieldElem> {
    let n = par.n;
    let in_h = |p: Point| p >> n == 0;
    let in_c = |p: Point| in_h(p) && (p & w).count_ones().is_multiple_of(2);
    par.classes
        .iter()
        .find(|class| {
            let inside_c = class.lines.iter().any(|l| l.points().iter().all(|&p| in_c(p)));
            let h_not_c = class.lines.iter().any(|l| {
                l.points().iter().all(|&p| in_h(p)) && !l.points().iter().all(|&p| in_c(p))
            });
            inside_c && h_not_c
        })
        .map(|c| c.color)
}

/// Whether `cf_eval(f, p, q) = 0` exactly when `p = 0`, `q = 0` or `p = q`.
pub fn zero_only_on_degenerate_pairs(f: &Vbf) -> bool {
    let size = space_size(f.n()) as Point;
    (0..size).into_par_iter().all(|p| {
        (0..size).all(|q| (cf_eval(f, p, q) == 0) == (p == 0 || q == 0 || p == q))
    })
}
