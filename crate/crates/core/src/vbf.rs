//! Vectorial Boolean functions `F_{2^n} -> F_{2^n}` stored as lookup tables,
//! with the APN, permutation, crookedness and degree decision procedures.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{hyperplane_normal, Echelon, FieldCtx, FieldElem};

/// Largest degree accepted by [`CrookedMethod::Definition`].
pub const DEFINITION_METHOD_MAX_N: u32 = 10;
/// Largest degree accepted by [`CrookedMethod::Hyperplane`].
pub const HYPERPLANE_METHOD_MAX_N: u32 = 15;

/// A function on `F_{2^n}` given by its full table of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vbf {
    ctx: FieldCtx,
    lut: Vec<FieldElem>,
}

impl Vbf {
    pub fn from_lut(ctx: FieldCtx, lut: Vec<FieldElem>) -> Result<Self> {
        if lut.len() != ctx.size() {
            return Err(Error::Malformed(format!(
                "lookup table has {} entries, expected {}",
                lut.len(),
                ctx.size()
            )));
        }
        if let Some(v) = lut.iter().find(|&&v| v > ctx.mask()) {
            return Err(Error::Malformed(format!(
                "value {v:#x} is not an element of F_2^{}",
                ctx.n()
            )));
        }
        Ok(Vbf { ctx, lut })
    }

    pub fn from_fn(ctx: FieldCtx, f: impl Fn(FieldElem) -> FieldElem) -> Self {
        let lut = (0..ctx.size() as u32).map(|x| f(x) & ctx.mask()).collect();
        Vbf { ctx, lut }
    }

    /// The power map `x -> x^e`.
    pub fn power(ctx: FieldCtx, e: u64) -> Self {
        Self::from_fn(ctx, |x| ctx.pow(x, e))
    }

    pub fn identity(ctx: FieldCtx) -> Self {
        Self::from_fn(ctx, |x| x)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn lut(&self) -> &[FieldElem] {
        &self.lut
    }

    #[inline]
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        self.lut[x as usize]
    }

    /// Whether `f(0) = 0`.
    pub fn is_normalized(&self) -> bool {
        self.lut[0] == 0
    }
}

/// The image `H_a` of the derivative of `f` in direction `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeImage {
    pub direction: FieldElem,
    /// Sorted, without repetition.
    pub image: Vec<FieldElem>,
}

pub fn derivative_image(f: &Vbf, a: FieldElem) -> Result<DerivativeImage> {
    if a == 0 {
        return Err(Error::ZeroDirection);
    }
    let mut seen = vec![false; f.ctx.size()];
    for x in 0..f.ctx.size() as u32 {
        seen[(f.eval(x ^ a) ^ f.eval(x)) as usize] = true;
    }
    let image = (0..f.ctx.size() as u32)
        .filter(|&v| seen[v as usize])
        .collect();
    Ok(DerivativeImage {
        direction: a,
        image,
    })
}

/// `B_f(x, y) = f(x) + f(y) + f(x + y)`.
#[inline]
pub fn bf_eval(f: &Vbf, x: FieldElem, y: FieldElem) -> FieldElem {
    f.eval(x) ^ f.eval(y) ^ f.eval(x ^ y)
}

/// Every equation `f(x + a) + f(x) = b` with `a != 0` has 0 or 2 solutions.
pub fn is_apn(f: &Vbf) -> bool {
    let size = f.ctx.size();
    (1..size as u32).into_par_iter().all(|a| {
        let mut counts = vec![0u8; size];
        for x in 0..size as u32 {
            let d = (f.eval(x ^ a) ^ f.eval(x)) as usize;
            counts[d] += 1;
            if counts[d] > 2 {
                return false;
            }
        }
        counts.iter().all(|&c| c == 0 || c == 2)
    })
}

/// The same property through `B_f(a, x) = b` having 0 or 2 solutions.
pub fn is_apn_via_bf(f: &Vbf) -> bool {
    let size = f.ctx.size();
    (1..size as u32).into_par_iter().all(|a| {
        let mut counts = vec![0u32; size];
        for x in 0..size as u32 {
            counts[bf_eval(f, a, x) as usize] += 1;
        }
        counts.iter().all(|&c| c == 0 || c == 2)
    })
}

pub fn is_permutation(f: &Vbf) -> bool {
    let mut seen = vec![false; f.ctx.size()];
    for &v in &f.lut {
        if std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    true
}

/// How [`is_crooked`] decides crookedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrookedMethod {
    /// The three defining conditions, checked over all inputs.
    Definition,
    /// Every `H_a + f(a)` is a linear hyperplane and the `H_a` are distinct.
    Hyperplane,
}

pub fn is_crooked(f: &Vbf, method: CrookedMethod) -> Result<bool> {
    let n = f.n();
    match method {
        CrookedMethod::Definition => {
            if n > DEFINITION_METHOD_MAX_N {
                return Err(Error::DegreeTooLargeForMethod {
                    n,
                    method: "definition",
                    limit: DEFINITION_METHOD_MAX_N,
                });
            }
            Ok(crooked_by_definition(f))
        }
        CrookedMethod::Hyperplane => {
            if n > HYPERPLANE_METHOD_MAX_N {
                return Err(Error::DegreeTooLargeForMethod {
                    n,
                    method: "hyperplane",
                    limit: HYPERPLANE_METHOD_MAX_N,
                });
            }
            Ok(f.is_normalized() && derivative_hyperplanes(f).is_some_and(all_distinct))
        }
    }
}

fn all_distinct(mut normals: Vec<u64>) -> bool {
    let len = normals.len();
    normals.sort_unstable();
    normals.dedup();
    normals.len() == len
}

fn crooked_by_definition(f: &Vbf) -> bool {
    if !f.is_normalized() {
        return false;
    }
    let size = f.ctx.size() as u32;
    // (2): f(x) + f(y) + f(z) + f(x+y+z) != 0 for distinct x, y, z. The
    // fourth point x+y+z can only coincide with x, y or z when two of them
    // are equal, which the loop bounds already exclude.
    let four_point = (0..size).into_par_iter().all(|x| {
        for y in x + 1..size {
            let fxy = f.eval(x) ^ f.eval(y);
            for z in y + 1..size {
                let w = x ^ y ^ z;
                if w == x || w == y || w == z {
                    continue;
                }
                if fxy ^ f.eval(z) ^ f.eval(w) == 0 {
                    return false;
                }
            }
        }
        true
    });
    if !four_point {
        return false;
    }
    // (3): D_a(x) + D_a(y) + D_a(z) != 0 for all x, y, z. For fixed x, y the
    // sum vanishes for some z exactly when D_a(x) + D_a(y) lies in the image
    // of D_a, so the z loop is a table lookup.
    (1..size).into_par_iter().all(|a| {
        let d: Vec<FieldElem> = (0..size).map(|x| f.eval(x ^ a) ^ f.eval(x)).collect();
        let mut in_image = vec![false; size as usize];
        for &v in &d {
            in_image[v as usize] = true;
        }
        d.iter()
            .all(|&dx| d.iter().all(|&dy| !in_image[(dx ^ dy) as usize]))
    })
}

/// For each direction `a = 1..2^n`, the normal vector of the hyperplane
/// `H_a + f(a)`, or `None` as soon as some `H_a + f(a)` is not a hyperplane.
pub fn derivative_hyperplanes(f: &Vbf) -> Option<Vec<u64>> {
    let size = f.ctx.size() as u32;
    (1..size)
        .into_par_iter()
        .map_init(
            || vec![0u64; (size as usize).div_ceil(64)],
            |seen, a| derivative_hyperplane_normal(f, a, seen),
        )
        .collect()
}

/// Normal of `H_a + f(a)` when it is a hyperplane. `seen` is scratch space.
fn derivative_hyperplane_normal(f: &Vbf, a: FieldElem, seen: &mut [u64]) -> Option<u64> {
    let n = f.n();
    seen.iter_mut().for_each(|w| *w = 0);
    let fa = f.eval(a) ^ f.eval(0);
    // D_a(x) = D_a(x + a): visit one x from each pair.
    let top = 1u32 << (31 - a.leading_zeros());
    let mut ech = Echelon::new();
    let mut normal: Option<u64> = None;
    let mut count = 0usize;
    for x in 0..f.ctx.size() as u32 {
        if x & top != 0 {
            continue;
        }
        let d = f.eval(x ^ a) ^ f.eval(x);
        let (word, bit) = ((d >> 6) as usize, d & 63);
        if seen[word] >> bit & 1 == 0 {
            seen[word] |= 1 << bit;
            count += 1;
        }
        let w = (d ^ fa) as u64;
        match normal {
            Some(u) => {
                if (u & w).count_ones() & 1 != 0 {
                    return None;
                }
            }
            None => {
                ech.insert(w);
                if ech.rank() + 1 == n as usize {
                    normal = hyperplane_normal(&ech.basis(), n);
                } else if ech.rank() >= n as usize {
                    return None;
                }
            }
        }
    }
    // |H_a| = 2^(n-1) inside a span of dimension n-1 forces equality.
    if count != (1usize << (n - 1)) {
        return None;
    }
    normal
}

/// Maximum algebraic degree over the coordinate functions, from the binary
/// Möbius transform. The zero function has degree 0.
pub fn algebraic_degree(f: &Vbf) -> u32 {
    let mut anf = f.lut.clone();
    let size = anf.len();
    // XOR is coordinatewise, so one pass transforms all n coordinates.
    let mut step = 1;
    while step < size {
        for x in 0..size {
            if x & step != 0 {
                anf[x] ^= anf[x ^ step];
            }
        }
        step <<= 1;
    }
    anf.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(u, _)| u.count_ones())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldCtx {
        FieldCtx::new(3, 0b1011).unwrap()
    }

    fn field(n: u32) -> FieldCtx {
        FieldCtx::with_default_modulus(n).unwrap()
    }

    /// Per-coordinate ANF by subset sums, straight from the definition.
    fn degree_by_subset_sums(f: &Vbf) -> u32 {
        let size = f.ctx().size();
        let mut best = 0;
        for bit in 0..f.n() {
            for u in 0..size {
                let coeff = (0..size)
                    .filter(|&x| x & u == x)
                    .fold(0, |acc, x| acc ^ (f.eval(x as u32) >> bit & 1));
                if coeff != 0 {
                    best = best.max(u.count_ones());
                }
            }
        }
        best
    }

    /// Literal crookedness: all three conditions with a full z loop.
    fn crooked_literal(f: &Vbf) -> bool {
        let size = f.ctx().size() as u32;
        if f.eval(0) != 0 {
            return false;
        }
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if x != y && y != z && x != z && f.eval(x) ^ f.eval(y) ^ f.eval(z) ^ f.eval(x ^ y ^ z) == 0 {
                        return false;
                    }
                }
            }
        }
        for a in 1..size {
            for x in 0..size {
                for y in 0..size {
                    for z in 0..size {
                        let s = f.eval(x) ^ f.eval(y) ^ f.eval(z) ^ f.eval(x ^ a) ^ f.eval(y ^ a) ^ f.eval(z ^ a);
                        if s == 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn cube_lut_over_f8() {
        let f = Vbf::power(f8(), 3);
        assert_eq!(f.lut(), &[0, 1, 3, 4, 5, 6, 7, 2]);
    }

    #[test]
    fn derivative_image_examples() {
        let f = Vbf::power(f8(), 3);
        assert_eq!(derivative_image(&f, 1).unwrap().image, vec![1, 3, 5, 7]);
        let id = Vbf::identity(field(5));
        for a in 1..32 {
            assert_eq!(derivative_image(&id, a).unwrap().image, vec![a]);
        }
        let cube = Vbf::power(field(5), 3);
        for a in 1..32 {
            assert_eq!(derivative_image(&cube, a).unwrap().image.len(), 16);
        }
        assert_eq!(derivative_image(&cube, 0), Err(Error::ZeroDirection));
    }

    #[test]
    fn bf_examples() {
        let f = Vbf::power(f8(), 3);
        assert_eq!(bf_eval(&f, 0b001, 0b010), 6);
        for x in 0..8 {
            assert_eq!(bf_eval(&f, x, 0), 0);
            assert_eq!(bf_eval(&f, x, x), 0);
        }
    }

    #[test]
    fn apn_examples() {
        assert!(is_apn(&Vbf::power(f8(), 3)));
        for n in 2..=6 {
            assert!(!is_apn(&Vbf::identity(field(n))));
        }
        let inv16 = Vbf::power(field(4), 14);
        assert!(!is_apn(&inv16));
        assert!(!is_apn_via_bf(&inv16));
        assert!(is_apn_via_bf(&Vbf::power(f8(), 3)));
    }

    #[test]
    fn permutation_examples() {
        assert!(is_permutation(&Vbf::power(field(5), 3)));
        let cube16 = Vbf::power(field(4), 3);
        assert!(!is_permutation(&cube16));
        let mut image = cube16.lut().to_vec();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image.len(), 6);
        assert!(!is_permutation(&Vbf::from_fn(field(3), |_| 0)));
    }

    #[test]
    fn crooked_examples() {
        let cube8 = Vbf::power(f8(), 3);
        assert!(is_crooked(&cube8, CrookedMethod::Definition).unwrap());
        assert!(is_crooked(&cube8, CrookedMethod::Hyperplane).unwrap());
        let cube16 = Vbf::power(field(4), 3);
        assert!(!is_crooked(&cube16, CrookedMethod::Hyperplane).unwrap());
        assert!(!is_crooked(&cube16, CrookedMethod::Definition).unwrap());
        let inv32 = Vbf::power(field(5), 30);
        assert!(is_apn(&inv32));
        assert!(!is_crooked(&inv32, CrookedMethod::Hyperplane).unwrap());
        assert!(!is_crooked(&inv32, CrookedMethod::Definition).unwrap());
    }

    #[test]
    fn crooked_method_limits() {
        let big = Vbf::power(field(11), 3);
        assert!(matches!(
            is_crooked(&big, CrookedMethod::Definition),
            Err(Error::DegreeTooLargeForMethod { .. })
        ));
        let bigger = Vbf::power(field(16), 3);
        assert!(matches!(
            is_crooked(&bigger, CrookedMethod::Hyperplane),
            Err(Error::DegreeTooLargeForMethod { .. })
        ));
    }

    #[test]
    fn unnormalized_is_not_crooked() {
        let ctx = f8();
        let shifted = Vbf::from_fn(ctx, |x| ctx.pow(x, 3) ^ 1);
        assert!(!is_crooked(&shifted, CrookedMethod::Definition).unwrap());
        assert!(!is_crooked(&shifted, CrookedMethod::Hyperplane).unwrap());
        // APN is invariant under adding a constant.
        assert!(is_apn(&shifted));
    }

    #[test]
    fn fast_definition_matches_literal_loops() {
        for n in 2..=4 {
            let ctx = field(n);
            for e in 1..ctx.size() as u64 {
                let f = Vbf::power(ctx, e);
                assert_eq!(crooked_by_definition(&f), crooked_literal(&f), "n={n} e={e}");
            }
        }
    }

    #[test]
    fn methods_agree_on_all_power_maps() {
        for n in 1..=6 {
            let ctx = field(n);
            for e in 0..ctx.size() as u64 {
                let f = Vbf::power(ctx, e);
                let f = Vbf::from_fn(ctx, |x| if x == 0 { 0 } else { f.eval(x) });
                assert_eq!(
                    is_crooked(&f, CrookedMethod::Definition).unwrap(),
                    is_crooked(&f, CrookedMethod::Hyperplane).unwrap(),
                    "n={n} e={e}"
                );
            }
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(algebraic_degree(&Vbf::power(field(5), 3)), 2);
        assert_eq!(algebraic_degree(&Vbf::identity(field(5))), 1);
        assert_eq!(algebraic_degree(&Vbf::power(field(5), 30)), 4);
        assert_eq!(algebraic_degree(&Vbf::from_fn(field(4), |_| 0)), 0);
        for n in 1..=5 {
            let ctx = field(n);
            for e in 0..ctx.size() as u64 {
                let f = Vbf::power(ctx, e);
                assert_eq!(algebraic_degree(&f), degree_by_subset_sums(&f));
            }
        }
    }

    #[test]
    fn apn_derivative_values_have_multiplicity_two() {
        for n in [3, 5, 7, 9] {
            let f = Vbf::power(field(n), 3);
            assert!(is_apn(&f));
            let size = f.ctx().size() as u32;
            for a in 1..size {
                let mut counts = vec![0u32; size as usize];
                for x in 0..size {
                    counts[(f.eval(x ^ a) ^ f.eval(x)) as usize] += 1;
                }
                assert!(counts.iter().all(|&c| c == 0 || c == 2));
            }
        }
    }

    #[test]
    fn bf_symmetric_and_bilinear_for_quadratics() {
        for n in [3, 5, 7] {
            let ctx = field(n);
            let size = ctx.size() as u32;
            let quad = Vbf::power(ctx, 5);
            assert_eq!(algebraic_degree(&quad), 2);
            let inv = Vbf::power(ctx, ctx.size() as u64 - 2);
            for x in 0..size {
                for y in 0..size {
                    assert_eq!(bf_eval(&quad, x, y), bf_eval(&quad, y, x));
                    assert_eq!(bf_eval(&inv, x, y), bf_eval(&inv, y, x));
                }
            }
            for x in 0..size {
                for y in 0..size {
                    for z in 0..size {
                        assert_eq!(
                            bf_eval(&quad, x, y ^ z),
                            bf_eval(&quad, x, y) ^ bf_eval(&quad, x, z)
                        );
                    }
                }
            }
        }
    }
}
