//! Arithmetic in `F_{2^n}` over a polynomial basis, and linear algebra over `F_2`.
//!
//! Field elements and vectors over `F_2` are plain machine words: bit `i` is
//! the coefficient of `x^i` (or the `i`-th coordinate).

use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// An element of `F_{2^n}`, stored as its `n` polynomial-basis coefficients.
pub type FieldElem = u32;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Environment variable naming an alternate modulus table.
pub const MODULI_ENV: &str = "CP_DEFAULT_MODULI";

/// Lowest irreducible polynomial (as an integer) of each degree 1..=24 with
/// nonzero constant term.
pub const DEFAULT_MODULI: [u32; 24] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021,
    0x100001b,
];

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `b` as polynomials over `F_2`. `b` must be nonzero.
pub fn poly_rem(mut a: u64, b: u64) -> u64 {
    assert!(b != 0, "polynomial division by zero");
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Carry-less product of two polynomials whose degrees sum to less than 64.
pub fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let n = poly_degree(poly);
    for d in 1..=n / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(poly, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// A concrete model of `F_{2^n}`: degree plus irreducible modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    n: u32,
    modulus: u32,
}

impl FieldCtx {
    /// Builds the field `F_2[x]/(modulus)`, rejecting reducible moduli.
    pub fn new(n: u32, modulus: u32) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        if modulus >> n != 1 || modulus & 1 == 0 {
            return Err(Error::BadModulus { n, modulus });
        }
        if !is_irreducible(modulus as u64) {
            return Err(Error::ReducibleModulus(modulus));
        }
        Ok(FieldCtx { n, modulus })
    }

    /// Uses the default modulus for degree `n`, honouring [`MODULI_ENV`].
    pub fn with_default_modulus(n: u32) -> Result<Self> {
        Self::new(n, default_modulus(n)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^n`.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Mask of valid element bits.
    pub fn mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a <= self.mask() && b <= self.mask());
        let n = self.n;
        let modulus = self.modulus;
        let top = 1u32 << (n - 1);
        let mut acc = 0u32;
        let mut a = a;
        let mut b = b;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            // a <- a * x mod m
            let carry = a & top != 0;
            a <<= 1;
            if carry {
                a ^= modulus;
            }
        }
        acc
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = 1;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, with `inv(0) = 0`.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        self.pow(a, (1u64 << self.n) - 2)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElem) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let group = (1u64 << self.n) - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        ord
    }

    /// Smallest element (in word order) generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let group = (1u64 << self.n) - 1;
        (1..=self.mask())
            .find(|&g| self.order(g) == group)
            .expect("a finite field always has a primitive element")
    }

    /// Matrix of `x -> x^(2^k)` acting on polynomial-basis coordinates.
    pub fn frobenius_matrix(&self, k: u32) -> BinMatrix {
        BinMatrix::from_linear_map(self.n as usize, |v| {
            let mut y = v as u32;
            for _ in 0..k {
                y = self.square(y);
            }
            y as u64
        })
    }
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parses a modulus table: one `<n> <hex modulus>` pair per line, `#` comments.
pub fn parse_moduli_table(text: &str) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = || Error::Malformed(format!("moduli table line {}: {raw:?}", lineno + 1));
        let n: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let m = parse_hex(parts.next().ok_or_else(bad)?).ok_or_else(bad)?;
        if parts.next().is_some() || m > u32::MAX as u64 {
            return Err(bad());
        }
        // Validates degree shape and irreducibility.
        FieldCtx::new(n, m as u32)?;
        out.push((n, m as u32));
    }
    Ok(out)
}

pub fn load_moduli_table(path: &Path) -> Result<Vec<(u32, u32)>> {
    parse_moduli_table(&std::fs::read_to_string(path)?)
}

/// The modulus used for degree `n` when none is given explicitly.
///
/// If [`MODULI_ENV`] names a table file that lists `n`, that entry wins;
/// otherwise the built-in table is used.
pub fn default_modulus(n: u32) -> Result<u32> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    if let Some(path) = std::env::var_os(MODULI_ENV) {
        let table = load_moduli_table(Path::new(&path))?;
        if let Some(&(_, m)) = table.iter().find(|(k, _)| *k == n) {
            return Ok(m);
        }
    }
    Ok(DEFAULT_MODULI[n as usize - 1])
}

/// Parses lowercase or uppercase hex with an optional `0x` prefix.
pub fn parse_hex(s: &str) -> Option<u64> {
    let s = s.trim();
    let s = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    u64::from_str_radix(s, 16).ok()
}

/// Incremental reduced row-echelon basis, indexed by pivot bit.
///
/// Every row has exactly one pivot bit set among all pivots, so reduction is
/// a single XOR per pivot bit present in the input.
#[derive(Debug, Clone)]
pub struct Echelon {
    pivots: [u64; 64],
    pivot_mask: u64,
    rank: usize,
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon {
            pivots: [0; 64],
            pivot_mask: 0,
            rank: 0,
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the current basis.
    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        let mut r = v;
        let mut hits = v & self.pivot_mask;
        while hits != 0 {
            r ^= self.pivots[hits.trailing_zeros() as usize];
            hits &= hits - 1;
        }
        r
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let bit = 1u64 << (63 - r.leading_zeros());
        let mut rows = self.pivot_mask;
        while rows != 0 {
            let k = rows.trailing_zeros() as usize;
            if self.pivots[k] & bit != 0 {
                self.pivots[k] ^= r;
            }
            rows &= rows - 1;
        }
        self.pivots[bit.trailing_zeros() as usize] = r;
        self.pivot_mask |= bit;
        self.rank += 1;
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Basis rows sorted by descending pivot.
    pub fn basis(&self) -> Vec<u64> {
        self.pivots.iter().rev().copied().filter(|&p| p != 0).collect()
    }
}

/// Rank of the `F_2`-span of `vectors` and its reduced row-echelon basis
/// (rows sorted by descending pivot bit). The basis depends only on the span.
pub fn rank_and_span(vectors: &[u64], width: u32) -> (usize, Vec<u64>) {
    debug_assert!(width <= 64);
    debug_assert!(vectors
        .iter()
        .all(|&v| width == 64 || v >> width == 0));
    let mut ech = Echelon::new();
    for &v in vectors {
        ech.insert(v);
    }
    (ech.rank(), ech.basis())
}

/// Normal vector `u` of a hyperplane given by a reduced echelon basis of
/// rank `width - 1`: the unique nonzero `u` with even `popcount(u & b)` for
/// every basis row `b`.
pub fn hyperplane_normal(basis: &[u64], width: u32) -> Option<u64> {
    if basis.len() + 1 != width as usize {
        return None;
    }
    let pivot_mask: u64 = basis.iter().map(|&b| 1u64 << (63 - b.leading_zeros())).sum();
    let full = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let free = full & !pivot_mask;
    debug_assert_eq!(free.count_ones(), 1);
    let mut u = free;
    for &b in basis {
        if b & free != 0 {
            u |= 1u64 << (63 - b.leading_zeros());
        }
    }
    Some(u)
}

/// Dense matrix over `F_2` with at most 64 columns; row `i` is a bitmask
/// whose bit `j` is entry `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64);
        BinMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i] = 1u64 << i;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > 64 || rows.iter().any(|&r| cols < 64 && r >> cols != 0) {
            return Err(Error::Malformed(format!(
                "row wider than {cols} columns"
            )));
        }
        Ok(BinMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Matrix of a linear map on `F_2^n` given by its action on words:
    /// column `j` is `map(e_j)`.
    pub fn from_linear_map(n: usize, map: impl Fn(u64) -> u64) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            let col = map(1u64 << j);
            for i in 0..n {
                if col >> i & 1 != 0 {
                    m.data[i] |= 1u64 << j;
                }
            }
        }
        m
    }

    /// Builds a matrix whose column `j` is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[u64]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..rows {
                if c >> i & 1 != 0 {
                    m.data[i] |= 1u64 << j;
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn row_words(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 != 0
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.data[i] |= 1u64 << j;
        } else {
            self.data[i] &= !(1u64 << j);
        }
    }

    pub fn column(&self, j: usize) -> u64 {
        (0..self.rows).fold(0, |acc, i| acc | ((self.data[i] >> j & 1) << i))
    }

    /// `M * v` for a column vector `v` packed as a word.
    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64) & 1) << i)
    }

    pub fn mul(&self, other: &BinMatrix) -> BinMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let data = self
            .data
            .iter()
            .map(|&r| {
                let mut acc = 0;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.data[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        BinMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        rank_and_span(&self.data, self.cols as u32).0
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && self.data.iter().enumerate().all(|(i, &r)| r == 1u64 << i)
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<BinMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r] >> col & 1 != 0)
                .ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] >> col & 1 != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(BinMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Uniformly random invertible `n x n` matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BinMatrix {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        loop {
            let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & mask).collect();
            if rank_and_span(&rows, n as u32).0 == n {
                return BinMatrix {
                    rows: n,
                    cols: n,
                    data: rows,
                };
            }
        }
    }
}
