//! Constructors for the known crooked families and for the auxiliary
//! non-quadratic APN permutations, plus the text LUT file format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{gcd, parse_hex, FieldCtx, FieldElem};
use crate::vbf::{is_apn, is_permutation, Vbf};

/// A member of one of the catalogued function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `x^(2^t + 1)` over `F_{2^n}`.
    Gold { t: u32, n: u32 },
    /// `x^(2^s + 1) + w x^(2^(ik) + 2^(tk + s))` over `F_{2^(3k)}`.
    Bcl { s: u32, k: u32 },
    /// The trivariate family over `F_{2^m}^3`, packed into `3m` bits:
    /// `(x^(q+1) + x y^q + y z^q, x y^q + z^(q+1), x^q z + y^(q+1) + y^q z)`
    /// with `q = 2^i`.
    Trivariate { m: u32, i: u32 },
    /// `x^(2^n - 2)`.
    Inverse { n: u32 },
    /// `x^(2^(2k) - 2^k + 1)`.
    Kasami { k: u32, n: u32 },
    /// `x^(2^t + 3)` with `n = 2t + 1`.
    Welch { n: u32 },
}

impl FamilySpec {
    /// Extension degree of the field the function lives on.
    pub fn degree(&self) -> u32 {
        match *self {
            FamilySpec::Gold { n, .. }
            | FamilySpec::Inverse { n }
            | FamilySpec::Kasami { n, .. }
            | FamilySpec::Welch { n } => n,
            FamilySpec::Bcl { k, .. } => 3 * k,
            FamilySpec::Trivariate { m, .. } => 3 * m,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            FamilySpec::Gold { .. } => "gold",
            FamilySpec::Bcl { .. } => "bcl",
            FamilySpec::Trivariate { .. } => "trivariate",
            FamilySpec::Inverse { .. } => "inverse",
            FamilySpec::Kasami { .. } => "kasami",
            FamilySpec::Welch { .. } => "welch",
        }
    }

    /// Builds a spec from a family name and its parameters, in the same order
    /// as the textual form (`gold t n`, `bcl s k`, `trivariate m i`,
    /// `inverse n`, `kasami k n`, `welch n`).
    pub fn from_parts(family: &str, params: &[u32]) -> Result<Self> {
        let arity = |want: usize| {
            if params.len() == want {
                Ok(())
            } else {
                Err(Error::Malformed(format!(
                    "family {family} takes {want} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match family {
            "gold" => arity(2).map(|_| FamilySpec::Gold { t: params[0], n: params[1] }),
            "bcl" => arity(2).map(|_| FamilySpec::Bcl { s: params[0], k: params[1] }),
            "trivariate" => arity(2).map(|_| FamilySpec::Trivariate { m: params[0], i: params[1] }),
            "inverse" => arity(1).map(|_| FamilySpec::Inverse { n: params[0] }),
            "kasami" => arity(2).map(|_| FamilySpec::Kasami { k: params[0], n: params[1] }),
            "welch" => arity(1).map(|_| FamilySpec::Welch { n: params[0] }),
            other => Err(Error::Malformed(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Gold { t, n } => write!(f, "gold:{t}:{n}"),
            FamilySpec::Bcl { s, k } => write!(f, "bcl:{s}:{k}"),
            FamilySpec::Trivariate { m, i } => write!(f, "trivariate:{m}:{i}"),
            FamilySpec::Inverse { n } => write!(f, "inverse:{n}"),
            FamilySpec::Kasami { k, n } => write!(f, "kasami:{k}:{n}"),
            FamilySpec::Welch { n } => write!(f, "welch:{n}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let family = parts.next().unwrap_or_default();
        let params = parts
            .map(|p| {
                p.parse::<u32>()
                    .map_err(|_| Error::Malformed(format!("bad parameter {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(family, &params)
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::ParamConstraintViolated(msg.into())
}

/// Builds the function described by `spec` over `ctx`.
pub fn catalog_build(spec: &FamilySpec, ctx: &FieldCtx) -> Result<Vbf> {
    let n = spec.degree();
    if ctx.n() != n {
        return Err(violated(format!(
            "{spec} lives on F_2^{n}, field has degree {}",
            ctx.n()
        )));
    }
    let ctx = *ctx;
    let f = match *spec {
        FamilySpec::Gold { t, n } => {
            if n % 2 == 0 || t == 0 || gcd(t as u64, n as u64) != 1 {
                return Err(violated(format!("gold needs odd n and gcd(t, n) = 1, got t={t} n={n}")));
            }
            Vbf::power(ctx, frobenius_exponent(t, n) + 1)
        }
        FamilySpec::Bcl { s, k } => build_bcl(ctx, s, k)?,
        FamilySpec::Trivariate { m, i } => build_trivariate(ctx, m, i)?,
        FamilySpec::Inverse { n } => {
            if n % 2 == 0 {
                return Err(violated(format!("inverse needs odd n, got {n}")));
            }
            checked_apn_permutation(spec, Vbf::power(ctx, (1u64 << n) - 2))?
        }
        FamilySpec::Kasami { k, n } => {
            if n % 2 == 0 || k == 0 || gcd(k as u64, n as u64) != 1 {
                return Err(violated(format!("kasami needs odd n and gcd(k, n) = 1, got k={k} n={n}")));
            }
            let (k2, k1) = (frobenius_exponent(2 * k, n), frobenius_exponent(k, n));
            // 2^(2k) - 2^k + 1, reduced through x^(2^n) = x.
            let group = (1u64 << n) - 1;
            let e = (k2 + group - k1) % group + 1;
            checked_apn_permutation(spec, Vbf::power(ctx, e))?
        }
        FamilySpec::Welch { n } => {
            if n < 3 || n % 2 == 0 {
                return Err(violated(format!("welch needs odd n >= 3, got {n}")));
            }
            let t = (n - 1) / 2;
            checked_apn_permutation(spec, Vbf::power(ctx, (1u64 << t) + 3))?
        }
    };
    debug_assert!(f.is_normalized());
    Ok(f)
}

/// [`catalog_build`] over the default field of the right degree.
pub fn catalog_build_default(spec: &FamilySpec) -> Result<Vbf> {
    let ctx = FieldCtx::with_default_modulus(spec.degree())?;
    catalog_build(spec, &ctx)
}

/// `2^(j mod n)`, the exponent of `x -> x^(2^j)` reduced on `F_{2^n}`.
fn frobenius_exponent(j: u32, n: u32) -> u64 {
    1u64 << (j % n)
}

fn checked_apn_permutation(spec: &FamilySpec, f: Vbf) -> Result<Vbf> {
    if !is_permutation(&f) {
        return Err(Error::BuildCheckFailed(format!("{spec} is not a permutation")));
    }
    if !is_apn(&f) {
        return Err(Error::BuildCheckFailed(format!("{spec} is not APN")));
    }
    Ok(f)
}

fn build_bcl(ctx: FieldCtx, s: u32, k: u32) -> Result<Vbf> {
    if s == 0 || k == 0 || gcd(6, k as u64) != 1 || gcd(3 * k as u64, s as u64) != 1 {
        return Err(violated(format!(
            "bcl needs gcd(6, k) = gcd(3k, s) = 1, got s={s} k={k}"
        )));
    }
    let n = 3 * k;
    let i = (s * k) % 3;
    let t = 3 - i;
    let e1 = frobenius_exponent(s, n) + 1;
    let e2 = frobenius_exponent(i * k, n) + frobenius_exponent(t * k + s, n);
    let w = bcl_coefficient(&ctx, k)?;
    Ok(Vbf::from_fn(ctx, |x| ctx.pow(x, e1) ^ ctx.mul(w, ctx.pow(x, e2))))
}

/// The element of order `2^(2k) + 2^k + 1` obtained by powering the
/// smallest primitive element.
pub fn bcl_coefficient(ctx: &FieldCtx, k: u32) -> Result<FieldElem> {
    let order = (1u64 << (2 * k)) + (1u64 << k) + 1;
    let group = (1u64 << ctx.n()) - 1;
    if !group.is_multiple_of(order) {
        return Err(Error::NoElementOfRequiredOrder(order));
    }
    let w = ctx.pow(ctx.primitive_element(), group / order);
    if ctx.order(w) != order {
        return Err(Error::NoElementOfRequiredOrder(order));
    }
    Ok(w)
}

fn build_trivariate(ctx: FieldCtx, m: u32, i: u32) -> Result<Vbf> {
    if m.is_multiple_of(2) || m.is_multiple_of(7) || i == 0 || gcd(i as u64, m as u64) != 1 {
        return Err(violated(format!(
            "trivariate needs odd m not divisible by 7 and gcd(i, m) = 1, got m={m} i={i}"
        )));
    }
    let sub = FieldCtx::with_default_modulus(m)?;
    let q = frobenius_exponent(i, m);
    let mask = sub.mask();
    let fq = |v: FieldElem| sub.pow(v, q);
    let fq1 = |v: FieldElem| sub.pow(v, q + 1);
    Ok(Vbf::from_fn(ctx, |word| {
        let (x, y, z) = (word & mask, word >> m & mask, word >> (2 * m) & mask);
        let xyq = sub.mul(x, fq(y));
        let u = fq1(x) ^ xyq ^ sub.mul(y, fq(z));
        let v = xyq ^ fq1(z);
        let w = sub.mul(fq(x), z) ^ fq1(y) ^ sub.mul(fq(y), z);
        w << (2 * m) | v << m | u
    }))
}

/// Renders the LUT file: `n=`, `modulus=` and then the table in hex,
/// sixteen words per line.
pub fn lut_format(f: &Vbf) -> String {
    let mut out = format!("n={}\nmodulus={:x}\n", f.n(), f.ctx().modulus());
    for chunk in f.lut().chunks(16) {
        let words: Vec<String> = chunk.iter().map(|v| format!("{v:x}")).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

pub fn lut_parse(text: &str) -> Result<Vbf> {
    let bad = |msg: String| Error::MalformedLutFile(msg);
    let mut lines = text.lines();
    let header = |line: Option<&str>, key: &str| -> Result<String> {
        let line = line.ok_or_else(|| bad(format!("missing {key}= header")))?;
        line.trim()
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .map(|v| v.trim().to_string())
            .ok_or_else(|| bad(format!("expected {key}=..., found {line:?}")))
    };
    let n: u32 = header(lines.next(), "n")?
        .parse()
        .map_err(|_| bad("n is not an integer".into()))?;
    let modulus = parse_hex(&header(lines.next(), "modulus")?)
        .filter(|&m| m <= u32::MAX as u64)
        .ok_or_else(|| bad("modulus is not a hex word".into()))?;
    let ctx = FieldCtx::new(n, modulus as u32).map_err(|e| bad(e.to_string()))?;
    let lut = lines
        .flat_map(str::split_whitespace)
        .map(|tok| {
            parse_hex(tok)
                .filter(|&v| v <= ctx.mask() as u64)
                .map(|v| v as u32)
                .ok_or_else(|| bad(format!("bad table entry {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if lut.len() != ctx.size() {
        return Err(bad(format!(
            "{} table entries, expected {}",
            lut.len(),
            ctx.size()
        )));
    }
    Vbf::from_lut(ctx, lut)
}

pub fn lut_store(f: &Vbf, path: &Path) -> Result<()> {
    std::fs::write(path, lut_format(f))?;
    Ok(())
}

pub fn lut_load(path: &Path) -> Result<Vbf> {
    lut_parse(&std::fs::read_to_string(path)?)
}

/// Loads a LUT and insists it was written over `ctx`.
pub fn lut_load_expecting(path: &Path, ctx: &FieldCtx) -> Result<Vbf> {
    let f = lut_load(path)?;
    if f.ctx() != ctx {
        return Err(Error::ModulusMismatch {
            expected: ctx.modulus(),
            found: f.ctx().modulus(),
        });
    }
    Ok(f)
}
