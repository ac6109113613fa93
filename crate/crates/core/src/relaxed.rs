//! Three conditions on `f` weaker-looking than crookedness, each claimed to
//! be equivalent to `c_f` defining a parallelism:
//!
//! * (a) the color classes of `c_f` form a parallelism;
//! * (b) `f` is an APN permutation and `f(x) ∉ H_x + H_x` for all `x ≠ 0`;
//! * (c) `|{a, f(x) + a} ∩ H_x| = 1` for all `x ≠ 0` and all `a`,
//!
//! where `H_x` is the image of the derivative of `f` in direction `x`.

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{build_parallelism, PARALLELISM_MAX_N};
use crate::error::{Error, Result};
use crate::vbf::{algebraic_degree, is_apn, is_permutation, Vbf};

/// Largest degree for conditions (b) and (c).
pub const RELAXED_MAX_N: u32 = 12;

/// Outcome of the three conditions for one function; `None` marks a check
/// skipped because `n` is too large for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxedReport {
    pub id: String,
    pub n: u32,
    pub is_apn: bool,
    pub is_perm: bool,
    pub cond_a: Option<bool>,
    pub cond_b: Option<bool>,
    pub cond_c: Option<bool>,
    pub degree: u32,
}

impl RelaxedReport {
    /// Whether every computed condition has the same value.
    pub fn consistent(&self) -> bool {
        let vals: Vec<bool> = [self.cond_a, self.cond_b, self.cond_c]
            .into_iter()
            .flatten()
            .collect();
        vals.windows(2).all(|w| w[0] == w[1])
    }

    /// Every computed condition holds, and at least one was computed.
    pub fn satisfies(&self) -> bool {
        let vals: Vec<bool> = [self.cond_a, self.cond_b, self.cond_c]
            .into_iter()
            .flatten()
            .collect();
        !vals.is_empty() && vals.iter().all(|&v| v)
    }
}

fn derivative_bitmap(f: &Vbf, x: u32, bitmap: &mut [bool]) {
    bitmap.fill(false);
    for y in 0..f.ctx().size() as u32 {
        bitmap[(f.eval(x ^ y) ^ f.eval(y)) as usize] = true;
    }
}

/// `f(x) ∉ H_x + H_x` for every `x ≠ 0`, without the APN-permutation clause.
pub fn sumset_condition(f: &Vbf) -> Result<bool> {
    check_degree(f, "sumset condition")?;
    let size = f.ctx().size();
    Ok((1..size as u32).into_par_iter().all(|x| {
        let mut h = vec![false; size];
        derivative_bitmap(f, x, &mut h);
        let fx = f.eval(x);
        // f(x) = h1 + h2 with h1, h2 in H_x iff H_x meets H_x + f(x).
        !(0..size as u32).any(|v| h[v as usize] && h[(v ^ fx) as usize])
    }))
}

/// Condition (b).
pub fn cond_b(f: &Vbf) -> Result<bool> {
    check_degree(f, "condition (b)")?;
    Ok(is_apn(f) && is_permutation(f) && sumset_condition(f)?)
}

/// Condition (c).
pub fn cond_c(f: &Vbf) -> Result<bool> {
    check_degree(f, "condition (c)")?;
    let size = f.ctx().size();
    Ok((1..size as u32).into_par_iter().all(|x| {
        let mut h = vec![false; size];
        derivative_bitmap(f, x, &mut h);
        let fx = f.eval(x);
        (0..size as u32).all(|a| h[a as usize] != h[(a ^ fx) as usize])
    }))
}

/// Condition (a): `build_parallelism` succeeds.
pub fn cond_a(f: &Vbf) -> Result<bool> {
    if f.n() > PARALLELISM_MAX_N {
        return Err(Error::DegreeTooLarge {
            n: f.n(),
            what: "condition (a)",
            limit: PARALLELISM_MAX_N,
        });
    }
    match build_parallelism(f) {
        Ok(_) => Ok(true),
        Err(Error::ZeroColor(_) | Error::InconsistentColoring { .. } | Error::NotAParallelism(_)) => {
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

fn check_degree(f: &Vbf, what: &'static str) -> Result<()> {
    if f.n() > RELAXED_MAX_N {
        return Err(Error::DegreeTooLarge {
            n: f.n(),
            what,
            limit: RELAXED_MAX_N,
        });
    }
    Ok(())
}

fn skip_too_large(r: Result<bool>) -> Result<Option<bool>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegreeTooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn relaxed_check(id: &str, f: &Vbf) -> Result<RelaxedReport> {
    Ok(RelaxedReport {
        id: id.to_string(),
        n: f.n(),
        is_apn: is_apn(f),
        is_perm: is_permutation(f),
        cond_a: skip_too_large(cond_a(f))?,
        cond_b: skip_too_large(cond_b(f))?,
        cond_c: skip_too_large(cond_c(f))?,
        degree: algebraic_degree(f),
    })
}

/// Counts over a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanSummary {
    pub functions: usize,
    pub satisfying: usize,
    /// Satisfying functions of algebraic degree above 2.
    pub satisfying_non_quadratic: usize,
    /// Functions whose computed conditions disagree.
    pub inconsistent: usize,
}

/// One report per input, in input order.
pub fn relaxed_scan(functions: &[(String, Vbf)]) -> Result<Vec<RelaxedReport>> {
    functions
        .par_iter()
        .map(|(id, f)| relaxed_check(id, f))
        .collect()
}

pub fn summarize(reports: &[RelaxedReport]) -> ScanSummary {
    ScanSummary {
        functions: reports.len(),
        satisfying: reports.iter().filter(|r| r.satisfies()).count(),
        satisfying_non_quadratic: reports
            .iter()
            .filter(|r| r.satisfies() && r.degree > 2)
            .count(),
        inconsistent: reports.iter().filter(|r| !r.consistent()).count(),
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    n: u32,
    degree: u32,
    apn: bool,
    permutation: bool,
    cond_a: &'static str,
    cond_b: &'static str,
    cond_c: &'static str,
}

fn cell(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "skipped",
    }
}

pub fn reports_to_csv(reports: &[RelaxedReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow {
            id: &r.id,
            n: r.n,
            degree: r.degree,
            apn: r.is_apn,
            permutation: r.is_perm,
            cond_a: cell(r.cond_a),
            cond_b: cell(r.cond_b),
            cond_c: cell(r.cond_c),
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_build_default, FamilySpec};
    use crate::gf2::FieldCtx;

    fn build(s: &str) -> (String, Vbf) {
        let spec: FamilySpec = s.parse().unwrap();
        (s.to_string(), catalog_build_default(&spec).unwrap())
    }

    #[test]
    fn gold_satisfies_everything() {
        let (id, f) = build("gold:1:5");
        let r = relaxed_check(&id, &f).unwrap();
        assert_eq!((r.cond_a, r.cond_b, r.cond_c), (Some(true), Some(true), Some(true)));
        assert!(r.is_apn && r.is_perm && r.satisfies() && r.consistent());
        assert_eq!(r.degree, 2);
    }

    #[test]
    fn inverse_satisfies_nothing() {
        let (id, f) = build("inverse:5");
        let r = relaxed_check(&id, &f).unwrap();
        assert!(r.is_apn && r.is_perm);
        assert_eq!((r.cond_a, r.cond_b, r.cond_c), (Some(false), Some(false), Some(false)));
        assert!(!r.satisfies() && r.consistent());
    }

    #[test]
    fn identity_satisfies_nothing() {
        let f = Vbf::identity(FieldCtx::with_default_modulus(4).unwrap());
        let r = relaxed_check("identity", &f).unwrap();
        assert!(!r.is_apn);
        assert_eq!((r.cond_a, r.cond_b, r.cond_c), (Some(false), Some(false), Some(false)));
        // The bare sumset clause holds for a linear map; (b) needs the APN clause.
        assert!(sumset_condition(&f).unwrap());
    }

    #[test]
    fn scans() {
        assert!(relaxed_scan(&[]).unwrap().is_empty());
        let non_quadratic: Vec<_> = ["inverse:5", "inverse:7", "kasami:2:7", "welch:7"]
            .iter()
            .map(|s| build(s))
            .collect();
        let reports = relaxed_scan(&non_quadratic).unwrap();
        let sum = summarize(&reports);
        assert_eq!(sum.functions, 4);
        assert_eq!(sum.satisfying_non_quadratic, 0);
        assert_eq!(sum.inconsistent, 0);
        assert!(reports.iter().all(|r| r.degree > 2));

        let gold: Vec<_> = ["gold:1:3", "gold:1:5", "gold:2:5", "gold:1:7", "gold:2:7", "gold:3:7"]
            .iter()
            .map(|s| build(s))
            .collect();
        let reports = relaxed_scan(&gold).unwrap();
        assert_eq!(summarize(&reports).satisfying, 6);
        assert_eq!(reports.iter().map(|r| r.id.as_str()).collect::<Vec<_>>()[0], "gold:1:3");
    }

    #[test]
    fn large_degree_is_skipped() {
        let ctx = FieldCtx::with_default_modulus(10).unwrap();
        let r = relaxed_check("cube", &Vbf::power(ctx, 3)).unwrap();
        assert_eq!(r.cond_a, None);
        assert!(r.cond_b.is_some() && r.cond_c.is_some());
        assert!(r.consistent());
    }

    #[test]
    fn csv_export() {
        let (id, f) = build("gold:1:3");
        let mut r = relaxed_check(&id, &f).unwrap();
        r.cond_a = None;
        let text = reports_to_csv(&[r]).unwrap();
        assert_eq!(
            text,
            "id,n,degree,apn,permutation,cond_a,cond_b,cond_c\n\
             gold:1:3,3,2,true,true,skipped,true,true\n"
        );
    }
}
