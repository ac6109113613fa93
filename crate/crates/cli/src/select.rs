use std::path::Path;

use crookpar::catalog::{catalog_build_default, lut_load};
use crookpar::coloring::build_parallelism;
use crookpar::formats::load_parallelism;
use crookpar::geometry::Parallelism;
use crookpar::{FamilySpec, Vbf};

use crate::commands::CliError;
use crate::FnArgs;

/// A function together with the name it is reported under.
pub struct Selected {
    pub label: String,
    pub f: Vbf,
}

fn require(v: Option<u32>, flag: &str, family: &str) -> Result<u32, CliError> {
    v.ok_or_else(|| CliError::usage(format!("family {family} needs --{flag}")))
}

pub fn spec_from_args(a: &FnArgs) -> Result<Option<FamilySpec>, CliError> {
    if let Some(s) = &a.spec {
        return s.parse().map(Some).map_err(CliError::from);
    }
    let Some(family) = a.family.as_deref() else {
        return Ok(None);
    };
    let params = match family {
        "gold" => vec![require(a.t, "t", family)?, require(a.n, "n", family)?],
        "bcl" => vec![require(a.s, "s", family)?, require(a.k, "k", family)?],
        "trivariate" => vec![require(a.m, "m", family)?, require(a.i, "i", family)?],
        "inverse" | "welch" => vec![require(a.n, "n", family)?],
        "kasami" => vec![require(a.k, "k", family)?, require(a.n, "n", family)?],
        other => return Err(CliError::usage(format!("unknown family {other:?}"))),
    };
    FamilySpec::from_parts(family, &params)
        .map(Some)
        .map_err(CliError::from)
}

pub fn function(a: &FnArgs) -> Result<Selected, CliError> {
    if let Some(spec) = spec_from_args(a)? {
        return Ok(Selected {
            label: spec.to_string(),
            f: catalog_build_default(&spec)?,
        });
    }
    if let Some(path) = &a.lut {
        return Ok(Selected {
            label: path.display().to_string(),
            f: lut_load(path)?,
        });
    }
    Err(CliError::usage(
        "select a function with --family, --spec or --lut",
    ))
}

/// A spec string such as `gold:1:5`, or a LUT file path.
pub fn function_from_str(s: &str) -> Result<Selected, CliError> {
    if let Ok(spec) = s.parse::<FamilySpec>() {
        return Ok(Selected {
            label: spec.to_string(),
            f: catalog_build_default(&spec)?,
        });
    }
    if Path::new(s).exists() {
        return Ok(Selected {
            label: s.to_string(),
            f: lut_load(Path::new(s))?,
        });
    }
    Err(CliError::usage(format!(
        "{s:?} is neither a function spec nor an existing file"
    )))
}

/// A parallelism from a `.json` file, or Π_f for a spec or LUT file.
pub fn parallelism_from_str(s: &str) -> Result<(String, Parallelism), CliError> {
    if s.ends_with(".json") && Path::new(s).exists() {
        let (par, _) = load_parallelism(Path::new(s))?;
        return Ok((s.to_string(), par));
    }
    let sel = function_from_str(s)?;
    let par = build_parallelism(&sel.f)?;
    Ok((sel.label, par))
}
