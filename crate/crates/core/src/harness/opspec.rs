//! Small operator expressions for the CLI.
//!
//! An expression is a sum (`+`, `-`) of products (`.`) of factors:
//!
//! | factor | operator |
//! |---|---|
//! | `U`, `V`, `S`, `W` | the shift |
//! | `I` | identity |
//! | `P<k>` | Bunce-Deddens projection `P_k` |
//! | `P00` | `P_(0,0)` |
//! | `HP<k>` | Hensel projection `P_(k,0)` |
//! | `SP<k>` | Serre projection |
//! | `S_<j>` | Cuntz generator `S_j` |
//! | `chi<j>` | multiplication by the indicator of `j mod s` |
//!
//! A trailing `*` takes the adjoint of a factor. Products compose right to
//! left: `U.V` applies `V` first.

use crate::adic::{chi_residue, ShiftKind};
use crate::error::{Error, Result};
use crate::hilbert::{TruncatedOperator, TruncatedSpace};
use crate::shifts::{cuntz_generator, make_shift, make_shift_adjoint, projection, ProjectionFamily};

fn bad(spec: &str, why: impl std::fmt::Display) -> Error {
    Error::OpSpec(format!("`{spec}`: {why}"))
}

fn number<T: std::str::FromStr>(spec: &str, digits: &str) -> Result<T> {
    digits.parse().map_err(|_| bad(spec, format!("expected a number, found `{digits}`")))
}

fn factor(space: TruncatedSpace, spec: &str, text: &str) -> Result<TruncatedOperator> {
    let (body, star) = match text.strip_suffix('*') {
        Some(b) => (b, true),
        None => (text, false),
    };
    if body.is_empty() {
        return Err(bad(spec, "empty factor"));
    }
    let op = if body.len() == 1 && body != "I" {
        let kind = ShiftKind::from_letter(body.chars().next().unwrap_or(' '))
            .ok_or_else(|| bad(spec, format!("unknown factor `{body}`")))?;
        return Ok(if star {
            make_shift_adjoint(space, kind)
        } else {
            make_shift(space, kind)
        });
    } else if body == "I" {
        TruncatedOperator::identity(space)
    } else if body == "P00" {
        projection(space, ProjectionFamily::P00)?
    } else if let Some(k) = body.strip_prefix("HP") {
        projection(space, ProjectionFamily::Hensel(number(spec, k)?))?
    } else if let Some(k) = body.strip_prefix("SP") {
        projection(space, ProjectionFamily::Serre(number(spec, k)?))?
    } else if let Some(j) = body.strip_prefix("S_") {
        cuntz_generator(space, number(spec, j)?)?
    } else if let Some(j) = body.strip_prefix("chi") {
        TruncatedOperator::diag_cylinder(space, &chi_residue(space.base(), number(spec, j)?)?)?
    } else if let Some(k) = body.strip_prefix('P') {
        projection(space, ProjectionFamily::BunceDeddens(number(spec, k)?))?
    } else {
        return Err(bad(spec, format!("unknown factor `{body}`")));
    };
    Ok(if star { op.adjoint() } else { op })
}

fn product(space: TruncatedSpace, spec: &str, text: &str) -> Result<TruncatedOperator> {
    let factors = text
        .split('.')
        .map(|f| factor(space, spec, f))
        .collect::<Result<Vec<_>>>()?;
    TruncatedOperator::product(&factors.iter().collect::<Vec<_>>())
}

/// Builds the operator described by `spec` on `space`.
pub fn parse(space: TruncatedSpace, spec: &str) -> Result<TruncatedOperator> {
    let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad(spec, "empty expression"));
    }
    let mut out: Option<TruncatedOperator> = None;
    let mut sign = 1.0;
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 0..=bytes.len() {
        if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            continue;
        }
        let term = &compact[start..i];
        if term.is_empty() {
            if i == 0 && i < bytes.len() && bytes[i] == b'-' {
                sign = -1.0;
                start = i + 1;
                continue;
            }
            return Err(bad(spec, "empty term"));
        }
        let p = product(space, spec, term)?.scale_real(sign);
        out = Some(match out {
            Some(acc) => acc.add(&p)?,
            None => p,
        });
        if i < bytes.len() {
            sign = if bytes[i] == b'-' { -1.0 } else { 1.0 };
        }
        start = i + 1;
    }
    out.ok_or_else(|| bad(spec, "empty expression"))
}
