//! Named verification checks, the suite runner and report output.

mod checks;
pub mod opspec;
pub mod random;
pub mod report;

use rayon::prelude::*;
use serde::Serialize;

use crate::adic::ShiftKind;
use crate::error::{Error, Result};
use crate::hilbert::{compare_on_validity, compare_up_to, Residual, TruncatedOperator, TruncatedSpace};

pub use report::{Report, ReportFormat};

/// Environment variable consulted for the default seed.
pub const SEED_ENV: &str = "SHIFTS_SEED";
pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckParams {
    pub s: u32,
    pub depth: u32,
    /// Overrides every check's own tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl CheckParams {
    pub fn new(s: u32, depth: u32) -> Self {
        CheckParams {
            s,
            depth,
            tol: None,
            seed: default_seed(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 2 {
            return Err(Error::InvalidBase(self.s));
        }
        if self.depth < 2 {
            return Err(Error::InvalidParam(format!("depth must be at least 2, got {}", self.depth)));
        }
        if let Some(t) = self.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidParam(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// `SHIFTS_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub paper_ref: String,
    pub params: CheckParams,
    pub validity_count: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Accumulates residuals and notes while a check runs.
#[derive(Debug, Default)]
pub struct Tally {
    residual: Residual,
    notes: Vec<String>,
}

impl Tally {
    pub fn add(&mut self, r: Residual) {
        self.residual = self.residual.merge(r);
    }

    /// Compares two operators on their common validity set.
    pub fn ops(&mut self, lhs: &TruncatedOperator, rhs: &TruncatedOperator) -> Result<Residual> {
        let r = compare_on_validity(lhs, rhs)?;
        self.add(r);
        Ok(r)
    }

    /// Compares on columns with level `<= top`.
    pub fn ops_up_to(&mut self, lhs: &TruncatedOperator, rhs: &TruncatedOperator, top: u32) -> Result<Residual> {
        let r = compare_up_to(lhs, rhs, top)?;
        self.add(r);
        Ok(r)
    }

    /// Compares on every column.
    pub fn ops_all(&mut self, lhs: &TruncatedOperator, rhs: &TruncatedOperator) -> Result<Residual> {
        self.ops_up_to(lhs, rhs, lhs.space().depth())
    }

    pub fn value(&mut self, deviation: f64) {
        self.add(Residual::scalar(deviation.abs()));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn residual(&self) -> Residual {
        self.residual
    }
}

/// What a check needs to run.
pub struct Ctx {
    pub params: CheckParams,
    pub space: TruncatedSpace,
    name: &'static str,
}

impl Ctx {
    pub fn s(&self) -> u32 {
        self.params.s
    }

    pub fn depth(&self) -> u32 {
        self.params.depth
    }

    pub fn rng(&self) -> random::CheckRng {
        random::rng_for(self.params.seed, self.name)
    }

    pub fn infeasible(&self, reason: impl Into<String>) -> Error {
        Error::Infeasible {
            check: self.name.to_string(),
            reason: reason.into(),
        }
    }

    /// Fails unless the truncation depth is at least `needed`.
    pub fn require_depth(&self, needed: u32, why: &str) -> Result<()> {
        if self.depth() < needed {
            return Err(self.infeasible(format!("needs depth >= {needed} ({why}), got {}", self.depth())));
        }
        Ok(())
    }

    /// The largest truncation at most `depth` levels deep whose dimension
    /// does not exceed `max_dim`.
    pub fn capped_space(&self, max_dim: usize) -> Result<TruncatedSpace> {
        let mut depth = self.depth();
        loop {
            let sp = TruncatedSpace::new(self.s(), depth)?;
            if sp.dim() <= max_dim || depth == 0 {
                return Ok(sp);
            }
            depth -= 1;
        }
    }
}

type PlainFn = fn(&Ctx, &mut Tally) -> Result<()>;
type ShiftFn = fn(&Ctx, &mut Tally, ShiftKind) -> Result<()>;

#[derive(Clone, Copy)]
enum Runner {
    Plain(PlainFn),
    Shift(ShiftFn, ShiftKind),
}

/// A registered check.
#[derive(Clone)]
pub struct CheckSpec {
    pub name: &'static str,
    pub family: &'static str,
    pub paper_ref: &'static str,
    pub tolerance: f64,
    runner: Runner,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec")
            .field("name", &self.name)
            .field("family", &self.family)
            .field("paper_ref", &self.paper_ref)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

pub const FAMILIES: [&str; 5] = ["bunce-deddens", "hensel", "bernoulli", "serre", "expectation"];

fn family_of(kind: ShiftKind) -> &'static str {
    match kind {
        ShiftKind::U => "bunce-deddens",
        ShiftKind::V => "hensel",
        ShiftKind::S => "bernoulli",
        ShiftKind::W => "serre",
    }
}

/// Every registered check, sorted by name.
pub fn registry() -> Vec<CheckSpec> {
    let mut out = Vec::new();
    for kind in ShiftKind::ALL {
        let family = family_of(kind);
        let shift = |name, paper_ref, tolerance, f: ShiftFn| CheckSpec {
            name,
            family,
            paper_ref,
            tolerance,
            runner: Runner::Shift(f, kind),
        };
        let (iso, adj, gauge, transfer, lemma): (&str, &str, &str, &str, &str) = match kind {
            ShiftKind::U => ("isometry.U", "adjoint.U", "gauge.U", "transfer.U", "lemma.U"),
            ShiftKind::V => ("isometry.V", "adjoint.V", "gauge.V", "transfer.V", "lemma.V"),
            ShiftKind::S => ("isometry.S", "adjoint.S", "gauge.S", "transfer.S", "lemma.S"),
            ShiftKind::W => ("isometry.W", "adjoint.W", "gauge.W", "transfer.W", "lemma.W"),
        };
        out.push(shift(iso, "ref:shift-isometry", 1e-12, checks::shift::isometry));
        out.push(shift(adj, "ref:shift-adjoint", 1e-14, checks::shift::adjoint));
        out.push(shift(gauge, "ref:gauge-action", 1e-12, checks::shift::gauge));
        out.push(shift(transfer, "ref:transfer-identities", 1e-11, checks::shift::transfer));
        let lemma_ref = match kind {
            ShiftKind::U => "ref:lemma-bd",
            ShiftKind::V => "ref:lemma-hensel",
            ShiftKind::S => "ref:lemma-bernoulli",
            ShiftKind::W => "ref:lemma-serre",
        };
        out.push(shift(lemma, lemma_ref, 1e-12, checks::shift::lemma));
    }
    let plain = |name, family, paper_ref, tolerance, f: PlainFn| CheckSpec {
        name,
        family,
        paper_ref,
        tolerance,
        runner: Runner::Plain(f),
    };
    out.extend([
        plain("projections.U", "bunce-deddens", "ref:bd-projections", 1e-12, checks::bd::projections),
        plain("toeplitz.U", "bunce-deddens", "ref:bd-toeplitz", 1e-9, checks::bd::toeplitz),
        plain("tilde.U", "bunce-deddens", "ref:bd-tilde", 1e-12, checks::bd::tilde),
        plain("projections.V", "hensel", "ref:hensel-projections", 1e-12, checks::hensel::projections),
        plain("toeplitz.V", "hensel", "ref:hensel-toeplitz", 1e-9, checks::hensel::toeplitz),
        plain("tilde.V", "hensel", "ref:hensel-tilde", 1e-12, checks::hensel::tilde),
        plain("cuntz.generators", "bernoulli", "ref:cuntz-generators", 1e-12, checks::bernoulli::generators),
        plain("cuntz.toeplitz_relations", "bernoulli", "ref:cuntz-toeplitz", 1e-12, checks::bernoulli::toeplitz_relations),
        plain("cuntz.sum_relation", "bernoulli", "ref:cuntz-sum", 1e-12, checks::bernoulli::sum_relation),
        plain("cuntz.matrix_units", "bernoulli", "ref:bernoulli-matrix-units", 1e-12, checks::bernoulli::matrix_units),
        plain("blocks.invariant", "bernoulli", "ref:gauge-blocks", 1e-12, checks::bernoulli::blocks),
        plain("line.cuntz_relations", "bernoulli", "ref:line-representation", 1e-12, checks::bernoulli::line_relations),
        plain("line.toeplitz_map", "bernoulli", "ref:toeplitz-s", 1e-12, checks::bernoulli::line_toeplitz),
        plain("tsproduct.sweep", "bernoulli", "ref:ts-product", 1e-13, checks::bernoulli::ts_sweep),
        plain("tsproduct.multiplicativity", "bernoulli", "ref:ts-product", 1e-10, checks::bernoulli::ts_multiplicativity),
        plain("serre.tree_maps", "serre", "ref:serre-tree-maps", 1e-12, checks::serre::tree_maps),
        plain("serre.induction", "serre", "ref:serre-induction", 1e-12, checks::serre::induction),
        plain("serre.matrix_units", "serre", "ref:serre-matrix-units", 1e-12, checks::serre::matrix_units),
        plain("serre.commutator", "serre", "ref:serre-commutator", 1e-12, checks::serre::commutator),
        plain("serre.twprod", "serre", "ref:serre-twprod", 1e-12, checks::serre::twprod),
        plain("serre.toeplitz", "serre", "ref:serre-toeplitz", 1e-12, checks::serre::toeplitz),
        plain("serre.projections", "serre", "ref:serre-projections", 1e-12, checks::serre::projections),
        plain("expectation.quadrature", "expectation", "ref:expectation", 1e-12, checks::expectation::quadrature),
        plain("expectation.contraction", "expectation", "ref:odonovan", 1e-10, checks::expectation::contraction),
        plain("fourier.recovery", "expectation", "ref:fourier", 1e-12, checks::expectation::fourier),
    ]);
    out.sort_by_key(|c| c.name);
    out
}

pub fn find_check(name: &str) -> Result<CheckSpec> {
    registry()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// Checks whose name matches the glob, or whose family equals `filter`.
pub fn select(filter: &str) -> Result<Vec<CheckSpec>> {
    let pattern =
        glob::Pattern::new(filter).map_err(|e| Error::InvalidParam(format!("bad filter `{filter}`: {e}")))?;
    Ok(registry()
        .into_iter()
        .filter(|c| c.family == filter || pattern.matches(c.name))
        .collect())
}

pub fn run_check(name: &str, params: &CheckParams) -> Result<CheckResult> {
    params.validate()?;
    Ok(execute(&find_check(name)?, params))
}

/// Runs the selected checks in parallel; results are ordered by name.
pub fn run_suite(filter: &str, params: &CheckParams) -> Result<Vec<CheckResult>> {
    params.validate()?;
    let specs = select(filter)?;
    let mut results: Vec<CheckResult> = specs.par_iter().map(|spec| execute(spec, params)).collect();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(results)
}

fn execute(spec: &CheckSpec, params: &CheckParams) -> CheckResult {
    let tolerance = params.tol.unwrap_or(spec.tolerance);
    let outcome = TruncatedSpace::new(params.s, params.depth).and_then(|space| {
        let ctx = Ctx {
            params: *params,
            space,
            name: spec.name,
        };
        let mut tally = Tally::default();
        match spec.runner {
            Runner::Plain(f) => f(&ctx, &mut tally),
            Runner::Shift(f, kind) => f(&ctx, &mut tally, kind),
        }
        .map(|()| tally)
    });
    let mut result = CheckResult {
        name: spec.name.to_string(),
        paper_ref: spec.paper_ref.to_string(),
        params: *params,
        validity_count: 0,
        max_residual: f64::MAX,
        tolerance,
        pass: false,
        notes: Vec::new(),
    };
    match outcome {
        Ok(tally) => {
            result.validity_count = tally.residual.count;
            result.max_residual = tally.residual.max;
            result.notes = tally.notes;
            if result.validity_count == 0 {
                result
                    .notes
                    .push("infeasible: empty validity set at these parameters".to_string());
                result.max_residual = f64::MAX;
            }
        }
        Err(Error::Infeasible { reason, .. }) => result.notes.push(format!("infeasible: {reason}")),
        Err(e) => result.notes.push(format!("error: {e}")),
    }
    result.pass = result.validity_count > 0 && result.max_residual <= tolerance;
    result
}
