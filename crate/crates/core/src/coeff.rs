//! Coefficient-algebra data: eventually constant sequences of cylinder
//! functions, elements of `C(X_V)`, the Toeplitz maps `T_U`, `T_V`, `T_W`,
//! the tilde endomorphisms and Fourier coefficients.

use num_complex::Complex64;

use crate::adic::{endo_map, CylinderFunction, Direction, ShiftKind, ZERO};
use crate::error::{Error, Result};
use crate::hilbert::{TruncatedOperator, TruncatedSpace};
use crate::shifts::{adjoint_power, projection, shift_power, ProjectionFamily};

/// `(f_0, ..., f_{K-1}, f_inf, f_inf, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergentSequence {
    prefix: Vec<CylinderFunction>,
    tail: CylinderFunction,
}

impl ConvergentSequence {
    pub fn new(prefix: Vec<CylinderFunction>, tail: CylinderFunction) -> Result<Self> {
        for f in &prefix {
            if f.base() != tail.base() {
                return Err(Error::BaseMismatch(tail.base(), f.base()));
            }
        }
        Ok(ConvergentSequence { prefix, tail })
    }

    pub fn constant(f: CylinderFunction) -> Self {
        ConvergentSequence {
            prefix: Vec::new(),
            tail: f,
        }
    }

    pub fn base(&self) -> u32 {
        self.tail.base()
    }

    pub fn prefix(&self) -> &[CylinderFunction] {
        &self.prefix
    }

    pub fn tail(&self) -> &CylinderFunction {
        &self.tail
    }

    /// Number of explicit slots `K`.
    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn get(&self, n: usize) -> &CylinderFunction {
        self.prefix.get(n).unwrap_or(&self.tail)
    }

    /// Largest depth among all entries.
    pub fn max_depth(&self) -> u32 {
        self.prefix
            .iter()
            .map(|f| f.depth())
            .chain([self.tail.depth()])
            .max()
            .unwrap_or(0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.prefix
            .iter()
            .chain([&self.tail])
            .map(|f| f.sup_norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CylinderFunction, &CylinderFunction) -> Result<CylinderFunction>,
    ) -> Result<Self> {
        let k = self.len().max(other.len());
        let prefix = (0..k)
            .map(|n| f(self.get(n), other.get(n)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(prefix, f(&self.tail, &other.tail)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.mul(b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn conj(&self) -> Self {
        ConvergentSequence {
            prefix: self.prefix.iter().map(|f| f.conj()).collect(),
            tail: self.tail.conj(),
        }
    }

    /// `(0, g_0, g_1, ...)` with the same limit.
    pub fn shift_right(&self) -> Result<Self> {
        let zero = CylinderFunction::constant(self.base(), ZERO)?;
        let prefix = std::iter::once(zero).chain(self.prefix.iter().cloned()).collect();
        Self::new(prefix, self.tail.clone())
    }

    /// `(g_1, g_2, ...)` with the same limit.
    pub fn shift_left(&self) -> Self {
        ConvergentSequence {
            prefix: self.prefix.iter().skip(1).cloned().collect(),
            tail: self.tail.clone(),
        }
    }

    /// Whether both sequences define the same element, up to `tol`.
    pub fn same_sequence(&self, other: &Self, tol: f64) -> bool {
        let k = self.len().max(other.len());
        (0..k).all(|n| self.get(n).same_function(other.get(n), tol))
            && self.tail.same_function(&other.tail, tol)
    }
}

/// `(f, (x_n))` with `x_n = f(0)` beyond the prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct XVFunction {
    f: CylinderFunction,
    prefix: Vec<Complex64>,
}

impl XVFunction {
    pub fn new(f: CylinderFunction, prefix: Vec<Complex64>) -> Self {
        XVFunction { f, prefix }
    }

    pub fn function(&self) -> &CylinderFunction {
        &self.f
    }

    pub fn prefix(&self) -> &[Complex64] {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.prefix.get(n).copied().unwrap_or_else(|| self.f.eval(0))
    }

    pub fn sup_norm(&self) -> f64 {
        self.prefix.iter().map(|x| x.norm()).fold(self.f.sup_norm(), f64::max)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let k = self.len().max(other.len());
        Ok(XVFunction {
            f: self.f.mul(&other.f)?,
            prefix: (0..k).map(|n| self.get(n) * other.get(n)).collect(),
        })
    }

    pub fn same_element(&self, other: &Self, tol: f64) -> bool {
        let k = self.len().max(other.len());
        self.f.same_function(&other.f, tol) && (0..k).all(|n| (self.get(n) - other.get(n)).norm() <= tol)
    }
}

fn check_prefix(len: usize, space: TruncatedSpace) -> Result<()> {
    if len > space.depth() as usize {
        return Err(Error::PrefixTooLong {
            len,
            depth: space.depth(),
        });
    }
    Ok(())
}

/// `T_U(F) = sum_{n<K} (M_{f_n} - M_{f_inf}) P_n + M_{f_inf}`.
pub fn toeplitz_u(space: TruncatedSpace, f: &ConvergentSequence) -> Result<TruncatedOperator> {
    check_prefix(f.len(), space)?;
    let mut out = TruncatedOperator::diag_cylinder(space, f.tail())?;
    for (n, fn_) in f.prefix().iter().enumerate() {
        let d = TruncatedOperator::diag_cylinder(space, &fn_.sub(f.tail())?)?;
        let p = projection(space, ProjectionFamily::BunceDeddens(n as u32))?;
        out = out.add(&d.mul(&p)?)?;
    }
    Ok(out)
}

/// `T_V(F) = sum_{n<K} (x_n - f(0)) P_(n,0) + M_f`.
pub fn toeplitz_v(space: TruncatedSpace, f: &XVFunction) -> Result<TruncatedOperator> {
    check_prefix(f.len(), space)?;
    let f0 = f.function().eval(0);
    let mut out = TruncatedOperator::diag_cylinder(space, f.function())?;
    for (n, &x) in f.prefix().iter().enumerate() {
        let p = projection(space, ProjectionFamily::Hensel(n as u32))?;
        out = out.add_scaled(&p, x - f0)?;
    }
    Ok(out)
}

/// `T_W(G) = sum_{n<K} P_n (M_{g_n} - M_{g_inf}) P_n + M_{g_inf}` with the
/// Serre projections.
pub fn toeplitz_w(space: TruncatedSpace, g: &ConvergentSequence) -> Result<TruncatedOperator> {
    check_prefix(g.len(), space)?;
    let mut out = TruncatedOperator::diag_cylinder(space, g.tail())?;
    for (n, gn) in g.prefix().iter().enumerate() {
        let d = TruncatedOperator::diag_cylinder(space, &gn.sub(g.tail())?)?;
        let p = projection(space, ProjectionFamily::Serre(n as u32))?;
        out = out.add(&TruncatedOperator::product(&[&p, &d, &p])?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tilde {
    Alpha,
    Beta,
}

/// `alpha~_U F = (0, a_U f_0, a_U f_1, ...; a_U f_inf)` and
/// `beta~_U F = (b_U f_1, b_U f_2, ...; b_U f_inf)`.
pub fn seq_endo_u(which: Tilde, f: &ConvergentSequence) -> Result<ConvergentSequence> {
    let s = f.base();
    match which {
        Tilde::Alpha => {
            let a = |g: &CylinderFunction| endo_map(ShiftKind::U, Direction::A, g);
            let prefix = std::iter::once(CylinderFunction::constant(s, ZERO))
                .chain(f.prefix().iter().map(a))
                .collect::<Result<Vec<_>>>()?;
            ConvergentSequence::new(prefix, a(f.tail())?)
        }
        Tilde::Beta => {
            let b = |g: &CylinderFunction| endo_map(ShiftKind::U, Direction::B, g);
            let prefix = f.prefix().iter().skip(1).map(b).collect::<Result<Vec<_>>>()?;
            ConvergentSequence::new(prefix, b(f.tail())?)
        }
    }
}

/// `alpha~_V (f, x) = (a_V f, (0, x_0, x_1, ...))` and
/// `beta~_V (f, x) = (b_V f, (x_1, x_2, ...))`.
pub fn seq_endo_v(which: Tilde, f: &XVFunction) -> Result<XVFunction> {
    match which {
        Tilde::Alpha => Ok(XVFunction::new(
            endo_map(ShiftKind::V, Direction::A, f.function())?,
            std::iter::once(ZERO).chain(f.prefix().iter().copied()).collect(),
        )),
        Tilde::Beta => Ok(XVFunction::new(
            endo_map(ShiftKind::V, Direction::B, f.function())?,
            f.prefix().iter().skip(1).copied().collect(),
        )),
    }
}

/// `a_d = E(a J^{*d})` for `d >= 0` and `a_d = E(J^{-d} a)` for `d < 0`.
pub fn fourier_coefficient(a: &TruncatedOperator, d: i32, kind: ShiftKind) -> Result<TruncatedOperator> {
    let space = a.space();
    if d.unsigned_abs() > space.depth() {
        return Err(Error::InvalidParam(format!(
            "Fourier index {d} exceeds truncation depth {}",
            space.depth()
        )));
    }
    let k = d.unsigned_abs();
    let product = if d >= 0 {
        a.mul(&adjoint_power(space, kind, k)?)?
    } else {
        shift_power(space, kind, k)?.mul(a)?
    };
    Ok(product.expectation())
}

/// `sum_{d>=0} a_d J^d + sum_{d<0} J^{*|d|} a_d` over the given coefficients.
pub fn fourier_sum(
    space: TruncatedSpace,
    kind: ShiftKind,
    coefficients: &[(i32, TruncatedOperator)],
) -> Result<TruncatedOperator> {
    let mut out = TruncatedOperator::zero(space);
    for (d, ad) in coefficients {
        let k = d.unsigned_abs();
        let term = if *d >= 0 {
            ad.mul(&shift_power(space, kind, k)?)?
        } else {
            adjoint_power(space, kind, k)?.mul(ad)?
        };
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adic::{chi_residue, Vertex, ONE};

    fn v(level: u32, index: u64) -> Vertex {
        Vertex { level, index }
    }

    #[test]
    fn toeplitz_u_examples() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let f = ConvergentSequence::new(vec![chi_residue(2, 0).unwrap()], CylinderFunction::one(2).unwrap()).unwrap();
        let t = toeplitz_u(sp, &f).unwrap();
        assert!(t.apply_basis(v(2, 3)).unwrap().is_empty());
        assert_eq!(t.apply_basis(v(1, 1)).unwrap(), vec![(v(1, 1), ONE)]);
        let c = ConvergentSequence::constant(chi_residue(2, 1).unwrap());
        let tc = toeplitz_u(sp, &c).unwrap();
        let d = TruncatedOperator::diag_cylinder(sp, &chi_residue(2, 1).unwrap()).unwrap();
        assert_eq!(tc.max_abs_diff(&d).unwrap(), 0.0);
    }

    #[test]
    fn toeplitz_v_examples() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let f = XVFunction::new(chi_residue(2, 0).unwrap(), vec![Complex64::new(5.0, 0.0)]);
        let t = toeplitz_v(sp, &f).unwrap();
        let img = t.apply_basis(v(0, 0)).unwrap();
        assert_eq!(img.len(), 1);
        assert!((img[0].1 - Complex64::new(5.0, 0.0)).norm() < 1e-14);
        assert!(t.apply_basis(v(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn toeplitz_w_examples() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let zero = CylinderFunction::constant(2, ZERO).unwrap();
        let one = CylinderFunction::one(2).unwrap();
        for n in 0..3 {
            let mut prefix = vec![zero.clone(); n + 1];
            prefix[n] = one.clone();
            let g = ConvergentSequence::new(prefix, zero.clone()).unwrap();
            let p = projection(sp, ProjectionFamily::Serre(n as u32)).unwrap();
            assert!(toeplitz_w(sp, &g).unwrap().max_abs_diff(&p).unwrap() < 1e-14);
        }
        let g = ConvergentSequence::new(vec![one], zero).unwrap();
        let t = toeplitz_w(sp, &g).unwrap();
        assert!((t.entry(v(1, 1), v(1, 1)).unwrap().re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn tilde_examples() {
        let one = CylinderFunction::one(3).unwrap();
        let c = ConvergentSequence::constant(one.clone());
        let a = seq_endo_u(Tilde::Alpha, &c).unwrap();
        assert_eq!(a.get(0).eval(0), ZERO);
        assert!(a.get(1).same_function(&one, 0.0));
        assert!(a.tail().same_function(&one, 0.0));
        let f = ConvergentSequence::new(vec![chi_residue(3, 2).unwrap(), one.clone()], chi_residue(3, 1).unwrap()).unwrap();
        let back = seq_endo_u(Tilde::Beta, &seq_endo_u(Tilde::Alpha, &f).unwrap()).unwrap();
        assert!(back.same_sequence(&f, 0.0));
        let x = XVFunction::new(one, vec![Complex64::new(2.0, 1.0)]);
        assert_eq!(seq_endo_v(Tilde::Alpha, &x).unwrap().get(0), ZERO);
    }

    #[test]
    fn fourier_of_diagonal() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let a = TruncatedOperator::diag_cylinder(sp, &chi_residue(2, 0).unwrap()).unwrap();
        for kind in ShiftKind::ALL {
            assert_eq!(fourier_coefficient(&a, 0, kind).unwrap().max_abs_diff(&a).unwrap(), 0.0);
            for d in [-2, -1, 1, 2] {
                assert_eq!(fourier_coefficient(&a, d, kind).unwrap().nnz(), 0);
            }
        }
    }
}
