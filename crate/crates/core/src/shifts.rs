//! The four shifts, their adjoints, Cuntz generators and words, the
//! projection families and the two matrix-unit families.

use num_complex::Complex64;

use crate::adic::{endo_map, pow, vertex_indicator, CylinderFunction, Direction, ShiftKind, Vertex, ONE};
use crate::error::{Error, Result};
use crate::hilbert::{Budget, TruncatedOperator, TruncatedSpace};

fn inv_sqrt(s: u32) -> Complex64 {
    Complex64::new(1.0 / (s as f64).sqrt(), 0.0)
}

/// Image of `E_v` under the shift, on the full tree.
///
/// The Bernoulli shift is normalized to be an isometry:
/// `S E_(n,x) = s^(-1/2) sum_j E_(n+1, sx+j)`.
pub fn shift_image(s: u32, kind: ShiftKind, v: Vertex) -> Vec<(Vertex, Complex64)> {
    let n = v.level;
    let x = v.index;
    let s64 = s as u64;
    let up = |index| Vertex { level: n + 1, index };
    match kind {
        ShiftKind::U => vec![(up(x + 1), ONE)],
        ShiftKind::V => vec![(up(s64 * x), ONE)],
        ShiftKind::S => (0..s64).map(|j| (up(s64 * x + j), inv_sqrt(s))).collect(),
        ShiftKind::W => (0..s64).map(|j| (up(x + j * pow(s, n)), inv_sqrt(s))).collect(),
    }
}

/// Image of `E_v` under the adjoint shift, written out case by case.
pub fn adjoint_image(s: u32, kind: ShiftKind, v: Vertex) -> Vec<(Vertex, Complex64)> {
    let n = v.level;
    let x = v.index;
    if n == 0 {
        return Vec::new();
    }
    let s64 = s as u64;
    let down = |index| Vertex { level: n - 1, index };
    match kind {
        ShiftKind::U => {
            if x >= 1 && x <= pow(s, n - 1) {
                vec![(down(x - 1), ONE)]
            } else {
                Vec::new()
            }
        }
        ShiftKind::V => {
            if x.is_multiple_of(s64) {
                vec![(down(x / s64), ONE)]
            } else {
                Vec::new()
            }
        }
        ShiftKind::S => vec![(down(x / s64), inv_sqrt(s))],
        ShiftKind::W => vec![(down(x % pow(s, n - 1)), inv_sqrt(s))],
    }
}

/// Columns at level `N` map out of the truncation and are zero.
pub fn make_shift(space: TruncatedSpace, kind: ShiftKind) -> TruncatedOperator {
    let s = space.base();
    TruncatedOperator::from_images(space, Budget::RAISING, |v| shift_image(s, kind, v))
}

pub fn make_shift_adjoint(space: TruncatedSpace, kind: ShiftKind) -> TruncatedOperator {
    let s = space.base();
    TruncatedOperator::from_images(space, Budget::LOWERING, |v| adjoint_image(s, kind, v))
}

/// `S_j = sqrt(s) M_{chi_j} S`, i.e. `S_j E_(n,x) = E_(n+1, sx+j)`.
pub fn cuntz_generator(space: TruncatedSpace, j: u32) -> Result<TruncatedOperator> {
    let s = space.base();
    let chi = crate::adic::chi_residue(s, j)?;
    let m = TruncatedOperator::diag_cylinder(space, &chi)?;
    Ok(m
        .mul(&make_shift(space, ShiftKind::S))?
        .scale_real((s as f64).sqrt()))
}

/// `S_(n,x) = S_{x_0} S_{x_1} ... S_{x_(n-1)}` with `x = x_0 + x_1 s + ...`.
pub fn cuntz_word(space: TruncatedSpace, n: u32, x: u64) -> Result<TruncatedOperator> {
    let v = Vertex::new(space.base(), n, x)?;
    let mut out = TruncatedOperator::identity(space);
    for d in v.digits(space.base()) {
        out = out.mul(&cuntz_generator(space, d)?)?;
    }
    Ok(out)
}

/// `J^k` for a shift.
pub fn shift_power(space: TruncatedSpace, kind: ShiftKind, k: u32) -> Result<TruncatedOperator> {
    make_shift(space, kind).pow(k)
}

/// `(J^*)^k` for a shift.
pub fn adjoint_power(space: TruncatedSpace, kind: ShiftKind, k: u32) -> Result<TruncatedOperator> {
    make_shift_adjoint(space, kind).pow(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionFamily {
    /// `P_n = U^n (I - UU^*) U^{*n}`.
    BunceDeddens(u32),
    /// `P_(n,0) = V^n P_(0,0) V^{*n}`.
    Hensel(u32),
    /// `P_n = W^n (I - WW^*) W^{*n}`.
    Serre(u32),
    /// `P_(0,0) = M_{a_V(1)} - VV^*`.
    P00,
}

pub fn projection(space: TruncatedSpace, family: ProjectionFamily) -> Result<TruncatedOperator> {
    let depth = space.depth();
    let check = |n: u32| {
        if n > depth {
            Err(Error::LevelOutOfRange { level: n, depth })
        } else {
            Ok(())
        }
    };
    match family {
        ProjectionFamily::P00 => p00(space),
        ProjectionFamily::BunceDeddens(n) => {
            check(n)?;
            ladder(space, ShiftKind::U, &defect(space, ShiftKind::U)?, n)
        }
        ProjectionFamily::Serre(n) => {
            check(n)?;
            ladder(space, ShiftKind::W, &defect(space, ShiftKind::W)?, n)
        }
        ProjectionFamily::Hensel(n) => {
            check(n)?;
            ladder(space, ShiftKind::V, &p00(space)?, n)
        }
    }
}

/// `I - JJ^*`.
fn defect(space: TruncatedSpace, kind: ShiftKind) -> Result<TruncatedOperator> {
    let range = make_shift(space, kind).mul(&make_shift_adjoint(space, kind))?;
    TruncatedOperator::identity(space).sub(&range)
}

fn p00(space: TruncatedSpace) -> Result<TruncatedOperator> {
    let s = space.base();
    let av1 = endo_map(ShiftKind::V, Direction::A, &CylinderFunction::one(s)?)?;
    let range = make_shift(space, ShiftKind::V).mul(&make_shift_adjoint(space, ShiftKind::V))?;
    TruncatedOperator::diag_cylinder(space, &av1)?.sub(&range)
}

/// `J^n p J^{*n}`.
fn ladder(space: TruncatedSpace, kind: ShiftKind, p: &TruncatedOperator, n: u32) -> Result<TruncatedOperator> {
    let up = shift_power(space, kind, n)?;
    let down = adjoint_power(space, kind, n)?;
    TruncatedOperator::product(&[&up, p, &down])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixUnitFamily {
    /// `S_(n,x) P_(0,0) S_(m,y)^*`.
    Bernoulli,
    /// `s^((n+m)/2) M_{chi_(n,x)} W^n W^{*m} M_{chi_(m,y)}`.
    Serre,
}

/// Operator sending `E_(m,y)` to `E_(n,x)` and every other basis vector to 0.
pub fn matrix_unit(
    space: TruncatedSpace,
    family: MatrixUnitFamily,
    target: Vertex,
    source: Vertex,
) -> Result<TruncatedOperator> {
    let s = space.base();
    for v in [target, source] {
        space.index(v)?;
    }
    match family {
        MatrixUnitFamily::Bernoulli => {
            let left = cuntz_word(space, target.level, target.index)?;
            let right = cuntz_word(space, source.level, source.index)?.adjoint();
            TruncatedOperator::product(&[&left, &p00(space)?, &right])
        }
        MatrixUnitFamily::Serre => {
            let chi_t = TruncatedOperator::diag_tree(space, &vertex_indicator(s, target.level, target.index)?)?;
            let chi_s = TruncatedOperator::diag_tree(space, &vertex_indicator(s, source.level, source.index)?)?;
            let up = shift_power(space, ShiftKind::W, target.level)?;
            let down = adjoint_power(space, ShiftKind::W, source.level)?;
            let scale = (s as f64).powf((target.level + source.level) as f64 / 2.0);
            Ok(TruncatedOperator::product(&[&chi_t, &up, &down, &chi_s])?.scale_real(scale))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(level: u32, index: u64) -> Vertex {
        Vertex { level, index }
    }

    fn image(op: &TruncatedOperator, at: Vertex) -> Vec<(Vertex, Complex64)> {
        op.apply_basis(at).unwrap()
    }

    fn close(a: &[(Vertex, Complex64)], b: &[(Vertex, Complex64)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|((v1, c1), (v2, c2))| v1 == v2 && (c1 - c2).norm() < 1e-15)
    }

    #[test]
    fn shift_examples() {
        let sp = TruncatedSpace::new(2, 3).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| Complex64::new(x, 0.0);
        let u = make_shift(sp, ShiftKind::U);
        assert!(close(&image(&u, v(1, 1)), &[(v(2, 2), c(1.0))]));
        assert!(image(&make_shift_adjoint(sp, ShiftKind::U), v(2, 3)).is_empty());
        let s = make_shift(sp, ShiftKind::S);
        assert!(close(&image(&s, v(1, 1)), &[(v(2, 2), c(r)), (v(2, 3), c(r))]));
        assert!(close(&image(&make_shift_adjoint(sp, ShiftKind::S), v(2, 3)), &[(v(1, 1), c(r))]));
        let w = make_shift(sp, ShiftKind::W);
        assert!(close(&image(&w, v(1, 1)), &[(v(2, 1), c(r)), (v(2, 3), c(r))]));
        assert!(close(&image(&make_shift_adjoint(sp, ShiftKind::W), v(2, 3)), &[(v(1, 1), c(r))]));
        // level N is mapped out
        assert!(image(&u, v(3, 0)).is_empty());
    }

    #[test]
    fn closed_adjoints_are_transposes() {
        for s in [2, 3, 5] {
            let sp = TruncatedSpace::new(s, 3).unwrap();
            for kind in ShiftKind::ALL {
                let t = make_shift(sp, kind).adjoint();
                let a = make_shift_adjoint(sp, kind);
                assert!(t.max_abs_diff(&a).unwrap() < 1e-15, "{kind} s={s}");
            }
        }
    }

    #[test]
    fn generators_and_words() {
        let sp = TruncatedSpace::new(2, 3).unwrap();
        let s1 = cuntz_generator(sp, 1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(close(&image(&s1, v(1, 1)), &[(v(2, 3), one)]));
        let w = cuntz_word(sp, 2, 2).unwrap();
        assert!(close(&image(&w, v(0, 0)), &[(v(2, 2), one)]));
        assert!(cuntz_generator(sp, 2).is_err());
    }

    #[test]
    fn word_closed_form() {
        let sp = TruncatedSpace::new(3, 4).unwrap();
        for n in 0..=2 {
            for x in 0..pow(3, n) {
                let w = cuntz_word(sp, n, x).unwrap();
                for z in sp.vertices().filter(|z| z.level + n <= 4) {
                    let want = v(z.level + n, pow(3, n) * z.index + x);
                    assert!(close(&image(&w, z), &[(want, Complex64::new(1.0, 0.0))]));
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let p0 = projection(sp, ProjectionFamily::BunceDeddens(0)).unwrap();
        assert!(close(&image(&p0, v(2, 3)), &[(v(2, 3), Complex64::new(1.0, 0.0))]));
        assert!(image(&p0, v(1, 1)).is_empty());
        let h2 = projection(sp, ProjectionFamily::Hensel(2)).unwrap();
        assert_eq!(h2.nnz(), 1);
        assert_eq!(h2.entry(v(2, 0), v(2, 0)).unwrap(), Complex64::new(1.0, 0.0));
        let sp0 = projection(sp, ProjectionFamily::Serre(0)).unwrap();
        for z in sp.vertices().filter(|z| z.level >= 1) {
            assert!((sp0.entry(z, z).unwrap().re - 0.5).abs() < 1e-15);
        }
        let block = sp0.block(1).unwrap();
        assert!((block[(0, 1)].re + 0.5).abs() < 1e-15);
        assert!(projection(sp, ProjectionFamily::Serre(5)).is_err());
    }

    #[test]
    fn matrix_unit_examples() {
        let sp = TruncatedSpace::new(2, 4).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let b = matrix_unit(sp, MatrixUnitFamily::Bernoulli, v(1, 1), v(2, 2)).unwrap();
        assert_eq!(b.nnz(), 1);
        assert!((b.entry(v(1, 1), v(2, 2)).unwrap() - one).norm() < 1e-14);
        let w = matrix_unit(sp, MatrixUnitFamily::Serre, v(0, 0), v(1, 1)).unwrap();
        assert_eq!(w.nnz(), 1);
        assert!((w.entry(v(0, 0), v(1, 1)).unwrap() - one).norm() < 1e-14);
    }
}
