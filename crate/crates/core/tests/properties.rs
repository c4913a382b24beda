use adic_shifts::adic::{endo_map, pow, tree_map_w, CylinderFunction, Direction, ShiftKind, TreeFunction, Vertex};
use adic_shifts::coeff::{toeplitz_u, toeplitz_v, toeplitz_w, ConvergentSequence, XVFunction};
use adic_shifts::cuntz::{closed_form_correction, phi, phi_inv, ts_correction, LineSpace};
use adic_shifts::harness::random;
use adic_shifts::hilbert::{compare_on_validity, singular_values, TruncatedOperator, TruncatedSpace};
use adic_shifts::shifts::{make_shift, make_shift_adjoint, projection, ProjectionFamily};
use num_complex::Complex64;
use proptest::prelude::*;

fn cylinder(max_s: u32, max_depth: u32) -> impl Strategy<Value = CylinderFunction> {
    (2..=max_s, 0..=max_depth).prop_flat_map(|(s, d)| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), pow(s, d) as usize).prop_map(move |v| {
            let values = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            CylinderFunction::new(s, d, values).unwrap()
        })
    })
}

fn rng(seed: u64) -> random::CheckRng {
    random::rng_for(seed, "properties")
}

fn kind() -> impl Strategy<Value = ShiftKind> {
    prop::sample::select(ShiftKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn b_after_a_is_identity(f in cylinder(5, 3), k in prop::sample::select(vec![ShiftKind::U, ShiftKind::V, ShiftKind::S])) {
        let back = endo_map(k, Direction::B, &endo_map(k, Direction::A, &f).unwrap()).unwrap();
        let tol = if k == ShiftKind::S { 1e-15 } else { 0.0 };
        prop_assert!(back.same_function(&f, tol));
    }

    #[test]
    fn bunce_deddens_maps_are_inverse(f in cylinder(5, 3)) {
        let there = endo_map(ShiftKind::U, Direction::A, &endo_map(ShiftKind::U, Direction::B, &f).unwrap()).unwrap();
        prop_assert!(there.same_function(&f, 0.0));
    }

    #[test]
    fn hensel_a_after_b(f in cylinder(5, 3)) {
        let s = f.base();
        let lhs = endo_map(ShiftKind::V, Direction::A, &endo_map(ShiftKind::V, Direction::B, &f).unwrap()).unwrap();
        let a1 = endo_map(ShiftKind::V, Direction::A, &CylinderFunction::one(s).unwrap()).unwrap();
        prop_assert!(lhs.same_function(&a1.mul(&f).unwrap(), 0.0));
    }

    #[test]
    fn bernoulli_maps_fix_constants(s in 2u32..=7, re in -2.0..2.0f64) {
        let c = CylinderFunction::constant(s, Complex64::new(re, 0.5)).unwrap();
        for dir in [Direction::A, Direction::B] {
            prop_assert!(endo_map(ShiftKind::S, dir, &c).unwrap().same_function(&c, 1e-15));
        }
    }

    #[test]
    fn serre_tree_maps(s in 2u32..=4, top in 0u32..=2, seed in any::<u64>()) {
        let f = random::tree_function(&mut rng(seed), s, top).unwrap();
        let a = tree_map_w(Direction::A, &f);
        let b = tree_map_w(Direction::B, &f);
        prop_assert!(a.tail().same_function(f.tail(), 0.0));
        prop_assert!(b.tail().same_function(f.tail(), 0.0));
        let back = tree_map_w(Direction::B, &a);
        prop_assert!(back.sub(&f).unwrap().sup_norm() < 1e-15);
    }

    #[test]
    fn level_lex_index_roundtrip(s in 2u32..=5, depth in 0u32..=4, pick in any::<prop::sample::Index>()) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let idx = pick.index(sp.dim());
        let v = sp.vertex(idx);
        prop_assert_eq!(sp.index(v).unwrap(), idx);
        prop_assert_eq!(sp.level_of(idx), v.level);
        prop_assert_eq!(phi_inv(s, phi(s, v)), Some(v));
    }

    #[test]
    fn sparse_product_matches_dense(s in 2u32..=3, depth in 1u32..=3, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let mut r = rng(seed);
        let a = random::sparse_operator(&mut r, sp, 2 * sp.dim()).unwrap();
        let b = random::sparse_operator(&mut r, sp, 2 * sp.dim()).unwrap();
        let dense = a.matrix().to_dense() * b.matrix().to_dense();
        let sparse = a.mul(&b).unwrap().matrix().to_dense();
        prop_assert!((dense - sparse).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn adjoint_and_isometry(k in kind(), s in 2u32..=5, depth in 2u32..=4) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let j = make_shift(sp, k);
        let js = make_shift_adjoint(sp, k);
        prop_assert!(j.adjoint().max_abs_diff(&js).unwrap() < 1e-14);
        let r = compare_on_validity(&js.mul(&j).unwrap(), &TruncatedOperator::identity(sp)).unwrap();
        prop_assert!(r.max < 1e-12);
        prop_assert_eq!(r.count, sp.level_offset(depth));
    }

    #[test]
    fn shifts_have_degree_one(k in kind(), s in 2u32..=3, depth in 2u32..=4) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let j = make_shift(sp, k);
        for d in -(depth as i32)..=depth as i32 {
            if d != 1 {
                prop_assert_eq!(j.degree_component(d).nnz(), 0);
            }
        }
    }

    #[test]
    fn grading_is_exhaustive(s in 2u32..=3, depth in 1u32..=4, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let a = random::sparse_operator(&mut rng(seed), sp, 3 * sp.dim()).unwrap();
        let d = depth as i32;
        let parts: Vec<_> = (-d..=d).map(|k| a.degree_component(k)).collect();
        prop_assert_eq!(parts.iter().map(|p| p.nnz()).sum::<usize>(), a.nnz());
        let mut sum = TruncatedOperator::zero(sp);
        for p in &parts {
            sum = sum.add(p).unwrap();
        }
        prop_assert_eq!(sum.max_abs_diff(&a).unwrap(), 0.0);
    }

    #[test]
    fn expectation_properties(s in 2u32..=3, depth in 1u32..=3, seed in any::<u64>(), theta in 0.0..1.0f64) {
        let sp = TruncatedSpace::new(s, depth).unwrap();
        let a = random::sparse_operator(&mut rng(seed), sp, 2 * sp.dim()).unwrap();
        let e = a.expectation();
        prop_assert_eq!(e.expectation().max_abs_diff(&e).unwrap(), 0.0);
        prop_assert!(a.quadrature_expectation(2 * depth + 1).max_abs_diff(&e).unwrap() < 1e-12);
        let na = a.spectral_norm(1e-13).unwrap();
        prop_assert!(e.spectral_norm(1e-13).unwrap() <= na + 1e-10);
        prop_assert!((a.gauge_rotate(theta).spectral_norm(1e-13).unwrap() - na).abs() < 1e-10);
        let id = TruncatedOperator::identity(sp);
        prop_assert_eq!(id.expectation().max_abs_diff(&id).unwrap(), 0.0);
    }

    #[test]
    fn bd_projections_commute_with_multipliers(f in cylinder(3, 2), n in 0u32..=4) {
        let sp = TruncatedSpace::new(f.base(), 4).unwrap();
        let p = projection(sp, ProjectionFamily::BunceDeddens(n)).unwrap();
        let m = TruncatedOperator::diag_cylinder(sp, &f).unwrap();
        let r = compare_on_validity(&m.mul(&p).unwrap(), &p.mul(&m).unwrap()).unwrap();
        prop_assert!(r.max < 1e-12);
    }

    #[test]
    fn toeplitz_u_is_multiplicative(s in 2u32..=3, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, 5).unwrap();
        let mut r = rng(seed);
        let f = random::sequence(&mut r, s, 3, 1).unwrap();
        let g = random::sequence(&mut r, s, 3, 1).unwrap();
        let lhs = toeplitz_u(sp, &f.mul(&g).unwrap()).unwrap();
        let rhs = toeplitz_u(sp, &f).unwrap().mul(&toeplitz_u(sp, &g).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-13);
        let adj = toeplitz_u(sp, &f.conj()).unwrap();
        prop_assert!(adj.max_abs_diff(&toeplitz_u(sp, &f).unwrap().adjoint()).unwrap() < 1e-13);
    }

    #[test]
    fn toeplitz_v_is_multiplicative(s in 2u32..=3, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, 5).unwrap();
        let mut r = rng(seed);
        let f: XVFunction = random::xv_function(&mut r, s, 3, 1).unwrap();
        let g = random::xv_function(&mut r, s, 3, 1).unwrap();
        let lhs = toeplitz_v(sp, &f.mul(&g).unwrap()).unwrap();
        let rhs = toeplitz_v(sp, &f).unwrap().mul(&toeplitz_v(sp, &g).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-13);
    }

    #[test]
    fn toeplitz_w_products_are_finite_rank(s in 2u32..=3, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, 5).unwrap();
        let mut r = rng(seed);
        let g: ConvergentSequence = random::sequence(&mut r, s, 1, 1).unwrap();
        let h = random::sequence(&mut r, s, 1, 1).unwrap();
        let diff = toeplitz_w(sp, &g).unwrap()
            .mul(&toeplitz_w(sp, &h).unwrap()).unwrap()
            .sub(&toeplitz_w(sp, &g.mul(&h).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(diff.expectation().max_abs_diff(&diff).unwrap(), 0.0);
        prop_assert!(diff.tail_norm(4, 1e-14).unwrap() < 1e-12);
    }

    #[test]
    fn serre_commutator(s in 2u32..=3, top in 0u32..=2, seed in any::<u64>()) {
        let sp = TruncatedSpace::new(s, 5).unwrap();
        let f: TreeFunction = random::tree_function(&mut rng(seed), s, top).unwrap();
        let w = make_shift(sp, ShiftKind::W);
        let mf = TruncatedOperator::diag_tree(sp, &f).unwrap();
        let comm = mf.mul(&w).unwrap().sub(&w.mul(&mf).unwrap()).unwrap();
        let d = f.sub(&tree_map_w(Direction::A, &f)).unwrap();
        let rhs = TruncatedOperator::diag_tree(sp, &d).unwrap().mul(&w).unwrap();
        prop_assert!(comm.max_abs_diff(&rhs).unwrap() < 1e-15);
        prop_assert!(d.support_top(0.0).is_none_or(|t| t <= top + 1));
    }

    #[test]
    fn ts_corrections_are_rank_one(s in 2u32..=3, picks in prop::array::uniform2(any::<prop::sample::Index>())) {
        let sp = TruncatedSpace::new(s, 4).unwrap();
        let top = if s == 2 { 3 } else { 2 };
        let verts: Vec<Vertex> = sp.vertices().take_while(|v| v.level <= top).collect();
        let (p, q) = (verts[picks[0].index(verts.len())], verts[picks[1].index(verts.len())]);
        let corr = ts_correction(sp, LineSpace::for_tree(sp), p, q).unwrap();
        let masked = corr.masked();
        let closed = closed_form_correction(sp, p, q).unwrap();
        let closed = TruncatedOperator::from_parts(sp, closed.matrix().filter(|_, c| corr.exact[c]), closed.budget());
        prop_assert!(masked.max_abs_diff(&closed).unwrap() < 1e-13);
        prop_assert!(singular_values(masked.matrix()).get(1).copied().unwrap_or(0.0) < 1e-10);
    }
}
