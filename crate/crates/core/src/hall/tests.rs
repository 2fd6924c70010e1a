use super::*;
use crate::coeff::{rat, CountSamples, PolyL, RatFunL};
use crate::model::{BuildOptions, ModelSpec};

fn jordan(q: u64, bound: usize) -> Model {
    Model::build(&ModelSpec::jordan(q, bound), &BuildOptions::default()).unwrap()
}

fn kron(q: u64, top: [usize; 2]) -> Model {
    Model::build(&ModelSpec::kronecker(q, [0, 1], [1, 0], top), &BuildOptions::default()).unwrap()
}

fn kron_balanced(q: u64, top: [usize; 2]) -> Model {
    Model::build(&ModelSpec::kronecker(q, [1, -1], [1, 1], top), &BuildOptions::default()).unwrap()
}

fn id(m: &Model, label: &str) -> ClassId {
    m.class_by_label(label).unwrap()
}

fn jordan_family(bound: usize) -> ModelFamily {
    ModelFamily::build(
        &ModelSpec::jordan(2, bound),
        &CountSamples::default(),
        &BuildOptions::default(),
    )
    .unwrap()
}

#[test]
fn unit_is_delta_zero() {
    let m = kron(2, [2, 2]);
    let alg = HallAlgebra::new(&m).unwrap();
    let w = alg.model_window();
    let one = alg.one(&w);
    assert_eq!(one, alg.delta(&w, m.zero_class()));
    let mut rng = seeded_rng(7);
    let f = alg.random_element(&w, &mut rng);
    assert_eq!(alg.mul(&one, &f), f);
    assert_eq!(alg.mul(&f, &one), f);
}

#[test]
fn jordan_degree_two_products() {
    for q in [2u64, 3, 5] {
        let m = jordan(q, 3);
        let alg = HallAlgebra::new(&m).unwrap();
        let w = alg.model_window();
        let d1 = alg.delta(&w, id(&m, "(1)"));
        let p = alg.mul(&d1, &d1);
        assert_eq!(alg.value(&p, id(&m, "(1,1)")), rat(q as i64 + 1, 1));
        assert_eq!(alg.value(&p, id(&m, "(2)")), rat(1, 1));
    }
}

#[test]
fn associativity() {
    for m in [kron(2, [2, 2]), jordan(3, 4), kron_balanced(3, [1, 2])] {
        let alg = HallAlgebra::new(&m).unwrap();
        let w = alg.model_window();
        let mut rng = seeded_rng(11);
        for _ in 0..3 {
            let a = alg.random_element(&w, &mut rng);
            let b = alg.random_element(&w, &mut rng);
            let c = alg.random_element(&w, &mut rng);
            let l = alg.mul(&alg.mul(&a, &b), &c);
            let r = alg.mul(&a, &alg.mul(&b, &c));
            assert_eq!(l, r);
        }
    }
}

/// The count of nilpotent `n x n` matrices is `q^(n^2-n)`, so
/// `int 1 = sum_n q^(n^2-n) / |GL_n| x^n`.
#[test]
fn integral_of_one_jordan() {
    for q in [2u64, 3] {
        let m = jordan(q, 4);
        let alg = HallAlgebra::new(&m).unwrap();
        let w = alg.model_window();
        let all = alg.char_element(&w, |_| Ok(true)).unwrap();
        let i = alg.integrate(&all);
        for n in 0..=4i64 {
            let nil = big(u128::from(q).pow((n * n - n) as u32));
            let gl = big(crate::model::fp::gl_order(q, n as usize));
            assert_eq!(i.coeff(&DegreeVector::point(n)).unwrap(), nil / gl);
        }
        let one = alg.char_element(&TruncationWindow::points_up_to(1), |c| Ok(m.class(c).degree.n == 1));
        let i1 = alg.integrate(&one.unwrap());
        assert_eq!(i1.coeff(&DegreeVector::point(1)).unwrap(), rat(1, q as i64 - 1));
    }
}

#[test]
fn twist_calibration() {
    let m = kron(2, [2, 2]);
    assert_eq!(HallAlgebra::new(&m).unwrap().twist(), TwistConvention::NegBackward);
    let m = kron_balanced(3, [2, 1]);
    assert_eq!(HallAlgebra::new(&m).unwrap().twist(), TwistConvention::NegBackward);
    let m = jordan(2, 3);
    assert!(HallAlgebra::new(&m).unwrap().torus_form().is_zero());
}

#[test]
fn integral_is_homomorphism_on_random_elements() {
    let m = kron(3, [2, 2]);
    let alg = HallAlgebra::new(&m).unwrap();
    let torus = alg.torus();
    let w = alg.model_window();
    let mut rng = seeded_rng(3);
    let a = alg.random_element(&w, &mut rng);
    let b = alg.random_element(&w, &mut rng);
    let lhs = alg.integrate(&alg.mul(&a, &b));
    let rhs = torus.mul(&alg.integrate(&a), &alg.integrate(&b));
    assert_eq!(lhs.restrict(&rhs.window), rhs.restrict(&lhs.window));
}

#[test]
fn torsion_product_is_one() {
    for m in [kron(2, [2, 2]), kron_balanced(2, [2, 2])] {
        let alg = HallAlgebra::new(&m).unwrap();
        let w = alg.model_window();
        let p = alg.char_element(&w, |c| alg.in_p(c)).unwrap();
        let q = alg.char_element(&w, |c| alg.in_q(c)).unwrap();
        let all = alg.char_element(&w, |_| Ok(true)).unwrap();
        assert_eq!(alg.mul(&p, &q), all);
    }
}

#[test]
fn duality_reverses_products() {
    let m = kron_balanced(2, [2, 2]);
    let alg = HallAlgebra::new(&m).unwrap();
    let w = alg.model_window();
    let mut rng = seeded_rng(5);
    let a = alg.random_element(&w, &mut rng);
    let b = alg.random_element(&w, &mut rng);
    let lhs = alg.dual_pushforward(&alg.mul(&a, &b)).unwrap();
    let rhs = alg.mul(
        &alg.dual_pushforward(&b).unwrap(),
        &alg.dual_pushforward(&a).unwrap(),
    );
    assert_eq!(lhs.restrict(&rhs.window), rhs.restrict(&lhs.window));
}

/// Quotients `k[t] ->> E` with `E` nilpotent of length `n` are unique.
#[test]
fn hilbert_integral_jordan() {
    for q in [2u64, 3] {
        let m = jordan(q, 4);
        let alg = HallAlgebra::new(&m).unwrap();
        let w = alg.model_window();
        let h = alg.integrate(&alg.hilbert_element(&w).unwrap());
        for n in 0..=4 {
            assert_eq!(h.coeff(&DegreeVector::point(n)).unwrap(), rat(1, 1));
        }
        assert_eq!(alg.value(&alg.hilbert_element(&w).unwrap(), id(&m, "(1,1)")), rat(0, 1));
    }
}

#[test]
fn element_json_shape() {
    let m = jordan(2, 2);
    let alg = HallAlgebra::new(&m).unwrap();
    let w = alg.model_window();
    let f = alg.delta(&w, id(&m, "(1,1)"));
    let v = alg.to_json(&f);
    let d = &v["degrees"][0];
    assert_eq!(d["classes"][0]["class_label"], "(1,1)");
    assert_eq!(d["classes"][0]["coefficient"], "1");
    assert_eq!(v["degrees"].as_array().unwrap().len(), 1);
}

#[test]
fn structure_constants_interpolate() {
    let fam = jordan_family(3);
    let w = TruncationWindow::points_up_to(2);
    let sc = fam.structure_constants(&w, None).unwrap();
    let find = |e: &str, a: &str, b: &str| {
        sc.iter()
            .find(|s| s.e == e && s.a == a && s.b == b)
            .unwrap()
            .poly
            .clone()
    };
    assert_eq!(find("(1,1)", "(1)", "(1)"), PolyL::from_ints(&[1, 1]));
    assert_eq!(find("(2)", "(1)", "(1)"), PolyL::from_ints(&[1]));
}

#[test]
fn interpolated_table_matches_fixed_q() {
    let fam = jordan_family(3);
    let w = TruncationWindow::points_up_to(3);
    let mu = fam.base().slope(id(fam.base(), "(1)")).unwrap();
    let sym = fam
        .interpolate_element(None, |alg| alg.log(&alg.semistable_element(&w, &SlopeInterval::point(mu.clone()))?).map_err(Into::into))
        .unwrap();
    for m in fam.models() {
        let alg = HallAlgebra::new(m).unwrap();
        let fixed = alg.log(&alg.semistable_element(&w, &SlopeInterval::point(mu.clone())).unwrap()).unwrap();
        let q0 = rat(m.q() as i64, 1);
        let evaluated = sym.try_map(|x: &RatFunL| x.eval_at(&q0)).unwrap();
        assert_eq!(evaluated.restrict(&fixed.window), fixed.restrict(&evaluated.window));
    }
}

#[test]
fn jordan_epsilon_regular_and_n_invariants() {
    let fam = jordan_family(3);
    let w = TruncationWindow::points_up_to(3);
    let mu = fam.base().slope(id(fam.base(), "(1)")).unwrap();
    let ee = epsilon_eta(&fam, &mu, &w).unwrap();
    assert!(ee.regular, "{:?}", ee.witness);
    let n = n_invariants(&fam, &ee.eta).unwrap();
    for k in 1..=3i64 {
        assert_eq!(n.get(&DegreeVector::point(k)), rat(-1, k * k));
    }
}

#[test]
fn doubled_table_has_pole() {
    let fam = jordan_family(3);
    let w = TruncationWindow::points_up_to(3);
    let ee = epsilon_eta_of(&fam, |alg| {
        let m = alg.model();
        alg.element(&w, |c| Ok(if m.class(c).degree.is_zero() { big(1) } else { big(2) }))
    })
    .unwrap();
    assert!(!ee.regular);
    assert_eq!(ee.witness.unwrap().0, DegreeVector::point(2));
}


