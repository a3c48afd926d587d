use quotfib::classify::{standard_generators, FibrationClass};
use quotfib::fiber::{
    case2_model_spec, check_universal_property, combined_classes, factor_classes, factor_orbit, project_factor,
    psi_construct, psi_construct_at, DeltaGenerator, FiniteModel, ModelPoint, ModelSpec, OrbitClass,
};
use quotfib::torsion::TorsionPoint;
use quotfib::Error;

fn status(rep: &quotfib::fiber::UniversalPropertyReport, id: &str) -> bool {
    rep.entries.iter().find(|e| e.check_id == id).unwrap_or_else(|| panic!("no entry {id}")).passed()
}

fn class(case: u8, n: u32) -> FibrationClass {
    let generators = standard_generators(case, n).unwrap();
    FibrationClass { case, n, params: None, delta_generators: vec![vec![]; generators.len()], generators }
}

// Δ ≅ (Z/2)² on E[2]: (1/2,0) acts by the alternating sign, (0,1/2) by the reversal.
fn klein_spec(r: usize, n: u32) -> ModelSpec {
    ModelSpec {
        level: 2,
        dim: 1,
        factors: vec![class(4, n); r],
        delta0: vec![
            DeltaGenerator { base: vec![TorsionPoint::frac(1, 0, 2)], actions: vec![vec![1, 0]; r] },
            DeltaGenerator { base: vec![TorsionPoint::frac(0, 1, 2)], actions: vec![vec![0, 1]; r] },
        ],
    }
}

fn free_count(model: &FiniteModel) -> usize {
    let base = model.base_points().len();
    let fibres: usize = (0..model.factor_count()).map(|i| model.samples(i).len()).product();
    base * fibres / model.delta_order()
}

#[test]
fn class_counts_follow_the_free_action_formula() {
    for r in 1..=3 {
        let model = FiniteModel::build(case2_model_spec(r)).unwrap();
        let rep = check_universal_property(&model);
        assert!(rep.entries.iter().all(|e| e.passed()), "r = {r}: {:?}", rep.entries);
        assert_eq!(rep.combined_classes, free_count(&model));
        assert_eq!(rep.compatible_tuples, rep.combined_classes);
    }
    let model = FiniteModel::build(case2_model_spec(2)).unwrap();
    assert_eq!(combined_classes(&model).len(), 72);
}

#[test]
fn klein_gluing_satisfies_the_universal_property() {
    for (r, n) in [(1, 1), (2, 1), (2, 2)] {
        let model = FiniteModel::build(klein_spec(r, n)).unwrap();
        assert_eq!(model.delta_order(), 4);
        let rep = check_universal_property(&model);
        assert!(rep.entries.iter().all(|e| e.passed()), "r = {r}, n = {n}: {:?}", rep.entries);
        assert_eq!(rep.combined_classes, free_count(&model));
    }
}

// The orbit of (x, p) must contain (x + (1/2,0), diag(1,-1)·p), computed
// here straight from the projective map.
#[test]
fn factor_orbits_match_direct_action() {
    let model = FiniteModel::build(case2_model_spec(1)).unwrap();
    let alt = &model.spec().factors[0].generators[0];
    let samples = model.samples(0);
    for base in model.base_points() {
        for (p, pt) in samples.iter().enumerate() {
            let image = alt.apply(pt).unwrap();
            let q = samples.iter().position(|s| *s == image).expect("samples closed under the action");
            let moved = ModelPoint { base: vec![(base[0] + 1) % 2, base[1]], fibers: vec![q] };
            let orbit = factor_orbit(&model, 0, &base, p);
            assert_eq!(orbit.orbit.len(), 2);
            assert!(orbit.orbit.contains(&moved));
        }
    }
}

#[test]
fn psi_inverts_the_projections() {
    let model = FiniteModel::build(case2_model_spec(2)).unwrap();
    for c in combined_classes(&model) {
        let proj: Vec<OrbitClass> = (0..2).map(|i| project_factor(&model, &c, i)).collect();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(psi_construct_at(&model, &proj, &[a, b]).unwrap(), c);
            }
        }
    }
}

#[test]
fn psi_errors() {
    let model = FiniteModel::build(case2_model_spec(2)).unwrap();
    let f0 = factor_classes(&model, 0);
    let f1 = factor_classes(&model, 1);
    let a = f0.iter().find(|c| c.representative.base == [0, 0]).unwrap();
    let b = f1.iter().find(|c| c.representative.base == [0, 1]).unwrap();
    assert_eq!(psi_construct(&model, &[a.clone(), b.clone()]).unwrap_err(), Error::Incompatible);
    assert!(psi_construct(&model, std::slice::from_ref(a)).is_err());

    // Same base orbit on both sides, but the bases [0,0] and [0,1] do not
    // differ by an element of Δ.
    let fake = |fibre: usize| {
        let orbit = vec![
            ModelPoint { base: vec![0, 0], fibers: vec![fibre] },
            ModelPoint { base: vec![0, 1], fibers: vec![fibre] },
        ];
        OrbitClass { representative: orbit[0].clone(), orbit }
    };
    assert_eq!(psi_construct_at(&model, &[fake(0), fake(1)], &[0, 1]).unwrap_err(), Error::NoTransport);
}

#[test]
fn corrupted_transport_breaks_uniqueness() {
    let mut model = FiniteModel::build(case2_model_spec(2)).unwrap();
    model.corrupt_transport();
    let rep = check_universal_property(&model);
    assert!(!status(&rep, "fiber.psi.uniqueness"));
    assert!(status(&rep, "fiber.freeness"));
}

#[test]
fn two_dimensional_base() {
    let mut spec = case2_model_spec(2);
    spec.dim = 2;
    spec.delta0[0].base = vec![TorsionPoint::frac(1, 0, 2), TorsionPoint::frac(0, 1, 2)];
    let model = FiniteModel::build(spec).unwrap();
    assert_eq!(model.base_points().len(), 16);
    let rep = check_universal_property(&model);
    assert!(rep.entries.iter().all(|e| e.passed()));
    assert_eq!(rep.combined_classes, 16 * 36 / 2);
}

#[test]
fn build_errors() {
    let mut spec = case2_model_spec(1);
    spec.level = 3;
    assert_eq!(FiniteModel::build(spec).unwrap_err(), Error::LevelIncompatible);

    let mut spec = case2_model_spec(1);
    spec.delta0[0].actions = vec![vec![1, 1]];
    assert_eq!(FiniteModel::build(spec).unwrap_err(), Error::DimMismatch(2, 1));

    let mut spec = case2_model_spec(1);
    spec.delta0[0].base = vec![TorsionPoint::frac(1, 0, 2), TorsionPoint::frac(0, 1, 2)];
    assert!(FiniteModel::build(spec).is_err());

    let mut spec = case2_model_spec(7);
    spec.level = 4;
    assert!(matches!(FiniteModel::build(spec), Err(Error::EnumerationTooLarge(_))));
}

#[test]
fn spec_json_round_trip() {
    let spec = klein_spec(2, 1);
    let s = serde_json::to_string(&spec).unwrap();
    let back: ModelSpec = serde_json::from_str(&s).unwrap();
    let a = check_universal_property(&FiniteModel::build(spec).unwrap());
    let b = check_universal_property(&FiniteModel::build(back).unwrap());
    assert_eq!(a.combined_classes, b.combined_classes);
    let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
    v.as_object_mut().unwrap().remove("dim");
    assert_eq!(serde_json::from_value::<ModelSpec>(v.clone()).unwrap().dim, 1);
    v["extra"] = 1.into();
    assert!(serde_json::from_value::<ModelSpec>(v).is_err());
}
