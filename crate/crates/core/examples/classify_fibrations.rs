//! Classify the gluing group Δ for a few pairs and re-verify each class.

use quotfib::classify::{classify, verify_class, DeltaSubgroup, PairSpec};
use quotfib::torsion::{CMCurve, TorsionPoint};

fn main() -> quotfib::Result<()> {
    let p = |a, b, d| vec![TorsionPoint::frac(a, b, d)];
    let cases = [
        (PairSpec::Alpha { n: 3, c_order: 2, curve: CMCurve::Generic }, vec![p(1, 0, 2)]),
        (PairSpec::Alpha { n: 3, c_order: 2, curve: CMCurve::Generic }, vec![p(1, 0, 2), p(0, 1, 2)]),
        (PairSpec::Alpha { n: 2, c_order: 3, curve: CMCurve::Eisenstein }, vec![p(1, 1, 3)]),
        (PairSpec::Beta { n: 3, curve: CMCurve::Gauss }, vec![p(2, 0, 4), p(0, 1, 4)]),
        (PairSpec::Gamma, vec![vec![TorsionPoint::frac(1, 1, 2), TorsionPoint::zero()]]),
    ];
    for (pair, gens) in cases {
        let cls = classify(&pair, &DeltaSubgroup { generators: gens })?;
        let entries = verify_class(&pair, &cls, 10, 0);
        let passed = entries.iter().filter(|e| e.passed()).count();
        println!(
            "{pair:?}: case {}{}, |Δ| = {}, {passed}/{} checks pass",
            cls.case,
            cls.params.map_or(String::new(), |q| format!(" (a = {}, b = {})", q.a, q.b)),
            cls.group_order()?,
            entries.len()
        );
    }
    Ok(())
}
