//! The universal property of (A_0 × P¹ × P¹)/Δ over the two factor quotients,
//! checked on a finite model with Δ = ⟨(1/2, 0)⟩ acting by diag(1, -1).

use quotfib::fiber::{case2_model_spec, check_universal_property, FiniteModel};

fn main() -> quotfib::Result<()> {
    let mut model = FiniteModel::build(case2_model_spec(2))?;
    let rep = check_universal_property(&model);
    println!("|Δ| = {}, {} classes, {} compatible tuples", rep.delta_order, rep.combined_classes, rep.compatible_tuples);
    for e in &rep.entries {
        println!("  {:<28} {:?}  {}", e.check_id, e.status, e.detail);
    }

    model.corrupt_transport();
    let bad = check_universal_property(&model);
    let failed: Vec<&str> = bad.entries.iter().filter(|e| !e.passed()).map(|e| e.check_id.as_str()).collect();
    println!("with a corrupted transport: {failed:?} fail");
    Ok(())
}
