//! A single flipped rectangle sign must be caught by the square check.

use gridob::cd::{CdError, CdModel};
use gridob::chain::{ChainError, PivotOrder};
use gridob::grid::{Domain, GridDiagram};
use gridob::signs::solve_sign_cd;

#[test]
fn flipped_sign_breaks_d_squared() {
    let model = CdModel::new(&GridDiagram::standard(3).unwrap(), 3);
    let f2 = model.f2_complex().unwrap();
    let mut s = solve_sign_cd(&model, &f2, PivotOrder::Forward).unwrap();
    assert!(model.z_complex(&s).is_ok());
    let victim = model.rectangles()[0];
    let bit = s.values.get_mut(&victim).unwrap();
    *bit = !*bit;
    match model.z_complex(&s) {
        Err(CdError::Chain(ChainError::NotAComplex { grading, witness })) => {
            assert_eq!(grading, 2);
            let found = model.grading(2).iter().any(|d: &Domain| format!("{d:?}") == witness);
            assert!(found, "witness {witness} is not an index-2 domain");
        }
        other => panic!("expected NotAComplex, got {other:?}"),
    }
}
