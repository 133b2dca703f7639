//! The no-go computation. Drop the relational bit, ask the LP for response
//! functions that never fire on their forbidden preparation, and get back a
//! Farkas certificate instead. Then restore the bit and get a witness.

use ontic::format::dump_result;
use ontic::scenarios::{build_lhv_restriction, build_toy_nlhv_model, pbr_zero_spec, TOY_MEASUREMENT};
use ontic::synthesis::{build_synthesis_lp, min_violation, solve_feasibility, verify_certificate, FeasibilityResult};

fn main() {
    let model = build_toy_nlhv_model();
    let local = build_lhv_restriction(&model).unwrap();
    let (spec, forbidden) = pbr_zero_spec(&local).unwrap();
    let lp = build_synthesis_lp(&spec).unwrap();
    println!("{} variables, {} constraints", lp.variables.len(), lp.constraints.len());

    let result = solve_feasibility(&lp);
    let check = verify_certificate(&lp, &result);
    println!("feasible: {}; independent check: {}", result.is_feasible(), check.detail);
    print!("{}", dump_result(&lp, &result));

    let floor = min_violation(&spec, &forbidden).unwrap();
    println!("best achievable worst forbidden-cell probability: {floor}");

    let (full_spec, _) = pbr_zero_spec(&model).unwrap();
    let full_lp = build_synthesis_lp(&full_spec).unwrap();
    println!("with Ls restored, feasible: {}", solve_feasibility(&full_lp).is_feasible());

    let witness = full_spec
        .witness_from_responses(model.measurement(TOY_MEASUREMENT).unwrap())
        .unwrap();
    let own = verify_certificate(&full_lp, &FeasibilityResult::Feasible { witness });
    println!("the model's own response functions: {}", own.detail);
}
