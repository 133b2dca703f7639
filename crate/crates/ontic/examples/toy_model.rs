//! The non-local toy model: 32 ontic states, four joint preparations and one
//! four-outcome measurement that reproduce the Born table exactly.

use ontic::ontology::{check_born_agreement, is_psi_epistemic, validate_model};
use ontic::scenarios::{build_pbr_quantum_scenario, build_toy_nlhv_model, PRODUCT_LABELS, TOY_MEASUREMENT, TOY_PREPARATIONS};

fn main() {
    let model = build_toy_nlhv_model();
    let space = model.space();
    println!("ontic space: {} points", space.size());
    for (label, mu) in model.preparations() {
        let support: Vec<String> = mu.support().map(|(i, w)| format!("({}):{w}", space.point_label(i))).collect();
        println!("  {label}: {}", support.join(" "));
    }

    let report = validate_model(&model);
    println!("valid: {}", report.valid());

    let scenario = build_pbr_quantum_scenario();
    let states: Vec<_> = TOY_PREPARATIONS
        .iter()
        .zip(PRODUCT_LABELS)
        .map(|(p, s)| (*p, scenario.state(s).unwrap()))
        .collect();
    let agreement = check_born_agreement(&model, &states, &[(TOY_MEASUREMENT, &scenario.basis)]).unwrap();
    println!("Born agreement: {}/{} cells", agreement.matching(), agreement.cells.len());

    let mu = model.preparation("nu00").unwrap();
    let nu = model.preparation("nu0+").unwrap();
    let verdict = is_psi_epistemic(mu, nu, true).unwrap();
    println!(
        "nu00 and nu0+ overlap {} on {:?}; psi-epistemic: {}",
        verdict.overlap, verdict.region, verdict.psi_epistemic
    );
}
