//! The two-qubit antidistinguishing scenario: product states of |0⟩ and |+⟩,
//! the canonical entangled basis, and its exact Born table.

use ontic::hilbert::{check_orthonormal, inner_product, StateVector};
use ontic::scenarios::build_pbr_quantum_scenario;

fn main() {
    let zero = StateVector::named("0").unwrap();
    let plus = StateVector::named("+").unwrap();
    println!("<0|+> = {}", inner_product(&zero, &plus).unwrap());

    let scenario = build_pbr_quantum_scenario();
    let verdict = check_orthonormal(&scenario.basis);
    println!("basis orthonormal and complete: {}", verdict.holds());

    println!("\n        xi_1   xi_2   xi_3   xi_4");
    for ((label, _), row) in scenario.product_states.iter().zip(&scenario.born_table) {
        let cells: Vec<String> = row.iter().map(|p| format!("{:>6}", p.to_string())).collect();
        println!("|{label}>  {}", cells.join(" "));
    }

    for (k, amp) in scenario.diagonal_overlaps().iter().enumerate() {
        println!("<xi_{}|{}> = {}", k + 1, scenario.product_states[k].0, amp);
    }
}
