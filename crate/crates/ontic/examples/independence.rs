//! Marginalizing out the relational bit: every joint preparation is a product
//! of local states once Ls is summed away, yet two of them are not products
//! over all three factors.

use ontic::independence::{
    check_full_independence, check_local_independence, classical_overlap, marginalize, FactorSelection,
};
use ontic::scenarios::{build_toy_nlhv_model, toy_local_states, toy_subsystem_model, TOY_PREPARATIONS};

fn main() {
    let model = build_toy_nlhv_model();
    let hidden = FactorSelection::new(["Ls"]).unwrap();
    let local = FactorSelection::new(["L1", "L2"]).unwrap();

    for (label, (mu, nu)) in TOY_PREPARATIONS.iter().zip(toy_local_states()) {
        let joint = model.preparation(label).unwrap();
        let marginal = marginalize(joint, &local).unwrap();
        let li = check_local_independence(joint, &mu, &nu, &hidden).unwrap();
        let full = check_full_independence(joint).unwrap();
        println!(
            "{label}: marginal support {}, local independence {}, full independence {}",
            marginal.support_len(),
            li.holds,
            full.holds
        );
        if let Some(c) = full.counterexample {
            println!("    ({}) joint {} vs product of marginals {}", c.point, c.joint, c.product);
        }
    }

    let sub = toy_subsystem_model();
    let overlap = classical_overlap(sub.preparation("nu0").unwrap(), sub.preparation("nu+").unwrap()).unwrap();
    println!("overlap(nu0, nu+) = {overlap}");
}
