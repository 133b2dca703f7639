//! Response-function synthesis on a small hand-built spec: two overlapping
//! coin distributions and a two-outcome target table.

use ontic::ontology::{predict, EpistemicState, Factor, OnticSpace};
use ontic::synthesis::{build_synthesis_lp, solve_feasibility, SynthesisSpec};
use ontic::QSqrt2;

fn q(s: &str) -> QSqrt2 {
    s.parse().unwrap()
}

fn main() {
    let space = OnticSpace::shared(vec![Factor::new("coin", ["a", "b", "c"])]).unwrap();
    let mu = EpistemicState::from_labels(space.clone(), [("a", q("1/2")), ("b", q("1/2"))]).unwrap();
    let nu = EpistemicState::from_labels(space.clone(), [("b", q("1/2")), ("c", q("1/2"))]).unwrap();

    for (name, targets) in [
        ("reachable", [["1/4", "3/4"], ["3/4", "1/4"]]),
        ("unreachable", [["1", "0"], ["0", "1"]]),
    ] {
        let spec = SynthesisSpec::with_targets(
            space.clone(),
            vec![("mu".into(), mu.clone()), ("nu".into(), nu.clone())],
            2,
            targets.iter().map(|r| r.iter().map(|t| q(t)).collect()).collect(),
        )
        .unwrap();
        let lp = build_synthesis_lp(&spec).unwrap();
        match solve_feasibility(&lp) {
            ontic::synthesis::FeasibilityResult::Feasible { witness } => {
                let xi = spec.responses_from_witness(&witness).unwrap();
                println!("{name}: feasible");
                for p in 0..space.size() {
                    let col: Vec<String> = xi.column(p).iter().map(ToString::to_string).collect();
                    println!("  xi(.|{}) = ({})", space.point_label(p), col.join(", "));
                }
                println!("  mu -> {:?}", predict(&mu, &xi).unwrap().iter().map(ToString::to_string).collect::<Vec<_>>());
            }
            ontic::synthesis::FeasibilityResult::Infeasible { certificate } => {
                println!("{name}: infeasible, certificate {:?}", certificate.multipliers.iter().map(|(id, y)| format!("{id}:{y}")).collect::<Vec<_>>());
            }
        }
    }
}
