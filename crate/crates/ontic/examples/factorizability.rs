//! Bell factorizability of two-party response tables: a local deterministic
//! strategy, a signalling table, and the PR box.

use ontic::independence::{check_factorizability, JointResponseTable};
use ontic::QSqrt2;

fn report(name: &str, table: &JointResponseTable) {
    let v = check_factorizability(table).unwrap();
    println!(
        "{name}: factorizable {}, parameter independence {}, outcome independence {}",
        v.factorizable, v.parameter_independent, v.outcome_independent
    );
    if let Some(first) = v.failures.first() {
        println!("  {first}");
    }
}

fn main() {
    let one = QSqrt2::from_integer(1);
    let zero = QSqrt2::from_integer(0);
    let half = QSqrt2::ratio(1, 2);

    // λ fixes both outputs: A says λ mod 2, B says λ / 2.
    let local = JointResponseTable::from_fn(4, (2, 2), (2, 2), |l, _, _, ka, kb| {
        if ka == l % 2 && kb == l / 2 { one.clone() } else { zero.clone() }
    });
    report("deterministic local", &local);

    // B simply copies A's setting.
    let signalling = JointResponseTable::from_fn(1, (2, 2), (2, 2), |_, ma, _, ka, kb| {
        if ka == 0 && kb == ma { one.clone() } else { zero.clone() }
    });
    report("signalling", &signalling);

    // a ⊕ b = x·y with uniform marginals.
    let pr = JointResponseTable::from_fn(1, (2, 2), (2, 2), |_, ma, mb, ka, kb| {
        if (ka ^ kb) == (ma & mb) { half.clone() } else { zero.clone() }
    });
    report("PR box", &pr);
}
