//! Arithmetic in ℚ(√2): exact signs, division through the conjugate, and the
//! text format used by every file and report.

use ontic::QSqrt2;

fn main() {
    let a: QSqrt2 = "3/2 - sqrt2".parse().unwrap();
    let b: QSqrt2 = "1 + √2/3".parse().unwrap();

    println!("a = {a}  ~ {:.10}", a.to_f64());
    println!("b = {b}  ~ {:.10}", b.to_f64());
    println!("a + b = {}", &a + &b);
    println!("a * b = {}", &a * &b);
    println!("a / b = {}", a.checked_div(&b).unwrap());
    println!("norm(a) = a * conj(a) = {}", a.norm());

    // 3/2 - √2 ≈ 0.0858: positive although the irrational part dominates in size.
    println!("sign(a) = {}", a.sign());
    let tiny: QSqrt2 = "99/70 - sqrt2".parse().unwrap();
    println!("sign(99/70 - √2) = {}  (float says {:+e})", tiny.sign(), tiny.to_f64());

    let h = QSqrt2::inv_sqrt2();
    println!("(1/√2)² = {}", &h * &h);
    assert!(QSqrt2::from_integer(1).checked_div(&QSqrt2::default()).is_err());
}
