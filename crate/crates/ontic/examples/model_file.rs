//! The model file format: dump a built-in, read it back, and load a small
//! hand-written document with irrational weights.

use ontic::format::{dump_model, load_model_str, parse_model};
use ontic::ontology::validate_model;
use ontic::scenarios::build_toy_nlhv_model;

const HAND_WRITTEN: &str = r#"
schema_version = 1

[space]
factors = [{ name = "L", labels = ["up", "down"] }]

[[preparations]]
label = "tilted"
weights = [["up", "1/3 + sqrt2/7"], ["down", "2/3 - sqrt2/7"]]

[[measurements]]
label = "Z"
outcomes = 2
filler = "0"
entries = [[1, "up", "1"], [2, "down", "1"]]
"#;

fn main() {
    let model = build_toy_nlhv_model();
    let text = dump_model(&model);
    println!("{}", text.lines().take(14).collect::<Vec<_>>().join("\n"));
    println!("... ({} lines)", text.lines().count());
    assert_eq!(parse_model(&text).unwrap(), model);
    assert_eq!(dump_model(&parse_model(&text).unwrap()), text);

    let small = load_model_str(HAND_WRITTEN).unwrap();
    println!("\nhand-written model valid: {}", validate_model(&small).valid());
    print!("{}", dump_model(&small));

    let broken = HAND_WRITTEN.replace("\"down\", \"2/3", "\"sideways\", \"2/3");
    println!("\n{}", parse_model(&broken).unwrap_err());
}
