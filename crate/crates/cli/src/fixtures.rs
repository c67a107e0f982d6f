//! Input documents shipped with the binary, with the outcomes `selftest` expects.

use serde_json::{json, Value};

use crate::Command;

pub enum Expectation {
    Status(i32),
    /// the value at a JSON pointer into the report
    Equals(&'static str, Value),
    AllTotallyReal,
}

pub struct Fixture {
    pub name: &'static str,
    pub command: Command,
    pub document: &'static str,
    pub expectations: Vec<Expectation>,
}

pub const DOCUMENTS: [(&str, &str); 11] = [
    ("s3", include_str!("../fixtures/s3.json")),
    ("q8", include_str!("../fixtures/q8.json")),
    ("s4", include_str!("../fixtures/s4.json")),
    ("gaussian", include_str!("../fixtures/gaussian.json")),
    ("eisenstein", include_str!("../fixtures/eisenstein.json")),
    ("trivial", include_str!("../fixtures/trivial.json")),
    ("quartic", include_str!("../fixtures/quartic.json")),
    ("s3_module", include_str!("../fixtures/s3_module.json")),
    ("zeta5_module", include_str!("../fixtures/zeta5_module.json")),
    ("zeta5_cm_type", include_str!("../fixtures/zeta5_cm_type.json")),
    ("torus4", include_str!("../fixtures/torus4.json")),
];

/// Bundled document by name.
pub fn document(name: &str) -> Option<&'static str> {
    DOCUMENTS.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

fn fixture(name: &'static str, command: Command, expectations: Vec<Expectation>) -> Fixture {
    Fixture { name, command, document: document(name).expect("bundled"), expectations }
}

pub fn bundled() -> Vec<Fixture> {
    use Command::*;
    use Expectation::*;
    let gaussian_form = json!([["0", "1"], ["-1", "0"]]);
    vec![
        fixture("s3", Analyze, vec![
            Status(0),
            Equals("/result/character_table/degrees", json!([1, 1, 2])),
            Equals("/result/classes/sizes", json!([1, 3, 2])),
            AllTotallyReal,
        ]),
        fixture("q8", Analyze, vec![Status(0), Equals("/result/character_table/degrees", json!([1, 1, 1, 1, 2])), AllTotallyReal]),
        fixture("s4", Analyze, vec![Status(0), Equals("/result/character_table/degrees", json!([1, 1, 2, 3, 3]))]),
        fixture("gaussian", Rigidity, vec![Status(0), Equals("/result/is_rigid", json!(true)), Equals("/result/all_agree", json!(true))]),
        fixture("gaussian", Polarize, vec![Status(0), Equals("/result/route", json!("exact")), Equals("/result/form/matrix", gaussian_form)]),
        fixture("gaussian", Deform, vec![Status(0), Equals("/result/deformation/distance", json!(0.0))]),
        fixture("eisenstein", Polarize, vec![Status(0), Equals("/result/form/certificate/rosati", json!(true))]),
        fixture("trivial", Polarize, vec![Status(1), Equals("/error/kind", json!("NotRigid"))]),
        fixture("trivial", Rigidity, vec![Status(0), Equals("/result/hom_dimension", json!(1))]),
        fixture("quartic", Polarize, vec![Status(0), Equals("/result/cm", json!(false)), Equals("/result/certificate/verdict", json!("infeasible"))]),
        fixture("s3_module", EnumerateRigid, vec![Status(0), Equals("/result/count", json!(0)), Equals("/result/agrees", json!(true))]),
        fixture("zeta5_module", EnumerateRigid, vec![Status(0), Equals("/result/count", json!(4)), Equals("/result/agrees", json!(true))]),
        fixture("zeta5_cm_type", Rigidity, vec![Status(0), Equals("/result/is_rigid", json!(true))]),
        fixture("torus4", Deform, vec![Status(0)]),
    ]
}
