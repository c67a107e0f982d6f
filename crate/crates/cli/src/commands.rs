use serde_json::{json, Value};
use toruskit::arith::SubfieldSpec;
use toruskit::deform::find_projective_neighbor;
use toruskit::group::{centre_decomposition, character_table_seeded, galois_orbits, FieldTag};
use toruskit::hodge::decomposition::decomposition_from_multiplicities;
use toruskit::hodge::report::HodgeInput;
use toruskit::hodge::symbolic::brute_force_rigid_type_count;
use toruskit::hodge::{
    enumerate_rigid_types, hodge_character_from_numeric, isotypic_split, rigidity_by_character, rigidity_report,
    IntegralRepresentation, SymbolicHodgeSpec,
};
use toruskit::polarize::{assemble_polarization, polarization_exists, HodgeData, PolarizeOptions};

use crate::fixtures::{bundled, Expectation};
use crate::schema::InputDocument;
use crate::{run, CliError, Command, Options};

/// Largest total embedding count for which enumeration is cross-checked by brute force.
const BRUTE_FORCE_EMBEDDINGS: usize = 12;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn dispatch(command: Command, doc: &InputDocument, opts: &Options) -> Result<Value, CliError> {
    let body = match command {
        Command::Analyze => analyze(doc, opts)?,
        Command::Rigidity => rigidity(doc, opts)?,
        Command::EnumerateRigid => enumerate(doc)?,
        Command::Polarize => polarize(doc, opts)?,
        Command::Deform => deform(doc, opts)?,
        Command::Selftest => return Ok(selftest(opts)),
    };
    Ok(json!({ "command": command.name(), "input": doc.label(), "result": body }))
}

fn analyze(doc: &InputDocument, opts: &Options) -> Result<Value, CliError> {
    let g = doc.group()?;
    let table = character_table_seeded(&g, opts.seed)?;
    let orbits = galois_orbits(&table, &g)?;
    let centre = centre_decomposition(&table, &orbits);
    Ok(json!({
        "group": { "name": g.name(), "order": g.order(), "exponent": g.exponent(), "abelian": g.is_abelian() },
        "seed": table.seed,
        "classes": to_value(&table.classes),
        "character_table": { "conductor": table.conductor(), "degrees": table.degrees, "values": to_value(&table.values) },
        "orbits": to_value(&orbits.orbits),
        "centre": to_value(&centre),
    }))
}

fn rigidity(doc: &InputDocument, opts: &Options) -> Result<Value, CliError> {
    if let Some(spec) = doc.symbolic()? {
        let rep = doc.generator_matrices.as_ref().map(|_| doc.representation()).transpose()?;
        return Ok(to_value(&rigidity_report(rep.as_ref(), HodgeInput::Symbolic(&spec), &opts.hodge)?));
    }
    let rep = doc.representation()?;
    let j = doc.complex_structure()?;
    Ok(to_value(&rigidity_report(Some(&rep), HodgeInput::Numeric(&j), &opts.hodge)?))
}

fn module_of(rep: &IntegralRepresentation) -> Result<Vec<(SubfieldSpec, u32)>, CliError> {
    let table = toruskit::group::character_table(rep.group())?;
    let orbits = galois_orbits(&table, rep.group())?;
    let pieces = isotypic_split(rep, &orbits);
    Ok(orbits
        .orbits
        .iter()
        .zip(&pieces)
        .map(|(o, p)| (o.field.clone(), (p.dimension() / o.degree) as u32))
        .collect())
}

fn describe(spec: &SymbolicHodgeSpec) -> Value {
    Value::Array(
        spec.summands
            .iter()
            .map(|s| {
                json!({
                    "conductor": s.field.ambient().conductor(),
                    "fixing": s.field.fixing_subgroup(),
                    "degree": s.field.degree(),
                    "multiplicity": s.multiplicity,
                    "tau": to_value(&s.tau),
                })
            })
            .collect(),
    )
}

fn enumerate(doc: &InputDocument) -> Result<Value, CliError> {
    let module = match doc.module()? {
        Some(m) => m,
        None => module_of(&doc.representation()?)?,
    };
    let types = enumerate_rigid_types(&module);
    let embeddings: usize = module.iter().map(|(f, _)| f.degree()).sum();
    let brute = (embeddings <= BRUTE_FORCE_EMBEDDINGS).then(|| brute_force_rigid_type_count(&module));
    let tags: Vec<&str> =
        module.iter().map(|(f, _)| if f.is_totally_real() { "TotallyReal" } else { "CM" }).collect();
    Ok(json!({
        "module": module.iter().zip(&tags).map(|((f, n), t)| json!({
            "conductor": f.ambient().conductor(),
            "fixing": f.fixing_subgroup(),
            "degree": f.degree(),
            "multiplicity": n,
            "tag": t,
        })).collect::<Vec<_>>(),
        "count": types.len(),
        "brute_force_count": brute,
        "agrees": brute.map(|b| b == types.len() as u64),
        "types": types.iter().map(describe).collect::<Vec<_>>(),
    }))
}

fn polarize(doc: &InputDocument, opts: &Options) -> Result<Value, CliError> {
    if let Some(f) = doc.polynomial()? {
        let cert = polarization_exists(&f, doc.embedding_set.as_deref())?;
        return Ok(json!({ "route": "polynomial-field", "cm": cert.exists(), "certificate": to_value(&cert) }));
    }
    let rep = doc.representation()?;
    let j = doc.complex_structure()?;
    let popts = PolarizeOptions { g_invariant: opts.g_invariant, tolerances: opts.polarize, hodge: opts.hodge };
    // an exact decomposition is available whenever every isotypic part lies
    // wholly on one side, which is the case for rigid actions
    let table = toruskit::group::character_table(rep.group())?;
    let chi = hodge_character_from_numeric(&rep, &j, &opts.hodge)?;
    let mult = rigidity_by_character(&chi, &table)?.multiplicities;
    let (route, form) = match decomposition_from_multiplicities(&rep, &table, &mult) {
        Some(dec) => ("exact", assemble_polarization(&rep, HodgeData::Exact(&dec), &popts)?),
        None => ("numeric", assemble_polarization(&rep, HodgeData::Numeric(&j), &popts)?),
    };
    Ok(json!({ "route": route, "form": to_value(&form) }))
}

fn deform(doc: &InputDocument, opts: &Options) -> Result<Value, CliError> {
    let rep = doc.representation()?;
    let j = doc.complex_structure()?;
    let r = find_projective_neighbor(&rep, &j, opts.max_denominator, opts.epsilon, &opts.deform)?;
    Ok(json!({
        "max_denominator": opts.max_denominator,
        "epsilon": opts.epsilon,
        "tolerances": to_value(&opts.deform),
        "deformation": to_value(&r),
    }))
}

fn check(exp: &Expectation, status: i32, report: &Value) -> Result<(), String> {
    let at = |path: &str| report.pointer(path).cloned().unwrap_or(Value::Null);
    match exp {
        Expectation::Status(s) if *s != status => Err(format!("exit status {status}, expected {s}")),
        Expectation::Status(_) => Ok(()),
        Expectation::Equals(path, v) if at(path) != *v => Err(format!("{path} = {}, expected {v}", at(path))),
        Expectation::Equals(..) => Ok(()),
        Expectation::AllTotallyReal => {
            let tags = at("/result/orbits");
            let all = tags.as_array().is_some_and(|a| {
                a.iter().all(|o| o["tag"] == to_value(&FieldTag::TotallyReal))
            });
            all.then_some(()).ok_or_else(|| "an orbit is not totally real".to_string())
        }
    }
}

/// Runs every bundled fixture through its command and checks the expectations.
pub fn selftest(opts: &Options) -> Value {
    let mut rows = Vec::new();
    let mut passed = true;
    for f in bundled() {
        let (status, report) = run(f.command, Some(f.document), opts);
        let failures: Vec<String> =
            f.expectations.iter().filter_map(|e| check(e, status, &report).err()).collect();
        passed &= failures.is_empty();
        rows.push(json!({
            "fixture": f.name,
            "command": f.command.name(),
            "status": status,
            "passed": failures.is_empty(),
            "failures": failures,
        }));
    }
    json!({ "command": "selftest", "passed": passed, "checks": rows })
}
