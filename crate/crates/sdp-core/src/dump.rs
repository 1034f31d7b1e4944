//! JSON dump of the compiled standard form, for cross-checking problem
//! assembly against external conic solvers. Complex entries are emitted as
//! `[re, im]` pairs; coefficient matrices as sparse `[i, j, re, im]` rows.

use serde_json::{json, Value};

use crate::compile::{compile, MatConeOrigin, RowOrigin};
use crate::problem::SdpProblem;

pub fn dump_standard_form(problem: &SdpProblem) -> Value {
    let compiled = compile(problem);
    let cones: Vec<Value> = compiled
        .mat_cones
        .iter()
        .map(|cone| {
            let f0: Vec<Vec<[f64; 2]>> = (0..cone.dim)
                .map(|i| {
                    (0..cone.dim)
                        .map(|j| [cone.f0[(i, j)].re, cone.f0[(i, j)].im])
                        .collect()
                })
                .collect();
            let coeffs: Vec<Value> = cone
                .coeffs
                .iter()
                .map(|(var, sp)| {
                    let entries: Vec<[f64; 4]> = sp
                        .entries
                        .iter()
                        .map(|&(i, j, c)| [i as f64, j as f64, c.re, c.im])
                        .collect();
                    json!({ "var": var, "entries": entries })
                })
                .collect();
            let origin = match cone.origin {
                MatConeOrigin::BlockMembership(b) => json!({
                    "kind": "block_membership",
                    "block": problem.block_name(crate::problem::BlockId(b)),
                }),
                MatConeOrigin::LmiConstraint(c) => json!({
                    "kind": "lmi",
                    "label": problem.constraints()[c].label,
                }),
            };
            json!({ "dim": cone.dim, "f0": f0, "coeffs": coeffs, "origin": origin })
        })
        .collect();

    let rows: Vec<Value> = compiled
        .nn_rows
        .iter()
        .map(|row| {
            let origin = match row.origin {
                RowOrigin::ScalarMembership(s) => json!({ "kind": "scalar_membership", "index": s }),
                RowOrigin::ScalarConstraint(c) => json!({
                    "kind": "scalar_constraint",
                    "label": problem.constraints()[c].label,
                }),
            };
            json!({ "f0": row.f0, "terms": row.terms, "origin": origin })
        })
        .collect();

    let eq_rows: Vec<Value> = compiled
        .eq_rows
        .iter()
        .map(|row| {
            json!({
                "f0": row.f0,
                "terms": row.terms,
                "label": problem.constraints()[row.constraint].label,
            })
        })
        .collect();

    json!({
        "format": "conic-v1",
        "num_vars": compiled.n_vars,
        "objective": {
            "linear": compiled.c.as_slice(),
            "constant": compiled.obj_constant,
        },
        "block_dims": compiled.block_dims,
        "psd_cones": cones,
        "nonneg_rows": rows,
        "zero_rows": eq_rows,
    })
}
