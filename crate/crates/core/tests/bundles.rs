use std::fs;

use sethforge::bundle::{bundle_paths, read_bundle, read_witness, write_bundle, write_witness};
use sethforge::formula::{brute_force_sat, CnfFormula};
use sethforge::reductions::{build_witness, check_solution, reduce, Problem};
use sethforge::solvers::{solve_instance, DpOptions};

fn phi() -> CnfFormula {
    CnfFormula::from_dimacs_clauses(3, &[&[1, -2], &[2, 3], &[-1, -3]])
}

#[test]
fn every_problem_survives_the_disk() {
    let dir = tempfile::tempdir().unwrap();
    let phi = phi();
    let tau = brute_force_sat(&phi).unwrap().unwrap();
    for problem in Problem::ALL {
        let inst = reduce(problem, &phi, 1, 3).unwrap();
        let base = write_bundle(&inst, dir.path(), problem.name()).unwrap();
        let back = read_bundle(&base.with_extension("td")).unwrap();
        assert_eq!(back.kind, inst.kind);
        assert_eq!(back.target, inst.target);
        assert_eq!(back.graph.labels(), inst.graph.labels());
        assert_eq!(back.graph.edges(), inst.graph.edges());
        assert_eq!(back.decomposition, inst.decomposition);
        assert_eq!(back.lists, inst.lists);
        assert_eq!(back.meta, inst.meta);

        if let Ok(sol) = build_witness(&inst, &phi, &tau) {
            let w = base.with_extension("witness.json");
            write_witness(&w, &sol).unwrap();
            let read = read_witness(&w).unwrap();
            assert_eq!(read, sol);
            assert!(check_solution(&back, &read).unwrap(), "{problem:?}");
        }
    }
}

#[test]
fn solved_bundle_matches_in_memory_answer() {
    let dir = tempfile::tempdir().unwrap();
    let inst = reduce(Problem::MaxCut, &phi(), 1, 3).unwrap();
    let base = write_bundle(&inst, dir.path(), "cut").unwrap();
    let back = read_bundle(&base).unwrap();
    let opts = DpOptions::default();
    assert_eq!(solve_instance(&back, &opts).unwrap().optimum, solve_instance(&inst, &opts).unwrap().optimum);
}

#[test]
fn tampered_bundles_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = reduce(Problem::Is, &phi(), 1, 3).unwrap();
    let base = write_bundle(&inst, dir.path(), "is").unwrap();
    let [gr, td, json] = bundle_paths(&base);

    let original = fs::read_to_string(&json).unwrap();
    let mut header: serde_json::Value = serde_json::from_str(&original).unwrap();
    header["labels"].as_array_mut().unwrap().pop();
    fs::write(&json, header.to_string()).unwrap();
    assert_eq!(read_bundle(&base).unwrap_err().category(), "invalid-bundle");
    fs::write(&json, &original).unwrap();

    // A single bag holding one vertex cannot cover the edges.
    let td_text = fs::read_to_string(&td).unwrap();
    fs::write(&td, format!("s td 1 1 {}\nb 1 1\n", inst.graph.num_vertices())).unwrap();
    assert_eq!(read_bundle(&base).unwrap_err().category(), "invalid-bundle");
    fs::write(&td, td_text).unwrap();

    fs::remove_file(&gr).unwrap();
    assert_eq!(read_bundle(&base).unwrap_err().category(), "io");
}
