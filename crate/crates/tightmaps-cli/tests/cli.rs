#[path = "../../tightmaps/tests/common/mod.rs"]
mod common;

use std::process::Command;

use serde_json::Value as Json;
use tightmaps::catalog::rho_odd;
use tightmaps_cli::report::{to_mat, Payload, ReportDocument};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tightmaps(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tightmaps")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str]) -> ReportDocument {
    let r = tightmaps(args);
    assert_eq!(r.code, 0, "{:?}: {}", args, r.stderr);
    serde_json::from_str(&r.stdout).expect("report parses")
}

#[test]
fn certify_sostar_inclusion() {
    let doc = ok(&["certify", "--expect-tight", "std(SOSTAR_TO_SU,4)"]);
    assert_eq!(doc.command, "certify");
    assert_eq!(doc.input, "std(SOSTAR_TO_SU, 4)");
    assert!(doc.exact);
    let Payload::Certificate(c) = doc.payload else { panic!("not a certificate") };
    assert_eq!(c.alpha.len(), 1);
    assert_eq!(c.alpha[0].0, tightmaps::scalar::qi(2));
    assert!(c.tight);
    assert_eq!(c.target_rank, 4);
    let raw: Json = serde_json::from_str(&tightmaps(&["certify", "std(SOSTAR_TO_SU,4)"]).stdout).unwrap();
    assert_eq!(raw["payload"]["alpha"], serde_json::json!(["2/1"]));
}

#[test]
fn enumerate_matches_brute_force_count() {
    let doc = ok(&["enumerate", "su", "3", "3"]);
    let Payload::Shapes(s) = doc.payload else { panic!("not shapes") };
    let oracle = common::oracle_shapes(common::OracleTarget::SuMM(3));
    assert_eq!(s.count, oracle.len());
    assert_eq!(s.shapes.len(), s.count);
    // Every listed expression realizes.
    for sh in s.shapes.iter().take(4) {
        let r = ok(&["realize", &sh.expr]);
        let Payload::Realization(p) = r.payload else { panic!("not a realization") };
        assert!(p.tight && p.blocks_match, "{}", sh.expr);
    }
}

#[test]
fn canonicalize_so24() {
    let doc = ok(&["canonicalize", "alg(SO2N,2,4)"]);
    let Payload::Canonical(c) = doc.payload else { panic!("not canonical") };
    assert_eq!(c.input.display, "so(2,4)");
    assert_eq!(c.canonical.display, "su(2,2)");
}

#[test]
fn exit_codes() {
    let r = tightmaps(&["verify", "rho(0)"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("1:1"), "{}", r.stderr);
    let r = tightmaps(&["certify", "comp(rho(1),"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("1:13"), "{}", r.stderr);
    assert_eq!(tightmaps(&["certify", "--expect-tight", "std(SU_TO_SP,1,2)"]).code, 1);
    assert_eq!(tightmaps(&["certify", "--expect-holomorphic", "rho(2)"]).code, 1);
    assert_eq!(tightmaps(&["certify", "--expect-tight", "--expect-holomorphic", "rho(1)"]).code, 0);
    let r = tightmaps(&["hull", "std(SU_TO_SP,1,2)"]);
    assert_eq!(r.code, 1);
    let doc: ReportDocument = serde_json::from_str(&r.stdout).unwrap();
    assert!(matches!(doc.payload, Payload::Negative(_)));
    assert_eq!(tightmaps(&["enumerate", "gl", "2"]).code, 2);
    assert_eq!(tightmaps(&["canonicalize", "rho(1)"]).code, 2);
    assert_eq!(tightmaps(&["catalog", "f4"]).code, 2);
    assert_eq!(tightmaps(&["frobnicate"]).code, 2);
}

#[test]
fn reports_round_trip_losslessly() {
    let cases: &[&[&str]] = &[
        &["--matrices", "verify", "rho(3)"],
        &["certify", "dsum(rho(1), rho(2), same_source=true)"],
        &["--matrices", "decompose", "gl2()"],
        &["hull", "dsum(rho(1), rho(3), same_source=true)"],
        &["enumerate", "sp", "4"],
        &["--matrices", "realize", "shape(alg(SOSTAR,4), SO2(5))"],
        &["canonicalize", "asum(alg(SO2N,2,3), alg(SP,1))"],
        &["catalog", "e7", "--from", "su(1,1)", "--to", "e7(-25)"],
    ];
    for args in cases {
        let r = tightmaps(args);
        assert!(r.code == 0 || r.code == 1, "{:?}: {}", args, r.stderr);
        let doc: ReportDocument = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", r.stdout, "{:?}", args);
        assert_eq!(tightmaps(args).stdout, r.stdout, "{:?} is not deterministic", args);
    }
}

#[test]
fn exact_images_reconstruct() {
    let doc = ok(&["--matrices", "verify", "rho(3)"]);
    let Payload::Verification(v) = doc.payload else { panic!("not a verification") };
    assert!(v.homomorphism);
    let images: Vec<_> = v.map.images.unwrap().iter().map(to_mat).collect();
    assert_eq!(images, rho_odd(3).unwrap().images);
}

#[test]
fn isotropic_obstruction_is_reported() {
    let doc = ok(&["decompose", "gl2()"]);
    let Payload::Decomposition(d) = doc.payload else { panic!("not a decomposition") };
    assert_eq!(d.residual_kind, "isotropic_obstruction");
    let o = d.obstruction.expect("obstruction detail");
    assert_eq!(o.signature, [2, 2]);
    assert_eq!((o.v1.len(), o.v1[0].len()), (4, 2));
}

#[test]
fn hull_of_odd_representation() {
    let doc = ok(&["hull", "rho(3)"]);
    let Payload::Hull(h) = doc.payload else { panic!("not a hull") };
    assert_eq!(h.hull.display, "sp(6,R)");
    assert!(h.holomorphic_tight_into_target);
}

#[test]
fn catalog_paths() {
    let doc = ok(&["catalog", "so2", "5", "--from", "su(1,1)", "--to", "so(2,5)"]);
    let Payload::Diagram(d) = doc.payload else { panic!("not a diagram") };
    assert_eq!(d.target, "so(2,5)");
    let q = d.query.expect("query");
    assert!(!q.paths.is_empty());
    assert!(q.paths.iter().any(|p| p.non_commuting));
    assert!(q.paths.iter().all(|p| p.nodes.first().unwrap() == "su(1,1)" && p.nodes.last().unwrap() == "so(2,5)"));
    assert!(ok(&["catalog", "e7"]).payload != ok(&["catalog", "e6"]).payload);
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("tightmaps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.tm");
    std::fs::write(&path, "# two copies of the disc\ndsum(rho(1),\n     rho(1), same_source=true)\n").unwrap();
    let doc = ok(&["certify", "--file", path.to_str().unwrap()]);
    assert_eq!(doc.input, "dsum(rho(1), rho(1), same_source=true)");
    let r = tightmaps(&["certify", "--file", dir.join("missing.tm").to_str().unwrap()]);
    assert_eq!(r.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

/// Every object the schema lists as required is present in real output.
#[test]
fn outputs_follow_the_schema() {
    let schema: Json = serde_json::from_str(include_str!("../report.schema.json")).unwrap();
    let defs = &schema["$defs"];
    let required = |def: &Json| -> Vec<String> {
        def["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect()
    };
    let cases: &[(&[&str], &str)] = &[
        (&["verify", "rho(2)"], "verification"),
        (&["certify", "rho(2)"], "certificate"),
        (&["decompose", "gl2()"], "decomposition"),
        (&["hull", "rho(2)"], "hull"),
        (&["enumerate", "sostar", "4"], "shapes"),
        (&["realize", "shape(alg(SP,2), SP(2))"], "realization"),
        (&["canonicalize", "alg(SO2N,2,6)"], "canonical"),
        (&["catalog", "so2", "4", "--from", "su(1,1)", "--to", "so(2,4)"], "diagram"),
        (&["hull", "std(SU_TO_SP,1,2)"], "negative"),
    ];
    for (args, kind) in cases {
        let out: Json = serde_json::from_str(&tightmaps(args).stdout).unwrap();
        for k in required(&schema) {
            assert!(out.get(&k).is_some(), "{:?} lacks {}", args, k);
        }
        let payload = &out["payload"];
        assert_eq!(payload["kind"], *kind);
        let props = defs[*kind]["properties"].as_object().unwrap();
        for k in required(&defs[*kind]) {
            assert!(payload.get(&k).is_some(), "{:?} lacks {}", args, k);
        }
        for k in payload.as_object().unwrap().keys() {
            assert!(props.contains_key(k), "{:?}: {} not in schema", args, k);
        }
    }
}
