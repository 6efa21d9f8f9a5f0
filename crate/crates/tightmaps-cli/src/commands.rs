//! Command dispatch, independent of argument parsing.

use std::fmt;

use tightmaps::algebra::{make_algebra, Family};
use tightmaps::branching::{decompose, invariant_decomposition_su_seeded};
use tightmaps::catalog::{verify_homomorphism, Homomorphism};
use tightmaps::error::Error as LibError;
use tightmaps::hull::{
    canonicalize, diagram, enumerate_shapes, hermitian_hull, realize_shape, Bounds, DiagramTarget, TargetKind,
};
use tightmaps::tightness::{certify, theorem1_check};

use crate::elaborate::{elaborate, Value};
use crate::report::*;
use crate::syntax::parse_spec;

#[derive(Clone, Debug)]
pub enum Request {
    Verify { expr: String },
    Certify { expr: String, expect_tight: bool, expect_holomorphic: bool },
    Decompose { expr: String, seed: u64 },
    Hull { expr: String, seed: u64 },
    Enumerate { family: String, params: Vec<usize>, bounds: Option<usize> },
    Realize { expr: String, seed: u64 },
    Canonicalize { expr: String },
    Catalog { which: String, p: Option<usize>, from: Option<String>, to: Option<String> },
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Include exact matrices (images, block bases) in the report.
    pub matrices: bool,
}

/// Input errors; the process exits with status 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// A report with its exit status: 0 success, 1 mathematical negative.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: ReportDocument,
    pub exit: u8,
    /// Human-readable reasons behind a nonzero exit.
    pub notes: Vec<String>,
}

fn input_err(e: impl fmt::Display) -> InputError {
    InputError(e.to_string())
}

fn lib_err(e: LibError) -> InputError {
    InputError(e.to_string())
}

fn value(expr: &str) -> Result<(String, Value), InputError> {
    let e = parse_spec(expr).map_err(input_err)?;
    let v = elaborate(&e).map_err(input_err)?;
    Ok((e.to_string(), v))
}

fn hom_value(expr: &str) -> Result<(String, Homomorphism), InputError> {
    match value(expr)? {
        (s, Value::Hom(h)) => Ok((s, h)),
        (s, _) => Err(InputError(format!("{} is not a homomorphism", s))),
    }
}

fn document(command: &str, input: String, payload: Payload) -> ReportDocument {
    ReportDocument { command: command.into(), input, version: tightmaps::VERSION.into(), exact: true, payload }
}

pub fn run(req: &Request, opts: &Options) -> Result<Outcome, InputError> {
    let mut notes = Vec::new();
    let (command, input, payload) = match req {
        Request::Verify { expr } => {
            let (input, rho) = hom_value(expr)?;
            let residual = verify_homomorphism(&rho);
            let ok = residual == num_zero();
            if !ok {
                notes.push(format!("bracket residual {}", residual));
            }
            let p = Verification {
                map: MapSummary::new(&rho, opts.matrices),
                residual: Rational(residual),
                homomorphism: ok,
            };
            ("verify", input, Payload::Verification(p))
        }
        Request::Certify { expr, expect_tight, expect_holomorphic } => {
            let (input, rho) = hom_value(expr)?;
            let c = certify(&rho).map_err(lib_err)?;
            let t1 = theorem1_check(&rho).map_err(lib_err)?;
            let mut p = Certificate::new(&rho, &c, &t1, opts.matrices);
            for (flag, on, met) in [
                ("--expect-tight", *expect_tight, c.tight),
                ("--expect-holomorphic", *expect_holomorphic, c.holomorphic),
            ] {
                if on {
                    p.expectations.push(Expectation { flag: flag.into(), met });
                    if !met {
                        notes.push(format!("{} not met", flag));
                    }
                }
            }
            ("certify", input, Payload::Certificate(p))
        }
        Request::Decompose { expr, seed } => {
            let (input, rho) = hom_value(expr)?;
            let r = decompose(&rho, *seed).map_err(lib_err)?;
            ("decompose", input, Payload::Decomposition(Decomposition::new(&rho, *seed, &r, opts.matrices)))
        }
        Request::Hull { expr, seed } => {
            let (input, rho) = hom_value(expr)?;
            let r = decompose(&rho, *seed).map_err(lib_err)?;
            let h = match hermitian_hull(&rho, &r) {
                Ok(h) => h,
                Err(e @ (LibError::NotTight | LibError::NotPositive)) => {
                    return Ok(negative("hull", input, e.to_string()));
                }
                Err(e) => return Err(lib_err(e)),
            };
            ("hull", input, Payload::Hull(Hull::new(&rho, *seed, &h, opts.matrices)))
        }
        Request::Enumerate { family, params, bounds } => {
            let fam = Family::parse(family).ok_or_else(|| InputError(format!("unknown family '{}'", family)))?;
            let target = make_algebra(fam, params).map_err(lib_err)?;
            let kind = TargetKind::of(&target).map_err(lib_err)?;
            let b = bounds.map(|n| Bounds { max_part: n });
            let shapes = enumerate_shapes(&target, b).map_err(lib_err)?;
            let input = format!("{} {}", fam.tag(), params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "));
            let p = Shapes {
                target: (&target).into(),
                bounds: Some(b.unwrap_or_else(|| Bounds::default_for(kind)).max_part),
                count: shapes.len(),
                shapes: shapes.iter().map(ShapeRepr::from).collect(),
            };
            ("enumerate", input, Payload::Shapes(p))
        }
        Request::Realize { expr, seed } => {
            let (input, shape) = match value(expr)? {
                (s, Value::Shape(sh)) => (s, sh),
                (s, _) => return Err(InputError(format!("{} is not a shape", s))),
            };
            let rho = realize_shape(&shape).map_err(lib_err)?;
            let residual = verify_homomorphism(&rho);
            let c = certify(&rho).map_err(lib_err)?;
            // Shapes record blocks of the complex representation, also for so* targets.
            let r = invariant_decomposition_su_seeded(&rho, *seed).map_err(lib_err)?;
            let expected = shape.block_multiset();
            let recovered = r.block_multiset();
            let p = Realization {
                shape: (&shape).into(),
                map: MapSummary::new(&rho, opts.matrices),
                residual: Rational(residual.clone()),
                alpha: c.per_factor.iter().map(|(_, a)| Rational(a.clone())).collect(),
                tight: c.tight,
                holomorphic: c.holomorphic,
                recovered_block_multiset: multiset(&recovered),
                blocks_match: expected == recovered,
            };
            if residual != num_zero() || !c.tight || !p.blocks_match {
                notes.push("realization is not a tight map with the predicted blocks".into());
            }
            ("realize", input, Payload::Realization(p))
        }
        Request::Canonicalize { expr } => {
            let (input, a) = match value(expr)? {
                (s, Value::Alg(a)) => (s, a),
                (s, _) => return Err(InputError(format!("{} is not an algebra", s))),
            };
            let p = Canonical { input: (&a).into(), canonical: (&canonicalize(&a)).into() };
            ("canonicalize", input, Payload::Canonical(p))
        }
        Request::Catalog { which, p, from, to } => {
            let target = match (which.to_ascii_lowercase().as_str(), p) {
                ("so2" | "so2n", Some(p)) => DiagramTarget::So2(*p),
                ("so2" | "so2n", None) => return Err(InputError("catalog so2 needs p".into())),
                ("e6", None) => DiagramTarget::E6,
                ("e7", None) => DiagramTarget::E7,
                (w, _) => return Err(InputError(format!("unknown catalog '{}' (expected so2 P, e6 or e7)", w))),
            };
            let d = diagram(target).map_err(lib_err)?;
            let mut rep = DiagramReport::new(&d);
            match (from, to) {
                (Some(a), Some(b)) => {
                    let ia = d.index(a).ok_or_else(|| InputError(format!("no node '{}'", a)))?;
                    let ib = d.index(b).ok_or_else(|| InputError(format!("no node '{}'", b)))?;
                    let paths = d
                        .paths(ia, ib)
                        .into_iter()
                        .map(|p| PathRepr {
                            nodes: p.nodes.iter().map(|&i| d.nodes[i].clone()).collect(),
                            non_commuting: p.non_commuting,
                        })
                        .collect();
                    rep.query = Some(PathQuery { from: a.clone(), to: b.clone(), paths });
                }
                (None, None) => {}
                _ => return Err(InputError("--from and --to go together".into())),
            }
            let input = match p {
                Some(p) => format!("{} {}", which, p),
                None => which.clone(),
            };
            ("catalog", input, Payload::Diagram(rep))
        }
    };
    let exit = u8::from(!notes.is_empty());
    Ok(Outcome { document: document(command, input, payload), exit, notes })
}

fn negative(command: &str, input: String, reason: String) -> Outcome {
    let payload = Payload::Negative(Negative { reason: reason.clone() });
    Outcome { document: document(command, input, payload), exit: 1, notes: vec![reason] }
}

fn num_zero() -> tightmaps::scalar::Q {
    tightmaps::scalar::qi(0)
}
