//! JSON report documents. The layout is described in `report.schema.json`.
//!
//! Rationals are strings `"num/den"`; scalars are `["re", "im"]` pairs when
//! Gaussian and `{"surds": [...]}` otherwise; matrices are row-major.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use tightmaps::algebra::{AlgebraDescriptor, Factor};
use tightmaps::branching::{DecompositionReport, ResidualKind};
use tightmaps::catalog::Homomorphism;
use tightmaps::hull::{Diagram, DiagramTarget, HullResult, ShapeRecord};
use tightmaps::matrix::Mat;
use tightmaps::scalar::{Scalar, Q};
use tightmaps::tightness::{Theorem1Outcome, TightnessCertificate};

use crate::elaborate::shape_expr;

/// An exact rational, serialized as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if !s.contains('/') {
            return Err(serde::de::Error::custom(format!("rational '{}' is not of the form num/den", s)));
        }
        s.parse::<Q>().map(Rational).map_err(|e| serde::de::Error::custom(format!("bad rational '{}': {}", s, e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurdTerm {
    pub radicand: u64,
    pub re: Rational,
    pub im: Rational,
}

/// `sum (re + i im) sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Gaussian([Rational; 2]),
    Surds { surds: Vec<SurdTerm> },
}

impl From<&Scalar> for ScalarRepr {
    fn from(x: &Scalar) -> Self {
        match x.gaussian_parts() {
            Some((re, im)) => ScalarRepr::Gaussian([Rational(re), Rational(im)]),
            None => ScalarRepr::Surds {
                surds: x
                    .terms()
                    .map(|(d, re, im)| SurdTerm { radicand: d, re: Rational(re.clone()), im: Rational(im.clone()) })
                    .collect(),
            },
        }
    }
}

impl ScalarRepr {
    pub fn to_scalar(&self) -> Scalar {
        match self {
            ScalarRepr::Gaussian([re, im]) => Scalar::gauss(re.0.clone(), im.0.clone()),
            ScalarRepr::Surds { surds } => {
                Scalar::from_parts(surds.iter().map(|t| (t.radicand, t.re.0.clone(), t.im.0.clone())))
            }
        }
    }
}

pub type Matrix = Vec<Vec<ScalarRepr>>;

pub fn matrix(m: &Mat) -> Matrix {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| ScalarRepr::from(&m[(r, c)])).collect()).collect()
}

pub fn to_mat(m: &Matrix) -> Mat {
    Mat::from_rows(m.iter().map(|row| row.iter().map(ScalarRepr::to_scalar).collect()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRepr {
    pub family: String,
    pub params: Vec<usize>,
    pub display: String,
}

impl From<&Factor> for FactorRepr {
    fn from(f: &Factor) -> Self {
        FactorRepr { family: f.family().tag().into(), params: f.params(), display: f.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRepr {
    pub display: String,
    pub factors: Vec<FactorRepr>,
    pub rank: usize,
}

impl From<&AlgebraDescriptor> for AlgebraRepr {
    fn from(a: &AlgebraDescriptor) -> Self {
        AlgebraRepr {
            display: a.to_string(),
            factors: a.factors().iter().map(FactorRepr::from).collect(),
            rank: a.rank(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSummary {
    pub label: String,
    pub source: AlgebraRepr,
    pub target: AlgebraRepr,
    /// Images of the source basis, present with `--matrices`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Matrix>>,
}

impl MapSummary {
    pub fn new(rho: &Homomorphism, with_images: bool) -> Self {
        MapSummary {
            label: rho.label.clone(),
            source: (&rho.source).into(),
            target: (&rho.target).into(),
            images: with_images.then(|| rho.images.iter().map(matrix).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub input: String,
    pub version: String,
    pub exact: bool,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Verification(Verification),
    Certificate(Certificate),
    Decomposition(Decomposition),
    Hull(Hull),
    Shapes(Shapes),
    Realization(Realization),
    Canonical(Canonical),
    Diagram(DiagramReport),
    /// The input is well formed but the operation does not apply, e.g. the
    /// hull of a map that is not tight.
    Negative(Negative),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Negative {
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub map: MapSummary,
    pub residual: Rational,
    pub homomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub flag: String,
    pub met: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub map: MapSummary,
    /// Kahler pullback coefficient per source factor.
    pub alpha: Vec<Rational>,
    pub weighted_sum: Rational,
    pub target_rank: usize,
    pub tight: bool,
    pub positive: bool,
    pub aligned: bool,
    pub holomorphic: bool,
    pub holomorphy_residual: Option<Rational>,
    /// Holomorphy check for tight positive maps without `su(1,1)` source factors.
    pub rigidity: String,
    pub expectations: Vec<Expectation>,
}

impl Certificate {
    pub fn new(rho: &Homomorphism, c: &TightnessCertificate, rigidity: &Theorem1Outcome, with_images: bool) -> Self {
        Certificate {
            map: MapSummary::new(rho, with_images),
            alpha: c.per_factor.iter().map(|(_, a)| Rational(a.clone())).collect(),
            weighted_sum: Rational(c.weighted_sum.clone()),
            target_rank: c.target_rank,
            tight: c.tight,
            positive: c.positive,
            aligned: c.aligned,
            holomorphic: c.holomorphic,
            holomorphy_residual: c.holomorphy_residual.clone().map(Rational),
            rigidity: match rigidity {
                Theorem1Outcome::Checked(true) => "holomorphic",
                Theorem1Outcome::Checked(false) => "not_holomorphic",
                Theorem1Outcome::SkippedSu11Source => "skipped_su11_source",
                Theorem1Outcome::SkippedNotTightPositive => "skipped_not_tight_positive",
            }
            .into(),
            expectations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRepr {
    pub dim: usize,
    pub signature: [usize; 2],
    pub irreducible: bool,
    pub quaternionic: bool,
    pub anti_isomorphic_pair: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub v1: Matrix,
    pub partner: Matrix,
    pub signature: [usize; 2],
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub map: MapSummary,
    pub seed: u64,
    pub residual_kind: String,
    pub blocks: Vec<BlockRepr>,
    /// Sorted `[dim, [p, q]]` pairs.
    pub block_multiset: Vec<(usize, [usize; 2])>,
    pub obstruction: Option<Obstruction>,
}

pub fn multiset(v: &[(usize, (usize, usize))]) -> Vec<(usize, [usize; 2])> {
    v.iter().map(|&(d, (p, q))| (d, [p, q])).collect()
}

impl Decomposition {
    pub fn new(rho: &Homomorphism, seed: u64, r: &DecompositionReport, with_matrices: bool) -> Self {
        Decomposition {
            map: MapSummary::new(rho, with_matrices),
            seed,
            residual_kind: match r.residual_kind {
                ResidualKind::Complete => "complete",
                ResidualKind::IsotropicObstruction => "isotropic_obstruction",
            }
            .into(),
            blocks: r
                .blocks
                .iter()
                .map(|b| BlockRepr {
                    dim: b.dim(),
                    signature: [b.signature.0, b.signature.1],
                    irreducible: b.irreducible,
                    quaternionic: b.quaternionic,
                    anti_isomorphic_pair: b.anti_isomorphic_pair,
                    basis: with_matrices.then(|| matrix(&b.basis)),
                })
                .collect(),
            block_multiset: multiset(&r.block_multiset()),
            obstruction: r.obstruction_detail.as_ref().map(|o| Obstruction {
                v1: matrix(&o.v1),
                partner: matrix(&o.partner),
                signature: [o.signature.0, o.signature.1],
                description: o.description.clone(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullPiece {
    /// `sp(2m, R)`.
    pub m: usize,
    pub copies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullFactor {
    pub factor: usize,
    pub pieces: Vec<HullPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hull {
    pub map: MapSummary,
    pub seed: u64,
    pub hull: AlgebraRepr,
    pub su11_factors: Vec<HullFactor>,
    pub holomorphic_tight_into_target: bool,
}

impl Hull {
    pub fn new(rho: &Homomorphism, seed: u64, h: &HullResult, with_images: bool) -> Self {
        Hull {
            map: MapSummary::new(rho, with_images),
            seed,
            hull: (&h.hull).into(),
            su11_factors: h
                .per_factor_detail
                .iter()
                .map(|p| HullFactor {
                    factor: p.factor,
                    pieces: p.pieces.iter().map(|&(m, copies)| HullPiece { m, copies }).collect(),
                })
                .collect(),
            holomorphic_tight_into_target: h.holomorphic_tight_into_target,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeEntryRepr {
    pub tag: String,
    pub params: Vec<usize>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GRegItem {
    pub factor: FactorRepr,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeRepr {
    pub display: String,
    /// Expression that reproduces the shape.
    pub expr: String,
    pub entries: Vec<ShapeEntryRepr>,
    pub capacity_used: usize,
    pub constraint: String,
    pub g_reg: Vec<GRegItem>,
    pub source: AlgebraRepr,
    pub hull_shape: Option<String>,
    pub block_multiset: Vec<(usize, [usize; 2])>,
}

impl From<&ShapeRecord> for ShapeRepr {
    fn from(s: &ShapeRecord) -> Self {
        ShapeRepr {
            display: s.to_string(),
            expr: shape_expr(s).to_string(),
            entries: s
                .entries
                .iter()
                .map(|e| ShapeEntryRepr {
                    tag: e.factor.tag().into(),
                    params: e.factor.params(),
                    multiplicity: e.multiplicity,
                })
                .collect(),
            capacity_used: s.capacity_used,
            constraint: s.constraint.clone(),
            g_reg: s.g_reg.iter().map(|(f, c)| GRegItem { factor: f.into(), count: *c }).collect(),
            source: (&s.source()).into(),
            hull_shape: s.hull_shape().ok().map(|h| h.to_string()),
            block_multiset: multiset(&s.block_multiset()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shapes {
    pub target: AlgebraRepr,
    pub bounds: Option<usize>,
    pub count: usize,
    pub shapes: Vec<ShapeRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub shape: ShapeRepr,
    pub map: MapSummary,
    pub residual: Rational,
    pub alpha: Vec<Rational>,
    pub tight: bool,
    pub holomorphic: bool,
    /// Block multiset found by decomposing the realized map.
    pub recovered_block_multiset: Vec<(usize, [usize; 2])>,
    pub blocks_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonical {
    pub input: AlgebraRepr,
    pub canonical: AlgebraRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRepr {
    pub from: String,
    pub to: String,
    pub label: Option<String>,
    pub non_commuting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRepr {
    pub nodes: Vec<String>,
    pub non_commuting: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathQuery {
    pub from: String,
    pub to: String,
    pub paths: Vec<PathRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub target: String,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRepr>,
    /// Set when only holomorphic maps are listed and tight non-holomorphic
    /// ones are not ruled out.
    pub caveat: bool,
    pub query: Option<PathQuery>,
}

impl DiagramReport {
    pub fn new(d: &Diagram) -> Self {
        DiagramReport {
            target: match d.target {
                DiagramTarget::So2(p) => format!("so(2,{})", p),
                DiagramTarget::E6 => "e6(-14)".into(),
                DiagramTarget::E7 => "e7(-25)".into(),
            },
            nodes: d.nodes.clone(),
            edges: d
                .edges
                .iter()
                .map(|e| EdgeRepr {
                    from: d.nodes[e.from].clone(),
                    to: d.nodes[e.to].clone(),
                    label: e.label.map(str::to_string),
                    non_commuting: e.non_commuting,
                })
                .collect(),
            caveat: d.caveat,
            query: None,
        }
    }
}
