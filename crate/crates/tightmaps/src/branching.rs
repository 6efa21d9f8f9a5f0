//! Decomposition of the target space of a homomorphism into pairwise
//! orthogonal, nondegenerate, invariant blocks.
//!
//! Irreducibility is decided by the commutant (Schur). Reducible subspaces are
//! split by the Fitting decomposition `ker(c^N) + im(c^N)` of a commutant
//! element `c` that is singular but not nilpotent.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{Factor, Family};
use crate::catalog::{verify_homomorphism, Homomorphism};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_diagonalize, hermitian_signature, independent_subset, Mat, RowReducer};
use crate::scalar::{Scalar, Q};
use crate::tightness::certify;

pub const DEFAULT_SEED: u64 = 0x7157_6d61_7073;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualKind {
    Complete,
    IsotropicObstruction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Columns span the subspace.
    pub basis: Mat,
    pub signature: (usize, usize),
    pub irreducible: bool,
    pub quaternionic: bool,
    pub anti_isomorphic_pair: bool,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionDetail {
    /// An isotropic irreducible invariant subspace.
    pub v1: Mat,
    /// An isotropic irreducible invariant subspace pairing nontrivially with `v1`.
    pub partner: Mat,
    /// Signature `(k,k)` of `v1 + partner`.
    pub signature: (usize, usize),
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub blocks: Vec<Block>,
    pub residual_kind: ResidualKind,
    pub obstruction_detail: Option<ObstructionDetail>,
}

impl DecompositionReport {
    /// Multiset of `(dim, signature)` over the blocks, sorted.
    pub fn block_multiset(&self) -> Vec<(usize, (usize, usize))> {
        let mut v: Vec<_> = self.blocks.iter().map(|b| (b.dim(), b.signature)).collect();
        v.sort();
        v
    }
}

type Vector = Vec<Scalar>;

/// The image algebra acting on `C^n` with its invariant Hermitian form.
#[derive(Clone, Debug)]
pub struct Module {
    pub gens: Vec<Mat>,
    pub form: Mat,
    seed: u64,
}

fn columns_to_mat(n: usize, cols: &[Vector]) -> Mat {
    Mat::from_columns(n, cols)
}

fn flat(m: &Mat) -> Vector {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        v.extend(m.row(r));
    }
    v
}

fn mat_pow(c: &Mat, e: usize) -> Mat {
    let mut result = Mat::identity(c.rows());
    let mut base = c.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

impl Module {
    /// Uses an independent subset of `gens`; `form` is the invariant Hermitian gram.
    pub fn new(gens: &[Mat], form: Mat, seed: u64) -> Self {
        let flats: Vec<Vector> = gens.iter().map(flat).collect();
        let keep = independent_subset(&flats);
        let n = form.rows();
        let gens = keep.into_iter().map(|v| Mat::from_fn(n, n, |r, c| v[r * n + c].clone())).collect();
        Module { gens, form, seed }
    }

    pub fn from_homomorphism(rho: &Homomorphism, seed: u64) -> Result<Self> {
        let form = rho.target.gram();
        if rho.target.factors().iter().any(|f| matches!(f.family(), Family::So2n)) {
            return Err(Error::Unsupported(format!("decomposition for target {}", rho.target)));
        }
        Ok(Module::new(&rho.images, form, seed))
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    /// Action of the generators on the invariant subspace spanned by `u`.
    pub fn restrict(&self, u: &[Vector]) -> Vec<Mat> {
        let n = self.dim();
        let um = columns_to_mat(n, u);
        let ua = um.adjoint();
        let left = ua.mul(&um).inverse().expect("independent columns").mul(&ua);
        self.gens.iter().map(|g| left.mul(&g.mul(&um))).collect()
    }

    pub fn is_invariant(&self, u: &[Vector]) -> bool {
        let n = self.dim();
        let mut red = RowReducer::new(n);
        for v in u {
            red.push(v.iter().cloned().enumerate());
        }
        self.gens.iter().all(|g| u.iter().all(|v| red.contains(&g.mul_vec(v))))
    }

    /// Gram matrix of the form on `u`.
    pub fn gram_on(&self, u: &[Vector]) -> Mat {
        let um = columns_to_mat(self.dim(), u);
        um.adjoint().mul(&self.form).mul(&um)
    }

    pub fn signature(&self, u: &[Vector]) -> (usize, usize) {
        let (p, q, _) = hermitian_signature(&self.gram_on(u));
        (p, q)
    }

    pub fn is_nondegenerate(&self, u: &[Vector]) -> bool {
        self.gram_on(u).rank() == u.len()
    }

    /// Basis of `{X : X A = B X}` for the restricted actions `a` and `b`.
    fn hom_space(a: &[Mat], b: &[Mat]) -> Vec<Mat> {
        let (da, db) = (a[0].rows(), b[0].rows());
        // Unknown X is db x da, index r*da + c.
        let mut red = RowReducer::new(da * db);
        for (ga, gb) in a.iter().zip(b) {
            for r in 0..db {
                for c in 0..da {
                    // (X ga)_{rc} - (gb X)_{rc}
                    let mut row: Vec<(usize, Scalar)> = Vec::new();
                    for k in 0..da {
                        let v = &ga[(k, c)];
                        if !v.is_zero() {
                            row.push((r * da + k, v.clone()));
                        }
                    }
                    for k in 0..db {
                        let v = &gb[(r, k)];
                        if !v.is_zero() {
                            row.push((k * da + c, -v));
                        }
                    }
                    red.push(row);
                }
            }
        }
        red.kernel().into_iter().map(|v| Mat::from_fn(db, da, |r, c| v[r * da + c].clone())).collect()
    }

    /// Commutant of the restricted action, as `d x d` matrices.
    pub fn commutant(&self, u: &[Vector]) -> Vec<Mat> {
        let a = self.restrict(u);
        if a.is_empty() {
            let d = u.len();
            return (0..d * d).map(|i| Mat::unit(d, i / d, i % d, Scalar::one())).collect();
        }
        Self::hom_space(&a, &a)
    }

    /// Intertwiners from the subspace `u` to the subspace `w`, as ambient maps `u -> w`
    /// given in coordinates.
    pub fn intertwiners(&self, u: &[Vector], w: &[Vector]) -> Vec<Mat> {
        let a = self.restrict(u);
        let b = self.restrict(w);
        if a.is_empty() {
            return Vec::new();
        }
        Self::hom_space(&a, &b)
    }

    pub fn is_irreducible(&self, u: &[Vector]) -> bool {
        self.commutant(u).len() == 1
    }

    fn fitting_split(&self, u: &[Vector], c: &Mat) -> Option<(Vec<Vector>, Vec<Vector>)> {
        let d = u.len();
        let cn = mat_pow(c, d);
        let r = cn.rank();
        if r == 0 || r == d {
            return None;
        }
        let n = self.dim();
        let um = columns_to_mat(n, u);
        let ker: Vec<Vector> = cn.nullspace().iter().map(|y| um.mul_vec(y)).collect();
        let im: Vec<Vector> = independent_subset(&cn.columns()).iter().map(|y| um.mul_vec(y)).collect();
        Some((ker, im))
    }

    /// Candidate commutant elements in a fixed deterministic order.
    fn split_candidates(&self, comm: &[Mat]) -> Vec<Mat> {
        let mut out: Vec<Mat> = comm.to_vec();
        let i = Scalar::i();
        for a in 0..comm.len() {
            for b in a + 1..comm.len() {
                out.push(comm[a].add(&comm[b]));
                out.push(comm[a].sub(&comm[b]));
                out.push(comm[a].add(&comm[b].scale(&i)));
                out.push(comm[a].sub(&comm[b].scale(&i)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..24 {
            let mut m = Mat::zeros(comm[0].rows(), comm[0].cols());
            for c in comm {
                let k = (rng.next_u32() % 7) as i64 - 3;
                if k != 0 {
                    m.axpy(&Scalar::from_i64(k), c);
                }
            }
            out.push(m);
        }
        // Shifts by diagonal entries catch elements with an eigenvalue on the diagonal.
        let base: Vec<Mat> = out.iter().take(comm.len()).cloned().collect();
        for c in base {
            let mut seen: Vec<Scalar> = Vec::new();
            for r in 0..c.rows() {
                let l = c[(r, r)].clone();
                if !seen.contains(&l) {
                    out.push(c.sub(&Mat::identity(c.rows()).scale(&l)));
                    seen.push(l);
                }
            }
        }
        out
    }

    /// Splits an invariant subspace into irreducible invariant subspaces (not
    /// necessarily orthogonal), smallest dimension first.
    pub fn irreducibles(&self, u: &[Vector]) -> Result<Vec<Vec<Vector>>> {
        let comm = self.commutant(u);
        if comm.len() == 1 {
            return Ok(vec![u.to_vec()]);
        }
        for c in self.split_candidates(&comm) {
            if let Some((a, b)) = self.fitting_split(u, &c) {
                let mut out = self.irreducibles(&a)?;
                out.extend(self.irreducibles(&b)?);
                out.sort_by_key(Vec::len);
                return Ok(out);
            }
        }
        Err(Error::Incomplete(format!(
            "no splitting element found in a commutant of dimension {} on a subspace of dimension {}",
            comm.len(),
            u.len()
        )))
    }

    /// Vectors of `v` orthogonal to `w`.
    fn complement(&self, v: &[Vector], w: &[Vector]) -> Vec<Vector> {
        let n = self.dim();
        let wm = columns_to_mat(n, w);
        let vm = columns_to_mat(n, v);
        let pairing = wm.adjoint().mul(&self.form).mul(&vm);
        pairing.nullspace().iter().map(|y| vm.mul_vec(y)).collect()
    }

    /// `{x + s T x}` for `x` in `u`, with `t` in coordinates `u -> w`.
    fn graph(&self, u: &[Vector], w: &[Vector], t: &Mat, s: &Scalar) -> Vec<Vector> {
        let n = self.dim();
        let wm = columns_to_mat(n, w);
        (0..u.len())
            .map(|j| {
                let tx = wm.mul_vec(&t.column(j));
                u[j].iter().zip(&tx).map(|(a, b)| a + &(b * s)).collect()
            })
            .collect()
    }

    /// A nondegenerate irreducible invariant subspace of `v`, or the
    /// obstruction pair when every irreducible is isotropic.
    fn nondegenerate_irreducible(&self, v: &[Vector]) -> Result<core::result::Result<Vec<Vector>, ObstructionDetail>> {
        let irr = self.irreducibles(v)?;
        if let Some(w) = irr.iter().find(|w| self.is_nondegenerate(w)) {
            return Ok(Ok(w.clone()));
        }
        let n = self.dim();
        for a in 0..irr.len() {
            for b in 0..irr.len() {
                if a == b || irr[a].len() != irr[b].len() {
                    continue;
                }
                let ts = self.intertwiners(&irr[a], &irr[b]);
                if ts.len() != 1 {
                    continue;
                }
                for s in [Scalar::one(), Scalar::i()] {
                    let g = self.graph(&irr[a], &irr[b], &ts[0], &s);
                    if self.is_nondegenerate(&g) {
                        return Ok(Ok(g));
                    }
                }
            }
        }
        let v1 = &irr[0];
        let m1 = columns_to_mat(n, v1);
        let partner = irr
            .iter()
            .skip(1)
            .find(|w| !m1.adjoint().mul(&self.form).mul(&columns_to_mat(n, w)).is_zero())
            .ok_or_else(|| Error::Internal("isotropic irreducible without a partner".into()))?;
        let mut both = v1.clone();
        both.extend(partner.iter().cloned());
        let sig = self.signature(&both);
        Ok(Err(ObstructionDetail {
            v1: m1,
            partner: columns_to_mat(n, partner),
            signature: sig,
            description: format!(
                "every irreducible invariant subspace is isotropic; a {}-dimensional one pairs with a {}-dimensional one, signature {:?}",
                v1.len(),
                partner.len(),
                sig
            ),
        }))
    }

    /// Orthogonal decomposition into nondegenerate irreducible invariant blocks.
    pub fn decompose(&self) -> Result<DecompositionReport> {
        let n = self.dim();
        let mut rest: Vec<Vector> = (0..n).map(|i| Mat::identity(n).column(i)).collect();
        let mut blocks = Vec::new();
        while !rest.is_empty() {
            match self.nondegenerate_irreducible(&rest)? {
                Ok(w) => {
                    rest = self.complement(&rest, &w);
                    blocks.push(Block {
                        signature: self.signature(&w),
                        basis: columns_to_mat(n, &w),
                        irreducible: true,
                        quaternionic: false,
                        anti_isomorphic_pair: false,
                    });
                }
                Err(detail) => {
                    return Ok(DecompositionReport {
                        blocks,
                        residual_kind: ResidualKind::IsotropicObstruction,
                        obstruction_detail: Some(detail),
                    })
                }
            }
        }
        Ok(DecompositionReport { blocks, residual_kind: ResidualKind::Complete, obstruction_detail: None })
    }

    /// Like [`Module::decompose`], grouping each block with its image under the
    /// antilinear map `v -> K conj(v)`.
    pub fn decompose_quaternionic(&self, k: &Mat) -> Result<DecompositionReport> {
        let n = self.dim();
        let jmap = |u: &[Vector]| -> Vec<Vector> {
            u.iter().map(|v| k.mul_vec(&v.iter().map(Scalar::conj).collect::<Vec<_>>())).collect()
        };
        let mut rest: Vec<Vector> = (0..n).map(|i| Mat::identity(n).column(i)).collect();
        let mut blocks = Vec::new();
        while !rest.is_empty() {
            let w = match self.nondegenerate_irreducible(&rest)? {
                Ok(w) => w,
                Err(detail) => {
                    return Ok(DecompositionReport {
                        blocks,
                        residual_kind: ResidualKind::IsotropicObstruction,
                        obstruction_detail: Some(detail),
                    })
                }
            };
            let jw = jmap(&w);
            let mut span = w.clone();
            span.extend(jw.iter().cloned());
            let span = independent_subset(&span);
            let quaternionic = span.len() == w.len();
            if !self.is_nondegenerate(&span) {
                return Err(Error::Incomplete("block plus its J-image is degenerate".into()));
            }
            rest = self.complement(&rest, &span);
            blocks.push(Block {
                signature: self.signature(&span),
                basis: columns_to_mat(n, &span),
                irreducible: quaternionic,
                quaternionic,
                anti_isomorphic_pair: !quaternionic,
            });
        }
        Ok(DecompositionReport { blocks, residual_kind: ResidualKind::Complete, obstruction_detail: None })
    }
}

/// The antilinear structure `J(v) = K conj(v)` of the `so*(2n)` model, `J^2 = -1`.
pub fn sostar_structure(n: usize) -> Mat {
    let mut k = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        k[(i, n + i)] = Scalar::from_i64(-1);
        k[(n + i, i)] = Scalar::one();
    }
    k
}

fn check(rho: &Homomorphism) -> Result<()> {
    let r = verify_homomorphism(rho);
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::NotHomomorphism(r))
    }
}

/// Decomposition for maps into `su(p,q)` (also `u(p,q)`, and `sp`, `so*` viewed
/// inside `su(n,n)`).
pub fn invariant_decomposition_su(rho: &Homomorphism) -> Result<DecompositionReport> {
    invariant_decomposition_su_seeded(rho, DEFAULT_SEED)
}

pub fn invariant_decomposition_su_seeded(rho: &Homomorphism, seed: u64) -> Result<DecompositionReport> {
    check(rho)?;
    Module::from_homomorphism(rho, seed)?.decompose()
}

/// Decomposition for maps into `so*(2p)`, with quaternionic and
/// anti-isomorphic pair flags.
pub fn invariant_decomposition_sostar(rho: &Homomorphism) -> Result<DecompositionReport> {
    invariant_decomposition_sostar_seeded(rho, DEFAULT_SEED)
}

pub fn invariant_decomposition_sostar_seeded(rho: &Homomorphism, seed: u64) -> Result<DecompositionReport> {
    check(rho)?;
    let [Factor::SoStar { n }] = rho.target.factors() else {
        return Err(Error::Unsupported(format!("target {} is not so*(2n)", rho.target)));
    };
    Module::from_homomorphism(rho, seed)?.decompose_quaternionic(&sostar_structure(*n))
}

/// Dispatches on the target family.
pub fn decompose(rho: &Homomorphism, seed: u64) -> Result<DecompositionReport> {
    match rho.target.factors() {
        [Factor::SoStar { .. }] => invariant_decomposition_sostar_seeded(rho, seed),
        _ => invariant_decomposition_su_seeded(rho, seed),
    }
}

/// Which source factors act nontrivially on each block.
pub fn block_support(rho: &Homomorphism, report: &DecompositionReport) -> Vec<Vec<usize>> {
    let basis = rho.source_basis();
    let module = Module { gens: Vec::new(), form: rho.target.gram(), seed: DEFAULT_SEED };
    report
        .blocks
        .iter()
        .map(|b| {
            let cols = b.basis.columns();
            let mut fs: Vec<usize> = Vec::new();
            for (j, im) in rho.images.iter().enumerate() {
                let f = basis.factor_of[j];
                if fs.contains(&f) {
                    continue;
                }
                let local = Module { gens: vec![im.clone()], ..module.clone() };
                if !local.restrict(&cols)[0].is_zero() {
                    fs.push(f);
                }
            }
            fs.sort();
            fs
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum SplitOutcome {
    /// Block indices assigned to each of the two source factors; blocks on
    /// which neither acts are listed as trivial.
    Split { factor_blocks: [Vec<usize>; 2], trivial_blocks: Vec<usize>, signatures: [(usize, usize); 2] },
    /// Some block sees both source factors.
    NotSplit { block: usize, description: String },
}

/// Assigns blocks of a decomposition to the factors of a two-factor source,
/// without requiring tightness.
pub fn assign_blocks(rho: &Homomorphism, report: &DecompositionReport) -> Result<SplitOutcome> {
    if rho.source.factors().len() != 2 {
        return Err(Error::InvalidParameter("split needs a two-factor source".into()));
    }
    if report.residual_kind != ResidualKind::Complete {
        return Err(Error::Incomplete("decomposition has an isotropic obstruction".into()));
    }
    let support = block_support(rho, report);
    let mut factor_blocks: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut trivial = Vec::new();
    let mut sig = [(0, 0), (0, 0)];
    for (i, s) in support.iter().enumerate() {
        match s.as_slice() {
            [] => trivial.push(i),
            [f] => {
                factor_blocks[*f].push(i);
                sig[*f].0 += report.blocks[i].signature.0;
                sig[*f].1 += report.blocks[i].signature.1;
            }
            _ => {
                return Ok(SplitOutcome::NotSplit {
                    block: i,
                    description: format!(
                        "block {} of dimension {} is acted on by both source factors",
                        i,
                        report.blocks[i].dim()
                    ),
                })
            }
        }
    }
    Ok(SplitOutcome::Split { factor_blocks, trivial_blocks: trivial, signatures: sig })
}

/// Block assignment for tight maps with a two-factor source.
pub fn split_by_factor(rho: &Homomorphism) -> Result<SplitOutcome> {
    if !certify(rho)?.tight {
        return Err(Error::NotTight);
    }
    let report = decompose(rho, DEFAULT_SEED)?;
    assign_blocks(rho, &report)
}

/// The factored form `ρ = ι ∘ (ρ1 ⊕ ρ2)` of a split map.
#[derive(Clone, Debug)]
pub struct FactorMaps {
    pub rho: [Homomorphism; 2],
    pub iota: Homomorphism,
}

/// Orthonormal basis of the span of `cols` for the form `h`, positive vectors
/// first unless there are more positive than negative ones; returns the basis
/// and the form values. Fails when a normalization needs an irrational square root.
fn orthonormal(cols: &[Vector], h: &Mat) -> Result<(Vec<Vector>, Vec<i64>)> {
    let n = h.rows();
    let u = columns_to_mat(n, cols);
    let (p, d) = hermitian_diagonalize(&u.adjoint().mul(h).mul(&u));
    let w = u.mul(&p);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (j, dj) in d.iter().enumerate() {
        let r = dj.to_rational().ok_or_else(|| Error::Unsupported("irrational block norm".into()))?;
        if r.is_zero() {
            return Err(Error::Incomplete("degenerate block".into()));
        }
        let s = Scalar::sqrt_q(&(Q::one() / r.abs()));
        let v: Vector = w.column(j).iter().map(|x| x * &s).collect();
        if r.is_positive() {
            plus.push(v);
        } else {
            minus.push(v);
        }
    }
    let (first, second, sign) = if plus.len() <= minus.len() { (plus, minus, 1) } else { (minus, plus, -1) };
    let signs = core::iter::repeat_n(sign, first.len()).chain(core::iter::repeat_n(-sign, second.len())).collect();
    Ok((first.into_iter().chain(second).collect(), signs))
}

fn unitary_factor(p: usize, q: usize) -> Result<Factor> {
    if p == 0 {
        Err(Error::Unsupported("definite block in a factor map".into()))
    } else {
        Ok(Factor::Su { p, q })
    }
}

/// Explicit `ρ1`, `ρ2` into `su(P_i,Q_i)` and the block embedding `ι` for a
/// split map into a unitary target.
pub fn factor_maps(rho: &Homomorphism, report: &DecompositionReport, outcome: &SplitOutcome) -> Result<FactorMaps> {
    let SplitOutcome::Split { factor_blocks, trivial_blocks, .. } = outcome else {
        return Err(Error::InvalidParameter("map does not split".into()));
    };
    let h = rho.target.gram();
    let n = h.rows();
    let cols_of =
        |idx: &[usize]| -> Vec<Vector> { idx.iter().flat_map(|&i| report.blocks[i].basis.columns()).collect() };
    let basis = rho.source_basis();
    let mut maps = Vec::new();
    let mut all_cols: Vec<Vector> = Vec::new();
    let mut all_signs: Vec<i64> = Vec::new();
    let mut factors = Vec::new();
    for (i, blocks) in factor_blocks.iter().enumerate() {
        let (o, signs) = orthonormal(&cols_of(blocks), &h)?;
        let npos = signs.iter().filter(|&&s| s == signs[0]).count();
        let f = unitary_factor(npos, o.len() - npos)?;
        let om = columns_to_mat(n, &o);
        let jm =
            Mat::from_fn(o.len(), o.len(), |r, c| if r == c { Scalar::from_i64(signs[r]) } else { Scalar::zero() });
        let left = jm.mul(&om.adjoint()).mul(&h);
        let images: Vec<Mat> =
            (0..basis.len()).filter(|&j| basis.factor_of[j] == i).map(|j| left.mul(&rho.images[j]).mul(&om)).collect();
        let src = crate::algebra::AlgebraDescriptor::simple(rho.source.factors()[i])?;
        maps.push(Homomorphism::from_images(
            src,
            crate::algebra::AlgebraDescriptor::simple(f)?,
            format!("{}|{}", rho.label, i),
            images,
        )?);
        all_cols.extend(o);
        all_signs.extend(signs);
        factors.push(f);
    }
    let (o, signs) =
        if trivial_blocks.is_empty() { (Vec::new(), Vec::new()) } else { orthonormal(&cols_of(trivial_blocks), &h)? };
    all_cols.extend(o);
    all_signs.extend(signs);
    let full = columns_to_mat(n, &all_cols);
    let jm = Mat::from_fn(n, n, |r, c| if r == c { Scalar::from_i64(all_signs[r]) } else { Scalar::zero() });
    let full_inv = jm.mul(&full.adjoint()).mul(&h);
    let src = crate::algebra::AlgebraDescriptor::new(factors)?;
    let (d1, d2) = (maps[0].target.dim(), maps[1].target.dim());
    let src_basis = src.basis();
    let images = src_basis
        .elems
        .iter()
        .map(|y| {
            let mut big = Mat::zeros(n, n);
            big.set_block(0, 0, &y.submatrix(&(0..d1 + d2).collect::<Vec<_>>(), &(0..d1 + d2).collect::<Vec<_>>()));
            full.mul(&big).mul(&full_inv)
        })
        .collect();
    let iota = Homomorphism::from_images(src, rho.target.clone(), format!("iota({})", rho.label), images)?;
    let [r1, r2]: [Homomorphism; 2] = maps.try_into().map_err(|_| Error::Internal("two factors".into()))?;
    Ok(FactorMaps { rho: [r1, r2], iota })
}
