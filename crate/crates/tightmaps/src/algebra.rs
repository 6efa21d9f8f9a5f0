//! Matrix models of the classical Hermitian Lie algebras.
//!
//! Every model sits inside `u(G)` for a fixed Hermitian gram `G`, so a single
//! [`Mat`] type carries all elements:
//!
//! | family | model | gram `G` | extra condition |
//! |---|---|---|---|
//! | `su(p,q)` | `M*G + GM = 0`, `tr M = 0` | `diag(I_p, -I_q)` | |
//! | `sp(2n,R)` | `[[A, Z], [conj Z, conj A]]`, `Z^T = Z` | `diag(I_n, -I_n)` | `M^T W + W M = 0`, `W = [[0, I], [-I, 0]]` |
//! | `so*(2n)` | `[[A, Z], [-conj Z, conj A]]`, `Z^T = -Z` | `diag(I_n, -I_n)` | `M^T S + S M = 0`, `S = [[0, I], [I, 0]]` |
//! | `so(2,n)` | real, `M^T G + G M = 0` | `diag(I_2, -I_n)` | entries real |
//!
//! Two reductive families ride along: `u(p,q)` (drop the trace condition) and
//! `gl(n,C)` viewed as a real Lie algebra. They have no simple Hermitian
//! factor of positive rank in the second case and are needed for the
//! isotropic-obstruction example, whose image is not traceless.
//!
//! Direct sums are block diagonal in factor order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Mat, RowReducer};
use crate::scalar::{qi, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Su,
    Sp,
    SoStar,
    So2n,
    U,
    Gl,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "SU" => Some(Family::Su),
            "SP" => Some(Family::Sp),
            "SOSTAR" | "SO*" => Some(Family::SoStar),
            "SO2N" | "SO2" => Some(Family::So2n),
            "U" => Some(Family::U),
            "GL" | "GLC" => Some(Family::Gl),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Su => "SU",
            Family::Sp => "SP",
            Family::SoStar => "SOSTAR",
            Family::So2n => "SO2N",
            Family::U => "U",
            Family::Gl => "GL",
        }
    }
}

/// One summand of an [`AlgebraDescriptor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `su(p,q)`, `1 <= p <= q`.
    Su { p: usize, q: usize },
    /// `sp(2n,R)`, `n >= 1`.
    Sp { n: usize },
    /// `so*(2n)`, `n >= 2`.
    SoStar { n: usize },
    /// `so(2,n)`, `n >= 1`.
    So2 { n: usize },
    /// `u(p,q)`, `p <= q`, `p + q >= 1`.
    U { p: usize, q: usize },
    /// `gl(n,C)` as a real Lie algebra.
    Gl { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Hermitian,
    SymplecticPair,
    SkewPair,
    Orthogonal,
}

/// The forms a factor's model preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpec {
    pub kind: FormKind,
    /// Hermitian gram `G`; elements satisfy `M*G + GM = 0`.
    pub gram: Mat,
    /// Complex bilinear form `B` with `M^T B + B M = 0`, where the model has one.
    pub bilinear: Option<Mat>,
}

fn diag_signs(pos: usize, neg: usize) -> Mat {
    let mut g = Mat::zeros(pos + neg, pos + neg);
    for i in 0..pos {
        g[(i, i)] = Scalar::one();
    }
    for i in pos..pos + neg {
        g[(i, i)] = Scalar::from_i64(-1);
    }
    g
}

/// `[[0, I], [s I, 0]]` of size `2n`.
fn pair_form(n: usize, s: i64) -> Mat {
    let mut b = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        b[(i, n + i)] = Scalar::one();
        b[(n + i, i)] = Scalar::from_i64(s);
    }
    b
}

fn units(n: usize, entries: &[(usize, usize, Scalar)]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for (r, c, v) in entries {
        m[(*r, *c)] += v;
    }
    m
}

fn i_s() -> Scalar {
    Scalar::i()
}

fn neg(x: Scalar) -> Scalar {
    -x
}

impl Factor {
    pub fn family(&self) -> Family {
        match self {
            Factor::Su { .. } => Family::Su,
            Factor::Sp { .. } => Family::Sp,
            Factor::SoStar { .. } => Family::SoStar,
            Factor::So2 { .. } => Family::So2n,
            Factor::U { .. } => Family::U,
            Factor::Gl { .. } => Family::Gl,
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match *self {
            Factor::Su { p, q } | Factor::U { p, q } => vec![p, q],
            Factor::Sp { n } | Factor::SoStar { n } | Factor::Gl { n } => vec![n],
            Factor::So2 { n } => vec![2, n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidParameter(s.into()));
        match *self {
            Factor::Su { p, q } if p < 1 || q < 1 => bad("SU requires p >= 1 and q >= 1"),
            Factor::Su { p, q } if p > q => bad("SU requires p <= q (canonical order)"),
            Factor::Sp { n } if n < 1 => bad("SP requires n >= 1"),
            Factor::SoStar { n } if n < 2 => bad("SOSTAR requires n >= 2"),
            Factor::So2 { n } if n < 1 => bad("SO2N requires n >= 1"),
            Factor::U { p, q } if p + q < 1 => bad("U requires p + q >= 1"),
            Factor::U { p, q } if p > q => bad("U requires p <= q (canonical order)"),
            Factor::Gl { n } if n < 1 => bad("GL requires n >= 1"),
            _ => Ok(()),
        }
    }

    /// Matrix size of the model.
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Su { p, q } | Factor::U { p, q } => p + q,
            Factor::Sp { n } | Factor::SoStar { n } => 2 * n,
            Factor::So2 { n } => n + 2,
            Factor::Gl { n } => n,
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Factor::Su { p, q } | Factor::U { p, q } => p.min(q),
            Factor::Sp { n } => n,
            Factor::SoStar { n } => n / 2,
            Factor::So2 { n } => {
                if n >= 2 {
                    2
                } else {
                    1
                }
            }
            Factor::Gl { .. } => 0,
        }
    }

    /// Simple with a Hermitian symmetric space.
    pub fn is_hermitian_simple(&self) -> bool {
        matches!(self, Factor::Su { .. } | Factor::Sp { .. } | Factor::SoStar { .. } | Factor::So2 { .. })
            && !matches!(self, Factor::So2 { n: 2 })
    }

    pub fn form(&self) -> FormSpec {
        match *self {
            Factor::Su { p, q } | Factor::U { p, q } => {
                FormSpec { kind: FormKind::Hermitian, gram: diag_signs(p, q), bilinear: None }
            }
            Factor::Sp { n } => {
                FormSpec { kind: FormKind::SymplecticPair, gram: diag_signs(n, n), bilinear: Some(pair_form(n, -1)) }
            }
            Factor::SoStar { n } => {
                FormSpec { kind: FormKind::SkewPair, gram: diag_signs(n, n), bilinear: Some(pair_form(n, 1)) }
            }
            Factor::So2 { n } => {
                FormSpec { kind: FormKind::Orthogonal, gram: diag_signs(2, n), bilinear: Some(diag_signs(2, n)) }
            }
            Factor::Gl { n } => FormSpec { kind: FormKind::Hermitian, gram: Mat::identity(n), bilinear: None },
        }
    }

    /// Maximum residual of the defining equations.
    pub fn membership_residual(&self, m: &Mat) -> Result<Q> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.rows() });
        }
        if let Factor::Gl { .. } = self {
            return Ok(Q::zero());
        }
        let form = self.form();
        let g = &form.gram;
        let mut res = m.adjoint().mul(g).add(&g.mul(m)).residual();
        if let Some(b) = &form.bilinear {
            res = res.max(m.transpose().mul(b).add(&b.mul(m)).residual());
        }
        match self {
            Factor::Su { .. } => res = res.max(m.trace().l1()),
            Factor::So2 { .. } => res = res.max(m.map(Scalar::im).residual()),
            _ => {}
        }
        Ok(res)
    }

    /// Real basis split into compact part `k` and noncompact part `p`.
    pub fn basis_kp(&self) -> (Vec<Mat>, Vec<Mat>) {
        let n = self.dim();
        let mut k = Vec::new();
        let mut p = Vec::new();
        // Anti-Hermitian basis of u(r) placed at the given coordinates,
        // `conj_at` receiving the complex conjugate block.
        let skew_block = |idx: &[usize], conj_at: Option<&[usize]>, traceless: bool, out: &mut Vec<Mat>| {
            let r = idx.len();
            let put = |entries: Vec<(usize, usize, Scalar)>| {
                let mut all = Vec::new();
                for (a, b, v) in entries {
                    all.push((idx[a], idx[b], v.clone()));
                    if let Some(c) = conj_at {
                        all.push((c[a], c[b], v.conj()));
                    }
                }
                units(n, &all)
            };
            if traceless {
                for j in 0..r.saturating_sub(1) {
                    out.push(put(vec![(j, j, i_s()), (j + 1, j + 1, neg(i_s()))]));
                }
            } else {
                for j in 0..r {
                    out.push(put(vec![(j, j, i_s())]));
                }
            }
            for a in 0..r {
                for b in a + 1..r {
                    out.push(put(vec![(a, b, Scalar::one()), (b, a, Scalar::from_i64(-1))]));
                    out.push(put(vec![(a, b, i_s()), (b, a, i_s())]));
                }
            }
        };
        match *self {
            Factor::Su { p: pp, q } | Factor::U { p: pp, q } => {
                let traceless = matches!(self, Factor::Su { .. });
                if traceless {
                    // Diagonal traceless part over all coordinates, then the
                    // off-diagonal parts of each block.
                    for j in 0..n - 1 {
                        k.push(units(n, &[(j, j, i_s()), (j + 1, j + 1, neg(i_s()))]));
                    }
                } else {
                    for j in 0..n {
                        k.push(units(n, &[(j, j, i_s())]));
                    }
                }
                for (lo, hi) in [(0, pp), (pp, n)] {
                    for a in lo..hi {
                        for b in a + 1..hi {
                            k.push(units(n, &[(a, b, Scalar::one()), (b, a, Scalar::from_i64(-1))]));
                            k.push(units(n, &[(a, b, i_s()), (b, a, i_s())]));
                        }
                    }
                }
                for a in 0..pp {
                    for b in pp..pp + q {
                        p.push(units(n, &[(a, b, Scalar::one()), (b, a, Scalar::one())]));
                        p.push(units(n, &[(a, b, i_s()), (b, a, neg(i_s()))]));
                    }
                }
            }
            Factor::Sp { n: h } | Factor::SoStar { n: h } => {
                let top: Vec<usize> = (0..h).collect();
                let bot: Vec<usize> = (h..2 * h).collect();
                skew_block(&top, Some(&bot), false, &mut k);
                let sym = matches!(self, Factor::Sp { .. });
                // Z block at (top, bot); lower-left is Z*.
                let mut push_z = |z: Vec<(usize, usize, Scalar)>| {
                    let mut e = Vec::new();
                    for (a, b, v) in z {
                        e.push((a, h + b, v.clone()));
                        e.push((h + b, a, v.conj()));
                    }
                    p.push(units(n, &e));
                };
                for a in 0..h {
                    let lo = if sym { a } else { a + 1 };
                    for b in lo..h {
                        let s = if sym { Scalar::one() } else { Scalar::from_i64(-1) };
                        for c in [Scalar::one(), i_s()] {
                            if a == b {
                                push_z(vec![(a, a, c)]);
                            } else {
                                push_z(vec![(a, b, c.clone()), (b, a, &c * &s)]);
                            }
                        }
                    }
                }
            }
            Factor::So2 { n: m } => {
                k.push(units(n, &[(0, 1, Scalar::one()), (1, 0, Scalar::from_i64(-1))]));
                for a in 2..m + 2 {
                    for b in a + 1..m + 2 {
                        k.push(units(n, &[(a, b, Scalar::one()), (b, a, Scalar::from_i64(-1))]));
                    }
                }
                for j in 0..2 {
                    for a in 2..m + 2 {
                        p.push(units(n, &[(j, a, Scalar::one()), (a, j, Scalar::one())]));
                    }
                }
            }
            Factor::Gl { n: m } => {
                let idx: Vec<usize> = (0..m).collect();
                skew_block(&idx, None, false, &mut k);
                p = k.iter().map(|x| x.scale(&i_s())).collect();
            }
        }
        (k, p)
    }

    /// Central element of `k` with `ad(Z0)^2 = -1` on `p`; zero for `gl`.
    pub fn z0(&self) -> Mat {
        let n = self.dim();
        match *self {
            Factor::Su { p, q } => {
                let s = (p + q) as i64;
                Mat::from_fn(n, n, |r, c| {
                    if r != c {
                        Scalar::zero()
                    } else if r < p {
                        Scalar::gauss(Q::zero(), crate::scalar::q(q as i64, s))
                    } else {
                        Scalar::gauss(Q::zero(), crate::scalar::q(-(p as i64), s))
                    }
                })
            }
            Factor::U { p, .. } | Factor::Sp { n: p } | Factor::SoStar { n: p } => Mat::from_fn(n, n, |r, c| {
                if r != c {
                    Scalar::zero()
                } else if r < p {
                    Scalar::gauss(Q::zero(), crate::scalar::q(1, 2))
                } else {
                    Scalar::gauss(Q::zero(), crate::scalar::q(-1, 2))
                }
            }),
            Factor::So2 { .. } => units(n, &[(1, 0, Scalar::one()), (0, 1, Scalar::from_i64(-1))]),
            Factor::Gl { .. } => Mat::zeros(n, n),
        }
    }

    /// Image of the 2x2 `su(1,1)` matrix `m` under the `j`-th polydisc factor.
    pub fn disc_image(&self, j: usize, m: &Mat) -> Mat {
        let n = self.dim();
        let (m00, m01, m10, m11) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
        match *self {
            Factor::Su { p, .. } | Factor::U { p, .. } | Factor::Sp { n: p } => units(
                n,
                &[(j, j, m00.clone()), (p + j, p + j, m11.clone()), (j, p + j, m01.clone()), (p + j, j, m10.clone())],
            ),
            Factor::SoStar { n: h } => {
                let (u, v, uu, vv) = (2 * j, 2 * j + 1, h + 2 * j, h + 2 * j + 1);
                units(
                    n,
                    &[
                        (u, u, m00.clone()),
                        (v, v, m00.clone()),
                        (uu, uu, m11.clone()),
                        (vv, vv, m11.clone()),
                        (u, vv, m01.clone()),
                        (v, uu, -m01),
                        (vv, u, m10.clone()),
                        (uu, v, -m10),
                    ],
                )
            }
            Factor::So2 { n: sp } => {
                let half = Scalar::frac(1, 2);
                // m = 2a Z0 + re_b X0 + im_b Y0 in su(1,1).
                let two_a = &(m00 * &neg(i_s())) * &Scalar::from_i64(2);
                let re_b = &(m01 + m10) * &half;
                let im_b = &(&(m01 - m10) * &half) * &neg(i_s());
                let pj = |a: usize, b: usize| units(n, &[(a, b, Scalar::one()), (b, a, Scalar::one())]);
                let rot = |a: usize, b: usize| units(n, &[(b, a, Scalar::one()), (a, b, Scalar::from_i64(-1))]);
                let mut out = Mat::zeros(n, n);
                if sp == 1 {
                    out.axpy(&two_a, &rot(0, 1));
                    out.axpy(&(&re_b * &Scalar::from_i64(2)), &pj(0, 2));
                    out.axpy(&(&im_b * &Scalar::from_i64(2)), &pj(1, 2));
                } else {
                    let sgn = if j == 0 { Scalar::from_i64(-1) } else { Scalar::one() };
                    let z = rot(0, 1).scale(&half).add(&rot(2, 3).scale(&(&half * &sgn)));
                    out.axpy(&two_a, &z);
                    if j == 0 {
                        out.axpy(&re_b, &pj(0, 2).add(&pj(1, 3)));
                        out.axpy(&im_b, &pj(1, 2).sub(&pj(0, 3)));
                    } else {
                        out.axpy(&re_b, &pj(0, 2).sub(&pj(1, 3)));
                        out.axpy(&im_b, &pj(0, 3).add(&pj(1, 2)));
                    }
                }
                out
            }
            Factor::Gl { .. } => Mat::zeros(n, n),
        }
    }

    /// Calibration constant `c` in `omega(X, Y) = c Re tr(ad(Z0)X Y)`.
    pub fn kahler_constant(&self) -> Q {
        if self.rank() == 0 {
            return Q::zero();
        }
        let jx = self.z0().commutator(&self.disc_image(0, &su11_x0()));
        let t = jx.trace_mul(&jx).re().to_rational().expect("rational calibration");
        Q::one() / t
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Su { p, q } => write!(f, "su({},{})", p, q),
            Factor::Sp { n } => write!(f, "sp({},R)", 2 * n),
            Factor::SoStar { n } => write!(f, "so*({})", 2 * n),
            Factor::So2 { n } => write!(f, "so(2,{})", n),
            Factor::U { p, q } => write!(f, "u({},{})", p, q),
            Factor::Gl { n } => write!(f, "gl({},C)", n),
        }
    }
}

/// `X0 = [[0,1],[1,0]]`.
pub fn su11_x0() -> Mat {
    Mat::from_i64(&[&[0, 1], &[1, 0]])
}

/// `Y0 = [[0,i],[-i,0]] = J X0`.
pub fn su11_y0() -> Mat {
    Mat::from_rows(vec![vec![Scalar::zero(), Scalar::i()], vec![-Scalar::i(), Scalar::zero()]])
}

/// `Z0 = (i/2) diag(1,-1)`.
pub fn su11_z0() -> Mat {
    Factor::Su { p: 1, q: 1 }.z0()
}

/// Symbolic identity of a (possibly non-simple) algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraDescriptor {
    factors: Vec<Factor>,
}

/// Builds a simple factor, swapping `(p,q)` into canonical order for SU and U.
pub fn make_algebra(family: Family, params: &[usize]) -> Result<AlgebraDescriptor> {
    let arity = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{} takes {} parameter(s), got {}", family.tag(), k, params.len())))
        }
    };
    let f = match family {
        Family::Su | Family::U => {
            arity(2)?;
            let (p, q) = (params[0].min(params[1]), params[0].max(params[1]));
            if family == Family::Su {
                Factor::Su { p, q }
            } else {
                Factor::U { p, q }
            }
        }
        Family::Sp => {
            arity(1)?;
            Factor::Sp { n: params[0] }
        }
        Family::SoStar => {
            arity(1)?;
            Factor::SoStar { n: params[0] }
        }
        Family::So2n => match params {
            [n] | [2, n] => Factor::So2 { n: *n },
            _ => return Err(Error::InvalidParameter("SO2N takes (2,n) or (n)".into())),
        },
        Family::Gl => {
            arity(1)?;
            Factor::Gl { n: params[0] }
        }
    };
    AlgebraDescriptor::new(vec![f])
}

/// Data of the Cartan decomposition `g = k + p`.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub k_basis: Vec<Mat>,
    pub p_basis: Vec<Mat>,
    pub z0: Mat,
}

impl AlgebraDescriptor {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("descriptor needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(AlgebraDescriptor { factors })
    }

    pub fn simple(f: Factor) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn su(p: usize, q: usize) -> Self {
        make_algebra(Family::Su, &[p, q]).expect("valid su")
    }

    pub fn sp(n: usize) -> Self {
        Self::simple(Factor::Sp { n }).expect("valid sp")
    }

    pub fn sostar(n: usize) -> Self {
        Self::simple(Factor::SoStar { n }).expect("valid so*")
    }

    pub fn so2(n: usize) -> Self {
        Self::simple(Factor::So2 { n }).expect("valid so(2,n)")
    }

    pub fn su11_power(r: usize) -> Self {
        Self::new(vec![Factor::Su { p: 1, q: 1 }; r]).expect("valid su(1,1)^r")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn direct_sum(&self, other: &AlgebraDescriptor) -> AlgebraDescriptor {
        let mut f = self.factors.clone();
        f.extend(other.factors.iter().copied());
        AlgebraDescriptor { factors: f }
    }

    /// Total matrix size.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.factors.len());
        let mut s = 0;
        for f in &self.factors {
            o.push(s);
            s += f.dim();
        }
        o
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(Factor::rank).sum()
    }

    /// Places a factor-local matrix into the ambient block.
    pub fn embed(&self, i: usize, m: &Mat) -> Mat {
        let mut out = Mat::zeros(self.dim(), self.dim());
        let o = self.offsets()[i];
        out.set_block(o, o, m);
        out
    }

    /// Extracts the diagonal block of factor `i`.
    pub fn block(&self, i: usize, m: &Mat) -> Mat {
        let o = self.offsets()[i];
        let idx: Vec<usize> = (o..o + self.factors[i].dim()).collect();
        m.submatrix(&idx, &idx)
    }

    /// Ambient Hermitian gram.
    pub fn gram(&self) -> Mat {
        Mat::block_diag(&self.factors.iter().map(|f| f.form().gram).collect::<Vec<_>>())
    }

    pub fn membership_residual(&self, m: &Mat) -> Result<Q> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.rows() });
        }
        let offs = self.offsets();
        let mut res = Q::zero();
        // Off-block entries must vanish.
        for (r, c, v) in m.entries() {
            let fr = offs.iter().rposition(|&o| o <= r).expect("offset");
            let fc = offs.iter().rposition(|&o| o <= c).expect("offset");
            if fr != fc {
                res = res.max(v.l1());
            }
        }
        for (i, f) in self.factors.iter().enumerate() {
            res = res.max(f.membership_residual(&self.block(i, m))?);
        }
        Ok(res)
    }

    /// Errors unless `m` lies in the algebra.
    pub fn check_member(&self, m: &Mat) -> Result<()> {
        let r = self.membership_residual(m)?;
        if r.is_zero() {
            Ok(())
        } else {
            Err(Error::NotInAlgebra { algebra: format!("{}", self), residual: r })
        }
    }

    /// Sum of the factor `Z0`s.
    pub fn z0(&self) -> Mat {
        Mat::block_diag(&self.factors.iter().map(Factor::z0).collect::<Vec<_>>())
    }

    /// `sum_f c_f Z0_f`, so that `omega(X, Y) = Re tr(Zc [X, Y])`.
    pub fn kahler_z(&self) -> Mat {
        Mat::block_diag(&self.factors.iter().map(|f| f.z0().scale_q(&f.kahler_constant())).collect::<Vec<_>>())
    }

    pub fn cartan_split(&self) -> CartanData {
        let mut k_basis = Vec::new();
        let mut p_basis = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let (k, p) = f.basis_kp();
            k_basis.extend(k.iter().map(|m| self.embed(i, m)));
            p_basis.extend(p.iter().map(|m| self.embed(i, m)));
        }
        CartanData { k_basis, p_basis, z0: self.z0() }
    }

    /// Basis in factor order, each factor listing `k` then `p`.
    pub fn basis(&self) -> Basis {
        let mut elems = Vec::new();
        let mut factor_of = Vec::new();
        let mut is_p = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let (k, p) = f.basis_kp();
            for m in &k {
                elems.push(self.embed(i, m));
                factor_of.push(i);
                is_p.push(false);
            }
            for m in &p {
                elems.push(self.embed(i, m));
                factor_of.push(i);
                is_p.push(true);
            }
        }
        Basis::new(self.dim(), elems, factor_of, is_p)
    }

    /// `J X = [Z0, X]`.
    pub fn apply_j(&self, x: &Mat) -> Mat {
        self.z0().commutator(x)
    }

    /// True when `ad(Z0)^2 X = -X`, i.e. `X` lies in `p` of the Hermitian factors.
    pub fn in_p(&self, x: &Mat) -> bool {
        let z = self.z0();
        z.commutator(&z.commutator(x)).add(x).is_zero()
    }

    /// True when `[Z0, X] = 0`.
    pub fn in_k(&self, x: &Mat) -> bool {
        self.apply_j(x).is_zero()
    }

    /// Calibrated Kahler pairing on `p`.
    pub fn kahler_pairing(&self, x: &Mat, y: &Mat) -> Result<Scalar> {
        self.check_member(x)?;
        self.check_member(y)?;
        if !self.in_p(x) || !self.in_p(y) {
            return Err(Error::NotInP);
        }
        Ok(self.omega(x, y))
    }

    /// `Re tr(Zc [X, Y])` without the `p` check; the cocycle form of the pairing.
    pub fn omega(&self, x: &Mat, y: &Mat) -> Scalar {
        self.kahler_z().trace_mul(&x.commutator(y)).re()
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

/// Typed matrix: an element of a named algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub algebra: AlgebraDescriptor,
    pub matrix: Mat,
}

impl Element {
    /// Validates membership.
    pub fn new(algebra: AlgebraDescriptor, matrix: Mat) -> Result<Self> {
        algebra.check_member(&matrix)?;
        Ok(Element { algebra, matrix })
    }

    pub fn bracket(&self, other: &Element) -> Result<Element> {
        bracket(self, other)
    }
}

pub fn bracket(x: &Element, y: &Element) -> Result<Element> {
    if x.algebra != y.algebra {
        return Err(Error::AmbientMismatch);
    }
    Ok(Element { algebra: x.algebra.clone(), matrix: x.matrix.commutator(&y.matrix) })
}

/// A fixed real basis with fast coordinate extraction.
///
/// Coordinates come from the real Gram matrix `Re tr(A* B)`, inverted per
/// connected component of overlapping supports, and are then checked by
/// reconstruction.
#[derive(Clone, Debug)]
pub struct Basis {
    pub n: usize,
    pub elems: Vec<Mat>,
    pub factor_of: Vec<usize>,
    pub is_p: Vec<bool>,
    sparse: Vec<Vec<(usize, usize, Scalar)>>,
    groups: Vec<(Vec<usize>, Mat)>,
}

fn real_inner_sparse(a: &[(usize, usize, Scalar)], m: &Mat) -> Scalar {
    let mut s = Scalar::zero();
    for (r, c, v) in a {
        let x = &m[(*r, *c)];
        if !x.is_zero() {
            s += &(&v.conj() * x);
        }
    }
    s.re()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Basis {
    pub fn new(n: usize, elems: Vec<Mat>, factor_of: Vec<usize>, is_p: Vec<bool>) -> Self {
        let sparse: Vec<Vec<(usize, usize, Scalar)>> =
            elems.iter().map(|m| m.entries().map(|(r, c, v)| (r, c, v.clone())).collect()).collect();
        let d = elems.len();
        let mut parent: Vec<usize> = (0..d).collect();
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, s) in sparse.iter().enumerate() {
            for (r, c, _) in s {
                if let Some(&j) = owner.get(&(*r, *c)) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                } else {
                    owner.insert((*r, *c), i);
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..d {
            let root = find(&mut parent, i);
            comps.entry(root).or_default().push(i);
        }
        let groups = comps
            .into_values()
            .map(|idx| {
                let g = Mat::from_fn(idx.len(), idx.len(), |a, b| real_inner_sparse(&sparse[idx[a]], &elems[idx[b]]));
                let inv = g.inverse().expect("basis is linearly independent");
                (idx, inv)
            })
            .collect();
        Basis { n, elems, factor_of, is_p, sparse, groups }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Coordinates of an arbitrary matrix in the span; `None` if `m` is not in it.
    pub fn coords(&self, m: &Mat) -> Option<Vec<Scalar>> {
        if m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        let mut c = vec![Scalar::zero(); self.len()];
        for (idx, inv) in &self.groups {
            let b: Vec<Scalar> = idx.iter().map(|&i| real_inner_sparse(&self.sparse[i], m)).collect();
            if b.iter().all(Scalar::is_zero) {
                continue;
            }
            for (&i, x) in idx.iter().zip(inv.mul_vec(&b)) {
                c[i] = x;
            }
        }
        if self.combine(&c) == *m {
            Some(c)
        } else {
            None
        }
    }

    pub fn combine(&self, c: &[Scalar]) -> Mat {
        let mut out = Mat::zeros(self.n, self.n);
        for (x, e) in c.iter().zip(&self.elems) {
            out.axpy(x, e);
        }
        out
    }
}

/// Dimension of the space of matrices `M` satisfying the model's linear
/// equations, computed by brute-force constraint solving. Used as an oracle
/// for the basis sizes.
pub fn solver_dimension(f: &Factor) -> usize {
    let n = f.dim();
    // Real unknowns: re and im of each entry.
    let nv = 2 * n * n;
    let mut red = RowReducer::new(nv);
    let form = f.form();
    let mut eqs: Vec<Vec<(usize, Scalar)>> = Vec::new();
    // Linear map M -> E(M); we push real and imaginary parts of each entry of E.
    let mut push_linear = |build: &dyn Fn(&Mat) -> Mat| {
        let mut cols: Vec<Mat> = Vec::with_capacity(nv);
        for r in 0..n {
            for c in 0..n {
                for im in [false, true] {
                    let v = if im { Scalar::i() } else { Scalar::one() };
                    cols.push(build(&Mat::unit(n, r, c, v)));
                }
            }
        }
        let (er, ec) = (cols[0].rows(), cols[0].cols());
        for a in 0..er {
            for b in 0..ec {
                let mut re_row = Vec::new();
                let mut im_row = Vec::new();
                for (k, m) in cols.iter().enumerate() {
                    let x = &m[(a, b)];
                    if !x.is_zero() {
                        re_row.push((k, x.re()));
                        im_row.push((k, x.im()));
                    }
                }
                eqs.push(re_row);
                eqs.push(im_row);
            }
        }
    };
    let g = form.gram.clone();
    if !matches!(f, Factor::Gl { .. }) {
        push_linear(&|m: &Mat| m.adjoint().mul(&g).add(&g.mul(m)));
    }
    if let Some(b) = form.bilinear.clone() {
        push_linear(&|m: &Mat| m.transpose().mul(&b).add(&b.mul(m)));
    }
    if matches!(f, Factor::Su { .. }) {
        push_linear(&|m: &Mat| Mat::from_rows(vec![vec![m.trace()]]));
    }
    if matches!(f, Factor::So2 { .. }) {
        push_linear(&|m: &Mat| m.map(Scalar::im));
    }
    for e in eqs {
        red.push(e);
    }
    nv - red.rank()
}

/// Whether `Z` lies in the Harish-Chandra domain `{Z : Z*Z < Id}` of the
/// factor (SU: `p x q`; SP: symmetric `n x n`; SOSTAR: skew `n x n`).
///
/// The inequality is the standard bounded one.
pub fn in_bounded_domain(f: &Factor, z: &Mat) -> Result<bool> {
    let (r, c) = match *f {
        Factor::Su { p, q } => (p, q),
        Factor::Sp { n } | Factor::SoStar { n } => (n, n),
        _ => return Err(Error::Unsupported(format!("bounded domain of {}", f))),
    };
    if z.rows() != r || z.cols() != c {
        return Err(Error::DimensionMismatch { expected: r, found: z.rows() });
    }
    match f {
        Factor::Sp { .. } if z.transpose() != *z => return Err(Error::InvalidParameter("Z must be symmetric".into())),
        Factor::SoStar { .. } if z.transpose() != z.neg() => {
            return Err(Error::InvalidParameter("Z must be skew".into()))
        }
        _ => {}
    }
    let h = Mat::identity(c).sub(&z.adjoint().mul(z));
    let (pos, _, _) = crate::matrix::hermitian_signature(&h);
    Ok(pos == c)
}

/// Integer helper for tests and catalog code.
pub fn int(n: i64) -> Scalar {
    Scalar::from_q(qi(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<Factor> {
        vec![
            Factor::Su { p: 1, q: 1 },
            Factor::Su { p: 1, q: 3 },
            Factor::Su { p: 2, q: 2 },
            Factor::Sp { n: 1 },
            Factor::Sp { n: 3 },
            Factor::SoStar { n: 4 },
            Factor::SoStar { n: 5 },
            Factor::So2 { n: 1 },
            Factor::So2 { n: 3 },
            Factor::So2 { n: 5 },
            Factor::U { p: 0, q: 2 },
            Factor::U { p: 2, q: 2 },
            Factor::Gl { n: 2 },
        ]
    }

    fn expected_dim(f: &Factor) -> usize {
        match *f {
            Factor::Su { p, q } => (p + q) * (p + q) - 1,
            Factor::U { p, q } => (p + q) * (p + q),
            Factor::Sp { n } => n * (2 * n + 1),
            Factor::SoStar { n } => n * (2 * n - 1),
            Factor::So2 { n } => (n + 2) * (n + 1) / 2,
            Factor::Gl { n } => 2 * n * n,
        }
    }

    #[test]
    fn bases_span_the_solution_space() {
        for f in samples() {
            let (k, p) = f.basis_kp();
            let d = AlgebraDescriptor::simple(f).unwrap();
            assert_eq!(k.len() + p.len(), expected_dim(&f), "{}", f);
            assert_eq!(solver_dimension(&f), expected_dim(&f), "{}", f);
            for m in k.iter().chain(&p) {
                assert!(f.membership_residual(m).unwrap().is_zero(), "{}: {}", f, m);
            }
            if f.rank() > 0 {
                for m in &k {
                    assert!(d.in_k(m), "{} k", f);
                }
                for m in &p {
                    assert!(d.in_p(m), "{} p", f);
                }
            }
            assert_eq!(d.basis().len(), expected_dim(&f));
        }
    }

    #[test]
    fn polydisc_is_a_commuting_family_of_homomorphisms() {
        let gens = [su11_x0(), su11_y0(), su11_z0()];
        for f in samples().into_iter().filter(|f| f.rank() > 0) {
            let z0 = f.z0();
            for j in 0..f.rank() {
                for a in &gens {
                    let ia = f.disc_image(j, a);
                    assert!(f.membership_residual(&ia).unwrap().is_zero(), "{} disc {}", f, j);
                    for b in &gens {
                        let lhs = f.disc_image(j, &a.commutator(b));
                        assert_eq!(lhs, ia.commutator(&f.disc_image(j, b)), "{} disc {}", f, j);
                        for l in 0..f.rank() {
                            if l != j {
                                assert!(ia.commutator(&f.disc_image(l, b)).is_zero());
                            }
                        }
                    }
                }
                // Holomorphic: J X0 maps to J of the image.
                let x = f.disc_image(j, &su11_x0());
                assert_eq!(z0.commutator(&x), f.disc_image(j, &su11_y0()), "{} disc {}", f, j);
            }
        }
    }

    #[test]
    fn calibration_constants() {
        let c = |f: Factor| f.kahler_constant();
        assert_eq!(c(Factor::Su { p: 1, q: 1 }), crate::scalar::q(1, 2));
        assert_eq!(c(Factor::Su { p: 2, q: 5 }), crate::scalar::q(1, 2));
        assert_eq!(c(Factor::Sp { n: 3 }), crate::scalar::q(1, 2));
        assert_eq!(c(Factor::SoStar { n: 4 }), crate::scalar::q(1, 4));
        assert_eq!(c(Factor::So2 { n: 3 }), crate::scalar::q(1, 4));
        assert_eq!(c(Factor::So2 { n: 1 }), crate::scalar::q(1, 8));
        let su11 = AlgebraDescriptor::su(1, 1);
        assert_eq!(su11.omega(&su11_x0(), &su11_y0()), Scalar::one());
    }

    #[test]
    fn membership_rejects_off_model_matrices() {
        let d = AlgebraDescriptor::su(1, 1);
        let m = Mat::from_rows(vec![vec![Scalar::i(), Scalar::zero()], vec![Scalar::zero(), Scalar::zero()]]);
        assert_eq!(d.membership_residual(&m).unwrap(), Q::one());
        let u = AlgebraDescriptor::simple(Factor::U { p: 1, q: 1 }).unwrap();
        assert!(u.membership_residual(&m).unwrap().is_zero());
        let sum = AlgebraDescriptor::su11_power(2);
        let mut off = Mat::zeros(4, 4);
        off[(0, 2)] = Scalar::one();
        assert!(!sum.membership_residual(&off).unwrap().is_zero());
    }

    #[test]
    fn bounded_domain() {
        let f = Factor::Su { p: 1, q: 2 };
        let half = Mat::from_rows(vec![vec![Scalar::frac(1, 2), Scalar::frac(1, 2)]]);
        assert!(in_bounded_domain(&f, &half).unwrap());
        let big = Mat::from_rows(vec![vec![Scalar::one(), Scalar::frac(1, 2)]]);
        assert!(!in_bounded_domain(&f, &big).unwrap());
    }

    #[test]
    fn coordinates_round_trip() {
        let d = AlgebraDescriptor::sostar(3).direct_sum(&AlgebraDescriptor::so2(3));
        let b = d.basis();
        let c: Vec<Scalar> = (0..b.len()).map(|i| Scalar::from_i64(i as i64 - 7)).collect();
        let m = b.combine(&c);
        assert_eq!(b.coords(&m).unwrap(), c);
        assert!(b.coords(&Mat::identity(d.dim())).is_none());
    }
}
