//! Crossing matrices, caps and cups for the four-dimensional
//! `U_q[gl(2|1)]` module, plus a floating-point reconstruction of the
//! crossing from the projectors onto `V_1` and `V_3`.
//!
//! A rank-4 tensor `X^{a c}_{b d}` (indices 0..4 here) lives at row
//! `4a + c`, column `4b + d` of its 16x16 matrix: upper indices select the
//! row, lower indices the column.

use std::ops::Neg;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{LaurentPoly, RingElem};

/// A 16x16 crossing matrix `X^{a c}_{b d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingTensor(Matrix);

impl CrossingTensor {
    pub fn new(m: Matrix) -> Self {
        assert_eq!(m.dim(), 16, "crossing tensors are 16x16");
        CrossingTensor(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// `X^{a c}_{b d}` with 0-based indices.
    pub fn entry(&self, a: usize, c: usize, b: usize, d: usize) -> &RingElem {
        self.0.get(4 * a + c, 4 * b + d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CapCupKind {
    /// Cap (maximum), arrow pointing right. Two lower indices.
    OmegaPlus,
    /// Cap, arrow pointing left.
    OmegaMinus,
    /// Cup (minimum), arrow pointing right. Two upper indices.
    MhoPlus,
    /// Cup, arrow pointing left.
    MhoMinus,
}

impl CapCupKind {
    pub fn is_cap(self) -> bool {
        matches!(self, CapCupKind::OmegaPlus | CapCupKind::OmegaMinus)
    }
}

/// A diagonal cap or cup matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapCup {
    pub kind: CapCupKind,
    pub diag: [RingElem; 4],
}

impl CapCup {
    pub fn entry(&self, a: usize, b: usize) -> RingElem {
        if a == b {
            self.diag[a].clone()
        } else {
            RingElem::zero()
        }
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::diagonal(&self.diag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapsCups {
    pub omega_plus: CapCup,
    pub omega_minus: CapCup,
    pub mho_plus: CapCup,
    pub mho_minus: CapCup,
}

impl CapsCups {
    pub fn get(&self, kind: CapCupKind) -> &CapCup {
        match kind {
            CapCupKind::OmegaPlus => &self.omega_plus,
            CapCupKind::OmegaMinus => &self.omega_minus,
            CapCupKind::MhoPlus => &self.mho_plus,
            CapCupKind::MhoMinus => &self.mho_minus,
        }
    }
}

/// Parity of the basis vectors `|1>, .., |4>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingVector {
    pub odd: [bool; 4],
}

impl GradingVector {
    /// `[|1>] = [|4>] = 0`, `[|2>] = [|3>] = 1`.
    pub const STANDARD: GradingVector = GradingVector {
        odd: [false, true, true, false],
    };

    fn deg(&self, i: usize) -> u8 {
        u8::from(self.odd[i])
    }
}

/// Parses a cell such as `-q Y`, `p^2 q^2 - 1` or `q^-2 Y^2`; a trailing
/// `Y` or `Y^2` multiplies the polynomial part.
fn cell(s: &str) -> RingElem {
    let (body, ypow) = if let Some(b) = s.strip_suffix("Y^2") {
        (b, 2)
    } else if let Some(b) = s.strip_suffix('Y') {
        (b, 1)
    } else {
        (s, 0)
    };
    let poly: LaurentPoly = match body.trim() {
        "" => LaurentPoly::one(),
        "-" => LaurentPoly::constant(-1),
        b => b.parse().expect("well-formed matrix cell"),
    };
    let mut out = RingElem::from(poly);
    for _ in 0..ypow {
        out = &out * &RingElem::y();
    }
    out
}

/// Builds a 16x16 matrix from 1-based `(row, col, cell)` triples.
fn from_cells(cells: &[(usize, usize, &str)]) -> Matrix {
    Matrix::from_entries(16, cells.iter().map(|&(r, c, s)| (r - 1, c - 1, cell(s))))
}

const SIGMA_CELLS: &[(usize, usize, &str)] = &[
    (1, 1, "p^-2"),
    (2, 5, "p^-1"),
    (3, 9, "p^-1"),
    (4, 13, "1"),
    (5, 2, "p^-1"),
    (5, 5, "p^-2 - 1"),
    (6, 6, "-1"),
    (7, 7, "q^2 - 1"),
    (7, 10, "-q"),
    (7, 13, "-q Y"),
    (8, 14, "p q"),
    (9, 3, "p^-1"),
    (9, 9, "p^-2 - 1"),
    (10, 7, "-q"),
    (10, 13, "Y"),
    (11, 11, "-1"),
    (12, 15, "p q"),
    (13, 4, "1"),
    (13, 7, "-q Y"),
    (13, 10, "Y"),
    (13, 13, "Y^2"),
    (14, 8, "p q"),
    (14, 14, "p^2 q^2 - 1"),
    (15, 12, "p q"),
    (15, 15, "p^2 q^2 - 1"),
    (16, 16, "p^2 q^2"),
];

const SIGMA_INV_CELLS: &[(usize, usize, &str)] = &[
    (1, 1, "p^2"),
    (2, 2, "p^2 - 1"),
    (2, 5, "p"),
    (3, 3, "p^2 - 1"),
    (3, 9, "p"),
    (4, 4, "q^-2 Y^2"),
    (4, 7, "q^-1 Y"),
    (4, 10, "-q^-2 Y"),
    (4, 13, "1"),
    (5, 2, "p"),
    (6, 6, "-1"),
    (7, 4, "q^-1 Y"),
    (7, 10, "-q^-1"),
    (8, 8, "p^-2 q^-2 - 1"),
    (8, 14, "p^-1 q^-1"),
    (9, 3, "p"),
    (10, 4, "-q^-2 Y"),
    (10, 7, "-q^-1"),
    (10, 10, "q^-2 - 1"),
    (11, 11, "-1"),
    (12, 12, "p^-2 q^-2 - 1"),
    (12, 15, "p^-1 q^-1"),
    (13, 4, "1"),
    (14, 8, "p^-1 q^-1"),
    (15, 12, "p^-1 q^-1"),
    (16, 16, "p^-2 q^-2"),
];

/// The positive crossing `σ`.
pub fn build_sigma() -> CrossingTensor {
    CrossingTensor(from_cells(SIGMA_CELLS))
}

/// The negative crossing `σ^-1`, checked against `σ` on construction.
pub fn build_sigma_inv() -> Result<CrossingTensor> {
    let inv = from_cells(SIGMA_INV_CELLS);
    let sigma = build_sigma();
    if !(sigma.matrix() * &inv).is_identity() || !(&inv * sigma.matrix()).is_identity() {
        return Err(Error::ConsistencyFailure(
            "σ·σ^-1 is not the identity".into(),
        ));
    }
    Ok(CrossingTensor(inv))
}

pub fn build_caps_cups() -> CapsCups {
    let one = || {
        [
            RingElem::one(),
            RingElem::one(),
            RingElem::one(),
            RingElem::one(),
        ]
    };
    let diag = |cells: [&str; 4]| cells.map(cell);
    CapsCups {
        omega_plus: CapCup {
            kind: CapCupKind::OmegaPlus,
            diag: one(),
        },
        mho_plus: CapCup {
            kind: CapCupKind::MhoPlus,
            diag: one(),
        },
        omega_minus: CapCup {
            kind: CapCupKind::OmegaMinus,
            diag: diag(["p^-2", "-p^-2 q^-2", "-p^-2", "p^-2 q^-2"]),
        },
        mho_minus: CapCup {
            kind: CapCupKind::MhoMinus,
            diag: diag(["p^2", "-p^2 q^2", "-p^2", "p^2 q^2"]),
        },
    }
}

/// Shared `σ`.
pub fn sigma() -> &'static CrossingTensor {
    static S: OnceLock<CrossingTensor> = OnceLock::new();
    S.get_or_init(build_sigma)
}

/// Shared `σ^-1`.
pub fn sigma_inv() -> &'static CrossingTensor {
    static S: OnceLock<CrossingTensor> = OnceLock::new();
    S.get_or_init(|| build_sigma_inv().expect("σ^-1 table is consistent"))
}

/// Shared caps and cups.
pub fn caps_cups() -> &'static CapsCups {
    static C: OnceLock<CapsCups> = OnceLock::new();
    C.get_or_init(build_caps_cups)
}

/// Removes the grading from a 16x16 matrix (row-major, 256 entries):
/// `A^{ij}_{kl}` is multiplied by `(-1)^{[k]([j] + [l])}`.
pub fn ungrade<T: Clone + Neg<Output = T>>(graded: &[T], degrees: &GradingVector) -> Vec<T> {
    assert_eq!(graded.len(), 256, "expected a 16x16 matrix");
    graded
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let (row, col) = (idx / 16, idx % 16);
            let (j, k, l) = (row % 4, col / 4, col % 4);
            let exp = degrees.deg(k) * (degrees.deg(j) + degrees.deg(l));
            if exp % 2 == 1 {
                -v.clone()
            } else {
                v.clone()
            }
        })
        .collect()
}

pub fn ungrade_matrix(m: &Matrix, degrees: &GradingVector) -> Matrix {
    assert_eq!(m.dim(), 16);
    let entries: Vec<RingElem> = (0..256).map(|i| m.get(i / 16, i % 16).clone()).collect();
    let out = ungrade(&entries, degrees);
    Matrix::from_entries(
        16,
        out.into_iter()
            .enumerate()
            .map(|(i, v)| (i / 16, i % 16, v)),
    )
}

/// `σ ⊗ I` and `I ⊗ σ` on three strands both agree after braiding.
pub fn yang_baxter_holds(x: &CrossingTensor) -> bool {
    let id = Matrix::identity(4);
    let left = x.matrix().kron(&id);
    let right = id.kron(x.matrix());
    let lhs = &(&left * &right) * &left;
    let rhs = &(&right * &left) * &right;
    lhs == rhs
}

/// `q^-1 σ^3 + (q^-1 - p^-2 q^-1 - p^2 q) σ^2 + (q - p^-2 q^-1 - p^2 q) σ + q I`.
pub fn skein_residual(x: &CrossingTensor) -> Matrix {
    let s1 = x.matrix();
    let s2 = s1 * s1;
    let s3 = &s2 * s1;
    let c = |s: &str| RingElem::from(s.parse::<LaurentPoly>().expect("constant"));
    let t3 = s3.scale(&c("q^-1"));
    let t2 = s2.scale(&c("q^-1 - p^-2 q^-1 - p^2 q"));
    let t1 = s1.scale(&c("q - p^-2 q^-1 - p^2 q"));
    let t0 = Matrix::identity(16).scale(&c("q"));
    &(&(&t3 + &t2) + &t1) + &t0
}

pub fn skein_identity_holds(x: &CrossingTensor) -> bool {
    skein_residual(x).is_zero()
}

pub fn inverse_holds(x: &CrossingTensor, x_inv: &CrossingTensor) -> bool {
    (x.matrix() * x_inv.matrix()).is_identity() && (x_inv.matrix() * x.matrix()).is_identity()
}

/// `(Ω^-)_{ab} (℧^-)^{bc} = δ_a^c`, and the same for the `+` pair.
pub fn caps_inverse_holds(c: &CapsCups) -> bool {
    (&c.omega_minus.matrix() * &c.mho_minus.matrix()).is_identity()
        && (&c.omega_plus.matrix() * &c.mho_plus.matrix()).is_identity()
}

/// `[x]_q = (q^x - q^-x) / (q - q^-1)`.
pub fn q_bracket(x: f64, q: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - q.recip())
}

/// Numeric value of `Y` on the branch fixed by the projector construction:
/// `q^{1/2} (q - q^-1) ([α]_q [α+1]_q)^{1/2}`. It squares to
/// `p^-2 - q^2 + p^2 q^2 - 1` and changes sign with `q - 1`.
pub fn y_numeric(q: f64, alpha: f64) -> f64 {
    q.sqrt() * (q - q.recip()) * (q_bracket(alpha, q) * q_bracket(alpha + 1.0, q)).sqrt()
}

type Ket = Vec<(f64, usize, usize)>;

fn check_domain(q: f64, alpha: f64) -> Result<()> {
    if !(q.is_finite() && alpha.is_finite()) || q <= 0.0 || alpha <= 0.0 || q == 1.0 {
        return Err(Error::DomainError(format!(
            "need q > 0, q != 1, α > 0; got q = {q}, α = {alpha}"
        )));
    }
    Ok(())
}

/// The symmetry-adapted bases of `V_1` and `V_3` inside `V ⊗ V`, each
/// vector as `(coefficient, i, j)` terms of `|i> ⊗ |j>`.
fn projector_bases(q: f64, a: f64) -> (Vec<Ket>, Vec<Ket>) {
    let n1 = (q.powf(a) + q.powf(-a)).powf(-0.5);
    let n3 = (q.powf(a + 1.0) + q.powf(-a - 1.0)).powf(-0.5);
    let s = q_bracket(2.0 * a + 1.0, q).powf(-0.5);
    let ra = q_bracket(a, q).sqrt();
    let ra1 = q_bracket(a + 1.0, q).sqrt();
    let h = q.sqrt();
    let v1 = vec![
        vec![(1.0, 0, 0)],
        vec![(n1 * q.powf(a / 2.0), 0, 1), (n1 * q.powf(-a / 2.0), 1, 0)],
        vec![(n1 * q.powf(a / 2.0), 0, 2), (n1 * q.powf(-a / 2.0), 2, 0)],
        vec![
            (n1 * s * ra1 * q.powf(a), 0, 3),
            (n1 * s * ra1 * q.powf(-a), 3, 0),
            (n1 * s * ra * h, 1, 2),
            (-n1 * s * ra / h, 2, 1),
        ],
    ];
    let v3 = vec![
        vec![
            (n3 * s * ra * q.powf(a + 1.0), 3, 0),
            (n3 * s * ra * q.powf(-a - 1.0), 0, 3),
            (n3 * s * ra1 / h, 2, 1),
            (-n3 * s * ra1 * h, 1, 2),
        ],
        vec![
            (n3 * q.powf((a + 1.0) / 2.0), 3, 1),
            (n3 * q.powf(-(a + 1.0) / 2.0), 1, 3),
        ],
        vec![
            (n3 * q.powf((a + 1.0) / 2.0), 3, 2),
            (n3 * q.powf(-(a + 1.0) / 2.0), 2, 3),
        ],
        vec![(1.0, 3, 3)],
    ];
    (v1, v3)
}

/// `Σ_k |Ψ^k><Ψ^k|` as a graded 16x16 matrix. Duals pick up
/// `(-1)^{[x][y]}` per term and the graded product of kets with bras picks
/// up `(-1)^{[j][k]}`.
fn graded_projector(basis: &[Ket], g: &GradingVector) -> Vec<f64> {
    let mut out = vec![0.0; 256];
    for ket in basis {
        for &(c, i, j) in ket {
            for &(d, k, l) in ket {
                let dual_sign = if g.deg(k) * g.deg(l) == 1 { -1.0 } else { 1.0 };
                let prod_sign = if g.deg(j) * g.deg(k) == 1 { -1.0 } else { 1.0 };
                out[(4 * i + j) * 16 + 4 * k + l] += c * d * dual_sign * prod_sign;
            }
        }
    }
    out
}

/// Ungraded `σ` rebuilt as `(1 + q^-2α) P_1 + (1 + q^{2α+2}) P_3 - I`.
pub fn projector_sigma(q: f64, alpha: f64) -> Result<Vec<f64>> {
    check_domain(q, alpha)?;
    let g = GradingVector::STANDARD;
    let (v1, v3) = projector_bases(q, alpha);
    let p1 = graded_projector(&v1, &g);
    let p3 = graded_projector(&v3, &g);
    let c1 = 1.0 + q.powf(-2.0 * alpha);
    let c3 = 1.0 + q.powf(2.0 * alpha + 2.0);
    let graded: Vec<f64> = (0..256)
        .map(|i| c1 * p1[i] + c3 * p3[i] - if i / 16 == i % 16 { 1.0 } else { 0.0 })
        .collect();
    Ok(ungrade(&graded, &g))
}

/// Compares the projector reconstruction of `σ` with the exact matrix
/// evaluated at `p = q^α`; true iff the max-norm difference is within `tol`.
pub fn numeric_projector_check(q: f64, alpha: f64, tol: f64) -> Result<bool> {
    check_domain(q, alpha)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::DomainError(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let rebuilt = projector_sigma(q, alpha)?;
    let exact = sigma().matrix().eval(q, q.powf(alpha), y_numeric(q, alpha));
    let diff = rebuilt
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(diff <= tol)
}
