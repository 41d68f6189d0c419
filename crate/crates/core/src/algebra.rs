//! Finite-dimensional quasi *-algebras given by structure constants.
//!
//! At finite dimension the Banach completion is the coordinate space itself
//! and the partial multiplication is total, so an [`AlgebraSpec`] carries the
//! whole quasi *-algebra: product, the isometric involution `*`, the second
//! involution `#`, the Hilbertian norm (Gram matrix) and an optional unit.

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{
    c, gram_opnorm, is_finite, rel_diff, rel_diff_vec, AntilinearMap, CMatrix, CVector, GramMatrix,
    LinalgError,
};
use crate::report::Check;
use crate::sample::{basis_vector, random_vector, rng};
use crate::{to_f64, Real, Settings};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("malformed algebra: {0}")]
    Shape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("flat involution is inconsistent with star and sharp (residual {residual:e})")]
    InconsistentFlat { residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSpec<T: Real> {
    dim: usize,
    // products[i * dim + j] = coordinates of b_i b_j
    products: Vec<CVector<T>>,
    star: AntilinearMap<T>,
    sharp: AntilinearMap<T>,
    gram: GramMatrix<T>,
    unit: Option<CVector<T>>,
}

impl<T: Real> AlgebraSpec<T> {
    /// Assembles a spec, checking only shapes and finiteness; the algebraic
    /// invariants are certified by [`validate_spec`].
    pub fn new(
        products: Vec<CVector<T>>,
        star: AntilinearMap<T>,
        sharp: AntilinearMap<T>,
        gram: GramMatrix<T>,
        unit: Option<CVector<T>>,
    ) -> Result<Self, SpecError> {
        let dim = gram.dim();
        if products.len() != dim * dim {
            return Err(SpecError::Shape(format!(
                "expected {} products, found {}",
                dim * dim,
                products.len()
            )));
        }
        if let Some(p) = products.iter().find(|p| p.len() != dim) {
            return Err(SpecError::Shape(format!(
                "product vector of length {} in a {dim}-dimensional algebra",
                p.len()
            )));
        }
        if products
            .iter()
            .any(|p| !is_finite(&CMatrix::from_column_slice(dim, 1, p.as_slice())))
        {
            return Err(SpecError::Linalg(LinalgError::NonFinite));
        }
        for (name, map) in [("star", &star), ("sharp", &sharp)] {
            if map.dim() != dim {
                return Err(SpecError::Shape(format!(
                    "{name} is {}x{} but the algebra has dimension {dim}",
                    map.dim(),
                    map.dim()
                )));
            }
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(SpecError::Shape(format!(
                    "unit has length {} but the algebra has dimension {dim}",
                    u.len()
                )));
            }
        }
        Ok(Self {
            dim,
            products,
            star,
            sharp,
            gram,
            unit,
        })
    }

    /// Builds a spec from the tensor `c[i][j][k]` with `b_i b_j = Σ_k c_ij^k b_k`.
    pub fn from_structure(
        structure: &[Vec<Vec<Complex<T>>>],
        star: AntilinearMap<T>,
        sharp: AntilinearMap<T>,
        gram: GramMatrix<T>,
        unit: Option<CVector<T>>,
    ) -> Result<Self, SpecError> {
        let n = gram.dim();
        if structure.len() != n || structure.iter().any(|row| row.len() != n) {
            return Err(SpecError::Shape(format!(
                "structure tensor must be {n}x{n}x{n}"
            )));
        }
        let mut products = Vec::with_capacity(n * n);
        for row in structure {
            for k in row {
                if k.len() != n {
                    return Err(SpecError::Shape(format!(
                        "structure tensor must be {n}x{n}x{n}"
                    )));
                }
                products.push(CVector::from_column_slice(k));
            }
        }
        Self::new(products, star, sharp, gram, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn star(&self) -> &AntilinearMap<T> {
        &self.star
    }

    pub fn sharp(&self) -> &AntilinearMap<T> {
        &self.sharp
    }

    pub fn gram(&self) -> &GramMatrix<T> {
        &self.gram
    }

    pub fn unit(&self) -> Option<&CVector<T>> {
        self.unit.as_ref()
    }

    pub fn with_unit(mut self, unit: Option<CVector<T>>) -> Self {
        self.unit = unit;
        self
    }

    pub fn with_star(mut self, star: AntilinearMap<T>) -> Self {
        self.star = star;
        self
    }

    pub fn with_sharp(mut self, sharp: AntilinearMap<T>) -> Self {
        self.sharp = sharp;
        self
    }

    pub fn with_gram(mut self, gram: GramMatrix<T>) -> Self {
        self.gram = gram;
        self
    }

    /// `c_ij^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Complex<T> {
        self.products[i * self.dim + j][k]
    }

    /// Coordinates of `b_i b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &CVector<T> {
        &self.products[i * self.dim + j]
    }

    pub fn basis(&self, i: usize) -> CVector<T> {
        basis_vector(self.dim, i)
    }

    pub fn mul(&self, x: &CVector<T>, y: &CVector<T>) -> CVector<T> {
        self.left_mult(x) * y
    }

    /// Matrix of `L_x : y ↦ xy`.
    pub fn left_mult(&self, x: &CVector<T>) -> CMatrix<T> {
        let n = self.dim;
        let mut l = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut col = CVector::zeros(n);
            for i in 0..n {
                if x[i] != Complex::new(T::zero(), T::zero()) {
                    col.axpy(x[i], &self.products[i * n + j], c(T::one()));
                }
            }
            l.set_column(j, &col);
        }
        l
    }

    /// Matrix of `R_x : y ↦ yx`.
    pub fn right_mult(&self, x: &CVector<T>) -> CMatrix<T> {
        let n = self.dim;
        let mut r = CMatrix::zeros(n, n);
        for i in 0..n {
            let mut col = CVector::zeros(n);
            for j in 0..n {
                if x[j] != Complex::new(T::zero(), T::zero()) {
                    col.axpy(x[j], &self.products[i * n + j], c(T::one()));
                }
            }
            r.set_column(i, &col);
        }
        r
    }

    pub fn basis_left_mults(&self) -> Vec<CMatrix<T>> {
        (0..self.dim)
            .map(|i| self.left_mult(&self.basis(i)))
            .collect()
    }

    pub fn basis_right_mults(&self) -> Vec<CMatrix<T>> {
        (0..self.dim)
            .map(|i| self.right_mult(&self.basis(i)))
            .collect()
    }

    pub fn norm(&self, x: &CVector<T>) -> T {
        self.gram.norm(x)
    }

    /// `‖x‖_# = ‖L_x‖`.
    pub fn sharp_norm(&self, x: &CVector<T>) -> T {
        gram_opnorm(&self.left_mult(x), &self.gram).unwrap_or_else(|_| T::zero())
    }
}

/// `‖x‖_# = ‖L_x‖`, the operator norm for the Hilbertian norm.
pub fn sharp_norm<T: Real>(spec: &AlgebraSpec<T>, x: &CVector<T>) -> Result<T, LinalgError> {
    gram_opnorm(&spec.left_mult(x), spec.gram())
}

pub fn left_mult<T: Real>(
    spec: &AlgebraSpec<T>,
    x: &CVector<T>,
) -> Result<CMatrix<T>, LinalgError> {
    dim_check(spec, x)?;
    Ok(spec.left_mult(x))
}

pub fn right_mult<T: Real>(
    spec: &AlgebraSpec<T>,
    x: &CVector<T>,
) -> Result<CMatrix<T>, LinalgError> {
    dim_check(spec, x)?;
    Ok(spec.right_mult(x))
}

fn dim_check<T: Real>(spec: &AlgebraSpec<T>, x: &CVector<T>) -> Result<(), LinalgError> {
    if x.len() != spec.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: spec.dim(),
            found: x.len(),
        });
    }
    Ok(())
}

/// Outcome of [`validate_spec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Certifies associativity, involutivity and antimultiplicativity of `*`
/// and `#`, isometry of `*`, and the unit when one is declared.
pub fn validate_spec<T: Real>(spec: &AlgebraSpec<T>, settings: &Settings<T>) -> Validation {
    let n = spec.dim();
    let tol = to_f64(settings.tol.eq);
    let ls = spec.basis_left_mults();
    let mut checks = Vec::new();

    // L_{b_i b_j} = L_i L_j for all i, j is associativity
    let mut assoc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let lij = spec.left_mult(spec.basis_product(i, j));
            assoc = assoc.max(rel_diff(&lij, &(&ls[i] * &ls[j])));
        }
    }
    checks.push(Check::bounded("associativity", to_f64(assoc), tol));

    for (name, map) in [("star", spec.star()), ("sharp", spec.sharp())] {
        checks.push(Check::bounded(
            format!("{name}.involutive"),
            to_f64(map.involution_residual()),
            tol,
        ));
        let mut anti = T::zero();
        for i in 0..n {
            for j in 0..n {
                let lhs = map.apply(spec.basis_product(i, j));
                let rhs = spec.mul(&map.apply(&spec.basis(j)), &map.apply(&spec.basis(i)));
                anti = anti.max(rel_diff_vec(&lhs, &rhs));
            }
        }
        checks.push(Check::bounded(
            format!("{name}.antimultiplicative"),
            to_f64(anti),
            tol,
        ));
    }

    let mut r = rng(settings.seed);
    let mut iso = T::zero();
    let probes = (0..n)
        .map(|i| spec.basis(i))
        .chain((0..settings.samples).map(|_| random_vector(&mut r, n)));
    for x in probes {
        let a = spec.norm(&x);
        let b = spec.norm(&spec.star().apply(&x));
        let scale = a.max(b).max(T::one());
        iso = iso.max((a - b).abs() / scale);
    }
    checks.push(Check::bounded("star.isometric", to_f64(iso), tol));

    if let Some(u) = spec.unit() {
        let id = CMatrix::identity(n, n);
        let res = rel_diff(&spec.left_mult(u), &id).max(rel_diff(&spec.right_mult(u), &id));
        checks.push(Check::bounded("unit.identity", to_f64(res), tol));
    }
    Validation { checks }
}

/// Per-basis norms and the residuals of conditions (a.1)–(a.4).
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub norms: Vec<f64>,
    pub sharp_norms: Vec<f64>,
    pub checks: Vec<Check>,
}

impl NormReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const A4_NOTE: &str = "finite dimension: the identity map between the two norms is \
                           closed, so the norms are compatible";

/// Evaluates (a.1) `‖x^#x‖_# = ‖x‖_#²`, (a.2) `‖x‖ ≤ ‖x‖_#` and
/// (a.3) `‖xy‖ ≤ ‖x‖_#‖y‖` on basis elements and random samples, with
/// `‖ ‖_# = ‖L_·‖`. (a.4) holds automatically.
///
/// Multiplication on a finite-dimensional space is jointly continuous, so
/// the requirement that it be only separately continuous is vacuous and
/// has no check.
pub fn check_banach_conditions<T: Real>(
    spec: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> NormReport {
    let n = spec.dim();
    let mut r = rng(settings.seed ^ 0xa1);
    let probes: Vec<CVector<T>> = (0..n)
        .map(|i| spec.basis(i))
        .chain((0..settings.samples).map(|_| random_vector(&mut r, n)))
        .collect();

    let norms = (0..n).map(|i| to_f64(spec.norm(&spec.basis(i)))).collect();
    let sharp_norms = (0..n)
        .map(|i| to_f64(spec.sharp_norm(&spec.basis(i))))
        .collect();

    let mut a1 = T::zero();
    let mut a2 = T::zero();
    for x in &probes {
        let sx = spec.sharp_norm(x);
        let xsx = spec.mul(&spec.sharp().apply(x), x);
        let lhs = spec.sharp_norm(&xsx);
        a1 = a1.max((lhs - sx * sx).abs() / (sx * sx).max(T::one()));
        let nx = spec.norm(x);
        a2 = a2.max((nx - sx).max(T::zero()) / nx.max(sx).max(T::one()));
    }

    let mut a3 = T::zero();
    let pairs = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (spec.basis(i), spec.basis(j)))
        .chain((0..settings.samples).map(|_| (random_vector(&mut r, n), random_vector(&mut r, n))));
    for (x, y) in pairs {
        let lhs = spec.norm(&spec.mul(&x, &y));
        let rhs = spec.sharp_norm(&x) * spec.norm(&y);
        a3 = a3.max((lhs - rhs).max(T::zero()) / lhs.max(rhs).max(T::one()));
    }

    let eq = to_f64(settings.tol.eq);
    let ineq = to_f64(settings.tol.ineq);
    NormReport {
        norms,
        sharp_norms,
        checks: vec![
            Check::bounded("banach.(a.1)", to_f64(a1), eq),
            Check::bounded("banach.(a.2)", to_f64(a2), ineq),
            Check::bounded("banach.(a.3)", to_f64(a3), ineq),
            Check::automatic("banach.(a.4)", A4_NOTE),
        ],
    }
}

/// Residuals of the ♭-structure.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatReport {
    pub checks: Vec<Check>,
}

impl FlatReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The involution ♭ of `A_♭ = J A_#`, determined by `(x*)^♭ = x^{#*}`,
/// i.e. `♭ = * ∘ # ∘ *`.
///
/// Verifies that ♭ is an involutive antimultiplicative map, that
/// `‖x*‖_♭ = ‖R_{x*}‖` equals `‖x‖_#`, that left and right multiplications
/// commute, and that `R_{z*} = * L_z *` for every basis `z`.
pub fn flat_structure<T: Real>(
    spec: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> Result<(AntilinearMap<T>, FlatReport), SpecError> {
    let n = spec.dim();
    let star = spec.star();
    let flat = AntilinearMap::from_matrix(
        star.matrix() * spec.sharp().matrix().conjugate() * star.matrix(),
    );
    let eq = settings.tol.eq;

    let involutive = flat.involution_residual();
    let mut anti = T::zero();
    for i in 0..n {
        for j in 0..n {
            let lhs = flat.apply(spec.basis_product(i, j));
            let rhs = spec.mul(&flat.apply(&spec.basis(j)), &flat.apply(&spec.basis(i)));
            anti = anti.max(rel_diff_vec(&lhs, &rhs));
        }
    }
    if involutive > eq || anti > eq {
        return Err(SpecError::InconsistentFlat {
            residual: to_f64(involutive.max(anti)),
        });
    }

    let ls = spec.basis_left_mults();
    let rs = spec.basis_right_mults();
    let mut norm_res = T::zero();
    let mut commute = T::zero();
    let mut r_flat = T::zero();
    for i in 0..n {
        let x = spec.basis(i);
        let xs = star.apply(&x);
        let r_xs = spec.right_mult(&xs);
        let flat_norm = gram_opnorm(&r_xs, spec.gram())?;
        let sharp = gram_opnorm(&ls[i], spec.gram())?;
        norm_res = norm_res.max((flat_norm - sharp).abs() / sharp.max(T::one()));
        r_flat = r_flat.max(rel_diff(&r_xs, &star.conjugate_linear(&ls[i])));
        for rj in &rs {
            commute = commute.max((&ls[i] * rj - rj * &ls[i]).norm());
        }
    }
    let tol = to_f64(eq);
    let report = FlatReport {
        checks: vec![
            Check::bounded("flat.involutive", to_f64(involutive), tol),
            Check::bounded("flat.antimultiplicative", to_f64(anti), tol),
            Check::bounded("flat.norm", to_f64(norm_res), tol),
            Check::bounded("flat.commuting-multiplications", to_f64(commute), tol),
            Check::bounded("flat.right-from-left", to_f64(r_flat), tol),
        ],
    };
    Ok((flat, report))
}
