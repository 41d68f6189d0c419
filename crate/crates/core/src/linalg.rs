//! Dense complex linear algebra on coordinate spaces carrying a Gram matrix.
//!
//! Vectors are coordinates against a fixed basis; the inner product is
//! `(a|b) = b^H G a`, linear in the first argument. Antilinear operators are
//! stored as the matrix `M` of `v ↦ M conj(v)`, so that
//!
//! * antilinear ∘ antilinear is linear with matrix `M₁ conj(M₂)`,
//! * antilinear ∘ linear `L` has matrix `M conj(L)`,
//! * linear `L` ∘ antilinear has matrix `L M`,
//! * the `G`-adjoint of `T` (defined by `(Ta|b) = (T*b|a)`) is `G⁻¹ Mᵀ conj(G)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use thiserror::Error;

use crate::{lit, to_f64, Real, Tolerances};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("gram.hermitian: relative Hermitian defect {residual:e}")]
    GramNotHermitian { residual: f64 },
    #[error("gram.positive-definite: smallest eigenvalue {min_eigenvalue:e}")]
    GramNotPositiveDefinite { min_eigenvalue: f64 },
    #[error("antilinear map is singular (smallest singular value {sigma_min:e})")]
    Singular { sigma_min: f64 },
    #[error("operator is not self-adjoint for the Gram inner product (residual {residual:e})")]
    NotSelfAdjoint { residual: f64 },
    #[error("operator has a non-positive eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },
}

#[inline]
pub(crate) fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `|z|` for a complex scalar.
#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub(crate) fn is_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `‖a − b‖_F / max(1, ‖a‖_F, ‖b‖_F)`.
pub fn rel_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let scale = a.norm().max(b.norm()).max(T::one());
    (a - b).norm() / scale
}

/// Vector version of [`rel_diff`].
pub fn rel_diff_vec<T: Real>(a: &CVector<T>, b: &CVector<T>) -> T {
    let scale = a.norm().max(b.norm()).max(T::one());
    (a - b).norm() / scale
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * c(lit::<T>(0.5));
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// `U diag(f(λ)) U^H` for the Hermitian part of `m`.
pub fn hermitian_function<T: Real>(m: &CMatrix<T>, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
    let (values, u) = hermitian_eigen(m);
    let d = CMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| f(l)),
    ));
    &u * d * u.adjoint()
}

/// Singular values of `m` in descending order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<T> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// Positive definite Hermitian matrix defining `‖ ‖` and `( | )`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T: Real> {
    g: CMatrix<T>,
    sqrt: CMatrix<T>,
    inv_sqrt: CMatrix<T>,
    inv: CMatrix<T>,
}

impl<T: Real> GramMatrix<T> {
    pub fn new(g: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self, LinalgError> {
        if !g.is_square() {
            return Err(LinalgError::NotSquare {
                rows: g.nrows(),
                cols: g.ncols(),
            });
        }
        if !is_finite(&g) {
            return Err(LinalgError::NonFinite);
        }
        let n = g.nrows();
        if n == 0 {
            return Ok(Self::identity(0));
        }
        let herm = (&g - g.adjoint()).norm() / g.norm().max(T::one());
        if herm > tol.herm {
            return Err(LinalgError::GramNotHermitian {
                residual: to_f64(herm),
            });
        }
        let (values, u) = hermitian_eigen(&g);
        let lo = values[0];
        let hi = values[n - 1];
        if lo <= T::zero() || lo <= tol.pd * hi {
            return Err(LinalgError::GramNotPositiveDefinite {
                min_eigenvalue: to_f64(lo),
            });
        }
        let apply = |f: &dyn Fn(T) -> T| {
            let d =
                CMatrix::from_diagonal(&DVector::from_iterator(n, values.iter().map(|&l| c(f(l)))));
            &u * d * u.adjoint()
        };
        let sqrt = apply(&|l: T| l.sqrt());
        let inv_sqrt = apply(&|l: T| T::one() / l.sqrt());
        let inv = apply(&|l: T| T::one() / l);
        let g = (&g + g.adjoint()) * c(lit::<T>(0.5));
        Ok(Self {
            g,
            sqrt,
            inv_sqrt,
            inv,
        })
    }

    pub fn identity(n: usize) -> Self {
        let i = CMatrix::identity(n, n);
        Self {
            g: i.clone(),
            sqrt: i.clone(),
            inv_sqrt: i.clone(),
            inv: i,
        }
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.g
    }

    /// `G^{1/2}`, the congruence to the orthonormal frame.
    pub fn sqrt(&self) -> &CMatrix<T> {
        &self.sqrt
    }

    pub fn inv_sqrt(&self) -> &CMatrix<T> {
        &self.inv_sqrt
    }

    pub fn inverse(&self) -> &CMatrix<T> {
        &self.inv
    }

    pub fn inner(&self, a: &CVector<T>, b: &CVector<T>) -> Result<Complex<T>, LinalgError> {
        inner(a, b, self)
    }

    pub fn norm(&self, a: &CVector<T>) -> T {
        (a.adjoint() * &self.g * a)[(0, 0)].re.max(T::zero()).sqrt()
    }

    /// Adjoint of a linear operator for `( | )`: `G⁻¹ L^H G`.
    pub fn adjoint(&self, l: &CMatrix<T>) -> CMatrix<T> {
        &self.inv * l.adjoint() * &self.g
    }

    /// Residual of `G L = L^H G`, relative to `‖L‖`.
    pub fn self_adjoint_residual(&self, l: &CMatrix<T>) -> T {
        rel_diff(&self.adjoint(l), l)
    }

    fn check(&self, n: usize) -> Result<(), LinalgError> {
        if self.dim() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }
}

/// `(a|b) = conj(b)ᵀ G a`.
pub fn inner<T: Real>(
    a: &CVector<T>,
    b: &CVector<T>,
    g: &GramMatrix<T>,
) -> Result<Complex<T>, LinalgError> {
    g.check(a.len())?;
    g.check(b.len())?;
    Ok((b.adjoint() * g.matrix() * a)[(0, 0)])
}

/// Conjugate-linear operator `v ↦ M conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearMap<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> AntilinearMap<T> {
    pub fn new(m: CMatrix<T>) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !is_finite(&m) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix(m: CMatrix<T>) -> Self {
        Self { m }
    }

    /// Plain coordinate conjugation.
    pub fn conjugation(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn apply(&self, v: &CVector<T>) -> CVector<T> {
        &self.m * v.conjugate()
    }

    /// `self ∘ other`, a linear map.
    pub fn compose(&self, other: &AntilinearMap<T>) -> CMatrix<T> {
        &self.m * other.m.conjugate()
    }

    /// `self ∘ L`.
    pub fn after_linear(&self, l: &CMatrix<T>) -> AntilinearMap<T> {
        Self {
            m: &self.m * l.conjugate(),
        }
    }

    /// `L ∘ self`.
    pub fn before_linear(&self, l: &CMatrix<T>) -> AntilinearMap<T> {
        Self { m: l * &self.m }
    }

    /// `self ∘ L ∘ self` for a linear `L`.
    pub fn conjugate_linear(&self, l: &CMatrix<T>) -> CMatrix<T> {
        &self.m * l.conjugate() * self.m.conjugate()
    }

    pub fn adjoint(&self, g: &GramMatrix<T>) -> Result<AntilinearMap<T>, LinalgError> {
        antilinear_adjoint(self, g)
    }

    /// `‖T∘T − I‖` relative.
    pub fn involution_residual(&self) -> T {
        rel_diff(
            &self.compose(self),
            &CMatrix::identity(self.dim(), self.dim()),
        )
    }

    /// `‖T*T − I‖` relative, zero iff `‖Tv‖ = ‖v‖` for every `v`.
    pub fn isometry_residual(&self, g: &GramMatrix<T>) -> Result<T, LinalgError> {
        let adj = self.adjoint(g)?;
        Ok(rel_diff(
            &adj.compose(self),
            &CMatrix::identity(self.dim(), self.dim()),
        ))
    }

    pub fn distance(&self, other: &AntilinearMap<T>) -> T {
        rel_diff(&self.m, &other.m)
    }
}

/// The unique antilinear `T*` with `(T a|b) = (T* b|a)`.
pub fn antilinear_adjoint<T: Real>(
    t: &AntilinearMap<T>,
    g: &GramMatrix<T>,
) -> Result<AntilinearMap<T>, LinalgError> {
    g.check(t.dim())?;
    Ok(AntilinearMap {
        m: g.inverse() * t.m.transpose() * g.matrix().conjugate(),
    })
}

/// Strictly positive `G`-self-adjoint operator with a cached spectral
/// decomposition, evaluated in the orthonormal frame `G^{1/2}`.
#[derive(Debug, Clone)]
pub struct PositiveOperator<T: Real> {
    eigenvalues: Vec<T>,
    // columns: G-orthonormal eigenvectors, i.e. G^{-1/2} U
    left: CMatrix<T>,
    // U^H G^{1/2}
    right: CMatrix<T>,
}

impl<T: Real> PositiveOperator<T> {
    pub fn new(
        delta: &CMatrix<T>,
        g: &GramMatrix<T>,
        tol: &Tolerances<T>,
    ) -> Result<Self, LinalgError> {
        g.check(delta.nrows())?;
        if !delta.is_square() {
            return Err(LinalgError::NotSquare {
                rows: delta.nrows(),
                cols: delta.ncols(),
            });
        }
        let n = delta.nrows();
        let tilde = g.sqrt() * delta * g.inv_sqrt();
        let residual = rel_diff(&tilde, &tilde.adjoint());
        if residual > tol.eq {
            return Err(LinalgError::NotSelfAdjoint {
                residual: to_f64(residual),
            });
        }
        let (eigenvalues, u) = hermitian_eigen(&tilde);
        if n > 0 {
            let lo = eigenvalues[0];
            let hi = eigenvalues[n - 1];
            if lo <= T::zero() || lo <= tol.pd * hi {
                return Err(LinalgError::NotPositive {
                    eigenvalue: to_f64(lo),
                });
            }
        }
        Ok(Self {
            eigenvalues,
            left: g.inv_sqrt() * &u,
            right: u.adjoint() * g.sqrt(),
        })
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `Δ^α` with the principal branch `λ^α = exp(α ln λ)`.
    pub fn power(&self, alpha: Complex<T>) -> CMatrix<T> {
        let d = CMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| {
                let w = alpha * c(l.ln());
                let r = w.re.exp();
                Complex::new(r * w.im.cos(), r * w.im.sin())
            }),
        ));
        &self.left * d * &self.right
    }

    pub fn real_power(&self, alpha: T) -> CMatrix<T> {
        self.power(c(alpha))
    }
}

pub fn matrix_power<T: Real>(
    delta: &CMatrix<T>,
    alpha: Complex<T>,
    g: &GramMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<CMatrix<T>, LinalgError> {
    Ok(PositiveOperator::new(delta, g, tol)?.power(alpha))
}

/// Output of [`polar_antilinear`]: `S = J Δ^{1/2}`.
#[derive(Debug, Clone)]
pub struct AntilinearPolar<T: Real> {
    pub j: AntilinearMap<T>,
    pub delta: CMatrix<T>,
    pub modulus: PositiveOperator<T>,
}

/// Polar decomposition of an invertible antilinear map.
///
/// `Δ = S*S` is linear and positive; `J = S Δ^{-1/2}` is antilinear and
/// `G`-isometric.
pub fn polar_antilinear<T: Real>(
    s: &AntilinearMap<T>,
    g: &GramMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<AntilinearPolar<T>, LinalgError> {
    g.check(s.dim())?;
    let sv = singular_values(&(g.sqrt() * s.matrix() * g.inv_sqrt().conjugate()));
    if let (Some(&hi), Some(&lo)) = (sv.first(), sv.last()) {
        if lo <= T::zero() || lo <= tol.pd * hi {
            return Err(LinalgError::Singular {
                sigma_min: to_f64(lo),
            });
        }
    }
    let s_adj = antilinear_adjoint(s, g)?;
    let delta = s_adj.compose(s);
    let modulus = PositiveOperator::new(&delta, g, tol)?;
    let j = s.after_linear(&modulus.real_power(lit(-0.5)));
    Ok(AntilinearPolar { j, delta, modulus })
}

/// `sup ‖Lv‖/‖v‖` with the norms of `G`.
pub fn gram_opnorm<T: Real>(l: &CMatrix<T>, g: &GramMatrix<T>) -> Result<T, LinalgError> {
    gram_opnorm_between(l, g, g)
}

/// Operator norm of `L : (Cⁿ, G_dom) → (Cᵐ, G_cod)`.
pub fn gram_opnorm_between<T: Real>(
    l: &CMatrix<T>,
    domain: &GramMatrix<T>,
    codomain: &GramMatrix<T>,
) -> Result<T, LinalgError> {
    domain.check(l.ncols())?;
    codomain.check(l.nrows())?;
    Ok(spectral_norm(&(codomain.sqrt() * l * domain.inv_sqrt())))
}

/// Orthonormal basis of `ker M`; singular values at or below
/// `tol_rank · σ_max` count as zero.
pub fn nullspace<T: Real>(m: &CMatrix<T>, tol_rank: T) -> Vec<CVector<T>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    // pad to at least square so the thin SVD carries a full right basis
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = match svd.v_t {
        Some(v) => v,
        None => return Vec::new(),
    };
    let s = &svd.singular_values;
    let hi = s.iter().copied().fold(T::zero(), |a, b| a.max(b));
    let cutoff = tol_rank * hi;
    (0..s.len())
        .filter(|&k| hi == T::zero() || s[k] <= cutoff)
        .map(|k| v_t.row(k).adjoint())
        .collect()
}

/// Numerical rank with relative cutoff `tol_rank`.
pub fn rank<T: Real>(m: &CMatrix<T>, tol_rank: T) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&hi) if hi > T::zero() => s.iter().filter(|&&x| x > tol_rank * hi).count(),
        _ => 0,
    }
}

/// Orthonormal (Euclidean) basis of the span of `vectors`, as columns.
pub fn orthonormal_span<T: Real>(vectors: &[CVector<T>], dim: usize, tol_rank: T) -> CMatrix<T> {
    if vectors.is_empty() {
        return CMatrix::zeros(dim, 0);
    }
    let a = CMatrix::from_columns(vectors);
    let svd = a.svd(true, false);
    let u = match svd.u {
        Some(u) => u,
        None => return CMatrix::zeros(dim, 0),
    };
    let s = &svd.singular_values;
    let hi = s.iter().copied().fold(T::zero(), |a, b| a.max(b));
    if hi == T::zero() {
        return CMatrix::zeros(dim, 0);
    }
    let keep: Vec<_> = (0..s.len())
        .filter(|&k| s[k] > tol_rank * hi)
        .map(|k| u.column(k).into_owned())
        .collect();
    if keep.is_empty() {
        CMatrix::zeros(dim, 0)
    } else {
        CMatrix::from_columns(&keep)
    }
}

/// Largest relative distance of a vector in `vectors` from the column span
/// of the orthonormal matrix `q`.
pub fn projection_residual<T: Real>(vectors: &[CVector<T>], q: &CMatrix<T>) -> T {
    vectors
        .iter()
        .map(|v| {
            let nv = v.norm();
            if nv == T::zero() {
                return T::zero();
            }
            let p = q * (q.adjoint() * v);
            (v - p).norm() / nv
        })
        .fold(T::zero(), |a, b| a.max(b))
}

/// Column-major flattening of a square operator.
pub fn vectorize<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize<T: Real>(v: &CVector<T>, n: usize) -> CMatrix<T> {
    CMatrix::from_column_slice(n, n, v.as_slice())
}
