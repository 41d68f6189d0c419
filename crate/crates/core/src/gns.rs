//! Positive sesquilinear forms and the GNS quotient.
//!
//! A form is `φ(a,b) = conj(b)ᵀ F a`. The quotient `A/N_φ` carries the
//! φ-inner product, the product `λ(x)λ(y) = λ(xy)` and the involutions
//! `λ(x)* = λ(x*)`, `λ(x)^# = λ(x^#)`; at finite dimension it is already
//! complete.

use num_complex::Complex;
use thiserror::Error;

use crate::algebra::{AlgebraSpec, SpecError};
use crate::hcq::check_hcq;
use crate::linalg::{
    c, gram_opnorm, gram_opnorm_between, hermitian_eigen, is_finite, modulus, rank, rel_diff,
    rel_diff_vec, AntilinearMap, CMatrix, CVector, GramMatrix, LinalgError,
};
use crate::modular::{modular_data, quasi_unit, standardness};
use crate::report::{all_pass, Check};
use crate::sample::{random_vector, rng};
use crate::{lit, to_f64, Real, Settings, Tolerances};

pub const COMPLETION_NOTE: &str = "finite dimension: the quotient is already complete";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GnsError {
    #[error("form matrix is {rows}x{cols}, expected {dim}x{dim}")]
    FormShape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("form matrix has non-finite entries")]
    NonFinite,
    #[error("form.hermitian: residual {residual:e}")]
    FormNotHermitian { residual: f64 },
    #[error("form.positive: minimum eigenvalue {min_eigenvalue:e}")]
    FormNotPositive { min_eigenvalue: f64 },
    #[error("{map} does not descend to the quotient (residual {residual:e})")]
    DoesNotDescend { map: &'static str, residual: f64 },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Positive sesquilinear form `φ(a,b) = conj(b)ᵀ F a`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpec<T: Real> {
    f: CMatrix<T>,
}

impl<T: Real> FormSpec<T> {
    /// Accepts `F` Hermitian within `tol.herm` and with eigenvalues at least
    /// `−tol.pd · λ_max`.
    pub fn new(f: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self, GnsError> {
        if !f.is_square() {
            return Err(GnsError::FormShape {
                rows: f.nrows(),
                cols: f.ncols(),
                dim: f.nrows(),
            });
        }
        if !is_finite(&f) {
            return Err(GnsError::NonFinite);
        }
        let herm = (&f - f.adjoint()).norm() / f.norm().max(T::one());
        if herm > tol.herm {
            return Err(GnsError::FormNotHermitian {
                residual: to_f64(herm),
            });
        }
        let f = (&f + f.adjoint()) * c(lit::<T>(0.5));
        let (values, _) = hermitian_eigen(&f);
        if let (Some(&lo), Some(&hi)) = (values.first(), values.last()) {
            if lo < -tol.pd * hi.max(T::one()) {
                return Err(GnsError::FormNotPositive {
                    min_eigenvalue: to_f64(lo),
                });
            }
        }
        Ok(Self { f })
    }

    /// The form `(a|b)` of a Gram matrix.
    pub fn inner_product(g: &GramMatrix<T>) -> Self {
        Self {
            f: g.matrix().clone(),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            f: CMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.f.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.f
    }

    pub fn eval(&self, a: &CVector<T>, b: &CVector<T>) -> Complex<T> {
        (b.adjoint() * &self.f * a)[(0, 0)]
    }

    fn check_dim(&self, n: usize) -> Result<(), GnsError> {
        if self.dim() != n {
            return Err(GnsError::FormShape {
                rows: self.f.nrows(),
                cols: self.f.ncols(),
                dim: n,
            });
        }
        Ok(())
    }
}

/// The unit of `spec`, or a quasi-unit when none is declared.
pub fn resolve_unit<T: Real>(spec: &AlgebraSpec<T>, settings: &Settings<T>) -> Option<CVector<T>> {
    spec.unit()
        .cloned()
        .or_else(|| quasi_unit(spec, settings).map(|q| q.u))
}

/// Coefficient matrix `Q` with `φ(x*, x^#) = conj(x)^H Q conj(x)`.
pub fn standard_condition_matrix<T: Real>(spec: &AlgebraSpec<T>, form: &FormSpec<T>) -> CMatrix<T> {
    spec.sharp().matrix().adjoint() * form.matrix() * spec.star().matrix()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormReport {
    pub checks: Vec<Check>,
    /// `‖G^{-1/2} F G^{-1/2}‖`.
    pub relative_norm: f64,
    /// Smallest eigenvalue of the Hermitian part of the (ii)₄ matrix.
    pub standard_min_eigenvalue: f64,
}

impl FormReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// (ii)₁–(ii)₃, the hypotheses of the quotient construction.
    pub fn construction_ready(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.name != "form.(ii)4")
            .all(|c| c.passed)
    }
}

fn rel_scalar<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    modulus(a - b) / modulus(a).max(modulus(b)).max(T::one())
}

/// Certifies (ii)₁ `φ(x,y) = φ(u, x^#y)`, (ii)₂ `|φ(a,b)| ≤ ‖a‖‖b‖`,
/// (ii)₃ `φ(x,y) = φ(y*, x*)` and (ii)₄ `φ(x*, x^#) ≥ 0`.
///
/// (ii)₁ and (ii)₃ are checked on basis pairs, which suffices by
/// sesquilinearity; (ii)₂ is the operator bound `‖G^{-1/2}FG^{-1/2}‖ ≤ 1`.
pub fn check_form<T: Real>(
    spec: &AlgebraSpec<T>,
    form: &FormSpec<T>,
    u: &CVector<T>,
    settings: &Settings<T>,
) -> Result<FormReport, GnsError> {
    let n = spec.dim();
    form.check_dim(n)?;
    if u.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: u.len(),
        }
        .into());
    }
    let tol = &settings.tol;
    let mut ii1 = T::zero();
    let mut ii3 = T::zero();
    for i in 0..n {
        let x = spec.basis(i);
        let xs = spec.sharp().apply(&x);
        let x_star = spec.star().apply(&x);
        for j in 0..n {
            let y = spec.basis(j);
            let lhs = form.eval(&x, &y);
            ii1 = ii1.max(rel_scalar(lhs, form.eval(u, &spec.mul(&xs, &y))));
            ii3 = ii3.max(rel_scalar(lhs, form.eval(&spec.star().apply(&y), &x_star)));
        }
    }
    let g = spec.gram();
    let relative = crate::linalg::spectral_norm(&(g.inv_sqrt() * form.matrix() * g.inv_sqrt()));
    let ii2 = (relative - T::one()).max(T::zero());

    let q = standard_condition_matrix(spec, form);
    let scale = q.norm().max(T::one());
    let anti = (&q - q.adjoint()).norm() * lit::<T>(0.5) / scale;
    let (values, _) = hermitian_eigen(&q);
    let min_eig = values.first().copied().unwrap_or_else(T::zero);
    let ii4 = anti.max((-min_eig / scale).max(T::zero()));

    let eq = to_f64(tol.eq);
    Ok(FormReport {
        checks: vec![
            Check::bounded("form.(ii)1", to_f64(ii1), eq),
            Check::bounded("form.(ii)2", to_f64(ii2), to_f64(tol.ineq)),
            Check::bounded("form.(ii)3", to_f64(ii3), eq),
            Check::bounded("form.(ii)4", to_f64(ii4), eq),
        ],
        relative_norm: to_f64(relative),
        standard_min_eigenvalue: to_f64(min_eig),
    })
}

/// Output of [`gns_construct`].
#[derive(Debug, Clone)]
pub struct GnsResult<T: Real> {
    pub null_dim: usize,
    /// `(A/N_φ, ( | )_φ, *, #)` in φ-orthonormal coordinates.
    pub quotient_spec: AlgebraSpec<T>,
    /// `λ_φ` from algebra coordinates to quotient coordinates.
    pub phi_map: CMatrix<T>,
    /// Right inverse of `phi_map` with range orthogonal to `N_φ`.
    pub lift: CMatrix<T>,
    pub faithful: bool,
    /// `1 − ‖λ_φ‖`; non-negative when `λ_φ` is contractive.
    pub contractive_margin: f64,
    /// (ii)₄.
    pub standard: bool,
    /// Standardness of the quotient decided on its modular data, when the
    /// quotient is a left Hilbert algebra.
    pub modular_standard: Option<bool>,
    pub residuals: Vec<Check>,
    pub note: &'static str,
}

impl<T: Real> GnsResult<T> {
    pub fn quotient_dim(&self) -> usize {
        self.quotient_spec.dim()
    }

    pub fn certified(&self) -> bool {
        all_pass(&self.residuals)
    }
}

/// Builds the quotient spec through `phi` with right inverse `lift`:
/// `λ(x)λ(y) = λ(xy)`, `λ(x)* = λ(x*)`, `λ(x)^# = λ(x^#)`, identity Gram.
pub fn quotient_from_map<T: Real>(
    spec: &AlgebraSpec<T>,
    phi: &CMatrix<T>,
    lift: &CMatrix<T>,
    unit: Option<&CVector<T>>,
) -> Result<AlgebraSpec<T>, GnsError> {
    let r = phi.nrows();
    let lifted: Vec<CVector<T>> = (0..r).map(|k| lift.column(k).into_owned()).collect();
    let mut products = Vec::with_capacity(r * r);
    for a in &lifted {
        for b in &lifted {
            products.push(phi * spec.mul(a, b));
        }
    }
    let star = AntilinearMap::new(phi * spec.star().matrix() * lift.conjugate())?;
    let sharp = AntilinearMap::new(phi * spec.sharp().matrix() * lift.conjugate())?;
    Ok(AlgebraSpec::new(
        products,
        star,
        sharp,
        GramMatrix::identity(r),
        unit.map(|u| phi * u),
    )?)
}

/// GNS quotient of `spec` by the null space of `form`.
///
/// Eigenvalues of `F` at or below `tol_rank · λ_max` span `N_φ`; the kept
/// eigenpairs `(μ_k, v_k)`, largest first, give `λ_φ(a)_k = √μ_k v_k^H a`.
pub fn gns_construct<T: Real>(
    spec: &AlgebraSpec<T>,
    form: &FormSpec<T>,
    settings: &Settings<T>,
) -> Result<GnsResult<T>, GnsError> {
    let n = spec.dim();
    form.check_dim(n)?;
    let tol = &settings.tol;
    let (values, vectors) = hermitian_eigen(form.matrix());
    let hi = values.last().copied().unwrap_or_else(T::zero);
    let keep: Vec<usize> = (0..n)
        .rev()
        .filter(|&k| hi > T::zero() && values[k] > tol.rank * hi)
        .collect();
    let r = keep.len();
    let null: Vec<CVector<T>> = (0..n)
        .filter(|k| !keep.contains(k))
        .map(|k| vectors.column(k).into_owned())
        .collect();

    let mut phi = CMatrix::zeros(r, n);
    let mut lift = CMatrix::zeros(n, r);
    for (row, &k) in keep.iter().enumerate() {
        let v = phase_normalized(&vectors.column(k).into_owned());
        let s = values[k].sqrt();
        phi.set_row(row, &(v.adjoint() * c(s)));
        lift.set_column(row, &(v / c(s)));
    }

    // N_φ must be a two-sided ideal stable under * and #
    let scale = |m: &CMatrix<T>| phi.norm().max(T::one()) * m.norm().max(T::one());
    let mut ideal = T::zero();
    for i in 0..n {
        let l = spec.left_mult(&spec.basis(i));
        let rm = spec.right_mult(&spec.basis(i));
        for v in &null {
            ideal = ideal.max((&phi * (&l * v)).norm() / scale(&l));
            ideal = ideal.max((&phi * (&rm * v)).norm() / scale(&rm));
        }
    }
    let mut star_res = T::zero();
    let mut sharp_res = T::zero();
    for v in &null {
        star_res = star_res.max((&phi * spec.star().apply(v)).norm() / scale(spec.star().matrix()));
        sharp_res =
            sharp_res.max((&phi * spec.sharp().apply(v)).norm() / scale(spec.sharp().matrix()));
    }
    for (map, residual) in [("star", star_res), ("sharp", sharp_res)] {
        if residual > tol.eq {
            return Err(GnsError::DoesNotDescend {
                map,
                residual: to_f64(residual),
            });
        }
    }

    let unit = resolve_unit(spec, settings);
    let quotient = quotient_from_map(spec, &phi, &lift, unit.as_ref())?;

    // ‖λ(x)λ(y)‖²_φ ≤ ‖x‖²_# ‖λ(y)‖²_φ
    let mut rg = rng(settings.seed ^ 0x9e);
    let pairs: Vec<(CVector<T>, CVector<T>)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (spec.basis(i), spec.basis(j)))
        .chain(
            (0..settings.samples).map(|_| (random_vector(&mut rg, n), random_vector(&mut rg, n))),
        )
        .collect();
    let mut bound = T::zero();
    for (x, y) in &pairs {
        let lhs = form.eval(&spec.mul(x, y), &spec.mul(x, y)).re;
        let sx = spec.sharp_norm(x);
        let rhs = sx * sx * form.eval(y, y).re;
        bound = bound.max((lhs - rhs).max(T::zero()) / lhs.abs().max(rhs.abs()).max(T::one()));
    }

    let pullback = rel_diff(&(phi.adjoint() * &phi), form.matrix());
    let opnorm = gram_opnorm_between(&phi, spec.gram(), quotient.gram())?;
    let form_report = resolve_unit(spec, settings)
        .map(|u| check_form(spec, form, &u, settings))
        .transpose()?;
    let standard = match &form_report {
        Some(rep) => rep.check("form.(ii)4").is_some_and(|c| c.passed),
        None => {
            let q = standard_condition_matrix(spec, form);
            let (vals, _) = hermitian_eigen(&q);
            vals.first()
                .map_or(true, |&m| m >= -tol.eq * q.norm().max(T::one()))
        }
    };
    let modular_standard = if r == 0 {
        Some(true)
    } else {
        modular_data(&quotient, settings)
            .ok()
            .and_then(|md| standardness(&quotient, &md, settings).ok())
            .map(|s| s.standard)
    };

    let eq = to_f64(tol.eq);
    let hcq = check_hcq(&quotient, settings);
    let mut residuals = vec![
        Check::bounded("gns.null-ideal", to_f64(ideal), eq),
        Check::bounded("gns.star-descends", to_f64(star_res), eq),
        Check::bounded("gns.sharp-descends", to_f64(sharp_res), eq),
        Check::bounded("gns.boundedness", to_f64(bound), to_f64(tol.ineq)),
        Check::bounded("gns.pullback", to_f64(pullback), eq),
    ];
    residuals.extend(hcq.checks.into_iter().map(|mut c| {
        c.name = format!("gns.quotient.{}", c.name);
        c
    }));
    if let Some(ms) = modular_standard {
        residuals.push(Check::flag("gns.standard-agreement", ms == standard));
    }
    Ok(GnsResult {
        null_dim: n - r,
        quotient_spec: quotient,
        phi_map: phi,
        lift,
        faithful: r == n,
        contractive_margin: to_f64(T::one() - opnorm),
        standard,
        modular_standard,
        residuals,
        note: COMPLETION_NOTE,
    })
}

/// Rescales a unit vector so its first entry of maximal modulus is real
/// positive.
fn phase_normalized<T: Real>(v: &CVector<T>) -> CVector<T> {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if modulus(*z) > modulus(v[best]) * (T::one() + lit(1e-9)) {
            best = i;
        }
    }
    let p = v[best];
    if modulus(p) == T::zero() {
        return v.clone();
    }
    v * (p.conj() / c(modulus(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomKind {
    NotHomomorphism,
    Homomorphism,
    Injective,
    Surjective,
    Isomorphism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomReport {
    pub kind: HomKind,
    pub contractive: bool,
    pub isometric: bool,
    /// `‖Φ^H G_target Φ − G_source‖` relative.
    pub isometry_residual: f64,
    pub opnorm: f64,
    pub checks: Vec<Check>,
}

impl HomReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Largest residual of the intertwining and isometry checks.
    pub fn alignment_residual(&self) -> f64 {
        ["hom.star", "hom.multiplicative", "hom.sharp"]
            .iter()
            .filter_map(|n| self.check(n))
            .map(|c| c.residual)
            .fold(self.isometry_residual, f64::max)
    }
}

/// Classifies `Φ : source → target`: intertwining of `*`, `#` and the
/// product, contractivity, injectivity and surjectivity, isometry, and
/// `‖L_{Φx}‖ ≤ ‖x‖_#` with equality when `Φ` is injective.
pub fn verify_homomorphism<T: Real>(
    phi: &CMatrix<T>,
    source: &AlgebraSpec<T>,
    target: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> Result<HomReport, GnsError> {
    let (m, n) = (target.dim(), source.dim());
    if phi.shape() != (m, n) {
        return Err(LinalgError::DimensionMismatch {
            expected: m * n,
            found: phi.nrows() * phi.ncols(),
        }
        .into());
    }
    let tol = &settings.tol;
    let intertwine = |ts: &AntilinearMap<T>, tt: &AntilinearMap<T>| {
        rel_diff(&(phi * ts.matrix()), &(tt.matrix() * phi.conjugate()))
    };
    let star = intertwine(source.star(), target.star());
    let sharp = intertwine(source.sharp(), target.sharp());
    let mut mult = T::zero();
    for i in 0..n {
        for j in 0..n {
            let lhs = phi * source.basis_product(i, j);
            let rhs = target.mul(&(phi * source.basis(i)), &(phi * source.basis(j)));
            mult = mult.max(rel_diff_vec(&lhs, &rhs));
        }
    }
    let opnorm = gram_opnorm_between(phi, source.gram(), target.gram())?;
    let iso = rel_diff(
        &(phi.adjoint() * target.gram().matrix() * phi),
        source.gram().matrix(),
    );
    let rk = rank(phi, tol.rank);
    let injective = rk == n;
    let surjective = rk == m;

    let mut r = rng(settings.seed ^ 0x3d);
    let probes = (0..n)
        .map(|i| source.basis(i))
        .chain((0..settings.samples).map(|_| random_vector(&mut r, n)));
    let mut over = T::zero();
    let mut gap = T::zero();
    for x in probes {
        let lhs = gram_opnorm(&target.left_mult(&(phi * &x)), target.gram())?;
        let rhs = source.sharp_norm(&x);
        let s = lhs.max(rhs).max(T::one());
        over = over.max((lhs - rhs).max(T::zero()) / s);
        gap = gap.max((lhs - rhs).abs() / s);
    }

    let eq = to_f64(tol.eq);
    let mut checks = vec![
        Check::bounded("hom.star", to_f64(star), eq),
        Check::bounded("hom.multiplicative", to_f64(mult), eq),
        Check::bounded("hom.sharp", to_f64(sharp), eq),
        Check::bounded(
            "hom.contractive",
            to_f64((opnorm - T::one()).max(T::zero())),
            to_f64(tol.ineq),
        ),
        Check::bounded("hom.norm-bound", to_f64(over), to_f64(tol.ineq)),
    ];
    if injective {
        checks.push(Check::bounded("hom.norm-equality", to_f64(gap), eq));
    }
    let homomorphism = checks[..3].iter().all(|c| c.passed);
    let kind = match (homomorphism, injective, surjective) {
        (false, _, _) => HomKind::NotHomomorphism,
        (true, true, true) => HomKind::Isomorphism,
        (true, true, false) => HomKind::Injective,
        (true, false, true) => HomKind::Surjective,
        (true, false, false) => HomKind::Homomorphism,
    };
    Ok(HomReport {
        kind,
        contractive: opnorm <= T::one() + tol.ineq,
        isometric: iso <= tol.eq,
        isometry_residual: to_f64(iso),
        opnorm: to_f64(opnorm),
        checks,
    })
}
