//! Left Hilbert algebra structure and Tomita–Takesaki modular data.
//!
//! With `S = #` the modular data are the polar factors `S = J_A Δ^{1/2}`.
//! At finite dimension every linear map is bounded and every involution is
//! closed, so axioms (i) and (iv) of a left Hilbert algebra hold
//! automatically and the maximal Tomita algebra is the whole space.

use num_complex::Complex;
use thiserror::Error;

use crate::algebra::AlgebraSpec;
use crate::linalg::{
    c, hermitian_eigen, modulus, polar_antilinear, rank, rel_diff, rel_diff_vec, AntilinearMap,
    CMatrix, CVector, LinalgError, PositiveOperator,
};
use crate::report::{all_pass, failures, Check};
use crate::sample::{random_vector, rng};
use crate::vn::{commutant, span_distance, VNAlgebra};
use crate::{lit, to_f64, Real, Settings};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModularError {
    #[error("left Hilbert algebra axioms fail: {0}")]
    NotLeftHilbert(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(
        "standardness criteria disagree: J = J_A is {j_equal} but the form (x#|x*) is {psd} \
         (distance {distance:e}, min eigenvalue {min_eigenvalue:e})"
    )]
    CriteriaDisagree {
        j_equal: bool,
        psd: bool,
        distance: f64,
        min_eigenvalue: f64,
    },
    #[error("subalgebra dimension {sub} exceeds algebra dimension {dim}")]
    EmbeddingTooLarge { sub: usize, dim: usize },
    #[error("embedding matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    EmbeddingShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

pub const AUTOMATIC_CONTINUITY: &str =
    "finite dimension: every left multiplication is a bounded operator";
pub const AUTOMATIC_CLOSABILITY: &str =
    "finite dimension: every linear or antilinear map is closed";
pub const MAXIMAL_TOMITA_NOTE: &str =
    "finite dimension: the maximal Tomita algebra is the whole space";

/// Certifies the left Hilbert algebra axioms with involution `#`:
/// (ii) `(xy|z) = (y|x^#z)` on basis triples and (iii) `A²` spans.
pub fn check_left_hilbert<T: Real>(spec: &AlgebraSpec<T>, settings: &Settings<T>) -> Vec<Check> {
    let n = spec.dim();
    let g = spec.gram();
    let mut adj = T::zero();
    for i in 0..n {
        let xs = spec.sharp().apply(&spec.basis(i));
        let l_xs = spec.left_mult(&xs);
        for j in 0..n {
            let xy = spec.basis_product(i, j);
            for k in 0..n {
                let z = spec.basis(k);
                let lhs = (z.adjoint() * g.matrix() * xy)[(0, 0)];
                let rhs = ((&l_xs * &z).adjoint() * g.matrix() * spec.basis(j))[(0, 0)];
                let scale = modulus(lhs).max(modulus(rhs)).max(T::one());
                adj = adj.max(modulus(lhs - rhs) / scale);
            }
        }
    }
    let products = if n == 0 {
        0
    } else {
        let cols: Vec<CVector<T>> = (0..n * n)
            .map(|k| spec.basis_product(k / n, k % n).clone())
            .collect();
        rank(&CMatrix::from_columns(&cols), settings.tol.rank)
    };
    vec![
        Check::automatic("left-hilbert.(i)", AUTOMATIC_CONTINUITY),
        Check::bounded("left-hilbert.(ii)", to_f64(adj), to_f64(settings.tol.eq)),
        Check {
            name: "left-hilbert.(iii)".into(),
            passed: products == n,
            residual: (n - products) as f64,
            tolerance: 0.0,
            note: Some(format!("span of products has dimension {products} of {n}")),
        },
        Check::automatic("left-hilbert.(iv)", AUTOMATIC_CLOSABILITY),
    ]
}

/// `S`, `J`, `Δ` of the left Hilbert algebra, with certification residuals.
#[derive(Debug, Clone)]
pub struct ModularData<T: Real> {
    pub s: AntilinearMap<T>,
    pub s_adjoint: AntilinearMap<T>,
    pub j: AntilinearMap<T>,
    pub delta: CMatrix<T>,
    pub modulus: PositiveOperator<T>,
    pub residuals: Vec<Check>,
}

impl<T: Real> ModularData<T> {
    /// Spectrum of `Δ`, ascending.
    pub fn spectrum(&self) -> &[T] {
        self.modulus.eigenvalues()
    }

    pub fn delta_power(&self, alpha: Complex<T>) -> CMatrix<T> {
        self.modulus.power(alpha)
    }

    pub fn certified(&self) -> bool {
        all_pass(&self.residuals)
    }
}

pub fn modular_data<T: Real>(
    spec: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> Result<ModularData<T>, ModularError> {
    let lh = check_left_hilbert(spec, settings);
    if !all_pass(&lh) {
        return Err(ModularError::NotLeftHilbert(failures(&lh).join(", ")));
    }
    let g = spec.gram();
    let tol = &settings.tol;
    let s = spec.sharp().clone();
    let polar = polar_antilinear(&s, g, tol)?;
    let s_adjoint = s.adjoint(g)?;
    let j = polar.j;
    let modulus = polar.modulus;
    let delta = polar.delta;
    let half = modulus.real_power(lit(0.5));
    let neg_half = modulus.real_power(lit(-0.5));
    let inv = modulus.real_power(-T::one());
    let n = spec.dim();
    let eq = to_f64(tol.eq);

    let r = |name: &str, v: T| Check::bounded(name, to_f64(v), eq);
    let residuals = vec![
        r("modular.S=JD^1/2", j.after_linear(&half).distance(&s)),
        r("modular.S=D^-1/2J", j.before_linear(&neg_half).distance(&s)),
        r(
            "modular.S*=JD^-1/2",
            j.after_linear(&neg_half).distance(&s_adjoint),
        ),
        r(
            "modular.S*=D^1/2J",
            j.before_linear(&half).distance(&s_adjoint),
        ),
        r("modular.J^2=I", j.involution_residual()),
        r(
            "modular.JDJ=D^-1",
            rel_diff(&j.conjugate_linear(&delta), &inv),
        ),
        r("modular.J-isometric", j.isometry_residual(g)?),
        r("modular.D-self-adjoint", g.self_adjoint_residual(&delta)),
        Check::flag(
            "modular.D-positive",
            n == 0 || modulus.eigenvalues()[0] > T::zero(),
        ),
    ];
    Ok(ModularData {
        s,
        s_adjoint,
        j,
        delta,
        modulus,
        residuals,
    })
}

/// The algebras `L = span L_A`, `L′` and `L″` of an algebra spec.
pub fn left_algebras<T: Real>(
    spec: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> (VNAlgebra<T>, VNAlgebra<T>, VNAlgebra<T>) {
    let g = spec.gram();
    let l = VNAlgebra::generated(spec.basis_left_mults(), g, settings.tol.rank);
    let l1 = commutant(&l, g, settings.tol.rank);
    let l2 = commutant(&l1, g, settings.tol.rank);
    (l, l1, l2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomitaReport {
    pub dim_l: usize,
    pub dim_commutant: usize,
    pub dim_bicommutant: usize,
    /// Mutual projection residual of `J L″ J` against `L′`.
    pub conjugation_residual: f64,
    /// `(t, residual)` of `Δ^{it} L″ Δ^{-it} ⊂ L″`.
    pub flow_residuals: Vec<(f64, f64)>,
    pub checks: Vec<Check>,
}

impl TomitaReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }
}

/// Verifies `J L″ J = L′` and `Δ^{it} L″ Δ^{-it} = L″` for each `t`.
pub fn tomita_check<T: Real>(
    spec: &AlgebraSpec<T>,
    md: &ModularData<T>,
    t_samples: &[T],
    settings: &Settings<T>,
) -> TomitaReport {
    let n = spec.dim();
    let tol_rank = settings.tol.rank;
    let (l, l1, l2) = left_algebras(spec, settings);
    // J X J = M_J conj(X) conj(M_J)
    let conjugated: Vec<CMatrix<T>> = l2
        .basis()
        .iter()
        .map(|x| md.j.conjugate_linear(x))
        .collect();
    let conj_res = span_distance(&conjugated, l1.basis(), n, tol_rank);
    let q2 = l2.orthonormal(tol_rank);
    let flow_residuals: Vec<(f64, f64)> = t_samples
        .iter()
        .map(|&t| {
            let u = md.delta_power(Complex::new(T::zero(), t));
            let u_inv = md.delta_power(Complex::new(T::zero(), -t));
            let moved: Vec<CVector<T>> = l2
                .basis()
                .iter()
                .map(|x| crate::linalg::vectorize(&(&u * x * &u_inv)))
                .collect();
            (
                to_f64(t),
                to_f64(crate::linalg::projection_residual(&moved, &q2)),
            )
        })
        .collect();
    let eq = to_f64(settings.tol.eq);
    let mut checks = vec![
        Check::bounded("tomita.JL''J=L'", to_f64(conj_res), eq),
        Check::flag("tomita.dim", l1.dim() == l2.dim()),
    ];
    for &(t, res) in &flow_residuals {
        checks.push(Check::bounded(format!("tomita.flow(t={t})"), res, eq));
    }
    TomitaReport {
        dim_l: l.dim(),
        dim_commutant: l1.dim(),
        dim_bicommutant: l2.dim(),
        conjugation_residual: to_f64(conj_res),
        flow_residuals,
        checks,
    }
}

/// Verdict of the two equivalent standardness criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardness<T: Real> {
    pub standard: bool,
    /// Relative distance between `*` and `J_A`.
    pub j_distance: T,
    /// Smallest eigenvalue of the Hermitian part of the coefficient matrix
    /// of `x ↦ (x^#|x*)`.
    pub form_min_eigenvalue: T,
    /// Anti-Hermitian defect of that matrix; non-zero means the form takes
    /// non-real values.
    pub form_hermitian_residual: T,
    /// `x` with `(x^#|x*)` not `≥ 0`, scaled to max-modulus one.
    pub witness: Option<(CVector<T>, Complex<T>)>,
}

/// Coefficient matrix `Q` with `(x^#|x*) = conj(x)^H Q conj(x)`.
pub fn standardness_form<T: Real>(spec: &AlgebraSpec<T>) -> CMatrix<T> {
    spec.star().matrix().adjoint() * spec.gram().matrix() * spec.sharp().matrix()
}

/// Decides standardness by `* = J_A` and by positivity of `(x^#|x*)`;
/// disagreement is an internal-consistency error.
pub fn standardness<T: Real>(
    spec: &AlgebraSpec<T>,
    md: &ModularData<T>,
    settings: &Settings<T>,
) -> Result<Standardness<T>, ModularError> {
    let tol = &settings.tol;
    let j_distance = spec.star().distance(&md.j);
    let j_equal = j_distance <= tol.eq;

    let q = standardness_form(spec);
    let n = spec.dim();
    let scale = q.norm().max(T::one());
    let anti = (&q - q.adjoint()) * c(lit::<T>(0.5));
    let herm_res = anti.norm() / scale;
    let (values, vectors) = hermitian_eigen(&q);
    let min_eig = values.first().copied().unwrap_or_else(T::zero);
    let psd = herm_res <= tol.eq && min_eig >= -tol.eq * scale;

    if j_equal != psd {
        return Err(ModularError::CriteriaDisagree {
            j_equal,
            psd,
            distance: to_f64(j_distance),
            min_eigenvalue: to_f64(min_eig),
        });
    }
    let witness = if psd || n == 0 {
        None
    } else {
        let y = if min_eig < -tol.eq * scale {
            vectors.column(0).into_owned()
        } else {
            // non-real values: the eigenvector of i(Q - Q^H)/2 of largest modulus
            let k = anti * Complex::new(T::zero(), T::one());
            let (kv, kvec) = hermitian_eigen(&k);
            let idx = if kv[0].abs() > kv[n - 1].abs() {
                0
            } else {
                n - 1
            };
            kvec.column(idx).into_owned()
        };
        let x = canonical_witness(&y.conjugate());
        let value = spec
            .gram()
            .inner(&spec.sharp().apply(&x), &spec.star().apply(&x))?;
        Some((x, value))
    };
    Ok(Standardness {
        standard: j_equal,
        j_distance,
        form_min_eigenvalue: min_eig,
        form_hermitian_residual: herm_res,
        witness,
    })
}

/// Rescales so the first entry of maximal modulus equals one.
fn canonical_witness<T: Real>(v: &CVector<T>) -> CVector<T> {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        // strict comparison with slack keeps the first among near-equal maxima
        if modulus(*z) > modulus(v[best]) * (T::one() + lit(1e-9)) {
            best = i;
        }
    }
    let pivot = v[best];
    if modulus(pivot) == T::zero() {
        return v.clone();
    }
    v.map(|z| z / pivot)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemarkProbe {
    pub r_commutant_equals_l_bicommutant: bool,
    pub span_residual: f64,
    pub j_commutes_with_ja: bool,
    pub commutator_residual: f64,
    pub j_equals_ja: bool,
    pub j_distance: f64,
}

/// Exploratory: `R′ = L″`, `J J_A = J_A J` and `J = J_A`, with `J = *`.
pub fn remark_probe<T: Real>(
    spec: &AlgebraSpec<T>,
    md: &ModularData<T>,
    settings: &Settings<T>,
) -> RemarkProbe {
    let g = spec.gram();
    let tol = &settings.tol;
    let n = spec.dim();
    let r = VNAlgebra::generated(spec.basis_right_mults(), g, tol.rank);
    let r1 = commutant(&r, g, tol.rank);
    let (_, _, l2) = left_algebras(spec, settings);
    let span_res = if r1.dim() == l2.dim() {
        span_distance(r1.basis(), l2.basis(), n, tol.rank)
    } else {
        T::one()
    };
    let star = spec.star();
    let comm = rel_diff(&star.compose(&md.j), &md.j.compose(star));
    let dist = star.distance(&md.j);
    RemarkProbe {
        r_commutant_equals_l_bicommutant: r1.dim() == l2.dim() && span_res <= tol.eq,
        span_residual: to_f64(span_res),
        j_commutes_with_ja: comm <= tol.eq,
        commutator_residual: to_f64(comm),
        j_equals_ja: dist <= tol.eq,
        j_distance: to_f64(dist),
    }
}

/// `u` with `ux = xu = x`, plus residuals of the defining equations and of
/// `S u = u`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiUnit<T: Real> {
    pub u: CVector<T>,
    pub left_residual: T,
    pub right_residual: T,
    pub sharp_residual: T,
}

impl<T: Real> QuasiUnit<T> {
    pub fn sharp_fixed(&self, tol: T) -> bool {
        self.sharp_residual <= tol
    }
}

/// Solves `b_i u = b_i` and `u b_i = b_i` for all basis elements in the
/// least-squares sense; returns `None` when the residual exceeds `tol_eq`.
pub fn quasi_unit<T: Real>(spec: &AlgebraSpec<T>, settings: &Settings<T>) -> Option<QuasiUnit<T>> {
    let n = spec.dim();
    if n == 0 {
        return Some(QuasiUnit {
            u: CVector::zeros(0),
            left_residual: T::zero(),
            right_residual: T::zero(),
            sharp_residual: T::zero(),
        });
    }
    let ls = spec.basis_left_mults();
    let rs = spec.basis_right_mults();
    let mut a = CMatrix::zeros(2 * n * n, n);
    let mut b = CVector::zeros(2 * n * n);
    for i in 0..n {
        a.view_mut((i * n, 0), (n, n)).copy_from(&ls[i]);
        a.view_mut((n * n + i * n, 0), (n, n)).copy_from(&rs[i]);
        b[i * n + i] = c(T::one());
        b[n * n + i * n + i] = c(T::one());
    }
    let svd = a.svd(true, true);
    let u = svd
        .solve(&b, settings.tol.rank * svd.singular_values.max())
        .ok()?;
    let (left, right) = (0..n).fold((T::zero(), T::zero()), |(l, r), i| {
        let x = spec.basis(i);
        (
            l.max(rel_diff_vec(&(&ls[i] * &u), &x)),
            r.max(rel_diff_vec(&(&rs[i] * &u), &x)),
        )
    });
    if left > settings.tol.eq || right > settings.tol.eq {
        return None;
    }
    let sharp_residual = rel_diff_vec(&spec.sharp().apply(&u), &u);
    Some(QuasiUnit {
        u,
        left_residual: left,
        right_residual: right,
        sharp_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowEntry {
    pub alpha: (f64, f64),
    /// `(Δ^α x)^# = Δ^{-conj α} x^#` over the basis.
    pub sharp_residual: f64,
    /// `(Δ^{it} a)* = Δ^{it} a*`, purely imaginary `α` only.
    pub star_residual: Option<f64>,
    /// `Δ^{it}(ax) = (Δ^{it} a)(Δ^{it} x)`, purely imaginary `α` only.
    pub left_residual: Option<f64>,
    /// `Δ^{it}(xa) = (Δ^{it} x)(Δ^{it} a)`, purely imaginary `α` only.
    pub right_residual: Option<f64>,
}

impl FlowEntry {
    pub fn max_residual(&self) -> f64 {
        [
            Some(self.sharp_residual),
            self.star_residual,
            self.left_residual,
            self.right_residual,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub entries: Vec<FlowEntry>,
    pub note: &'static str,
}

/// Modular flow identities for each `α`.
pub fn tomita_flow<T: Real>(
    spec: &AlgebraSpec<T>,
    md: &ModularData<T>,
    alphas: &[Complex<T>],
    settings: &Settings<T>,
) -> FlowReport {
    let n = spec.dim();
    let sharp = spec.sharp();
    let star = spec.star();
    let mut r = rng(settings.seed ^ 0xf1);
    let pairs: Vec<(CVector<T>, CVector<T>)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (spec.basis(i), spec.basis(j)))
        .chain((0..settings.samples).map(|_| (random_vector(&mut r, n), random_vector(&mut r, n))))
        .collect();

    let entries = alphas
        .iter()
        .map(|&alpha| {
            let p = md.delta_power(alpha);
            let q = md.delta_power(-alpha.conj());
            let sharp_res = rel_diff(
                &sharp.after_linear(&p).matrix().clone(),
                sharp.before_linear(&q).matrix(),
            );
            let imaginary = alpha.re.abs() <= settings.tol.eq * modulus(alpha).max(T::one());
            let (star_res, left_res, right_res) = if imaginary {
                let star_res = rel_diff(
                    star.after_linear(&p).matrix(),
                    star.before_linear(&p).matrix(),
                );
                let mut left = T::zero();
                let mut right = T::zero();
                for (a, x) in &pairs {
                    let pa = &p * a;
                    let px = &p * x;
                    left = left.max(rel_diff_vec(&(&p * spec.mul(a, x)), &spec.mul(&pa, &px)));
                    right = right.max(rel_diff_vec(&(&p * spec.mul(x, a)), &spec.mul(&px, &pa)));
                }
                (
                    Some(to_f64(star_res)),
                    Some(to_f64(left)),
                    Some(to_f64(right)),
                )
            } else {
                (None, None, None)
            };
            FlowEntry {
                alpha: (to_f64(alpha.re), to_f64(alpha.im)),
                sharp_residual: to_f64(sharp_res),
                star_residual: star_res,
                left_residual: left_res,
                right_residual: right_res,
            }
        })
        .collect();
    FlowReport {
        entries,
        note: MAXIMAL_TOMITA_NOTE,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub injective: bool,
    pub multiplicative_residual: f64,
    pub star_residual: f64,
    pub sharp_residual: f64,
    pub isometry_residual: f64,
    /// `S_A E = E S_B` on the image.
    pub s_compatibility_residual: f64,
    pub subalgebra_dim: usize,
    pub algebra_dim: usize,
    pub is_star_subalgebra: bool,
    pub s_compatible: bool,
    /// Surjective embedding: at finite dimension "dense" means "everything".
    pub dense: bool,
    pub is_extension: bool,
}

/// Checks that `embed` realizes `B` as a *-subalgebra of `A` with
/// `S_A = S_B` on the image.
pub fn extension_check<T: Real>(
    a: &AlgebraSpec<T>,
    b: &AlgebraSpec<T>,
    embed: &CMatrix<T>,
    settings: &Settings<T>,
) -> Result<ExtensionReport, ModularError> {
    let (na, nb) = (a.dim(), b.dim());
    if nb > na {
        return Err(ModularError::EmbeddingTooLarge { sub: nb, dim: na });
    }
    if embed.shape() != (na, nb) {
        return Err(ModularError::EmbeddingShape {
            rows: embed.nrows(),
            cols: embed.ncols(),
            expected_rows: na,
            expected_cols: nb,
        });
    }
    let tol = &settings.tol;
    let injective = rank(embed, tol.rank) == nb;
    let mut mult = T::zero();
    for i in 0..nb {
        for j in 0..nb {
            let lhs = embed * b.basis_product(i, j);
            let rhs = a.mul(&embed.column(i).into_owned(), &embed.column(j).into_owned());
            mult = mult.max(rel_diff_vec(&lhs, &rhs));
        }
    }
    // E ∘ T_B has matrix E M_B, T_A ∘ E has matrix M_A conj(E)
    let intertwine = |ta: &AntilinearMap<T>, tb: &AntilinearMap<T>| {
        rel_diff(&(embed * tb.matrix()), &(ta.matrix() * embed.conjugate()))
    };
    let star_res = intertwine(a.star(), b.star());
    let sharp_res = intertwine(a.sharp(), b.sharp());
    let iso = rel_diff(
        &(embed.adjoint() * a.gram().matrix() * embed),
        b.gram().matrix(),
    );
    let is_star_subalgebra = injective && mult <= tol.eq && star_res <= tol.eq && iso <= tol.eq;
    let s_compatible = sharp_res <= tol.eq;
    let dense = injective && nb == na;
    Ok(ExtensionReport {
        injective,
        multiplicative_residual: to_f64(mult),
        star_residual: to_f64(star_res),
        sharp_residual: to_f64(sharp_res),
        isometry_residual: to_f64(iso),
        s_compatibility_residual: to_f64(sharp_res),
        subalgebra_dim: nb,
        algebra_dim: na,
        is_star_subalgebra,
        s_compatible,
        dense,
        is_extension: is_star_subalgebra && s_compatible && dense,
    })
}
