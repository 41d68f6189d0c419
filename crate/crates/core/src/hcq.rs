//! HCQ*-algebras: `L_x* = L_{x^#}` and `‖x‖ ≤ ‖L_x‖`, the strict CQ*-structure
//! they carry, and generators of standard examples.

use thiserror::Error;

use crate::algebra::{check_banach_conditions, AlgebraSpec, NormReport, SpecError};
use crate::linalg::{
    c, gram_opnorm, polar_antilinear, rank, rel_diff, vectorize, AntilinearMap, CMatrix, CVector,
    GramMatrix, LinalgError,
};
use crate::report::{all_pass, failures, Check};
use crate::sample::{random_vector, rng};
use crate::vn::VNAlgebra;
use crate::{lit, to_f64, Real, Settings, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HcqError {
    #[error("not an HCQ*-algebra: {0}")]
    NotHcq(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("dimension must be at least 1")]
    Empty,
    #[error("expected {expected} weights, found {found}")]
    Length { expected: usize, found: usize },
    #[error("weight {index} is {value}, must be positive and finite")]
    NonPositive { index: usize, value: f64 },
    #[error("rho sums to {sum}, must sum to 1")]
    NotNormalized { sum: f64 },
    #[error("weights sum to {sum}, must not exceed 1")]
    WeightsExceedOne { sum: f64 },
    #[error("twist is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("twist is not involutive at index {0}")]
    TwistNotInvolutive(usize),
    #[error("twist swaps {i} and {j} with different weights, star would not be isometric")]
    TwistNotWeightPreserving { i: usize, j: usize },
    #[error("omega is not cyclic: the orbit spans {rank} of {dim} dimensions")]
    NotCyclic { rank: usize, dim: usize },
    #[error("omega is not separating: {kernel} independent operators annihilate it")]
    NotSeparating { kernel: usize },
    #[error("generator {index} is not {dim}x{dim}")]
    GeneratorShape { index: usize, dim: usize },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HcqReport {
    pub is_hcq: bool,
    pub is_strict_cq: bool,
    /// Largest relative `‖L_x* − L_{x^#}‖` over the basis.
    pub sharp_adjoint_residual: f64,
    /// `min` over the basis of `‖L_x‖ − ‖x‖`.
    pub norm_domination_margin: f64,
    pub checks: Vec<Check>,
}

impl HcqReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Certifies `L_x* = L_{x^#}` on the basis and `‖x‖ ≤ ‖L_x‖` on the basis,
/// the unit and random samples.
pub fn check_hcq<T: Real>(spec: &AlgebraSpec<T>, settings: &Settings<T>) -> HcqReport {
    let n = spec.dim();
    let g = spec.gram();
    let mut adj = T::zero();
    let mut margin: Option<T> = None;
    for i in 0..n {
        let x = spec.basis(i);
        let l = spec.left_mult(&x);
        let ls = spec.left_mult(&spec.sharp().apply(&x));
        adj = adj.max(rel_diff(&g.adjoint(&l), &ls));
        let m = spectral(&l, g) - g.norm(&x);
        margin = Some(margin.map_or(m, |v: T| v.min(m)));
    }

    let mut r = rng(settings.seed ^ 0x4c);
    let probes = (0..n)
        .map(|i| spec.basis(i))
        .chain(spec.unit().cloned())
        .chain((0..settings.samples).map(|_| random_vector(&mut r, n)));
    let mut violation = T::zero();
    for x in probes {
        let nx = g.norm(&x);
        let nl = spectral(&spec.left_mult(&x), g);
        violation = violation.max((nx - nl).max(T::zero()) / nx.max(nl).max(T::one()));
    }

    let checks = vec![
        Check::bounded("hcq.sharp-adjoint", to_f64(adj), to_f64(settings.tol.eq)),
        Check::bounded(
            "hcq.norm-domination",
            to_f64(violation),
            to_f64(settings.tol.ineq),
        ),
    ];
    let is_hcq = all_pass(&checks);
    HcqReport {
        is_hcq,
        is_strict_cq: is_hcq && check_banach_conditions(spec, settings).passed(),
        sharp_adjoint_residual: to_f64(adj),
        norm_domination_margin: to_f64(margin.unwrap_or_else(T::zero)),
        checks,
    }
}

fn spectral<T: Real>(l: &CMatrix<T>, g: &GramMatrix<T>) -> T {
    gram_opnorm(l, g).unwrap_or_else(|_| T::zero())
}

/// The strict CQ*-structure `‖x‖_# = ‖L_x‖` of an HCQ*-algebra: conditions
/// (a.1)–(a.4) plus the operator C*-identity `‖L_x* L_x‖ = ‖L_x‖²`.
pub fn hcq_to_strict<T: Real>(
    spec: &AlgebraSpec<T>,
    settings: &Settings<T>,
) -> Result<NormReport, HcqError> {
    let hcq = check_hcq(spec, settings);
    if !hcq.is_hcq {
        return Err(HcqError::NotHcq(failures(&hcq.checks).join(", ")));
    }
    let mut report = check_banach_conditions(spec, settings);
    let g = spec.gram();
    let n = spec.dim();
    let mut r = rng(settings.seed ^ 0xc5);
    let mut res = T::zero();
    let probes = (0..n)
        .map(|i| spec.basis(i))
        .chain((0..settings.samples).map(|_| random_vector(&mut r, n)));
    for x in probes {
        let l = spec.left_mult(&x);
        let nl = gram_opnorm(&l, g)?;
        let nll = gram_opnorm(&(g.adjoint(&l) * &l), g)?;
        res = res.max((nll - nl * nl).abs() / (nl * nl).max(T::one()));
    }
    report.checks.push(Check::bounded(
        "strict.c*-identity",
        to_f64(res),
        to_f64(settings.tol.eq),
    ));
    Ok(report)
}

fn check_weights<T: Real>(w: &[T]) -> Result<T, GenError> {
    if w.is_empty() {
        return Err(GenError::Empty);
    }
    for (index, &value) in w.iter().enumerate() {
        if !(value > T::zero()) || !value.is_finite() {
            return Err(GenError::NonPositive {
                index,
                value: to_f64(value),
            });
        }
    }
    Ok(w.iter().fold(T::zero(), |a, &b| a + b))
}

/// Slack for rational inputs such as `1/3` that do not sum exactly.
fn sum_slack<T: Real>(k: usize) -> T {
    lit::<T>(1e-12) * lit::<T>(k as f64)
}

/// `M_n` with matrix units `e_ij` (index `i n + j`), `# = †`,
/// `(x|y) = tr(ρ y† x)` and `x* = ρ^{1/2} x† ρ^{-1/2}`, with unit `I`.
pub fn gen_matrix_state<T: Real>(n: usize, rho: &[T]) -> Result<AlgebraSpec<T>, GenError> {
    if n == 0 {
        return Err(GenError::Empty);
    }
    if rho.len() != n {
        return Err(GenError::Length {
            expected: n,
            found: rho.len(),
        });
    }
    let sum = check_weights(rho)?;
    if (sum - T::one()).abs() > sum_slack(n) {
        return Err(GenError::NotNormalized { sum: to_f64(sum) });
    }
    let d = n * n;
    let idx = |i: usize, j: usize| i * n + j;
    let mut products = vec![CVector::zeros(d); d * d];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                // e_ij e_jl = e_il
                products[idx(i, j) * d + idx(j, l)][idx(i, l)] = c(T::one());
            }
        }
    }
    let mut sharp = CMatrix::zeros(d, d);
    let mut star = CMatrix::zeros(d, d);
    let mut gram = CMatrix::zeros(d, d);
    let mut unit = CVector::zeros(d);
    for i in 0..n {
        unit[idx(i, i)] = c(T::one());
        for j in 0..n {
            sharp[(idx(j, i), idx(i, j))] = c(T::one());
            star[(idx(j, i), idx(i, j))] = c((rho[j] / rho[i]).sqrt());
            gram[(idx(i, j), idx(i, j))] = c(rho[j]);
        }
    }
    let gram = GramMatrix::new(gram, &Tolerances::default())?;
    Ok(AlgebraSpec::new(
        products,
        AntilinearMap::new(star)?,
        AntilinearMap::new(sharp)?,
        gram,
        Some(unit),
    )?)
}

/// Pointwise `C^k` with `(x|y) = Σ w_i x_i conj(y_i)`, `x^# = conj(x)` and
/// `x* = conj(x)∘twist`. The twist must be an involutive permutation that
/// preserves the weights.
pub fn gen_commutative<T: Real>(
    weights: &[T],
    twist: Option<&[usize]>,
) -> Result<AlgebraSpec<T>, GenError> {
    let k = weights.len();
    let sum = check_weights(weights)?;
    if sum > T::one() + sum_slack(k) {
        return Err(GenError::WeightsExceedOne { sum: to_f64(sum) });
    }
    let perm: Vec<usize> = match twist {
        None => (0..k).collect(),
        Some(t) => {
            let mut seen = vec![false; k];
            if t.len() != k
                || t.iter()
                    .any(|&j| j >= k || std::mem::replace(&mut seen[j], true))
            {
                return Err(GenError::NotPermutation(k));
            }
            t.to_vec()
        }
    };
    for i in 0..k {
        let j = perm[i];
        if perm[j] != i {
            return Err(GenError::TwistNotInvolutive(i));
        }
        let (a, b) = (weights[i], weights[j]);
        if (a - b).abs() > lit::<T>(1e-12) * a.max(b) {
            return Err(GenError::TwistNotWeightPreserving { i, j });
        }
    }
    let mut products = vec![CVector::zeros(k); k * k];
    for i in 0..k {
        products[i * k + i][i] = c(T::one());
    }
    let mut star = CMatrix::zeros(k, k);
    for (i, &j) in perm.iter().enumerate() {
        star[(j, i)] = c(T::one());
    }
    let gram = CMatrix::from_diagonal(&CVector::from_iterator(k, weights.iter().map(|&w| c(w))));
    Ok(AlgebraSpec::new(
        products,
        AntilinearMap::new(star)?,
        AntilinearMap::conjugation(k),
        GramMatrix::new(gram, &Tolerances::default())?,
        Some(CVector::from_element(k, c(T::one()))),
    )?)
}

/// The standard HCQ*-algebra `M·ω` of the von Neumann algebra `M` generated
/// by `generators` (and `I`) acting on `C^m` with its Euclidean inner
/// product. Coordinates are with respect to `X_k ω` for a basis `X_k` of
/// `M`; `#` is the operator adjoint and `*` the modular conjugation.
pub fn gen_from_cyclic_vector<T: Real>(
    generators: &[CMatrix<T>],
    omega: &CVector<T>,
    settings: &Settings<T>,
) -> Result<AlgebraSpec<T>, GenError> {
    let m = omega.len();
    if m == 0 {
        return Err(GenError::Empty);
    }
    if let Some(index) = generators.iter().position(|x| x.shape() != (m, m)) {
        return Err(GenError::GeneratorShape { index, dim: m });
    }
    let tol_rank = settings.tol.rank;
    let ambient = GramMatrix::identity(m);
    let mut gens = generators.to_vec();
    gens.push(CMatrix::identity(m, m));
    let algebra = VNAlgebra::generated(gens, &ambient, tol_rank);
    let basis = algebra.basis();
    let d = basis.len();

    let orbit: Vec<CVector<T>> = basis.iter().map(|x| x * omega).collect();
    let w = CMatrix::from_columns(&orbit);
    let r = rank(&w, tol_rank);
    if r < d {
        return Err(GenError::NotSeparating { kernel: d - r });
    }
    if r < m {
        return Err(GenError::NotCyclic { rank: r, dim: m });
    }

    // coordinates of an operator in `basis`
    let vbasis = CMatrix::from_columns(&algebra.vectors());
    let svd = vbasis.clone().svd(true, true);
    let eps = tol_rank * svd.singular_values.max();
    let coords = |x: &CMatrix<T>| -> Result<CVector<T>, GenError> {
        svd.solve(&vectorize(x), eps)
            .map_err(|_| GenError::Linalg(LinalgError::Singular { sigma_min: 0.0 }))
    };

    let mut products = Vec::with_capacity(d * d);
    for a in basis {
        for b in basis {
            products.push(coords(&(a * b))?);
        }
    }
    let mut sharp = CMatrix::zeros(d, d);
    for (k, x) in basis.iter().enumerate() {
        sharp.set_column(k, &coords(&x.adjoint())?);
    }
    let unit = coords(&CMatrix::identity(m, m))?;
    let gram = GramMatrix::new(w.adjoint() * &w, &settings.tol)?;
    let sharp = AntilinearMap::new(sharp)?;
    let polar = polar_antilinear(&sharp, &gram, &settings.tol)?;
    Ok(AlgebraSpec::new(
        products,
        polar.j,
        sharp,
        gram,
        Some(unit),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_spec;
    use crate::modular::{check_left_hilbert, modular_data, quasi_unit, standardness};
    use num_complex::Complex;

    fn settings() -> Settings<f64> {
        Settings::default()
    }

    fn cx(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn certify(spec: &AlgebraSpec<f64>) {
        let s = settings();
        let v = validate_spec(spec, &s);
        assert!(v.is_valid(), "{:?}", v.violations());
        assert!(all_pass(&check_left_hilbert(spec, &s)));
        let h = check_hcq(spec, &s);
        assert!(h.is_hcq && h.is_strict_cq, "{h:?}");
        assert!(hcq_to_strict(spec, &s).unwrap().passed());
    }

    #[test]
    fn generators_certify() {
        certify(&gen_matrix_state(1, &[1.0]).unwrap());
        certify(&gen_matrix_state(2, &[0.5, 0.5]).unwrap());
        certify(&gen_matrix_state(3, &[0.5, 0.3, 0.2]).unwrap());
        certify(&gen_commutative(&[0.5, 0.5], None).unwrap());
        certify(&gen_commutative(&[0.5, 0.5], Some(&[1, 0])).unwrap());
        certify(&gen_commutative(&[0.2, 0.3, 0.2], Some(&[2, 1, 0])).unwrap());
    }

    #[test]
    fn matrix_state_gram_is_state() {
        let spec = gen_matrix_state(2, &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        // (x|y) = tr(ρ y† x): ‖e_ij‖² = ρ_j
        let g = spec.gram().matrix();
        let diag: Vec<f64> = (0..4).map(|k| g[(k, k)].re).collect();
        assert_eq!(diag, vec![2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]);
        let u = spec.unit().unwrap();
        assert!((spec.gram().norm(u).powi(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sharp_adjoint_on_basis_triples() {
        let spec = gen_matrix_state(3, &[0.6, 0.3, 0.1]).unwrap();
        let g = spec.gram();
        for i in 0..9 {
            let xs = spec.sharp().apply(&spec.basis(i));
            for j in 0..9 {
                for k in 0..9 {
                    let z = spec.basis(k);
                    let lhs = g.inner(spec.basis_product(i, j), &z).unwrap();
                    let rhs = g.inner(&spec.basis(j), &spec.mul(&xs, &z)).unwrap();
                    assert!((lhs - rhs).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn identity_gram_fails_norm_domination() {
        let spec = gen_commutative(&[0.5, 0.5], None).unwrap();
        let spec = spec.with_gram(GramMatrix::identity(2));
        let h = check_hcq(&spec, &settings());
        assert!(!h.is_hcq);
        assert!(h.check("hcq.sharp-adjoint").unwrap().passed);
        assert!(!h.check("hcq.norm-domination").unwrap().passed);
        // at x = (1, 1): ‖x‖ = √2 against ‖L_x‖ = 1
        let x = CVector::from_element(2, cx(1.0));
        assert!((spec.gram().norm(&x) - 2f64.sqrt()).abs() < 1e-15);
        assert!((gram_opnorm(&spec.left_mult(&x), spec.gram()).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            hcq_to_strict(&spec, &settings()),
            Err(HcqError::NotHcq(_))
        ));
    }

    #[test]
    fn inflated_gram_is_rejected() {
        let spec = gen_matrix_state(2, &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let g = GramMatrix::new(spec.gram().matrix() * cx(100.0), &Default::default()).unwrap();
        let err = hcq_to_strict(&spec.with_gram(g), &settings()).unwrap_err();
        assert!(err.to_string().contains("hcq.norm-domination"));
    }

    #[test]
    fn generator_rejections() {
        assert_eq!(
            gen_matrix_state::<f64>(0, &[]).unwrap_err(),
            GenError::Empty
        );
        assert!(matches!(
            gen_matrix_state(2, &[0.5, 0.4]),
            Err(GenError::NotNormalized { .. })
        ));
        assert!(matches!(
            gen_matrix_state(2, &[1.5, -0.5]),
            Err(GenError::NonPositive { index: 1, .. })
        ));
        assert!(matches!(
            gen_commutative(&[0.75, 0.25], Some(&[1, 0])),
            Err(GenError::TwistNotWeightPreserving { .. })
        ));
        assert!(matches!(
            gen_commutative(&[0.3, 0.3, 0.3], Some(&[1, 2, 0])),
            Err(GenError::TwistNotInvolutive(0))
        ));
        assert!(matches!(
            gen_commutative(&[0.3, 0.3], Some(&[0, 0])),
            Err(GenError::NotPermutation(2))
        ));
        assert!(matches!(
            gen_commutative(&[0.75, 0.75], None),
            Err(GenError::WeightsExceedOne { .. })
        ));
    }

    #[test]
    fn rational_weights_are_accepted() {
        gen_matrix_state(3, &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        gen_commutative(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], None).unwrap();
    }

    fn diag(a: f64, b: f64) -> CMatrix<f64> {
        CMatrix::from_diagonal(&CVector::from_vec(vec![cx(a), cx(b)]))
    }

    #[test]
    fn cyclic_vector_diagonal() {
        let gens = [diag(1.0, 0.0), diag(0.0, 1.0)];
        let omega = CVector::from_element(2, cx(0.5f64.sqrt()));
        let spec = gen_from_cyclic_vector(&gens, &omega, &settings()).unwrap();
        certify(&spec);
        let md = modular_data(&spec, &settings()).unwrap();
        assert!(standardness(&spec, &md, &settings()).unwrap().standard);
        assert!(rel_diff(&md.delta, &CMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn cyclic_vector_not_separating() {
        let gens = [diag(1.0, 0.0), diag(0.0, 1.0)];
        let omega = CVector::from_vec(vec![cx(1.0), cx(0.0)]);
        assert_eq!(
            gen_from_cyclic_vector(&gens, &omega, &settings()).unwrap_err(),
            GenError::NotSeparating { kernel: 1 }
        );
    }

    #[test]
    fn cyclic_vector_not_cyclic() {
        // C·I on C² separates ω but does not span
        let omega = CVector::from_vec(vec![cx(1.0), cx(0.0)]);
        assert_eq!(
            gen_from_cyclic_vector(&[], &omega, &settings()).unwrap_err(),
            GenError::NotCyclic { rank: 1, dim: 2 }
        );
    }

    #[test]
    fn cyclic_vector_reproduces_matrix_state() {
        let rho = [2.0f64 / 3.0, 1.0 / 3.0];
        let ms = gen_matrix_state(2, &rho).unwrap();
        // left multiplications on the Hilbert–Schmidt space C⁴, ω = ρ^{1/2}
        let e = |i: usize, j: usize| {
            let mut m = CMatrix::<f64>::zeros(2, 2);
            m[(i, j)] = cx(1.0);
            m
        };
        let id = CMatrix::<f64>::identity(2, 2);
        let gens: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| id.kronecker(&e(i, j)))
            .collect();
        let mut omega = CVector::zeros(4);
        omega[0] = cx(rho[0].sqrt());
        omega[3] = cx(rho[1].sqrt());
        let spec = gen_from_cyclic_vector(&gens, &omega, &settings()).unwrap();
        certify(&spec);
        let s = settings();
        let a = modular_data(&spec, &s).unwrap();
        let b = modular_data(&ms, &s).unwrap();
        for (x, y) in a.spectrum().iter().zip(b.spectrum()) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!(standardness(&spec, &a, &s).unwrap().standard);
        let qu = quasi_unit(&spec, &s).unwrap();
        assert!((spec.gram().norm(&qu.u) - 1.0).abs() < 1e-9);
    }
}
