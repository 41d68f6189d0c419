//! Operator *-algebras on a Gram-normed coordinate space and their commutants.

use nalgebra::DMatrix;

use crate::linalg::{
    c, nullspace, orthonormal_span, projection_residual, unvectorize, vectorize, CMatrix, CVector,
    GramMatrix,
};
use crate::Real;

/// Linear span of operators closed under products and the `G`-adjoint.
#[derive(Debug, Clone)]
pub struct VNAlgebra<T: Real> {
    generators: Vec<CMatrix<T>>,
    basis: Vec<CMatrix<T>>,
    dim: usize,
}

impl<T: Real> VNAlgebra<T> {
    /// The *-algebra generated by `generators` acting on `Cⁿ` with inner
    /// product `G`. Basis elements are taken greedily from the generators
    /// first (in order), then from adjoints and products, so a generating
    /// set that already spans a *-algebra is kept verbatim.
    pub fn generated(generators: Vec<CMatrix<T>>, g: &GramMatrix<T>, tol_rank: T) -> Self {
        let n = g.dim();
        let mut span = SpanBuilder::new(n * n, tol_rank);
        let mut basis: Vec<CMatrix<T>> = Vec::new();
        let mut push = |m: CMatrix<T>, basis: &mut Vec<CMatrix<T>>| {
            if span.try_add(vectorize(&m)) {
                basis.push(m);
                true
            } else {
                false
            }
        };
        for m in &generators {
            push(m.clone(), &mut basis);
        }
        for m in &generators {
            push(g.adjoint(m), &mut basis);
        }
        // close under products until the span is stable
        let mut start = 0;
        loop {
            let len = basis.len();
            let mut grew = false;
            for i in 0..len {
                for j in 0..len {
                    if i < start && j < start {
                        continue;
                    }
                    let p = &basis[i] * &basis[j];
                    grew |= push(p, &mut basis);
                    let a = g.adjoint(&basis[i]);
                    grew |= push(a, &mut basis);
                }
            }
            if !grew {
                break;
            }
            start = len;
        }
        Self {
            generators,
            basis,
            dim: n,
        }
    }

    /// Wraps a basis already known to span a *-algebra.
    pub fn from_basis(basis: Vec<CMatrix<T>>, n: usize) -> Self {
        Self {
            generators: basis.clone(),
            basis,
            dim: n,
        }
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    pub fn basis(&self) -> &[CMatrix<T>] {
        &self.basis
    }

    /// Dimension of the operator space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the space the operators act on.
    pub fn space_dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn vectors(&self) -> Vec<CVector<T>> {
        self.basis.iter().map(vectorize).collect()
    }

    /// Orthonormal basis (Frobenius) of the span, as columns.
    pub fn orthonormal(&self, tol_rank: T) -> CMatrix<T> {
        orthonormal_span(&self.vectors(), self.dim * self.dim, tol_rank)
    }

    /// Relative distance of `x` from the span.
    pub fn membership_residual(&self, x: &CMatrix<T>, tol_rank: T) -> T {
        projection_residual(&[vectorize(x)], &self.orthonormal(tol_rank))
    }

    /// Largest defect of `basis_i basis_j` and `basis_i^{*G}` from the span.
    pub fn closure_residual(&self, g: &GramMatrix<T>, tol_rank: T) -> T {
        let q = self.orthonormal(tol_rank);
        let mut probes = Vec::new();
        for a in &self.basis {
            probes.push(vectorize(&g.adjoint(a)));
            for b in &self.basis {
                probes.push(vectorize(&(a * b)));
            }
        }
        projection_residual(&probes, &q)
    }
}

/// Incremental Gram–Schmidt with a relative acceptance threshold.
struct SpanBuilder<T: Real> {
    q: Vec<CVector<T>>,
    tol: T,
    len: usize,
}

impl<T: Real> SpanBuilder<T> {
    fn new(len: usize, tol: T) -> Self {
        Self {
            q: Vec::new(),
            tol,
            len,
        }
    }

    fn try_add(&mut self, v: CVector<T>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let nv = v.norm();
        if nv == T::zero() {
            return false;
        }
        let mut w = v;
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for q in &self.q {
                let coeff = q.dotc(&w);
                w.axpy(-coeff, q, c(T::one()));
            }
        }
        let nw = w.norm();
        // remainders below sqrt(tol_rank)·‖v‖ count as dependent
        if nw <= self.tol.sqrt() * nv {
            return false;
        }
        self.q.push(w / c(nw));
        true
    }
}

/// `{X : X A = A X and X A^{*G} = A^{*G} X for every generator A}`.
pub fn commutant<T: Real>(algebra: &VNAlgebra<T>, g: &GramMatrix<T>, tol_rank: T) -> VNAlgebra<T> {
    let n = g.dim();
    // the basis spans the generated algebra, so commuting with it and its
    // adjoints is commuting with every generator
    let ops: Vec<CMatrix<T>> = algebra
        .basis()
        .iter()
        .flat_map(|a| [a.clone(), g.adjoint(a)])
        .collect();
    if n == 0 {
        return VNAlgebra::from_basis(Vec::new(), 0);
    }
    let id = CMatrix::<T>::identity(n, n);
    // vec(XA - AX) = (Aᵀ ⊗ I - I ⊗ A) vec(X), column-major
    let mut system = DMatrix::zeros(n * n * ops.len().max(1), n * n);
    for (k, a) in ops.iter().enumerate() {
        let block = a.transpose().kronecker(&id) - id.kronecker(a);
        system
            .view_mut((k * n * n, 0), (n * n, n * n))
            .copy_from(&block);
    }
    let basis = nullspace(&system, tol_rank)
        .iter()
        .map(|v| unvectorize(v, n))
        .collect();
    VNAlgebra::from_basis(basis, n)
}

/// Mutual projection residual of two operator families; zero iff their spans
/// coincide.
pub fn span_distance<T: Real>(a: &[CMatrix<T>], b: &[CMatrix<T>], n: usize, tol_rank: T) -> T {
    let va: Vec<_> = a.iter().map(vectorize).collect();
    let vb: Vec<_> = b.iter().map(vectorize).collect();
    let qa = orthonormal_span(&va, n * n, tol_rank);
    let qb = orthonormal_span(&vb, n * n, tol_rank);
    projection_residual(&va, &qb).max(projection_residual(&vb, &qa))
}
