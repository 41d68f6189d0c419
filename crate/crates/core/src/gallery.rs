//! Named example algebras and forms, including three counterexamples.

use num_complex::Complex;

use crate::gns::FormSpec;
use crate::hcq::{gen_commutative, gen_from_cyclic_vector, gen_matrix_state};
use crate::linalg::{AntilinearMap, CMatrix, CVector, GramMatrix};
use crate::{AlgebraSpec64, FormSpec64, Settings64, Tolerances};

#[derive(Debug, Clone, Copy)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Checks that fail on this algebra; empty for the certified examples.
    pub expected_failures: &'static [&'static str],
    pub build: fn() -> AlgebraSpec64,
}

impl GalleryEntry {
    pub fn is_counterexample(&self) -> bool {
        !self.expected_failures.is_empty()
    }

    pub fn spec(&self) -> AlgebraSpec64 {
        (self.build)()
    }
}

fn cx(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

pub fn c1() -> AlgebraSpec64 {
    gen_matrix_state(1, &[1.0]).expect("valid parameters")
}

pub fn tracial_m2() -> AlgebraSpec64 {
    gen_matrix_state(2, &[0.5, 0.5]).expect("valid parameters")
}

pub fn matrix_state_2() -> AlgebraSpec64 {
    gen_matrix_state(2, &[2.0 / 3.0, 1.0 / 3.0]).expect("valid parameters")
}

pub fn tracial_m3() -> AlgebraSpec64 {
    gen_matrix_state(3, &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).expect("valid parameters")
}

pub fn matrix_state_3() -> AlgebraSpec64 {
    gen_matrix_state(3, &[0.5, 0.3, 0.2]).expect("valid parameters")
}

pub fn commutative_c2() -> AlgebraSpec64 {
    gen_commutative(&[0.5, 0.5], None).expect("valid parameters")
}

pub fn swap_c2() -> AlgebraSpec64 {
    gen_commutative(&[0.5, 0.5], Some(&[1, 0])).expect("valid parameters")
}

pub fn twisted_c3() -> AlgebraSpec64 {
    gen_commutative(&[0.25, 0.5, 0.25], Some(&[2, 1, 0])).expect("valid parameters")
}

/// Diagonal 2×2 matrices with cyclic separating vector `(1,1)/√2`.
pub fn cyclic_diagonal() -> AlgebraSpec64 {
    let d = |a: f64, b: f64| CMatrix::from_diagonal(&CVector::from_vec(vec![cx(a), cx(b)]));
    let omega = CVector::from_element(2, cx(0.5f64.sqrt()));
    gen_from_cyclic_vector(&[d(1.0, 0.0), d(0.0, 1.0)], &omega, &Settings64::default())
        .expect("valid parameters")
}

/// `matrix_state_2` with the Gram matrix scaled by 100, so `‖x‖` grows by
/// 10 while `‖L_x‖` does not.
pub fn gram_inflated() -> AlgebraSpec64 {
    let spec = matrix_state_2();
    let g = GramMatrix::new(spec.gram().matrix() * cx(100.0), &Tolerances::default())
        .expect("scaled Gram matrix is positive definite");
    spec.with_gram(g)
}

/// Pointwise `C²` with the unweighted inner product: `‖(1,1)‖ = √2` but
/// `‖L_(1,1)‖ = 1`.
pub fn c2_identity_gram() -> AlgebraSpec64 {
    commutative_c2().with_gram(GramMatrix::identity(2))
}

/// `C²` with the zero product, which has no unit and no quasi-unit.
pub fn zero_product() -> AlgebraSpec64 {
    AlgebraSpec64::new(
        vec![CVector::zeros(2); 4],
        AntilinearMap::conjugation(2),
        AntilinearMap::conjugation(2),
        GramMatrix::new(CMatrix::identity(2, 2) * cx(0.5), &Tolerances::default())
            .expect("positive definite"),
        None,
    )
    .expect("shapes agree")
}

/// In a strict CQ*-algebra `‖x‖_# = ‖L_x‖`, so (a.2) and norm domination
/// are the same inequality and fail together.
pub const GALLERY: &[GalleryEntry] = &[
    GalleryEntry {
        name: "c1",
        description: "the algebra C",
        expected_failures: &[],
        build: c1,
    },
    GalleryEntry {
        name: "tracial_m2",
        description: "M2 with the normalized trace",
        expected_failures: &[],
        build: tracial_m2,
    },
    GalleryEntry {
        name: "matrix_state_2",
        description: "M2 with the state rho = diag(2/3, 1/3)",
        expected_failures: &[],
        build: matrix_state_2,
    },
    GalleryEntry {
        name: "tracial_m3",
        description: "M3 with the normalized trace",
        expected_failures: &[],
        build: tracial_m3,
    },
    GalleryEntry {
        name: "matrix_state_3",
        description: "M3 with the state rho = diag(0.5, 0.3, 0.2)",
        expected_failures: &[],
        build: matrix_state_3,
    },
    GalleryEntry {
        name: "commutative_c2",
        description: "pointwise C2 with weights (1/2, 1/2)",
        expected_failures: &[],
        build: commutative_c2,
    },
    GalleryEntry {
        name: "swap_c2",
        description: "pointwise C2 with weights (1/2, 1/2) and star twisted by the swap",
        expected_failures: &[],
        build: swap_c2,
    },
    GalleryEntry {
        name: "twisted_c3",
        description: "pointwise C3 with weights (1/4, 1/2, 1/4) and star twisted by (0 2)",
        expected_failures: &[],
        build: twisted_c3,
    },
    GalleryEntry {
        name: "cyclic_diagonal",
        description: "diagonal 2x2 matrices acting on the cyclic vector (1,1)/sqrt 2",
        expected_failures: &[],
        build: cyclic_diagonal,
    },
    GalleryEntry {
        name: "gram_inflated",
        description: "matrix_state_2 with the Gram matrix scaled by 100",
        expected_failures: &["banach.(a.2)", "hcq.norm-domination"],
        build: gram_inflated,
    },
    GalleryEntry {
        name: "c2_identity_gram",
        description: "pointwise C2 with the identity Gram matrix",
        expected_failures: &["banach.(a.2)", "hcq.norm-domination"],
        build: c2_identity_gram,
    },
    GalleryEntry {
        name: "zero_product",
        description: "C2 with the zero product",
        expected_failures: &["banach.(a.2)", "left-hilbert.(iii)", "hcq.norm-domination"],
        build: zero_product,
    },
];

pub fn entry(name: &str) -> Option<&'static GalleryEntry> {
    GALLERY.iter().find(|e| e.name == name)
}

/// `φ(a,b) = a₁ conj(b₁)/2` on `commutative_c2`.
pub fn rank1_c2() -> FormSpec64 {
    let mut f = CMatrix::zeros(2, 2);
    f[(0, 0)] = cx(0.5);
    FormSpec::new(f, &Tolerances::default()).expect("positive semidefinite")
}

#[derive(Debug, Clone, Copy)]
pub struct FormEntry {
    pub name: &'static str,
    pub algebra: &'static str,
    pub build: fn() -> FormSpec64,
}

pub const FORMS: &[FormEntry] = &[FormEntry {
    name: "rank1_c2",
    algebra: "commutative_c2",
    build: rank1_c2,
}];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = GALLERY.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), GALLERY.len());
        assert!(FORMS.iter().all(|f| entry(f.algebra).is_some()));
    }

    #[test]
    fn every_entry_builds() {
        for e in GALLERY {
            assert!(e.spec().dim() > 0, "{}", e.name);
        }
    }
}
