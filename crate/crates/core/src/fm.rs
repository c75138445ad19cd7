//! What the twisted Fourier–Mukai transform `X^[d] ⇢ M_{M,α}(0, Ĥ, k)` pins down
//! on lattices, replayed numerically for the degree-`(2d−2)m²` scenario.
//!
//! The transform itself is not modelled. It sends `v` to the point class and
//! identifies `v^⊥/v` with `H²(M, Z)`, so `Ĥ` is the image of `w = (1, 0, 1−d)`
//! and everything below is computed in the algebraic Mukai lattice of `X`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::hilbert;
use crate::lattice::{self, LatticeVector};
use crate::mukai::{self, K3Model, MukaiVector};

/// A statement the report relies on but does not recompute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportedFact {
    pub claim: &'static str,
    pub basis: &'static str,
}

pub const SIGN_OF_HHAT: ImportedFact = ImportedFact {
    claim: "the divisor class of C_xi is +Hhat (sign plus)",
    basis: "vanishing of h0(P_t ⊗ I_xi) for generic xi; sheaf cohomology, not lattice data",
};

pub const REGULARITY: ImportedFact = ImportedFact {
    claim: "for generic X the map V -> |Hhat| is a regular Lagrangian fibration",
    basis: "stability of the twisted sheaves and Matsushita's structure theorem",
};

pub const K_UNDETERMINED: &str = "undetermined at lattice level";

/// Basis of `v^⊥` in the algebraic Mukai lattice of the degree-`(2d−2)m²` model.
/// It spans the same lattice as `{v, (1, 0, 1−d)}`.
pub fn compute_v_perp(d: u64, m: u64) -> Result<Vec<MukaiVector>> {
    mukai::check_scenario_range(d, m)?;
    let model = K3Model::of_scenario(d, m)?;
    let v = mukai::scenario_vector(&model, d, m);
    let w = mukai::ideal_sheaf_vector(&model, d);
    let lv = v.to_lattice_vector(&model)?;
    let perp = lattice::orthogonal_complement(model.mukai_lattice(), std::slice::from_ref(&lv))?;
    assert!(lattice::same_span(&perp, &[lv, w.to_lattice_vector(&model)?]));
    perp.iter().map(|x| MukaiVector::from_lattice_vector(&model, x)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CXiClass {
    pub generator_label: &'static str,
    pub hhat_square: BigInt,
    pub sign: ImportedFact,
}

/// Class of the curve `C_ξ ⊂ M`: the generator `+Ĥ` of `Pic M`, with `Ĥ²`
/// computed as the square of `(1, 0, 1−d)` in `v^⊥/v`.
pub fn c_xi_class(d: u64, m: u64) -> Result<CXiClass> {
    mukai::check_scenario_range(d, m)?;
    let model = K3Model::of_scenario(d, m)?;
    let v = mukai::scenario_vector(&model, d, m).to_lattice_vector(&model)?;
    let w = mukai::ideal_sheaf_vector(&model, d).to_lattice_vector(&model)?;
    Ok(CXiClass {
        generator_label: "+Hhat",
        hhat_square: lattice::quotient_square(&v, &w)?,
        sign: SIGN_OF_HHAT,
    })
}

#[derive(Debug, Clone)]
pub struct FMNumericReport {
    pub d: u64,
    pub m: u64,
    pub n: BigInt,
    pub model: K3Model,
    pub v: MukaiVector,
    pub w: MukaiVector,
    pub v_perp_basis: Vec<MukaiVector>,
    pub hhat_square: BigInt,
    pub dim_v: BigInt,
    pub base_dim: BigInt,
    /// genus of a curve in `|Ĥ|`
    pub fiber_curve_genus: BigInt,
    pub fibration_class: LatticeVector,
    pub brauer_order: BigInt,
    pub k_component: &'static str,
    pub imported_facts: Vec<ImportedFact>,
}

/// Full numeric replay of the fibration `X^[d] ⇢ |Ĥ| ≅ P^d` for
/// `n = (2d−2)m²`. Consistency checks are assertions: a failure is a bug.
pub fn replay_theorem(d: u64, m: u64) -> Result<FMNumericReport> {
    mukai::check_scenario_range(d, m)?;
    let n = mukai::scenario_degree(d, m);
    let model = K3Model::of_scenario(d, m)?;
    let v = mukai::scenario_vector(&model, d, m);
    let w = mukai::ideal_sheaf_vector(&model, d);
    assert!(mukai::mukai_pair(&v, &v)?.is_zero());
    assert!(mukai::mukai_pair(&v, &w)?.is_zero());

    let v_perp_basis = compute_v_perp(d, m)?;
    let hhat_square = c_xi_class(d, m)?.hhat_square;
    let dim_v = mukai::moduli_dimension(&w)?;
    let base_dim = &hhat_square / 2 + 1;
    let fiber_curve_genus = &hhat_square / 2 + 1;
    let brauer_order = mukai::fine_moduli_gcd(&v)?;

    let n_u64 = u64::try_from(&n).map_err(|_| crate::Error::Overflow(format!("degree {n}")))?;
    let fibration_class = hilbert::fibration_class(n_u64, d)?;

    let (dd, mm) = (BigInt::from(d), BigInt::from(m));
    assert_eq!(hhat_square, BigInt::from(2) * &dd - 2);
    assert_eq!(hhat_square, mukai::moduli_k3_degree(d, m)?);
    assert_eq!(dim_v, BigInt::from(2) * &dd);
    assert_eq!(base_dim, dd);
    assert_eq!(&base_dim * 2, dim_v);
    assert_eq!(fiber_curve_genus, dd);
    assert_eq!(brauer_order, mm);
    assert_eq!(fibration_class.coords(), &[BigInt::from(1), -mm]);

    Ok(FMNumericReport {
        d,
        m,
        n,
        model,
        v,
        w,
        v_perp_basis,
        hhat_square,
        dim_v,
        base_dim,
        fiber_curve_genus,
        fibration_class,
        brauer_order,
        k_component: K_UNDETERMINED,
        imported_facts: vec![SIGN_OF_HHAT, REGULARITY],
    })
}
