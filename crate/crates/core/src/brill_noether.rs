//! Parameter-level numerics of the Serre construction of the rank-`m` bundles
//! `E` with Mukai vector `(m, H, (d−1)m)`.
//!
//! `ρ = g − (r+1)(g − c + r)` is the standard Brill–Noether number; it is
//! used here as a known formula rather than derived.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::mukai::{self, K3Model, MukaiVector, SurfaceKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreParams {
    pub d: u64,
    pub m: u64,
    /// `(2d−2)m²`
    pub n: BigInt,
    /// genus of a smooth curve in `|H|`, `n/2 + 1`
    pub g: BigInt,
    /// length of `Z`, `(d−1)(m²−m) + m`
    pub c: BigInt,
    /// index of speciality `δ(Z) = m − 1`
    pub delta: BigInt,
}

impl SerreParams {
    pub fn new(d: u64, m: u64) -> Result<Self> {
        mukai::check_scenario_range(d, m)?;
        let (dd, mm) = (BigInt::from(d), BigInt::from(m));
        let n = mukai::scenario_degree(d, m);
        let g = &n / 2 + 1;
        let c = (&dd - 1) * (&mm * &mm - &mm) + &mm;
        let delta = &mm - 1;
        debug_assert_eq!(g, (&dd - 1) * &mm * &mm + 1);
        debug_assert!(c >= mm);
        Ok(SerreParams { d, m, n, g, c, delta })
    }
}

/// `ρ(g, r, c) = g − (r+1)(g − c + r)`.
pub fn bn_number(g: &BigInt, r: &BigInt, c: &BigInt) -> Result<BigInt> {
    if g.is_negative() || r.is_negative() {
        return Err(Error::OutOfRange("g and r must be non-negative".into()));
    }
    Ok(g - (r + 1) * (g - c + r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreCertificate {
    pub params: SerreParams,
    /// `ρ_c^{m−1}`: must equal 1
    pub rho_existence: BigInt,
    /// `ρ_{c−1}^{m−1}`: must be negative (`|Z|` base point free)
    pub rho_z_bpf: BigInt,
    /// `ρ_{c+1}^{m}`: must be negative (`|K−Z|` base point free)
    pub rho_kz_bpf: BigInt,
    pub pass: [bool; 3],
}

impl SerreCertificate {
    pub fn passed(&self) -> bool {
        self.pass.iter().all(|&p| p)
    }

    pub fn rho(&self) -> [&BigInt; 3] {
        [&self.rho_existence, &self.rho_z_bpf, &self.rho_kz_bpf]
    }
}

/// Brill–Noether conditions making the Serre construction produce a globally
/// generated `E` from a `g^{m−1}_c` on a generic curve in `|H|`.
pub fn certify_serre(d: u64, m: u64) -> Result<SerreCertificate> {
    let p = SerreParams::new(d, m)?;
    let r = &p.delta;
    let rho_existence = bn_number(&p.g, r, &p.c)?;
    let rho_z_bpf = bn_number(&p.g, r, &(&p.c - 1))?;
    let rho_kz_bpf = bn_number(&p.g, &BigInt::from(m), &(&p.c + 1))?;
    let pass = [rho_existence == BigInt::from(1), rho_z_bpf.is_negative(), rho_kz_bpf.is_negative()];
    Ok(SerreCertificate { params: p, rho_existence, rho_z_bpf, rho_kz_bpf, pass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreEulerCharacteristics {
    pub chi_o: BigInt,
    pub chi_o1: BigInt,
    pub chi_iz1: BigInt,
    pub chi_e: BigInt,
    pub mukai_vector: MukaiVector,
    /// `χ(O_C(K−Z))` from `0 → O^m → E → O_C(K−Z) → 0`
    pub chi_kz_from_sequence: BigInt,
    /// the same, by Riemann–Roch on the genus-`g` curve
    pub chi_kz_riemann_roch: BigInt,
    pub deg_kz: BigInt,
}

/// Euler characteristics along `0 → H¹(I_Z(1))⊗O → E → I_Z(1) → 0` and
/// `0 → O^m → E → O_C(K−Z) → 0`, by additivity.
pub fn serre_euler_characteristics(d: u64, m: u64) -> Result<SerreEulerCharacteristics> {
    let p = SerreParams::new(d, m)?;
    let (dd, mm) = (BigInt::from(d), BigInt::from(m));
    let chi_o = BigInt::from(2);
    let chi_o1 = &chi_o + &p.n / 2;
    let chi_iz1 = &chi_o1 - &p.c;
    let chi_e: BigInt = &p.delta * &chi_o + &chi_iz1;
    assert_eq!(chi_e, &dd * &mm);

    let model = K3Model::generic(&p.n)?;
    let h: LatticeVector = model.polarization();
    let mukai_vector = mukai::mukai_vector_of_sheaf(mm.clone(), h, chi_e.clone(), SurfaceKind::K3);
    assert_eq!(mukai_vector, mukai::scenario_vector(&model, d, m));

    let chi_kz_from_sequence = &chi_e - &mm * &chi_o;
    let deg_kz = BigInt::from(2) * &p.g - 2 - &p.c;
    let chi_kz_riemann_roch = &deg_kz - &p.g + 1;
    assert_eq!(chi_kz_from_sequence, chi_kz_riemann_roch);
    assert_eq!(chi_kz_from_sequence, &dd * &mm - BigInt::from(2) * &mm);

    Ok(SerreEulerCharacteristics {
        chi_o,
        chi_o1,
        chi_iz1,
        chi_e,
        mukai_vector,
        chi_kz_from_sequence,
        chi_kz_riemann_roch,
        deg_kz,
    })
}

/// `h⁰(E ⊗ I_ξ) = m(d − k)` for a generic `E` and `k` generic points.
pub fn section_count(d: u64, m: u64, k: u64) -> Result<BigInt> {
    if k < 1 || k > d {
        return Err(Error::OutOfRange(format!("k must lie in [1, d] = [1, {d}], got {k}")));
    }
    Ok(BigInt::from(m) * (BigInt::from(d) - BigInt::from(k)))
}

/// Sanity hook used by tests: `g − c + m − 1 = (d−1)m`.
pub fn speciality_identity_holds(d: u64, m: u64) -> Result<bool> {
    let p = SerreParams::new(d, m)?;
    let lhs: BigInt = &p.g - &p.c + BigInt::from(m) - 1;
    Ok(lhs == (BigInt::from(d) - 1) * BigInt::from(m) && !lhs.is_zero())
}
