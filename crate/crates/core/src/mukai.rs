//! Algebraic Mukai lattice `H⁰ ⊕ Pic ⊕ H⁴` of a polarized K3 surface and
//! Mukai-vector arithmetic.
//!
//! Only the algebraic part is modelled; transcendental directions enter
//! through [`crate::twisted`] where they are needed.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, IntLattice, LatticeVector};
use crate::serial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K3Model {
    picard: Arc<IntLattice>,
    mukai: Arc<IntLattice>,
    label: String,
}

impl K3Model {
    /// Checks that `picard` is even and, for rank ≤ 2, hyperbolic.
    pub fn new(picard: IntLattice, label: impl Into<String>) -> Result<Self> {
        let gram = picard.gram();
        if gram.iter().enumerate().any(|(i, row)| row[i].is_odd()) {
            return Err(Error::InvalidModel("Picard lattice of a K3 surface is even".into()));
        }
        match picard.rank() {
            1 if !gram[0][0].is_positive() => {
                return Err(Error::InvalidModel("polarization degree must be positive".into()));
            }
            2 if !picard.determinant().is_negative() => {
                return Err(Error::InvalidModel("rank-2 Picard lattice must have signature (1, 1)".into()));
            }
            _ => {}
        }

        let r = picard.rank();
        let n = r + 2;
        let mut g = vec![vec![BigInt::zero(); n]; n];
        g[0][n - 1] = -BigInt::one();
        g[n - 1][0] = -BigInt::one();
        for i in 0..r {
            g[i + 1][1..=r].clone_from_slice(&gram[i]);
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(picard.labels().iter().cloned());
        labels.push("eta".to_string());
        let mukai = IntLattice::new(g, labels)?;

        Ok(K3Model { picard: Arc::new(picard), mukai: Arc::new(mukai), label: label.into() })
    }

    /// Generic K3 of degree `n`: `Pic = Z·H`, `H² = n`.
    pub fn generic(n: &BigInt) -> Result<Self> {
        let picard = IntLattice::new(vec![vec![n.clone()]], vec!["H".into()])?;
        Self::new(picard, format!("generic K3 of degree {n}"))
    }

    /// Generic K3 of degree `(2d−2)m²`.
    pub fn of_scenario(d: u64, m: u64) -> Result<Self> {
        Self::generic(&scenario_degree(d, m))
    }

    pub fn picard(&self) -> &Arc<IntLattice> {
        &self.picard
    }

    pub fn mukai_lattice(&self) -> &Arc<IntLattice> {
        &self.mukai
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// First Picard basis vector (the polarization `H` for generic models).
    pub fn polarization(&self) -> LatticeVector {
        LatticeVector::basis(&self.picard, 0)
    }
}

/// `(2d−2)m²`.
pub fn scenario_degree(d: u64, m: u64) -> BigInt {
    let m = BigInt::from(m);
    (BigInt::from(2) * BigInt::from(d) - 2) * &m * &m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MukaiVector {
    pub r: BigInt,
    pub c: LatticeVector,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: BigInt, c: LatticeVector, s: BigInt) -> Self {
        MukaiVector { r, c, s }
    }

    pub fn from_i64(model: &K3Model, r: i64, c: &[i64], s: i64) -> Result<Self> {
        Ok(MukaiVector {
            r: r.into(),
            c: LatticeVector::from_i64(model.picard(), c)?,
            s: s.into(),
        })
    }

    fn check_model(&self, model: &K3Model) -> Result<()> {
        if **self.c.lattice() == **model.picard() {
            Ok(())
        } else {
            Err(Error::IncompatibleLattices)
        }
    }

    /// Coordinates in the algebraic Mukai lattice of `model`.
    pub fn to_lattice_vector(&self, model: &K3Model) -> Result<LatticeVector> {
        self.check_model(model)?;
        let mut coords = vec![self.r.clone()];
        coords.extend(self.c.coords().iter().cloned());
        coords.push(self.s.clone());
        LatticeVector::new(model.mukai_lattice(), coords)
    }

    pub fn from_lattice_vector(model: &K3Model, x: &LatticeVector) -> Result<Self> {
        if **x.lattice() != **model.mukai_lattice() {
            return Err(Error::IncompatibleLattices);
        }
        let coords = x.coords();
        let n = coords.len();
        Ok(MukaiVector {
            r: coords[0].clone(),
            c: LatticeVector::new(model.picard(), coords[1..n - 1].to_vec())?,
            s: coords[n - 1].clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.c.is_zero()
    }
}

impl std::fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c, self.s)
    }
}

impl Serialize for MukaiVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("c", &serial::int_strings(self.c.coords()))?;
        map.serialize_entry("r", &serial::int_string(&self.r))?;
        map.serialize_entry("s", &serial::int_string(&self.s))?;
        map.end()
    }
}

/// The correction term `ε` in `χ(F) − ε·rk F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Abelian,
    K3,
}

impl SurfaceKind {
    pub fn epsilon(self) -> BigInt {
        match self {
            SurfaceKind::Abelian => BigInt::zero(),
            SurfaceKind::K3 => BigInt::one(),
        }
    }
}

/// `⟨v, w⟩ = c·c' − r·s' − s·r'`.
pub fn mukai_pair(v: &MukaiVector, w: &MukaiVector) -> Result<BigInt> {
    let cc = lattice::pair(&v.c, &w.c)?;
    Ok(cc - &v.r * &w.s - &v.s * &w.r)
}

pub fn mukai_vector_of_sheaf(rank: BigInt, c1: LatticeVector, chi: BigInt, kind: SurfaceKind) -> MukaiVector {
    let s = chi - kind.epsilon() * &rank;
    MukaiVector { r: rank, c: c1, s }
}

/// `v² + 2`, the dimension of the moduli space of sheaves with Mukai vector `v`.
pub fn moduli_dimension(v: &MukaiVector) -> Result<BigInt> {
    let sq = mukai_pair(v, v)?;
    if sq < BigInt::from(-2) || sq.is_odd() {
        return Err(Error::InvalidModuliDimension);
    }
    Ok(sq + 2)
}

/// `gcd(r, c·γ, s)` over a basis `γ` of the Picard lattice. 1 means a universal
/// sheaf exists; otherwise it is the order of the Brauer obstruction.
pub fn fine_moduli_gcd(v: &MukaiVector) -> Result<BigInt> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let pic = v.c.lattice();
    let mut g = v.r.gcd(&v.s);
    for i in 0..pic.rank() {
        g = g.gcd(&lattice::pair(&v.c, &LatticeVector::basis(pic, i))?);
    }
    Ok(g)
}

/// `v = (m, H, (d−1)m)` on the degree-`(2d−2)m²` model.
pub fn scenario_vector(model: &K3Model, d: u64, m: u64) -> MukaiVector {
    let m = BigInt::from(m);
    let s = (BigInt::from(d) - 1) * &m;
    MukaiVector { r: m, c: model.polarization(), s }
}

/// `w = (1, 0, 1−d)`, the Mukai vector of ideal sheaves of length-`d` subschemes.
pub fn ideal_sheaf_vector(model: &K3Model, d: u64) -> MukaiVector {
    MukaiVector {
        r: BigInt::one(),
        c: LatticeVector::zero(model.picard()),
        s: BigInt::one() - BigInt::from(d),
    }
}

pub(crate) fn check_scenario_range(d: u64, m: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("d must be at least 2, got {d}")));
    }
    if m < 2 {
        return Err(Error::OutOfRange(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

/// Degree `Ĥ²` of the moduli K3 surface `M = M_X(v)`: the square of the image of
/// `w` in `v^⊥/v`. Always `2d − 2`.
pub fn moduli_k3_degree(d: u64, m: u64) -> Result<BigInt> {
    check_scenario_range(d, m)?;
    let model = K3Model::of_scenario(d, m)?;
    let v = scenario_vector(&model, d, m);
    let w = ideal_sheaf_vector(&model, d);
    assert!(mukai_pair(&v, &w)?.is_zero(), "w must lie in v^⊥");
    let hhat_sq = lattice::quotient_square(&v.to_lattice_vector(&model)?, &w.to_lattice_vector(&model)?)?;
    assert_eq!(hhat_sq, BigInt::from(2 * d - 2));
    Ok(hhat_sq)
}

/// `dim |Ĥ| = Ĥ²/2 + 1` on the moduli K3; equals `d` and half of `dim X^[d]`.
pub fn fibration_base_dimension(d: u64) -> Result<BigInt> {
    let hhat_sq = moduli_k3_degree(d, 2)?;
    let base = &hhat_sq / 2 + 1;
    let model = K3Model::of_scenario(d, 2)?;
    let dim_v = moduli_dimension(&ideal_sheaf_vector(&model, d))?;
    assert_eq!(base, BigInt::from(d));
    assert_eq!(&base * 2, dim_v);
    Ok(base)
}
