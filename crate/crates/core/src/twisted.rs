//! B-fields and the twisted algebraic Mukai lattice.
//!
//! A Brauer class `α = e^{2πiB}` is represented by a rational class `B` in a
//! finite-rank model of `H²(M, Z)` that contains the Picard lattice. `exp(B)`
//! acts on rational triples `(r, c, s)` and the twisted algebraic lattice is
//! `exp(B)·(H⁰ ⊕ Pic ⊕ H⁴)_Q ∩ H*(M, Z)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntLattice, LatticeVector, RationalVector};
use crate::linalg::{self, IntMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct H2Model {
    h2: Arc<IntLattice>,
    pic_basis: Vec<LatticeVector>,
    total: Arc<IntLattice>,
    // integral functionals on h2 vanishing on Pic; a basis of Hom(h2/Pic, Z)
    pic_annihilator: IntMatrix,
}

impl H2Model {
    pub fn new(h2: Arc<IntLattice>, pic_basis: Vec<LatticeVector>) -> Result<Self> {
        for p in &pic_basis {
            if **p.lattice() != *h2 {
                return Err(Error::IncompatibleLattices);
            }
        }
        let rows: IntMatrix = pic_basis.iter().map(|p| p.coords().to_vec()).collect();
        if linalg::rank(&rows) != pic_basis.len() {
            return Err(Error::InvalidModel("Picard basis is not linearly independent".into()));
        }
        let rational: Vec<RationalVector> = pic_basis.iter().map(LatticeVector::to_rational).collect();
        let saturation = lattice::intersect_rational(&h2, &rational)?;
        if !lattice::same_span(&saturation, &pic_basis) {
            return Err(Error::InvalidModel("Picard sublattice is not saturated".into()));
        }

        let r = h2.rank();
        let n = r + 2;
        let mut g = vec![vec![BigInt::zero(); n]; n];
        g[0][n - 1] = -BigInt::one();
        g[n - 1][0] = -BigInt::one();
        for i in 0..r {
            g[i + 1][1..=r].clone_from_slice(&h2.gram()[i]);
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(h2.labels().iter().cloned());
        labels.push("eta".to_string());
        let total = Arc::new(IntLattice::new(g, labels)?);

        let pic_annihilator = linalg::integer_kernel(&rows, r);
        Ok(H2Model { h2, pic_basis, total, pic_annihilator })
    }

    /// Rank-2 model `Z·P ⊕ Z·T` with `P² = pic_square`, `T² = t_square`, `Pic = Z·P`.
    pub fn picard_plus_transcendental(pic_square: BigInt, t_square: BigInt) -> Result<Self> {
        let h2 = Arc::new(IntLattice::new(
            vec![vec![pic_square, BigInt::zero()], vec![BigInt::zero(), t_square]],
            vec!["P".into(), "T".into()],
        )?);
        let p = LatticeVector::basis(&h2, 0);
        Self::new(h2, vec![p])
    }

    pub fn h2(&self) -> &Arc<IntLattice> {
        &self.h2
    }

    pub fn pic_basis(&self) -> &[LatticeVector] {
        &self.pic_basis
    }

    /// `Z ⊕ h2 ⊕ Z` with the Mukai form.
    pub fn total_lattice(&self) -> &Arc<IntLattice> {
        &self.total
    }
}

#[derive(Debug, Clone)]
pub struct BField {
    model: Arc<H2Model>,
    vec: RationalVector,
}

impl BField {
    pub fn new(model: &Arc<H2Model>, vec: RationalVector) -> Result<Self> {
        if **vec.lattice() != *model.h2 {
            return Err(Error::IncompatibleLattices);
        }
        Ok(BField { model: Arc::clone(model), vec })
    }

    pub fn zero(model: &Arc<H2Model>) -> Self {
        BField { model: Arc::clone(model), vec: RationalVector::zero(&model.h2) }
    }

    pub fn model(&self) -> &Arc<H2Model> {
        &self.model
    }

    pub fn vec(&self) -> &RationalVector {
        &self.vec
    }

    pub fn square(&self) -> BigRational {
        self.model.h2.pair_rational(self.vec.coords(), self.vec.coords())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistedMukaiTriple {
    pub r: BigRational,
    pub c: RationalVector,
    pub s: BigRational,
}

impl TwistedMukaiTriple {
    pub fn new(r: BigRational, c: RationalVector, s: BigRational) -> Self {
        TwistedMukaiTriple { r, c, s }
    }

    pub fn from_integral(x: &LatticeVector, model: &H2Model) -> Result<Self> {
        if **x.lattice() != *model.total {
            return Err(Error::IncompatibleLattices);
        }
        let q: Vec<BigRational> = x.coords().iter().cloned().map(BigRational::from_integer).collect();
        let n = q.len();
        Ok(TwistedMukaiTriple {
            r: q[0].clone(),
            c: RationalVector::new(&model.h2, q[1..n - 1].to_vec())?,
            s: q[n - 1].clone(),
        })
    }

    pub fn to_total(&self, model: &H2Model) -> Result<RationalVector> {
        if **self.c.lattice() != *model.h2 {
            return Err(Error::IncompatibleLattices);
        }
        let mut coords = vec![self.r.clone()];
        coords.extend(self.c.coords().iter().cloned());
        coords.push(self.s.clone());
        RationalVector::new(&model.total, coords)
    }
}

/// `exp(B)·(r, c, s) = (r, c + r·B, s + B·c + r·B²/2)`.
pub fn exp_b_action(b: &BField, t: &TwistedMukaiTriple) -> Result<TwistedMukaiTriple> {
    let c = t.c.add(&b.vec.scale(&t.r))?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let s = &t.s + b.vec.pair(&t.c)? + &t.r * b.square() * half;
    Ok(TwistedMukaiTriple { r: t.r.clone(), c, s })
}

/// Mukai pairing `c·c' − r·s' − s·r'` over Q.
pub fn mukai_pair_rational(x: &TwistedMukaiTriple, y: &TwistedMukaiTriple) -> Result<BigRational> {
    Ok(x.c.pair(&y.c)? - &x.r * &y.s - &x.s * &y.r)
}

/// Integral basis (Hermite normal form, in the total lattice) of the
/// `B`-twisted algebraic classes: integral `(r, c, s)` with `c − r·B ∈ Pic_Q`.
pub fn twisted_algebraic_lattice(b: &BField) -> Result<Vec<LatticeVector>> {
    let model = &b.model;
    let zero_c = RationalVector::zero(&model.h2);
    let (one, zero) = (BigRational::one(), BigRational::zero());

    let mut untwisted = vec![TwistedMukaiTriple::new(one.clone(), zero_c.clone(), zero.clone())];
    for p in &model.pic_basis {
        untwisted.push(TwistedMukaiTriple::new(zero.clone(), p.to_rational(), zero.clone()));
    }
    untwisted.push(TwistedMukaiTriple::new(zero.clone(), zero_c, one));

    let generators = untwisted
        .iter()
        .map(|t| exp_b_action(b, t)?.to_total(model))
        .collect::<Result<Vec<_>>>()?;
    lattice::intersect_rational(&model.total, &generators)
}

/// Order of `α = e^{2πiB}`: the least `k ≥ 1` with `k·B ∈ H²(Z) + Pic_Q`.
pub fn brauer_order(b: &BField) -> BigInt {
    b.model.pic_annihilator.iter().fold(BigInt::one(), |acc, functional| {
        let value: BigRational = functional
            .iter()
            .zip(b.vec.coords())
            .map(|(a, x)| BigRational::from_integer(a.clone()) * x)
            .sum();
        acc.lcm(value.denom())
    })
}

/// Generator of the subgroup of `Z` formed by the degree-0 components of `classes`.
pub fn min_positive_rank(classes: &[LatticeVector]) -> BigInt {
    classes.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x.coords()[0]))
}
