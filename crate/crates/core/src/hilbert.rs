//! Bogomolov–Beauville lattice `H²(X^[d], Z) = H²(X, Z) ⊕ Z·e`, `e² = −2(d−1)`,
//! restricted to its algebraic part, together with isotropic-class solving and
//! the rank-2 lattice-polarized example with an explicit reflection.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntLattice, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBLattice {
    base: Arc<IntLattice>,
    d: u64,
    full: Arc<IntLattice>,
}

impl BBLattice {
    pub fn new(base: Arc<IntLattice>, d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::OutOfRange(format!("d must be at least 2, got {d}")));
        }
        let e_sq = -BigInt::from(2) * (BigInt::from(d) - 1);
        let e = IntLattice::new(vec![vec![e_sq]], vec!["e".into()])?;
        let full = Arc::new(base.direct_sum(&e)?);
        Ok(BBLattice { base, d, full })
    }

    /// Generic K3 of degree `n`, with the polarization labelled `h`.
    pub fn generic(n: &BigInt, d: u64) -> Result<Self> {
        let base = IntLattice::new(vec![vec![n.clone()]], vec!["h".into()])?;
        Self::new(Arc::new(base), d)
    }

    pub fn base(&self) -> &Arc<IntLattice> {
        &self.base
    }

    pub fn full(&self) -> &Arc<IntLattice> {
        &self.full
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Class of the exceptional divisor.
    pub fn e(&self) -> LatticeVector {
        LatticeVector::basis(&self.full, self.base.rank())
    }

    /// Image of the `i`-th basis class of `H²(X)`.
    pub fn base_class(&self, i: usize) -> LatticeVector {
        LatticeVector::basis(&self.full, i)
    }

    /// `Σ coeffs[i]·base_i + e_coeff·e`.
    pub fn class(&self, base_coeffs: &[BigInt], e_coeff: BigInt) -> Result<LatticeVector> {
        let mut coords = base_coeffs.to_vec();
        coords.push(e_coeff);
        LatticeVector::new(&self.full, coords)
    }
}

/// `(2d)! / (d!·2^d)`, by exact factorials.
pub fn fujiki_constant(d: u64) -> Result<BigInt> {
    if d < 1 {
        return Err(Error::OutOfRange("d must be at least 1".into()));
    }
    let fact = |k: u64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let num = fact(2 * d);
    let den = fact(d) * (BigInt::one() << d as usize);
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "Fujiki constant must be integral");
    Ok(q)
}

/// `χ(O_V(D)) = d + 1` for an isotropic divisor `D` on a `2d`-dimensional
/// irreducible symplectic variety.
pub fn isotropic_chi(d: u64) -> Result<BigInt> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("d must be at least 2, got {d}")));
    }
    Ok(BigInt::from(d) + 1)
}

/// Writes `n = s·u²` with `s` squarefree. Trial division up to `n^(1/3)`; the
/// cofactor left over then has at most two prime factors.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    assert!(n > 0);
    let mut rest = n;
    let (mut s, mut u) = (1u64, 1u64);
    let mut p = 2u64;
    while p.saturating_mul(p).saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e % 2 == 1 {
                s *= p;
            }
            u *= p.pow(e / 2);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // rest is 1, a prime, a prime square, or a product of two distinct primes
    let r = rest.sqrt();
    if r > 1 && r * r == rest {
        u *= r;
    } else {
        s *= rest;
    }
    (s, u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsotropicWitness {
    pub k: u64,
    pub m: u64,
}

fn check_k3_degree(n: u64, d: u64) -> Result<u64> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::NotK3Degree);
    }
    if d < 2 {
        return Err(Error::OutOfRange(format!("d must be at least 2, got {d}")));
    }
    (d - 1)
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow(format!("2d - 2 for d = {d}")))
}

/// Decides whether `a²n = (2d−2)b²` has a primitive solution with `a > 0`, i.e.
/// whether `q(a·h + b·e) = 0` is solvable on `X^[d]` for a generic K3 of degree
/// `n`. Returns the witness `(k, m)` with `k²n = (2d−2)m²`, `gcd(k, m) = 1`.
pub fn isotropic_exists(n: u64, d: u64) -> Result<Option<IsotropicWitness>> {
    let two_d_minus_2 = check_k3_degree(n, d)?;
    let (s_n, u) = squarefree_decomposition(n);
    let (s_d, t) = squarefree_decomposition(two_d_minus_2);
    if s_n != s_d {
        return Ok(None);
    }
    let g = u.gcd(&t);
    let w = IsotropicWitness { k: t / g, m: u / g };
    let k = BigInt::from(w.k);
    let m = BigInt::from(w.m);
    assert_eq!(&k * &k * n, &m * &m * two_d_minus_2);
    assert!(k.gcd(&m).is_one());
    Ok(Some(w))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSolution {
    /// coefficient of `h`
    pub a: BigInt,
    /// coefficient of `e`
    pub b: BigInt,
    pub cls: LatticeVector,
}

/// All primitive `a·h + b·e` with `a > 0` and square zero, ordered `b > 0` first.
pub fn primitive_isotropic_classes(n: u64, d: u64) -> Result<Vec<IsotropicSolution>> {
    let Some(w) = isotropic_exists(n, d)? else {
        check_k3_degree(n, d)?;
        return Ok(Vec::new());
    };
    let bb = BBLattice::generic(&BigInt::from(n), d)?;
    [BigInt::from(w.m), -BigInt::from(w.m)]
        .into_iter()
        .map(|b| {
            let a = BigInt::from(w.k);
            let cls = bb.class(std::slice::from_ref(&a), b.clone())?;
            debug_assert!(cls.square().is_zero());
            Ok(IsotropicSolution { a, b, cls })
        })
        .collect()
}

/// The candidate fibration class `k·h − m·e`: of the two primitive isotropic
/// classes, the one with negative `e`-coefficient. The other one contains the
/// exceptional divisor in its base locus.
pub fn fibration_class(n: u64, d: u64) -> Result<LatticeVector> {
    primitive_isotropic_classes(n, d)?
        .into_iter()
        .find(|s| s.b.is_negative())
        .map(|s| s.cls)
        .ok_or(Error::NoIsotropicClass)
}

/// The rank-2 lattice-polarized scenario: Picard lattice
/// `[[2d, 2d−1+m], [2d−1+m, 2d−2]]` in the basis `f_{2d}, f_{2d−2}`.
#[derive(Debug, Clone)]
pub struct Polar2Scenario {
    pub d: u64,
    pub m: u64,
    pub bb: BBLattice,
    /// `f_{2d} − e`, of square 2
    pub root: LatticeVector,
    /// `f_{2d−2} − e`
    pub source: LatticeVector,
    /// image of `source` under the reflection in `root`
    pub reflected: LatticeVector,
    /// `(m+1)f_{2d} − f_{2d−2}`
    pub degree_class: LatticeVector,
    pub degree_square: BigInt,
    pub degree_dot_f2d: BigInt,
    /// positive square and positive pairing with `f_{2d}`
    pub effective_by_criterion: bool,
}

pub fn polar2_lattice(d: u64, m: u64) -> Result<BBLattice> {
    let (dd, mm) = (BigInt::from(d), BigInt::from(m));
    let a = BigInt::from(2) * &dd;
    let b: BigInt = &a - 1 + &mm;
    let c = &a - 2;
    let labels = vec![format!("f{a}"), format!("f{c}")];
    let pic = IntLattice::new(vec![vec![a, b.clone()], vec![b, c]], labels)?;
    BBLattice::new(Arc::new(pic), d)
}

pub fn polar2_scenario(d: u64, m: u64) -> Result<Polar2Scenario> {
    crate::mukai::check_scenario_range(d, m)?;
    let bb = polar2_lattice(d, m)?;
    let (f_big, f_small, e) = (bb.base_class(0), bb.base_class(1), bb.e());

    let root = f_big.sub(&e)?;
    assert_eq!(root.square(), BigInt::from(2));
    let source = f_small.sub(&e)?;
    let reflected = lattice::reflect(&root, &source)?;

    let mm = BigInt::from(m);
    let degree_class = f_big.scale(&(&mm + 1)).sub(&f_small)?;
    let expected = degree_class.sub(&e.scale(&mm))?;
    assert_eq!(reflected, expected, "reflection must send f_(2d-2) - e to f_((2d-2)m^2) - me");

    let degree_square = degree_class.square();
    assert_eq!(degree_square, crate::mukai::scenario_degree(d, m));
    let degree_dot_f2d = lattice::pair(&degree_class, &f_big)?;
    let effective_by_criterion = degree_square.is_positive() && degree_dot_f2d.is_positive();
    assert!(effective_by_criterion);

    Ok(Polar2Scenario {
        d,
        m,
        bb,
        root,
        source,
        reflected,
        degree_class,
        degree_square,
        degree_dot_f2d,
        effective_by_criterion,
    })
}
