//! Integer lattices with a nondegenerate symmetric Gram matrix, and the vector
//! operations the rest of the crate is built on.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::serial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl IntLattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::EmptyLattice);
        }
        for row in &gram {
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: row.len() });
            }
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if linalg::determinant(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        let labels = if labels.len() == rank {
            labels
        } else {
            (0..rank).map(|i| format!("b{i}")).collect()
        };
        Ok(IntLattice { gram, labels })
    }

    /// Convenience constructor from small integer entries.
    pub fn from_i64(gram: &[&[i64]], labels: &[&str]) -> Result<Self> {
        let gram = gram
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(gram, labels.iter().map(|s| s.to_string()).collect())
    }

    /// Orthogonal direct sum, labels concatenated.
    pub fn direct_sum(&self, other: &IntLattice) -> Result<Self> {
        let n = self.rank() + other.rank();
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in self.gram.iter().enumerate() {
            gram[i][..self.rank()].clone_from_slice(row);
        }
        for (i, row) in other.gram.iter().enumerate() {
            gram[self.rank() + i][self.rank()..].clone_from_slice(row);
        }
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        Self::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    pub fn pair_coords(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        linalg::dot(x, &linalg::mat_vec(&self.gram, y))
    }

    /// The Gram form extended bilinearly to rational coordinates.
    pub fn pair_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = &self.gram[i][j];
                if !g.is_zero() && !yj.is_zero() {
                    acc += xi * yj * BigRational::from_integer(g.clone());
                }
            }
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
    lattice: Arc<IntLattice>,
}

impl PartialEq for LatticeVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_lattice(&self.lattice, &other.lattice)
    }
}

impl Eq for LatticeVector {}

fn same_lattice(a: &Arc<IntLattice>, b: &Arc<IntLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LatticeVector {
    pub fn new(lattice: &Arc<IntLattice>, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), got: coords.len() });
        }
        Ok(LatticeVector { coords, lattice: Arc::clone(lattice) })
    }

    pub fn from_i64(lattice: &Arc<IntLattice>, coords: &[i64]) -> Result<Self> {
        Self::new(lattice, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(lattice: &Arc<IntLattice>) -> Self {
        LatticeVector { coords: vec![BigInt::zero(); lattice.rank()], lattice: Arc::clone(lattice) }
    }

    /// The `i`-th basis vector.
    pub fn basis(lattice: &Arc<IntLattice>, i: usize) -> Self {
        let mut v = Self::zero(lattice);
        v.coords[i] = BigInt::one();
        v
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn lattice(&self) -> &Arc<IntLattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &LatticeVector) -> Result<()> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::IncompatibleLattices)
        }
    }

    pub fn add(&self, other: &LatticeVector) -> Result<Self> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(LatticeVector { coords, lattice: Arc::clone(&self.lattice) })
    }

    pub fn sub(&self, other: &LatticeVector) -> Result<Self> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
            lattice: Arc::clone(&self.lattice),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn square(&self) -> BigInt {
        self.lattice.pair_coords(&self.coords, &self.coords)
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector {
            coords: self.coords.iter().cloned().map(BigRational::from_integer).collect(),
            lattice: Arc::clone(&self.lattice),
        }
    }
}

impl fmt::Display for LatticeVector {
    /// Renders as a linear combination of the basis labels, e.g. `3f4 - f2 - 2e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, label) in self.coords.iter().zip(self.lattice.labels()) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if label == "1" {
                // unit label: the coefficient alone, as in `3 + T`
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}{label}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RationalVector {
    coords: Vec<BigRational>,
    lattice: Arc<IntLattice>,
}

impl PartialEq for RationalVector {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_lattice(&self.lattice, &other.lattice)
    }
}

impl RationalVector {
    /// `BigRational` always keeps lowest terms, so no normalization is needed here.
    pub fn new(lattice: &Arc<IntLattice>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), got: coords.len() });
        }
        Ok(RationalVector { coords, lattice: Arc::clone(lattice) })
    }

    pub fn zero(lattice: &Arc<IntLattice>) -> Self {
        RationalVector { coords: vec![BigRational::zero(); lattice.rank()], lattice: Arc::clone(lattice) }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn lattice(&self) -> &Arc<IntLattice> {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &RationalVector) -> Result<()> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::IncompatibleLattices)
        }
    }

    pub fn add(&self, other: &RationalVector) -> Result<Self> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(RationalVector { coords, lattice: Arc::clone(&self.lattice) })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RationalVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
            lattice: Arc::clone(&self.lattice),
        }
    }

    pub fn pair(&self, other: &RationalVector) -> Result<BigRational> {
        self.check_same(other)?;
        Ok(self.lattice.pair_rational(&self.coords, &other.coords))
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `denominator() · self` as an integral vector.
    pub fn clear_denominators(&self) -> LatticeVector {
        let den = BigRational::from_integer(self.denominator());
        let coords = self.coords.iter().map(|c| (c * &den).to_integer()).collect();
        LatticeVector { coords, lattice: Arc::clone(&self.lattice) }
    }

    pub fn to_integral(&self) -> Option<LatticeVector> {
        if self.coords.iter().all(|c| c.is_integer()) {
            Some(self.clear_denominators())
        } else {
            None
        }
    }
}

pub fn pair(x: &LatticeVector, y: &LatticeVector) -> Result<BigInt> {
    x.check_same(y)?;
    Ok(x.lattice.pair_coords(&x.coords, &y.coords))
}

pub fn is_primitive(x: &LatticeVector) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let g = x.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Ok(g.is_one())
}

/// `c ↦ −c + (c, v)·v` for a root `v` of square 2. This is minus the usual
/// reflection, and it is an isometric involution exactly because `v² = 2`.
pub fn reflect(v: &LatticeVector, c: &LatticeVector) -> Result<LatticeVector> {
    v.check_same(c)?;
    if pair(v, v)? != BigInt::from(2) {
        return Err(Error::ReflectionNorm);
    }
    let k = pair(c, v)?;
    v.scale(&k).add(&c.neg())
}

fn vectors_from_rows(lattice: &Arc<IntLattice>, rows: IntMatrix) -> Vec<LatticeVector> {
    rows.into_iter()
        .map(|coords| LatticeVector { coords, lattice: Arc::clone(lattice) })
        .collect()
}

/// Hermite-normal-form basis of the saturated sublattice orthogonal to `span`.
/// An empty span needs `lattice` to know the ambient.
pub fn orthogonal_complement(lattice: &Arc<IntLattice>, span: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    let mut rows = Vec::with_capacity(span.len());
    for s in span {
        if !same_lattice(lattice, &s.lattice) {
            return Err(Error::IncompatibleLattices);
        }
        rows.push(linalg::mat_vec(lattice.gram(), &s.coords));
    }
    Ok(vectors_from_rows(lattice, linalg::integer_kernel(&rows, lattice.rank())))
}

/// Square of the class of `w` in `v^⊥ / v` for isotropic `v`.
pub fn quotient_square(v: &LatticeVector, w: &LatticeVector) -> Result<BigInt> {
    if !pair(v, v)?.is_zero() {
        return Err(Error::Precondition("v must be isotropic (v² = 0)".into()));
    }
    if !pair(v, w)?.is_zero() {
        return Err(Error::Precondition("w must be orthogonal to v".into()));
    }
    pair(w, w)
}

/// Integral basis (Hermite normal form) of `(Q·sub) ∩ L`.
pub fn intersect_rational(lattice: &Arc<IntLattice>, sub: &[RationalVector]) -> Result<Vec<LatticeVector>> {
    let mut rows = Vec::with_capacity(sub.len());
    for s in sub {
        if !same_lattice(lattice, &s.lattice) {
            return Err(Error::IncompatibleLattices);
        }
        rows.push(s.clear_denominators().coords);
    }
    Ok(vectors_from_rows(lattice, linalg::saturate(&rows, lattice.rank())))
}

/// Hermite normal form of the sublattice spanned by `vectors`; two spanning sets
/// generate the same sublattice iff these agree.
pub fn span_hnf(vectors: &[LatticeVector]) -> IntMatrix {
    let rows: IntMatrix = vectors.iter().map(|v| v.coords.clone()).collect();
    linalg::hermite_normal_form(&rows)
}

pub fn same_span(a: &[LatticeVector], b: &[LatticeVector]) -> bool {
    span_hnf(a) == span_hnf(b)
}

/// Index of the sublattice spanned by `basis` in its saturation, computed as
/// the square root of the ratio of Gram determinants.
pub fn saturation_index(basis: &[LatticeVector]) -> Result<BigInt> {
    let Some(first) = basis.first() else {
        return Ok(BigInt::one());
    };
    let lattice = Arc::clone(&first.lattice);
    let rows: IntMatrix = basis.iter().map(|v| v.coords.clone()).collect();
    let sat = linalg::saturate(&rows, lattice.rank());
    if sat.len() != rows.len() {
        return Err(Error::Precondition("basis vectors must be linearly independent".into()));
    }
    let d_sub = linalg::determinant(&linalg::restricted_gram(lattice.gram(), &rows));
    let d_sat = linalg::determinant(&linalg::restricted_gram(lattice.gram(), &sat));
    if d_sat.is_zero() {
        // degenerate restriction: fall back on maximal minors
        return Ok(linalg::maximal_minor_gcd(&rows));
    }
    Ok((d_sub / d_sat).abs().sqrt())
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    gram: Vec<Vec<String>>,
    labels: Vec<String>,
}

impl Serialize for IntLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            rank: self.rank(),
            gram: self.gram.iter().map(|r| serial::int_strings(r)).collect(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LatticeJson::deserialize(d)?;
        let gram = raw
            .gram
            .iter()
            .map(|r| serial::parse_ints(r))
            .collect::<Result<IntMatrix>>()
            .map_err(D::Error::custom)?;
        if gram.len() != raw.rank {
            return Err(D::Error::custom(Error::DimensionMismatch { expected: raw.rank, got: gram.len() }));
        }
        IntLattice::new(gram, raw.labels).map_err(D::Error::custom)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("coords", &serial::int_strings(&self.coords))?;
        map.end()
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("coords", &serial::rational_strings(&self.coords))?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lat(gram: &[&[i64]], labels: &[&str]) -> Arc<IntLattice> {
        Arc::new(IntLattice::from_i64(gram, labels).unwrap())
    }

    fn vec(l: &Arc<IntLattice>, c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(l, c).unwrap()
    }

    fn rat(l: &Arc<IntLattice>, c: &[(i64, i64)]) -> RationalVector {
        let coords = c
            .iter()
            .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
        RationalVector::new(l, coords).unwrap()
    }

    fn polar2_bb() -> Arc<IntLattice> {
        // (d, m) = (2, 2): Picard [[4,5],[5,2]] plus e with e² = −2
        lat(&[&[4, 5, 0], &[5, 2, 0], &[0, 0, -2]], &["f4", "f2", "e"])
    }

    #[test]
    fn construction_rejects_bad_gram() {
        assert_eq!(IntLattice::from_i64(&[], &[]), Err(Error::EmptyLattice));
        assert_eq!(IntLattice::from_i64(&[&[1, 2], &[3, 1]], &[]), Err(Error::NotSymmetric));
        assert_eq!(IntLattice::from_i64(&[&[1, 2], &[2, 4]], &[]), Err(Error::Degenerate));
        assert!(matches!(
            IntLattice::from_i64(&[&[1, 2]], &[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pair_examples() {
        let l = lat(&[&[2]], &["x"]);
        assert_eq!(pair(&vec(&l, &[1]), &vec(&l, &[1])).unwrap(), BigInt::from(2));

        let q = lat(&[&[4, 5], &[5, 2]], &["f4", "f2"]);
        let x = vec(&q, &[3, -1]);
        assert_eq!(pair(&x, &x).unwrap(), BigInt::from(8));
        assert_eq!(pair(&x, &LatticeVector::zero(&q)).unwrap(), BigInt::zero());
    }

    #[test]
    fn pair_rejects_mismatch() {
        let a = lat(&[&[2]], &[]);
        let b = lat(&[&[4]], &[]);
        assert_eq!(pair(&vec(&a, &[1]), &vec(&b, &[1])), Err(Error::IncompatibleLattices));
    }

    #[test]
    fn primitivity() {
        let l = lat(&[&[1, 0], &[0, 1]], &[]);
        assert!(is_primitive(&vec(&l, &[1, 2])).unwrap());
        assert!(!is_primitive(&vec(&l, &[2, 4])).unwrap());
        assert!(!is_primitive(&vec(&l, &[0, 3])).unwrap());
        assert_eq!(is_primitive(&vec(&l, &[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn reflection_examples() {
        let l = polar2_bb();
        let v = vec(&l, &[1, 0, -1]);
        assert_eq!(reflect(&v, &v).unwrap(), v);

        let c = vec(&l, &[0, 1, -1]);
        let r = reflect(&v, &c).unwrap();
        assert_eq!(r, vec(&l, &[3, -1, -2]));
        assert_eq!(r.to_string(), "3f4 - f2 - 2e");

        // (x, v) = 4x0 + 5x1 + 2x2; (1, 0, -2) is orthogonal to v
        let o = vec(&l, &[1, 0, -2]);
        assert_eq!(pair(&o, &v).unwrap(), BigInt::zero());
        assert_eq!(reflect(&v, &o).unwrap(), o.neg());

        assert_eq!(reflect(&c, &v), Err(Error::ReflectionNorm));
    }

    #[test]
    fn complement_in_mukai_lattice() {
        let muk = lat(&[&[0, 0, -1], &[0, 8, 0], &[-1, 0, 0]], &["1", "H", "eta"]);
        let v = vec(&muk, &[2, 1, 2]);
        let perp = orthogonal_complement(&muk, std::slice::from_ref(&v)).unwrap();
        assert_eq!(perp.len(), 2);
        assert!(same_span(&perp, &[v, vec(&muk, &[1, 0, -1])]));
    }

    #[test]
    fn complement_edge_cases() {
        let h = lat(&[&[0, 1], &[1, 0]], &[]);
        let z = LatticeVector::zero(&h);
        let full = orthogonal_complement(&h, &[z]).unwrap();
        assert!(same_span(&full, &[vec(&h, &[1, 0]), vec(&h, &[0, 1])]));
        assert_eq!(orthogonal_complement(&h, &[]).unwrap().len(), 2);

        let iso = orthogonal_complement(&h, &[vec(&h, &[1, 0])]).unwrap();
        assert_eq!(iso, vec![vec(&h, &[1, 0])]);
    }

    #[test]
    fn complement_of_isotropic_vector_by_brute_force() {
        // every small vector orthogonal to (1,0) in the hyperbolic plane is a multiple of (1,0)
        let h = lat(&[&[0, 1], &[1, 0]], &[]);
        let e = vec(&h, &[1, 0]);
        for a in -5..=5 {
            for b in -5..=5 {
                let x = vec(&h, &[a, b]);
                if pair(&x, &e).unwrap().is_zero() {
                    assert_eq!(b, 0);
                }
            }
        }
    }

    #[test]
    fn quotient_square_examples() {
        // degree-8 algebraic Mukai lattice, v = (2, H, 2), w = (1, 0, -1)
        let muk = lat(&[&[0, 0, -1], &[0, 8, 0], &[-1, 0, 0]], &[]);
        let v = vec(&muk, &[2, 1, 2]);
        let w = vec(&muk, &[1, 0, -1]);
        assert_eq!(quotient_square(&v, &w).unwrap(), BigInt::from(2));
        assert_eq!(quotient_square(&v, &v).unwrap(), BigInt::zero());
        assert_eq!(
            quotient_square(&v, &w.add(&v).unwrap()).unwrap(),
            quotient_square(&v, &w).unwrap()
        );
        assert!(matches!(quotient_square(&w, &v), Err(Error::Precondition(_))));
        assert!(matches!(
            quotient_square(&v, &vec(&muk, &[1, 0, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn intersect_rational_examples() {
        let z2 = lat(&[&[1, 0], &[0, 1]], &[]);
        assert_eq!(
            intersect_rational(&z2, &[rat(&z2, &[(1, 2), (1, 2)])]).unwrap(),
            vec![vec(&z2, &[1, 1])]
        );
        assert!(intersect_rational(&z2, &[]).unwrap().is_empty());
        let full = intersect_rational(&z2, &[rat(&z2, &[(1, 3), (0, 1)]), rat(&z2, &[(2, 7), (5, 3)])]).unwrap();
        assert_eq!(full, vec![vec(&z2, &[1, 0]), vec(&z2, &[0, 1])]);
    }

    #[test]
    fn saturation_index_of_doubled_vector() {
        let z2 = lat(&[&[1, 0], &[0, 3]], &[]);
        assert_eq!(saturation_index(&[vec(&z2, &[2, 4])]).unwrap(), BigInt::from(2));
        assert_eq!(saturation_index(&[vec(&z2, &[1, 4])]).unwrap(), BigInt::one());
    }

    #[test]
    fn display_of_combinations() {
        let l = polar2_bb();
        assert_eq!(vec(&l, &[0, 0, 0]).to_string(), "0");
        assert_eq!(vec(&l, &[-1, 0, 1]).to_string(), "-f4 + e");
        assert_eq!(vec(&l, &[0, 2, 0]).to_string(), "2f2");
    }

    #[test]
    fn lattice_json_round_trip() {
        let l = polar2_bb();
        let s = serde_json::to_string(&*l).unwrap();
        assert_eq!(
            s,
            r#"{"rank":3,"gram":[["4","5","0"],["5","2","0"],["0","0","-2"]],"labels":["f4","f2","e"]}"#
        );
        let back: IntLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, *l);
        assert!(serde_json::from_str::<IntLattice>(r#"{"rank":1,"gram":[["0"]],"labels":[]}"#).is_err());
        let v = serde_json::to_string(&vec(&l, &[3, -1, -2])).unwrap();
        assert_eq!(v, r#"{"coords":["3","-1","-2"]}"#);
    }

    fn small_vec(rank: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-30i64..=30, rank)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pairing_is_symmetric(x in small_vec(3), y in small_vec(3)) {
            let l = polar2_bb();
            prop_assert_eq!(pair(&vec(&l, &x), &vec(&l, &y)).unwrap(), pair(&vec(&l, &y), &vec(&l, &x)).unwrap());
        }

        #[test]
        fn reflection_is_isometric_involution(x in small_vec(3), y in small_vec(3)) {
            let l = polar2_bb();
            let v = vec(&l, &[1, 0, -1]);
            let (x, y) = (vec(&l, &x), vec(&l, &y));
            let rx = reflect(&v, &x).unwrap();
            let ry = reflect(&v, &y).unwrap();
            prop_assert_eq!(reflect(&v, &rx).unwrap(), x.clone());
            prop_assert_eq!(pair(&rx, &ry).unwrap(), pair(&x, &y).unwrap());
        }

        #[test]
        fn complement_is_orthogonal_and_saturated(s in small_vec(3)) {
            let l = polar2_bb();
            let s = vec(&l, &s);
            let perp = orthogonal_complement(&l, std::slice::from_ref(&s)).unwrap();
            let expected_rank = if s.is_zero() { 3 } else { 2 };
            prop_assert_eq!(perp.len(), expected_rank);
            for x in &perp {
                prop_assert!(pair(x, &s).unwrap().is_zero());
            }
            let rows: IntMatrix = perp.iter().map(|v| v.coords().to_vec()).collect();
            prop_assert_eq!(linalg::maximal_minor_gcd(&rows), BigInt::one());
        }

        #[test]
        fn intersect_rational_matches_enumeration(
            num in proptest::collection::vec(-4i64..=4, 6),
            den in proptest::collection::vec(1i64..=4, 6),
            two in any::<bool>(),
        ) {
            let z3 = lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[]);
            let mut sub = vec![rat(&z3, &[(num[0], den[0]), (num[1], den[1]), (num[2], den[2])])];
            if two {
                sub.push(rat(&z3, &[(num[3], den[3]), (num[4], den[4]), (num[5], den[5])]));
            }
            let got = intersect_rational(&z3, &sub).unwrap();
            let gen: Vec<Vec<i64>> = sub.iter().map(|r| to_i64(r.clear_denominators().coords())).collect();
            let basis: Vec<Vec<i64>> = got.iter().map(|g| to_i64(g.coords())).collect();
            prop_assert_eq!(basis.len(), rank_i64(&gen));
            for a in -10i64..=10 {
                for b in -10i64..=10 {
                    for c in -10i64..=10 {
                        let p = vec![a, b, c];
                        let mut with_p = gen.clone();
                        with_p.push(p.clone());
                        let in_rational_span = rank_i64(&with_p) == rank_i64(&gen);
                        prop_assert_eq!(in_rational_span, in_echelon_z_span(&basis, &p));
                    }
                }
            }
        }
    }

    fn to_i64(c: &[BigInt]) -> Vec<i64> {
        c.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    /// Rank by fraction-free elimination in i128; independent of `linalg`.
    fn rank_i64(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
            m.swap(rank, p);
            for i in (rank + 1)..m.len() {
                let (f, g) = (m[i][col], m[rank][col]);
                for j in 0..ncols {
                    m[i][j] = m[i][j] * g - m[rank][j] * f;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Membership in the integer span of a row-echelon basis by back substitution.
    fn in_echelon_z_span(basis: &[Vec<i64>], p: &[i64]) -> bool {
        let mut rest = p.to_vec();
        for row in basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            if rest[col] % row[col] != 0 {
                return false;
            }
            let q = rest[col] / row[col];
            for j in 0..rest.len() {
                rest[j] -= q * row[j];
            }
        }
        rest.iter().all(|&x| x == 0)
    }
}
