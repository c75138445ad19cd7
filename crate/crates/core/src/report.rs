//! Report documents (schema `hklat/1`).
//!
//! Documents are `serde_json::Value` trees; object keys come out sorted and all
//! integers are decimal strings, so a fixed request always renders to the same
//! bytes. Every claim is tagged `computed` or `imported`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::brill_noether::{self, SerreCertificate, SerreEulerCharacteristics};
use crate::error::{Error, Result};
use crate::fm::{self, FMNumericReport, ImportedFact};
use crate::hilbert::{self, IsotropicSolution, IsotropicWitness, Polar2Scenario};
use crate::lattice::{LatticeVector, RationalVector};
use crate::mukai::MukaiVector;
use crate::serial::{int_string, rational_string, rational_strings};
use crate::twisted::{self, BField, H2Model, TwistedMukaiTriple};

pub const SCHEMA: &str = "hklat/1";

const POLAR2_GEOMETRY: ImportedFact = ImportedFact {
    claim: "|f_2d| and |f_(2d-2)| embed X (resp. give the double plane for d = 2) and all their curves are reduced and irreducible",
    basis: "surjectivity of the period map for lattice-polarized K3 surfaces; assumed, not checked",
};

const POLAR2_INVOLUTION: ImportedFact = ImportedFact {
    claim: "the residual-point involution of X^[d] acts on H^2 as the reflection in f_2d - e",
    basis: "O'Grady's computation of the Beauville involution; the reflection itself is computed",
};

const BN_GENERIC: ImportedFact = ImportedFact {
    claim: "smooth hyperplane sections of a generic X are Brill-Noether generic",
    basis: "Lazarsfeld's theorem",
};

const ZERO_SCHEME: ImportedFact = ImportedFact {
    claim: "a section of generic E vanishing at d-1 generic points vanishes exactly there",
    basis: "open genericity condition with no finite certificate",
};

fn int(x: &BigInt) -> Value {
    Value::String(int_string(x))
}

fn uint(x: u64) -> Value {
    Value::String(x.to_string())
}

fn lattice_vector(x: &LatticeVector) -> Value {
    json!({
        "coords": x.coords().iter().map(int).collect::<Vec<_>>(),
        "display": x.to_string(),
    })
}

fn mukai_vector(x: &MukaiVector) -> Value {
    json!({
        "r": int(&x.r),
        "c": x.c.coords().iter().map(int).collect::<Vec<_>>(),
        "s": int(&x.s),
        "display": x.to_string(),
    })
}

fn rational_vector(x: &RationalVector) -> Value {
    json!(rational_strings(x.coords()))
}

fn imported(f: &ImportedFact) -> Value {
    json!({ "claim": f.claim, "basis": f.basis, "status": "imported" })
}

fn computed(claim: &str, value: Value) -> Value {
    json!({ "claim": claim, "status": "computed", "value": value })
}

pub fn document(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

pub fn fm_json(r: &FMNumericReport) -> Value {
    json!({
        "d": uint(r.d),
        "m": uint(r.m),
        "n": int(&r.n),
        "v": mukai_vector(&r.v),
        "w": mukai_vector(&r.w),
        "v_perp_basis": r.v_perp_basis.iter().map(mukai_vector).collect::<Vec<_>>(),
        "hhat_square": int(&r.hhat_square),
        "hhat_generator": "+Hhat",
        "dim_V": int(&r.dim_v),
        "base_dim": int(&r.base_dim),
        "fiber_curve_genus": int(&r.fiber_curve_genus),
        "fibration_class": lattice_vector(&r.fibration_class),
        "brauer_order": int(&r.brauer_order),
        "k_component": r.k_component,
        "imported_facts": r.imported_facts.iter().map(imported).collect::<Vec<_>>(),
    })
}

pub fn serre_json(cert: &SerreCertificate, chi: &SerreEulerCharacteristics) -> Value {
    let p = &cert.params;
    json!({
        "params": {
            "d": uint(p.d), "m": uint(p.m), "n": int(&p.n),
            "g": int(&p.g), "c": int(&p.c), "delta": int(&p.delta),
        },
        "rho": cert.rho().iter().map(|x| int(x)).collect::<Vec<_>>(),
        "rho_conditions": ["rho_c^(m-1) = 1", "rho_(c-1)^(m-1) < 0", "rho_(c+1)^m < 0"],
        "chi": {
            "O_X": int(&chi.chi_o),
            "O_X(1)": int(&chi.chi_o1),
            "I_Z(1)": int(&chi.chi_iz1),
            "E": int(&chi.chi_e),
            "O_C(K-Z)": int(&chi.chi_kz_from_sequence),
            "O_C(K-Z)_riemann_roch": int(&chi.chi_kz_riemann_roch),
            "deg(K-Z)": int(&chi.deg_kz),
        },
        "mukai_vector_E": mukai_vector(&chi.mukai_vector),
        "pass": cert.passed(),
    })
}

pub fn polar2_json(s: &Polar2Scenario) -> Value {
    json!({
        "d": uint(s.d),
        "m": uint(s.m),
        "bb_lattice": serde_json::to_value(&**s.bb.full()).expect("lattice serializes"),
        "root": lattice_vector(&s.root),
        "root_square": int(&s.root.square()),
        "source": lattice_vector(&s.source),
        "reflected": lattice_vector(&s.reflected),
        "degree_class": lattice_vector(&s.degree_class),
        "degree_square": int(&s.degree_square),
        "degree_dot_f2d": int(&s.degree_dot_f2d),
        "effective_by_criterion": s.effective_by_criterion,
        "imported_facts": [imported(&POLAR2_GEOMETRY), imported(&POLAR2_INVOLUTION)],
    })
}

pub fn isotropic_json(n: u64, d: u64, witness: Option<IsotropicWitness>, sols: &[IsotropicSolution]) -> Value {
    json!({
        "n": uint(n),
        "d": uint(d),
        "exists": witness.is_some(),
        "witness": witness.map(|w| json!({ "k": uint(w.k), "m": uint(w.m) })),
        "classes": sols.iter().map(|s| json!({
            "a": int(&s.a),
            "b": int(&s.b),
            "class": lattice_vector(&s.cls),
        })).collect::<Vec<_>>(),
        "fibration_class": sols.iter().find(|s| s.b < BigInt::zero()).map(|s| lattice_vector(&s.cls)),
    })
}

/// `B = direction / denominator` in the basis `{P, T}` of a rank-2 model of `H²(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFieldSpec {
    pub denominator: BigInt,
    pub direction: Vec<BigInt>,
}

impl BFieldSpec {
    /// `B = T/m`.
    pub fn transcendental(m: u64) -> Self {
        BFieldSpec { denominator: BigInt::from(m), direction: vec![BigInt::zero(), BigInt::one()] }
    }
}

/// Demonstrates the twist on `Z·P ⊕ Z·T`, `P² = pic_square`, `T² = −2`.
/// The pairing check runs on the standard basis of `Z ⊕ h2 ⊕ Z`, which by
/// bilinearity proves that `exp(B)` is an isometry.
pub fn twisted_json(pic_square: &BigInt, spec: &BFieldSpec) -> Result<Value> {
    if spec.denominator.is_zero() {
        return Err(Error::OutOfRange("B-field denominator must be nonzero".into()));
    }
    let model = Arc::new(H2Model::picard_plus_transcendental(pic_square.clone(), BigInt::from(-2))?);
    let coords = spec
        .direction
        .iter()
        .map(|x| BigRational::new(x.clone(), spec.denominator.clone()))
        .collect();
    let b = BField::new(&model, RationalVector::new(model.h2(), coords)?)?;

    let basis = twisted::twisted_algebraic_lattice(&b)?;
    let order = twisted::brauer_order(&b);
    let min_rank = twisted::min_positive_rank(&basis);

    let total = model.total_lattice();
    let units: Vec<TwistedMukaiTriple> = (0..total.rank())
        .map(|i| TwistedMukaiTriple::from_integral(&LatticeVector::basis(total, i), &model))
        .collect::<Result<_>>()?;
    let mut isometry = true;
    for x in &units {
        for y in &units {
            let before = twisted::mukai_pair_rational(x, y)?;
            let after = twisted::mukai_pair_rational(&twisted::exp_b_action(&b, x)?, &twisted::exp_b_action(&b, y)?)?;
            isometry &= before == after;
        }
    }

    Ok(json!({
        "h2_model": serde_json::to_value(&**model.h2()).expect("lattice serializes"),
        "b_field": rational_vector(b.vec()),
        "b_square": rational_string(&b.square()),
        "twisted_basis": basis.iter().map(lattice_vector).collect::<Vec<_>>(),
        "twisted_rank": basis.len().to_string(),
        "min_positive_rank": int(&min_rank),
        "brauer_order": int(&order),
        "min_rank_equals_order": min_rank == order,
        "exp_b_isometry_on_basis": isometry,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioRequest {
    pub d: u64,
    pub m: u64,
    pub polar2: bool,
    pub b_field: Option<BFieldSpec>,
}

/// The whole numeric story for `n = (2d−2)m²` in one document.
pub fn scenario_document(req: &ScenarioRequest) -> Result<Value> {
    let (d, m) = (req.d, req.m);
    let fm = fm::replay_theorem(d, m)?;
    let cert = brill_noether::certify_serre(d, m)?;
    let chi = brill_noether::serre_euler_characteristics(d, m)?;
    let spec = req.b_field.clone().unwrap_or_else(|| BFieldSpec::transcendental(m));
    let twisted = twisted_json(&fm.hhat_square, &spec)?;
    let sections_at_d = brill_noether::section_count(d, m, d)?;

    let mut facts = vec![
        computed("n = (2d-2)m^2", int(&fm.n)),
        computed("v = (m, H, (d-1)m) is isotropic", json!(true)),
        computed("order of the Brauer class = gcd(r, H.gamma, s)", int(&fm.brauer_order)),
        computed("v^perp is spanned by v and (1, 0, 1-d)", json!(true)),
        computed("Hhat^2 on the moduli K3 M", int(&fm.hhat_square)),
        computed("dim V = w^2 + 2", int(&fm.dim_v)),
        computed("dim |Hhat| = Hhat^2/2 + 1", int(&fm.base_dim)),
        computed("fibration class", json!(fm.fibration_class.to_string())),
        computed("Brill-Noether numbers (rho_c^(m-1), rho_(c-1)^(m-1), rho_(c+1)^m)", json!(cert.rho().iter().map(|x| int(x)).collect::<Vec<_>>())),
        computed("chi(E) = dm", int(&chi.chi_e)),
        computed("v(E)", json!(chi.mukai_vector.to_string())),
        computed("h0(E ⊗ I_xi) for xi of length d", int(&sections_at_d)),
        computed("minimal positive rank of a B-twisted algebraic class", twisted["min_positive_rank"].clone()),
        computed("k in phi(w) = (0, Hhat, k)", json!(fm::K_UNDETERMINED)),
    ];
    facts.extend(fm.imported_facts.iter().map(imported));
    facts.push(imported(&BN_GENERIC));
    facts.push(imported(&ZERO_SCHEME));

    let mut body = json!({
        "params": { "d": uint(d), "m": uint(m), "n": int(&fm.n), "g": int(&cert.params.g), "c": int(&cert.params.c) },
        "fm": fm_json(&fm),
        "serre": serre_json(&cert, &chi),
        "twisted": twisted,
        "isotropic_chi": int(&hilbert::isotropic_chi(d)?),
        "fujiki_constant": int(&hilbert::fujiki_constant(d)?),
        "facts": facts,
        "pass": cert.passed(),
    });
    if req.polar2 {
        let p = hilbert::polar2_scenario(d, m)?;
        body["polar2"] = polar2_json(&p);
    }
    Ok(document("scenario", body))
}

/// Indented `key: value` rendering of a document.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_) | Value::Bool(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
