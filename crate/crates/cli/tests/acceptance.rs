//! Acceptance criteria. All comparisons are exact; each criterion also has a
//! wall-clock budget. Every test prints one `criterion NN: PASS|FAIL` line
//! (visible with `--nocapture`).

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hklat_core::lattice::{self, IntLattice, LatticeVector, RationalVector};
use hklat_core::mukai::{self, K3Model};
use hklat_core::twisted::{self, BField, H2Model, TwistedMukaiTriple};
use hklat_core::{brill_noether, fm, hilbert};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Runs `check`, prints the verdict line, and fails on a wrong answer or a
/// blown budget.
fn criterion(id: u32, name: &str, budget: Duration, check: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget;
    let verdict = if result.is_ok() && in_budget { "PASS" } else { "FAIL" };
    let detail = match &result {
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    println!("criterion {id:02}: {verdict} {name} [{:.3}s / {:.0}s] {detail}", elapsed.as_secs_f64(), budget.as_secs_f64());
    assert!(result.is_ok(), "criterion {id} failed: {detail}");
    assert!(in_budget, "criterion {id} exceeded its budget: {elapsed:?} > {budget:?}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(lo: u64, hi: u64) -> impl Iterator<Item = (u64, u64)> {
    (lo..=hi).flat_map(move |d| (lo..=hi).map(move |m| (d, m)))
}

const SECOND: Duration = Duration::from_secs(1);

#[test]
fn criterion_01_isotropy_of_v() {
    criterion(1, "v = (m, H, (d-1)m) is isotropic", SECOND, || {
        for (d, m) in grid(2, 12) {
            let model = K3Model::of_scenario(d, m).map_err(|e| e.to_string())?;
            let v = mukai::scenario_vector(&model, d, m);
            let sq = mukai::mukai_pair(&v, &v).map_err(|e| e.to_string())?;
            ensure(sq.is_zero(), || format!("(d, m) = ({d}, {m}): v^2 = {sq}"))?;
        }
        Ok("(d, m) in [2, 12]^2".into())
    });
}

#[test]
fn criterion_02_brauer_order() {
    criterion(2, "gcd(r, H.gamma, s) = m", SECOND, || {
        for (d, m) in grid(2, 12) {
            let model = K3Model::of_scenario(d, m).map_err(|e| e.to_string())?;
            let g = mukai::fine_moduli_gcd(&mukai::scenario_vector(&model, d, m)).map_err(|e| e.to_string())?;
            ensure(g == BigInt::from(m), || format!("(d, m) = ({d}, {m}): gcd {g}"))?;
        }
        Ok("(d, m) in [2, 12]^2".into())
    });
}

#[test]
fn criterion_03_moduli_degree_and_base() {
    criterion(3, "Hhat^2 = 2d-2, dim |Hhat| = d, dim V = 2d", SECOND, || {
        for (d, m) in grid(2, 12) {
            let r = fm::replay_theorem(d, m).map_err(|e| e.to_string())?;
            let dd = BigInt::from(d);
            ensure(r.hhat_square == BigInt::from(2 * d - 2), || format!("({d}, {m}): Hhat^2 = {}", r.hhat_square))?;
            ensure(r.base_dim == dd, || format!("({d}, {m}): base {}", r.base_dim))?;
            ensure(r.dim_v == BigInt::from(2 * d), || format!("({d}, {m}): dim V {}", r.dim_v))?;
        }
        Ok("(d, m) in [2, 12]^2".into())
    });
}

/// Primitive `(a, b)`, `0 < a ≤ bound`, `|b| ≤ bound`, with `a²n = (2d−2)b²`,
/// ordered as the solver orders them.
fn brute_force_isotropic(n: u64, d: u64, bound: u64) -> Vec<(i64, i64)> {
    let k = 2 * (d - 1);
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in 0..=bound {
            if a * a * n == k * b * b && num_integer::gcd(a, b) == 1 {
                out.push((a as i64, b as i64));
                out.push((a as i64, -(b as i64)));
            }
        }
    }
    out
}

#[test]
fn criterion_04_isotropic_solver_vs_oracle() {
    criterion(4, "isotropic classes match brute force", Duration::from_secs(30), || {
        let mut count = 0;
        for n in (2..=400u64).step_by(2) {
            for d in 2..=12u64 {
                let got: Vec<(i64, i64)> = hilbert::primitive_isotropic_classes(n, d)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|s| (i64::try_from(&s.a).unwrap(), i64::try_from(&s.b).unwrap()))
                    .collect();
                let want = brute_force_isotropic(n, d, 200);
                ensure(got == want, || format!("(n, d) = ({n}, {d}): {got:?} vs {want:?}"))?;
                count += 1;
            }
        }
        let w = hilbert::primitive_isotropic_classes(18, 5).map_err(|e| e.to_string())?;
        let shown: Vec<String> = w.iter().map(|s| s.cls.to_string()).collect();
        ensure(shown == ["2h + 3e", "2h - 3e"], || format!("(18, 5): {shown:?}"))?;
        Ok(format!("{count} (n, d) pairs, (18, 5) -> 2h ± 3e"))
    });
}

#[test]
fn criterion_05_fibration_class() {
    criterion(5, "fibration class h - me", SECOND, || {
        for (d, m) in grid(2, 10) {
            let n = u64::try_from(mukai::scenario_degree(d, m)).unwrap();
            let c = hilbert::fibration_class(n, d).map_err(|e| e.to_string())?;
            ensure(c.coords() == [BigInt::from(1), BigInt::from(-(m as i64))], || format!("({d}, {m}): {c}"))?;
            ensure(c.square().is_zero(), || format!("({d}, {m}): not isotropic"))?;
        }
        for d in 2..=10 {
            let c = hilbert::fibration_class(2 * d - 2, d).map_err(|e| e.to_string())?;
            ensure(c.to_string() == "h - e", || format!("degree {}: {c}", 2 * d - 2))?;
        }
        Ok("(d, m) in [2, 10]^2 and the degree-(2d-2) case".into())
    });
}

#[test]
fn criterion_06_rank2_reflection_identity() {
    criterion(6, "reflection identity in the rank-2 scenario", SECOND, || {
        for (d, m) in grid(2, 10) {
            let bb = hilbert::polar2_lattice(d, m).map_err(|e| e.to_string())?;
            let (f, f2, e) = (bb.base_class(0), bb.base_class(1), bb.e());
            let mm = BigInt::from(m);
            let root = f.sub(&e).unwrap();
            let image = lattice::reflect(&root, &f2.sub(&e).unwrap()).map_err(|e| e.to_string())?;
            let degree_class = f.scale(&(&mm + 1)).sub(&f2).unwrap();
            let expected = degree_class.sub(&e.scale(&mm)).unwrap();
            ensure(image == expected, || format!("({d}, {m}): {image} vs {expected}"))?;
            ensure(degree_class.square() == mukai::scenario_degree(d, m), || format!("({d}, {m}): q = {}", degree_class.square()))?;
        }
        Ok("(d, m) in [2, 10]^2".into())
    });
}

fn random_vector(rng: &mut StdRng, l: &Arc<IntLattice>) -> LatticeVector {
    LatticeVector::new(l, (0..l.rank()).map(|_| BigInt::from(rng.gen_range(-10_000i64..=10_000))).collect()).unwrap()
}

#[test]
fn criterion_07_reflection_involution() {
    criterion(7, "reflections are pairing-preserving involutions", Duration::from_secs(5), || {
        let mut rng = StdRng::seed_from_u64(7);
        let mut roots = Vec::new();
        for (d, m) in grid(2, 4) {
            let bb = hilbert::polar2_lattice(d, m).unwrap();
            roots.push(bb.base_class(0).sub(&bb.e()).unwrap());
            let model = K3Model::of_scenario(d, m).unwrap();
            // (1, 0, -1) has Mukai square 2
            let r = mukai::MukaiVector::from_i64(&model, 1, &[0], -1).unwrap();
            roots.push(r.to_lattice_vector(&model).unwrap());
        }
        for root in &roots {
            ensure(root.square() == BigInt::from(2), || format!("{root} is not a root"))?;
            let l = root.lattice().clone();
            let mut prev = random_vector(&mut rng, &l);
            for _ in 0..1000 {
                let x = random_vector(&mut rng, &l);
                let rx = lattice::reflect(root, &x).map_err(|e| e.to_string())?;
                let rp = lattice::reflect(root, &prev).map_err(|e| e.to_string())?;
                ensure(lattice::reflect(root, &rx).unwrap() == x, || format!("{root}: not an involution on {x}"))?;
                ensure(lattice::pair(&rx, &rp).unwrap() == lattice::pair(&x, &prev).unwrap(), || format!("{root}: pairing changed"))?;
                prev = x;
            }
        }
        Ok(format!("{} lattices x 1000 vectors", roots.len()))
    });
}

#[test]
fn criterion_08_brill_noether_certificates() {
    criterion(8, "rho triple = (1, <0, <0)", SECOND, || {
        for (d, m) in grid(2, 20) {
            let cert = brill_noether::certify_serre(d, m).map_err(|e| e.to_string())?;
            let [a, b, c] = cert.rho();
            ensure(*a == BigInt::from(1) && b.is_negative() && c.is_negative(), || format!("({d}, {m}): ({a}, {b}, {c})"))?;
            ensure(cert.passed(), || format!("({d}, {m}): certificate not passed"))?;
        }
        Ok("(d, m) in [2, 20]^2".into())
    });
}

#[test]
fn criterion_09_serre_euler_characteristics() {
    criterion(9, "chi(E) = dm and v(E) = (m, H, (d-1)m)", SECOND, || {
        for (d, m) in grid(2, 20) {
            let chi = brill_noether::serre_euler_characteristics(d, m).map_err(|e| e.to_string())?;
            ensure(chi.chi_e == BigInt::from(d * m), || format!("({d}, {m}): chi(E) = {}", chi.chi_e))?;
            let model = K3Model::of_scenario(d, m).unwrap();
            let v = mukai::scenario_vector(&model, d, m);
            ensure(chi.mukai_vector == v, || format!("({d}, {m}): v(E) = {}", chi.mukai_vector))?;
            ensure(chi.chi_kz_from_sequence == chi.chi_kz_riemann_roch, || format!("({d}, {m}): chi(O_C(K-Z)) mismatch"))?;
        }
        Ok("(d, m) in [2, 20]^2".into())
    });
}

fn random_triple(rng: &mut StdRng, model: &H2Model) -> TwistedMukaiTriple {
    let mut q = || BigRational::new(rng.gen_range(-50i64..=50).into(), rng.gen_range(1i64..=12).into());
    let r = q();
    let c = (0..model.h2().rank()).map(|_| q()).collect();
    let s = q();
    TwistedMukaiTriple::new(r, RationalVector::new(model.h2(), c).unwrap(), s)
}

#[test]
fn criterion_10_twisted_lattice() {
    criterion(10, "B = T/m: minimal rank m, order m, exp(B) isometry", Duration::from_secs(5), || {
        let mut rng = StdRng::seed_from_u64(10);
        let model = Arc::new(H2Model::picard_plus_transcendental(BigInt::from(2), BigInt::from(-2)).unwrap());
        for m in 2..=12u64 {
            let mm = BigInt::from(m);
            let coords = vec![BigRational::zero(), BigRational::new(1.into(), mm.clone())];
            let b = BField::new(&model, RationalVector::new(model.h2(), coords).unwrap()).map_err(|e| e.to_string())?;
            let basis = twisted::twisted_algebraic_lattice(&b).map_err(|e| e.to_string())?;
            let min_rank = twisted::min_positive_rank(&basis);
            ensure(min_rank == mm, || format!("m = {m}: minimal rank {min_rank}"))?;
            let order = twisted::brauer_order(&b);
            ensure(order == mm, || format!("m = {m}: order {order}"))?;
            let triples: Vec<_> = (0..1000).map(|_| random_triple(&mut rng, &model)).collect();
            let images: Vec<_> = triples.iter().map(|t| twisted::exp_b_action(&b, t).unwrap()).collect();
            for i in 0..triples.len() {
                let j = (i + 1) % triples.len();
                let before = twisted::mukai_pair_rational(&triples[i], &triples[j]).unwrap();
                let after = twisted::mukai_pair_rational(&images[i], &images[j]).unwrap();
                ensure(before == after, || format!("m = {m}: pairing changed on triple {i}"))?;
            }
        }
        Ok("m in [2, 12], 1000 triples each".into())
    });
}

#[test]
fn criterion_11_fujiki_constants() {
    criterion(11, "Fujiki constants and isotropic chi", SECOND, || {
        let got: Vec<BigInt> = (1..=4).map(|d| hilbert::fujiki_constant(d).unwrap()).collect();
        ensure(got == [1, 3, 15, 105].map(BigInt::from), || format!("{got:?}"))?;
        for d in 2..=50u64 {
            let chi = hilbert::isotropic_chi(d).map_err(|e| e.to_string())?;
            ensure(chi == BigInt::from(d + 1), || format!("d = {d}: chi = {chi}"))?;
        }
        Ok("d <= 4 and d <= 50".into())
    });
}

fn hklat(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hklat")).args(args).output().expect("binary runs")
}

#[test]
fn criterion_12_cli_determinism_and_exit_codes() {
    criterion(12, "byte-identical JSON and exit-code contract", SECOND, || {
        let args = ["scenario", "--d", "3", "--m", "2", "--format", "json"];
        let (a, b) = (hklat(&args), hklat(&args));
        ensure(a.status.code() == Some(0) && b.status.code() == Some(0), || "scenario did not exit 0".into())?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())?;
        let doc: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
        ensure(doc["schema"] == "hklat/1", || "missing schema tag".into())?;

        let contract: [(&[&str], i32); 5] = [
            (&["isotropic", "--n", "8", "--d", "2"], 0),
            (&["isotropic", "--n", "4", "--d", "2"], 1),
            (&["scenario", "--degree", "6", "--d", "2"], 1),
            (&["scenario", "--d", "2", "--m", "1"], 2),
            (&["scenario", "--d", "3"], 2),
        ];
        for (args, code) in contract {
            let out = hklat(args);
            ensure(out.status.code() == Some(code), || format!("{args:?}: exit {:?}, expected {code}", out.status.code()))?;
        }
        Ok("2 identical runs, 5 exit codes".into())
    });
}
