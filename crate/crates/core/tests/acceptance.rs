//! End-to-end acceptance checks. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::collections::BTreeMap;
use std::time::Instant;

use qbv_core::feyn::phi::verify_phi_between;
use qbv_core::feyn::{
    build_afeyn_qbv, build_afeyn_qbv_with, build_feyn_bv, compare_cohomology_between, top_weight,
    verify_phie_truncated, GraphComplex, LegNorm, Truncation,
};
use qbv_core::fmorph::{f_image, verify_f, Cogenerator};
use qbv_core::linalg::{cohomology_dims, fmt_rational, verify_d_squared, RankMode};
use qbv_core::psi::{p_identity_sweep, p_polynomial, recursion_sweep, tau_bracket, MultiIndex};
use qbv_core::qbv::{verify_homotopy_relations, QElement};
use qbv_core::{Label, Result};

const CASES: [(u32, u32); 8] = [
    (0, 4),
    (0, 5),
    (0, 6),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
];
const MODE: RankMode = RankMode::Verified { seed: 0x5eed };

struct Case {
    g: u32,
    n: u32,
    w: i32,
    bv: GraphComplex,
    q: GraphComplex,
}

/// Betti numbers of M_{0,n}: the coefficients of ∏_{k=2}^{n−2} (1 + k t).
fn m0n_betti(n: u32) -> Vec<u64> {
    let mut p = vec![1u64];
    for k in 2..=n as u64 - 2 {
        let mut next = vec![0u64; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i] += c;
            next[i + 1] += k * c;
        }
        p = next;
    }
    p
}

/// Genus zero: the weight-W piece is H^{n−3−W/2}(M_{0,n}), found in
/// degree −k with k = n−3+W/2.
fn genus_zero_oracle(n: u32, w: i32) -> BTreeMap<i32, usize> {
    let d = n as i32 - 3 - w / 2;
    let b = m0n_betti(n);
    [(n as i32 - 3 + w / 2, b[d as usize] as usize)]
        .into_iter()
        .collect()
}

fn report(name: &str, ok: bool, detail: String, t: Instant) -> bool {
    let v = if ok { "PASS" } else { "FAIL" };
    println!("{name} {v}  {detail}  ({:.1}s)", t.elapsed().as_secs_f64());
    ok
}

fn build_cases() -> Result<Vec<Case>> {
    let mut out = Vec::new();
    for (g, n) in CASES {
        for w in [0, 2] {
            out.push(Case {
                g,
                n,
                w,
                bv: build_feyn_bv(g, n, w)?,
                q: build_afeyn_qbv(g, n, top_weight(g, n) - w)?,
            });
        }
    }
    Ok(out)
}

fn ac1(cases: &[Case]) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for c in cases {
        if !verify_d_squared(&c.bv.complex) || !verify_d_squared(&c.q.complex) {
            bad.push(format!("({},{}) W={}", c.g, c.n, c.w));
        }
    }
    // the larger v-degree truncation of the Q side must agree with the default one
    for (g, n) in [(0, 4), (1, 1), (1, 2), (2, 0)] {
        for w in [0, 2] {
            let wp = top_weight(g, n) - w;
            let full = build_afeyn_qbv_with(g, n, wp, Truncation::VDegree(w as u32 / 2))?;
            let small = build_afeyn_qbv(g, n, wp)?;
            if !verify_d_squared(&full.complex)
                || cohomology_dims(&full.complex, MODE)? != cohomology_dims(&small.complex, MODE)?
            {
                bad.push(format!("truncations ({g},{n}) W={w}"));
            }
        }
    }
    let detail = format!("{} complexes, 8 truncation cross-checks", 2 * cases.len());
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            detail
        } else {
            bad.join("; ")
        },
    ))
}

fn ac7(cases: &[Case]) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for c in cases {
        let cmp = compare_cohomology_between(&c.bv, &c.q, MODE)?;
        let mut ok = cmp.equal;
        if c.g == 0 {
            ok &= cmp.feyn_bv == genus_zero_oracle(c.n, c.w);
        }
        if !ok {
            bad.push(format!(
                "({},{}) W={}: {:?} vs {:?}",
                c.g, c.n, c.w, cmp.feyn_bv, cmp.afeyn_qbv
            ));
        }
    }
    let detail = format!(
        "{} tables equal, genus 0 matches M_0,n Betti numbers",
        cases.len()
    );
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            detail
        } else {
            bad.join("; ")
        },
    ))
}

fn ac8(cases: &[Case]) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for c in cases {
        let r = verify_phi_between(&c.bv, &c.q, LegNorm::Factorial, MODE)?;
        if !r.passed() {
            bad.push(format!(
                "({},{}) W={}: chain_map={} weights={} quasi_iso={}",
                c.g, c.n, c.w, r.chain_map, r.weights, r.quasi_iso
            ));
        }
    }
    let detail = format!(
        "{} maps: chain maps, weight-complementary, quasi-isomorphisms",
        cases.len()
    );
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            detail
        } else {
            bad.join("; ")
        },
    ))
}

fn ac9() -> Result<(bool, String)> {
    let labels = |n: u32| (1..=n).map(Label).collect::<Vec<_>>();
    let p3 = p_polynomial(3, &labels(3))?.to_string();
    let p4 = p_polynomial(4, &labels(4))?.to_string();
    let f = f_image(&Cogenerator::DeltaStar(Label(1), Label(2)))?;
    let u = QElement::u(1, Label(1), Label(2))?;
    let tau = fmt_rational(&tau_bracket(&MultiIndex::new(vec![3]))?);
    let ok = p3 == "1" && p4 == "-(v1+v2+v3+v4)" && f == u && tau == "1";
    Ok((
        ok,
        format!(
            "p_3 = {p3}, p_4 = {p4}, f(Δ*) = u: {}, ⟨τ_0^3⟩ = {tau}",
            f == u
        ),
    ))
}

fn run() -> Result<bool> {
    let mut all = true;
    assert_eq!(m0n_betti(5), vec![1, 5, 6]);
    assert_eq!(m0n_betti(6), vec![1, 9, 26, 24]);

    let t = Instant::now();
    let cases = build_cases()?;
    println!(
        "built {} complex pairs ({:.1}s)",
        cases.len(),
        t.elapsed().as_secs_f64()
    );

    let t = Instant::now();
    let (ok, d) = ac1(&cases)?;
    all &= report("AC1", ok, format!("d² = 0: {d}"), t);

    let t = Instant::now();
    let r = verify_homotopy_relations(8, 3, 4);
    let tuples: u64 = r.stats.iter().map(|s| s.tuples).sum();
    let d = format!("homotopy relations, arity ≤ 8, v-degree ≤ 3, u-power ≤ 4: {tuples} tuples");
    all &= report("AC2", r.passed(), d, t);

    let t = Instant::now();
    let r = recursion_sweep(8, 4);
    let d = format!(
        "recursions, n ≤ 8, a,b,c ≤ 4: {} + {} instances",
        r.asym_checked, r.sym_checked
    );
    all &= report("AC3", r.passed(), d, t);

    let t = Instant::now();
    let rows = p_identity_sweep(7)?;
    let pairs: usize = rows.iter().map(|r| r.pairs).sum();
    all &= report(
        "AC4",
        rows.iter().all(|r| r.passed),
        format!("p_n identity, |A| ≤ 7: {pairs} pairs"),
        t,
    );

    let t = Instant::now();
    let rows = verify_f(7)?;
    let ok = rows.len() == 5 && rows.iter().all(|r| r.c_case && r.e_case && r.paths_agree);
    all &= report(
        "AC5",
        ok,
        "f chain map, arity ≤ 7, both code paths agree".into(),
        t,
    );

    let t = Instant::now();
    let r = verify_phie_truncated(6)?;
    let d = format!(
        "edge complex N=6: {} strata, {} kernels",
        r.strata.len(),
        r.kernels.len()
    );
    all &= report("AC6", r.passed() && r.kernels.len() == 6, d, t);

    let t = Instant::now();
    let (ok, d) = ac7(&cases)?;
    all &= report("AC7", ok, d, t);

    let t = Instant::now();
    let (ok, d) = ac8(&cases)?;
    all &= report("AC8", ok, d, t);

    let t = Instant::now();
    let (ok, d) = ac9()?;
    all &= report("AC9", ok, d, t);

    Ok(all)
}

fn main() {
    match run() {
        Ok(true) => println!("acceptance: all criteria pass"),
        Ok(false) => {
            println!("acceptance: FAILED");
            std::process::exit(1);
        }
        Err(e) => {
            println!("acceptance: error: {e}");
            std::process::exit(1);
        }
    }
}
