//! Acceptance suite: one PASS/FAIL line per criterion. Criterion 9 is reported
//! but does not affect the exit status.

mod common;

use std::time::{Duration, Instant};

use bivfact::aplarith::{apl_div_trunc, apl_hensel};
use bivfact::facto::{check_recursion_volume, facto, TraceNode};
use bivfact::ffield::{PrimeField, UniPoly};
use bivfact::polygon::{lattice_length, minimal_lattice_length, volume, AffineMap, LatticePolygon};
use bivfact::recomb::{d_operator, factorization, g_mu, left_kernel, lift_and_prepare, phi_row, phi_setup};
use bivfact::slopecore::ypoly::{divides, is_separable_y};
use bivfact::slopecore::{average_slope, d_lambda, is_in_apl, lambda_parts, rat, tau_lambda, v_lambda, Val};
use bivfact::{BiPoly, Rat, Slope};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Inputs and traces shared between criteria 1, 5 and 6.
#[derive(Default)]
struct Shared {
    inputs: Vec<BiPoly>,
    traces: Vec<Vec<TraceNode>>,
}

fn criterion1(shared: &mut Shared) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut done = 0;
    let mut failures = Vec::new();
    while done < 300 {
        let p = if done % 2 == 0 { 101 } else { 65537 };
        let f = fp(p);
        let g = random_sparse(&mut rng, f, 6, 6, 5);
        let h = random_sparse(&mut rng, f, 6, 6, 5);
        let big = g.mul(&h);
        if !is_good_input(&big) {
            continue;
        }
        done += 1;
        match factorization(&big, 0) {
            Ok(r) => {
                let prod = product(f, &r.factors);
                if !equal_up_to_unit(&prod, &big) || !is_product_of_some(&g, &r.factors) || !is_product_of_some(&h, &r.factors) {
                    failures.push(format!("p={p} G={g} H={h}"));
                }
                shared.traces.push(r.trace);
            }
            Err(e) => failures.push(format!("p={p} G={g} H={h}: {e}")),
        }
        shared.inputs.push(big);
    }
    let el = start.elapsed();
    let pass = failures.is_empty() && el < Duration::from_secs(60);
    outcome(pass, format!("300 products over F_101/F_65537, {} failures, {:.1}s{}", failures.len(), el.as_secs_f64(), first(&failures)))
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn criterion2(shared: &mut Shared) -> Outcome {
    let mut checked = 0;
    let mut reducible = 0;
    let mut psi = 0;
    let mut failures = Vec::new();
    let mut run = |g: BiPoly, checked: &mut usize| {
        if !is_good_input(&g) {
            return;
        }
        *checked += 1;
        let expect = canonical(&brute_force_factor(&g));
        if expect.len() > 1 {
            reducible += 1;
        }
        match factorization(&g, 0) {
            Ok(r) => {
                psi += r.used_psi as usize;
                if canonical(&r.factors) != expect {
                    failures.push(format!("{g} over F_{}", g.field().modulus()));
                }
            }
            Err(e) => failures.push(format!("{g}: {e}")),
        }
        shared.inputs.push(g);
    };
    let f2 = fp(2);
    for idx in 0..(1u64 << 16) {
        run(poly_from_index(f2, idx, 3, 3), &mut checked);
    }
    let exhaustive = checked;
    let f3 = fp(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sampled = 0;
    while sampled < 2000 {
        let before = checked;
        run(poly_from_index(f3, rng.gen_range(0..3u64.pow(16)), 3, 3), &mut checked);
        sampled += checked - before;
    }
    outcome(
        failures.is_empty(),
        format!(
            "{exhaustive} inputs over F_2 (exhaustive) and {sampled} over F_3 (sampled), {reducible} reducible, psi used {psi} times, {} mismatches{}",
            failures.len(),
            first(&failures)
        ),
    )
}

/// `y^e + c x^k` with `gcd(e, k) = 1` plus terms strictly above that edge:
/// irreducible over `K((x))`.
fn random_branch(rng: &mut ChaCha8Rng, f: PrimeField) -> BiPoly {
    loop {
        let e = rng.gen_range(1..=3i64);
        let k = rng.gen_range(0..=4i64);
        if num_integer::gcd(e, k) != 1 {
            continue;
        }
        let mut g = BiPoly::monomial(f, e, 0, 1);
        g.add_term(0, k, rng.gen_range(1..f.modulus()));
        for _ in 0..rng.gen_range(0..3) {
            let i = rng.gen_range(0..e);
            // j e + i k > k e
            let jmin = (k * (e - i)) / e + 1;
            g.add_term(i, jmin + rng.gen_range(0..3), rng.gen_range(1..f.modulus()));
        }
        return g;
    }
}

fn relative(a: Val, b: Val) -> Option<Rat> {
    match (a, b) {
        (Val::Inf, _) => None,
        (Val::Finite(x), Val::Finite(y)) => Some(x - y),
        _ => unreachable!(),
    }
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut failures = Vec::new();
    let mut random_count = 0;
    let mut recover_count = 0;
    let mut checks = 0;
    // random monic non-degenerate inputs
    while random_count < 100 {
        let f = fp(if random_count % 2 == 0 { 101 } else { 65537 });
        let mut g = random_sparse(&mut rng, f, 5, 6, 6);
        let d = g.deg_y().unwrap();
        g = g.filter(|i, _| i < d).add(&BiPoly::monomial(f, d, 0, 1));
        if d < 2 || !is_good_input(&g) {
            continue;
        }
        random_count += 1;
        check_precision(&g, None, &mut failures, &mut checks);
    }
    while recover_count < 100 {
        let f = fp(if recover_count % 2 == 0 { 101 } else { 65537 });
        let parts: Vec<BiPoly> = (0..rng.gen_range(2..=4)).map(|_| random_branch(&mut rng, f)).collect();
        let big = product(f, &parts);
        if big.ord_y() != Some(0) || !is_separable_y(&big) || !is_nondegenerate(&big) {
            continue;
        }
        recover_count += 1;
        check_precision(&big, Some(&parts), &mut failures, &mut checks);
    }
    outcome(
        failures.is_empty(),
        format!(
            "{random_count} random monic + {recover_count} constructed inputs, {checks} (F, sigma) checks, {} failures{}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn is_nondegenerate(f: &BiPoly) -> bool {
    bivfact::polygon::is_degenerate(f).map(|r| !r.is_degenerate()).unwrap_or(false)
}

fn check_precision(f: &BiPoly, known: Option<&[BiPoly]>, failures: &mut Vec<String>, checks: &mut usize) {
    let field = f.field();
    let Ok(l) = average_slope(f) else { return };
    let m = lambda_parts(f, l).m;
    let vf = v_lambda(f, l);
    for k in 0..=8 {
        let sigma = m + rat(k, l.q());
        *checks += 1;
        let an = match facto(f, l, sigma, 0) {
            Ok(an) => an,
            Err(e) => {
                failures.push(format!("{f} lambda={l} sigma={sigma}: {e}"));
                continue;
            }
        };
        let residual = f.sub(&product(field, &an.factors));
        if let Some(rel) = relative(v_lambda(&residual, l), vf) {
            if rel <= sigma {
                failures.push(format!("{f} lambda={l} sigma={sigma}: residual {rel}"));
            }
        }
        if let Some(parts) = known {
            if an.factors.len() != parts.len() {
                failures.push(format!("{f}: {} analytic factors, expected {}", an.factors.len(), parts.len()));
                continue;
            }
            for fi in &an.factors {
                let best = parts
                    .iter()
                    .filter(|s| s.deg_y() == fi.deg_y())
                    .map(|s| relative(v_lambda(&fi.sub(s), l), v_lambda(s, l)))
                    .max_by(|a, b| match (a, b) {
                        (None, None) => std::cmp::Ordering::Equal,
                        (None, _) => std::cmp::Ordering::Greater,
                        (_, None) => std::cmp::Ordering::Less,
                        (Some(x), Some(y)) => x.cmp(y),
                    });
                match best {
                    Some(None) => {}
                    Some(Some(rel)) if rel > sigma - m => {}
                    other => failures.push(format!("{f} lambda={l} sigma={sigma}: factor {fi} off ({other:?})")),
                }
            }
        }
    }
}

fn kite_polygon(m: i64, n: i64) -> LatticePolygon {
    LatticePolygon::hull(&[(0, 0), (m, 0), (0, m), (n, n)])
}

/// Preimage of `Conv((0,2), (2,0), (2,kn), (0,kn+2))` under `(i, j) -> (2i + j - 2n, -i + kn)`.
fn sheared_strip_polygon(k: i64, n: i64) -> (LatticePolygon, AffineMap) {
    let tau = AffineMap::new([[2, 1], [-1, 0]], (-2 * n, k * n));
    let image = [(0, 2), (2, 0), (2, k * n), (0, k * n + 2)];
    let inv = tau.inverse();
    let pts: Vec<_> = image.iter().map(|&v| inv.apply_point(v)).collect();
    (LatticePolygon::hull(&pts), tau)
}

fn criterion4() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=6 {
        let p = LatticePolygon::hull(&[(0, 2), (2 * n, 0), (0, 2 * n), (2 * n, 2 * n)]);
        if lattice_length(&p) != 2 {
            failures.push(format!("notched square, n={n}: r={}", lattice_length(&p)));
        }
    }
    for (m, n) in [(4, 6), (3, 5), (6, 9)] {
        let p = kite_polygon(m, n);
        let g = num_integer::gcd(m, n);
        let r = lattice_length(&p);
        let (r0, maps) = minimal_lattice_length(&p).unwrap();
        let stated = AffineMap::new([[0, 1], [-1, 1]], (0, m));
        let stated_r = lattice_length(&p.transform(&stated));
        let listed = maps.iter().any(|t| t.m[0] == stated.m[0] && t.det() == stated.det());
        if r != m + g || r0 != g || stated_r != r0 || !listed {
            failures.push(format!("kite, (m,n)=({m},{n}): r={r} r0={r0} r(tau P)={stated_r} listed={listed}"));
        }
    }
    for (k, n) in [(3, 2), (4, 3)] {
        let (p, tau) = sheared_strip_polygon(k, n);
        let (r0, _) = minimal_lattice_length(&p).unwrap();
        let stated_r = lattice_length(&p.transform(&tau));
        if r0 != 2 || stated_r != 2 {
            failures.push(format!("sheared strip, (k,n)=({k},{n}): r0={r0} r(tau P)={stated_r}"));
        }
    }
    outcome(failures.is_empty(), format!("notched square, kite and sheared strip families, {} failures{}", failures.len(), first(&failures)))
}

fn criterion5(shared: &Shared) -> Outcome {
    let mut failures = Vec::new();
    let mut nodes = 0;
    for t in &shared.traces {
        nodes += t.len();
        if let Err(e) = check_recursion_volume(t) {
            failures.push(e);
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} traces, {nodes} nodes, {} violations{}", shared.traces.len(), failures.len(), first(&failures)),
    )
}

fn criterion6(shared: &Shared) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for f in &shared.inputs {
        let Ok(l) = average_slope(f) else { continue };
        let Ok(p) = bivfact::polygon::newton_polygon(f) else { continue };
        checked += 1;
        let v = volume(&p);
        let d = f.deg_y().unwrap();
        let w = (d_lambda(f, l).unwrap() - v_lambda(f, l).unwrap()) * d;
        if !(v <= w && w <= v * 2) {
            failures.push(format!("{f}: V={v} d(d-v)={w}"));
        }
    }
    outcome(failures.is_empty(), format!("{checked} inputs, {} violations{}", failures.len(), first(&failures)))
}

/// Random element of `A_lambda` with nonnegative exponents whose terms all have
/// weight at least `lambda * e`, with the term `y^e` present and y-degree
/// at most `e + over`.
fn random_apl(rng: &mut ChaCha8Rng, f: PrimeField, l: Slope, e: i64, over: i64, terms: usize) -> BiPoly {
    let mut g = BiPoly::monomial(f, e, 0, rng.gen_range(1..f.modulus()));
    for _ in 0..terms {
        let i = rng.gen_range(0..=e + over);
        let jmin = ((l.m() * (e - i)).max(0) + l.q() - 1) / l.q();
        let j = jmin + rng.gen_range(0..4);
        g.add_term(i, j, rng.gen_range(1..f.modulus()));
    }
    tau_lambda(&g, l)
}

fn random_slope(rng: &mut ChaCha8Rng) -> Slope {
    Slope::new(rng.gen_range(0..6), rng.gen_range(1..5))
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let f = fp(65537);
    for _ in 0..1000 {
        let l = random_slope(&mut rng);
        let e1 = rng.gen_range(0..6);
        let num = random_apl(&mut rng, f, l, e1, 2, 6);
        let e2 = rng.gen_range(0..4);
        let den = random_apl(&mut rng, f, l, e2, 0, 4);
        let n = rng.gen_range(1..10);
        match apl_div_trunc(&num, &den, l, n) {
            Ok((q, r)) => {
                let resid = num.sub(&q.mul(&den)).sub(&r);
                let ok_deg = r.is_zero() || r.deg_y() < den.deg_y();
                let ok_val = resid.v0().is_none_or(|v| v >= num.v0().unwrap() + n);
                if !ok_deg || !ok_val || !is_in_apl(&q, l) || !is_in_apl(&r, l) {
                    failures.push(format!("division {num} by {den} at lambda={l}, n={n}"));
                }
            }
            Err(e) => failures.push(format!("division {num} by {den} at lambda={l}: {e}")),
        }
    }
    let mut hensel = 0;
    while hensel < 1000 {
        let l = random_slope(&mut rng);
        let q = l.q();
        let count = rng.gen_range(1..=3);
        let mut heads: Vec<UniPoly> = Vec::new();
        for _ in 0..count {
            let a = rng.gen_range(1..=2usize);
            let mut c: Vec<u64> = (0..a).map(|_| rng.gen_range(0..f.modulus())).collect();
            c.push(1);
            heads.push(UniPoly::new(f, c).inflate(q as usize));
        }
        let coprime = (0..count).all(|a| (a + 1..count).all(|b| heads[a].gcd(&heads[b]).is_one()));
        if !coprime {
            continue;
        }
        hensel += 1;
        let factors: Vec<BiPoly> = heads
            .iter()
            .map(|h| {
                let e = h.degree().unwrap() as i64;
                let mut g = BiPoly::from_y_poly(h);
                for _ in 0..3 {
                    let i = rng.gen_range(0..e);
                    let j = rng.gen_range(1..6);
                    if (i * l.m() - j).rem_euclid(q) == 0 {
                        g.add_term(i, j, rng.gen_range(1..f.modulus()));
                    }
                }
                g
            })
            .collect();
        let unit_c = rng.gen_range(1..f.modulus());
        let mut unit = BiPoly::constant(f, unit_c);
        for _ in 0..2 {
            let i = rng.gen_range(0..3);
            let j = rng.gen_range(1..6);
            if (i * l.m() - j).rem_euclid(q) == 0 {
                unit.add_term(i, j, rng.gen_range(1..f.modulus()));
            }
        }
        let big = unit.mul(&product(f, &factors));
        let n = rng.gen_range(1..12);
        match apl_hensel(&big, &heads, unit_c, l, n) {
            Ok((lifted, inf)) => {
                let back = inf.mul(&product(f, &lifted)).sub(&big).trunc_x(n);
                let same = lifted.iter().zip(&factors).all(|(a, b)| *a == b.trunc_x(n)) && inf == unit.trunc_x(n);
                let in_apl = lifted.iter().all(|g| is_in_apl(g, l)) && is_in_apl(&inf, l);
                if !back.is_zero() || !same || !in_apl {
                    failures.push(format!("hensel on {big} at lambda={l}, n={n}"));
                }
            }
            Err(e) => failures.push(format!("hensel on {big} at lambda={l}: {e}")),
        }
    }
    outcome(failures.is_empty(), format!("1000 divisions + 1000 lifts, {} failures{}", failures.len(), first(&failures)))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut positives = 0;
    let mut negatives = 0;
    while instances < 200 {
        let f = fp([101, 65537, 7][instances % 3]);
        let g = random_sparse(&mut rng, f, 3, 3, 3);
        let h = random_sparse(&mut rng, f, 3, 3, 3);
        let big = g.mul(&h);
        if !is_good_input(&big) || big.deg_x().unwrap() * big.deg_y().unwrap() > 200 {
            continue;
        }
        let Ok(lifted) = lift_and_prepare(&big, 0) else { continue };
        let Some(problem) = lifted.problem else { continue };
        instances += 1;
        let setup = phi_setup(&problem).unwrap();
        let s = problem.s();
        let rows: Vec<Vec<u64>> = problem.g_parts.iter().map(|g| phi_row(&setup, &problem, g).unwrap()).collect();
        let mut mus = left_kernel(f, &rows);
        for k in 0..s {
            let mut e = vec![0; s];
            e[k] = 1;
            mus.push(e);
        }
        for _ in 0..3 {
            mus.push((0..s).map(|_| rng.gen_range(0..f.modulus())).collect());
        }
        for mu in mus {
            let gm = g_mu(&problem, &mu);
            let row = phi_row(&setup, &problem, &gm).unwrap();
            let dm = d_operator(&gm, &problem.f);
            let dm = dm.shift(0, -dm.v0().unwrap_or(0).min(0));
            let vanishes = row.iter().all(|&c| c == 0);
            let divisible = divides(&problem.f, &dm);
            if vanishes {
                positives += 1;
            } else {
                negatives += 1;
            }
            if vanishes != divisible {
                failures.push(format!("{} mu={mu:?}: row zero {vanishes}, divides {divisible}", problem.f));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{instances} instances, {positives} vanishing rows, {negatives} non-vanishing, {} disagreements{}", failures.len(), first(&failures)),
    )
}

/// Dense random polynomial on the lattice points of `Conv((0,1), (n,0), (0,n), (n,n))`.
fn notched_square_summand(rng: &mut ChaCha8Rng, f: PrimeField, n: i64) -> BiPoly {
    let mut g = BiPoly::zero(f);
    for i in 0..=n {
        for j in 0..=n {
            if n * j + i >= n {
                g.add_term(i, j, rng.gen_range(1..f.modulus()));
            }
        }
    }
    g
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = fp(65537);
    let mut times = Vec::new();
    for n in [8, 16, 32] {
        let big = loop {
            let g = notched_square_summand(&mut rng, f, n).mul(&notched_square_summand(&mut rng, f, n));
            if is_good_input(&g) {
                break g;
            }
        };
        let start = Instant::now();
        let ok = factorization(&big, 0).map(|r| r.factors.len() == 2).unwrap_or(false);
        let el = start.elapsed().as_secs_f64();
        if !ok {
            return outcome(false, format!("n={n}: factorization did not return the two summands"));
        }
        times.push((n, el));
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].1 / w[0].1.max(1e-6)).collect();
    let pass = ratios.iter().all(|&r| r <= 3.0);
    let shown: Vec<String> = times.iter().map(|(n, t)| format!("n={n}: {t:.3}s")).collect();
    outcome(pass, format!("{}; ratios {:?}", shown.join(", "), ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()))
}

fn main() {
    // ACCEPTANCE_ONLY=3,7 runs a subset (criteria 5 and 6 need 1 and 2).
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let wanted = |k: u32| only.as_ref().is_none_or(|o| o.contains(&k));
    let mut shared = Shared::default();
    let mut gating_failed = false;
    let mut report = |k: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        if !wanted(k) {
            return;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {k}: {} - {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if k != 9 && !o.pass {
            gating_failed = true;
        }
    };
    report(1, "round-trip factorization", &mut || criterion1(&mut shared));
    report(2, "brute-force oracle over F_2 and F_3", &mut || criterion2(&mut shared));
    report(3, "analytic precision contract", &mut criterion3);
    report(4, "polygon test vectors", &mut criterion4);
    report(5, "recursion volume law", &mut || criterion5(&shared));
    report(6, "good slope bound", &mut || criterion6(&shared));
    report(7, "A_lambda division and lifting", &mut criterion7);
    report(8, "divisibility window soundness", &mut criterion8);
    report(9, "notched square timing (non-gating)", &mut criterion9);
    if gating_failed {
        std::process::exit(1);
    }
}
