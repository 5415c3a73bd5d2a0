//! Acceptance gate: eight criteria, one PASS/FAIL line each. Runs without the
//! libtest harness so the report is always printed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use hsymp::bordism::{compose, reduce, relation_space, BordismRelation};
use hsymp::hermsymp::{intersection_dim, HermitianSymplecticSpace, Lagrangian};
use hsymp::linalg::max_abs;
use hsymp::maslov::{
    eta_correction_rhs, m_invariant, m_invariant_detailed, triple_index, triple_sum,
};
use hsymp::sample;
use hsymp::torus::{torus_m_closed_form, torus_m_generic, IntegerPair};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = hsymp::cli::run(
        std::iter::once("hsymp").chain(args.iter().copied()),
        &mut out,
        &mut errs,
    );
    if code != 0 {
        return Err(format!(
            "{args:?} exited with {code}: {}",
            String::from_utf8_lossy(&errs)
        ));
    }
    Ok(String::from_utf8(out).unwrap())
}

fn trefoil_golden() -> Outcome {
    let first = run_cli(&["trefoil", "--t", "1/5"])?;
    let expected = "t = 1/5\n(phi, psi) = (1/5, -7/10)\ncohomology = (0, 0, 0)\ncondition = true\n(m, n) = (3, -2)\ncs = 7/10\n";
    check(first == expected, || {
        format!("trefoil --t 1/5 printed {first:?}")
    })?;
    let second = run_cli(&["trefoil", "--t", "2/5"])?;
    let expected = "t = 2/5\n(phi, psi) = (2/5, -19/10)\ncohomology = (0, 0, 0)\ncondition = true\n(m, n) = (7, -5)\ncs = 3/10\n";
    check(second == expected, || {
        format!("trefoil --t 2/5 printed {second:?}")
    })?;
    let diff = run_cli(&["rho-diff", "--t1", "1/5", "--t2", "2/5"])?;
    check(diff.ends_with("rho_diff = 3/5\n"), || {
        format!("rho-diff printed {diff:?}")
    })?;
    Ok("cs = 7/10, 3/10; rho difference 3/5".into())
}

fn torus_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7045);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    while points < 200 {
        let mut draw = || rng.random_range(-5i64..=5);
        let (a, b, big_a, big_b) = (draw(), draw(), draw(), draw());
        if (a, b) == (0, 0) || (big_a, big_b) == (0, 0) {
            continue;
        }
        let t = 10f64.powf(rng.random_range(-1.0..=1.0));
        let x = IntegerPair::new(a, b).map_err(err)?;
        let y = IntegerPair::new(big_a, big_b).map_err(err)?;
        let closed = torus_m_closed_form(x, y, t).map_err(err)?;
        let generic = torus_m_generic(x, y, t).map_err(err)?;
        let delta = (closed - generic).abs();
        check(delta < 1e-9, || {
            format!("({a},{b},{big_a},{big_b}, t={t}): {closed} vs {generic}")
        })?;
        worst = worst.max(delta);
        points += 1;
    }
    let x = IntegerPair::new(1, 1).map_err(err)?;
    let y = IntegerPair::new(1, 0).map_err(err)?;
    let spot_closed = torus_m_closed_form(x, y, 1.0).map_err(err)?;
    let spot_generic = torus_m_generic(x, y, 1.0).map_err(err)?;
    check(
        (spot_closed + 0.5).abs() < 1e-10 && (spot_generic + 0.5).abs() < 1e-10,
        || format!("spot value {spot_closed} / {spot_generic}"),
    )?;
    Ok(format!(
        "{points} points, max delta {worst:.2e}; spot value -0.5 on both paths"
    ))
}

fn metric_dependence() -> Outcome {
    let x = IntegerPair::new(1, 1).map_err(err)?;
    let y = IntegerPair::new(1, 0).map_err(err)?;
    let mut values = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let generic = torus_m_generic(x, y, t).map_err(err)?;
        let closed = torus_m_closed_form(x, y, t).map_err(err)?;
        check((generic - closed).abs() < 1e-9, || {
            format!("paths disagree at t = {t}")
        })?;
        values.push(generic);
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            check((values[i] - values[j]).abs() > 1e-3, || {
                format!("values not separated: {values:?}")
            })?;
        }
    }
    Ok(format!(
        "m(0.5), m(1), m(2) = {:.6}, {:.6}, {:.6}",
        values[0], values[1], values[2]
    ))
}

fn triple_integrality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x51);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 1..=4 {
        for _ in 0..250 {
            let s = Arc::new(sample::space(k, &mut rng));
            let [u, v, w] = [0, 1, 2].map(|_| sample::lagrangian(&s, &mut rng));
            let sum = triple_sum(&u, &v, &w).map_err(err)?;
            let off = (sum - sum.round()).abs();
            check(off < 1e-9, || format!("dim {}: sum {sum}", 2 * k))?;
            worst = worst.max(off);
            count += 1;
        }
    }
    Ok(format!(
        "{count} triples in dims 2..8, max distance to an integer {worst:.2e}"
    ))
}

fn m_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x3e);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    let mut engineered = [0usize; 3];
    for i in 0..600 {
        let k = 1 + i % 4;
        let s = Arc::new(sample::space(k, &mut rng));
        let v = sample::lagrangian(&s, &mut rng);
        let w = sample::lagrangian(&s, &mut rng);
        let vw = m_invariant(&v, &w).map_err(err)?;
        let wv = m_invariant(&w, &v).map_err(err)?;
        let g = m_invariant(
            &v.gamma_image().map_err(err)?,
            &w.gamma_image().map_err(err)?,
        )
        .map_err(err)?;
        let dev = (vw + wv).abs().max((vw - g).abs());
        check(dev < 1e-9, || {
            format!("pair {i}: m(V,W) = {vw}, m(W,V) = {wv}, m(gV,gW) = {g}")
        })?;
        worst = worst.max(dev);
        let vv = m_invariant(&v, &v).map_err(err)?;
        check(vv == 0.0, || format!("pair {i}: m(V,V) = {vv}"))?;

        let d = (i / 4) % 3;
        let d = d.min(k);
        let w2 = sample::lagrangian_meeting(&v, d, 0.05, &mut rng).map_err(err)?;
        let detail = m_invariant_detailed(&v, &w2).map_err(err)?;
        let multiplicity = detail
            .eigenvalues
            .iter()
            .filter(|z| (*z + 1.0).norm() <= 1e-8)
            .count();
        let dim = intersection_dim(&v, &w2).map_err(err)?;
        check(dim == d && multiplicity == d, || {
            format!("pair {i}: engineered {d}, rank {dim}, multiplicity {multiplicity}")
        })?;
        engineered[d] += 1;
        pairs += 1;
    }
    Ok(format!(
        "{pairs} transverse pairs (max deviation {worst:.2e}); {pairs} intersection checks with d = 0/1/2: {}/{}/{}",
        engineered[0], engineered[1], engineered[2]
    ))
}

fn random_relation(
    src: &Arc<HermitianSymplecticSpace>,
    tgt: &Arc<HermitianSymplecticSpace>,
    rng: &mut StdRng,
) -> Result<BordismRelation, String> {
    let l = sample::lagrangian(&relation_space(src, tgt), rng);
    BordismRelation::new(Arc::clone(src), Arc::clone(tgt), l.basis().clone()).map_err(err)
}

fn bordism_laws() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xb0);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..240 {
        let ks = if i < 16 {
            [4, 4, 4]
        } else {
            [0, 1, 2].map(|_| rng.random_range(1..=4))
        };
        let h: Vec<_> = ks
            .iter()
            .map(|&k| Arc::new(sample::space(k, &mut rng)))
            .collect();
        let r1 = random_relation(&h[0], &h[1], &mut rng)?;
        let r2 = random_relation(&h[1], &h[2], &mut rng)?;
        let w = sample::lagrangian(&h[0], &mut rng);

        let step = reduce(&r1, &w).map_err(err)?;
        check(step.dim() == ks[1] && step.omega_residual() < 1e-10, || {
            format!("instance {i}: reduce is not Lagrangian")
        })?;

        let id = BordismRelation::identity(Arc::clone(&h[0]));
        let fixed = reduce(&id, &w).map_err(err)?.distance(&w).map_err(err)?;
        let neutral = compose(&id, &r1).map_err(err)?.distance(&r1).map_err(err)?;

        let direct = reduce(&compose(&r1, &r2).map_err(err)?, &w).map_err(err)?;
        let stepwise = reduce(&r2, &step).map_err(err)?;
        let functorial = direct.distance(&stepwise).map_err(err)?;

        let dev = fixed.max(neutral).max(functorial);
        check(dev < 1e-8, || {
            format!("instance {i} dims {ks:?}: cylinder {fixed:.2e}/{neutral:.2e}, functoriality {functorial:.2e}")
        })?;
        worst = worst.max(dev);
        count += 1;
    }
    Ok(format!(
        "{count} instances up to 8+8+8, max subspace distance {worst:.2e}"
    ))
}

fn omega_only() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x0e);
    let mut count = 0;
    let mut m_changed = 0;
    for i in 0..120 {
        let k = 1 + i % 4;
        let s = Arc::new(sample::space(k, &mut rng));
        let map = sample::omega_preserving(&s, 0.7, &mut rng);
        let s2 = Arc::new(s.pullback(&map).map_err(err)?);
        let same_omega = max_abs(&(s2.omega_matrix() - s.omega_matrix()));
        let gram_change = max_abs(&(s2.gram() - s.gram()));
        check(same_omega < 1e-9 && gram_change > 1e-3, || {
            format!("triple {i}: omega residual {same_omega:.2e}, gram change {gram_change:.2e}")
        })?;
        let bases: Vec<_> = (0..3)
            .map(|_| sample::lagrangian(&s, &mut rng).basis().clone())
            .collect();
        let a: Vec<_> = bases
            .iter()
            .map(|b| Lagrangian::new(&s, b.clone()))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let b: Vec<_> = bases
            .iter()
            .map(|x| Lagrangian::new(&s2, x.clone()))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let sa = triple_index(&a[0], &a[1], &a[2]).map_err(err)?;
        let sb = triple_index(&b[0], &b[1], &b[2]).map_err(err)?;
        check(sa == sb, || format!("triple {i}: {sa} vs {sb}"))?;
        let m1 = m_invariant(&a[0], &a[1]).map_err(err)?;
        let m2 = m_invariant(&b[0], &b[1]).map_err(err)?;
        if (m1 - m2).abs() > 1e-6 {
            m_changed += 1;
        }
        count += 1;
    }
    Ok(format!(
        "{count} triples agree; m(U, V) itself changed in {m_changed} of them"
    ))
}

fn eta_chain() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x32);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..240 {
        let k = 1 + i % 4;
        let s = Arc::new(sample::space(k, &mut rng));
        let [vx, vy, wx, wy] = [0, 1, 2, 3].map(|_| sample::lagrangian(&s, &mut rng));
        let rhs = eta_correction_rhs(&vx, &vy, &wx, &wy).map_err(err)?;
        let dev = (rhs.chain - rhs.integer as f64).abs();
        check(dev < 1e-8, || {
            format!("tuple {i}: chain {} vs {}", rhs.chain, rhs.integer)
        })?;
        worst = worst.max(dev);
        count += 1;
    }
    Ok(format!("{count} 4-tuples, max deviation {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "trefoil Chern-Simons golden values",
            Duration::from_millis(100),
            trefoil_golden,
        ),
        (
            "torus closed form vs generic m",
            Duration::from_secs(5),
            torus_oracle,
        ),
        (
            "metric dependence of m on the torus",
            Duration::from_secs(1),
            metric_dependence,
        ),
        (
            "triple index integrality",
            Duration::from_secs(30),
            triple_integrality,
        ),
        (
            "m antisymmetry, gamma invariance, intersections",
            Duration::from_secs(30),
            m_identities,
        ),
        (
            "bordism reduction laws",
            Duration::from_secs(30),
            bordism_laws,
        ),
        (
            "triple index depends only on omega",
            Duration::from_secs(10),
            omega_only,
        ),
        (
            "eta correction chain identity",
            Duration::from_secs(20),
            eta_chain,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed >= *limit => Err(format!("{detail}; too slow, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{}] {name} ({elapsed:.3?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({elapsed:.3?}): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
