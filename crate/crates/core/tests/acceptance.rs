//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs with `cargo test -p dsiep --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;

use dsiep::balance::{argmax, balance_family, first_negative, required_row_sum};
use dsiep::matrix::{rat_matrix, FloatMatrix, RatMatrix};
use dsiep::orthogonal::{sum_deviation, target_coefficients};
use dsiep::par::{self, Execution};
use dsiep::poly::{charpoly_f64, coeff_residual, Poly};
use dsiep::rational::{frac, from_usize, int, Rational};
use dsiep::stochastic::frobenius_inner;
use dsiep::{random, *};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: dsiep::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn skewed_stochastic() -> RatMatrix {
    rat_matrix(&[&[(1, 3), (1, 3), (1, 3)], &[(1, 4), (1, 4), (1, 2)], &[(1, 6), (1, 6), (2, 3)]])
}

fn skewed_balanced_at_minus_half() -> RatMatrix {
    rat_matrix(&[&[(1, 4), (1, 4), (0, 1)], &[(1, 6), (1, 6), (1, 6)], &[(1, 12), (1, 12), (1, 3)]])
}

fn slack_stochastic() -> RatMatrix {
    rat_matrix(&[&[(2, 3), (1, 3), (0, 1)], &[(1, 3), (2, 3), (0, 1)], &[(1, 2), (1, 2), (0, 1)]])
}

fn slack_cospectral_ds() -> RatMatrix {
    rat_matrix(&[&[(1, 2), (1, 6), (1, 3)], &[(1, 6), (1, 2), (1, 3)], &[(1, 3), (1, 3), (1, 3)]])
}

fn poly(c: &[(i64, i64)]) -> Poly {
    Poly::new(c.iter().map(|&(p, q)| frac(p, q)).collect())
}

fn first_sweep_error(results: Vec<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    results.into_iter().enumerate().try_for_each(|(k, r)| r.map_err(|e| format!("instance {k}: {e}")))
}

fn c1_balance_example() -> Outcome {
    let a = skewed_stochastic();
    let stats = ok(column_stats(&a))?;
    ensure(stats.sums == vec![frac(3, 4), frac(3, 4), frac(3, 2)], || format!("column sums {:?}", stats.sums))?;
    let y = ok(y_threshold(&a))?;
    ensure(y == frac(-1, 3), || format!("y_threshold {y}"))?;
    let rep = ok(balance_minimal(&a))?;
    ensure(rep.b_min == skewed_balanced_at_minus_half(), || format!("B_min\n{}", rep.b_min))?;
    ensure(rep.epsilon_threshold == frac(-1, 2), || "epsilon threshold".into())?;
    let cp = ok(charpoly(&rep.b_min))?;
    ensure(cp == poly(&[(0, 1), (1, 8), (-3, 4), (1, 1)]), || format!("charpoly(X) = {cp}"))?;
    let s = ok(shift(&rep.b_min, &frac(1, 2)))?;
    let class = ok(classify(&s))?;
    ensure(class.tag == StochTag::DoublyStochastic, || format!("shifted class {class}"))?;
    let cp = ok(charpoly(&s))?;
    ensure(cp == Poly::from_roots(&[int(1), int(0), frac(1, 4)]), || format!("charpoly(shifted) = {cp}"))?;
    Ok("x=(3/4,3/4,3/2) y_threshold=-1/3 X exact, charpoly(X)=x^3-3/4x^2+1/8x".into())
}

fn c2_cospectral_example() -> Outcome {
    let a = slack_stochastic();
    ensure(ok(column_slack_condition(&a))?.holds, || "condition fails".into())?;
    let c = ok(cospectral_ds(&a))?;
    let n = ok(nearest_ds(&a))?;
    ensure(c == slack_cospectral_ds() && n == slack_cospectral_ds(), || format!("cospectral_ds\n{c}nearest_ds\n{n}"))?;
    let cp = ok(charpoly(&a))?;
    ensure(cp == poly(&[(0, 1), (1, 3), (-4, 3), (1, 1)]), || format!("charpoly(A) = {cp}"))?;
    ensure(ok(cospectral(&a, &slack_cospectral_ds()))?, || "not cospectral".into())?;
    Ok("B exact, charpoly x^3-4/3x^2+1/3x shared".into())
}

fn c3_boundary() -> Outcome {
    for n in 1..=8 {
        for r in [int(1), int(2), frac(5, 3)] {
            let a = RatMatrix::from_fn(n, n, |_, j| if j == 0 { r.clone() } else { int(0) });
            let k = ok(epsilon_threshold(&a))?;
            ensure(k == -r.clone(), || format!("n={n} r={r}: threshold {k}"))?;
        }
    }
    Ok("24 cases, threshold = -r exactly".into())
}

/// Least feasible `y_m` by scanning the literal inequalities: for j ≠ m,
/// `a_j + r + y_m - (Σ_{i≠m} x_i + x_j)/n ≥ 0`; for j = m, `a_m + y_m ≥ 0`.
/// Each row is `y_m ≥ bound_j`, so the least feasible value is the largest
/// bound, which is then confirmed against the inequalities themselves.
fn literal_offsets(a: &RatMatrix, r: &Rational, m: usize, y_m: &Rational) -> Vec<Rational> {
    let n = a.rows();
    let nr = from_usize(n);
    let x = a.col_sums();
    let others: Rational = (0..n).filter(|&i| i != m).fold(Rational::zero(), |s, i| s + &x[i]);
    (0..n)
        .map(|j| if j == m { y_m.clone() } else { r + y_m - (&others + &x[j]) / &nr })
        .collect()
}

fn literal_feasible(a: &RatMatrix, r: &Rational, m: usize, y_m: &Rational) -> bool {
    let y = literal_offsets(a, r, m, y_m);
    let mins = column_stats(a).unwrap().minima;
    mins.iter().zip(&y).all(|(aj, yj)| aj + yj >= Rational::zero())
}

fn brute_force_y(a: &RatMatrix, r: &Rational, m: usize) -> Rational {
    let zero_offsets = literal_offsets(a, r, m, &Rational::zero());
    let mins = column_stats(a).unwrap().minima;
    mins.iter()
        .zip(&zero_offsets)
        .map(|(aj, yj0)| -(aj + yj0))
        .fold(None::<Rational>, |best, b| Some(best.map_or(b.clone(), |c| if b > c { b } else { c })))
        .unwrap()
}

/// Exact solve of `n·y_j + x_j = r + Σ y` for `j ≠ m` with `y_m` given, by
/// fraction Gaussian elimination.
fn solve_system_offsets(a: &RatMatrix, r: &Rational, m: usize, y_m: &Rational) -> Vec<Rational> {
    let n = a.rows();
    let x = a.col_sums();
    let free: Vec<usize> = (0..n).filter(|&j| j != m).collect();
    let k = free.len();
    let mut aug: Vec<Vec<Rational>> = free
        .iter()
        .map(|&j| {
            let mut row: Vec<Rational> =
                free.iter().map(|&c| if c == j { from_usize(n - 1) } else { int(-1) }).collect();
            row.push(r + y_m - &x[j]);
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !aug[i][c].is_zero()).unwrap();
        aug.swap(c, p);
        let pivot = aug[c][c].clone();
        aug[c].iter_mut().for_each(|v| *v = &*v / &pivot);
        let prow = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != c {
                let f = row[c].clone();
                row.iter_mut().zip(&prow).for_each(|(v, pv)| *v -= &f * pv);
            }
        }
    }
    let mut y = vec![y_m.clone(); n];
    for (row, &j) in aug.iter().zip(&free) {
        y[j] = row[k].clone();
    }
    y
}

fn c4_balance_properties() -> Outcome {
    const COUNT: usize = 1200;
    let rs = [int(1), int(2), frac(1, 2), frac(5, 3), int(3)];
    let delta = frac(1, 1000);
    let results = par::map_range(Execution::default(), COUNT, |k| -> std::result::Result<(), String> {
        let mut g = random::instance_rng(0xC4, k);
        let n = g.random_range(1..=6);
        let r = rs[g.random_range(0..rs.len())].clone();
        let a = random::row_sum_matrix(&mut g, n, &r, 12);
        let nr = from_usize(n);
        let x = a.col_sums();
        let m = argmax(&x);

        let kappa = ok(epsilon_threshold(&a))?;
        let y_star = brute_force_y(&a, &r, m);
        ensure(literal_feasible(&a, &r, m, &y_star), || "oracle bound infeasible".into())?;
        ensure(!literal_feasible(&a, &r, m, &(&y_star - &delta)), || "oracle bound not least".into())?;
        let eps_oracle = &nr * &y_star + &x[m] - &r;
        ensure(kappa == eps_oracle, || format!("closed form {kappa} vs oracle {eps_oracle}"))?;
        ensure(ok(y_threshold(&a))? == y_star, || "y threshold".into())?;
        ensure(kappa >= -r.clone(), || "threshold below -r".into())?;

        let y_probe = &y_star + frac(1, 7);
        let offsets = ok(balance_offsets(&a, &y_probe))?;
        ensure(offsets == solve_system_offsets(&a, &r, m, &y_probe), || "offsets vs linear solve".into())?;
        ensure(offsets == literal_offsets(&a, &r, m, &y_probe), || "offsets vs literal formula".into())?;

        let mut eps_list = vec![kappa.clone(), &kappa + frac(1, 7)];
        if kappa <= Rational::zero() {
            eps_list.push(Rational::zero());
        }
        let cp_a = ok(charpoly(&a))?;
        for eps in &eps_list {
            let b = ok(balance(&a, eps))?;
            let total = &r + eps;
            ensure(
                b.row_sums().iter().chain(b.col_sums().iter()).all(|s| *s == total),
                || format!("sums at eps={eps}"),
            )?;
            ensure(b.is_nonnegative(), || format!("negative entry at eps={eps}"))?;
            let lhs = ok(charpoly(&b))?.mul(&Poly::linear(&r));
            let rhs = cp_a.mul(&Poly::linear(&total));
            ensure(lhs == rhs, || format!("charpoly identity at eps={eps}"))?;
        }
        let b_min = ok(balance(&a, &kappa))?;
        ensure(b_min.entries().iter().any(Zero::is_zero), || "no zero at threshold".into())?;
        let below = ok(balance_family(&a, &(&kappa - &delta)))?;
        ensure(first_negative(&below).is_some(), || "no negative below threshold".into())?;
        ensure(balance(&a, &(&kappa - &delta)).is_err(), || "balance accepted infeasible shift".into())?;
        Ok(())
    });
    first_sweep_error(results)?;
    Ok(format!("{COUNT} instances, closed forms match oracles"))
}

fn c5_nearness_properties() -> Outcome {
    const COUNT: usize = 1000;
    const SAMPLES: usize = 200;
    let results = par::map_range(Execution::default(), COUNT, |k| -> std::result::Result<(), String> {
        let mut g = random::instance_rng(0xC5, k);
        let n = g.random_range(1..=6);
        let a = random::rational_matrix(&mut g, n, 12, 9);
        let other = random::rational_matrix(&mut g, n, 12, 9);
        let lambda = random::rational_in(&mut g, 7, 5);
        let b = ok(nearest_ds(&a))?;
        ensure(ok(nearest_ds(&b))? == b, || "not idempotent".into())?;
        ensure(
            b.row_sums().iter().chain(b.col_sums().iter()).all(One::is_one),
            || "sums differ from 1".into(),
        )?;
        let mix = a.scale(&lambda).add(&other.scale(&(Rational::one() - &lambda))).unwrap();
        let lhs = ok(nearest_ds(&mix))?;
        let rhs = b.scale(&lambda).add(&ok(nearest_ds(&other))?.scale(&(Rational::one() - &lambda))).unwrap();
        ensure(lhs == rhs, || "not affine".into())?;

        let best = ok(frobenius_distance(&a, &b))?;
        let residual = a.sub(&b).unwrap();
        let j = ok(constant_j(n))?;
        for _ in 0..SAMPLES {
            let c = random::unit_sum_member(&mut g, n, 12, 9);
            let d = ok(frobenius_distance(&a, &c))?;
            ensure(d >= best, || "sampled member is closer".into())?;
            ensure(d != best || c == b, || "tie with a different member".into())?;
            let dir = c.sub(&j).unwrap();
            ensure(ok(frobenius_inner(&residual, &dir))?.is_zero(), || "residual not orthogonal".into())?;
        }
        Ok(())
    });
    first_sweep_error(results)?;
    Ok(format!("{COUNT} instances x {SAMPLES} sampled members"))
}

fn c6_rado_identity() -> Outcome {
    const COUNT: usize = 320;
    let results = par::map_range(Execution::default(), COUNT, |k| -> std::result::Result<(), String> {
        let mut g = random::instance_rng(0xC6, k);
        let n = g.random_range(2..=4);
        let r = 1 + k % 2;
        let p = random::invertible(&mut g, n, 6, 4);
        let d: Vec<Rational> = (0..n).map(|_| random::rational_in(&mut g, 5, 3)).collect();
        let a = p.mul(&RatMatrix::diagonal(&d)).unwrap().mul(&ok(linalg::inverse(&p))?).unwrap();
        let mut cols: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            cols.swap(i, g.random_range(0..=i));
        }
        cols.truncate(r);
        let x = RatMatrix::from_fn(n, r, |i, c| p.get(i, cols[c]).clone());
        let lambda: Vec<Rational> = cols.iter().map(|&c| d[c].clone()).collect();
        let cmat = random::rational_matrix(&mut g, n.max(r), 6, 5);
        let cmat = RatMatrix::from_fn(r, n, |i, j| cmat.get(i, j).clone());
        let u = ok(RadoUpdate::new(&a, x, cmat, lambda))?;
        ensure(ok(rado::rado_identity_holds(&a, &u))?, || "identity fails".into())
    });
    first_sweep_error(results)?;
    Ok(format!("{COUNT} eigen-systems"))
}

fn c7_eigenspace_check() -> Outcome {
    ensure(ok(unit_eigenspaces_nonorthogonal(&slack_stochastic()))?, || "slack example".into())?;
    for k in 0..100 {
        let mut g = random::instance_rng(0xC7, k);
        let n = g.random_range(1..=6);
        let d = random::doubly_stochastic(&mut g, n, 3);
        ensure(ok(unit_eigenspaces_nonorthogonal(&d))?, || format!("doubly stochastic #{k}"))?;
    }
    let jordan = rat_matrix(&[&[(1, 1), (1, 1)], &[(0, 1), (1, 1)]]);
    ensure(!ok(unit_eigenspaces_nonorthogonal(&jordan))?, || "Jordan block".into())?;
    // Controls that must be false: the block with itself and with a
    // scaled identity that does not contribute eigenvalue 1.
    let double = jordan.direct_sum(&jordan);
    ensure(!ok(unit_eigenspaces_nonorthogonal(&double))?, || "Jordan ⊕ Jordan".into())?;
    let scaled = jordan.direct_sum(&RatMatrix::identity(2).scale(&int(2)));
    ensure(!ok(unit_eigenspaces_nonorthogonal(&scaled))?, || "Jordan ⊕ 2I".into())?;
    // As stated: false for the block summed with identities.
    for k in 1..=3 {
        let sum = jordan.direct_sum(&RatMatrix::identity(k));
        ensure(!ok(unit_eigenspaces_nonorthogonal(&sum))?, || {
            format!(
                "Jordan ⊕ I_{k} returned true: e_{} lies in both unit eigenspaces (inner product 1)",
                k + 2
            )
        })?;
    }
    Ok("slack example, 100 doubly stochastic, Jordan block and its sums".into())
}

fn c8_float_realization() -> Outcome {
    const COUNT: usize = 200;
    let results = par::map_range(Execution::default(), COUNT, |k| -> std::result::Result<(), String> {
        let mut g = random::instance_rng(0xC8, k);
        let n = g.random_range(1..=10);
        let s = random::unit_disk_spectrum(&mut g, n);
        let basis = ok(OrthoBasis::canonical(n))?;
        let b0 = ok(realize_cospectral(&s, &basis))?;
        let dev = sum_deviation(&b0, 1.0);
        ensure(dev <= 1e-10, || format!("n={n}: sums deviate {dev:e}"))?;
        let target = ok(target_coefficients(&s))?;
        let res = coeff_residual(&ok(charpoly_f64(&b0))?, &target);
        ensure(res <= 1e-9, || format!("n={n}: charpoly residual {res:e}"))?;

        let nn = ok(realize_nonneg(&s, &basis))?;
        let min = nn.matrix.min_entry();
        ensure(min >= -1e-10, || format!("n={n}: entry {min:e}"))?;
        let dev = sum_deviation(&nn.matrix, 1.0 + nn.k);
        ensure(dev <= 1e-9, || format!("n={n}: shifted sums deviate {dev:e}"))?;

        if n >= 2 {
            let x = FloatMatrix::from_fn(n - 1, n - 1, |i, j| ((i * 31 + j * 17 + k) % 19) as f64 / 9.5 - 1.0);
            for basis in [basis.clone(), ok(OrthoBasis::random(n, k as u64))?] {
                let back = ok(extract(&basis, &ok(embed(&basis, &x))?))?;
                let err = back.max_abs_diff(&x).unwrap();
                ensure(err <= 1e-10, || format!("n={n}: round trip error {err:e}"))?;
            }
        }
        Ok(())
    });
    first_sweep_error(results)?;
    Ok(format!("{COUNT} spectra, n <= 10"))
}

fn c9_cross_module() -> Outcome {
    let mut fixtures = vec![skewed_stochastic(), slack_stochastic(), slack_cospectral_ds()];
    for k in 0..200 {
        let mut g = random::instance_rng(0xC9A, k);
        let n = g.random_range(1..=6);
        let a = random::stochastic(&mut g, n, 12);
        if column_slack_condition(&a).map(|r| r.holds).unwrap_or(false) {
            fixtures.push(a);
        }
    }
    for (k, a) in fixtures.iter().enumerate() {
        let c = ok(cospectral_ds(a))?;
        ensure(c == ok(nearest_ds(a))?, || format!("fixture {k}: cospectral_ds != nearest_ds"))?;
        ensure(c == ok(balance(a, &Rational::zero()))?, || format!("fixture {k}: != balance(A, 0)"))?;
        ensure(ok(cospectral(a, &c))?, || format!("fixture {k}: not cospectral"))?;
    }

    const COUNT: usize = 1000;
    let results = par::map_range(Execution::default(), COUNT, |k| -> std::result::Result<bool, String> {
        let mut g = random::instance_rng(0xC9B, k);
        let n = g.random_range(1..=6);
        let a = random::stochastic(&mut g, n, 12);
        let holds = ok(column_slack_condition(&a))?.holds;
        let feasible = ok(epsilon_threshold(&a))? <= Rational::zero();
        ensure(holds == feasible, || format!("instance {k}: condition {holds}, threshold <= 0 {feasible}"))?;
        ensure(ok(required_row_sum(&a))?.is_one(), || "generator".into())?;
        Ok(holds)
    });
    let mut holding = 0;
    for r in results {
        holding += usize::from(r?);
    }
    Ok(format!(
        "{} fixtures coherent; equivalence on {COUNT} stochastic ({holding} satisfy the condition)",
        fixtures.len()
    ))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1 balance worked example, exact", Duration::from_secs(1), c1_balance_example),
        ("2 cospectral worked example, exact", Duration::from_secs(1), c2_cospectral_example),
        ("3 boundary threshold -r", Duration::from_secs(10), c3_boundary),
        ("4 balancing property suite", Duration::from_secs(120), c4_balance_properties),
        ("5 nearest projection property suite", Duration::from_secs(120), c5_nearness_properties),
        ("6 rank-r replacement identity", Duration::from_secs(60), c6_rado_identity),
        ("7 unit eigenspace checker", Duration::from_secs(10), c7_eigenspace_check),
        ("8 orthogonal embedding realization", Duration::from_secs(60), c8_float_realization),
        ("9 cross-module coherence", Duration::from_secs(120), c9_cross_module),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
