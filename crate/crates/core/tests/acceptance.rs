//! Acceptance gate: one test per criterion, each printing a single
//! `[PASS]`/`[FAIL]` line (written straight to stdout so it survives output
//! capture) before asserting.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use pgm_core::completion::{
    feasibility_range, fischer_bound, max_det_completion, CompletionOptions,
};
use pgm_core::linalg::riemannian_dist;
use pgm_core::means::{
    agm_iteration, det_integral_identity, entropy_identities, geomean, geomean_properties_check,
    karcher_gradient, karcher_mean, AgmOptions, KarcherOptions, PropertyInputs, WeightVector,
};
use pgm_core::sweep::{run_sweep, SweepResult, SweepSpec};
use pgm_core::{Error, PartialMatrix, SymMatrix};
use rand::Rng;

struct Gate {
    id: u32,
    title: &'static str,
    started: Instant,
    limit: Duration,
    checks: Vec<(String, bool)>,
}

impl Gate {
    fn new(id: u32, title: &'static str, limit_secs: u64) -> Self {
        Gate {
            id,
            title,
            started: Instant::now(),
            limit: Duration::from_secs(limit_secs),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed();
        self.check(
            format!("runtime {:.2}s < {}s", elapsed.as_secs_f64(), self.limit.as_secs()),
            elapsed < self.limit,
        );
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(w, _)| w.as_str())
            .collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "[{verdict}] criterion {:>2}: {} ({} checks, {:.2}s)",
            self.id,
            self.title,
            self.checks.len(),
            elapsed.as_secs_f64()
        );
        for w in &failed {
            let _ = writeln!(out, "         failed: {w}");
        }
        drop(out);
        assert!(failed.is_empty(), "criterion {} failed: {failed:?}", self.id);
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

#[test]
fn criterion_01_non_completable_pattern() {
    let mut g = Gate::new(1, "partial PD on a non-chordal pattern without PD completion", 1);
    let n = common::non_chordal_n();
    g.check("N is partial PD", n.is_partial_pd(1e-10));
    g.check("pattern is not chordal", !n.pattern().is_chordal());
    g.check("pattern is not completable", !n.pattern().is_completable());
    let attempt = max_det_completion(&n, &CompletionOptions::default());
    g.check(
        format!("completion attempt fails: {attempt:?}"),
        matches!(attempt, Err(Error::NotCompletable(_))),
    );
    g.finish();
}

#[test]
fn criterion_02_three_by_three_intervals() {
    let mut g = Gate::new(2, "feasibility intervals and optima, 3x3 pair", 1);
    let ia = feasibility_range(&common::example1_a(), (0, 2)).unwrap();
    let ib = feasibility_range(&common::example1_b(), (0, 2)).unwrap();
    let s11 = 11f64.sqrt();
    g.check(format!("A lower {} = -10/3", ia.lower()), close(ia.lower(), -10.0 / 3.0, 1e-10));
    g.check(format!("A upper {} = 2", ia.upper()), close(ia.upper(), 2.0, 1e-10));
    g.check(
        format!("B lower {} = (-3-3√11)/5", ib.lower()),
        close(ib.lower(), (-3.0 - 3.0 * s11) / 5.0, 1e-10),
    );
    g.check(
        format!("B upper {} = (3√11-3)/5", ib.upper()),
        close(ib.upper(), (3.0 * s11 - 3.0) / 5.0, 1e-10),
    );
    let opts = CompletionOptions::default();
    let xa = max_det_completion(&common::example1_a(), &opts).unwrap().matrix.get(0, 2);
    let xb = max_det_completion(&common::example1_b(), &opts).unwrap().matrix.get(0, 2);
    g.check(format!("x* = {xa} = -2/3"), close(xa, -2.0 / 3.0, 1e-10));
    g.check(format!("y* = {xb} = -3/5"), close(xb, -3.0 / 5.0, 1e-10));
    g.finish();
}

#[test]
fn criterion_03_five_by_five_intervals() {
    let mut g = Gate::new(3, "feasibility intervals and optima, 5x5 pair", 1);
    let ia = feasibility_range(&common::example2_a(), (0, 4)).unwrap();
    let ib = feasibility_range(&common::example2_b(), (0, 4)).unwrap();
    let s1036 = 1036f64.sqrt();
    let s34 = 34f64.sqrt();
    g.check(
        format!("A lower {} = (10-√1036)/3", ia.lower()),
        close(ia.lower(), (10.0 - s1036) / 3.0, 1e-9),
    );
    g.check(
        format!("A upper {} = (10+√1036)/3", ia.upper()),
        close(ia.upper(), (10.0 + s1036) / 3.0, 1e-9),
    );
    g.check(
        format!("B lower {} = (4-√34)/9", ib.lower()),
        close(ib.lower(), (4.0 - s34) / 9.0, 1e-9),
    );
    g.check(
        format!("B upper {} = (4+√34)/9", ib.upper()),
        close(ib.upper(), (4.0 + s34) / 9.0, 1e-9),
    );
    let opts = CompletionOptions::default();
    let xa = max_det_completion(&common::example2_a(), &opts).unwrap().matrix.get(0, 4);
    let xb = max_det_completion(&common::example2_b(), &opts).unwrap().matrix.get(0, 4);
    g.check(format!("x* = {xa} = 10/13"), close(xa, 10.0 / 13.0, 1e-9));
    g.check(format!("y* = {xb} = 4/9"), close(xb, 4.0 / 9.0, 1e-9));
    g.finish();
}

#[test]
fn criterion_04_geometric_mean_golden_value() {
    let mut g = Gate::new(4, "A1 # A2 reproduces the displayed 4-decimal matrix", 1);
    let a1 = SymMatrix::from_rows([
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 5.0, 1.0, 1.0],
        [1.0, 1.0, 3.0, 1.0],
        [1.0, 1.0, 1.0, 2.0],
    ])
    .unwrap();
    let a2 = SymMatrix::from_rows([
        [1.0, -1.0, 1.0, 1.0],
        [-1.0, 5.0, 1.0, -1.0],
        [1.0, 1.0, 3.0, 1.0],
        [1.0, -1.0, 1.0, 2.0],
    ])
    .unwrap();
    let shown = [
        [0.8750, -0.0769, 1.0, 0.8750],
        [-0.0769, 4.1251, 1.0, -0.0769],
        [1.0, 1.0, 3.0, 1.0],
        [0.8750, -0.0769, 1.0, 1.8750],
    ];
    let m = geomean(&a1, &a2, 0.5).unwrap();
    for (i, row) in shown.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            g.check(
                format!("({}, {}) = {} vs {v}", i + 1, j + 1, m.get(i, j)),
                close(m.get(i, j), v, 5e-4),
            );
        }
    }
    g.finish();
}

#[test]
fn criterion_05_property_suite() {
    let mut g = Gate::new(5, "ten mean properties on random quadruples", 60);
    let mut rng = common::rng(5);
    for n in [2usize, 3, 5, 8] {
        let mut failures = [0usize; 10];
        for _ in 0..200 {
            let inputs = PropertyInputs {
                a: common::random_pd(&mut rng, n),
                b: common::random_pd(&mut rng, n),
                c: common::random_pd(&mut rng, n),
                d: common::random_pd(&mut rng, n),
                t: rng.random_range(0.0..=1.0),
                s: rng.random_range(0.0..=1.0),
                lambda: rng.random_range(0.0..=1.0),
                alpha: rng.random_range(0.1..10.0),
                beta: rng.random_range(0.1..10.0),
                congruence: common::random_invertible(&mut rng, n),
            };
            let report = geomean_properties_check(&inputs).unwrap();
            for (k, (_, ok)) in report.as_array().iter().enumerate() {
                if !ok {
                    failures[k] += 1;
                }
            }
        }
        let names = pgm_core::means::GeomeanProperties::default().as_array();
        for (k, (name, _)) in names.iter().enumerate() {
            g.check(
                format!("n = {n}: {name} failed on {} of 200", failures[k]),
                failures[k] == 0,
            );
        }
    }
    g.finish();
}

fn grid_oracle_max(a: &PartialMatrix, grid: usize) -> f64 {
    // With t = 0 the mean is the filled first operand itself.
    let fixed = PartialMatrix::from_full(&SymMatrix::identity(a.n()));
    let sweep = run_sweep(&SweepSpec {
        grid,
        t: 0.0,
        ..SweepSpec::new(a.clone(), fixed)
    })
    .unwrap();
    sweep
        .rows
        .iter()
        .filter_map(|r| r.det)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn criterion_06_max_det_certificate() {
    let mut g = Gate::new(6, "max-det certificate and grid optimality on random chordal instances", 120);
    let mut rng = common::rng(6);
    let opts = CompletionOptions::default();
    let (mut bad_cert, mut bad_grid, mut unconverged) = (0, 0, 0);
    for _ in 0..100 {
        let n = rng.random_range(3..=10);
        let pattern = common::random_chordal_with_missing(&mut rng, n, 1, 2);
        let a = common::random_partial_pd(&mut rng, &pattern);
        let r = max_det_completion(&a, &opts).unwrap();
        if !r.converged {
            unconverged += 1;
            continue;
        }
        let inv = r.matrix.inverse().unwrap();
        let inv_norm = inv.op_norm();
        if a
            .missing_positions()
            .iter()
            .any(|&(i, j)| inv.get(i, j).abs() > 1e-8 * inv_norm)
        {
            bad_cert += 1;
        }
        if grid_oracle_max(&a, 41) > r.determinant + 1e-9 {
            bad_grid += 1;
        }
    }
    g.check(format!("{unconverged} of 100 did not converge"), unconverged == 0);
    g.check(format!("{bad_cert} certificates above 1e-8 ‖M⁻¹‖"), bad_cert == 0);
    g.check(format!("{bad_grid} grid points beat the completion"), bad_grid == 0);
    g.finish();
}

#[test]
fn criterion_07_integral_identities() {
    let mut g = Gate::new(7, "determinant integral and entropy identities", 30);
    let mut rng = common::rng(7);
    let (mut worst_det, mut worst_a, mut worst_b) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let a0 = common::random_pd(&mut rng, n);
        let a1 = common::random_pd(&mut rng, n);
        let id = det_integral_identity(&a0, &a1, 201).unwrap();
        worst_det = worst_det.max(id.relative_gap());
        let e = entropy_identities(&a0, &a1, rng.random_range(0.0..=1.0), 201).unwrap();
        worst_a = worst_a.max(e.integral_gap());
        worst_b = worst_b.max(e.mean_gap());
    }
    g.check(format!("det identity worst relative gap {worst_det:e}"), worst_det <= 1e-8);
    g.check(format!("entropy (a) worst gap {worst_a:e}"), worst_a <= 1e-8);
    g.check(format!("entropy (b) worst gap {worst_b:e}"), worst_b <= 1e-8);
    g.finish();
}

#[test]
#[allow(clippy::needless_range_loop)]
fn criterion_08_karcher_mean() {
    let mut g = Gate::new(8, "Karcher mean via inductive means", 60);
    let mut rng = common::rng(8);
    let opts = KarcherOptions::default();

    let mut worst_pair = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let a = common::random_pd(&mut rng, n);
        let b = common::random_pd(&mut rng, n);
        let r = karcher_mean(&WeightVector::uniform(2).unwrap(), &[a.clone(), b.clone()], &opts)
            .unwrap();
        worst_pair = worst_pair.max(riemannian_dist(&r.mean, &geomean(&a, &b, 0.5).unwrap()).unwrap());
    }
    g.check(format!("two-point mean vs A#B worst δ {worst_pair:e}"), worst_pair <= 1e-7);

    let mut worst_comm = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let diags: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..n).map(|_| rng.random_range(0.1..10.0)).collect())
            .collect();
        let mats: Vec<SymMatrix> = diags.iter().map(|d| SymMatrix::from_diagonal(d)).collect();
        let r = karcher_mean(&WeightVector::uniform(3).unwrap(), &mats, &opts).unwrap();
        for k in 0..n {
            let expect = (diags[0][k] * diags[1][k] * diags[2][k]).cbrt();
            worst_comm = worst_comm.max((r.mean.get(k, k) - expect).abs());
        }
        worst_comm = worst_comm.max(karcher_gradient(&WeightVector::uniform(3).unwrap(), &mats, &r.mean).unwrap());
    }
    g.check(format!("commuting case worst error {worst_comm:e}"), worst_comm <= 1e-8);

    let mut worst_grad = 0.0f64;
    for _ in 0..30 {
        let n = rng.random_range(1..=5);
        let mats: Vec<SymMatrix> = (0..3).map(|_| common::random_pd(&mut rng, n)).collect();
        let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
        let w = WeightVector::normalized(&raw).unwrap();
        let r = karcher_mean(&w, &mats, &opts).unwrap();
        worst_grad = worst_grad.max(r.gradient_norm);
    }
    g.check(format!("random triples worst gradient {worst_grad:e}"), worst_grad <= 1e-6);
    g.finish();
}

#[test]
fn criterion_09_harmonic_arithmetic_iteration() {
    let mut g = Gate::new(9, "harmonic-arithmetic iteration converges to A#B inside the sandwich", 30);
    let mut rng = common::rng(9);
    let (mut worst, mut sandwich_breaks) = (0.0f64, 0usize);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let a = common::random_pd(&mut rng, n);
        let b = common::random_pd(&mut rng, n);
        let mid = geomean(&a, &b, 0.5).unwrap();
        let r = agm_iteration(&a, &b, &AgmOptions::default()).unwrap();
        worst = worst.max(riemannian_dist(&r.mean, &mid).unwrap());
        for (lo, hi) in r.iterates.iter().skip(1) {
            let below = (&mid - lo).min_eigenvalue().unwrap() >= -1e-9 * mid.op_norm().max(lo.op_norm());
            let above = (hi - &mid).min_eigenvalue().unwrap() >= -1e-9 * mid.op_norm().max(hi.op_norm());
            if !(below && above) {
                sandwich_breaks += 1;
            }
        }
    }
    g.check(format!("worst δ to A#B {worst:e}"), worst <= 1e-8);
    g.check(format!("{sandwich_breaks} iterates outside the sandwich"), sandwich_breaks == 0);
    g.finish();
}

fn spacing(sweep: &SweepResult, axis: usize) -> f64 {
    let iv = sweep.entries[axis].range;
    2.0 * iv.half_width * (1.0 - 1e-6) / 100.0
}

fn argmax_near(g: &mut Gate, label: &str, sweep: &SweepResult, x: f64, y: f64) {
    let best = sweep.argmax_det().unwrap();
    let (bx, by) = (best.x, best.y.unwrap());
    g.check(
        format!("{label}: argmax ({bx:.6}, {by:.6}) within a cell of ({x:.6}, {y:.6})"),
        (bx - x).abs() <= spacing(sweep, 0) && (by - y).abs() <= spacing(sweep, 1),
    );
}

#[test]
fn criterion_10_sweeps() {
    let mut g = Gate::new(10, "grid-101 sweeps of the four worked examples", 120);
    let sweep = |a: PartialMatrix, b: PartialMatrix| {
        run_sweep(&SweepSpec {
            grid: 101,
            ..SweepSpec::new(a, b)
        })
        .unwrap()
    };

    let s1 = sweep(common::example1_a(), common::example1_b());
    argmax_near(&mut g, "3x3 pair", &s1, -2.0 / 3.0, -3.0 / 5.0);

    let s2 = sweep(common::example2_a(), common::example2_b());
    argmax_near(&mut g, "5x5 pair", &s2, 10.0 / 13.0, 4.0 / 9.0);

    let s3 = sweep(common::identity_corner(10), common::identity_corner(10));
    argmax_near(&mut g, "I10 pair", &s3, 0.0, 0.0);
    let det = |p: usize, q: usize| s3.rows[p * 101 + q].det.unwrap();
    let mut worst_swap = 0.0f64;
    let mut worst_neg = 0.0f64;
    for p in 0..101 {
        for q in 0..101 {
            worst_swap = worst_swap.max((det(p, q) - det(q, p)).abs());
            worst_neg = worst_neg.max((det(p, q) - det(100 - p, 100 - q)).abs());
        }
    }
    g.check(format!("I10 symmetry (x,y)->(y,x) worst {worst_swap:e}"), worst_swap <= 1e-9);
    g.check(format!("I10 symmetry (x,y)->(-x,-y) worst {worst_neg:e}"), worst_neg <= 1e-9);

    let s4 = sweep(common::example4_a(), common::example4_b());
    argmax_near(&mut g, "3x3 two-entry", &s4, 0.0, 0.0);
    let mismatched = s4
        .rows
        .iter()
        .filter(|r| {
            let (x, y) = (r.x, r.y.unwrap());
            let stated = x.abs() < 2.0 && y.abs() < 2.0 && 6.0 + 3.0 * x * y - 2.0 * x * x - 2.0 * y * y > 0.0;
            stated != r.is_feasible()
        })
        .count();
    g.check(
        format!(
            "two-entry feasible cells vs 6+3xy-2x²-2y²>0: {mismatched} of {} differ",
            s4.rows.len()
        ),
        mismatched == 0,
    );
    g.finish();
}

#[test]
fn criterion_11_fischer_block_bound() {
    let mut g = Gate::new(11, "block-diagonal pattern attains the Fischer bound", 5);
    let opts = CompletionOptions::default();
    let mut rng = common::rng(11);
    let mut cases = vec![(common::example1_a(), common::example1_b())];
    for _ in 0..10 {
        let (n1, n2) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let p1 = common::random_chordal_pattern(&mut rng, n1, 0.6);
        let p2 = common::random_chordal_pattern(&mut rng, n2, 0.6);
        cases.push((
            common::random_partial_pd(&mut rng, &p1),
            common::random_partial_pd(&mut rng, &p2),
        ));
    }
    for (k, (a, b)) in cases.iter().enumerate() {
        let h = a.block_diagonal(b);
        let split = a.n();
        let fb = fischer_bound(&h, split, &opts).unwrap();
        let joint = max_det_completion(&h, &opts).unwrap().require_converged().unwrap();
        let off = (0..split)
            .flat_map(|i| (split..h.n()).map(move |j| (i, j)))
            .map(|(i, j)| joint.matrix.get(i, j).abs())
            .fold(0.0, f64::max);
        g.check(
            format!("case {k}: det {} vs bound {}", joint.determinant, fb.bound),
            (joint.determinant - fb.bound).abs() <= 1e-10 * fb.bound,
        );
        g.check(format!("case {k}: off-block max {off:e}"), off <= 1e-8);
    }
    g.finish();
}
