use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use fracsqg_attractor::*;
use fracsqg_cli::{execute, Command, MANIFEST};
use fracsqg_core::fracops::{
    apply_fractional, mollifier_multiplier, mollify, mollify_via_heat_semigroup, truncated_fractional,
};
use fracsqg_core::generators::random_band_limited;
use fracsqg_core::{RectDomain, SpectralField, Spectrum};
use fracsqg_ineqlab::{cordoba_report, interpolation_check, leibniz_residual, poincare_margin, Phi};
use fracsqg_sqg::{energy_balance_residual, eps_convergence_study, run, Integrator, SQGConfig, SQGState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: u32,
    ok: bool,
    start: Instant,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Self {
            id,
            ok: true,
            start: Instant::now(),
        }
    }

    fn clause(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {}.{name}: {detail}", if ok { "PASS" } else { "FAIL" }, self.id);
        self.ok &= ok;
    }

    fn runtime(&mut self, limit: f64) {
        let secs = self.start.elapsed().as_secs_f64();
        self.clause("runtime", secs < limit, format!("{secs:.1} s (limit {limit} s)"));
    }

    fn finish(self) {
        println!("{} criterion {}", if self.ok { "PASS" } else { "FAIL" }, self.id);
        assert!(self.ok, "criterion {} failed", self.id);
    }
}

fn unit_max(q: SpectralField) -> SpectralField {
    let m = q.to_physical().max_abs();
    q.scaled(1.0 / m)
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn scaled_to_max(q: SpectralField, amp: f64) -> SpectralField {
    unit_max(q).scaled(amp)
}

#[test]
fn criterion_01_spectral_identities() {
    let mut c = Criterion::new(1);
    let sp = Spectrum::unit_square(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut shift, mut holder) = (0.0_f64, f64::INFINITY);
    for seed in 0..200u64 {
        let f = random_band_limited(&sp, 2 * seed, (64, 64), 1.0).unwrap();
        let g = random_band_limited(&sp, 2 * seed + 1, (64, 64), 1.0).unwrap();
        let (a, b, s) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (fa, gb) = (apply_fractional(a, &f), apply_fractional(b, &g));
        let (fs, gs) = (apply_fractional(a - s, &f), apply_fractional(b + s, &g));
        let lhs = fa.inner(&gb).unwrap();
        let rhs = fs.inner(&gs).unwrap();
        let scale = fa.l2_norm() * gb.l2_norm() + fs.l2_norm() * gs.l2_norm();
        shift = shift.max((lhs - rhs).abs() / scale);

        let s1 = rng.random_range(-1.0..1.0);
        let s2 = s1 + rng.random_range(0.05..2.0);
        let theta: f64 = rng.random_range(0.0..=1.0);
        let r = interpolation_check(&f, s1, theta * s1 + (1.0 - theta) * s2, s2, Some(seed)).unwrap();
        holder = holder.min(r.margin / r.rhs[0].1);
    }
    c.clause("adjoint_shift", shift <= 1e-13, format!("max relative deviation {shift:.2e} (tol 1e-13)"));
    c.clause("interpolation", holder >= -1e-13, format!("min relative margin {holder:.2e} (tol -1e-13)"));
    c.runtime(10.0);
    c.finish();
}

#[test]
fn criterion_02_oracle_agreement() {
    let mut c = Criterion::new(2);
    let sp = Spectrum::unit_square(16).unwrap();
    let modes = &sp.sorted_modes()[..100];
    let ones = SpectralField::from_mode_fn(Arc::clone(&sp), |_, _, _| 1.0).unwrap();
    for s in [0.5, 1.0, 1.5] {
        let t = truncated_fractional(s, 1e-6, &ones).unwrap();
        let (mut worst, mut at) = (0.0_f64, (0, 0));
        for &(j, k) in modes {
            let exact = sp.eigenvalue(j, k).powf(0.5 * s);
            let err = (t.coeff(j, k) - exact).abs() / exact;
            if err > worst {
                worst = err;
                at = (j, k);
            }
        }
        c.clause(
            &format!("truncated[s={s}]"),
            worst <= 1e-6,
            format!("max relative error {worst:.3e} at mode {at:?} (tol 1e-6)"),
        );
    }

    let sp = Spectrum::unit_square(32).unwrap();
    let mut worst = 0.0_f64;
    for seed in 0..3 {
        let h = random_band_limited(&sp, seed, (16, 16), 1.0).unwrap();
        for eps in [0.2, 0.05] {
            let a = mollify(eps, &h).unwrap().to_physical();
            let b = mollify_via_heat_semigroup(eps, &h).unwrap();
            worst = worst.max(a.zip_with(&b, |x, y| x - y).unwrap().max_abs() / a.max_abs());
        }
    }
    c.clause("heat_quadrature", worst <= 1e-8, format!("max relative deviation {worst:.2e} (tol 1e-8)"));
    c.runtime(60.0);
    c.finish();
}

#[test]
fn criterion_03_mollifier_contract() {
    let mut c = Criterion::new(3);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for i in 0..40 {
        let eps = 10f64.powf(-3.0 + (0.5f64.log10() + 3.0) * i as f64 / 39.0);
        for l in 0..40 {
            let lambda = 10f64.powf(-2.0 + 5.0 * l as f64 / 39.0);
            let m = mollifier_multiplier(eps, lambda).unwrap();
            lo = lo.min(m);
            hi = hi.max(m);
        }
    }
    c.clause("symbol_range", lo > 0.0 && hi < 2.0, format!("m in [{lo:.3e}, {hi:.6}]"));

    // On the large rectangle the lowest eigenvalues sit below eps, where m_eps approaches 2.
    let unit = Spectrum::unit_square(32).unwrap();
    let wide = Spectrum::new(RectDomain::new(60.0, 40.0).unwrap(), 32, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ratio, mut commute) = (0.0_f64, 0.0_f64);
    for seed in 0..50u64 {
        let sp = if seed % 2 == 0 { &unit } else { &wide };
        let f = random_band_limited(sp, seed, (12, 12), 1.0).unwrap();
        let eps = [0.3, 0.1, 0.01, 0.001][seed as usize / 2 % 4];
        let jf = mollify(eps, &f).unwrap();
        let (a, b) = (jf.to_physical(), f.to_physical());
        for p in [1.0, 2.0, 4.0] {
            ratio = ratio.max(a.lp_norm(p).unwrap() / b.lp_norm(p).unwrap());
        }
        ratio = ratio.max(a.max_abs() / b.max_abs());
        let s = rng.random_range(-2.0..3.0);
        let x = apply_fractional(s, &jf);
        let y = mollify(eps, &apply_fractional(s, &f)).unwrap();
        commute = commute.max((&x - &y).l2_norm() / x.l2_norm());
    }
    c.clause("lp_bound", ratio <= 2.05, format!("max ||J f||_p / ||f||_p = {ratio:.4} (bound 2.05)"));
    c.clause("commutation", commute <= 1e-13, format!("max relative deviation {commute:.2e} (tol 1e-13)"));
    c.finish();
}

#[test]
fn criterion_04_cordoba() {
    let mut c = Criterion::new(4);
    for n in [63, 127] {
        let sp = Spectrum::unit_square(n).unwrap();
        for s in [0.5, 1.0, 1.5] {
            let mut worst = f64::INFINITY;
            let mut failed = 0;
            for seed in 0..50 {
                let q = random_band_limited(&sp, seed, (16, 16), 1.0).unwrap();
                let r = cordoba_report(&q, s, Phi::Square, Some(seed)).unwrap();
                worst = worst.min(r.margin / r.tol * 1e-6);
                failed += usize::from(!r.verdict);
            }
            c.clause(
                &format!("defect[{n}^2,s={s}]"),
                failed == 0,
                format!("min D / ||q||_inf^2 = {worst:.3e}, {failed} of 50 below -1e-6"),
            );
        }
    }
    let sp = Spectrum::unit_square(127).unwrap();
    let q = random_band_limited(&sp, 0, (16, 16), 1.0).unwrap();
    let res = leibniz_residual(&q, 0.0).unwrap();
    c.clause("leibniz_s2", res <= 1e-8, format!("max relative deviation from 2|grad q|^2 = {res:.3e} (tol 1e-8)"));
    c.finish();
}

#[test]
fn criterion_05_poincare() {
    let mut c = Criterion::new(5);
    let sp = Spectrum::unit_square(63).unwrap();
    let mut exact_fail = 0;
    let mut worst = f64::INFINITY;
    let mut c2_min = [f64::INFINITY; 3];
    for seed in 0..100 {
        let q = random_band_limited(&sp, seed, (16, 16), 1.0).unwrap();
        for p in [2.0, 4.0] {
            for s in [0.5, 1.0, 1.5] {
                let r = poincare_margin(&q, p, s, Some(seed)).unwrap();
                exact_fail += usize::from(!r.verdict);
                worst = worst.min(r.margin / (r.lhs.abs() + r.rhs_total().abs()));
            }
        }
        for (i, p) in [3.0, 5.0, 6.0].into_iter().enumerate() {
            let r = poincare_margin(&q, p, 0.4, Some(seed)).unwrap();
            c2_min[i] = c2_min[i].min(r.empirical_constant.unwrap());
        }
    }
    c.clause(
        "exact_rows",
        exact_fail == 0,
        format!("min relative margin {worst:.3e}, {exact_fail} of 600 below -1e-8"),
    );
    for (i, p) in [3, 5, 6].into_iter().enumerate() {
        c.clause(&format!("c2_star[p={p}]"), c2_min[i] > 0.0, format!("min c2* = {:.4}", c2_min[i]));
    }
    let e = SpectralField::single_mode(Arc::clone(&sp), 1, 1, 1.0).unwrap();
    let mut eq = 0.0_f64;
    for s in [0.5, 1.0, 1.5] {
        let r = poincare_margin(&e, 2.0, s, None).unwrap();
        eq = eq.max(r.margin.abs() / (r.lhs.abs() + r.rhs_total().abs()));
    }
    c.clause("equality_case", eq <= 1e-10, format!("max |margin| relative {eq:.2e} (tol 1e-10)"));
    c.finish();
}

#[test]
fn criterion_06_integrator() {
    let mut c = Criterion::new(6);
    let sp = Spectrum::unit_square(64).unwrap();

    let q0 = SpectralField::single_mode(Arc::clone(&sp), 3, 2, 1.0).unwrap();
    let cfg = SQGConfig::new(&sp, 1.5, 0.0, 2e-3, 0.1).unwrap();
    let integ = Integrator::new(&cfg).unwrap();
    let decay = (-sp.eigenvalue(3, 2).powf(0.75) * 2e-3).exp();
    let mut state = integ.initial_state(&q0).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let before = state.q.coeff(3, 2);
        integ.step(&mut state).unwrap();
        let off = (&state.q - &q0.scaled(state.q.coeff(3, 2))).l2_norm();
        worst = worst.max(((state.q.coeff(3, 2) - decay * before).abs() + off) / (decay * before));
    }
    c.clause("single_mode", worst <= 1e-12, format!("max relative per-step error {worst:.2e} (tol 1e-12)"));

    let q0 = unit_max(random_band_limited(&sp, 1, (4, 4), 1.0).unwrap());
    let f = random_band_limited(&sp, 2, (3, 3), 1.0).unwrap().scaled(5.0);
    let mut residuals = Vec::new();
    let mut cancel = 0.0_f64;
    for dt in [4e-3, 2e-3, 1e-3] {
        let cfg = SQGConfig::new(&sp, 1.5, 0.0, dt, 0.4).unwrap().with_forcing(f.clone()).unwrap();
        let out = run(&cfg, &q0, 1, None).unwrap();
        residuals.push(energy_balance_residual(&out.records).unwrap());
        cancel = cancel.max(out.records.iter().map(|r| r.cancellation).fold(0.0, f64::max));
    }
    let orders: Vec<f64> = residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    c.clause(
        "residual_order",
        orders.iter().all(|&o| o >= 1.9),
        format!("residuals {}, orders {orders:.3?} (min 1.9)", sci(&residuals)),
    );
    c.clause("cancellation", cancel <= 1e-10, format!("max normalized residual {cancel:.2e} (tol 1e-10)"));

    let q0 = unit_max(random_band_limited(&sp, 5, (12, 12), 1.0).unwrap());
    let cfg = SQGConfig::new(&sp, 1.5, 0.0, 2e-3, 0.3).unwrap();
    let out = run(&cfg, &q0, 5, None).unwrap();
    let l2 = out.records.windows(2).all(|w| w[1].l2 < w[0].l2);
    let dual = out.records.windows(2).all(|w| w[1].dual_norm < w[0].dual_norm);
    c.clause("unforced_l2", l2, format!("{} samples", out.records.len()));
    c.clause("unforced_dual", dual, format!("{} samples", out.records.len()));
    c.runtime(300.0);
    c.finish();
}

#[test]
fn criterion_07_eps_limit() {
    let mut c = Criterion::new(7);
    let sp = Spectrum::unit_square(64).unwrap();
    let q0 = unit_max(random_band_limited(&sp, 1, (4, 4), 1.0).unwrap());
    let f = random_band_limited(&sp, 2, (3, 3), 1.0).unwrap().scaled(5.0);
    let base = SQGConfig::new(&sp, 1.5, 0.0, 1e-3, 1.0).unwrap().with_forcing(f).unwrap();
    let study = eps_convergence_study(&base, &[0.1, 0.05, 0.025, 0.0125], &q0).unwrap();
    let diffs: Vec<f64> = study.rows.iter().map(|r| r.l2_diff).collect();
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    c.clause("monotone", monotone, format!("||q^eps(T) - q^0(T)|| = {}", sci(&diffs)));
    c.finish();
}

#[test]
fn criterion_08_absorbing_ball() {
    let mut c = Criterion::new(8);
    let sp = Spectrum::unit_square(64).unwrap();
    let f = scaled_to_max(random_band_limited(&sp, 11, (4, 4), 1.0).unwrap(), 20.0);
    let cfg = SQGConfig::new(&sp, 1.5, 0.0, 5e-4, 3.0).unwrap().with_forcing(f).unwrap();
    let integ = Integrator::new(&cfg).unwrap();
    let g = random_band_limited(&sp, 12, (8, 8), 1.0).unwrap();
    let g = g.scaled(1.0 / g.sobolev_norm(1.1));
    let q0s: Vec<SpectralField> = [10.0, 30.0, 100.0].iter().map(|&a| g.scaled(a)).collect();
    let r = absorbing_ball_experiment(&integ, &q0s, 1.1, 0.5, 10).unwrap();
    let means: Vec<f64> = r.runs.iter().map(|b| b.tail_mean).collect();
    c.clause("tail_spread", r.tail_spread < 0.2, format!("tail means {means:.5?}, spread {:.2e} (max 0.2)", r.tail_spread));
    c.runtime(600.0);
    c.finish();
}

#[test]
fn criterion_09_volume_decay() {
    let mut c = Criterion::new(9);
    let sp = Spectrum::unit_square(32).unwrap();
    let f = scaled_to_max(random_band_limited(&sp, 11, (4, 4), 1.0).unwrap(), 50.0);
    let q0 = random_band_limited(&sp, 12, (6, 6), 1.0).unwrap();
    for (alpha, span) in [(1.25, 1.0), (1.75, 0.5)] {
        let cfg = SQGConfig::new(&sp, alpha, 0.0, 1e-3, 1.0).unwrap().with_forcing(f.clone()).unwrap();
        let integ = Integrator::new(&cfg).unwrap();
        let base = attractor_proxy(&integ, &q0, 1.0).unwrap();
        let traces = volume_decay_run(&integ, &base, &VolumeOptions::new(32, span)).unwrap();
        let d = dimension_estimate(&traces).unwrap();
        let contract = d.n0.is_some_and(|n| n <= 32 && d.rates[n - 1..].iter().all(|&r| r < 0.0));
        c.clause(&format!("contraction[alpha={alpha}]"), contract, format!("N0 = {:?}", d.n0));
        let target = 1.0 + 0.5 * alpha;
        let k = d.exponent.unwrap_or(f64::NAN);
        c.clause(
            &format!("exponent[alpha={alpha}]"),
            (k - target).abs() <= 0.5,
            format!("{k:.4} over N >= {:?}, expected {target} +- 0.5", d.exponent_from),
        );
        let cons = traces.iter().map(|t| t.consistency()).fold(0.0, f64::max);
        c.clause(&format!("consistency[alpha={alpha}]"), cons <= 0.01, format!("max {cons:.2e} (tol 1e-2)"));
    }

    let cfg = SQGConfig::new(&sp, 1.5, 0.0, 1e-3, 1.0).unwrap();
    let integ = Integrator::new(&cfg).unwrap();
    let zero = SQGState::new(SpectralField::zeros(Arc::clone(&sp)), 0.0, 0);
    let mut sum = 0.0;
    let mut worst = 0.0_f64;
    for (n, &(j, k)) in sp.sorted_modes()[..32].iter().enumerate() {
        sum += sp.eigenvalue(j, k).powf(0.75);
        let bundle = TangentBundle::eigenmodes(&sp, n + 1, 0.0, 0, 10).unwrap();
        let t = trace_aqn(&bundle, &zero, &integ).unwrap();
        worst = worst.max((t - sum).abs() / sum);
    }
    c.clause("zero_base_trace", worst <= 1e-10, format!("max relative deviation {worst:.2e} (tol 1e-10)"));
    c.runtime(900.0);
    c.finish();
}

const RUN: &str = r#"
seed = 5

[grid]
n = 32

[physics]
alpha = 1.5
dt = 2e-3
t_final = 0.2

[forcing]
kind = "random"
amplitude = 5.0
band = 3

[initial]
kind = "random"
amplitude = 1.0
band = 8

[simulate]
sample_every = 10

[attractor]
n_max = 6
t_span = 0.05
absorbing_time = 0.05
"#;

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name() != MANIFEST)
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn criterion_10_reproducibility() {
    let mut c = Criterion::new(10);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, RUN).unwrap();
    for (command, name) in [(Command::Simulate, "simulate"), (Command::Attractor, "attractor")] {
        let a = dir.path().join(format!("{name}_a"));
        let b = dir.path().join(format!("{name}_b"));
        execute(command, &cfg, &a, Some(9), None).unwrap();
        execute(command, &cfg, &b, Some(9), None).unwrap();
        let (x, y) = (artifacts(&a), artifacts(&b));
        let names: Vec<&str> = x.iter().map(|(n, _)| n.as_str()).collect();
        c.clause(&format!("identical[{name}]"), !x.is_empty() && x == y, format!("artifacts {names:?}"));
    }

    let half = dir.path().join("half.toml");
    std::fs::write(&half, RUN.replace("t_final = 0.2", "t_final = 0.1")).unwrap();
    execute(Command::Simulate, &half, &dir.path().join("half"), Some(9), None).unwrap();
    let ck = dir.path().join("half/checkpoint.fsqg");
    let resume = dir.path().join("resume.toml");
    let text = RUN.replace("sample_every = 10", &format!("sample_every = 10\nresume = {:?}", ck.to_str().unwrap()));
    std::fs::write(&resume, text).unwrap();
    execute(Command::Simulate, &resume, &dir.path().join("resumed"), Some(9), None).unwrap();
    let full = std::fs::read(dir.path().join("simulate_a/checkpoint.fsqg")).unwrap();
    let again = std::fs::read(dir.path().join("resumed/checkpoint.fsqg")).unwrap();
    c.clause("resume", full == again, format!("final checkpoints of {} bytes", full.len()));
    c.finish();
}
