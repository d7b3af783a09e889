//! Exit criteria. Each criterion prints one PASS/FAIL line; the process
//! fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};

use common::*;
use qcorr::linalg::tensor_product;
use qcorr::measures::{
    bell_quantities, classical_projection, concurrence, full_report, gqd, mid, mutual_information,
    DensityMatrix,
};
use qcorr::models::{
    cross_validate, eq1_gqd_xxx, validation_grid, xxz_thermal_analytic, XxzParams,
};
use qcorr::sweep::{repro_preset, run_sweep, Axis, Measure, SweepConfig};
use qcorr::ComplexMatrix;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn xxx(j: f64, t: f64) -> DensityMatrix {
    xxz_thermal_analytic(&XxzParams {
        j,
        jz: j,
        field: 0.0,
        inhomogeneity: 0.0,
        temperature: t,
    })
    .unwrap()
    .0
}

/// 1. GQD = m/4 = 1/(2(1 - 2 coth(J/T))²) on XXX thermal states.
fn criterion_1() -> Outcome {
    let mut worst_m = 0.0_f64;
    let mut worst_eq1 = 0.0_f64;
    let mut count = 0;
    for &t in &[0.1, 0.2, 0.5, 1.0, 2.0] {
        for i in 0..=80 {
            if i == 40 {
                continue;
            }
            let j = -2.0 + 0.05 * i as f64;
            let rho = xxx(j, t);
            let g = gqd(&rho).map_err(|e| e.to_string())?.gqd;
            let m = bell_quantities(&rho).map_err(|e| e.to_string())?.m;
            worst_m = worst_m.max((g - 0.25 * m).abs());
            worst_eq1 = worst_eq1.max((g - eq1_gqd_xxx(j, t).map_err(|e| e.to_string())?).abs());
            count += 1;
        }
    }
    check(worst_m < 1e-10 && worst_eq1 < 1e-9, || {
        format!("max |gqd - m/4| = {worst_m:e}, max |gqd - closed form| = {worst_eq1:e}")
    })?;
    Ok(format!("{count} points, max |gqd - m/4| = {worst_m:.1e}, max |gqd - closed form| = {worst_eq1:.1e}"))
}

/// 2. Closed-form thermal states equal the Gibbs oracle.
fn criterion_2() -> Outcome {
    let grid = validation_grid();
    let mut worst = 0.0_f64;
    for point in &grid {
        let r = cross_validate(point).map_err(|e| format!("{point:?}: {e}"))?;
        worst = worst.max(r.trace_distance);
        check(r.pass, || {
            format!("{point:?}: trace distance {:e}", r.trace_distance)
        })?;
    }
    Ok(format!(
        "{} points, max trace distance {worst:.1e} < 1e-10",
        grid.len()
    ))
}

/// 3. Canonical states.
fn criterion_3() -> Outcome {
    let r = full_report(&bell_phi_plus()).map_err(|e| e.to_string())?;
    let bell = [
        ("concurrence", r.conc.concurrence, 1.0),
        ("m", r.bell.m, 2.0),
        ("violation", r.bell.violation, 1.0),
        ("mid", r.mid.mid, 1.0),
        ("gqd", r.gqd.gqd, 0.5),
    ];
    for (name, got, want) in bell {
        check((got - want).abs() < 1e-10, || {
            format!("Bell state {name} = {got}, expected {want}")
        })?;
    }
    let mut zero_states = vec![
        ("I/4", DensityMatrix::maximally_mixed()),
        (
            "|00>",
            DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.0, 0.0, 0.0, 1.0])).unwrap(),
        ),
    ];
    let mut rng = rng(3);
    for k in 0..20 {
        let a = random_density(&mut rng, 2);
        let b = random_density(&mut rng, 2);
        let rho = DensityMatrix::new(tensor_product(&a, &b)).unwrap();
        zero_states.push((if k == 0 { "random product" } else { "" }, rho));
    }
    for (name, rho) in &zero_states {
        let r = full_report(rho).map_err(|e| e.to_string())?;
        for (measure, v) in [
            ("concurrence", r.conc.concurrence),
            ("violation", r.bell.violation),
            ("mid", r.mid.mid),
            ("gqd", r.gqd.gqd),
        ] {
            check(v.abs() < 1e-10, || format!("{name} {measure} = {v:e}"))?;
        }
    }
    Ok(format!(
        "Bell state exact; {} zero-correlation states all < 1e-10",
        zero_states.len()
    ))
}

fn fig1_rows() -> (SweepConfig, Vec<qcorr::sweep::SweepRow>) {
    let cfg = repro_preset("fig1").unwrap().remove(0);
    let rows = run_sweep(&cfg, None).unwrap();
    (cfg, rows)
}

/// 4. XXX claims at T = 0.2.
fn criterion_4() -> Outcome {
    let rho = xxx(0.2, 0.2);
    let c = concurrence(&rho).map_err(|e| e.to_string())?.concurrence;
    let m = bell_quantities(&rho).map_err(|e| e.to_string())?.m;
    check(c > 0.0 && m - 1.0 < 0.0, || {
        format!("(J,T)=(0.2,0.2): C = {c}, m - 1 = {}", m - 1.0)
    })?;

    let (cfg, rows) = fig1_rows();
    let mut negatives = 0;
    let mut min_gqd = f64::INFINITY;
    let mut min_mid = f64::INFINITY;
    for row in rows.iter().filter(|r| r.axis_values[0] < 0.0) {
        let j = row.axis_values[0];
        let conc = row
            .get(&cfg, Measure::Concurrence)
            .ok_or("missing concurrence")?;
        let g = row.get(&cfg, Measure::Gqd).ok_or("missing gqd")?;
        let q = row.get(&cfg, Measure::Mid).ok_or("missing mid")?;
        check(conc == 0.0, || format!("J={j}: concurrence {conc:e}"))?;
        check(g > 1e-6 && q > 1e-6, || {
            format!("J={j}: gqd {g:e}, mid {q:e}")
        })?;
        min_gqd = min_gqd.min(g);
        min_mid = min_mid.min(q);
        negatives += 1;
    }
    check(negatives == 40, || {
        format!("expected 40 points with J<0, got {negatives}")
    })?;
    Ok(format!(
        "C(0.2) = {c:.4}, m - 1 = {:.4}; {negatives} points J<0: C = 0, min gqd {min_gqd:.2e}, min mid {min_mid:.2e}",
        m - 1.0
    ))
}

/// 5. Evenness in b of concurrence, MID and m on the fig2 grid; GQD asymmetry.
fn criterion_5() -> Outcome {
    let mut worst_even = 0.0_f64;
    let mut gqd_asym = BTreeMap::new();
    for cfg in repro_preset("fig2").unwrap() {
        let rows = run_sweep(&cfg, None).map_err(|e| e.to_string())?;
        let n = rows.len();
        let jz = cfg.fixed["Jz"];
        let mut asym = 0.0_f64;
        for i in 0..n {
            let (a, b) = (&rows[i], &rows[n - 1 - i]);
            check((a.axis_values[0] + b.axis_values[0]).abs() < 1e-12, || {
                "grid not symmetric".into()
            })?;
            for measure in [Measure::Concurrence, Measure::Mid, Measure::BellM] {
                let (x, y) = (a.get(&cfg, measure).unwrap(), b.get(&cfg, measure).unwrap());
                worst_even = worst_even.max((x - y).abs());
            }
            let (x, y) = (
                a.get(&cfg, Measure::Gqd).unwrap(),
                b.get(&cfg, Measure::Gqd).unwrap(),
            );
            asym = asym.max((x - y).abs());
        }
        gqd_asym.insert(format!("{jz}"), asym);
    }
    check(worst_even < 1e-10, || {
        format!("max |f(b) - f(-b)| = {worst_even:e}")
    })?;
    let at_half = gqd_asym["0.5"];
    check(at_half > 1e-6, || {
        format!("GQD asymmetry at Jz=0.5 only {at_half:e}")
    })?;
    Ok(format!(
        "max |f(b) - f(-b)| = {worst_even:.1e} for C, MID, m; max |gqd(b) - gqd(-b)| = {at_half:.4e} (Jz=0.5), {:.4e} (Jz=-0.5)",
        gqd_asym["-0.5"]
    ))
}

/// 6. DM-model claims at T = 0.2.
fn criterion_6() -> Outcome {
    let mut cfg = repro_preset("fig4").unwrap().remove(0);
    cfg.axes = vec![
        Axis::new("J", -2.0, 2.0, 0.1),
        Axis::new("D", -2.0, 2.0, 0.05),
    ];
    cfg.measures = vec![
        Measure::Concurrence,
        Measure::BellViolation,
        Measure::Mid,
        Measure::Gqd,
    ];
    let rows = run_sweep(&cfg, None).map_err(|e| e.to_string())?;
    let d_len = cfg.axes[1].len();

    // For each J < 0, the widest run of D around 0 with C = 0, GQD > 0, MID > 0.
    let mut best: Option<(f64, f64, f64)> = None;
    for chunk in rows.chunks(d_len) {
        let j = chunk[0].axis_values[0];
        if j >= 0.0 {
            continue;
        }
        let ok = |r: &qcorr::sweep::SweepRow| {
            r.get(&cfg, Measure::Concurrence) == Some(0.0)
                && r.get(&cfg, Measure::Gqd).is_some_and(|g| g > 0.0)
                && r.get(&cfg, Measure::Mid).is_some_and(|q| q > 0.0)
        };
        let centre = chunk
            .iter()
            .position(|r| r.axis_values[1].abs() < 1e-12)
            .unwrap();
        if !ok(&chunk[centre]) {
            continue;
        }
        let (mut lo, mut hi) = (centre, centre);
        while lo > 0 && ok(&chunk[lo - 1]) {
            lo -= 1;
        }
        while hi + 1 < chunk.len() && ok(&chunk[hi + 1]) {
            hi += 1;
        }
        let (dlo, dhi) = (chunk[lo].axis_values[1], chunk[hi].axis_values[1]);
        if dhi > dlo && best.is_none_or(|(_, a, b)| dhi - dlo > b - a) {
            best = Some((j, dlo, dhi));
        }
    }
    let (j_fm, dlo, dhi) =
        best.ok_or("no J < 0 with a D-interval around 0 where C = 0 < GQD, MID")?;

    let witness = rows.iter().find(|r| {
        r.axis_values[0] > 0.0
            && r.get(&cfg, Measure::Concurrence).is_some_and(|c| c > 0.0)
            && r.get(&cfg, Measure::BellViolation) == Some(0.0)
    });
    let w = witness.ok_or("no (J > 0, D) with C > 0 and no Bell violation")?;
    Ok(format!(
        "J={j_fm}: C = 0 < GQD, MID for D in [{dlo:.2}, {dhi:.2}]; (J, D) = ({:.2}, {:.2}) entangled without violation",
        w.axis_values[0], w.axis_values[1]
    ))
}

/// 7. Measure properties on 10⁴ random states.
fn criterion_7() -> Outcome {
    const N: usize = 10_000;
    let mut rng = rng(7);
    let mut lu_worst = 0.0_f64;
    let mut lu_mid_checked = 0;
    let mut swap_worst = 0.0_f64;
    let mut violating = 0;
    let mut entangled = 0;
    let mut proj_worst = 0.0_f64;
    for _ in 0..N {
        let rho = random_state(&mut rng);
        let r = full_report(&rho).map_err(|e| e.to_string())?;

        let rotated = rho
            .transformed(&random_local_unitary(&mut rng))
            .map_err(|e| e.to_string())?;
        let c_rot = concurrence(&rotated)
            .map_err(|e| e.to_string())?
            .concurrence;
        let m_rot = bell_quantities(&rotated).map_err(|e| e.to_string())?.m;
        lu_worst = lu_worst
            .max((c_rot - r.conc.concurrence).abs())
            .max((m_rot - r.bell.m).abs());
        let gap = r
            .mid
            .marginal_spectra
            .iter()
            .map(|s| s[0] - s[1])
            .fold(f64::INFINITY, f64::min);
        if gap > 1e-6 {
            let q = mid(&rotated).map_err(|e| e.to_string())?.mid;
            lu_worst = lu_worst.max((q - r.mid.mid).abs());
            lu_mid_checked += 1;
        }

        let s = rho.swapped();
        let rs = full_report(&s).map_err(|e| e.to_string())?;
        let mi = mutual_information(&rho).map_err(|e| e.to_string())?;
        let mi_s = mutual_information(&s).map_err(|e| e.to_string())?;
        swap_worst = swap_worst
            .max((rs.conc.concurrence - r.conc.concurrence).abs())
            .max((rs.bell.m - r.bell.m).abs())
            .max((rs.mid.mid - r.mid.mid).abs())
            .max((mi_s - mi).abs());

        if r.bell.violation > 0.0 {
            violating += 1;
            check(r.conc.concurrence > 0.0, || {
                "Bell violation without entanglement".into()
            })?;
        }
        if r.conc.concurrence > 0.0 {
            entangled += 1;
            check(r.gqd.gqd > 0.0, || "entangled state with zero GQD".into())?;
        }

        let p = classical_projection(&rho).map_err(|e| e.to_string())?;
        let pp = classical_projection(&p.projected).map_err(|e| e.to_string())?;
        proj_worst = proj_worst.max(pp.projected.matrix().max_abs_diff(p.projected.matrix()));
        for keep in [qcorr::linalg::Subsystem::A, qcorr::linalg::Subsystem::B] {
            check(
                p.projected.marginal(keep).max_abs_diff(&rho.marginal(keep)) < 1e-10,
                || "projection changed a marginal".into(),
            )?;
        }
    }
    check(lu_worst < 1e-9, || {
        format!("local-unitary deviation {lu_worst:e}")
    })?;
    check(swap_worst < 1e-10, || {
        format!("swap deviation {swap_worst:e}")
    })?;
    check(proj_worst < 1e-12, || {
        format!("projection idempotence {proj_worst:e}")
    })?;

    let mut cq_worst = 0.0_f64;
    for _ in 0..N {
        let rho = random_classical_quantum(&mut rng);
        cq_worst = cq_worst.max(gqd(&rho).map_err(|e| e.to_string())?.gqd.abs());
    }
    check(cq_worst < 1e-10, || {
        format!("classical-quantum GQD {cq_worst:e}")
    })?;
    Ok(format!(
        "{N} states: LU dev {lu_worst:.1e} (MID on {lu_mid_checked}), swap dev {swap_worst:.1e}, \
         {violating} violating / {entangled} entangled, CQ gqd {cq_worst:.1e}, idempotence {proj_worst:.1e}"
    ))
}

/// 8. `qcorr repro fig1` is byte-identical across runs and worker counts.
fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (run, workers) in [("a", "4"), ("b", "4"), ("c", "1")] {
        let out_dir = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_qcorr"))
            .args(["repro", "fig1", "--workers", workers, "--out"])
            .arg(&out_dir)
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), || {
            format!("run {run} failed: {:?}", status.status)
        })?;
        outputs.push(std::fs::read(out_dir.join("fig1.csv")).map_err(|e| e.to_string())?);
    }
    check(outputs[0] == outputs[1], || "repeated runs differ".into())?;
    check(outputs[0] == outputs[2], || {
        "1 worker differs from 4 workers".into()
    })?;
    Ok(format!(
        "3 runs, {} bytes each, identical",
        outputs[0].len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("closed-form XXX discord identity", criterion_1),
        ("oracle equivalence of thermal states", criterion_2),
        ("canonical states", criterion_3),
        ("XXX claims at T = 0.2", criterion_4),
        ("field-reversal symmetry", criterion_5),
        ("DM-model claims", criterion_6),
        ("measure property suite", criterion_7),
        ("CSV determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
