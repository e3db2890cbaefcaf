use std::path::Path;
use std::process::{Command, Output};

use ceiling_effect::analysis::power_saving_curve;
use ceiling_effect::estimation::log_spaced;
use ceiling_effect::io::{
    read_gamma_csv, read_steady_csv, write_raw_csv, ParamFile, RawSample, RawSampleStream,
};
use ceiling_effect::Environment;

fn ceiling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ceiling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

/// Small synthetic dataset: 12 distances x 6 voltages.
fn synth(dir: &Path, name: &str, seed: &str) -> String {
    let out = path(dir, name);
    let res = ceiling(&[
        "synth",
        "--out",
        &out,
        "--seed",
        seed,
        "--distances",
        "0.001:0.1:12",
        "--voltages",
        "2.5:4.0:6",
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    out
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ceiling(&[])), 1);
    assert_eq!(code(&ceiling(&["fit-gamma", "--bogus"])), 1);
    assert_eq!(code(&ceiling(&["no-such-command"])), 1);
    assert_eq!(code(&ceiling(&["--help"])), 0);
}

#[test]
fn fit_chain_recovers_constants() {
    let dir = tempfile::tempdir().unwrap();
    let records = synth(dir.path(), "records.csv", "0");
    let gamma = path(dir.path(), "gamma.csv");
    let params = path(dir.path(), "fit.json");

    let out = ceiling(&[
        "fit-gamma",
        "--input",
        &records,
        "--density",
        "1.2",
        "--out",
        &gamma,
        "--params",
        &params,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let file = ParamFile::load(&params).unwrap();
    // Anchored at delta = 0.23 where gamma is just above 1.
    assert!((file.eta.unwrap() / 0.5 - 1.0).abs() < 0.01);
    assert_eq!(read_gamma_csv(&gamma).unwrap().len(), 12);
    assert_eq!(
        file.provenance.dataset_sha256.as_deref().map(str::len),
        Some(64)
    );

    assert_eq!(
        code(&ceiling(&[
            "fit-motor",
            "--input",
            &records,
            "--params",
            &params
        ])),
        0
    );
    assert_eq!(
        code(&ceiling(&[
            "fit-ceiling",
            "--input",
            &gamma,
            "--reduced",
            "--params",
            &params
        ])),
        0
    );
    let flight = path(dir.path(), "flight.csv");
    assert_eq!(
        code(&ceiling(&[
            "fit-blade",
            "--input",
            &records,
            "--params",
            &params,
            "--out",
            &flight
        ])),
        0
    );

    let file = ParamFile::load(&params).unwrap();
    let motor = file.motor.unwrap();
    assert!((motor.internal_resistance() / 1.58 - 1.0).abs() < 1e-9);
    let alpha0 = file.ceiling.unwrap().alpha0();
    assert!((alpha0 / 1.6 - 1.0).abs() < 0.02, "{alpha0}");
    let geom = file.geometry.unwrap();
    assert_eq!(geom.radius(), 0.023);
    for key in ["motor", "ceiling", "blade"] {
        assert!(file.provenance.reports.contains_key(key));
    }

    let out = ceiling(&[
        "power-saving",
        "--params",
        &params,
        "--thrust",
        "0.0863",
        "--distances",
        "0.001:0.1:60",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "distance_m,delta,gamma,mechanical_power_w,input_power_w"
    );
    assert_eq!(lines.len(), 61);

    // Same numbers as the library call with the stored constants.
    let env = Environment::default();
    let distances: Vec<f64> = (0..60)
        .map(|i| 0.001 + (0.1 - 0.001) * i as f64 / 59.0)
        .collect();
    let ct = ceiling_effect::bemt::thrust_coefficient_at(
        &geom,
        1.0,
        ceiling_effect::GapRatio::NO_CEILING,
        &env,
    )
    .unwrap();
    let ctau = ceiling_effect::bemt::torque_coefficient(ct, 1.0, &geom, &env).unwrap();
    let curve = power_saving_curve(
        0.0863,
        &geom,
        &file.ceiling.unwrap(),
        &motor,
        ctau,
        &distances,
        &env,
    )
    .unwrap();
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[3], curve[0].mechanical_power);
    assert_eq!(first[4], curve[0].input_power);

    let out = ceiling(&[
        "predict-coeffs",
        "--params",
        &params,
        "--distances",
        "0.001:0.1:5",
        "--log",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);

    let out = ceiling(&["resonance", "--params", &params]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 252);

    let out = ceiling(&["anomalies", "--input", &gamma, "--params", &params]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let a = synth(dir.path(), &format!("r{tag}.csv"), "42");
        let g = path(dir.path(), &format!("g{tag}.csv"));
        let p = path(dir.path(), &format!("p{tag}.json"));
        assert_eq!(
            code(&ceiling(&[
                "fit-gamma",
                "--input",
                &a,
                "--out",
                &g,
                "--params",
                &p
            ])),
            0
        );
        assert_eq!(
            code(&ceiling(&["fit-ceiling", "--input", &g, "--params", &p])),
            0
        );
        [a, g, p].map(|f| std::fs::read(f).unwrap())
    };
    assert_eq!(run("1"), run("2"));
    let noisy = |seed: &str, name: &str| {
        let out = path(dir.path(), name);
        ceiling(&[
            "synth",
            "--out",
            &out,
            "--seed",
            seed,
            "--noise",
            "0.02",
            "--distances",
            "0.01:0.1:3",
        ]);
        std::fs::read(out).unwrap()
    };
    assert_eq!(noisy("5", "n1.csv"), noisy("5", "n2.csv"));
    assert_ne!(noisy("5", "n3.csv"), noisy("6", "n4.csv"));
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.csv");
    std::fs::write(&bad, "config_id,radius_m\nx,0.023\n").unwrap();
    let out = ceiling(&["fit-motor", "--input", &bad]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing column: prop_count"));
    let missing = path(dir.path(), "nope.csv");
    assert_eq!(
        code(&ceiling(&["fit-gamma", "--input", &missing, "--out", &bad])),
        2
    );
}

#[test]
fn unidentifiable_fit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = path(dir.path(), "same.csv");
    let row = "s,0.023,1,0,0.01,0,3,0.5,0.05,0.0001,2000";
    let text = format!(
        "config_id,radius_m,prop_count,spacing_m,distance_m,setpoint,voltage_v,current_a,thrust_n,torque_nm,omega_rad_s\n{row}\n{row}\n"
    );
    std::fs::write(&p, text).unwrap();
    assert_eq!(code(&ceiling(&["fit-motor", "--input", &p])), 3);
}

#[test]
fn extract_averages_steady_windows() {
    let dir = tempfile::tempdir().unwrap();
    let raw = path(dir.path(), "raw.csv");
    let mut samples = Vec::new();
    for (k, &distance) in log_spaced(0.005, 0.05, 2).iter().enumerate() {
        for setpoint in 0..2u32 {
            let t0 = (2 * k + setpoint as usize) as f64 * 3.0;
            for i in 0..2500 {
                samples.push(RawSample {
                    timestamp: t0 + i as f64 * 1e-3,
                    distance,
                    setpoint,
                    voltage: 3.0 + setpoint as f64,
                    current: 0.5,
                    thrust: 0.05,
                    torque: None,
                    omega: 2000.0,
                });
            }
        }
    }
    let stream = RawSampleStream {
        config_id: "rig".into(),
        radius: 0.023,
        prop_count: 4,
        spacing: 0.092,
        samples,
    };
    write_raw_csv(&stream, &raw).unwrap();
    let out_path = path(dir.path(), "steady.csv");
    let out = ceiling(&["extract", "--input", &raw, "--out", &out_path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let recs = read_steady_csv(&out_path).unwrap();
    assert_eq!(recs.len(), 4);
    assert!(recs.iter().all(|r| r.torque.is_none() && r.prop_count == 4));
    assert!((recs[1].voltage - 4.0).abs() < 1e-12);
}
