use std::path::Path;

use num_complex::Complex32;
use sdradar::channel::{simulate_received, trial_rng, DelayModel, RadarParams};
use sdradar::codes::build_pnc128;
use sdradar::correlator::ComplexVector;
use sdradar::export::{export_magnitudes, export_results, read_json, read_records_csv, Format};
use sdradar::iq::{encode_iq, ingest_iq, read_iq, to_iq32, write_iq};
use sdradar::pipeline::{process_window, reference_code};
use sdradar::scenario::Scenario;
use sdradar::simulation::run_monte_carlo;

fn fig5_trials(trials: usize) -> Scenario {
    Scenario {
        trials,
        ..Scenario::fig5()
    }
}

#[test]
fn simulated_capture_round_trips_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let params = RadarParams::default();
    let sc = Scenario {
        channel: sdradar::channel::ChannelConfig {
            noise_sigma: 0.05,
            ..Scenario::fig5().channel
        },
        ..Scenario::fig5()
    };
    let code = build_pnc128();
    let mut stream: Vec<Complex32> = Vec::new();
    for (trial, delay) in [(0u64, 3usize), (1, 77), (2, 120)] {
        let y = simulate_received(&code, delay, &sc.channel, &params, &mut trial_rng(4, trial))
            .unwrap();
        stream.extend(to_iq32(y.samples()));
    }
    let path = dir.path().join("capture.iq");
    write_iq(&path, &stream).unwrap();

    let cap = ingest_iq(&path, &params).unwrap();
    assert_eq!(cap.windows.len(), 3);
    assert_eq!(cap.dropped_samples, 0);
    let back: Vec<Complex32> = cap
        .windows
        .iter()
        .flat_map(|w| to_iq32(w.samples()))
        .collect();
    assert_eq!(back, stream);

    // ingest → export → ingest
    let again = dir.path().join("again.iq");
    write_iq(&again, &back).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&again).unwrap()
    );
    assert_eq!(read_iq(&again).unwrap(), stream);

    let reference = ComplexVector::new(code.to_complex()).unwrap();
    let expected_refs = [3, 77, 120];
    for (w, &d) in cap.windows.iter().zip(&expected_refs) {
        let res = process_window(w, &reference, &params, sc.threshold).unwrap();
        assert_eq!(res.reference_bin, d);
        assert_eq!(res.report.bins(), vec![0, 16, 32]);
    }
}

#[test]
fn shifted_code_capture_reports_reference_nine() {
    let dir = tempfile::tempdir().unwrap();
    let params = RadarParams::default();
    let mut code = build_pnc128().to_complex();
    code.rotate_right(9);
    let path = dir.path().join("shifted.iq");
    std::fs::write(&path, encode_iq(&to_iq32(&code))).unwrap();

    let cap = ingest_iq(&path, &params).unwrap();
    let reference = ComplexVector::new(reference_code(&params).unwrap().to_complex()).unwrap();
    let res = process_window(&cap.windows[0], &reference, &params, 0.25).unwrap();
    assert_eq!(res.reference_bin, 9);
    assert_eq!(res.report.entries[0].bin, 0);
    assert!((res.report.entries[0].magnitude - 121.0).abs() < 1e-9);
}

#[test]
fn csv_and_json_carry_identical_records() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_monte_carlo(&fig5_trials(25)).unwrap();
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    export_results(&run.records, &run.summary, Format::Csv, &csv).unwrap();
    export_results(&run.records, &run.summary, Format::Json, &json).unwrap();

    let from_csv = read_records_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let doc = read_json(std::fs::File::open(&json).unwrap()).unwrap();
    assert_eq!(from_csv, run.records);
    assert_eq!(doc.records, run.records);
    assert_eq!(doc.summary, run.summary);
}

#[test]
fn two_trial_csv_has_header_and_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_monte_carlo(&fig5_trials(2)).unwrap();
    let path = dir.path().join("two.csv");
    export_results(&run.records, &run.summary, Format::Csv, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(
        lines[0],
        "trial,delay_drawn,reference_detected,aligned_peak_bins,success"
    );
}

fn top_columns(row: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..row.len()).collect();
    idx.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap());
    let mut top = idx[..k].to_vec();
    top.sort_unstable();
    top
}

#[test]
fn magnitude_dump_rows_peak_at_target_columns() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_monte_carlo(&fig5_trials(8)).unwrap();
    let path = dir.path().join("ascans.csv");
    export_magnitudes(&run.aligned_magnitudes, &path).unwrap();

    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().len(), 129);
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let values: Vec<f64> = rec.iter().skip(1).map(|v| v.parse().unwrap()).collect();
        assert_eq!(top_columns(&values, 3), vec![0, 16, 32]);
        rows += 1;
    }
    assert_eq!(rows, 8);
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let run = run_monte_carlo(&fig5_trials(40)).unwrap();
        let path = dir.path().join(format!("{i}.json"));
        export_results(&run.records, &run.summary, Format::Json, &path).unwrap();
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn noiseless_fixed_delay_single_trial() {
    let mut sc = fig5_trials(1);
    sc.channel.delay = DelayModel::Fixed(0);
    let run = run_monte_carlo(&sc).unwrap();
    assert_eq!(run.records[0].reference_detected, 0);
    assert_eq!(run.records[0].delay_drawn, 0);
}

#[test]
fn repeated_symbols_scale_bins() {
    let text = r#"
trials = 16
threshold = 0.25
[radar]
sample_rate = 20e6
n_bins = 256
samples_per_symbol = 2
[channel]
delay = "uniform_over_bins"
seed = 3
[[channel.targets]]
range_m = 240.0
amplitude = 0.6
"#;
    let sc = Scenario::from_toml_str(text, Path::new("x")).unwrap();
    let run = run_monte_carlo(&sc).unwrap();
    assert_eq!(run.summary.expected_bins, vec![32]);
    assert_eq!(run.summary.success_rate, 1.0);
}
