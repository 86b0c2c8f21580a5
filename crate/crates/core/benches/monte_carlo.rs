//! Trial throughput of the parallel map against the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mimo_ofdm::config::{parse_config_str, preset};
use mimo_ofdm::detect::Detector;
use mimo_ofdm::heuristic::PsoParams;
use mimo_ofdm::par;
use mimo_ofdm::sim::{LinkSimulator, ScenarioConfig};

const TRIALS: usize = 32;

fn scenario(detector: Detector) -> ScenarioConfig {
    let cfg = parse_config_str(preset("table4-mimo").unwrap(), true).unwrap().config;
    let base = cfg.mimo_ber().unwrap().into_iter().find(|s| s.nt == 4).unwrap();
    base.with_detector(detector)
}

fn trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    let pso = PsoParams { n_iter: 20, ..PsoParams::tuned(0.0) };
    for det in [Detector::Mmse, Detector::Ml, Detector::Pso(pso)] {
        let sim = LinkSimulator::new(&scenario(det.clone())).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", det.name()), &sim, |b, sim| {
            b.iter(|| par::map_range(0..TRIALS, |i| sim.run_trial(0, 12.0, i as u64).unwrap().errors))
        });
        group.bench_with_input(BenchmarkId::new("sequential", det.name()), &sim, |b, sim| {
            b.iter(|| par::map_range_seq(0..TRIALS, |i| sim.run_trial(0, 12.0, i as u64).unwrap().errors))
        });
    }
    group.finish();
}

criterion_group!(benches, trials);
criterion_main!(benches);
