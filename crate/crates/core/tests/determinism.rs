//! Results do not depend on the number of worker threads.

use lamesrc::forward::{synthesize_frequency_data_2d, ReceiverArray};
use lamesrc::inversion::{potential_data, reconstruct, KernelKind, KernelPart, LandweberConfig};
use lamesrc::transforms::Pulse;
use lamesrc::{scenario, ElasticMedium};

fn pipeline() -> Vec<f64> {
    let m = ElasticMedium::new(2.0, 1.0, 1.0).unwrap();
    let f = scenario::field_grid(32, 1.0, Some(1.0)).unwrap();
    let om = vec![1.0, 3.0, 6.0];
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 32).unwrap();
    let d = synthesize_frequency_data_2d(&m, &f, &gh, &om, &rec).unwrap();
    let (up, _) = potential_data(&d, &m, &gh, 15).unwrap();
    let (tp, _) = scenario::potential_grids(16, 1.0, Some(1.0)).unwrap();
    let r = reconstruct(KernelKind::P, KernelPart::Stacked, &m, &up, &tp, &LandweberConfig::default()).unwrap();
    let mut out: Vec<f64> = d.values().iter().flat_map(|v| [v.re, v.im]).collect();
    out.extend_from_slice(r.solution.values());
    out
}

#[test]
fn thread_count_does_not_change_bits() {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(pipeline);
    let b = four.install(pipeline);
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}
