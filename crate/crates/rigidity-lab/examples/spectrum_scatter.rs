//! Sample one truncation spectrum and render it beside the predicted
//! lattice and annulus circles.
//!
//! Run:
//!   cargo run --release --example spectrum_scatter [n m seed out.svg]

use rigidity_lab::experiments::SampleBatch;
use rigidity_lab::geometry::{predicted_location, spiral_sort};
use rigidity_lab::params::EnsembleParams;
use rigidity_lab::report::svg::scatter_svg;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map(|s| s.parse().unwrap()).unwrap_or(64);
    let m: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(32);
    let seed: u64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(1);
    let out = args.get(3).cloned().unwrap_or_else(|| "spectrum_scatter.svg".into());

    let params = EnsembleParams::new(n, m).expect("1 <= m < n");
    let batch = SampleBatch::generate(params, seed, 1).expect("sampling");
    let sample = spiral_sort(&batch.samples[0]);

    eprintln!("one truncation spectrum at n={n}, m={m}, seed={seed}");
    println!("p\tre\tim\tmodulus\tpredicted_re\tpredicted_im");
    for (idx, z) in sample.values.iter().enumerate() {
        let tilde = predicted_location(idx + 1, &params);
        println!(
            "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            idx + 1,
            z.re,
            z.im,
            z.norm(),
            tilde.re,
            tilde.im
        );
    }

    std::fs::write(&out, scatter_svg(&sample)).expect("write svg");
    eprintln!("wrote {out}");
}
