//! Exact counting analytics for a family of regions: limiting mass, exact
//! mean (restricted-kernel trace), the two independent variance routes, and
//! the full Poisson-binomial counting pmf for one disc.
//!
//! Run:
//!   cargo run --release --example exact_counting_law [n m]

use rigidity_lab::analytics::{
    bernoulli_spectrum, count_distribution, expected_count_exact, region_mass,
    variance_exact_decomposed, variance_exact_spectral, KernelContext,
};
use rigidity_lab::geometry::{valid_index_bound, CountingRegion};
use rigidity_lab::params::EnsembleParams;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map(|s| s.parse().unwrap()).unwrap_or(64);
    let m: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(32);

    let params = EnsembleParams::new(n, m).expect("1 <= m < n");
    let ctx = KernelContext::new(params);
    let vib = valid_index_bound(&params).expect("admissible indices exist");
    eprintln!("exact counting law at n={n}, m={m}; admissible index bound {vib:.4}");

    let pi = std::f64::consts::PI;
    let regions = [
        CountingRegion::Disc { i: 2 },
        CountingRegion::Disc { i: 3 },
        CountingRegion::Sector { i: 2, theta: pi / 2.0 },
        CountingRegion::Sector { i: 3, theta: pi },
        CountingRegion::Annulus { l: 3 },
    ];

    println!("region\tm*mass\texact_mean\tvar_spectral\tvar_decomposed\tmean_slack");
    for region in &regions {
        let mass = region_mass(&params, region).expect("region in support");
        let mean = expected_count_exact(&ctx, region).expect("trace");
        let vs = variance_exact_spectral(&ctx, region).expect("spectral variance");
        let vd = match region {
            CountingRegion::Sector { .. } => {
                variance_exact_decomposed(&ctx, region).expect("decomposition").total()
            }
            _ => vs,
        };
        let center = m as f64 * mass;
        println!(
            "{}\t{:.6}\t{:.9}\t{:.9}\t{:.9}\t{:.3e}",
            region.label(),
            center,
            mean,
            vs,
            vd,
            center - mean
        );
    }

    // counting distribution of disc(3): the exact law of the count
    let region = CountingRegion::Disc { i: 3 };
    let spectrum = bernoulli_spectrum(&ctx, &region).expect("spectrum");
    let dist = count_distribution(&ctx, &region).expect("pmf");
    eprintln!(
        "disc(3): {} Bernoulli means in (1e-6, 1-1e-6); pmf mean {:.9}, variance {:.9}",
        spectrum.probs.iter().filter(|&&p| p > 1e-6 && p < 1.0 - 1e-6).count(),
        dist.mean,
        dist.variance
    );
    println!("k\tprob");
    for (k, &p) in dist.pmf.iter().enumerate() {
        if p > 1e-12 {
            println!("{k}\t{p:.9e}");
        }
    }
}
