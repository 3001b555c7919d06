//! Per-eigenvalue variance scaling: empirical var(λ_p) with jackknife error
//! bars against the sqrt(p log(p+1))/n scaling, and the halving of the
//! variance when the matrix size doubles at fixed aspect ratio.
//!
//! Run:
//!   cargo run --release --example location_variance [trials seed]

use rigidity_lab::experiments::{run_variance_experiment, ExperimentConfig, SampleBatch};
use rigidity_lab::params::EnsembleParams;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let trials: usize = args.first().map(|s| s.parse().unwrap()).unwrap_or(4000);
    let seed: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(31);

    let targets = vec![5usize, 10, 17, 26];
    let mut reports = Vec::new();
    for (n, m, t) in [(64usize, 32usize, trials), (128, 64, trials / 4 + 100)] {
        let params = EnsembleParams::new(n, m).expect("params");
        eprintln!("sampling {t} trials at (n, m) = ({n}, {m})");
        let batch = SampleBatch::generate(params, seed, t).expect("sampling");
        let mut cfg = ExperimentConfig::new(params, t, seed);
        cfg.p_targets = targets.clone();
        reports.push((n, run_variance_experiment(&cfg, &batch).expect("experiment")));
    }

    println!("n\tp\temp_var\tjackknife_se\tscaling\tratio_var_over_scaling");
    for (n, report) in &reports {
        for row in &report.rows {
            println!(
                "{}\t{}\t{:.6e}\t{:.2e}\t{:.6e}\t{:.4}",
                n,
                row.p,
                row.emp_var,
                row.jackknife_se,
                row.scaling,
                row.emp_var / row.scaling
            );
        }
    }

    println!();
    println!("p\tvar_128_over_var_64");
    for (r64, r128) in reports[0].1.rows.iter().zip(reports[1].1.rows.iter()) {
        println!("{}\t{:.4}", r64.p, r128.emp_var / r64.emp_var);
    }
    eprintln!("doubling the size at fixed aspect ratio should roughly halve var(λ_p)");
}
