//! Permutation significance for the ranked terms.
//!
//! MI scores rank the candidates but carry no scale for "how much is
//! real". Reshuffling a covariate destroys its pairing with the
//! derivative, so re-estimating MI under B shuffles gives an exact
//! permutation null: p = (1 + #{shuffled MI >= observed}) / (B + 1).
//!
//! Run: cargo run --release --example permutation_pvalues

use cesysid::{
    identify, integrate_rk4, random_initial_state, PermutationConfig, SimConfig, SystemSpec,
    TermMode,
};

fn main() {
    let seed = 5;
    let spec = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
    let x0 = random_initial_state(seed, spec.dim(), -10.0, 10.0).unwrap();
    let config = SimConfig::new(x0, 10.0, 100).with_seed(seed).with_burn_in(10.0);
    let traj = integrate_rk4(&spec, &config).unwrap();

    let pcfg = PermutationConfig { count: 199, alpha: 0.05, seed };
    let report = identify(&traj, &TermMode::Paper, 3, Some(&pcfg)).unwrap();

    println!(
        "n = {}, B = {} shuffles, smallest attainable p = {:.4}",
        report.metadata.n_effective,
        pcfg.count,
        1.0 / (pcfg.count + 1) as f64
    );
    println!();
    println!("{:<8} {:<6} {:>10} {:>6} {:>10}", "deriv", "term", "mi_nats", "rank", "p");
    println!("{}", "-".repeat(44));
    for ranking in &report.derivatives {
        for t in &ranking.terms {
            println!(
                "{:<8} {:<6} {:>10.4} {:>6} {:>10.4}",
                ranking.derivative,
                t.term,
                t.mi_nats.unwrap(),
                t.rank,
                t.p_value.unwrap()
            );
        }
        println!("{}", "-".repeat(44));
    }
    println!();
    println!("On a chaotic attractor nearly every candidate shows genuine");
    println!("dependence, so small p-values are the norm here; the test");
    println!("earns its keep on noisy or short data where spurious leaders");
    println!("fail to clear the null.");
}
