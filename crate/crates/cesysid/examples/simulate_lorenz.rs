//! Simulate the Lorenz system and write the trajectory to CSV.
//!
//! The classical parameters (sigma = 10, rho = 28, beta = 8/3) put the
//! system on its strange attractor; the run records 3000 samples at 100
//! samples per unit time from a random starting point.
//!
//! Run: cargo run --example simulate_lorenz

use cesysid::{integrate_rk4, random_initial_state, SimConfig, SystemSpec};

fn main() {
    let seed = 7;
    let spec = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
    let x0 = random_initial_state(seed, spec.dim(), -10.0, 10.0).unwrap();
    println!("initial state: ({:.4}, {:.4}, {:.4})", x0[0], x0[1], x0[2]);

    let config = SimConfig::new(x0, 30.0, 100).with_seed(seed);
    let traj = integrate_rk4(&spec, &config).unwrap();
    println!("simulated {} samples at dt = {}", traj.n_samples(), traj.dt());

    for (j, name) in traj.var_names().iter().enumerate() {
        let col = traj.states().column(j);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in col {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let mean = col.sum() / col.len() as f64;
        println!("  {name}: range [{lo:8.3}, {hi:8.3}], mean {mean:8.3}");
    }

    let path = std::env::temp_dir().join("lorenz_trajectory.csv");
    cesysid::io::write_trajectory_csv(&traj, &path).unwrap();
    println!("wrote {}", path.display());
    println!();
    println!("Identify its equation structure with:");
    println!("  cargo run --example identify_lorenz");
    println!("or through the CLI:");
    println!("  cesysid identify -i {} --terms paper", path.display());
}
