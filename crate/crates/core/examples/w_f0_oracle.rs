//! Brute-force `W(λ, f₀, p)` on the lower-bound corner. The output is kept in
//! `tests/data/w_f0_oracle.csv` and fixes the floor the scans must clear.
//!
//! cargo run --release --example w_f0_oracle > crates/core/tests/data/w_f0_oracle.csv

#[path = "../tests/common/mod.rs"]
mod brute;

fn main() {
    println!("lambda,p,W");
    for lambda in [64.0, 256.0, 1024.0] {
        for p in [1.9, 1.95, 1.99] {
            let w = brute::w_f0_brute(lambda, p, 4_000_000);
            println!("{lambda:.16e},{p:.16e},{w:.16e}");
        }
    }
}
