//! Symmetric teleportation sweep for the trained pair of Model 1.
use wormhole_lab::models::model1;
use wormhole_lab::teleport::{run_teleport, SweepMode, TeleportConfig};

fn main() -> wormhole_lab::Result<()> {
    let mut cfg = TeleportConfig::new(model1());
    cfg.pair = (1, 2);
    for mu in [-12.0, 12.0] {
        cfg.mu = mu;
        let tr = run_teleport(&cfg)?;
        let (t, v) = tr.peak();
        println!("μ = {mu:+}: peak I(P:T) = {v:.4} bits at t = {t:.1}");
    }
    cfg.mu = -12.0;
    cfg.mode = SweepMode::FixedInjection { t0: 2.8 };
    let tr = run_teleport(&cfg)?;
    println!("fixed injection t0 = 2.8:");
    for (t, v) in tr.times.iter().zip(&tr.values).step_by(5) {
        println!("  t1 = {t:.1}  I = {v:.4}");
    }
    Ok(())
}
