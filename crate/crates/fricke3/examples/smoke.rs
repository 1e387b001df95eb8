use fricke3::contour::{identity_check, ContourConfig, Regime};
use rug::Float;

fn main() {
    let prec = 768;
    for (k, m, t, regime) in [
        (0i64, 23i64, 1.9f64, Regime::Low),
        (4, 23, 2.5, Regime::High),
        (4, 23, 2.35, Regime::High),
        (0, 23, 2.55, Regime::High),
        (4, 23, 2.2, Regime::Low),
    ] {
        let cfg = ContourConfig::for_regime(regime, prec);
        let theta = Float::with_val(prec, t);
        match identity_check(&theta, k, m, regime, &cfg) {
            Ok(rep) => println!(
                "({k},{m}) θ={t} {:?}: lhs={:.6e} residual_rel={:.3e}",
                regime, rep.lhs.to_f64(), rep.residual_rel.to_f64()
            ),
            Err(e) => println!("({k},{m}) θ={t} {:?}: ERROR {e}", regime),
        }
    }
}
