use polyrad::inversion::{default_contour, moments_direct, moments_residue_split, residue_debug};
use polyrad::oracles::{pde_moments, PdeConfig};
use polyrad::spectral::{ground_state, Coupling, BETA_CR};

fn main() {
    let c = Coupling::new(BETA_CR + 0.1).unwrap();
    let gs = ground_state(&c).unwrap();
    let lambda0 = gs.lambda0.unwrap();
    println!("lambda0 = {lambda0:.8e}, gamma = {:.8e}", gs.gamma);
    for t in [100.0, 150.0, 200.0] {
        let m = moments_direct(&c, t, &default_contour(&c, t).unwrap()).unwrap();
        let pde = pde_moments(&c, t, &PdeConfig::for_time(t)).unwrap();
        println!(
            "t={t}: laplace p0={:.8e} p2={:.8e} | pde p0={:.8e} p2={:.8e} | rel p0 {:.2e} rel p2 {:.2e}",
            m.p0, m.p2, pde.p0, pde.p2,
            (m.p0 - pde.p0).abs() / pde.p0, (m.p2 - pde.p2).abs() / pde.p2
        );
    }
    for t in [300.0, 400.0, 1000.0, 2000.0, 4000.0] {
        let m = moments_residue_split(&c, t).unwrap();
        let (v1_0, v2_0) = residue_debug(&c, t, 0).unwrap();
        println!(
            "t={t}: p0={:.8e} v1={:.6e} v2={:.6e} v2/v1={:+.4}",
            m.p0, v1_0, v2_0, v2_0 / v1_0
        );
    }
    let p300 = moments_residue_split(&c, 300.0).unwrap().p0;
    let p400 = moments_residue_split(&c, 400.0).unwrap().p0;
    let rate = (p400 / p300).ln() / 100.0;
    println!("rate [300,400] = {rate:.6e} vs lambda0 {lambda0:.6e} rel {:.4}", (rate - lambda0) / lambda0);
}
