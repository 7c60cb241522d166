use zetamoments::moments::{run_moment, PRESETS};
use zetamoments::quad::QuadratureConfig;

#[test]
fn presets_stable_under_panel_halving() {
    for p in PRESETS {
        let mut cfg = QuadratureConfig::for_height(p.t, 1e-4);
        if p.twok == 1 {
            cfg = cfg.with_panel_width(std::f64::consts::PI / p.t.ln());
        }
        let coarse = run_moment(p, p.t, &cfg).unwrap();
        let fine = run_moment(p, p.t, &cfg.with_panel_width(cfg.panel_width / 2.0)).unwrap();
        let gap = (coarse.computed.real_part() - fine.computed.real_part()).abs();
        assert!(gap < cfg.abs_tol, "{}: {gap}", p.name);
    }
}
