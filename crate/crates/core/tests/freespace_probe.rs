use rossby_core::acoustic::{
    acoustic_evolve, freespace_acoustic_probe, recurrence_horizon, AcousticError, AcousticState,
    RadialData,
};
use rossby_core::fields::{Grid2, ScalarField};

fn radial_points(extent: f64, count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|i| [extent * i as f64 / (count - 1) as f64, 0.0])
        .collect()
}

fn sup(values: &[rossby_core::acoustic::ProbeValue]) -> f64 {
    values
        .iter()
        .map(|v| v.s.abs().max(v.w_norm()))
        .fold(0.0, f64::max)
}

#[test]
fn zero_time_reproduces_data() {
    let data = RadialData::gaussian_potential(1.0, 1.0).unwrap();
    let pts: Vec<[f64; 2]> = (0..24)
        .map(|i| {
            let r = 0.25 * i as f64;
            let a = 0.7 * i as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    let out = freespace_acoustic_probe(&data, 0.0, &pts, 1e-10).unwrap();
    for (p, v) in pts.iter().zip(&out) {
        let r = p[0].hypot(p[1]);
        let dphi = -r * (-r * r / 2.0).exp();
        let (wx, wy) = if r > 0.0 {
            (dphi * p[0] / r, dphi * p[1] / r)
        } else {
            (0.0, 0.0)
        };
        assert!(v.s.abs() < 1e-6, "s at r = {r}: {}", v.s);
        assert!((v.w[0] - wx).abs() < 1e-6 && (v.w[1] - wy).abs() < 1e-6, "w at r = {r}");
    }
}

#[test]
fn sup_norm_decays() {
    let data = RadialData::gaussian_potential(1.0, 1.0).unwrap();
    let support = data.support_radius();
    let mut prev = f64::INFINITY;
    let mut first = 0.0;
    for tau in [1.0, 10.0, 25.0, 50.0] {
        let pts = radial_points(support + tau, 64);
        let s = sup(&freespace_acoustic_probe(&data, tau, &pts, 1e-8).unwrap());
        if tau == 1.0 {
            first = s;
        }
        assert!(s < prev, "sup at tau = {tau} is {s}, previous {prev}");
        prev = s;
    }
    assert!(prev < 0.2 * first);
}

#[test]
fn torus_agrees_before_recurrence() {
    let data = RadialData::gaussian_potential(1.0, 1.0).unwrap();
    let length = 32.0 * data.support_radius();
    let grid = Grid2::new(512, length).unwrap();
    let h = grid.spacing();
    let c = length / 2.0;
    let phi = ScalarField::from_fn(grid, |x, y| data.phi0((x - c).hypot(y - c)));
    let st = AcousticState::from_potential(ScalarField::zeros(grid), &phi, 1.0).unwrap();
    let tau = 10.0;
    assert!(tau < recurrence_horizon(&grid, 1.0));
    let torus = acoustic_evolve(&st, tau).unwrap();
    let centre = grid.n() / 2;
    let offsets: Vec<usize> = (0..40).map(|i| i * 2).collect();
    let pts: Vec<[f64; 2]> = offsets.iter().map(|&i| [i as f64 * h, 0.0]).collect();
    let free = freespace_acoustic_probe(&data, tau, &pts, 1e-10).unwrap();
    for (&i, v) in offsets.iter().zip(&free) {
        let ix = centre + i;
        let ds = (torus.s.get(ix, centre) - v.s).abs();
        let dw = (torus.w.x().get(ix, centre) - v.w[0])
            .abs()
            .max((torus.w.y().get(ix, centre) - v.w[1]).abs());
        assert!(ds.max(dw) < 1e-3, "offset {i}: {ds:e} {dw:e}");
    }
}

#[test]
fn unreachable_tolerance_is_reported() {
    let data = RadialData::gaussian_potential(1.0, 1.0).unwrap();
    let res = freespace_acoustic_probe(&data, 3.0, &[[1.0, 0.0]], 1e-300);
    assert!(matches!(res, Err(AcousticError::Quadrature { .. })), "{res:?}");
    let many = radial_points(1.0, 65);
    assert!(freespace_acoustic_probe(&data, 1.0, &many, 1e-8).is_err());
}
