use std::f64::consts::PI;

use truncosc::coherent::CsFamily;
use truncosc::entangle::{entropy_scan, BeamSplitterSetting, OddExpansion, SusySource, TruncSource, EXPANSION_FLOOR};
use truncosc::susy::{Subspace, SusyModel};

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn l_minus_entropy_is_flat() {
    let source = TruncSource::new(CsFamily::LMinus, 1.0).unwrap();
    let pts = entropy_scan(&source, &grid(0.0, 2.0, 21), BeamSplitterSetting::new(PI / 2.0, 0.0)).unwrap();
    let s: Vec<f64> = pts.iter().map(|p| p.s).collect();
    let (lo, hi) = (s.iter().cloned().fold(f64::MAX, f64::min), s.iter().cloned().fold(f64::MIN, f64::max));
    println!("trunc l-minus S in [{lo:.6}, {hi:.6}]");
    assert!(s.iter().all(|&v| (0.0..1.0).contains(&v)));
    assert!(pts.iter().all(|p| p.converged));
    assert!(hi - lo < 0.15, "spread {}", hi - lo);
}

#[test]
fn created_level_ground_state_expands_over_odd_levels() {
    let model = SusyModel::fourth_order();
    let e = OddExpansion::new(&model.new_eigenfunction(0).unwrap(), 60).unwrap();
    println!("recovered {:.3e} deficit", 1.0 - e.recovered);
    assert!(e.recovered >= EXPANSION_FLOOR);
}

#[test]
fn new_subspace_entropy() {
    let model = SusyModel::fourth_order();
    let source = SusySource::new(&model, Subspace::New).unwrap();
    let pts = entropy_scan(&source, &grid(0.0, 2.0, 11), BeamSplitterSetting::new(PI / 2.0, 0.0)).unwrap();
    for p in &pts {
        println!("new |z|={:.2} S={:.6} refined={:.6}", p.z_abs, p.s, p.s_refined);
        assert!((p.s - 0.5).abs() < 0.2);
        assert!(p.converged);
    }
}

#[test]
fn iso_subspace_entropy() {
    let model = SusyModel::fourth_order();
    let source = SusySource::new(&model, Subspace::Iso).unwrap();
    let pts = entropy_scan(&source, &grid(0.0, 2.0, 5), BeamSplitterSetting::new(PI / 2.0, 0.0)).unwrap();
    for p in &pts {
        println!("iso |z|={:.2} S={:.6} refined={:.6}", p.z_abs, p.s, p.s_refined);
        assert!((0.0..1.0).contains(&p.s));
    }
}

