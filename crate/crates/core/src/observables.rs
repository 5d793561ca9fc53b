//! Position and momentum matrix elements, expectation values in coherent
//! states, and uncertainty scans.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::coherent::CoherentState;
use crate::error::{Error, Result};
use crate::fock::{Basis, Eigenbasis};
use crate::numerics::{gauss_rule, hyp2f1_terminating, ln_factorial, log_gamma_signed, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObsKind {
    X,
    X2,
    P,
    P2,
}

impl ObsKind {
    pub const ALL: [ObsKind; 4] = [ObsKind::X, ObsKind::X2, ObsKind::P, ObsKind::P2];

    pub fn name(self) -> &'static str {
        match self {
            ObsKind::X => "X",
            ObsKind::X2 => "X2",
            ObsKind::P => "P",
            ObsKind::P2 => "P2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    ClosedForm,
    Quadrature,
}

/// Matrix elements ⟨n|O|m⟩ for n, m < size.
#[derive(Debug, Clone)]
pub struct MatrixElementTable {
    pub kind: ObsKind,
    pub entries: DMatrix<C64>,
    pub source: TableSource,
    pub basis: Basis,
}

impl MatrixElementTable {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// A diagonal table, e.g. the Hamiltonian in its eigenbasis.
    pub fn diagonal(kind: ObsKind, basis: Basis, values: &[f64]) -> Self {
        let n = values.len();
        let entries = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) });
        MatrixElementTable { kind, entries, source: TableSource::Quadrature, basis }
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The printed closed forms for the truncated oscillator, valid for n ≥ m.
/// Entries with n < m follow from symmetry (X, X2, P2) or Hermiticity (P).
pub fn matrix_element_closed(kind: ObsKind, n: usize, m: usize, basis: Basis) -> Result<C64> {
    if basis != Basis::Trunc {
        return Err(Error::UnsupportedBasis(basis));
    }
    if n < m {
        let v = matrix_element_closed(kind, m, n, basis)?;
        return Ok(if kind == ObsKind::P { v.conj() } else { v });
    }
    let i = C64::new(0.0, 1.0);
    let mf = m as f64;
    let d = n - m;
    let df = d as f64;
    // √((2n+1)!/(2m+1)!) in logs
    let ln_ratio = 0.5 * (ln_factorial(2 * n + 1) - ln_factorial(2 * m + 1));
    let (lg, sg) = log_gamma_signed(df - 0.5)?;
    let value = match kind {
        ObsKind::X => C64::new(x_closed(n, m)?, 0.0),
        ObsKind::X2 => {
            let ln_pref = 0.5 * (ln_factorial(2 * n + 1) + ln_factorial(2 * m + 1)) - ln_factorial(n + m);
            let bracket = 0.5 * delta(n + 1, m) + delta(n, m) + 0.5 * delta(n, m + 1);
            C64::new(0.5 * delta(n, m) + ln_pref.exp() * bracket, 0.0)
        }
        ObsKind::P => {
            let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 } * sg;
            let ln_mag = ln_ratio + df * 2f64.ln() + lg - ln_factorial(2 * d + 1);
            let f = hyp2f1_terminating(-(2 * m as i64), df + 0.5, 2.0 * (df + 1.0), 2.0)?;
            let second = (2.0 * mf + 1.0) / std::f64::consts::PI * sign * ln_mag.exp() * (2.0 * df - 1.0) * f;
            i * x_closed(n, m)? - i * second
        }
        ObsKind::P2 => {
            let ln_pref = 0.5 * (ln_factorial(2 * n + 1) + ln_factorial(2 * m + 1)) - ln_factorial(n + m);
            let bracket = 1.5 * delta(n + 1, m) + delta(n, m) - 0.5 * delta(n, m + 1);
            let extra = if m >= 1 { -2.0 * (2.0 * mf * (2.0 * mf + 1.0)).sqrt() * delta(m - 1, n) } else { 0.0 };
            C64::new(0.5 * delta(n, m) + extra + 2.0 * ln_pref.exp() * bracket, 0.0)
        }
    };
    Ok(value)
}

fn x_closed(n: usize, m: usize) -> Result<f64> {
    let d = n - m;
    let df = d as f64;
    let ln_ratio = 0.5 * (ln_factorial(2 * n + 1) - ln_factorial(2 * m + 1));
    let (lg, sg) = log_gamma_signed(df - 0.5)?;
    // (−2)^{d−1}
    let sign = if d % 2 == 1 { 1.0 } else { -1.0 } * sg;
    let ln_mag = ln_ratio + (df - 1.0) * 2f64.ln() + lg - std::f64::consts::PI.ln() - ln_factorial(2 * d);
    let f = hyp2f1_terminating(-(2 * m as i64) - 1, df - 0.5, 2.0 * df + 1.0, 2.0)?;
    Ok(sign * ln_mag.exp() * f)
}

/// The table of closed-form values for n, m < size.
pub fn closed_form_table(kind: ObsKind, size: usize) -> Result<MatrixElementTable> {
    let mut entries = DMatrix::from_element(size, size, C64::new(0.0, 0.0));
    for n in 0..size {
        for m in 0..size {
            entries[(n, m)] = matrix_element_closed(kind, n, m, Basis::Trunc)?;
        }
    }
    Ok(MatrixElementTable { kind, entries, source: TableSource::ClosedForm, basis: Basis::Trunc })
}

/// The four quadrature tables of a basis, built from one pass over the nodes.
#[derive(Debug, Clone)]
pub struct ObservableTables {
    pub x: MatrixElementTable,
    pub x2: MatrixElementTable,
    pub p: MatrixElementTable,
    pub p2: MatrixElementTable,
}

impl ObservableTables {
    pub fn get(&self, kind: ObsKind) -> &MatrixElementTable {
        match kind {
            ObsKind::X => &self.x,
            ObsKind::X2 => &self.x2,
            ObsKind::P => &self.p,
            ObsKind::P2 => &self.p2,
        }
    }

    /// ∫ψ_n x ψ_m, ∫ψ_n x² ψ_m, −i∫ψ_n ψ_m′ and ∫ψ_n′ψ_m′ over (0, ∞) for
    /// n, m < size. `rule` must be a Gauss rule (full-integrand weights).
    pub fn quadrature(basis: &dyn Eigenbasis, size: usize, rule: &QuadratureRule) -> Self {
        let n = size;
        let samples: Vec<(f64, f64, Vec<f64>, Vec<f64>)> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&x, &w)| {
                let (v, d) = basis.values_and_derivatives(n - 1, x);
                (x, w, v, d)
            })
            .collect();
        let mut x = DMatrix::<f64>::zeros(n, n);
        let mut x2 = DMatrix::<f64>::zeros(n, n);
        let mut p = DMatrix::<f64>::zeros(n, n);
        let mut p2 = DMatrix::<f64>::zeros(n, n);
        for (xv, w, v, d) in &samples {
            for a in 0..n {
                let wa = w * v[a];
                let wda = w * d[a];
                if wa == 0.0 && wda == 0.0 {
                    continue;
                }
                for b in 0..n {
                    x[(a, b)] += wa * xv * v[b];
                    x2[(a, b)] += wa * xv * xv * v[b];
                    p[(a, b)] += wa * d[b];
                    p2[(a, b)] += wda * d[b];
                }
            }
        }
        let b = basis.basis();
        let real = |kind, m: DMatrix<f64>| MatrixElementTable {
            kind,
            entries: m.map(|v| C64::new(v, 0.0)),
            source: TableSource::Quadrature,
            basis: b,
        };
        ObservableTables {
            x: real(ObsKind::X, x),
            x2: real(ObsKind::X2, x2),
            p: MatrixElementTable {
                kind: ObsKind::P,
                entries: p.map(|v| C64::new(0.0, -v)),
                source: TableSource::Quadrature,
                basis: b,
            },
            p2: real(ObsKind::P2, p2),
        }
    }

    /// Quadrature tables with a Gauss rule of sufficient degree for
    /// polynomial-times-Gaussian bases of the given size.
    pub fn for_size(basis: &dyn Eigenbasis, size: usize) -> Self {
        let degree = (4 * size + 16).max(200);
        Self::quadrature(basis, size, &gauss_rule(degree))
    }
}

/// Single quadrature entry (for spot checks); the table constructor is the
/// efficient route.
pub fn matrix_element_quadrature(
    kind: ObsKind,
    n: usize,
    m: usize,
    basis: &dyn Eigenbasis,
    rule: &QuadratureRule,
) -> Result<C64> {
    let integrand = |x: f64| {
        let (vn, dn) = basis.value_and_derivative(n, x);
        let (vm, dm) = basis.value_and_derivative(m, x);
        match kind {
            ObsKind::X => vn * x * vm,
            ObsKind::X2 => vn * x * x * vm,
            ObsKind::P => vn * dm,
            ObsKind::P2 => dn * dm,
        }
    };
    let v = rule.integrate(integrand)?;
    Ok(if kind == ObsKind::P { C64::new(0.0, -v) } else { C64::new(v, 0.0) })
}

/// One closed-form entry that misses its quadrature value.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub kind: ObsKind,
    pub n: usize,
    pub m: usize,
    pub closed_form: C64,
    pub quadrature: C64,
    pub abs_diff: f64,
}

/// Compares closed forms with quadrature for n, m ≤ n_max and lists every
/// entry off by more than `tol`.
pub fn reconcile(kind: ObsKind, n_max: usize, tables: &ObservableTables, tol: f64) -> Result<Vec<Discrepancy>> {
    let q = tables.get(kind);
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n_max {
            let c = matrix_element_closed(kind, n, m, Basis::Trunc)?;
            let v = q.entries[(n, m)];
            let abs_diff = (c - v).norm();
            if !(abs_diff <= tol) {
                out.push(Discrepancy { kind, n, m, closed_form: c, quadrature: v, abs_diff });
            }
        }
    }
    Ok(out)
}

/// CSV with columns kind,n,m,closed_form,quadrature,abs_diff. For the
/// momentum the entries are purely imaginary and the coefficient of i is
/// written.
pub fn write_discrepancy_csv<W: Write>(mut w: W, rows: &[Discrepancy]) -> std::io::Result<()> {
    writeln!(w, "kind,n,m,closed_form,quadrature,abs_diff")?;
    for r in rows {
        let (c, q) = if r.kind == ObsKind::P { (r.closed_form.im, r.quadrature.im) } else { (r.closed_form.re, r.quadrature.re) };
        writeln!(w, "{},{},{},{:.15e},{:.15e},{:.6e}", r.kind.name(), r.n, r.m, c, q, r.abs_diff)?;
    }
    Ok(())
}

fn check_terms(table: &MatrixElementTable, cs: &CoherentState, n_terms: usize) -> Result<usize> {
    if cs.vector.basis != table.basis {
        return Err(Error::BasisMismatch { expected: table.basis, found: cs.vector.basis });
    }
    let n = n_terms.min(cs.truncation());
    if n > table.size() {
        return Err(Error::IndexOutOfRange { index: n - 1, len: table.size() });
    }
    Ok(n)
}

/// ⟨z|O|z⟩ = Σ Λ_mn O_nm summed over the first n_terms levels, in the
/// folded form Σ_n |c_n|² O_nn + 2 Re Σ_{n<m} c_n* c_m O_nm (Hermitian O).
pub fn expectation(table: &MatrixElementTable, cs: &CoherentState, n_terms: usize) -> Result<f64> {
    let n = check_terms(table, cs, n_terms)?;
    let c = &cs.vector.amplitudes;
    let mut diag = 0.0;
    let mut off = 0.0;
    for a in 0..n {
        diag += c[a].norm_sqr() * table.entries[(a, a)].re;
        for b in (a + 1)..n {
            off += (c[a].conj() * c[b] * table.entries[(a, b)]).re;
        }
    }
    Ok(diag + 2.0 * off)
}

/// The unfolded double sum, complex; its imaginary part measures how far
/// the table is from Hermitian.
pub fn expectation_full(table: &MatrixElementTable, cs: &CoherentState, n_terms: usize) -> Result<C64> {
    let n = check_terms(table, cs, n_terms)?;
    let c = &cs.vector.amplitudes;
    let mut s = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            s += c[a].conj() * c[b] * table.entries[(a, b)];
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyRecord {
    pub z_modulus: f64,
    pub sigma_x: f64,
    pub sigma_p: f64,
    pub product: f64,
    pub truncation: usize,
}

/// σ_x, σ_p for one state.
pub fn uncertainty(tables: &ObservableTables, cs: &CoherentState, n_terms: usize) -> Result<UncertaintyRecord> {
    let ex = expectation(&tables.x, cs, n_terms)?;
    let ex2 = expectation(&tables.x2, cs, n_terms)?;
    let ep = expectation(&tables.p, cs, n_terms)?;
    let ep2 = expectation(&tables.p2, cs, n_terms)?;
    let sigma_x = (ex2 - ex * ex).max(0.0).sqrt();
    let sigma_p = (ep2 - ep * ep).max(0.0).sqrt();
    Ok(UncertaintyRecord {
        z_modulus: cs.z.norm(),
        sigma_x,
        sigma_p,
        product: sigma_x * sigma_p,
        truncation: n_terms.min(cs.truncation()),
    })
}

/// Uncertainty records over a list of |z| values (z taken real), computed
/// in parallel and returned in input order.
pub fn uncertainty_scan<F>(states: F, tables: &ObservableTables, z_moduli: &[f64], n_terms: usize) -> Result<Vec<UncertaintyRecord>>
where
    F: Fn(f64) -> Result<CoherentState> + Sync,
{
    z_moduli.par_iter().map(|&r| uncertainty(tables, &states(r)?, n_terms)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{build_cs, energy_expectation, CsFamily};
    use crate::fock::{LadderSpec, TruncOscillator};

    fn tables(size: usize) -> ObservableTables {
        ObservableTables::for_size(&TruncOscillator::new(), size)
    }

    #[test]
    fn spot_values() {
        let t = tables(16);
        let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
        assert!((matrix_element_closed(ObsKind::X, 0, 0, Basis::Trunc).unwrap().re - two_over_sqrt_pi).abs() < 1e-14);
        assert!((t.x.entries[(0, 0)].re - two_over_sqrt_pi).abs() < 1e-12);
        assert!((matrix_element_closed(ObsKind::X2, 0, 0, Basis::Trunc).unwrap().re - 1.5).abs() < 1e-14);
        assert!((t.x2.entries[(0, 0)].re - 1.5).abs() < 1e-12);
        assert!((t.p2.entries[(0, 0)].re - 1.5).abs() < 1e-12);
        for n in 0..16 {
            assert!(t.p.entries[(n, n)].norm() < 1e-12);
            assert!(matrix_element_closed(ObsKind::P, n.min(8), n.min(8), Basis::Trunc).unwrap().norm() < 1e-8);
        }
        assert!(matches!(matrix_element_closed(ObsKind::X, 0, 0, Basis::SusyIso), Err(Error::UnsupportedBasis(_))));
    }

    #[test]
    fn position_and_momentum_closed_forms_match_quadrature() {
        let t = tables(16);
        for kind in [ObsKind::X, ObsKind::X2, ObsKind::P] {
            let bad = reconcile(kind, 8, &t, 1e-8).unwrap();
            assert!(bad.is_empty(), "{kind:?}: {bad:?}");
        }
    }

    #[test]
    fn printed_p2_is_reported() {
        let t = tables(16);
        let bad = reconcile(ObsKind::P2, 8, &t, 1e-8).unwrap();
        assert!(bad.iter().any(|d| d.n == 0 && d.m == 0));
        let mut csv = Vec::new();
        write_discrepancy_csv(&mut csv, &bad).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("kind,n,m,closed_form,quadrature,abs_diff\nP2,0,0,"));
    }

    #[test]
    fn table_symmetries() {
        let t = tables(20);
        for a in 0..20 {
            for b in 0..20 {
                assert!((t.x.entries[(a, b)] - t.x.entries[(b, a)]).norm() < 1e-10);
                assert!((t.x2.entries[(a, b)] - t.x2.entries[(b, a)]).norm() < 1e-10);
                assert!((t.p2.entries[(a, b)] - t.p2.entries[(b, a)]).norm() < 1e-8);
                // Hermitian: p_nm = conj(p_mn), purely imaginary
                assert!((t.p.entries[(a, b)] - t.p.entries[(b, a)].conj()).norm() < 1e-10);
                assert!(t.p.entries[(a, b)].re.abs() < 1e-14);
                if a.abs_diff(b) >= 2 {
                    assert!(t.x2.entries[(a, b)].norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn second_derivative_form_of_p2() {
        let osc = TruncOscillator::new();
        let rule = gauss_rule(200);
        let t = tables(10);
        for n in 0..10 {
            for m in 0..10 {
                let v = rule
                    .integrate(|x| -osc.eigenfunction(n, x) * osc.eigenfunction_derivatives(m, x, 2)[2])
                    .unwrap();
                assert!((v - t.p2.entries[(n, m)].re).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn single_entry_quadrature() {
        let osc = TruncOscillator::new();
        let rule = gauss_rule(400);
        let x10 = matrix_element_quadrature(ObsKind::X, 1, 0, &osc, &rule).unwrap();
        assert!((x10 - matrix_element_closed(ObsKind::X, 1, 0, Basis::Trunc).unwrap()).norm() < 1e-8);
        let x00 = matrix_element_quadrature(ObsKind::X, 0, 0, &osc, &rule).unwrap();
        assert!((x00.re - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn expectation_paths_agree() {
        let spec = LadderSpec::truncated_oscillator();
        let cs = build_cs(CsFamily::LMinus, &spec, C64::new(1.0, 0.0), 2.0, 64).unwrap();
        let energies: Vec<f64> = (0..64).map(|k| spec.xi(k)).collect();
        let h = MatrixElementTable::diagonal(ObsKind::X2, Basis::Trunc, &energies);
        let e = expectation(&h, &cs, 64).unwrap();
        assert!((e - energy_expectation(&cs)).abs() < 1e-12);
        assert!((e - (0.5 + 1.0 / 1f64.tanh())).abs() < 1e-10);

        let t = tables(64);
        let vac = build_cs(CsFamily::LMinus, &spec, C64::new(0.0, 0.0), 2.0, 64).unwrap();
        assert!((expectation(&t.x, &vac, 30).unwrap() - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let zc = build_cs(CsFamily::LMinus, &spec, C64::new(0.8, 1.1), 2.0, 64).unwrap();
        for kind in ObsKind::ALL {
            let full = expectation_full(t.get(kind), &zc, 64).unwrap();
            assert!(full.im.abs() < 1e-12);
            assert!((full.re - expectation(t.get(kind), &zc, 64).unwrap()).abs() < 1e-12);
        }
        let wrong = build_cs(CsFamily::LMinus, &LadderSpec::harmonic(), C64::new(0.5, 0.0), 2.0, 64).unwrap();
        assert!(matches!(expectation(&t.x, &wrong, 30), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn uncertainty_examples() {
        let spec = LadderSpec::truncated_oscillator();
        let t = tables(64);
        let lm = |r: f64| build_cs(CsFamily::LMinus, &spec, C64::new(r, 0.0), 2.0, 64);
        let zs: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let recs = uncertainty_scan(lm, &t, &zs, 64).unwrap();
        for r in &recs {
            assert!(r.product >= 0.5 - 5e-3, "{r:?}");
            if r.z_modulus <= 3.0 {
                assert!(r.sigma_x < r.sigma_p, "{r:?}");
            }
        }
        assert!((recs.last().unwrap().product - 0.5).abs() < 0.05);

        let lin = |r: f64| build_cs(CsFamily::LinLMinus, &spec, C64::new(r, 0.0), 2.0, 64);
        let recs = uncertainty_scan(lin, &t, &[0.5, 1.0, 2.0], 64).unwrap();
        assert!(recs[0].sigma_p > recs[0].sigma_x);
        assert!((recs[1].sigma_x - recs[1].sigma_p).abs() < 0.02);
        assert!(recs[2].sigma_x > recs[2].sigma_p);
    }

    #[test]
    fn expectation_stable_under_more_terms() {
        let spec = LadderSpec::truncated_oscillator();
        let t = tables(64);
        for &r in &[0.5, 1.0, 2.0] {
            let cs = build_cs(CsFamily::LMinus, &spec, C64::new(r, 0.0), 2.0, 64).unwrap();
            for kind in ObsKind::ALL {
                let a = expectation(t.get(kind), &cs, 30).unwrap();
                let b = expectation(t.get(kind), &cs, 60).unwrap();
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
}
