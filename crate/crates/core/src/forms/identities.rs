//! Residual report for the structure equation, Bianchi identity and
//! Chern–Simons identities of a frame chart, with global sign calibration.

use super::{d_lower, d_tilde, de_rham_d, max_abs, trace_form, wedge, wedge_power, HomForm, ScalarForm};
use crate::algebra::{rat, RatFunc, Rational};
use crate::domain::GridPoint;
use crate::field::{Field, NumField, NumericCtx, Stencil};
use crate::frames::{
    curvature_of, curvature_tilde_of, gamma_from_frame, nabla_tilde, torsion_of, ChartSpec, Connection, Frame,
    FrameError, Tensor,
};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Numeric,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    Exact,
    Numeric,
    /// Exact when every frame entry is a rational function.
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportConfig {
    /// Threshold for `max|R|` in the homogeneity verdict.
    pub tol: f64,
    /// Threshold for identity residuals on the numeric backend.
    pub tol2: f64,
    pub grid: usize,
    pub step: f64,
    pub nested_step: f64,
    pub stencil: Stencil,
    pub backend: BackendChoice,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            tol: 1e-6,
            tol2: 1e-4,
            grid: 5,
            step: 1e-4,
            nested_step: 1e-3,
            stencil: Stencil::Seven,
            backend: BackendChoice::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Residuals {
    pub rtilde: f64,
    pub structure: f64,
    pub dtilde_r: f64,
    pub bianchi: f64,
    pub chern_simons: f64,
    pub nabla_torsion: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [self.rtilde, self.structure, self.dtilde_r, self.bianchi, self.chern_simons, self.nabla_torsion]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub chart: String,
    pub backend: Backend,
    pub sign: i32,
    pub residuals: Residuals,
    pub max_r: f64,
    pub locally_homogeneous: bool,
    pub tolerance: f64,
    pub identity_tolerance: f64,
    pub grid: Vec<usize>,
}

impl IdentityReport {
    /// Every identity residual is within tolerance: literal zero on the exact backend.
    pub fn identities_hold(&self) -> bool {
        let limit = match self.backend {
            Backend::Exact => 0.0,
            Backend::Numeric => self.identity_tolerance,
        };
        self.residuals.max() <= limit
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("chart `{chart}` requires the numeric backend")]
    NeedsNumeric { chart: String },
    #[error("no sign makes the structure equation hold on `{chart}` consistently with the reference sign {reference}")]
    Calibration { chart: String, reference: i32, plus: Residuals, minus: Residuals },
}

/// `Γ`, torsion, both curvatures and the grid, computed once per chart.
pub struct Geometry<F: Field> {
    pub frame: Frame<F>,
    pub gamma: Connection<F>,
    pub torsion: HomForm<F>,
    pub r: HomForm<F>,
    pub rtilde: HomForm<F>,
    pub grid: Vec<GridPoint>,
}

impl<F: Field> Geometry<F> {
    pub fn new(frame: Frame<F>, grid_per_axis: usize) -> Self {
        let ctx = frame.ctx().clone();
        let gamma = gamma_from_frame(&frame);
        let torsion = torsion_of(&gamma);
        let r = curvature_of(&ctx, &gamma);
        let rtilde = curvature_tilde_of(&ctx, &gamma);
        let grid = frame.domain().grid(grid_per_axis);
        Geometry { frame, gamma, torsion, r, rtilde, grid }
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.frame.ctx()
    }

    pub fn n(&self) -> usize {
        self.frame.n()
    }

    pub fn signed_r(&self, s: i32) -> HomForm<F> {
        self.r.scale(&Rational::from_integer(s.into()))
    }

    fn measure(&self, f: &HomForm<F>) -> f64 {
        max_abs(f.entries(), &self.grid)
    }

    /// `d̃T + T∧T − sR`
    pub fn structure_residual(&self, s: i32) -> HomForm<F> {
        let ctx = self.ctx();
        let t = &self.torsion;
        d_tilde(ctx, &self.gamma, t).add(&wedge(ctx, t, t)).sub(&self.signed_r(s))
    }

    /// `d̃(sR) − (sR)∧T + T∧(sR)`
    pub fn dtilde_r_residual(&self, s: i32) -> HomForm<F> {
        let ctx = self.ctx();
        let sr = self.signed_r(s);
        d_tilde(ctx, &self.gamma, &sr).sub(&wedge(ctx, &sr, &self.torsion)).add(&wedge(ctx, &self.torsion, &sr))
    }

    /// `d(sR)` with the transposed connection.
    pub fn bianchi_residual(&self, s: i32) -> HomForm<F> {
        d_lower(self.ctx(), &self.gamma, &self.signed_r(s))
    }

    /// `Tr((sR)∧T − T³/3)`
    pub fn chern_simons_form(&self, s: i32) -> ScalarForm<F> {
        let ctx = self.ctx();
        let sr = self.signed_r(s);
        let t3 = wedge_power(ctx, &self.torsion, 3);
        trace_form(ctx, &wedge(ctx, &sr, &self.torsion).sub(&t3.scale(&rat(1, 3))))
    }

    /// `d Tr((sR)∧T − T³/3) − Tr((sR)∧(sR))`
    pub fn chern_simons_residual(&self, s: i32) -> ScalarForm<F> {
        let ctx = self.ctx();
        let sr = self.signed_r(s);
        de_rham_d(ctx, &self.chern_simons_form(s)).sub(&trace_form(ctx, &wedge(ctx, &sr, &sr)))
    }

    /// `∇̃_r T^i_{jk} − s R^i_{jk,r}` where `T^i_{jk}` is the torsion of `∂_k` along `∂_j`
    /// read with form index `k`, i.e. `T_{(k)}^i{}_j`, and `R^i_{jk,r}` has form indices `j, k`.
    pub fn nabla_torsion_residual(&self, s: i32) -> Vec<Tensor<F>> {
        let ctx = self.ctx();
        let n = self.n();
        let t = Tensor::from_fn(n, 2, |i, l| self.torsion.entry(ctx, &[l[1]], i, l[0]));
        let sr = self.signed_r(s);
        (0..n)
            .map(|r| {
                let lhs = nabla_tilde(ctx, &self.gamma, &t, r);
                let rhs = Tensor::from_fn(n, 2, |i, l| sr.entry(ctx, &[l[0], l[1]], i, r));
                lhs.sub(&rhs)
            })
            .collect()
    }

    pub fn residuals(&self, s: i32) -> Residuals {
        let nabla = self.nabla_torsion_residual(s);
        Residuals {
            rtilde: self.measure(&self.rtilde),
            structure: self.measure(&self.structure_residual(s)),
            dtilde_r: self.measure(&self.dtilde_r_residual(s)),
            bianchi: self.measure(&self.bianchi_residual(s)),
            chern_simons: max_abs(self.chern_simons_residual(s).entries(), &self.grid),
            nabla_torsion: max_abs(nabla.iter().flat_map(Tensor::entries), &self.grid),
        }
    }

    pub fn max_r(&self) -> f64 {
        self.measure(&self.r)
    }

    /// `Tr(R^i)` (with the calibrated `sR`) and `Tr(T^i)` for `1 ≤ i ≤ max_i`.
    pub fn trace_powers(&self, s: i32, max_i: usize) -> TracePowers<F> {
        let ctx = self.ctx();
        let sr = self.signed_r(s);
        TracePowers {
            r_powers: (1..=max_i).map(|i| trace_form(ctx, &wedge_power(ctx, &sr, i))).collect(),
            t_powers: (1..=max_i).map(|i| trace_form(ctx, &wedge_power(ctx, &self.torsion, i))).collect(),
        }
    }

    pub fn scalar_max(&self, f: &ScalarForm<F>) -> f64 {
        max_abs(f.entries(), &self.grid)
    }
}

pub struct TracePowers<F: Field> {
    pub r_powers: Vec<ScalarForm<F>>,
    pub t_powers: Vec<ScalarForm<F>>,
}

/// `Tr(T^{2i+1})` together with the size of its differential.
pub struct SecondaryClass<F: Field> {
    pub i: usize,
    pub form: ScalarForm<F>,
    pub d_residual: f64,
    /// Set only on locally homogeneous charts.
    pub closed: Option<bool>,
}

pub fn secondary_class<F: Field>(geom: &Geometry<F>, i: usize, homogeneous: bool, limit: f64) -> SecondaryClass<F> {
    let ctx = geom.ctx();
    let form = trace_form(ctx, &wedge_power(ctx, &geom.torsion, 2 * i + 1));
    let d_residual = geom.scalar_max(&de_rham_d(ctx, &form));
    let closed = homogeneous.then_some(d_residual <= limit);
    SecondaryClass { i, form, d_residual, closed }
}

fn structure_passes(r: f64, backend: Backend, limit: f64) -> bool {
    match backend {
        Backend::Exact => r == 0.0,
        Backend::Numeric => r <= limit,
    }
}

/// Chart on which the sign is calibrated.
fn reference_chart() -> ChartSpec {
    crate::catalog::chart("deformed2").expect("reference chart is built in")
}

/// Sign `s` with `d̃T + T∧T = sR` on the reference chart, computed exactly once.
pub fn reference_sign() -> Result<i32, ReportError> {
    static SIGN: OnceLock<Result<i32, ReportError>> = OnceLock::new();
    SIGN.get_or_init(|| {
        let spec = reference_chart();
        let geom = Geometry::new(spec.exact_frame(5)?, 5);
        let plus = max_abs(geom.structure_residual(1).entries(), &geom.grid);
        let minus = max_abs(geom.structure_residual(-1).entries(), &geom.grid);
        match (plus == 0.0, minus == 0.0) {
            (true, false) => Ok(1),
            (false, true) => Ok(-1),
            _ => Err(ReportError::Calibration {
                chart: spec.name.clone(),
                reference: 0,
                plus: Residuals { structure: plus, ..Residuals::default() },
                minus: Residuals { structure: minus, ..Residuals::default() },
            }),
        }
    })
    .clone()
}

/// Calibrated sign for one chart and the full residual table.
pub fn calibrated_report<F: Field>(
    geom: &Geometry<F>,
    backend: Backend,
    config: &ReportConfig,
) -> Result<IdentityReport, ReportError> {
    let reference = reference_sign()?;
    let with_ref = geom.measure(&geom.structure_residual(reference));
    if !structure_passes(with_ref, backend, config.tol2) {
        return Err(ReportError::Calibration {
            chart: geom.frame.name().to_string(),
            reference,
            plus: geom.residuals(1),
            minus: geom.residuals(-1),
        });
    }
    let residuals = geom.residuals(reference);
    let max_r = geom.max_r();
    Ok(IdentityReport {
        chart: geom.frame.name().to_string(),
        backend,
        sign: reference,
        residuals,
        max_r,
        locally_homogeneous: max_r <= config.tol,
        tolerance: config.tol,
        identity_tolerance: config.tol2,
        grid: vec![config.grid.max(2); geom.n()],
    })
}

pub fn numeric_ctx(n: usize, config: &ReportConfig) -> NumericCtx {
    NumericCtx { n, step: config.step, nested_step: config.nested_step, stencil: config.stencil }
}

pub fn resolve_backend(spec: &ChartSpec, choice: BackendChoice) -> Result<Backend, ReportError> {
    match choice {
        BackendChoice::Exact if !spec.is_rational() => Err(ReportError::NeedsNumeric { chart: spec.name.clone() }),
        BackendChoice::Exact => Ok(Backend::Exact),
        BackendChoice::Numeric => Ok(Backend::Numeric),
        BackendChoice::Auto if spec.is_rational() => Ok(Backend::Exact),
        BackendChoice::Auto => Ok(Backend::Numeric),
    }
}

/// Chart geometry on either backend.
pub enum AnyGeometry {
    Exact(Geometry<RatFunc>),
    Numeric(Geometry<NumField>),
}

impl AnyGeometry {
    pub fn build(spec: &ChartSpec, config: &ReportConfig) -> Result<AnyGeometry, ReportError> {
        Ok(match resolve_backend(spec, config.backend)? {
            Backend::Exact => AnyGeometry::Exact(Geometry::new(spec.exact_frame(config.grid)?, config.grid)),
            Backend::Numeric => AnyGeometry::Numeric(Geometry::new(
                spec.numeric_frame(numeric_ctx(spec.n(), config), config.grid)?,
                config.grid,
            )),
        })
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyGeometry::Exact(_) => Backend::Exact,
            AnyGeometry::Numeric(_) => Backend::Numeric,
        }
    }

    pub fn report(&self, config: &ReportConfig) -> Result<IdentityReport, ReportError> {
        match self {
            AnyGeometry::Exact(g) => calibrated_report(g, Backend::Exact, config),
            AnyGeometry::Numeric(g) => calibrated_report(g, Backend::Numeric, config),
        }
    }
}

/// Runs the full identity report for a chart.
pub fn identity_report(spec: &ChartSpec, config: &ReportConfig) -> Result<IdentityReport, ReportError> {
    AnyGeometry::build(spec, config)?.report(config)
}

/// Chern–Simons identity residual and secondary-class closedness for one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernSimonsReport {
    pub report: IdentityReport,
    pub tr_rr_max: f64,
    /// `(i, degree of Tr(T^{2i+1}), d-residual, closedness flag)`
    pub secondary: Vec<(usize, usize, f64, Option<bool>)>,
}

pub fn chern_simons_report(spec: &ChartSpec, config: &ReportConfig) -> Result<ChernSimonsReport, ReportError> {
    fn run<F: Field>(g: &Geometry<F>, report: IdentityReport) -> ChernSimonsReport {
        let limit = match report.backend {
            Backend::Exact => 0.0,
            Backend::Numeric => report.identity_tolerance,
        };
        let ctx = g.ctx();
        let sr = g.signed_r(report.sign);
        let tr_rr_max = g.scalar_max(&trace_form(ctx, &wedge(ctx, &sr, &sr)));
        let max_i = g.n().saturating_sub(1) / 2;
        let secondary = (1..=max_i.max(1))
            .map(|i| {
                let c = secondary_class(g, i, report.locally_homogeneous, limit);
                (i, 2 * i + 1, c.d_residual, c.closed)
            })
            .collect();
        ChernSimonsReport { report, tr_rr_max, secondary }
    }
    let geom = AnyGeometry::build(spec, config)?;
    let report = geom.report(config)?;
    Ok(match &geom {
        AnyGeometry::Exact(g) => run(g, report),
        AnyGeometry::Numeric(g) => run(g, report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn exact(name: &str) -> IdentityReport {
        identity_report(&catalog::chart(name).unwrap(), &ReportConfig::default()).unwrap()
    }

    #[test]
    fn reference_sign_is_negative() {
        assert_eq!(reference_sign().unwrap(), -1);
    }

    #[test]
    fn abelian_and_heisenberg_are_flat() {
        for name in ["abelian2", "heisenberg3"] {
            let r = exact(name);
            assert_eq!(r.backend, Backend::Exact);
            assert_eq!(r.residuals, Residuals::default());
            assert_eq!(r.max_r, 0.0);
            assert!(r.locally_homogeneous);
        }
    }

    #[test]
    fn deformed_chart_is_not_homogeneous() {
        let r = exact("deformed2");
        assert_eq!(r.residuals, Residuals::default());
        assert!(r.max_r >= 1.0);
        assert!(!r.locally_homogeneous);
    }

    #[test]
    fn wrong_sign_is_detected() {
        let spec = catalog::chart("deformed2").unwrap();
        let g = Geometry::new(spec.exact_frame(5).unwrap(), 5);
        assert!(max_abs(g.structure_residual(1).entries(), &g.grid) > 0.0);
        assert!(max_abs(g.nabla_torsion_residual(1).iter().flat_map(Tensor::entries), &g.grid) > 0.0);
    }
}
