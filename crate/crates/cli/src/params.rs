use clap::{Args, ValueEnum};
use rope_core::equalizer::{Method, RopeParams};
use rope_core::retinex::{Preconditioner, RtvParams};

pub fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: rope_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PreconditionerArg {
    Jacobi,
    /// Modified incomplete Cholesky.
    Mic,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Co-occurrence window side (odd).
    #[arg(long, default_value_t = 7)]
    pub window: usize,
    /// Marginalization passes.
    #[arg(long, default_value_t = 2)]
    pub iterations: usize,
    /// Number of intensity levels.
    #[arg(long, default_value_t = rope_core::DEFAULT_LEVELS)]
    pub levels: usize,
    #[arg(long, default_value_t = RtvParams::default().lambda)]
    pub lambda: f64,
    #[arg(long, default_value_t = RtvParams::default().sigma)]
    pub sigma: f64,
    #[arg(long, default_value_t = RtvParams::default().eps_rtv)]
    pub eps_rtv: f64,
    /// Outer reweighting iterations of the illumination solve.
    #[arg(long, default_value_t = RtvParams::default().iterations)]
    pub rtv_iterations: usize,
    #[arg(long, default_value_t = RtvParams::default().solver_tol)]
    pub solver_tol: f64,
    #[arg(long, default_value_t = RtvParams::default().solver_max_steps)]
    pub solver_max_steps: usize,
    #[arg(long, value_enum, default_value = "jacobi")]
    pub preconditioner: PreconditionerArg,
    /// Guard added to intensity and illumination in the log ratio.
    #[arg(long, default_value_t = RopeParams::default().eps_ref)]
    pub eps_ref: f64,
}

impl ParamArgs {
    pub fn to_params(&self) -> rope_core::Result<RopeParams> {
        let params = RopeParams {
            window: self.window,
            tau: self.iterations,
            levels: self.levels,
            eps_ref: self.eps_ref,
            retinex: RtvParams {
                lambda: self.lambda,
                sigma: self.sigma,
                eps_rtv: self.eps_rtv,
                iterations: self.rtv_iterations,
                solver_tol: self.solver_tol,
                solver_max_steps: self.solver_max_steps,
                preconditioner: match self.preconditioner {
                    PreconditionerArg::Jacobi => Preconditioner::Jacobi,
                    PreconditionerArg::Mic => Preconditioner::IncompleteCholesky,
                },
            },
        };
        params.validate()?;
        Ok(params)
    }
}

/// Parameter block echoed into sidecar files.
#[derive(Debug, serde::Serialize)]
pub struct ParamsRecord {
    pub window: usize,
    pub iterations: usize,
    pub levels: usize,
    pub lambda: f64,
    pub sigma: f64,
    pub eps_rtv: f64,
    pub rtv_iterations: usize,
    pub solver_tol: f64,
    pub solver_max_steps: usize,
    pub preconditioner: &'static str,
    pub eps_ref: f64,
}

impl From<&RopeParams> for ParamsRecord {
    fn from(p: &RopeParams) -> Self {
        Self {
            window: p.window,
            iterations: p.tau,
            levels: p.levels,
            lambda: p.retinex.lambda,
            sigma: p.retinex.sigma,
            eps_rtv: p.retinex.eps_rtv,
            rtv_iterations: p.retinex.iterations,
            solver_tol: p.retinex.solver_tol,
            solver_max_steps: p.retinex.solver_max_steps,
            preconditioner: match p.retinex.preconditioner {
                Preconditioner::Jacobi => "jacobi",
                Preconditioner::IncompleteCholesky => "mic",
            },
            eps_ref: p.eps_ref,
        }
    }
}
