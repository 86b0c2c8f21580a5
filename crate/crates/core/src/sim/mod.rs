//! Monte-Carlo link simulation, reference curves and complexity models.

pub mod analytic;
pub mod cp;
pub mod flops;
pub mod kappa;
pub mod link;
pub mod monte_carlo;
pub mod report;
pub mod scenario;

pub use analytic::analytic_ber_rayleigh;
pub use cp::{cp_study, floor_ratio, CpCurve, FLOOR_RATIO};
pub use flops::{flop_count, relative_complexity, ComplexityAssumptions, FlopEntry, FlopModel, FlopReport};
pub use kappa::{sensibility_kappa, sensibility_table, Kappa, SensibilityRow};
pub use link::{LinkSimulator, TrialOutcome};
pub use monte_carlo::{le_within, run_monte_carlo, run_point, BerCurve, BerPoint, Z_95};
pub use scenario::{ChannelMode, ScenarioConfig, StoppingRule};
