//! Robust beamforming problem assembly for the secure layered-video
//! cognitive-radio downlink: SINR and leakage constraints in trace form,
//! S-procedure LMIs for the CSI uncertainty balls, the power-scaling
//! problem behind the suboptimal schemes, and the two baselines.

mod assemble;
mod error;
mod lmi;
mod types;

pub use assemble::{
    assemble_baseline1, assemble_baseline2, assemble_power_scaling_problem,
    assemble_relaxed_problem, assemble_relaxed_problem_with, extract_power_scaling_solution,
    extract_solution, fold_single_layer_qos, synthetic_solution, AssembledPowerScaling,
    AssembledProblem, FaultInjection, PowerScalingIndex, RelaxedIndex,
};
pub use error::AssemblyError;
pub use lmi::{build_c3bar_lmi, build_c4bar_lmi};
#[doc(hidden)]
pub use lmi::build_c4bar_lmi_impl;
pub use types::{BeamformingSolution, NetworkChannels, QosSpec};
