//! Unrolled-pipeline model of the decoder and its multicore wrapper.

pub mod flow;
pub mod graph;
pub mod rrb;
pub mod timing;

pub use flow::{simulate_frame_flow, FlowResult};
pub use graph::{build_unrolled_graph, DelayModel, GraphNode, UnitKind, UnrolledGraph};
pub use rrb::{asap_levels, calibrate, rrb_schedule, validate_schedule, Calibration, PipelineSchedule};
pub use timing::{latency, phase_wait_cycles, throughput, ArchConfig, LatencyInterval, Throughput};
