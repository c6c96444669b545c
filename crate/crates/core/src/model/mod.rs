//! Scenario generation and received-signal synthesis.

mod channel;
mod config;
mod protocol;

pub use channel::{
    complex_gaussian, generate_channels, synthesize_blocks, synthesize_received, ChannelSet,
    ReceivedSignal,
};
pub use config::SystemConfig;
pub use protocol::{
    build_phase_matrix, build_pilot_matrix, build_preset_grid, draw_motion_schedule, motion_phase,
    perturb_positions, FrisProtocol, MotionSchedule, PresetGrid, RealizedMotion,
};
