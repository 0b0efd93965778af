//! Polar-code successive-cancellation decoding toolkit.
//!
//! * [`code`] / [`encode`]: code definitions, frozen-set construction and
//!   (systematic) encoding;
//! * [`decoder`]: reference and shortcut SC decoders;
//! * [`quant`]: sign-magnitude LLR arithmetic and the adaptively quantized decoder;
//! * [`arch`]: unrolled-pipeline graph, register reduction/balancing and the
//!   multicore latency/throughput model with its cycle simulator;
//! * [`sim`]: Monte-Carlo AWGN link simulation.

pub mod arch;
pub mod code;
pub mod construction;
pub mod decoder;
pub mod encode;
pub mod error;
pub mod quant;
pub mod sim;

pub use code::PolarCode;
pub use error::{Error, Result};
