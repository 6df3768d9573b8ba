//! Loss, the SPSA optimizer, the training loop and its on-disk artifacts.

mod checkpoint;
mod log;
mod loss;
mod spsa;
mod trainer;

pub use checkpoint::{Checkpoint, FORMAT_VERSION};
pub use log::{smooth, EpochRecord, TrainLog, COLUMNS as TRAIN_LOG_COLUMNS, SMOOTHING};
pub use loss::{loss, mode_mse};
pub use spsa::{Spsa, SpsaConfig, StepReport};
pub use trainer::{checkpoint_name, example_loss, initial_params, train, TrainOutcome};
