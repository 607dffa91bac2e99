//! The two resampling schemes: neighborhood-block bootstrap and dependent
//! wild bootstrap.

pub mod block;
pub mod dwb;

pub use block::{bb_center, bb_resample, bb_run, bb_variance, make_blocks, BBReplicate, BlockSet};
pub use dwb::{
    dwb_draw_weights, dwb_pseudo_sample, dwb_run, dwb_run_with, dwb_variance, DwbWeights,
    WeightLaw,
};
