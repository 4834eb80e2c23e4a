//! System-level Monte Carlo simulator of two coexisting AP populations in an
//! unlicensed band: an 802.11n LBT legacy population and a new entrant
//! population running one of several MAC/PHY combinations.
//!
//! The pipeline of one realization is
//! [`scenario`] → [`propagation`] → [`spectrum`] → [`mac`] → [`phy`];
//! [`montecarlo`] repeats it over seeds and pools the per-AP throughputs.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod mac;
pub mod montecarlo;
pub mod phy;
pub mod propagation;
pub mod scenario;
pub mod seed;
pub mod spectrum;

pub use error::{Error, Result};
pub use mac::{EntrantVariant, MacAssignment, MacOptions, MacVariant};
pub use montecarlo::{run_campaign, run_realization, CampaignConfig, CampaignResult, FigurePreset};
pub use phy::{PhyKind, PhyProfiles, ThroughputReport};
pub use propagation::{LinkTable, PropagationProfile};
pub use scenario::{NetworkRealization, Population, ScenarioKind};
pub use spectrum::{ChannelPlan, ChannelScheme, CsGraph};
