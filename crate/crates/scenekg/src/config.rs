//! Pipeline configuration. Every geometric threshold used by the compilers
//! lives here with its default so builds are reproducible from a single
//! config snapshot.

use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Arc-length spacing of ordered poses and lane slices.
    pub pose_resolution_m: f64,
    /// Maximum lane snippet length; longer sections are split into equal pieces.
    pub snippet_max_len_m: f64,
    /// Walkway/carpark-to-lane adjacency threshold.
    pub is_next_to_m: f64,
    /// Search radius when linking pedestrian crossings to walkways.
    pub crossing_walkway_m: f64,
    /// Maximum border gap for two lanes to count as lateral neighbours.
    pub lateral_adjacency_m: f64,
    /// Heading tolerance around 180 degrees for opposing road blocks.
    pub opposing_heading_tol_deg: f64,
    /// Maximum hull distance for opposing road blocks.
    pub opposing_distance_m: f64,
    /// Half-width of the buffered connector centerline used for overlap tests.
    pub connector_buffer_m: f64,
    /// Heading tolerance for two lanes to count as same-direction neighbours.
    pub lateral_heading_tol_deg: f64,
    /// Lane hops considered when classifying agent-to-agent relations.
    pub relation_hop_limit: u32,
    /// Distance at which an agent counts as travelling a connector.
    pub relation_connector_m: f64,
    /// Road-block hops followed when extracting the relevant map.
    pub block_hops: u32,
    /// Test the agent footprint corners for containment instead of the center only.
    pub is_on_footprint: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            pose_resolution_m: 2.0,
            snippet_max_len_m: 20.0,
            is_next_to_m: 4.0,
            crossing_walkway_m: 5.0,
            lateral_adjacency_m: 0.5,
            opposing_heading_tol_deg: 30.0,
            opposing_distance_m: 6.0,
            connector_buffer_m: 0.5,
            lateral_heading_tol_deg: 45.0,
            relation_hop_limit: 2,
            relation_connector_m: 2.0,
            block_hops: 4,
            is_on_footprint: false,
        }
    }
}

impl Config {
    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        Self::from_json_str(&text).map_err(|e| ConfigError::Json(path.display().to_string(), e))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("invalid config {0}: {1}")]
    Json(String, #[source] serde_json::Error),
}
