//! The graph schema: node classes with their subtype table, edge relations
//! with (domain, range) signatures, and typed attribute values.

use crate::vocab::{DividerType, ParticipantCategory, StopKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeomKind {
    Point,
    Polygon,
    LineString,
}

impl GeomKind {
    pub fn class_name(&self) -> &'static str {
        match self {
            Self::Point => "Point",
            Self::Polygon => "Polygon",
            Self::LineString => "LineString",
        }
    }
}

/// Most-specific node class. Participant categories, stop-area kinds and
/// geometry kinds are carried as payload so every node has exactly one
/// most-specific type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeType {
    Trip,
    Location,
    Sequence,
    Scene,
    Participant(ParticipantCategory),
    SceneParticipant,
    Lane,
    LaneConnector,
    LaneSnippet,
    LaneSlice,
    OrderedPose,
    Pose,
    RoadBlock,
    StopArea(StopKind),
    TrafficLight,
    PedCrossing,
    Walkway,
    CarparkArea,
    Intersection,
    Geometry(GeomKind),
}

impl NodeType {
    /// Most-specific class name, used in IRIs and stats keys.
    pub fn class_name(&self) -> &'static str {
        match self {
            Self::Trip => "Trip",
            Self::Location => "Location",
            Self::Sequence => "Sequence",
            Self::Scene => "Scene",
            Self::Participant(c) => c.class_name(),
            Self::SceneParticipant => "SceneParticipant",
            Self::Lane => "Lane",
            Self::LaneConnector => "LaneConnector",
            Self::LaneSnippet => "LaneSnippet",
            Self::LaneSlice => "LaneSlice",
            Self::OrderedPose => "OrderedPose",
            Self::Pose => "Pose",
            Self::RoadBlock => "RoadBlock",
            Self::StopArea(k) => k.class_name(),
            Self::TrafficLight => "TrafficLight",
            Self::PedCrossing => "PedCrossing",
            Self::Walkway => "Walkway",
            Self::CarparkArea => "CarparkArea",
            Self::Intersection => "Intersection",
            Self::Geometry(k) => k.class_name(),
        }
    }

    /// Declared superclasses, emitted as additional type statements.
    pub fn superclass_names(&self) -> &'static [&'static str] {
        match self {
            Self::Participant(_) => &["Participant"],
            Self::StopArea(_) => &["StopArea"],
            Self::OrderedPose => &["Pose"],
            Self::Geometry(_) => &["Geometry"],
            _ => &[],
        }
    }

    /// Inverse of [`Self::class_name`] over most-specific names, plus the
    /// plain `Pose` class which is instantiable on its own.
    pub fn from_class_name(name: &str) -> Option<NodeType> {
        let t = match name {
            "Trip" => Self::Trip,
            "Location" => Self::Location,
            "Sequence" => Self::Sequence,
            "Scene" => Self::Scene,
            "SceneParticipant" => Self::SceneParticipant,
            "Lane" => Self::Lane,
            "LaneConnector" => Self::LaneConnector,
            "LaneSnippet" => Self::LaneSnippet,
            "LaneSlice" => Self::LaneSlice,
            "OrderedPose" => Self::OrderedPose,
            "Pose" => Self::Pose,
            "RoadBlock" => Self::RoadBlock,
            "TrafficLight" => Self::TrafficLight,
            "PedCrossing" => Self::PedCrossing,
            "Walkway" => Self::Walkway,
            "CarparkArea" => Self::CarparkArea,
            "Intersection" => Self::Intersection,
            "Point" => Self::Geometry(GeomKind::Point),
            "Polygon" => Self::Geometry(GeomKind::Polygon),
            "LineString" => Self::Geometry(GeomKind::LineString),
            other => {
                if let Some(c) = ParticipantCategory::from_class_name(other) {
                    return Some(Self::Participant(c));
                }
                if let Some(k) = StopKind::from_class_name(other) {
                    return Some(Self::StopArea(k));
                }
                return None;
            }
        };
        Some(t)
    }

    /// Feature-table key: participant, stop-area and geometry subtypes share
    /// one table each.
    pub fn table_key(&self) -> &'static str {
        match self {
            Self::Participant(_) => "Participant",
            Self::StopArea(_) => "StopArea",
            Self::Geometry(_) => "Geometry",
            other => other.class_name(),
        }
    }

    /// Map element classes that occupy an area and can carry agents.
    pub fn is_area_element(&self) -> bool {
        matches!(
            self,
            Self::Walkway
                | Self::CarparkArea
                | Self::Lane
                | Self::LaneSnippet
                | Self::RoadBlock
                | Self::StopArea(_)
                | Self::PedCrossing
                | Self::Intersection
        )
    }

    pub fn is_pose_like(&self) -> bool {
        matches!(self, Self::Pose | Self::OrderedPose)
    }
}

/// Directed edge relations with their (domain, range) signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    HasScene,
    HasNextScene,
    HasPreviousScene,
    HasSequence,
    HasLocation,
    HasSceneParticipant,
    IsSceneParticipantOf,
    InNextScene,
    HasNextLane,
    HasPreviousLane,
    HasLeftLane,
    HasRightLane,
    HasIncomingLane,
    HasOutgoingLane,
    HasLaneSnippet,
    HasNextLaneSnippet,
    SwitchVia(DividerType),
    LaneHasSlice,
    HasNextLaneSlice,
    ConnectorHasPose,
    HasNextPose,
    CausesStopAt,
    ConnectsWalkways,
    WalkwayIsNextTo,
    CarparkIsNextTo,
    HasNextRoadBlock,
    HasOpposingRoadBlock,
    IsLaneOnRoadBlock,
    IsConnectorOnRoadSegment,
    TrafficLightHasPose,
    HasShape,
    IsOn,
    Longitudinal,
    Lateral,
    Intersecting,
}

impl EdgeType {
    pub fn name(&self) -> &'static str {
        match self {
            Self::HasScene => "hasScene",
            Self::HasNextScene => "hasNextScene",
            Self::HasPreviousScene => "hasPreviousScene",
            Self::HasSequence => "hasSequence",
            Self::HasLocation => "hasLocation",
            Self::HasSceneParticipant => "hasSceneParticipant",
            Self::IsSceneParticipantOf => "isSceneParticipantOf",
            Self::InNextScene => "inNextScene",
            Self::HasNextLane => "hasNextLane",
            Self::HasPreviousLane => "hasPreviousLane",
            Self::HasLeftLane => "hasLeftLane",
            Self::HasRightLane => "hasRightLane",
            Self::HasIncomingLane => "hasIncomingLane",
            Self::HasOutgoingLane => "hasOutgoingLane",
            Self::HasLaneSnippet => "hasLaneSnippet",
            Self::HasNextLaneSnippet => "hasNextLaneSnippet",
            Self::SwitchVia(d) => d.switch_edge_name(),
            Self::LaneHasSlice => "laneHasSlice",
            Self::HasNextLaneSlice => "hasNextLaneSlice",
            Self::ConnectorHasPose => "connectorHasPose",
            Self::HasNextPose => "hasNextPose",
            Self::CausesStopAt => "causesStopAt",
            Self::ConnectsWalkways => "connectsWalkways",
            Self::WalkwayIsNextTo => "walkwayIsNextTo",
            Self::CarparkIsNextTo => "carparkIsNextTo",
            Self::HasNextRoadBlock => "hasNextRoadBlock",
            Self::HasOpposingRoadBlock => "hasOpposingRoadBlock",
            Self::IsLaneOnRoadBlock => "isLaneOnRoadBlock",
            Self::IsConnectorOnRoadSegment => "isConnectorOnRoadSegment",
            Self::TrafficLightHasPose => "trafficLightHasPose",
            Self::HasShape => "hasShape",
            Self::IsOn => "isOn",
            Self::Longitudinal => "longitudinal",
            Self::Lateral => "lateral",
            Self::Intersecting => "intersecting",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let t = match name {
            "hasScene" => Self::HasScene,
            "hasNextScene" => Self::HasNextScene,
            "hasPreviousScene" => Self::HasPreviousScene,
            "hasSequence" => Self::HasSequence,
            "hasLocation" => Self::HasLocation,
            "hasSceneParticipant" => Self::HasSceneParticipant,
            "isSceneParticipantOf" => Self::IsSceneParticipantOf,
            "inNextScene" => Self::InNextScene,
            "hasNextLane" => Self::HasNextLane,
            "hasPreviousLane" => Self::HasPreviousLane,
            "hasLeftLane" => Self::HasLeftLane,
            "hasRightLane" => Self::HasRightLane,
            "hasIncomingLane" => Self::HasIncomingLane,
            "hasOutgoingLane" => Self::HasOutgoingLane,
            "hasLaneSnippet" => Self::HasLaneSnippet,
            "hasNextLaneSnippet" => Self::HasNextLaneSnippet,
            "laneHasSlice" => Self::LaneHasSlice,
            "hasNextLaneSlice" => Self::HasNextLaneSlice,
            "connectorHasPose" => Self::ConnectorHasPose,
            "hasNextPose" => Self::HasNextPose,
            "causesStopAt" => Self::CausesStopAt,
            "connectsWalkways" => Self::ConnectsWalkways,
            "walkwayIsNextTo" => Self::WalkwayIsNextTo,
            "carparkIsNextTo" => Self::CarparkIsNextTo,
            "hasNextRoadBlock" => Self::HasNextRoadBlock,
            "hasOpposingRoadBlock" => Self::HasOpposingRoadBlock,
            "isLaneOnRoadBlock" => Self::IsLaneOnRoadBlock,
            "isConnectorOnRoadSegment" => Self::IsConnectorOnRoadSegment,
            "trafficLightHasPose" => Self::TrafficLightHasPose,
            "hasShape" => Self::HasShape,
            "isOn" => Self::IsOn,
            "longitudinal" => Self::Longitudinal,
            "lateral" => Self::Lateral,
            "intersecting" => Self::Intersecting,
            other => return DividerType::from_switch_edge_name(other).map(Self::SwitchVia),
        };
        Some(t)
    }

    pub fn domain_ok(&self, t: NodeType) -> bool {
        use NodeType as N;
        match self {
            Self::HasScene => t == N::Sequence,
            Self::HasNextScene | Self::HasPreviousScene => t == N::Scene,
            Self::HasSequence | Self::HasLocation => t == N::Trip,
            Self::HasSceneParticipant => t == N::Scene,
            Self::IsSceneParticipantOf | Self::InNextScene => t == N::SceneParticipant,
            Self::HasNextLane | Self::HasPreviousLane | Self::HasLeftLane | Self::HasRightLane => {
                t == N::Lane
            }
            Self::HasIncomingLane | Self::HasOutgoingLane => t == N::LaneConnector,
            Self::HasLaneSnippet => t == N::Lane,
            Self::HasNextLaneSnippet | Self::SwitchVia(_) => t == N::LaneSnippet,
            Self::LaneHasSlice => t == N::Lane,
            Self::HasNextLaneSlice => t == N::LaneSlice,
            Self::ConnectorHasPose => t == N::LaneConnector,
            Self::HasNextPose => t == N::OrderedPose,
            Self::CausesStopAt => matches!(t, N::TrafficLight | N::PedCrossing),
            Self::ConnectsWalkways => t == N::PedCrossing,
            Self::WalkwayIsNextTo => t == N::Walkway,
            Self::CarparkIsNextTo => t == N::CarparkArea,
            Self::HasNextRoadBlock | Self::HasOpposingRoadBlock => t == N::RoadBlock,
            Self::IsLaneOnRoadBlock => t == N::Lane,
            Self::IsConnectorOnRoadSegment => t == N::LaneConnector,
            Self::TrafficLightHasPose => t == N::TrafficLight,
            Self::HasShape => {
                t.is_area_element() && t != N::LaneSnippet || t == N::LaneConnector
            }
            Self::IsOn => t == N::SceneParticipant,
            Self::Longitudinal | Self::Lateral | Self::Intersecting => t == N::SceneParticipant,
        }
    }

    pub fn range_ok(&self, t: NodeType) -> bool {
        use NodeType as N;
        match self {
            Self::HasScene | Self::HasNextScene | Self::HasPreviousScene => t == N::Scene,
            Self::HasSequence => t == N::Sequence,
            Self::HasLocation => t == N::Location,
            Self::HasSceneParticipant => t == N::SceneParticipant,
            Self::IsSceneParticipantOf => matches!(t, N::Participant(_)),
            Self::InNextScene => t == N::SceneParticipant,
            Self::HasNextLane
            | Self::HasPreviousLane
            | Self::HasLeftLane
            | Self::HasRightLane
            | Self::HasIncomingLane
            | Self::HasOutgoingLane => t == N::Lane,
            Self::HasLaneSnippet | Self::HasNextLaneSnippet | Self::SwitchVia(_) => {
                t == N::LaneSnippet
            }
            Self::LaneHasSlice | Self::HasNextLaneSlice => t == N::LaneSlice,
            Self::ConnectorHasPose | Self::HasNextPose => t == N::OrderedPose,
            Self::CausesStopAt => matches!(t, N::StopArea(_)),
            Self::ConnectsWalkways => t == N::Walkway,
            Self::WalkwayIsNextTo | Self::CarparkIsNextTo => t == N::Lane,
            Self::HasNextRoadBlock | Self::HasOpposingRoadBlock | Self::IsLaneOnRoadBlock => {
                t == N::RoadBlock
            }
            Self::IsConnectorOnRoadSegment => t == N::Intersection,
            Self::TrafficLightHasPose => t.is_pose_like(),
            Self::HasShape => matches!(t, N::Geometry(_)),
            Self::IsOn => t.is_area_element(),
            Self::Longitudinal | Self::Lateral | Self::Intersecting => t == N::SceneParticipant,
        }
    }

    /// Relations with at most one target per source, enforced at insert time.
    pub fn is_functional(&self) -> bool {
        matches!(self, Self::HasIncomingLane | Self::HasOutgoingLane)
    }
}

/// Typed attribute value stored on a node.
#[derive(Debug, Clone, PartialEq)]
pub enum AttrValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl AttrValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Float(v) => Some(*v),
            Self::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Self::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Self::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Self::Str(v) => Some(v),
            _ => None,
        }
    }
}

impl From<i64> for AttrValue {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<f64> for AttrValue {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<bool> for AttrValue {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for AttrValue {
    fn from(v: &str) -> Self {
        Self::Str(v.to_string())
    }
}

impl From<String> for AttrValue {
    fn from(v: String) -> Self {
        Self::Str(v)
    }
}

/// Recognized attribute names.
pub mod attr {
    pub const TIMESTAMP: &str = "hasTimestamp";
    pub const RIGHT_HAND_TRAFFIC: &str = "hasRightHandTraffic";
    pub const SNIPPET_LENGTH: &str = "snippetHasLength";
    pub const SLICE_WIDTH: &str = "laneSliceHasWidth";
    pub const ORIENTATION: &str = "poseHasOrientation";
    pub const TL_TYPE: &str = "hasTrafficLightType";
    pub const SPEED: &str = "speed";
    pub const LENGTH: &str = "length";
    pub const WIDTH: &str = "width";
    pub const HEIGHT: &str = "height";
    pub const WKT: &str = "wkt";
    pub const GPS_WKT: &str = "gps_wkt";
    pub const X: &str = "x";
    pub const Y: &str = "y";
    pub const IS_EGO: &str = "isEgo";
    pub const NAME: &str = "name";
    pub const LEFT_DIVIDER: &str = "leftDivider";
    pub const RIGHT_DIVIDER: &str = "rightDivider";
}
