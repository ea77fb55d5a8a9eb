//! Closed vocabularies shared by the interchange format and the graph schema:
//! participant categories, lane divider types, stop-area kinds and traffic
//! light orientations. Every enum here is closed; parsers reject anything
//! outside these lists.

use serde::{Deserialize, Serialize};

/// The 23 traffic participant categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParticipantCategory {
    #[serde(rename = "animal")]
    Animal,
    #[serde(rename = "human.pedestrian.adult")]
    HumanPedestrianAdult,
    #[serde(rename = "human.pedestrian.child")]
    HumanPedestrianChild,
    #[serde(rename = "human.pedestrian.construction_worker")]
    HumanPedestrianConstructionWorker,
    #[serde(rename = "human.pedestrian.personal_mobility")]
    HumanPedestrianPersonalMobility,
    #[serde(rename = "human.pedestrian.police_officer")]
    HumanPedestrianPoliceOfficer,
    #[serde(rename = "human.pedestrian.stroller")]
    HumanPedestrianStroller,
    #[serde(rename = "human.pedestrian.wheelchair")]
    HumanPedestrianWheelchair,
    #[serde(rename = "movable_object.barrier")]
    MovableObjectBarrier,
    #[serde(rename = "movable_object.debris")]
    MovableObjectDebris,
    #[serde(rename = "movable_object.pushable_pullable")]
    MovableObjectPushablePullable,
    #[serde(rename = "movable_object.trafficcone")]
    MovableObjectTrafficcone,
    #[serde(rename = "static_object.bicycle_rack")]
    StaticObjectBicycleRack,
    #[serde(rename = "vehicle.bicycle")]
    VehicleBicycle,
    #[serde(rename = "vehicle.bus.bendy")]
    VehicleBusBendy,
    #[serde(rename = "vehicle.bus.rigid")]
    VehicleBusRigid,
    #[serde(rename = "vehicle.car")]
    VehicleCar,
    #[serde(rename = "vehicle.construction")]
    VehicleConstruction,
    #[serde(rename = "vehicle.emergency.ambulance")]
    VehicleEmergencyAmbulance,
    #[serde(rename = "vehicle.emergency.police")]
    VehicleEmergencyPolice,
    #[serde(rename = "vehicle.motorcycle")]
    VehicleMotorcycle,
    #[serde(rename = "vehicle.trailer")]
    VehicleTrailer,
    #[serde(rename = "vehicle.truck")]
    VehicleTruck,
}

impl ParticipantCategory {
    pub const ALL: [ParticipantCategory; 23] = [
        Self::Animal,
        Self::HumanPedestrianAdult,
        Self::HumanPedestrianChild,
        Self::HumanPedestrianConstructionWorker,
        Self::HumanPedestrianPersonalMobility,
        Self::HumanPedestrianPoliceOfficer,
        Self::HumanPedestrianStroller,
        Self::HumanPedestrianWheelchair,
        Self::MovableObjectBarrier,
        Self::MovableObjectDebris,
        Self::MovableObjectPushablePullable,
        Self::MovableObjectTrafficcone,
        Self::StaticObjectBicycleRack,
        Self::VehicleBicycle,
        Self::VehicleBusBendy,
        Self::VehicleBusRigid,
        Self::VehicleCar,
        Self::VehicleConstruction,
        Self::VehicleEmergencyAmbulance,
        Self::VehicleEmergencyPolice,
        Self::VehicleMotorcycle,
        Self::VehicleTrailer,
        Self::VehicleTruck,
    ];

    /// The dotted wire-format label, e.g. `vehicle.car`.
    pub fn label(&self) -> &'static str {
        match self {
            Self::Animal => "animal",
            Self::HumanPedestrianAdult => "human.pedestrian.adult",
            Self::HumanPedestrianChild => "human.pedestrian.child",
            Self::HumanPedestrianConstructionWorker => "human.pedestrian.construction_worker",
            Self::HumanPedestrianPersonalMobility => "human.pedestrian.personal_mobility",
            Self::HumanPedestrianPoliceOfficer => "human.pedestrian.police_officer",
            Self::HumanPedestrianStroller => "human.pedestrian.stroller",
            Self::HumanPedestrianWheelchair => "human.pedestrian.wheelchair",
            Self::MovableObjectBarrier => "movable_object.barrier",
            Self::MovableObjectDebris => "movable_object.debris",
            Self::MovableObjectPushablePullable => "movable_object.pushable_pullable",
            Self::MovableObjectTrafficcone => "movable_object.trafficcone",
            Self::StaticObjectBicycleRack => "static_object.bicycle_rack",
            Self::VehicleBicycle => "vehicle.bicycle",
            Self::VehicleBusBendy => "vehicle.bus.bendy",
            Self::VehicleBusRigid => "vehicle.bus.rigid",
            Self::VehicleCar => "vehicle.car",
            Self::VehicleConstruction => "vehicle.construction",
            Self::VehicleEmergencyAmbulance => "vehicle.emergency.ambulance",
            Self::VehicleEmergencyPolice => "vehicle.emergency.police",
            Self::VehicleMotorcycle => "vehicle.motorcycle",
            Self::VehicleTrailer => "vehicle.trailer",
            Self::VehicleTruck => "vehicle.truck",
        }
    }

    /// The schema class name, e.g. `VehicleCar`.
    pub fn class_name(&self) -> &'static str {
        match self {
            Self::Animal => "Animal",
            Self::HumanPedestrianAdult => "HumanPedestrianAdult",
            Self::HumanPedestrianChild => "HumanPedestrianChild",
            Self::HumanPedestrianConstructionWorker => "HumanPedestrianConstructionWorker",
            Self::HumanPedestrianPersonalMobility => "HumanPedestrianPersonalMobility",
            Self::HumanPedestrianPoliceOfficer => "HumanPedestrianPoliceOfficer",
            Self::HumanPedestrianStroller => "HumanPedestrianStroller",
            Self::HumanPedestrianWheelchair => "HumanPedestrianWheelchair",
            Self::MovableObjectBarrier => "MovableObjectBarrier",
            Self::MovableObjectDebris => "MovableObjectDebris",
            Self::MovableObjectPushablePullable => "MovableObjectPushablePullable",
            Self::MovableObjectTrafficcone => "MovableObjectTrafficcone",
            Self::StaticObjectBicycleRack => "StaticObjectBicycleRack",
            Self::VehicleBicycle => "VehicleBicycle",
            Self::VehicleBusBendy => "VehicleBusBendy",
            Self::VehicleBusRigid => "VehicleBusRigid",
            Self::VehicleCar => "VehicleCar",
            Self::VehicleConstruction => "VehicleConstruction",
            Self::VehicleEmergencyAmbulance => "VehicleEmergencyAmbulance",
            Self::VehicleEmergencyPolice => "VehicleEmergencyPolice",
            Self::VehicleMotorcycle => "VehicleMotorcycle",
            Self::VehicleTrailer => "VehicleTrailer",
            Self::VehicleTruck => "VehicleTruck",
        }
    }

    /// Stable feature-encoding index (position in [`Self::ALL`]).
    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|c| c == self).expect("category in ALL")
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.label() == label)
    }

    pub fn from_class_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.class_name() == name)
    }

    pub fn is_vehicle(&self) -> bool {
        self.label().starts_with("vehicle.")
    }
}

/// Lane border marking classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DividerType {
    NoMarking,
    SingleDashed,
    DoubleDashed,
    SingleSolid,
    DoubleSolid,
    SolidDashed,
    DashedSolid,
    RoadEdge,
}

impl DividerType {
    pub const ALL: [DividerType; 8] = [
        Self::NoMarking,
        Self::SingleDashed,
        Self::DoubleDashed,
        Self::SingleSolid,
        Self::DoubleSolid,
        Self::SolidDashed,
        Self::DashedSolid,
        Self::RoadEdge,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Self::NoMarking => "no_marking",
            Self::SingleDashed => "single_dashed",
            Self::DoubleDashed => "double_dashed",
            Self::SingleSolid => "single_solid",
            Self::DoubleSolid => "double_solid",
            Self::SolidDashed => "solid_dashed",
            Self::DashedSolid => "dashed_solid",
            Self::RoadEdge => "road_edge",
        }
    }

    /// Edge name of the lane-change relation across this divider.
    pub fn switch_edge_name(&self) -> &'static str {
        match self {
            Self::NoMarking => "switchViaNoMarking",
            Self::SingleDashed => "switchViaSingleDashed",
            Self::DoubleDashed => "switchViaDoubleDashed",
            Self::SingleSolid => "switchViaSingleSolid",
            Self::DoubleSolid => "switchViaDoubleSolid",
            Self::SolidDashed => "switchViaSolidDashed",
            Self::DashedSolid => "switchViaDashedSolid",
            Self::RoadEdge => "switchViaRoadEdge",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|d| d == self).expect("divider in ALL")
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|d| d.label() == label)
    }

    pub fn from_switch_edge_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|d| d.switch_edge_name() == name)
    }
}

/// Reasons a stop area exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopKind {
    PedCrossing,
    TrafficLight,
    Yield,
    StopSign,
    Turn,
}

impl StopKind {
    pub const ALL: [StopKind; 5] = [
        Self::PedCrossing,
        Self::TrafficLight,
        Self::Yield,
        Self::StopSign,
        Self::Turn,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Self::PedCrossing => "ped_crossing",
            Self::TrafficLight => "traffic_light",
            Self::Yield => "yield",
            Self::StopSign => "stop_sign",
            Self::Turn => "turn",
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            Self::PedCrossing => "PedCrossingStopArea",
            Self::TrafficLight => "TrafficLightStopArea",
            Self::Yield => "YieldStopArea",
            Self::StopSign => "StopSignArea",
            Self::Turn => "TurnStopArea",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|k| k == self).expect("stop kind in ALL")
    }

    pub fn from_class_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.class_name() == name)
    }
}

/// Traffic light stacking orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlType {
    Horizontal,
    Vertical,
}

impl TlType {
    pub const ALL: [TlType; 2] = [Self::Horizontal, Self::Vertical];

    /// Single-letter attribute value.
    pub fn letter(&self) -> &'static str {
        match self {
            Self::Horizontal => "H",
            Self::Vertical => "V",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|t| t == self).expect("tl type in ALL")
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "H" => Some(Self::Horizontal),
            "V" => Some(Self::Vertical),
            _ => None,
        }
    }
}
