//! Market data model: hospitals, doctors, couples and their preferences.

mod instance;
mod io;
mod matching;
mod prefs;
mod ranking;
mod validate;

pub use instance::{Couple, Hospital, InstanceError, MarketBuilder, MarketInstance, Role, SetExtensionSpec};
pub use io::{matching_to_json, parse_instance, parse_matching, serialize_instance, serialize_matching, ParseError};
pub use matching::{Matching, MatchingError};
pub use prefs::{
    all_pairs, all_slots, none_pairs, ConditionalError, CouplePreference, DoctorIx, DoctorPreference,
    ExplicitSetOrder, HospitalIx, HospitalPreference, Member, SetExtension, Slot, SlotPair, NONE_TOKEN,
};
pub use ranking::{RankError, Ranking};
pub use validate::{validate_instance, Issue, Mode, Severity, ValidationReport};
