//! Explicit checks on the analytic inputs: prime sums in progressions,
//! Brun-Titchmarsh ratios, the residue set of the second proof, and the
//! threshold function of the first proof.

mod bounds;
mod classes;
pub mod hp;
mod progression;

pub use bounds::{
    first_proof_threshold, phi_lower_bound_check, phi_scan, threshold_samples, PhiScan,
    ThresholdSample, THRESHOLD_START,
};
pub use classes::{
    class_set_c, excluded_residue, excluded_residue_report, in_class_set, rough_prime_count,
    ClassSetReport, ExcludedResidue, RoughPrimeCount,
};
pub use progression::{
    bt_check, bt_table, check_prop_pom, progression_sums, progression_table, BtRecord,
    PrimeTable, ProgressionSumRecord, PropPomReport, PropPomRow,
};
