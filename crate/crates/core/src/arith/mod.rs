//! Arithmetic of Γ(−1, p) and its principal congruence subgroups.

mod group;
mod residue;
mod spectrum;

pub use group::{length_from_abs_trace, CongruenceLevel, FuchsianParams, GroupElement};
pub use residue::{diameter_upper_bound, genus_estimate, residue_group_order, DEFAULT_CHI0};
pub use spectrum::{
    cache_file_name, cached_spectrum, certificate_from, enumerate_level_elements, read_spectrum, stable_systole,
    systole_certificate, write_spectrum, LengthSpectrum, SpectrumEntry, StabilityCheck, SystoleCertificate,
};
