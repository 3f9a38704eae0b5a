//! Length spectra of Γ(N) by bounded trace enumeration.
//!
//! For a fixed `a`, the determinant condition reads
//! `c² = p·b² + p·d² − a² + 1`, so the search runs over `(a, b, d)` and tests
//! the right-hand side for a perfect square. The form is indefinite, so the
//! search is only complete inside its box; lengths found are upper bounds for
//! the systole of the quotient surface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::group::{length_from_abs_trace, CongruenceLevel, FuchsianParams, GroupElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumEntry {
    pub abs_trace: i64,
    pub length: f64,
    /// Every tuple found with this trace, ordered by `b² + c² + d²` and then
    /// descending lexicographically; the first one is the reported witness.
    pub witnesses: Vec<[i64; 4]>,
}

impl SpectrumEntry {
    pub fn witness_count(&self) -> usize {
        self.witnesses.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LengthSpectrum {
    pub p: FuchsianParams,
    #[serde(rename = "N")]
    pub level: CongruenceLevel,
    pub trace_bound: i64,
    pub box_bound: i64,
    pub entries: Vec<SpectrumEntry>,
}

impl LengthSpectrum {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn shortest(&self) -> Option<&SpectrumEntry> {
        self.entries.first()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystoleCertificate {
    pub length: f64,
    pub witness: GroupElement,
}

fn validate_bounds(trace_bound: i64, box_bound: i64) -> Result<()> {
    if trace_bound <= 2 {
        return Err(Error::Parameter(format!("trace bound {trace_bound} must exceed 2")));
    }
    if box_bound < 1 {
        return Err(Error::Parameter(format!("box bound {box_bound} must be at least 1")));
    }
    Ok(())
}

fn integer_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

fn height(w: &[i64; 4]) -> i128 {
    w[1..].iter().map(|&x| i128::from(x) * i128::from(x)).sum()
}

/// Witnesses with first coordinate `a` (taken positive, the canonical sign).
fn witnesses_for(a: i64, p: i64, n: i64, box_bound: i64) -> Vec<[i64; 4]> {
    let steps = box_bound / n;
    let mut found = Vec::new();
    let a2 = i128::from(a) * i128::from(a);
    let p = i128::from(p);
    for bi in -steps..=steps {
        let b = bi * n;
        for di in -steps..=steps {
            let d = di * n;
            let rhs = p * (i128::from(b) * i128::from(b) + i128::from(d) * i128::from(d)) - a2 + 1;
            let Some(c) = integer_sqrt(rhs) else { continue };
            if c % i128::from(n) != 0 {
                continue;
            }
            let c = c as i64;
            found.push([a, b, c, d]);
            if c != 0 {
                found.push([a, b, -c, d]);
            }
        }
    }
    found
}

/// Enumerates the hyperbolic elements of Γ(N) with `|trace| ≤ trace_bound`
/// and `|b|, |d| ≤ box_bound`, grouped by trace.
pub fn enumerate_level_elements(
    params: FuchsianParams,
    level: CongruenceLevel,
    trace_bound: i64,
    box_bound: i64,
) -> Result<LengthSpectrum> {
    validate_bounds(trace_bound, box_bound)?;
    let n = level.get();
    let p = params.p();

    let mut entries: Vec<SpectrumEntry> = (2..=trace_bound / 2)
        .into_par_iter()
        .filter(|a| {
            let r = a.rem_euclid(n);
            r == 1 % n || r == (n - 1) % n
        })
        .filter_map(|a| {
            let mut witnesses = witnesses_for(a, p, n, box_bound);
            if witnesses.is_empty() {
                return None;
            }
            witnesses.sort_unstable_by(|x, y| height(x).cmp(&height(y)).then_with(|| y.cmp(x)));
            Some(SpectrumEntry {
                abs_trace: 2 * a,
                length: length_from_abs_trace(2 * a),
                witnesses,
            })
        })
        .collect();
    entries.sort_by_key(|e| e.abs_trace);

    Ok(LengthSpectrum {
        p: params,
        level,
        trace_bound,
        box_bound,
        entries,
    })
}

pub fn systole_certificate(
    params: FuchsianParams,
    level: CongruenceLevel,
    trace_bound: i64,
    box_bound: i64,
) -> Result<SystoleCertificate> {
    certificate_from(&enumerate_level_elements(params, level, trace_bound, box_bound)?)
}

pub fn certificate_from(spectrum: &LengthSpectrum) -> Result<SystoleCertificate> {
    let entry = spectrum.shortest().ok_or(Error::NoCertificate {
        trace_bound: spectrum.trace_bound,
        box_bound: spectrum.box_bound,
    })?;
    let [a, b, c, d] = entry.witnesses[0];
    Ok(SystoleCertificate {
        length: entry.length,
        witness: GroupElement::new(a, b, c, d, spectrum.p)?,
    })
}

/// A certificate together with whether it survived doubling the search box.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCheck {
    pub certificate: SystoleCertificate,
    pub doubled_box_length: f64,
    pub stable: bool,
}

/// Recomputes the certificate with `2·box_bound`; the minimal trace is
/// accepted as the systole only if it does not move.
pub fn stable_systole(
    params: FuchsianParams,
    level: CongruenceLevel,
    trace_bound: i64,
    box_bound: i64,
) -> Result<StabilityCheck> {
    let certificate = systole_certificate(params, level, trace_bound, box_bound)?;
    let doubled = systole_certificate(params, level, trace_bound, 2 * box_bound)?;
    Ok(StabilityCheck {
        stable: doubled.length == certificate.length,
        doubled_box_length: doubled.length,
        certificate,
    })
}

/// Cache file name for a spectrum keyed by its search parameters.
pub fn cache_file_name(params: FuchsianParams, level: CongruenceLevel, trace_bound: i64, box_bound: i64) -> String {
    format!(
        "spectrum_p{}_N{}_t{}_b{}.json",
        params.p(),
        level.get(),
        trace_bound,
        box_bound
    )
}

/// Writes the spectrum through a temporary file in the same directory and
/// renames it into place.
pub fn write_spectrum(spectrum: &LengthSpectrum, path: &Path) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Parameter(format!("{} has no file name", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp{}", file_name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        serde_json::to_writer(&mut f, spectrum)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a cached spectrum, checking that every entry is consistent with the
/// search parameters it claims.
pub fn read_spectrum(path: &Path) -> Result<LengthSpectrum> {
    let bytes = fs::read(path)?;
    let invalid = |reason: String| Error::CacheInvalid {
        path: path.to_path_buf(),
        reason,
    };
    let spectrum: LengthSpectrum = serde_json::from_slice(&bytes).map_err(|e| invalid(e.to_string()))?;
    validate_spectrum(&spectrum).map_err(invalid)?;
    Ok(spectrum)
}

fn validate_spectrum(s: &LengthSpectrum) -> std::result::Result<(), String> {
    let mut prev = 0;
    for entry in &s.entries {
        if entry.abs_trace <= 2 || entry.abs_trace <= prev || entry.abs_trace > s.trace_bound {
            return Err(format!("bad trace {}", entry.abs_trace));
        }
        prev = entry.abs_trace;
        if entry.witnesses.is_empty() {
            return Err(format!("trace {} has no witnesses", entry.abs_trace));
        }
        for w in &entry.witnesses {
            let el = GroupElement::new(w[0], w[1], w[2], w[3], s.p).map_err(|e| e.to_string())?;
            if el.abs_trace() != entry.abs_trace || !el.is_in_level(s.level) {
                return Err(format!("witness {w:?} does not match trace {}", entry.abs_trace));
            }
        }
    }
    Ok(())
}

/// Loads the spectrum from `dir` if a valid cache exists, otherwise computes
/// and stores it. A corrupt cache file is recomputed and overwritten.
pub fn cached_spectrum(
    dir: &Path,
    params: FuchsianParams,
    level: CongruenceLevel,
    trace_bound: i64,
    box_bound: i64,
) -> Result<LengthSpectrum> {
    let path = dir.join(cache_file_name(params, level, trace_bound, box_bound));
    match read_spectrum(&path) {
        Ok(s) => return Ok(s),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(Error::CacheInvalid { .. }) => {}
        Err(e) => return Err(e),
    }
    let spectrum = enumerate_level_elements(params, level, trace_bound, box_bound)?;
    fs::create_dir_all(dir)?;
    write_spectrum(&spectrum, &path)?;
    Ok(spectrum)
}
