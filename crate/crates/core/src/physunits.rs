//! SI constants, trap units, the species registry and the universal-limit
//! lifetime pipeline.

use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contact::{self, ComplexScatteringLength};
use crate::decay;
use crate::error::{Error, Result};

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Atomic mass unit in kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Electron mass in amu.
pub const ELECTRON_MASS_AMU: f64 = 5.485_799_090_65e-4;
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// `Gamma(1/4)`.
const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub name: String,
    /// Mass of one molecule in amu.
    pub mass_amu: f64,
    /// Mean scattering length of the molecule-molecule van der Waals interaction, nm.
    pub abar_nm: f64,
    /// 2 for identical partners, 1 otherwise.
    pub g: u8,
    #[serde(default)]
    pub provenance: String,
}

impl Species {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Config("species name is empty".into()));
        }
        if !(self.mass_amu > 0.0 && self.mass_amu.is_finite()) {
            return Err(Error::Config(format!("{}: mass_amu must be positive", self.name)));
        }
        if !(self.abar_nm > 0.0 && self.abar_nm.is_finite()) {
            return Err(Error::Config(format!("{}: abar_nm must be positive", self.name)));
        }
        if self.g != 1 && self.g != 2 {
            return Err(Error::Config(format!("{}: g must be 1 or 2", self.name)));
        }
        Ok(())
    }

    /// Reduced mass of a pair of identical molecules, kg.
    pub fn reduced_mass(&self) -> f64 {
        0.5 * self.mass_amu * AMU
    }

    pub fn abar(&self) -> f64 {
        self.abar_nm * 1e-9
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesRegistry {
    pub species: Vec<Species>,
}

impl SpeciesRegistry {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let reg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()?)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }

    /// KRb and LiCs as shipped in `species.cfg`.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_SPECIES).expect("builtin species table is valid")
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Result<&Species> {
        self.species
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Config(format!("unknown species {name:?}")))
    }

    fn validate(&self) -> Result<()> {
        for (i, s) in self.species.iter().enumerate() {
            s.validate()?;
            if self.species[..i].iter().any(|o| o.name.eq_ignore_ascii_case(&s.name)) {
                return Err(Error::Config(format!("duplicate species {:?}", s.name)));
            }
        }
        Ok(())
    }
}

const BUILTIN_SPECIES: &str = include_str!("../species.cfg");

/// Trap frequency and reduced mass; oscillator scales are always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapContext {
    /// Ordinary frequency in Hz.
    pub frequency: f64,
    /// Reduced mass in kg.
    pub reduced_mass: f64,
}

impl TrapContext {
    pub fn new(frequency: f64, reduced_mass: f64) -> Result<Self> {
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::invalid("trap frequency must be positive"));
        }
        if !(reduced_mass > 0.0 && reduced_mass.is_finite()) {
            return Err(Error::invalid("reduced mass must be positive"));
        }
        Ok(Self {
            frequency,
            reduced_mass,
        })
    }

    pub fn for_species(species: &Species, frequency: f64) -> Result<Self> {
        Self::new(frequency, species.reduced_mass())
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    /// `sqrt(hbar / (mu omega))`, m.
    pub fn osc_length(&self) -> f64 {
        (HBAR / (self.reduced_mass * self.omega())).sqrt()
    }

    /// `hbar omega`, J.
    pub fn osc_energy(&self) -> f64 {
        HBAR * self.omega()
    }

    /// Size of the relative ground state, `2 sqrt(hbar / (mu omega))`, m.
    pub fn ground_state_size(&self) -> f64 {
        2.0 * self.osc_length()
    }

    pub fn length_to_osc(&self, metres: f64) -> f64 {
        metres / self.osc_length()
    }

    pub fn length_from_osc(&self, x: f64) -> f64 {
        x * self.osc_length()
    }

    pub fn energy_to_osc(&self, joules: f64) -> f64 {
        joules / self.osc_energy()
    }

    pub fn energy_from_osc(&self, e: f64) -> f64 {
        e * self.osc_energy()
    }

    pub fn time_to_osc(&self, seconds: f64) -> f64 {
        seconds * self.omega()
    }

    pub fn time_from_osc(&self, t: f64) -> f64 {
        t / self.omega()
    }
}

/// `a = abar - i abar` in oscillator units.
pub fn universal_a(species: &Species, ctx: &TrapContext) -> Result<ComplexScatteringLength> {
    ComplexScatteringLength::universal(ctx.length_to_osc(species.abar()))
}

/// `K = 2 abar hbar / mu` in cm^3/s.
pub fn k_reactive_universal(species: &Species) -> f64 {
    2.0 * species.abar() * HBAR / species.reduced_mass() * 1e6
}

/// Mean scattering length `(2 pi / Gamma(1/4)^2) (2 mu C6 / hbar^2)^{1/4}` in nm,
/// for `C6` in atomic units and the reduced mass in amu.
pub fn abar_from_c6(c6_au: f64, reduced_mass_amu: f64) -> Result<f64> {
    if !(c6_au > 0.0 && reduced_mass_amu > 0.0) {
        return Err(Error::invalid("C6 and reduced mass must be positive"));
    }
    let mu_au = reduced_mass_amu / ELECTRON_MASS_AMU;
    let abar_bohr = 2.0 * PI / (GAMMA_QUARTER * GAMMA_QUARTER) * (2.0 * mu_au * c6_au).powf(0.25);
    Ok(abar_bohr * BOHR_RADIUS * 1e9)
}

/// Noninteracting overlap estimate `tau = 1 / (K |psi_n(0)|^2)` in seconds,
/// with `K` from [`k_reactive_universal`] and `n` the relative s-state index.
pub fn density_overlap_lifetime(species: &Species, ctx: &TrapContext, level: usize) -> f64 {
    let k = k_reactive_universal(species) * 1e-6;
    let density = contact::s_state_density_at_origin(level) / ctx.osc_length().powi(3);
    1.0 / (k * density)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeRow {
    pub species: String,
    pub frequency: f64,
    pub level: usize,
    pub re_e: f64,
    pub im_e: f64,
    /// From the complex energy, s.
    pub tau: f64,
    /// [`density_overlap_lifetime`] of the matching noninteracting state
    /// (`n = level - 1`), s; `None` for the molecular level.
    pub tau_overlap: Option<f64>,
}

impl LifetimeRow {
    /// `tau / tau_overlap`; `1/(2 pi)` in the small-`a` limit, the factor by
    /// which the `hbar`-based rate constant differs from the complex-energy decay.
    pub fn convention_ratio(&self) -> Option<f64> {
        self.tau_overlap.map(|t| self.tau / t)
    }
}

fn lifetime_rows(species: &Species, frequency: f64, levels: &[usize]) -> Result<Vec<LifetimeRow>> {
    let ctx = TrapContext::for_species(species, frequency)?;
    let a = universal_a(species, &ctx)?;
    let n = levels.iter().max().map_or(0, |m| m + 1);
    let spectrum = contact::spectrum(a, n)?;
    levels
        .iter()
        .map(|&level| {
            let e = spectrum[level].energy;
            Ok(LifetimeRow {
                species: species.name.clone(),
                frequency,
                level,
                re_e: e.re,
                im_e: e.im,
                tau: decay::lifetime_from_energy(e, ctx.omega())?,
                tau_overlap: (level > 0).then(|| density_overlap_lifetime(species, &ctx, level - 1)),
            })
        })
        .collect()
}

/// Complex-energy lifetimes of the trap levels `levels` (1 = lowest trap
/// level; 0, the molecular branch, is [`molecular_lifetime`]) in the
/// universal limit, per frequency in Hz. Rows ordered by (frequency, level).
pub fn lifetime_sweep(species: &Species, freqs: &[f64], levels: &[usize]) -> Result<Vec<LifetimeRow>> {
    species.validate()?;
    if levels.is_empty() || levels.contains(&0) {
        return Err(Error::invalid("levels must be non-empty and at least 1"));
    }
    if freqs.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(Error::invalid("frequencies must be positive"));
    }
    let rows = freqs
        .par_iter()
        .map(|&f| lifetime_rows(species, f, levels))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Lifetime of the molecular (lowest) branch in the universal limit.
pub fn molecular_lifetime(species: &Species, frequency: f64) -> Result<LifetimeRow> {
    species.validate()?;
    Ok(lifetime_rows(species, frequency, &[0])?.remove(0))
}
