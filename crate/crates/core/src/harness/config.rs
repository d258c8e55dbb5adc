use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boost::PhaseConvention;
use crate::dynamics::scenarios::SpreadingSetup;
use crate::eom::{GaugeScalarF, ModelParams};
use crate::error::{Error, Result};
use crate::galgroup::CocycleVariant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub m: f64,
    pub c: f64,
    pub q: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { m: 1.0, c: 1.0, q: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FChoice {
    #[default]
    Maxwell,
    Quartic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaugeScalarSection {
    /// `f` used where a single choice is needed; the covariance suite always
    /// runs both built-in forms.
    pub kind: FChoice,
    pub kappa: f64,
}

impl Default for GaugeScalarSection {
    fn default() -> Self {
        Self {
            kind: FChoice::Maxwell,
            kappa: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepresentationSection {
    pub cocycle_variant: CocycleVariant,
    pub phase_convention: PhaseConvention,
}

impl Default for RepresentationSection {
    fn default() -> Self {
        Self {
            cocycle_variant: CocycleVariant::R2OnA1,
            phase_convention: PhaseConvention::Consistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountsSection {
    /// Random cases per group-law identity.
    pub group_cases: usize,
    /// `(g2, g1)` pairs for the projective law.
    pub projective_pairs: usize,
    /// Points per pair in the projective law.
    pub projective_points: usize,
    /// Points for the local U(1) invariance sweep.
    pub gauge_points: usize,
    /// Random group elements in the covariance suite.
    pub elements: usize,
    /// Points per element in the covariance suite.
    pub points: usize,
}

impl Default for CountsSection {
    fn default() -> Self {
        Self {
            group_cases: 1000,
            projective_pairs: 100,
            projective_points: 20,
            gauge_points: 10_000,
            elements: 25,
            points: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    /// Packet-spreading run: points, box length, step, steps, mean momentum.
    pub n: usize,
    pub extent: f64,
    pub dt: f64,
    pub steps: usize,
    pub p0: f64,
    /// Unitarity run.
    pub norm_steps: usize,
    /// Coarse grid of the gauge-refinement pair.
    pub gauge_n: usize,
    /// Coarse grid of the Maxwell refinement pair.
    pub fdtd_n: usize,
    /// Record observables every this many steps.
    pub record_every: usize,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            n: 256,
            extent: 40.0,
            dt: 1e-3,
            steps: 2000,
            p0: 0.5,
            norm_steps: 1000,
            gauge_n: 128,
            fdtd_n: 64,
            record_every: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TolerancesSection {
    /// Multiplies every upper-bound tolerance. Zero forces failures.
    pub scale: f64,
    /// Absolute upper bounds keyed by `suite.check`, applied before `scale`.
    pub overrides: BTreeMap<String, f64>,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        Self {
            scale: 1.0,
            overrides: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Write the observable series and the final wave function as CSV.
    pub csv: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { csv: true }
    }
}

/// Everything a run depends on. Loaded from TOML; every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub model: ModelSection,
    pub gauge_scalar: GaugeScalarSection,
    pub representation: RepresentationSection,
    pub counts: CountsSection,
    pub dynamics: DynamicsSection,
    pub tolerances: TolerancesSection,
    pub output: OutputSection,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_917,
            model: ModelSection::default(),
            gauge_scalar: GaugeScalarSection::default(),
            representation: RepresentationSection::default(),
            counts: CountsSection::default(),
            dynamics: DynamicsSection::default(),
            tolerances: TolerancesSection::default(),
            output: OutputSection::default(),
        }
    }
}

const HEADER: &str = "\
# galgauge configuration. Every key is optional; the values below are the
# defaults. Tolerance overrides are keyed by `suite.check`, for example
#   [tolerances.overrides]
#   \"covariance.matter_residual_phase\" = 1e-8
";

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        let body = toml::to_string_pretty(self).expect("config serializes");
        format!("{HEADER}\n{body}")
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.model.m, self.model.c, self.model.q).map_err(|e| Error::Config(e.to_string()))?;
        let counts = &self.counts;
        let all = [
            ("group_cases", counts.group_cases),
            ("projective_pairs", counts.projective_pairs),
            ("projective_points", counts.projective_points),
            ("gauge_points", counts.gauge_points),
            ("elements", counts.elements),
            ("points", counts.points),
            ("dynamics.steps", self.dynamics.steps),
            ("dynamics.norm_steps", self.dynamics.norm_steps),
            ("dynamics.record_every", self.dynamics.record_every),
        ];
        if let Some((name, _)) = all.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        let d = &self.dynamics;
        if d.n < 8 || d.gauge_n < 8 || d.fdtd_n < 8 {
            return Err(Error::Config("dynamics grids need at least 8 points per axis".into()));
        }
        if !(d.extent > 0.0 && d.dt > 0.0 && d.p0.is_finite()) {
            return Err(Error::Config("dynamics.extent and dynamics.dt must be positive".into()));
        }
        let t = &self.tolerances;
        if !(t.scale >= 0.0 && t.scale.is_finite()) {
            return Err(Error::Config(format!("tolerances.scale must be ≥ 0, got {}", t.scale)));
        }
        if let Some((k, v)) = t.overrides.iter().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Config(format!("tolerance override {k} must be ≥ 0, got {v}")));
        }
        if !(self.gauge_scalar.kappa.is_finite()) {
            return Err(Error::Config("gauge_scalar.kappa must be finite".into()));
        }
        Ok(())
    }

    pub fn spreading(&self) -> SpreadingSetup {
        let d = &self.dynamics;
        SpreadingSetup {
            n: d.n,
            extent: d.extent,
            p0: d.p0,
            dt: d.dt,
            steps: d.steps,
            record_every: d.record_every,
        }
    }

    pub fn params(&self) -> ModelParams {
        ModelParams::new(self.model.m, self.model.c, self.model.q).expect("validated")
    }

    pub fn gauge_scalar(&self) -> GaugeScalarF {
        match self.gauge_scalar.kind {
            FChoice::Maxwell => GaugeScalarF::maxwell(self.model.c),
            FChoice::Quartic => GaugeScalarF::quartic(self.model.c, self.gauge_scalar.kappa),
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }

    /// Seed for one suite, independent of which other suites run.
    pub fn suite_seed(&self, suite: &str) -> u64 {
        let digest = Sha256::digest(suite.as_bytes());
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        self.seed ^ u64::from_le_bytes(head)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = SuiteConfig::default();
        let back = SuiteConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(SuiteConfig::from_toml("").unwrap(), cfg);
    }

    #[test]
    fn partial_files_keep_other_defaults() {
        let cfg =
            SuiteConfig::from_toml("seed = 5\n[model]\nc = 2.0\n[representation]\ncocycle_variant = \"as_written\"\n")
                .unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.model.c, 2.0);
        assert_eq!(cfg.model.m, 1.0);
        assert_eq!(cfg.representation.cocycle_variant, CocycleVariant::AsWritten);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for text in [
            "[model]\nm = 0.0",
            "[counts]\npoints = 0",
            "[tolerances]\nscale = -1.0",
            "unknown = 1",
            "seed = \"x\"",
            "[tolerances.overrides]\n\"a.b\" = -1.0",
        ] {
            assert!(matches!(SuiteConfig::from_toml(text), Err(Error::Config(_))), "{text}");
        }
        assert!(SuiteConfig::from_toml("[tolerances]\nscale = 0.0").is_ok());
    }

    #[test]
    fn hash_and_suite_seeds_are_stable() {
        let a = SuiteConfig::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_ne!(a.suite_seed("group"), a.suite_seed("rep"));
        assert_eq!(a.suite_seed("group"), SuiteConfig::default().suite_seed("group"));
    }
}
