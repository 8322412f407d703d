//! Scenario files: a moving-point instance plus the experiment parameters,
//! stored as pretty-printed JSON with shortest round-trip decimals so the
//! files diff cleanly and reload byte-identically.

use crate::runner::CliError;
use kinetikos::motion::{validate_general_position, perturb, MovingPointSet, Trajectory};
use kinetikos::poly::Polynomial;
use kinetikos::ranges::RangeFamily;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A complete experiment input. `points[i][j]` is the ascending coefficient
/// array of point i's coordinate j, so `points[i][j][k]` multiplies t^k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub dimension: usize,
    pub degree: usize,
    pub horizon: f64,
    pub seed: u64,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Magnitude of the general-position perturbation applied at
    /// generation time, when one was needed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<f64>,
    pub points: Vec<Vec<Vec<f64>>>,
}

pub fn parse_family(tag: &str) -> Result<RangeFamily, CliError> {
    match tag {
        "intervals" => Ok(RangeFamily::Intervals),
        "halfspaces" => Ok(RangeFamily::Halfspaces),
        "balls" => Ok(RangeFamily::Balls),
        "cones" => Ok(RangeFamily::BoundedCones),
        other => Err(CliError::Input(format!(
            "unknown family tag {other:?}; expected intervals|halfspaces|balls|cones"
        ))),
    }
}

pub fn family_tag(family: RangeFamily) -> &'static str {
    match family {
        RangeFamily::Intervals => "intervals",
        RangeFamily::Halfspaces => "halfspaces",
        RangeFamily::Balls => "balls",
        RangeFamily::BoundedCones => "cones",
    }
}

impl Scenario {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn range_family(&self) -> Result<RangeFamily, CliError> {
        parse_family(&self.family)
    }

    pub fn to_moving_set(&self) -> Result<MovingPointSet<f64>, CliError> {
        let window = kinetikos::motion::TimeInterval::new(0.0, self.horizon)
            .map_err(|e| CliError::Input(format!("bad horizon: {e}")))?;
        let mut trajs = Vec::with_capacity(self.points.len());
        for (i, coords) in self.points.iter().enumerate() {
            if coords.len() != self.dimension {
                return Err(CliError::Input(format!(
                    "point {i} has {} coordinates, scenario dimension is {}",
                    coords.len(),
                    self.dimension
                )));
            }
            let comps = coords
                .iter()
                .map(|c| Polynomial::from_slice(c))
                .collect::<Vec<_>>();
            trajs.push(
                Trajectory::new(comps)
                    .map_err(|e| CliError::Input(format!("point {i}: {e}")))?,
            );
        }
        MovingPointSet::new(trajs, self.degree, window)
            .map_err(|e| CliError::Input(format!("scenario does not form a moving set: {e}")))
    }

    /// Canonical serialized form; saving then loading reproduces it
    /// byte-for-byte.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario parse: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json())
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Which structured instance a generator draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Coefficients uniform in boxes: constants in ±spread, higher-degree
    /// terms in ±0.4·spread.
    Uniform,
    /// Static points: constants only, degree 0.
    Static,
    /// One-dimensional linear motion.
    Linear1D,
    /// n lines through staggered pivots so (almost) every pair crosses
    /// inside the horizon.
    CrossingFan,
}

pub fn parse_kind(tag: &str) -> Result<GeneratorKind, CliError> {
    match tag {
        "uniform" => Ok(GeneratorKind::Uniform),
        "static" => Ok(GeneratorKind::Static),
        "linear" => Ok(GeneratorKind::Linear1D),
        "fan" => Ok(GeneratorKind::CrossingFan),
        other => Err(CliError::Input(format!(
            "unknown generator {other:?}; expected uniform|static|linear|fan"
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorParams {
    pub kind: GeneratorKind,
    pub n: usize,
    pub dimension: usize,
    pub degree: usize,
    pub horizon: f64,
    pub seed: u64,
    pub family: String,
    /// Half-width of the starting-coordinate box.
    pub spread: f64,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub grid: Option<usize>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            kind: GeneratorKind::Uniform,
            n: 16,
            dimension: 2,
            degree: 1,
            horizon: 1.0,
            seed: 0,
            family: "halfspaces".into(),
            spread: 10.0,
            k: None,
            epsilon: None,
            grid: None,
        }
    }
}

fn coefficient_table(p: &GeneratorParams) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
    if p.n == 0 {
        return Err(CliError::Input("n must be positive".into()));
    }
    if p.spread <= 0.0 || !p.spread.is_finite() {
        return Err(CliError::Input(format!("spread must be positive, got {}", p.spread)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let table = match p.kind {
        GeneratorKind::Uniform => {
            if p.dimension == 0 {
                return Err(CliError::Input("dimension must be positive".into()));
            }
            let cbox = 0.4 * p.spread;
            (0..p.n)
                .map(|_| {
                    (0..p.dimension)
                        .map(|_| {
                            let mut c = vec![rng.gen_range(-p.spread..p.spread)];
                            for _ in 0..p.degree {
                                c.push(rng.gen_range(-cbox..cbox));
                            }
                            c
                        })
                        .collect()
                })
                .collect()
        }
        GeneratorKind::Static => {
            if p.dimension == 0 {
                return Err(CliError::Input("dimension must be positive".into()));
            }
            (0..p.n)
                .map(|_| {
                    (0..p.dimension)
                        .map(|_| vec![rng.gen_range(-p.spread..p.spread)])
                        .collect()
                })
                .collect()
        }
        GeneratorKind::Linear1D => (0..p.n)
            .map(|_| {
                vec![vec![
                    rng.gen_range(-p.spread..p.spread),
                    rng.gen_range(-0.4 * p.spread..0.4 * p.spread),
                ]]
            })
            .collect(),
        GeneratorKind::CrossingFan => {
            // ascending starts, descending slopes: pair (i, j) crosses at
            // (Δstart)/(Δslope) ∈ roughly [T/8, 5T/6], inside the horizon
            if p.n < 2 {
                return Err(CliError::Input("a crossing fan needs n >= 2".into()));
            }
            if !(p.horizon > 0.0) {
                return Err(CliError::Input("horizon must be positive".into()));
            }
            let time_scale = 2.5 / p.horizon;
            (0..p.n)
                .map(|i| {
                    let start = i as f64 + rng.gen_range(0.0..0.45);
                    let slope = -(i as f64 + rng.gen_range(0.0..0.45)) * time_scale;
                    vec![vec![start, slope]]
                })
                .collect()
        }
    };
    Ok(table)
}

const PERTURB_MAGNITUDES: [f64; 3] = [1e-7, 1e-6, 1e-5];

/// Draws a scenario and guarantees general position, perturbing the
/// coefficients by the smallest workable magnitude when the raw draw is
/// degenerate; the applied magnitude is recorded in the scenario.
pub fn generate_scenario(p: &GeneratorParams) -> Result<Scenario, CliError> {
    parse_family(&p.family)?;
    let (dimension, degree) = match p.kind {
        GeneratorKind::Static => (p.dimension, 0),
        GeneratorKind::Linear1D | GeneratorKind::CrossingFan => (1, 1),
        GeneratorKind::Uniform => (p.dimension, p.degree),
    };
    let mut scenario = Scenario {
        dimension,
        degree,
        horizon: p.horizon,
        seed: p.seed,
        family: p.family.clone(),
        k: p.k,
        epsilon: p.epsilon,
        grid: p.grid,
        perturbation: None,
        points: coefficient_table(p)?,
    };
    let set = scenario.to_moving_set()?;
    if validate_general_position(&set).is_valid() {
        return Ok(scenario);
    }
    for &mag in &PERTURB_MAGNITUDES {
        let jiggled = perturb(&set, mag, p.seed.wrapping_add(1));
        if validate_general_position(&jiggled).is_valid() {
            scenario.perturbation = Some(mag);
            scenario.points = jiggled
                .trajectories()
                .iter()
                .map(|t| t.components().iter().map(|c| c.coeffs().to_vec()).collect())
                .collect();
            return Ok(scenario);
        }
    }
    Err(CliError::Input(
        "could not reach general position even after perturbation".into(),
    ))
}
