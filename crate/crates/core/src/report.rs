//! Protocol files, run reports and their on-disk artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::growth::GrowthSeries;
use crate::loop_coords::LoopCoords;
use crate::stir_sim::{
    advect_polyline, advect_scalar_with, rotor_center, AdvectOptions, Polyline, RotorParams, ScalarGrid, StirProtocol,
    DEFAULT_GRID, DEFAULT_SEED,
};
use crate::tn_classify::{classify, ClassifyOptions, TnClassification};

pub const DEFAULT_PERIODS: usize = 10;
/// Radius of the default seed curve, a circle about the first rotor center.
pub const SEED_CURVE_RADIUS: f64 = 0.7;
/// Desk-scale slack in `metric_rate ≥ (1 − slack) · topological_rate`.
pub const LOWERBOUND_SLACK: f64 = 0.05;
/// First period of the metric and topological fit windows.
pub const FIT_START: usize = 3;

pub const CURVE_CSV: &str = "curve_length.csv";
pub const SUP_CSV: &str = "scalar_sup.csv";
pub const L1_CSV: &str = "scalar_l1.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const FIELD_BIN: &str = "scalar_final.bin";
pub const FIELD_HEADER: &str = "scalar_final.txt";

fn default_periods() -> usize {
    DEFAULT_PERIODS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedCurve {
    pub center: [f64; 2],
    pub radius: f64,
}

/// A stirring protocol as read from JSON. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub punctures: usize,
    pub braid: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotor: Option<RotorParams<f64>>,
    #[serde(default = "default_periods")]
    pub periods: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_max: Option<f64>,
    /// Initial material line; defaults to a circle of radius 0.7 about the
    /// midpoint of punctures 1 and 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_curve: Option<SeedCurve>,
}

impl ProtocolFile {
    /// Parses and validates. Error messages carry the line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let p: ProtocolFile = serde_json::from_str(text).map_err(|e| Error::Protocol(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ProtocolFile::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.braid_word()?;
        self.rotor().validate()?;
        if self.periods == 0 {
            return Err(Error::Protocol("periods: must be at least 1".into()));
        }
        if let Some(n) = self.grid_n {
            if n < crate::stir_sim::MIN_GRID {
                return Err(Error::Protocol(format!(
                    "grid_n: must be at least {}, got {n}",
                    crate::stir_sim::MIN_GRID
                )));
            }
        }
        if let Some(h) = self.h_max {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Protocol(format!("h_max: must be positive, got {h}")));
            }
        }
        if let Some(c) = self.seed_curve {
            if !(c.radius > 0.0 && c.radius.is_finite() && c.center.iter().all(|v| v.is_finite())) {
                return Err(Error::Protocol("seed_curve: radius must be positive and finite".into()));
            }
        }
        Ok(())
    }

    pub fn braid_word(&self) -> Result<BraidWord> {
        BraidWord::from_signed(self.punctures, &self.braid)
    }

    pub fn rotor(&self) -> RotorParams<f64> {
        self.rotor.unwrap_or_default()
    }

    pub fn grid(&self) -> usize {
        self.grid_n.unwrap_or(DEFAULT_GRID)
    }

    pub fn rng_seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn advect_options(&self) -> AdvectOptions<f64> {
        let mut o = AdvectOptions::default();
        if let Some(h) = self.h_max {
            o.h_max = h;
        }
        o
    }

    pub fn stir_protocol(&self) -> Result<StirProtocol<f64>> {
        StirProtocol::new(self.braid_word()?, self.rotor())
    }

    pub fn seed_polyline(&self) -> Polyline<f64> {
        let h = self.advect_options().h_max;
        match self.seed_curve {
            Some(c) => Polyline::circle(c.center, c.radius, h),
            None => Polyline::circle(rotor_center(self.punctures, 1), SEED_CURVE_RADIUS, h),
        }
    }
}

/// Fit window shared by the metric and topological series: periods 3 to
/// the end once at least three of those exist, else the whole series.
pub fn fit_window(len: usize) -> Option<(usize, usize)> {
    match len {
        0..=2 => None,
        _ if len > FIT_START + 2 => Some((FIT_START, len - 1)),
        _ => Some((0, len - 1)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCheck {
    pub metric_rate: f64,
    pub topological_rate: f64,
    pub lowerbound_satisfied: bool,
}

impl LowerBoundCheck {
    pub fn new(metric_rate: f64, topological_rate: f64) -> Self {
        LowerBoundCheck {
            metric_rate,
            topological_rate,
            lowerbound_satisfied: metric_rate >= (1.0 - LOWERBOUND_SLACK) * topological_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub protocol: ProtocolFile,
    pub classification: TnClassification,
    /// ℓ¹ norm of the loop coordinates of the curve around punctures 1 and 2
    /// per period, the topological counterpart of the default seed curve.
    pub topological: GrowthSeries<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<GrowthSeries<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_sup: Option<GrowthSeries<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_l1: Option<GrowthSeries<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowerbound: Option<LowerBoundCheck>,
    /// Set when any series was stopped by a resource cap.
    pub truncated: bool,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Protocol(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        RunReport::from_json(&fs::read_to_string(path)?)
    }
}

/// Which parts of a run to perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    pub metric: bool,
    pub scalar: bool,
}

/// Writes `period,value` rows under a header, 17 significant digits.
pub fn write_series_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::from("period,value\n");
    for (k, v) in values.iter().enumerate() {
        out.push_str(&format!("{k},{v:.16e}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

fn topological_series(protocol: &ProtocolFile, braid: &BraidWord) -> Result<GrowthSeries<f64>> {
    let mut u = LoopCoords::pair_curve(protocol.punctures, 1)?;
    let mut values = Vec::with_capacity(protocol.periods + 1);
    values.push(u.norm().0.to_f64().unwrap_or(f64::INFINITY));
    for _ in 0..protocol.periods {
        u = u.apply_braid(braid)?;
        values.push(u.norm().0.to_f64().unwrap_or(f64::INFINITY));
    }
    let len = values.len();
    GrowthSeries::new(values, fit_window(len), false)
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Classification and the topological series.
pub fn run_classify(protocol: &ProtocolFile, opts: ClassifyOptions) -> Result<RunReport> {
    protocol.validate()?;
    let braid = protocol.braid_word()?;
    let mut timings = BTreeMap::new();
    let t = Instant::now();
    let classification = classify(&braid, opts)?;
    timings.insert("classify".into(), seconds(t));
    let topological = topological_series(protocol, &braid)?;
    Ok(RunReport {
        protocol: protocol.clone(),
        classification,
        topological,
        metric: None,
        scalar_sup: None,
        scalar_l1: None,
        lowerbound: None,
        truncated: false,
        timings,
    })
}

/// Classification plus the requested simulations. When `out_dir` is given,
/// the series are written there as CSV next to `summary.json`.
pub fn run_simulation(
    protocol: &ProtocolFile,
    opts: ClassifyOptions,
    stages: Stages,
    out_dir: Option<&Path>,
) -> Result<RunReport> {
    let mut report = run_classify(protocol, opts)?;
    let proto = protocol.stir_protocol()?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }

    if stages.metric {
        let t = Instant::now();
        let run = advect_polyline(
            &protocol.seed_polyline(),
            &proto,
            protocol.periods,
            &protocol.advect_options(),
        )?;
        let metric = run.series(fit_window(run.lengths.len()))?;
        report.timings.insert("metric".into(), seconds(t));
        report.lowerbound = Some(LowerBoundCheck::new(
            metric.log_rate(),
            report.classification.log_dilation,
        ));
        report.truncated |= metric.truncated;
        if let Some(dir) = out_dir {
            write_series_csv(&dir.join(CURVE_CSV), &metric.values)?;
        }
        report.metric = Some(metric);
    }

    if stages.scalar {
        let t = Instant::now();
        let grid = ScalarGrid::trig_seed(protocol.punctures, protocol.grid(), protocol.rng_seed())?;
        let periods = protocol.periods;
        let mut last = None;
        let run = advect_scalar_with(grid, &proto, periods, |k, g| {
            if k == periods {
                last = Some(g.to_le_bytes());
            }
        })?;
        report.timings.insert("scalar".into(), seconds(t));
        if let Some(dir) = out_dir {
            write_series_csv(&dir.join(SUP_CSV), &run.sup.values)?;
            write_series_csv(&dir.join(L1_CSV), &run.l1.values)?;
            if let Some(bytes) = last {
                fs::write(dir.join(FIELD_BIN), bytes)?;
                let g = &run.final_grid;
                let header = format!(
                    "n {}\nxmin {:.16e}\nxmax {:.16e}\nymin {:.16e}\nymax {:.16e}\nperiod {}\nlayout row-major f64 little-endian, y slow\n",
                    g.size(),
                    -g.half_width(),
                    g.half_width(),
                    -g.half_width(),
                    g.half_width(),
                    periods
                );
                fs::write(dir.join(FIELD_HEADER), header)?;
            }
        }
        report.scalar_sup = Some(run.sup);
        report.scalar_l1 = Some(run.l1);
    }

    if let Some(dir) = out_dir {
        let mut f = fs::File::create(dir.join(SUMMARY_JSON))?;
        f.write_all(report.to_json()?.as_bytes())?;
    }
    Ok(report)
}
