//! Run configuration: model or physical parameters plus integration,
//! analysis, sweep and thermistor-grid settings.
//!
//! Text files use the flat `key = value` format; a file whose first
//! non-blank character is `{` is read as a flat JSON object with the same keys.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mcg_core::kv::{KvDoc, KvError};
use mcg_core::{
    physical_to_model, AnalysisSettings, IntegrationSettings, LyapunovSettings, Method, ModelParams, PhysicalParams,
    State, DEFAULT_INITIAL,
};

use crate::sweep::{AlphaRange, Analyses};

const MODEL_KEYS: [&str; 8] = ModelParams::KEYS;
const PHYSICAL_KEYS: [&str; 9] = PhysicalParams::KEYS;
const SETTING_KEYS: [&str; 25] = [
    "params",
    "h",
    "t_end",
    "t_skip",
    "stride",
    "method",
    "abs_tol",
    "rel_tol",
    "x0",
    "y0",
    "z0",
    "lce_h",
    "lce_transient",
    "lce_time",
    "renorm_interval",
    "zero_tol",
    "cluster_tol_rel",
    "sym_tol",
    "alpha_min",
    "alpha_max",
    "alpha_step",
    "analyses",
    "t_min",
    "t_max",
    "t_points",
];

/// Temperature grid for the thermistor comparison, kelvin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for TemperatureGrid {
    fn default() -> Self {
        Self { t_min: 240.0, t_max: 300.0, points: 61 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    /// Present when the model was mapped from circuit quantities.
    pub physical: Option<PhysicalParams>,
    pub integration: IntegrationSettings,
    pub initial: State,
    pub analysis: AnalysisSettings,
    pub alpha_range: Option<AlphaRange>,
    pub analyses: Analyses,
    pub temperatures: TemperatureGrid,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::study(0.5).expect("study parameters are valid"),
            physical: None,
            integration: IntegrationSettings::default(),
            initial: DEFAULT_INITIAL,
            analysis: AnalysisSettings::default(),
            alpha_range: None,
            analyses: Analyses::default(),
            temperatures: TemperatureGrid::default(),
        }
    }
}

fn json_to_doc(text: &str) -> Result<KvDoc> {
    let value: serde_json::Value = serde_json::from_str(text).context("malformed JSON config")?;
    let obj = value.as_object().ok_or_else(|| anyhow!("JSON config must be a flat object"))?;
    let mut pairs = Vec::with_capacity(obj.len());
    for (k, v) in obj {
        let s = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::Array(items) => items
                .iter()
                .map(|i| i.as_str().map(str::to_string).ok_or_else(|| anyhow!("key `{k}`: list items must be strings")))
                .collect::<Result<Vec<_>>>()?
                .join(","),
            _ => bail!("key `{k}`: expected a number, string or list of strings"),
        };
        pairs.push((k.clone(), s));
    }
    Ok(KvDoc::from_pairs(pairs)?)
}

fn parse_method(doc: &KvDoc) -> Result<Method, KvError> {
    let name: String = doc.get("method")?.unwrap_or_else(|| "rk4".into());
    match name.as_str() {
        "rk4" => {
            for key in ["abs_tol", "rel_tol"] {
                if doc.contains(key) {
                    return Err(doc.invalid(key, "only meaningful with method = dopri45"));
                }
            }
            Ok(Method::Rk4)
        }
        "dopri45" => {
            let Method::Dopri45 { abs_tol, rel_tol } = Method::DEFAULT_ADAPTIVE else { unreachable!() };
            Ok(Method::Dopri45 {
                abs_tol: doc.get("abs_tol")?.unwrap_or(abs_tol),
                rel_tol: doc.get("rel_tol")?.unwrap_or(rel_tol),
            })
        }
        _ => Err(doc.invalid("method", "expected `rk4` or `dopri45`")),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc = if text.trim_start().starts_with('{') { json_to_doc(text)? } else { KvDoc::parse(text)? };
        Ok(Self::from_doc(&doc)?)
    }

    pub fn from_doc(doc: &KvDoc) -> Result<Self, KvError> {
        let mode: String = doc.get("params")?.unwrap_or_else(|| "model".into());
        let d = RunConfig::default();
        let alpha_range = match (doc.get("alpha_min")?, doc.get("alpha_max")?, doc.get("alpha_step")?) {
            (None, None, None) => None,
            (Some(min), Some(max), Some(step)) => Some(AlphaRange { min, max, step }),
            _ => {
                let key = ["alpha_min", "alpha_max", "alpha_step"].into_iter().find(|k| !doc.contains(k)).unwrap();
                return Err(KvError::Missing { key: key.into() });
            }
        };
        let (params, physical) = match mode.as_str() {
            "model" => {
                let mut allowed: Vec<&str> = MODEL_KEYS.to_vec();
                allowed.extend(SETTING_KEYS);
                doc.reject_unknown(&allowed)?;
                let params = match alpha_range {
                    // a sweep sets alpha per row
                    Some(range) if !doc.contains("alpha") => {
                        let mut pairs: Vec<(String, String)> =
                            doc.keys().map(|k| (k.to_string(), doc.raw(k).unwrap().to_string())).collect();
                        pairs.push(("alpha".into(), range.min.to_string()));
                        ModelParams::from_kv(&KvDoc::from_pairs(pairs)?)?
                    }
                    _ => ModelParams::from_kv(doc)?,
                };
                (params, None)
            }
            "physical" => {
                let mut allowed: Vec<&str> = PHYSICAL_KEYS.to_vec();
                allowed.extend(SETTING_KEYS);
                doc.reject_unknown(&allowed)?;
                let ph = PhysicalParams::from_kv(doc)?;
                (physical_to_model(&ph)?, Some(ph))
            }
            _ => return Err(doc.invalid("params", "expected `model` or `physical`")),
        };
        let integration = IntegrationSettings {
            h: doc.get("h")?.unwrap_or(d.integration.h),
            t_end: doc.get("t_end")?.unwrap_or(d.integration.t_end),
            t_skip: doc.get("t_skip")?.unwrap_or(d.integration.t_skip),
            stride: doc.get("stride")?.unwrap_or(d.integration.stride),
            method: parse_method(doc)?,
        };
        let initial = State::new(
            doc.get("x0")?.unwrap_or(d.initial.x),
            doc.get("y0")?.unwrap_or(d.initial.y),
            doc.get("z0")?.unwrap_or(d.initial.z),
        );
        let l = LyapunovSettings::default();
        let analysis = AnalysisSettings {
            lyapunov: LyapunovSettings {
                h: doc.get("lce_h")?.unwrap_or(l.h),
                transient: doc.get("lce_transient")?.unwrap_or(l.transient),
                averaging_time: doc.get("lce_time")?.unwrap_or(l.averaging_time),
                renorm_interval: doc.get("renorm_interval")?.unwrap_or(l.renorm_interval),
            },
            zero_tol: doc.get("zero_tol")?.unwrap_or(d.analysis.zero_tol),
            cluster_tol_rel: doc.get("cluster_tol_rel")?.unwrap_or(d.analysis.cluster_tol_rel),
            sym_tol: doc.get("sym_tol")?.unwrap_or(d.analysis.sym_tol),
        };
        let analyses = match doc.raw("analyses") {
            None => d.analyses,
            Some(list) => Analyses::parse(list).map_err(|reason| doc.invalid("analyses", reason))?,
        };
        let temperatures = TemperatureGrid {
            t_min: doc.get("t_min")?.unwrap_or(d.temperatures.t_min),
            t_max: doc.get("t_max")?.unwrap_or(d.temperatures.t_max),
            points: doc.get("t_points")?.unwrap_or(d.temperatures.points),
        };
        Ok(Self { params, physical, integration, initial, analysis, alpha_range, analyses, temperatures })
    }
}
