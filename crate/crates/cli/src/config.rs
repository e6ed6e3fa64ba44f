//! Flat key-value experiment configuration: top-level keys plus repeated
//! `[kernel]` / `[function]` / `[set]` / `[inverse]` / `[phi]` sections.
//! Line-oriented, no nesting, `#` comments.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nonlocal_core::corpus;
use nonlocal_core::curve::LogLogCurve;
use nonlocal_core::fields::GridFunction;
use nonlocal_core::kernels::{Kernel, SetSpec, WMode};
use nonlocal_core::verify::Strategy;
use nonlocal_core::young::YoungFunction;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ConfigError { line, message: message.into() }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "config error: {}", self.message)
        } else {
            write!(f, "config error at line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gns,
    FractionalGns,
    Poincare,
    Friedrichs,
    Bbm,
    Lemmas,
    Inverse,
    All,
}

impl Suite {
    fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "gns" => Suite::Gns,
            "fractional-gns" => Suite::FractionalGns,
            "poincare" => Suite::Poincare,
            "friedrichs" => Suite::Friedrichs,
            "bbm" => Suite::Bbm,
            "lemmas" => Suite::Lemmas,
            "inverse" => Suite::Inverse,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Gns => "gns",
            Suite::FractionalGns => "fractional-gns",
            Suite::Poincare => "poincare",
            Suite::Friedrichs => "friedrichs",
            Suite::Bbm => "bbm",
            Suite::Lemmas => "lemmas",
            Suite::Inverse => "inverse",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub name: String,
    pub kernel: Kernel,
    pub strategy: Option<Strategy>,
}

#[derive(Debug, Clone)]
pub struct FunctionSpec {
    pub name: String,
    /// shape tag for analytic resampling (dilations), None for CSV data
    pub shape: Option<String>,
    pub field: GridFunction,
}

#[derive(Debug, Clone)]
pub struct PhiSpec {
    pub name: String,
    pub phi: YoungFunction,
}

#[derive(Debug, Clone, Copy)]
pub struct InverseSpec {
    pub c: f64,
    pub q: f64,
    pub p: f64,
    pub d: u32,
}

#[derive(Debug)]
pub struct ExperimentConfig {
    pub mode: WMode,
    pub suite: Suite,
    pub bases: Vec<f64>,
    pub resolution: usize,
    pub tolerance: Option<f64>,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub seed: u64,
    pub kernels: Vec<KernelSpec>,
    pub functions: Vec<FunctionSpec>,
    pub phis: Vec<PhiSpec>,
    pub omega: SetSpec,
    pub inverse: Vec<InverseSpec>,
}

struct Section {
    kind: String,
    line: usize,
    entries: BTreeMap<String, (usize, String)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::new(*line, format!("field {key}: bad number `{v}`"))),
        }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn require_f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.f64(key)?
            .ok_or_else(|| ConfigError::new(self.line, format!("[{}] missing field {key}", self.kind)))
    }
}

fn split_sections(text: &str) -> Result<(Section, Vec<Section>), ConfigError> {
    let mut top = Section { kind: "top".into(), line: 0, entries: BTreeMap::new() };
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            sections.push(Section {
                kind: name.trim().to_string(),
                line: lineno,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(lineno, format!("expected key = value, got `{line}`")))?;
        let target = sections.last_mut().map(|s| &mut s.entries).unwrap_or(&mut top.entries);
        target.insert(key.trim().to_string(), (lineno, value.trim().to_string()));
    }
    Ok((top, sections))
}

fn parse_kernel(section: &Section, index: usize) -> Result<KernelSpec, ConfigError> {
    let family = section
        .get("family")
        .ok_or_else(|| ConfigError::new(section.line, "[kernel] missing field family"))?;
    let p = section.f64_or("p", 2.0)?;
    let d = section.f64_or("d", 1.0)? as u32;
    if !(1..=2).contains(&d) {
        return Err(ConfigError::new(section.line, "kernel dimension d must be 1 or 2"));
    }
    if p < 1.0 {
        return Err(ConfigError::new(section.line, "kernel exponent p must satisfy p ≥ 1"));
    }
    let kernel = match family {
        "fractional" => Kernel::fractional(section.require_f64("s")?, p, d),
        "truncated" => Kernel::truncated_fractional(section.require_f64("s")?, p, d),
        "max-fractional" => {
            Kernel::max_fractional(section.require_f64("s1")?, section.require_f64("s2")?, p, d)
        }
        "min-fractional" => {
            Kernel::min_fractional(section.require_f64("s1")?, section.require_f64("s2")?, p, d)
        }
        "ball" => Kernel::ball_indicator(section.f64_or("radius", 1.0)?, p, d),
        "log" => Kernel::log_family(section.require_f64("a")?, p, d),
        "table" => {
            let path = section
                .get("csv")
                .ok_or_else(|| ConfigError::new(section.line, "[kernel] table needs csv ="))?;
            let text = std::fs::read_to_string(path).map_err(|e| {
                ConfigError::new(section.line, format!("cannot read kernel csv {path}: {e}"))
            })?;
            let curve = radial_table_from_csv(&text)
                .map_err(|e| ConfigError::new(section.line, format!("kernel csv {path}: {e}")))?;
            Kernel::from_table(curve, p, d)
        }
        other => {
            return Err(ConfigError::new(section.line, format!("unknown kernel family `{other}`")))
        }
    };
    let strategy = match section.get("strategy") {
        None | Some("auto") => None,
        Some("direct") => Some(Strategy::Direct),
        Some("per-component") => Some(Strategy::PerComponent),
        Some("minorant") => Some(Strategy::Minorant),
        Some(other) => {
            return Err(ConfigError::new(section.line, format!("unknown strategy `{other}`")))
        }
    };
    let name = section
        .get("name")
        .map(str::to_string)
        .unwrap_or_else(|| format!("{family}-{index}"));
    Ok(KernelSpec { name, kernel, strategy })
}

/// Two-column radius,value CSV with strictly increasing radii.
fn radial_table_from_csv(text: &str) -> Result<LogLogCurve, String> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_alphabetic())
        {
            continue;
        }
        let mut it = line.split(',');
        let r: f64 = it
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| format!("bad row `{line}`"))?;
        let v: f64 = it
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| format!("bad row `{line}`"))?;
        xs.push(r);
        ys.push(v);
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err("radii must be strictly increasing".into());
    }
    LogLogCurve::from_samples(&xs, &ys).map_err(|e| e.to_string())
}

fn parse_function(
    section: &Section,
    index: usize,
    resolution: usize,
) -> Result<FunctionSpec, ConfigError> {
    let scale = section.f64_or("scale", 1.0)?;
    let dilate = section.f64_or("dilate", 1.0)?;
    if let Some(shape) = section.get("shape") {
        let field = corpus::dilated(shape, dilate, resolution).ok_or_else(|| {
            ConfigError::new(section.line, format!("unknown function shape `{shape}`"))
        })?;
        let name = section.get("name").map(str::to_string).unwrap_or_else(|| {
            if dilate == 1.0 {
                shape.to_string()
            } else {
                format!("{shape}@{dilate}")
            }
        });
        return Ok(FunctionSpec {
            name,
            shape: Some(shape.to_string()),
            field: field.scale(scale),
        });
    }
    if let Some(path) = section.get("csv") {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new(section.line, format!("cannot read function csv {path}: {e}"))
        })?;
        let field = GridFunction::from_csv(&text)
            .map_err(|e| ConfigError::new(section.line, format!("function csv {path}: {e}")))?;
        let name = section
            .get("name")
            .map(str::to_string)
            .unwrap_or_else(|| format!("csv-{index}"));
        return Ok(FunctionSpec { name, shape: None, field: field.scale(scale) });
    }
    Err(ConfigError::new(section.line, "[function] needs shape = or csv ="))
}

fn parse_phi(section: &Section, index: usize) -> Result<PhiSpec, ConfigError> {
    let p = section.f64_or("p", 2.0)?;
    if let Some(path) = section.get("csv") {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::new(section.line, format!("cannot read phi csv {path}: {e}"))
        })?;
        let phi = YoungFunction::from_csv(&text)
            .map_err(|e| ConfigError::new(section.line, format!("phi csv {path}: {e}")))?;
        return Ok(PhiSpec { name: format!("phi-{index}"), phi });
    }
    let c = section.f64_or("c", 1.0)?;
    let q = section.require_f64("q")?;
    let phi = YoungFunction::power(c, q, p)
        .map_err(|e| ConfigError::new(section.line, e.to_string()))?;
    Ok(PhiSpec { name: format!("power-{index}"), phi })
}

pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(0, format!("cannot read config {}: {e}", path.display())))?;
    parse_with_overrides(&text, overrides)
}

/// Command-line flags override the file's top-level keys.
pub fn parse_with_overrides(
    text: &str,
    overrides: &[(String, String)],
) -> Result<ExperimentConfig, ConfigError> {
    let (mut top, sections) = split_sections(text)?;
    for (key, value) in overrides {
        top.entries.insert(key.clone(), (0, value.clone()));
    }
    let mode = match top.get("mode").unwrap_or("a") {
        "a" => WMode::TailMass,
        "mr2" => WMode::NuSharp,
        other => return Err(ConfigError::new(0, format!("mode must be a|mr2, got `{other}`"))),
    };
    let suite = match top.get("suite") {
        None => Suite::All,
        Some(s) => Suite::parse(s)
            .ok_or_else(|| ConfigError::new(0, format!("unknown suite `{s}`")))?,
    };
    let resolution = top.f64_or("resolution", 1024.0)? as usize;
    if !resolution.is_power_of_two() || !(64..=16384).contains(&resolution) {
        return Err(ConfigError::new(
            0,
            format!("resolution must be a power of two in [2^6, 2^14], got {resolution}"),
        ));
    }
    let mut bases = Vec::new();
    for tok in top.get("t").unwrap_or("2").split(',') {
        let t: f64 = tok
            .trim()
            .parse()
            .map_err(|_| ConfigError::new(0, format!("bad base t `{tok}`")))?;
        if t < 2.0 {
            return Err(ConfigError::new(0, format!("bases must satisfy t ≥ 2, got {t}")));
        }
        bases.push(t);
    }
    let tolerance = top.f64("tolerance")?;
    if let Some(tol) = tolerance {
        if tol <= 0.0 {
            return Err(ConfigError::new(0, "tolerance override must be positive"));
        }
    }
    let out_dir = PathBuf::from(top.get("out").unwrap_or("out"));
    let workers = top.f64_or("workers", 1.0)? as usize;
    if workers == 0 || workers > 64 {
        return Err(ConfigError::new(0, "workers must be between 1 and 64"));
    }
    let seed = top.f64_or("seed", 42.0)? as u64;

    let mut kernels = Vec::new();
    let mut functions = Vec::new();
    let mut phis = Vec::new();
    let mut inverse = Vec::new();
    let mut omega = SetSpec::interval(0.0, 1.0);
    for section in &sections {
        match section.kind.as_str() {
            "kernel" => kernels.push(parse_kernel(section, kernels.len())?),
            "function" => functions.push(parse_function(section, functions.len(), resolution)?),
            "phi" => phis.push(parse_phi(section, phis.len())?),
            "set" => {
                let spec = section
                    .get("interval")
                    .ok_or_else(|| ConfigError::new(section.line, "[set] needs interval = a,b"))?;
                let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(ConfigError::new(section.line, "interval needs two endpoints"));
                }
                let a: f64 = parts[0]
                    .parse()
                    .map_err(|_| ConfigError::new(section.line, "bad interval endpoint"))?;
                let b: f64 = parts[1]
                    .parse()
                    .map_err(|_| ConfigError::new(section.line, "bad interval endpoint"))?;
                if b <= a {
                    return Err(ConfigError::new(section.line, "interval must be nonempty"));
                }
                omega = SetSpec::interval(a, b);
            }
            "inverse" => {
                inverse.push(InverseSpec {
                    c: section.f64_or("c", 1.0)?,
                    q: section.require_f64("q")?,
                    p: section.f64_or("p", 2.0)?,
                    d: section.f64_or("d", 1.0)? as u32,
                });
            }
            other => {
                return Err(ConfigError::new(
                    section.line,
                    format!("unknown section `[{other}]`"),
                ))
            }
        }
    }
    // default golden corpus when sections are omitted
    if kernels.is_empty() {
        for (name, kernel, strategy) in corpus::golden_kernels(2.0, 1) {
            kernels.push(KernelSpec {
                name: name.to_string(),
                kernel,
                strategy: Some(strategy),
            });
        }
    }
    if functions.is_empty() {
        for (name, field) in corpus::golden_functions(resolution) {
            functions.push(FunctionSpec {
                name: name.to_string(),
                shape: Some(name.to_string()),
                field,
            });
        }
    }
    Ok(ExperimentConfig {
        mode,
        suite,
        bases,
        resolution,
        tolerance,
        out_dir,
        workers,
        seed,
        kernels,
        functions,
        phis,
        omega,
        inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        parse_with_overrides(text, &[])
    }

    #[test]
    fn parses_minimal_config() {
        let cfg = parse("suite = gns\nresolution = 256\nt = 2,3\n").unwrap();
        assert_eq!(cfg.suite, Suite::Gns);
        assert_eq!(cfg.bases, vec![2.0, 3.0]);
        assert_eq!(cfg.kernels.len(), 4); // golden defaults
        assert_eq!(cfg.functions.len(), 4);
    }

    #[test]
    fn rejects_small_base() {
        let err = parse("t = 1.5\n").unwrap_err();
        assert!(err.message.contains("t ≥ 2"), "{}", err.message);
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(parse("resolution = 1000\n").is_err());
        assert!(parse("resolution = 32\n").is_err());
    }

    #[test]
    fn parses_kernel_sections() {
        let cfg = parse(
            "suite = gns\nresolution = 128\n[kernel]\nfamily = fractional\ns = 0.25\n\
             [kernel]\nfamily = max-fractional\ns1 = 0.125\ns2 = 0.25\nstrategy = per-component\n",
        )
        .unwrap();
        assert_eq!(cfg.kernels.len(), 2);
        assert_eq!(cfg.kernels[1].strategy, Some(Strategy::PerComponent));
    }

    #[test]
    fn loads_tabulated_kernel_from_csv() {
        let path = std::env::temp_dir().join(format!("nonlocal-table-{}.csv", std::process::id()));
        let mut rows = vec!["radius,value".to_string()];
        for i in 0..64 {
            let r = 1e-3 * 10f64.powf(6.0 * i as f64 / 63.0);
            rows.push(format!("{r:.9e},{:.9e}", r.powf(-1.5)));
        }
        std::fs::write(&path, rows.join("\n")).unwrap();
        let cfg = parse(&format!(
            "resolution = 128\n[kernel]\nfamily = table\ncsv = {}\n",
            path.display()
        ))
        .unwrap();
        let k = &cfg.kernels[0].kernel;
        assert!((k.value(1.0) - 1.0).abs() < 1e-9);
        assert!(k.levy_modular().is_ok());
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse("suite = gns\n[kernel]\nfamily = fractional\ns = oops\n").unwrap_err();
        assert_eq!(err.line, 4);
    }
}
