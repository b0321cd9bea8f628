//! Parsing of complex numbers, degree lists and the flat `key = value`
//! config file, and resolution of the integrand a command runs on.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use sectionzeros::curves::{bessel_limit_curve, sample_limit_curve, szego_curve, LimitCurve};
use sectionzeros::moments::IntegrandSpec;
use sectionzeros::sections::{bessel_section, build_section, exp_section, hyp1f1_section, SectionPolynomial};

use crate::CliError;

fn config_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

/// Parses `re+imi` forms: `-0.5+1i`, `1.5`, `2i`, `-i`, `1e-3-2.5e-1i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("cannot parse {s:?} as a complex number (expected re+imi)");
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => num(v)?,
    };
    Ok(Complex64::new(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("cannot parse {p:?} as a number")))
        .collect()
}

/// `80`, `40,80,160` or `start:end[:step]` (inclusive).
pub fn parse_degrees(s: &str) -> Result<Vec<usize>, String> {
    let int = |p: &str| p.trim().parse::<usize>().map_err(|_| format!("cannot parse {p:?} as a degree"));
    let out: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() > 3 {
            return Err(format!("range {s:?} has more than three fields"));
        }
        let start = int(parts[0])?;
        let end = int(parts[1])?;
        let step = if parts.len() == 3 { int(parts[2])? } else { 1 };
        if step == 0 {
            return Err("range step must be positive".into());
        }
        (start..=end).step_by(step).collect()
    } else {
        s.split(',').map(int).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(format!("degree list {s:?} is empty"));
    }
    if out.contains(&0) {
        return Err("degrees must be positive".into());
    }
    Ok(out)
}

/// Values from a flat config file, consulted when a flag is absent.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

pub const CONFIG_KEYS: &[&str] = &[
    "spec", "family", "a", "b", "mu", "nu", "g", "alpha", "bparam", "n", "epsilon", "delta", "samples", "out",
    "svg", "report", "threads", "kmax", "z", "sigma", "t-max", "h", "side", "lambdas", "tol-curve",
    "tol-cluster",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = k.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key {key:?}", lineno + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag if given, else the config value, parsed with `parse`.
    pub fn pick<T>(
        &self,
        key: &str,
        flag: Option<T>,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(v) => parse(v).map(Some).map_err(|e| config_err(key, e)),
            None => Ok(None),
        }
    }

    pub fn pick_str(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("cannot parse {s:?} as a number"))
}

pub fn parse_usize(s: &str) -> Result<usize, String> {
    s.trim().parse::<usize>().map_err(|_| format!("cannot parse {s:?} as a nonnegative integer"))
}

/// What a command runs on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Target {
    Integral { name: String, spec: IntegrandSpec },
    Exp,
    Hyp1f1 { b: Complex64 },
    Bessel { alpha: Complex64 },
}

/// Raw integrand options before resolution.
#[derive(Debug, Clone, Default)]
pub struct TargetOptions {
    pub spec: Option<String>,
    pub family: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub mu: Option<String>,
    pub nu: Option<String>,
    pub g: Option<String>,
    pub alpha: Option<String>,
    pub bparam: Option<String>,
}

impl TargetOptions {
    pub fn resolve(self, cfg: &ConfigFile) -> Result<Target, CliError> {
        let spec = cfg.pick_str("spec", self.spec);
        let family = cfg.pick_str("family", self.family);
        let a = cfg.pick("a", self.a, parse_f64)?;
        let b = cfg.pick("b", self.b, parse_f64)?;
        let mu = cfg.pick("mu", self.mu.as_deref().map(parse_complex).transpose().map_err(|e| config_err("mu", e))?, parse_complex)?;
        let nu = cfg.pick("nu", self.nu.as_deref().map(parse_complex).transpose().map_err(|e| config_err("nu", e))?, parse_complex)?;
        let g = cfg.pick("g", self.g.as_deref().map(parse_complex_list).transpose().map_err(|e| config_err("g", e))?, parse_complex_list)?;
        let alpha = cfg.pick("alpha", self.alpha.as_deref().map(parse_complex).transpose().map_err(|e| config_err("alpha", e))?, parse_complex)?;
        let bparam = cfg.pick("bparam", self.bparam.as_deref().map(parse_complex).transpose().map_err(|e| config_err("bparam", e))?, parse_complex)?;

        let family = match (family.as_deref(), spec.as_deref()) {
            (Some(f), _) => f.to_string(),
            (None, Some(_)) => "integral".into(),
            (None, None) if a.is_some() || b.is_some() || mu.is_some() || nu.is_some() => "integral".into(),
            (None, None) if alpha.is_some() => "bessel".into(),
            (None, None) => return Err(CliError::Config("no integrand given: use --spec, --family or a, b, mu, nu".into())),
        };
        match family.as_str() {
            "integral" => {
                let (name, s) = match spec.as_deref() {
                    Some("fig2") => ("fig2".to_string(), IntegrandSpec::fig2()),
                    Some("fig3") => ("fig3".to_string(), IntegrandSpec::fig3()),
                    Some("custom") | None => {
                        let need = |v: Option<f64>, k: &str| v.ok_or_else(|| config_err(k, "required for a custom integrand"));
                        let s = IntegrandSpec {
                            a: need(a, "a")?,
                            b: need(b, "b")?,
                            mu: mu.ok_or_else(|| config_err("mu", "required for a custom integrand"))?,
                            nu: nu.ok_or_else(|| config_err("nu", "required for a custom integrand"))?,
                            g: g.unwrap_or_else(|| vec![Complex64::new(1.0, 0.0)]),
                        };
                        ("custom".to_string(), s)
                    }
                    Some(other) => return Err(config_err("spec", format!("unknown spec {other:?} (fig2, fig3 or custom)"))),
                };
                s.validate().map_err(|e| config_err("spec", e))?;
                Ok(Target::Integral { name, spec: s })
            }
            "exp" => Ok(Target::Exp),
            "hyp1f1" => {
                let b = bparam.ok_or_else(|| config_err("bparam", "required for the hyp1f1 family"))?;
                IntegrandSpec::hyp1f1(b).map_err(|e| config_err("bparam", e))?;
                Ok(Target::Hyp1f1 { b })
            }
            "bessel" => {
                let alpha = alpha.unwrap_or(Complex64::new(0.0, 0.0));
                IntegrandSpec::bessel(alpha).map_err(|e| config_err("alpha", e))?;
                Ok(Target::Bessel { alpha })
            }
            other => Err(config_err("family", format!("unknown family {other:?} (integral, exp, hyp1f1, bessel)"))),
        }
    }
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Integral { name, .. } => name.clone(),
            Target::Exp => "exp".into(),
            Target::Hyp1f1 { b } => format!("hyp1f1(b={})", format_complex(*b)),
            Target::Bessel { alpha } => format!("bessel(alpha={})", format_complex(*alpha)),
        }
    }

    /// The integrand whose limit curve governs the zeros, if there is one.
    pub fn spec(&self) -> Option<IntegrandSpec> {
        match self {
            Target::Integral { spec, .. } => Some(spec.clone()),
            Target::Exp => None,
            Target::Hyp1f1 { b } => IntegrandSpec::hyp1f1(*b).ok(),
            Target::Bessel { alpha } => IntegrandSpec::bessel(*alpha).ok(),
        }
    }

    pub fn curve(&self, samples: usize) -> Result<LimitCurve, CliError> {
        Ok(match self {
            Target::Exp => szego_curve(samples)?,
            Target::Bessel { .. } => bessel_limit_curve(samples)?,
            _ => sample_limit_curve(&self.spec().unwrap(), samples)?,
        })
    }

    pub fn check_degree(&self, n: usize) -> Result<(), CliError> {
        if matches!(self, Target::Bessel { .. }) && n % 2 != 0 {
            return Err(config_err("n", format!("Bessel sections need even degrees, got {n}")));
        }
        Ok(())
    }

    pub fn section(&self, n: usize) -> Result<SectionPolynomial, CliError> {
        self.check_degree(n)?;
        Ok(match self {
            Target::Integral { spec, .. } => build_section(spec, n)?,
            Target::Exp => exp_section(n)?,
            Target::Hyp1f1 { b } => hyp1f1_section(*b, n)?,
            Target::Bessel { alpha } => bessel_section(*alpha, n)?.section,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("-0.5+1i").unwrap(), c(-0.5, 1.0));
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.5-i").unwrap(), c(0.5, -1.0));
        assert_eq!(parse_complex("1e-3-2.5e-1i").unwrap(), c(1e-3, -0.25));
        assert_eq!(parse_complex("-1e+2+3E-1i").unwrap(), c(-100.0, 0.3));
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("").is_err());
        for z in [c(-0.5, 1.0), c(1.5, -0.0), c(0.0, -2.25)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn degree_forms() {
        assert_eq!(parse_degrees("80").unwrap(), vec![80]);
        assert_eq!(parse_degrees("40,80,160").unwrap(), vec![40, 80, 160]);
        assert_eq!(parse_degrees("40:160:40").unwrap(), vec![40, 80, 120, 160]);
        assert_eq!(parse_degrees("3:5").unwrap(), vec![3, 4, 5]);
        assert!(parse_degrees("5:3").is_err());
        assert!(parse_degrees("0,4").is_err());
        assert!(parse_degrees("4:8:0").is_err());
    }

    #[test]
    fn config_file() {
        let cfg = ConfigFile::parse("# comment\nspec = fig3\nt_max = 2\n\nn=40:80:20 # trailing\n").unwrap();
        assert_eq!(cfg.get("spec"), Some("fig3"));
        assert_eq!(cfg.get("t-max"), Some("2"));
        assert_eq!(cfg.get("n"), Some("40:80:20"));
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("spec fig2").is_err());
    }

    #[test]
    fn target_resolution() {
        let cfg = ConfigFile::default();
        let t = TargetOptions { spec: Some("fig2".into()), ..Default::default() }.resolve(&cfg).unwrap();
        assert_eq!(t.spec().unwrap(), IntegrandSpec::fig2());
        let t = TargetOptions {
            a: Some(0.0),
            b: Some(1.0),
            mu: Some("0".into()),
            nu: Some("0.5+1i".into()),
            ..Default::default()
        }
        .resolve(&cfg)
        .unwrap();
        assert_eq!(t.spec().unwrap().nu, c(0.5, 1.0));
        let bad = TargetOptions { a: Some(1.0), b: Some(1.0), mu: Some("-2".into()), nu: Some("0".into()), ..Default::default() };
        assert!(matches!(bad.resolve(&cfg), Err(CliError::Config(m)) if m.starts_with("spec")));
        let from_file = ConfigFile::parse("family = bessel\nalpha = 2.5").unwrap();
        assert_eq!(TargetOptions::default().resolve(&from_file).unwrap(), Target::Bessel { alpha: c(2.5, 0.0) });
        assert!(TargetOptions::default().resolve(&cfg).is_err());
    }
}
