//! Hardware and region profiles for the deployment side of the emission model.

use std::io::Read;

use serde::{Deserialize, Serialize};

use super::CatalogError;

/// Average power draw and utilization of the machine running the job.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareProfile {
    avg_power_kw: f64,
    utilization: f64,
}

impl HardwareProfile {
    pub fn new(avg_power_kw: f64, utilization: f64) -> Result<Self, CatalogError> {
        if !(avg_power_kw.is_finite() && avg_power_kw > 0.0) {
            return Err(CatalogError::InvalidParameter(format!(
                "power_kw must be a positive finite number, got {avg_power_kw}"
            )));
        }
        if !(utilization > 0.0 && utilization <= 1.0) {
            return Err(CatalogError::InvalidParameter(format!(
                "utilization must lie in (0, 1], got {utilization}"
            )));
        }
        Ok(HardwareProfile { avg_power_kw, utilization })
    }

    pub fn avg_power_kw(&self) -> f64 {
        self.avg_power_kw
    }

    pub fn utilization(&self) -> f64 {
        self.utilization
    }

    /// Parses `power_kw=<decimal>` and `utilization=<decimal>` lines.
    ///
    /// Blank lines and `#` comments are skipped; both keys are required.
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let mut power = None;
        let mut utilization = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| CatalogError::Parse {
                line: lineno,
                message: format!("expected key=value, got {line:?}"),
            })?;
            let parsed: f64 = value.trim().parse().map_err(|_| CatalogError::Parse {
                line: lineno,
                message: format!("{} is not a decimal: {:?}", key.trim(), value.trim()),
            })?;
            match key.trim() {
                "power_kw" => power = Some(parsed),
                "utilization" => utilization = Some(parsed),
                other => {
                    return Err(CatalogError::Parse {
                        line: lineno,
                        message: format!("unknown hardware key {other:?}"),
                    })
                }
            }
        }
        let power = power.ok_or_else(|| CatalogError::InvalidParameter("missing power_kw".into()))?;
        let utilization =
            utilization.ok_or_else(|| CatalogError::InvalidParameter("missing utilization".into()))?;
        Self::new(power, utilization)
    }
}

impl Default for HardwareProfile {
    fn default() -> Self {
        HardwareProfile { avg_power_kw: 1.0, utilization: 1.0 }
    }
}

/// Grid carbon intensity for a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionProfile {
    region_code: String,
    kg_co2_per_kwh: f64,
}

impl RegionProfile {
    pub fn new(region_code: impl Into<String>, kg_co2_per_kwh: f64) -> Result<Self, CatalogError> {
        let region_code = region_code.into();
        if !(kg_co2_per_kwh.is_finite() && kg_co2_per_kwh >= 0.0) {
            return Err(CatalogError::InvalidParameter(format!(
                "emission factor for region {region_code:?} must be >= 0, got {kg_co2_per_kwh}"
            )));
        }
        Ok(RegionProfile { region_code, kg_co2_per_kwh })
    }

    pub fn region_code(&self) -> &str {
        &self.region_code
    }

    pub fn emission_factor(&self) -> f64 {
        self.kg_co2_per_kwh
    }
}

impl Default for RegionProfile {
    fn default() -> Self {
        RegionProfile { region_code: "UNIT".into(), kg_co2_per_kwh: 1.0 }
    }
}

/// Reads `region,kg_co2_per_kwh` CSV.
pub fn ingest_region_profiles<R: Read>(source: R) -> Result<Vec<RegionProfile>, CatalogError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = reader.headers().map_err(|e| CatalogError::Parse { line: 1, message: e.to_string() })?;
    if headers.iter().collect::<Vec<_>>() != ["region", "kg_co2_per_kwh"] {
        return Err(CatalogError::Parse {
            line: 1,
            message: "expected header `region,kg_co2_per_kwh`".into(),
        });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CatalogError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let (region, factor) = (&record[0], &record[1]);
        let factor: f64 = factor.parse().map_err(|_| CatalogError::Parse {
            line,
            message: format!("emission factor is not a decimal: {factor:?}"),
        })?;
        out.push(RegionProfile::new(region, factor)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_examples() {
        let zero = ingest_region_profiles("region,kg_co2_per_kwh\nSE,0.0".as_bytes()).unwrap();
        assert_eq!(zero, vec![RegionProfile::new("SE", 0.0).unwrap()]);
        let xx = ingest_region_profiles("region,kg_co2_per_kwh\nXX,0.5".as_bytes()).unwrap();
        assert_eq!(xx[0].emission_factor(), 0.5);
        let neg = ingest_region_profiles("region,kg_co2_per_kwh\nXX,-1".as_bytes());
        assert!(matches!(neg, Err(CatalogError::InvalidParameter(_))));
    }

    #[test]
    fn region_parse_error_carries_line() {
        let err = ingest_region_profiles("region,kg_co2_per_kwh\nA,0.1\nB,abc\n".as_bytes()).unwrap_err();
        match err {
            CatalogError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = ingest_region_profiles("region,kg_co2_per_kwh\nA,0.1,9\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CatalogError::Parse { line: 2, .. }), "{err:?}");
        assert!(ingest_region_profiles("zone,factor\nA,1".as_bytes()).is_err());
    }

    #[test]
    fn hardware_parse() {
        let hw = HardwareProfile::parse("# rack A\npower_kw=0.3\nutilization=0.8\n").unwrap();
        assert_eq!(hw.avg_power_kw(), 0.3);
        assert_eq!(hw.utilization(), 0.8);
        assert!(HardwareProfile::parse("power_kw=0.3\nutilization=1.5").is_err());
        assert!(HardwareProfile::parse("power_kw=0\nutilization=1").is_err());
        assert!(HardwareProfile::parse("power_kw=0.3").is_err());
        assert!(matches!(
            HardwareProfile::parse("power_kw=0.3\nvoltage=5"),
            Err(CatalogError::Parse { line: 2, .. })
        ));
    }
}
