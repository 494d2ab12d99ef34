//! Uniform serializable record for measure results.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::state::RegionPartition;

#[derive(Debug, Clone, Serialize)]
pub struct PartitionRecord {
    pub region_a: Vec<usize>,
    pub region_b: Vec<usize>,
    pub boundary_count: usize,
}

impl From<&RegionPartition> for PartitionRecord {
    fn from(p: &RegionPartition) -> Self {
        Self { region_a: p.region_a().to_vec(), region_b: p.region_b().to_vec(), boundary_count: p.boundary_count() }
    }
}

/// `{measure, value, partition, parameters, diagnostics}`.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub measure: String,
    pub value: f64,
    pub partition: Option<PartitionRecord>,
    pub parameters: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
}

impl MeasureReport {
    pub fn new(measure: impl Into<String>, value: f64) -> Self {
        Self { measure: measure.into(), value, partition: None, parameters: Map::new(), diagnostics: Map::new() }
    }

    pub fn with_partition(mut self, part: &RegionPartition) -> Self {
        self.partition = Some(part.into());
        self
    }

    pub fn parameter(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_owned(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn diagnostic(mut self, key: &str, value: impl Serialize) -> Self {
        self.diagnostics.insert(key.to_owned(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_has_all_fields() {
        let part = RegionPartition::chain(3, &[0]).unwrap();
        let r = MeasureReport::new("negativity", 0.25).with_partition(&part).parameter("p", 0.5).diagnostic("min_eigenvalue", -0.125);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["measure"], "negativity");
        assert_eq!(v["value"], 0.25);
        assert_eq!(v["partition"]["region_b"], serde_json::json!([1, 2]));
        assert_eq!(v["parameters"]["p"], 0.5);
        assert_eq!(v["diagnostics"]["min_eigenvalue"], -0.125);
    }
}
