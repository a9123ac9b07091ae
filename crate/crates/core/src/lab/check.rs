use serde::{Deserialize, Serialize};

use super::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// |value − target| ≤ tolerance.
    AbsDiff,
    /// |value − target| ≤ tolerance·|target|.
    RelDiff,
    /// value ≤ target.
    AtMost,
    /// value ≥ target.
    AtLeast,
}

/// One declared tolerance and its outcome; a row of `checks.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "finite_or_text")]
    pub value: f64,
    #[serde(with = "finite_or_text")]
    pub target: f64,
    #[serde(with = "finite_or_text")]
    pub tolerance: f64,
    pub mode: CheckMode,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, target: f64, tolerance: f64, mode: CheckMode) -> Self {
        let mut c = Check { name: name.into(), value, target, tolerance, mode, pass: false };
        c.pass = c.evaluate(value);
        c
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check::new(name, value, bound, 0.0, CheckMode::AtMost)
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check::new(name, value, bound, 0.0, CheckMode::AtLeast)
    }

    /// Whether `value` meets this check's target; NaN never does.
    pub fn evaluate(&self, value: f64) -> bool {
        match self.mode {
            CheckMode::AbsDiff => (value - self.target).abs() <= self.tolerance,
            CheckMode::RelDiff => (value - self.target).abs() <= self.tolerance * self.target.abs(),
            CheckMode::AtMost => value <= self.target,
            CheckMode::AtLeast => value >= self.target,
        }
    }

    pub fn describe(&self) -> String {
        let rule = match self.mode {
            CheckMode::AbsDiff => format!("|x - {}| <= {}", self.target, self.tolerance),
            CheckMode::RelDiff => format!("|x - {}| <= {}*|{}|", self.target, self.tolerance, self.target),
            CheckMode::AtMost => format!("x <= {}", self.target),
            CheckMode::AtLeast => format!("x >= {}", self.target),
        };
        format!("{} {}: x = {} ({rule})", if self.pass { "PASS" } else { "FAIL" }, self.name, self.value)
    }
}

/// JSON has no NaN or infinity, so those are written as the strings "NaN",
/// "inf" and "-inf" and read back from either form.
mod finite_or_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(|_| serde::de::Error::custom(format!("not a number: {t}"))),
        }
    }
}

pub fn checks_to_csv(checks: &[Check]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in checks {
        w.serialize(c).expect("check serializes");
    }
    if checks.is_empty() {
        w.write_record(["name", "value", "target", "tolerance", "mode", "pass"]).expect("header");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn checks_from_csv(text: &str) -> Result<Vec<Check>, LabError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<Check>, _>>()
        .map_err(|e| LabError::Data(format!("checks.csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes() {
        assert!(Check::new("a", 1.05, 1.0, 0.1, CheckMode::AbsDiff).pass);
        assert!(!Check::new("a", -2.2, -2.0, 0.05, CheckMode::RelDiff).pass);
        assert!(Check::at_most("b", 1e-9, 1e-8).pass);
        assert!(!Check::at_least("c", f64::NAN, 0.0).pass);
    }

    #[test]
    fn csv_round_trip() {
        let checks = vec![
            Check::new("rate", -1.9999999999999996, -2.0, 0.05, CheckMode::RelDiff),
            Check::at_most("defect", 2.0e-7, 1e-6),
        ];
        assert_eq!(checks_from_csv(&checks_to_csv(&checks)).unwrap(), checks);
        assert!(checks_from_csv(&checks_to_csv(&[])).unwrap().is_empty());
    }

    #[test]
    fn non_finite_values_survive_csv_and_json() {
        let checks = vec![Check::at_most("band", f64::NAN, 3.0), Check::at_least("margin", f64::INFINITY, 0.0)];
        for back in [
            checks_from_csv(&checks_to_csv(&checks)).unwrap(),
            serde_json::from_str::<Vec<Check>>(&serde_json::to_string(&checks).unwrap()).unwrap(),
        ] {
            assert!(back[0].value.is_nan() && !back[0].pass);
            assert_eq!(back[1].value, f64::INFINITY);
        }
    }
}
