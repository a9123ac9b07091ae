use serde_json::Value;

use super::config::ExperimentConfig;
use super::LabError;

const PARAM_KEYS: [&str; 6] = ["alpha", "sigma", "cfl", "stop_inradius", "m", "record_stride"];
const TOP_KEYS: [&str; 4] = ["experiment", "output_dir", "seed", "initial_body"];

/// Maps a short override key to its path in the config document.
fn resolve(key: &str, doc: &Value) -> Result<Vec<String>, LabError> {
    if key.contains('.') {
        return Ok(key.split('.').map(str::to_string).collect());
    }
    let alias = match key {
        "h" => Some("h_values"),
        "delta" => Some("deltas"),
        "radius" => Some("radii"),
        "stride" => Some("strides"),
        _ => None,
    };
    if let Some(a) = alias {
        return Ok(vec!["settings".into(), a.into()]);
    }
    if PARAM_KEYS.contains(&key) {
        return Ok(vec!["params".into(), key.into()]);
    }
    if doc["settings"].get(key).is_some() {
        return Ok(vec!["settings".into(), key.into()]);
    }
    if TOP_KEYS.contains(&key) {
        return Ok(vec![key.into()]);
    }
    Err(LabError::Config(format!("{key}: unknown override key")))
}

/// Applies `key=value` overrides (a leading `--` is optional). Values are
/// read as JSON when they parse and as strings otherwise; a scalar given for
/// a list-valued key becomes a one-element list.
pub fn apply_overrides(cfg: &ExperimentConfig, overrides: &[String]) -> Result<ExperimentConfig, LabError> {
    let mut doc = serde_json::to_value(cfg).expect("config serializes");
    for item in overrides {
        let item = item.strip_prefix("--").unwrap_or(item);
        let (key, raw) =
            item.split_once('=').ok_or_else(|| LabError::Config(format!("{item}: override must be key=value")))?;
        let path = resolve(key, &doc)?;
        let mut value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut slot = &mut doc;
        for part in &path {
            slot = slot
                .as_object_mut()
                .ok_or_else(|| LabError::Config(format!("{key}: {part} is not inside an object")))?
                .entry(part.clone())
                .or_insert(Value::Null);
        }
        if slot.is_array() && !value.is_array() && !path.ends_with(&["tau_window".into()]) && !path.ends_with(&["p_window".into()]) {
            value = Value::Array(vec![value]);
        }
        *slot = value;
    }
    ExperimentConfig::from_json(&doc.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig::from_json(r#"{"experiment": "blowdown", "params": {"sigma": 1.0}}"#).unwrap()
    }

    #[test]
    fn short_and_dotted_keys() {
        let cfg = apply_overrides(&base(), &["--alpha=1.5".into(), "settings.tol=1e-8".into(), "h=100".into()]).unwrap();
        assert_eq!(cfg.params.alpha, 1.5);
        assert_eq!(cfg.tol(), 1e-8);
        assert_eq!(cfg.settings.h_values, vec![100.0]);
        let cfg = apply_overrides(&base(), &["output_dir=out/x".into(), "p_window=[10,20]".into()]).unwrap();
        assert_eq!(cfg.output_dir, std::path::PathBuf::from("out/x"));
        assert_eq!(cfg.settings.p_window, (10.0, 20.0));
    }

    #[test]
    fn bad_overrides_name_the_field() {
        let err = apply_overrides(&base(), &["bogus=1".into()]).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        let err = apply_overrides(&base(), &["alpha=-1".into()]).unwrap_err().to_string();
        assert!(err.contains("params.alpha"), "{err}");
        let err = apply_overrides(&base(), &["alpha".into()]).unwrap_err().to_string();
        assert!(err.contains("key=value"), "{err}");
    }
}
