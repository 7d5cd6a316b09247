//! Material files.
//!
//! A material is a TOML document whose top-level keys are the
//! [`MaterialParams`] field names, plus an optional `[units]` table naming the
//! unit of each numeric field. Values are converted to SI here and nowhere
//! else.
//!
//! ```toml
//! name = "gold"
//! omega_p = 1.37e16
//! v_F = 1.4e8
//! T_D = 165.0
//! rho_ref = 2.06
//!
//! [units]
//! v_F = "cm/s"
//! rho_ref = "uOhm*cm"
//! ```
//!
//! | field | default | accepted units (first is SI) |
//! |-------|---------|------------------------------|
//! | `omega_p`, `omega_tau_ref`, `omega_tau_0` | required / - / 0 | `rad/s`, `eV` |
//! | `C_e` | 0 | `rad/s/K^2`, `eV/K^2` |
//! | `C_ph` | 0 | `rad/s/K^5`, `eV/K^5` |
//! | `v_F` | required | `m/s`, `cm/s`, `km/s` |
//! | `beta` | 1 | dimensionless |
//! | `T0` | 273.15 | `K`, `degC` |
//! | `T_D` | required | `K`, `degC` |
//! | `rho_ref` | - | `Ohm*m`, `Ohm*cm`, `uOhm*cm`, `nOhm*m` |
//!
//! One of `omega_tau_ref` or `rho_ref` is required.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::constants::{E_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::materials::{omega_tau_from_resistivity, MaterialParams};

/// Environment variable naming the directory searched for `<name>.toml`.
pub const MATERIAL_DIR_ENV: &str = "CASIMIR_MATERIAL_DIR";

const FIELDS: [&str; 11] = [
    "name",
    "omega_p",
    "omega_tau_ref",
    "T0",
    "omega_tau_0",
    "C_e",
    "C_ph",
    "v_F",
    "beta",
    "T_D",
    "rho_ref",
];

#[derive(Clone, Copy)]
enum Quantity {
    Frequency,
    CoeffT2,
    CoeffT5,
    Velocity,
    Temperature,
    Resistivity,
    Dimensionless,
}

fn quantity(field: &str) -> Quantity {
    match field {
        "omega_p" | "omega_tau_ref" | "omega_tau_0" => Quantity::Frequency,
        "C_e" => Quantity::CoeffT2,
        "C_ph" => Quantity::CoeffT5,
        "v_F" => Quantity::Velocity,
        "T0" | "T_D" => Quantity::Temperature,
        "rho_ref" => Quantity::Resistivity,
        _ => Quantity::Dimensionless,
    }
}

fn to_si(field: &str, value: f64, unit: Option<&str>) -> Result<f64> {
    let ev = E_CHARGE / HBAR;
    let unknown = || Error::UnknownUnit {
        field: field.to_string(),
        unit: unit.unwrap_or("").to_string(),
    };
    let Some(unit) = unit.map(str::trim) else {
        return Ok(value);
    };
    let v = match (quantity(field), unit) {
        (Quantity::Frequency, "rad/s") => value,
        (Quantity::Frequency, "eV") => value * ev,
        (Quantity::CoeffT2, "rad/s/K^2") | (Quantity::CoeffT5, "rad/s/K^5") => value,
        (Quantity::CoeffT2, "eV/K^2") | (Quantity::CoeffT5, "eV/K^5") => value * ev,
        (Quantity::Velocity, "m/s") => value,
        (Quantity::Velocity, "cm/s") => value * 1e-2,
        (Quantity::Velocity, "km/s") => value * 1e3,
        (Quantity::Temperature, "K") => value,
        (Quantity::Temperature, "degC") => value + 273.15,
        (Quantity::Resistivity, "Ohm*m") => value,
        (Quantity::Resistivity, "Ohm*cm") => value * 1e-2,
        (Quantity::Resistivity, "uOhm*cm") => value * 1e-8,
        (Quantity::Resistivity, "nOhm*m") => value * 1e-9,
        (Quantity::Dimensionless, "" | "1") => value,
        _ => return Err(unknown()),
    };
    Ok(v)
}

/// Parse a material document. Field-level problems name the offending field.
pub fn parse_material(text: &str) -> Result<MaterialParams> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;

    let mut units: BTreeMap<String, String> = BTreeMap::new();
    if let Some(u) = table.get("units") {
        let u = u
            .as_table()
            .ok_or_else(|| Error::Config("`units` must be a table".into()))?;
        for (k, v) in u {
            if !FIELDS.contains(&k.as_str()) || k == "name" {
                return Err(Error::Config(format!("unit given for unknown field `{k}`")));
            }
            let s = v
                .as_str()
                .ok_or_else(|| Error::Config(format!("unit for `{k}` must be a string")))?;
            units.insert(k.clone(), s.to_string());
        }
    }

    for key in table.keys() {
        if key != "units" && !FIELDS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown field `{key}`")));
        }
    }

    let number = |field: &'static str| -> Result<Option<f64>> {
        match table.get(field) {
            None => Ok(None),
            Some(v) => {
                let raw = v
                    .as_float()
                    .or_else(|| v.as_integer().map(|i| i as f64))
                    .ok_or_else(|| Error::invalid(field, "must be a number"))?;
                to_si(field, raw, units.get(field).map(String::as_str)).map(Some)
            }
        }
    };
    let required = |field: &'static str| -> Result<f64> {
        number(field)?.ok_or_else(|| Error::MissingField(field.to_string()))
    };

    let name = match table.get("name") {
        Some(v) => v
            .as_str()
            .ok_or_else(|| Error::invalid("name", "must be a string"))?
            .to_string(),
        None => "unnamed".to_string(),
    };
    let omega_p = required("omega_p")?;
    let v_f = required("v_F")?;
    let t_debye = required("T_D")?;
    let rho_ref = number("rho_ref")?;
    let omega_tau_ref = match (number("omega_tau_ref")?, rho_ref) {
        (Some(w), _) => w,
        (None, Some(rho)) => omega_tau_from_resistivity(rho, omega_p)?,
        (None, None) => return Err(Error::MissingField("omega_tau_ref or rho_ref".into())),
    };

    let m = MaterialParams {
        name,
        omega_p,
        omega_tau_ref,
        t0: number("T0")?.unwrap_or(273.15),
        omega_tau_0: number("omega_tau_0")?.unwrap_or(0.0),
        c_e: number("C_e")?.unwrap_or(0.0),
        c_ph: number("C_ph")?.unwrap_or(0.0),
        v_f,
        beta: number("beta")?.unwrap_or(1.0),
        t_debye,
        rho_ref,
    };
    m.validate()?;
    Ok(m)
}

pub fn load_material(path: &Path) -> Result<MaterialParams> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_material(&text)
}

/// Resolve a material argument: an existing file path, `<name>.toml` inside
/// `$CASIMIR_MATERIAL_DIR`, or the bundled `gold` preset.
pub fn resolve_material(spec: &str) -> Result<MaterialParams> {
    let direct = PathBuf::from(spec);
    if direct.is_file() {
        return load_material(&direct);
    }
    if let Ok(dir) = std::env::var(MATERIAL_DIR_ENV) {
        let candidate = Path::new(&dir).join(format!("{spec}.toml"));
        if candidate.is_file() {
            return load_material(&candidate);
        }
    }
    if spec == "gold" {
        return Ok(MaterialParams::gold());
    }
    Err(Error::Config(format!("material `{spec}` not found")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gold_preset_converts_units() {
        let m = MaterialParams::gold();
        assert_eq!(m.name, "gold");
        assert_relative_eq!(m.v_f, 1.4e6);
        assert_relative_eq!(m.v(), 1.5e6, max_relative = 1e-15);
        assert_relative_eq!(m.rho_ref.unwrap(), 2.06e-8);
        assert_relative_eq!(m.omega_tau_ref, 3.4234e13, max_relative = 1e-4);
        assert_eq!(m.t0, 273.15);
    }

    #[test]
    fn missing_plasma_frequency_is_named() {
        let err = parse_material("v_F = 1e6\nT_D = 100\nomega_tau_ref = 1e13\n").unwrap_err();
        assert_eq!(err, Error::MissingField("omega_p".into()));
        assert!(err.to_string().contains("omega_p"));
    }

    #[test]
    fn rho_and_omega_tau_must_agree() {
        let doc = "omega_p = 1.37e16\nv_F = 1.4e6\nT_D = 165\nrho_ref = 2.06e-8\nomega_tau_ref = 5e13\n";
        let err = parse_material(doc).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "omega_tau_ref", .. }));

        let ok = "omega_p = 1.37e16\nv_F = 1.4e6\nT_D = 165\nrho_ref = 2.06e-8\nomega_tau_ref = 3.43e13\n";
        assert!(parse_material(ok).is_ok());
    }

    #[test]
    fn unknown_units_and_fields_rejected() {
        let doc = "omega_p = 1\nv_F = 1\nT_D = 1\nomega_tau_ref = 1\n[units]\nv_F = \"furlong/fortnight\"\n";
        assert!(matches!(parse_material(doc), Err(Error::UnknownUnit { .. })));
        let doc = "omega_p = 1\nv_F = 1\nT_D = 1\nomega_tau_ref = 1\nomega_q = 2\n";
        assert!(matches!(parse_material(doc), Err(Error::Config(_))));
    }

    #[test]
    fn ev_and_celsius() {
        let doc = "omega_p = 9.0\nv_F = 1.4e6\nT_D = -108.15\nomega_tau_ref = 0.035\nT0 = 0\n\
                   [units]\nomega_p = \"eV\"\nomega_tau_ref = \"eV\"\nT_D = \"degC\"\nT0 = \"degC\"\n";
        let m = parse_material(doc).unwrap();
        assert_relative_eq!(m.omega_p, 9.0 * E_CHARGE / HBAR, max_relative = 1e-15);
        assert_relative_eq!(m.t_debye, 165.0, max_relative = 1e-12);
        assert_relative_eq!(m.t0, 273.15);
    }
}
