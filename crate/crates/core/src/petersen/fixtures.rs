//! The frozen JSON fixtures and the code that regenerates them.

use std::path::Path;

use super::constructions::{construct_torus_embedding, gp62_torus_voltage, gp_sphere_voltage, kb_embedding};
use super::{bouquet_torus_action, gp_barbell_voltage};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::format::{embedding_to_json, voltage_embedding_to_json};
use crate::voltage::VoltageEmbedding;

pub const SPHERE_PRIMES: [usize; 3] = [3, 5, 7];
pub const KB_ORDERS: [usize; 3] = [3, 5, 7];

fn barbell_z5() -> Result<VoltageEmbedding> {
    let vg = gp_barbell_voltage(5, 2)?;
    VoltageEmbedding::new(Embedding::default_for(vg.graph().clone()), vg.group().clone(), vg.voltages().to_vec())
}

/// File name and JSON text of every fixture, in a fixed order.
pub fn generate() -> Result<Vec<(String, String)>> {
    let mut out = vec![
        ("torus_bouquet.json".to_string(), voltage_embedding_to_json(&bouquet_torus_action(10)?)),
        ("barbell_z5.json".to_string(), voltage_embedding_to_json(&barbell_z5()?)),
    ];
    for p in SPHERE_PRIMES {
        out.push((format!("sphere_p{p}.json"), voltage_embedding_to_json(&gp_sphere_voltage(p)?)));
    }
    out.push(("torus_gp6_2.json".to_string(), embedding_to_json(&construct_torus_embedding(3)?)));
    out.push(("gp62_torus.json".to_string(), voltage_embedding_to_json(&gp62_torus_voltage()?)));
    for q in KB_ORDERS {
        out.push((format!("kb_q{q}.json"), voltage_embedding_to_json(&kb_embedding(q)?)));
    }
    for (_, text) in out.iter_mut() {
        text.push('\n');
    }
    Ok(out)
}

/// Writes every fixture into `dir`.
pub fn write_all(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (name, text) in generate()? {
        std::fs::write(dir.join(&name), text)?;
        names.push(name);
    }
    Ok(names)
}

/// Names of fixtures in `dir` that differ from a fresh regeneration.
pub fn stale(dir: &Path) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for (name, text) in generate()? {
        match std::fs::read_to_string(dir.join(&name)) {
            Ok(on_disk) if on_disk == text => {}
            Ok(_) => bad.push(name),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => bad.push(name),
            Err(e) => return Err(Error::Io(e)),
        }
    }
    Ok(bad)
}
