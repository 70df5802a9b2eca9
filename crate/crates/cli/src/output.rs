use std::fmt::Write as _;
use std::fs;
use std::io::Write;

use serde::Serialize;
use superchsh::game::Tables;
use superchsh::{BasisLabel, SettingPair};

use crate::{Cli, Failure, EXIT_FAILURE};

pub fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// One row per setting and outcome pair.
pub fn tables_csv(tables: &Tables) -> String {
    let mut s = String::from("i,j,alice,bob,probability\n");
    for pair in SettingPair::ALL {
        for m in BasisLabel::ALL {
            for n in BasisLabel::ALL {
                let v = tables[pair.index()][m.index()][n.index()];
                let _ = writeln!(s, "{},{},{},{},{}", pair.i, pair.j, label(m), label(n), v);
            }
        }
    }
    s
}

fn label(l: BasisLabel) -> &'static str {
    match l {
        BasisLabel::Dot => "dot",
        BasisLabel::Zero => "0",
        BasisLabel::One => "1",
    }
}

pub fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))
        }
    }
}
