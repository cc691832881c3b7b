//! Report layout.
//!
//! A report file is two parts: one header line of JSON carrying the
//! wall-clock time, then the report body as pretty-printed JSON. The body is
//! a pure function of the resolved settings, so two runs with the same config
//! differ only in the header line.

use std::io::Write;

use serde::Serialize;

use crate::config::Settings;

pub const SCHEMA: &str = "ramsey-closure-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Header<'a> {
    pub schema: &'a str,
    pub version: u32,
    pub command: &'a str,
    pub wall_time_ms: u128,
}

#[derive(Serialize)]
pub struct Body<'a, S, I> {
    pub schema: &'a str,
    pub version: u32,
    pub command: &'a str,
    pub config: &'a Settings,
    pub passed: bool,
    pub summary: S,
    pub items: Vec<I>,
}

/// A finished body, ready to be written after the header.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub command: &'static str,
    pub passed: bool,
    pub body: String,
}

impl Rendered {
    pub fn new<S: Serialize, I: Serialize>(
        command: &'static str,
        config: &Settings,
        passed: bool,
        summary: S,
        items: Vec<I>,
    ) -> Self {
        let body = Body {
            schema: SCHEMA,
            version: SCHEMA_VERSION,
            command,
            config,
            passed,
            summary,
            items,
        };
        Rendered {
            command,
            passed,
            body: serde_json::to_string_pretty(&body).expect("report serializes"),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W, wall_time_ms: u128) -> std::io::Result<()> {
        let header = Header {
            schema: SCHEMA,
            version: SCHEMA_VERSION,
            command: self.command,
            wall_time_ms,
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        w.write_all(self.body.as_bytes())?;
        writeln!(w)?;
        w.flush()
    }
}

/// Drops the header line from a written report.
pub fn strip_header(report: &str) -> &str {
    report.split_once('\n').map_or("", |(_, rest)| rest)
}
