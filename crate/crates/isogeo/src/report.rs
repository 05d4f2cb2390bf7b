//! Check results and deterministic report output. JSON is rendered by hand
//! so numeric formatting is byte-stable across runs and platforms: floats
//! always print as {:.16e}, exact checks print the literal "exact".

use std::fmt::Write as _;

/// Residual of one check: exact integer/rational checks carry no float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResidualValue {
    Exact,
    Val(f64),
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub instance: String,
    pub max_residual: ResidualValue,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn exact(name: &str, instance: &str, ok: bool) -> Self {
        CheckResult {
            name: name.into(),
            instance: instance.into(),
            max_residual: ResidualValue::Exact,
            tolerance: 0.0,
            pass: ok,
            witness: None,
        }
    }

    pub fn numeric(name: &str, instance: &str, residual: f64, tol: f64) -> Self {
        CheckResult {
            name: name.into(),
            instance: instance.into(),
            max_residual: ResidualValue::Val(residual),
            tolerance: tol,
            pass: residual.is_finite() && residual <= tol,
            witness: None,
        }
    }

    pub fn failed(name: &str, instance: &str, why: &str) -> Self {
        CheckResult {
            name: name.into(),
            instance: instance.into(),
            max_residual: ResidualValue::Val(f64::INFINITY),
            tolerance: 0.0,
            pass: false,
            witness: Some(why.into()),
        }
    }

    pub fn with_witness(mut self, w: String) -> Self {
        self.witness = Some(w);
        self
    }

    /// Force the pass flag off (for checks with side conditions).
    pub fn and_require(mut self, extra: bool) -> Self {
        self.pass = self.pass && extra;
        self
    }

    pub fn residual_f64(&self) -> f64 {
        match self.max_residual {
            ResidualValue::Exact => 0.0,
            ResidualValue::Val(v) => v,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub timestamp: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: Vec<CheckResult>) {
        self.checks.extend(cs);
    }

    /// Canonical order: by name, then instance. Applied before output.
    pub fn sort(&mut self) {
        self.checks
            .sort_by(|a, b| (&a.name, &a.instance).cmp(&(&b.name, &b.instance)));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn fail_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"version\": {},", json_str(&self.version));
        let _ = writeln!(out, "  \"seed\": {},", self.seed);
        let _ = writeln!(out, "  \"timestamp\": {},", json_str(&self.timestamp));
        out.push_str("  \"checks\": [\n");
        for (i, c) in self.checks.iter().enumerate() {
            out.push_str("    {");
            let _ = write!(out, "\"name\": {}, ", json_str(&c.name));
            let _ = write!(out, "\"instance\": {}, ", json_str(&c.instance));
            let _ = write!(out, "\"max_residual\": {}, ", residual_json(&c.max_residual));
            let _ = write!(out, "\"tolerance\": {}, ", float_json(c.tolerance));
            let _ = write!(out, "\"pass\": {}", c.pass);
            if let Some(w) = &c.witness {
                let _ = write!(out, ", \"witness\": {}", json_str(w));
            }
            out.push('}');
            if i + 1 < self.checks.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,instance,max_residual,tolerance,pass\n");
        for c in &self.checks {
            let residual = match c.max_residual {
                ResidualValue::Exact => "exact".to_string(),
                ResidualValue::Val(v) => format!("{v:.16e}"),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&c.name),
                csv_field(&c.instance),
                residual,
                format_args!("{:.16e}", c.tolerance),
                c.pass
            );
        }
        out
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn float_json(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // JSON has no infinity; encode as a string marker
        format!("{}", json_str(&v.to_string()))
    }
}

fn residual_json(r: &ResidualValue) -> String {
    match r {
        ResidualValue::Exact => "\"exact\"".to_string(),
        ResidualValue::Val(v) => float_json(*v),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Compare two JSON reports for byte equality ignoring the timestamp line.
pub fn golden_equal(a: &str, b: &str) -> bool {
    strip_timestamp(a) == strip_timestamp(b)
}

fn strip_timestamp(s: &str) -> String {
    s.lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}
