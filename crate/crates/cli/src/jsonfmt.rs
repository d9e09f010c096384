//! Minimal deterministic JSON emission: insertion-ordered keys and fixed
//! 17-significant-digit numbers, so identical inputs serialize to
//! identical bytes.

/// 17 significant digits; round-trips any f64. Negative zero prints as
/// plain zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinities; the analysis never produces them in
        // reported fields, but fall back to null rather than emit garbage.
        "null".to_string()
    }
}

pub fn string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn array<I: IntoIterator<Item = String>>(items: I) -> String {
    let mut out = String::from("[");
    for (k, item) in items.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(&item);
    }
    out.push(']');
    out
}

pub fn vec3(v: &[f64; 3]) -> String {
    array(v.iter().map(|x| num(*x)))
}

pub fn mat3(m: &xtwin_core::Mat3) -> String {
    array(m.0.iter().map(vec3))
}

/// Insertion-ordered JSON object builder.
#[derive(Default)]
pub struct Obj {
    parts: Vec<String>,
}

impl Obj {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn raw(mut self, key: &str, value: String) -> Self {
        self.parts.push(format!("{}:{}", string(key), value));
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        let v = num(value);
        self.raw(key, v)
    }

    pub fn int(self, key: &str, value: usize) -> Self {
        self.raw(key, value.to_string())
    }

    pub fn bool(self, key: &str, value: bool) -> Self {
        self.raw(key, value.to_string())
    }

    pub fn str(self, key: &str, value: &str) -> Self {
        let v = string(value);
        self.raw(key, v)
    }

    pub fn build(self) -> String {
        format!("{{{}}}", self.parts.join(","))
    }
}
