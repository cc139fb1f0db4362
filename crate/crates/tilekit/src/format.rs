/// Shortest decimal text that parses back to the same `f64`.
pub fn number(v: f64) -> String {
    format!("{v:?}")
}

/// File-name-safe form of an entity id: lowercase ASCII alphanumerics and
/// single dashes.
pub fn slug(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for c in id.chars() {
        match c {
            'a'..='z' | '0'..='9' => out.push(c),
            'A'..='Z' => out.push(c.to_ascii_lowercase()),
            '+' => out.push_str("plus"),
            _ => {
                if !out.is_empty() && !out.ends_with('-') {
                    out.push('-');
                }
            }
        }
    }
    while out.ends_with('-') {
        out.pop();
    }
    if out.is_empty() {
        out.push_str("entity");
    }
    out
}
