use super::EntityKey;

/// Reduces a raw header address to its canonical [`EntityKey`].
///
/// `Name <addr>` forms yield the lowercased addr-spec. Anything else is
/// treated as a display name: quotes and angle brackets are stripped, runs of
/// whitespace collapse to one space, and the result is lowercased. Returns
/// `None` when nothing remains.
pub fn normalize_address(raw: &str) -> Option<EntityKey> {
    let extracted = angle_addr(raw).and_then(|inner| {
        let c = clean(inner);
        (!c.is_empty()).then_some(c)
    });
    let value = extracted.unwrap_or_else(|| clean(raw));
    (!value.is_empty()).then(|| EntityKey::from_normalized(value))
}

fn angle_addr(raw: &str) -> Option<&str> {
    let open = raw.rfind('<')?;
    let rest = &raw[open + 1..];
    let close = rest.find('>')?;
    Some(&rest[..close])
}

fn clean(s: &str) -> String {
    let stripped: String = s.chars().filter(|c| !matches!(c, '<' | '>')).collect();
    let trimmed = stripped.trim_matches(|c: char| c.is_whitespace() || c == '"' || c == '\'');
    let mut out = String::with_capacity(trimmed.len());
    for word in trimmed.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out.to_lowercase()
}
