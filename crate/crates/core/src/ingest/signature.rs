use std::sync::LazyLock;

use regex::Regex;

static KEYWORDS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(attorney|esq|esquire|general counsel|legal department|lawyer)\b")
        .expect("valid keyword pattern")
});

/// Number of trailing non-empty lines treated as the signature zone.
const SIGNATURE_ZONE: usize = 15;

/// Keyword check for a legal signature block: true when any legal keyword
/// appears in the last 15 non-empty lines of `body_text`.
///
/// A crude stand-in for real signature detection; off unless requested.
pub fn detect_counsel_heuristic(body_text: &str) -> bool {
    body_text
        .lines()
        .rev()
        .filter(|l| !l.trim().is_empty())
        .take(SIGNATURE_ZONE)
        .any(|l| KEYWORDS.is_match(l))
}
