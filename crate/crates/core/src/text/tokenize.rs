/// Lowercases, splits on whitespace and strips leading/trailing punctuation
/// from each token. Inner punctuation ("don't", "x-ray") and digits are kept.
pub fn tokenize(line: &str) -> Vec<String> {
    line.split_whitespace()
        .map(|raw| raw.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|tok| !tok.is_empty())
        .map(str::to_lowercase)
        .collect()
}
