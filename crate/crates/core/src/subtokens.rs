/// Splits an identifier-like token into lowercase subtokens.
///
/// Boundaries are underscores (and any other non-alphanumeric character,
/// which is removed) plus lowercase-to-uppercase transitions. A token with
/// no surviving characters becomes `["_"]`.
pub fn split_subtokens(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for c in token.chars() {
        if !c.is_alphanumeric() {
            flush(&mut current, &mut out);
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower {
            flush(&mut current, &mut out);
        }
        current.extend(c.to_lowercase().filter(|l| l.is_alphanumeric()));
        prev_lower = c.is_lowercase();
    }
    flush(&mut current, &mut out);
    if out.is_empty() {
        out.push("_".to_owned());
    }
    out
}

fn flush(current: &mut String, out: &mut Vec<String>) {
    if !current.is_empty() {
        out.push(std::mem::take(current));
    }
}
