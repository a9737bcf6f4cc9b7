//! `--key value`, `--key=value` and `key=value` settings that mirror the
//! config file's keys.

use crate::Failure;

pub fn parse(tokens: &[String]) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        i += 1;
        let (key, inline) = match tok.strip_prefix("--") {
            Some(rest) => match rest.split_once('=') {
                Some((k, v)) => (k.to_string(), Some(v.to_string())),
                None => (rest.to_string(), None),
            },
            None => match tok.split_once('=') {
                Some((k, v)) => (k.to_string(), Some(v.to_string())),
                None => {
                    return Err(Failure::Usage(format!(
                        "unexpected argument `{tok}`; settings look like --key value"
                    )))
                }
            },
        };
        if key.is_empty() {
            return Err(Failure::Usage(format!("empty setting name in `{tok}`")));
        }
        let value = match inline {
            Some(v) => v,
            // a bare flag is a boolean switch
            None if i >= tokens.len() || tokens[i].starts_with("--") => "true".to_string(),
            None => {
                i += 1;
                tokens[i - 1].clone()
            }
        };
        out.push((key, value));
    }
    Ok(out)
}

/// Removes and returns the last value given for `key`.
pub fn take(pairs: &mut Vec<(String, String)>, key: &str) -> Option<String> {
    let mut found = None;
    pairs.retain(|(k, v)| {
        if k == key {
            found = Some(v.clone());
            false
        } else {
            true
        }
    });
    found
}
