use num_rational::BigRational;

use super::value::{Exactness, SurnatValue};
use super::SurnatError;
use crate::funexpr::parse_fn_in;

const OMEGA_NAMES: &[&str] = &["w", "ω"];

/// Remove `+ o(...)` / `+ O(...)` tags, returning the rest and the tags.
fn split_tags(s: &str) -> Result<(String, Vec<(bool, String)>), SurnatError> {
    let mut rest = String::new();
    let mut tags = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let prev_ident = i > 0 && (cs[i - 1].is_alphanumeric() || cs[i - 1] == '_');
        if (cs[i] == 'o' || cs[i] == 'O') && !prev_ident && cs.get(i + 1) == Some(&'(') {
            let mut depth = 0;
            let mut j = i + 1;
            loop {
                match cs.get(j) {
                    Some('(') => depth += 1,
                    Some(')') => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    None => return Err(SurnatError::Parse("unbalanced parentheses in remainder".into())),
                    _ => {}
                }
                j += 1;
            }
            tags.push((cs[i] == 'O', cs[i + 2..j].iter().collect()));
            let trimmed = rest.trim_end();
            let trimmed = trimmed.strip_suffix('+').unwrap_or(trimmed);
            rest = trimmed.to_string();
            i = j + 1;
        } else {
            rest.push(cs[i]);
            i += 1;
        }
    }
    Ok((rest, tags))
}

fn value_of(s: &str) -> Result<SurnatValue<BigRational>, SurnatError> {
    let f = parse_fn_in(s, OMEGA_NAMES).map_err(|e| SurnatError::Parse(e.to_string()))?;
    f.extend_series(&SurnatValue::omega()).map_err(|e| SurnatError::Parse(e.to_string()))
}

/// Parse a surnatural written in `w` (or `ω`), e.g. `w/2 - 1`,
/// `2^(2/3)*chi*w^(4/3) + o(w^(4/3))`.
pub fn parse_surnat(text: &str) -> Result<SurnatValue<BigRational>, SurnatError> {
    let (rest, tags) = split_tags(text)?;
    let mut v = if rest.trim().is_empty() { SurnatValue::zero() } else { value_of(&rest)? };
    for (big, t) in tags {
        let k = value_of(&t)?.leading_key().ok_or_else(|| SurnatError::Parse("empty remainder".into()))?;
        let e = if big { Exactness::BigO(k) } else { Exactness::LittleO(k) };
        v = v.with_exactness(e);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let v = parse_surnat(s).unwrap();
        assert_eq!(v.render(false), s);
        assert_eq!(parse_surnat(&v.render(true)).unwrap(), v);
    }

    #[test]
    fn round_trips() {
        rt("w/2 - 1");
        rt("3*w/4");
        rt("w^2");
        rt("2^(1/2)*w^(1/2) - 1");
        rt("log2(w) + 1");
        rt("2^(2/3)*chi*w^(4/3) + o(w^(4/3))");
        rt("w/log(w) + O(w/log(w)^2)");
        rt("0");
    }

    #[test]
    fn accepts_unicode() {
        assert_eq!(parse_surnat("ω/2 - 1").unwrap(), parse_surnat("w/2 - 1").unwrap());
        assert!(parse_surnat("w + o(").is_err());
    }
}
