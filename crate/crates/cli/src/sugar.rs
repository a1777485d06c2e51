//! Operator-power notation: an uppercase letter stands for right
//! multiplication by the matching lowercase variable, so `xY^3` reads as
//! `x y y y` and `zX2` as `z x2`.

use std::sync::LazyLock;

use regex::{Captures, Regex};

static POWER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"([A-Z])(\d*)(?:\^(\d+))?").expect("valid pattern"));

pub fn expand_powers(text: &str) -> String {
    POWER
        .replace_all(text, |c: &Captures| {
            let var = format!("{}{}", c[1].to_ascii_lowercase(), &c[2]);
            let times = c.get(3).map_or(1, |m| m.as_str().parse::<usize>().unwrap_or(0));
            vec![var; times].iter().map(|v| format!(" {v}")).collect::<String>() + " "
        })
        .into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_expand_to_right_multiplication() {
        assert_eq!(expand_powers("xY^3").split_whitespace().collect::<Vec<_>>(), ["x", "y", "y", "y"]);
        assert_eq!(expand_powers("x1(x2 x3)"), "x1(x2 x3)");
        assert_eq!(expand_powers("zX2").split_whitespace().collect::<Vec<_>>(), ["z", "x2"]);
    }

    #[test]
    fn expanded_powers_parse_left_normed() {
        let e = leibniz_core::parse(&expand_powers("x1Y^2")).unwrap();
        assert_eq!(e, leibniz_core::parse("((x1 y) y)").unwrap());
    }
}
