use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    /// Minimal-parenthesis infix text accepted by [`super::parse`].
    Infix,
    /// Whitespace-separated pre-order token stream, one token per node.
    Prefix,
}

pub fn render(f: &Formula, notation: Notation) -> String {
    let mut out = String::new();
    match notation {
        Notation::Infix => infix(f, &mut out),
        Notation::Prefix => prefix(f, &mut out),
    }
    out
}

/// Token for a node in both notations; propositions render as their name.
pub(crate) fn token(f: &Formula) -> &str {
    match f {
        Formula::True => "true",
        Formula::False => "false",
        Formula::Prop(p) => p.name(),
        Formula::Not(_) => "!",
        Formula::And(..) => "&",
        Formula::Or(..) => "|",
        Formula::Next(_) => "X",
        Formula::Until(..) => "U",
        Formula::Eventually(_) => "F",
        Formula::Always(_) => "G",
    }
}

fn prefix(f: &Formula, out: &mut String) {
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(token(f));
    for c in f.children() {
        prefix(c, out);
    }
}

// Binding strength; higher binds tighter.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) => 3,
        Formula::Not(_) | Formula::Next(_) | Formula::Eventually(_) | Formula::Always(_) => 4,
        Formula::True | Formula::False | Formula::Prop(_) => 5,
    }
}

fn wrapped(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        infix(f, out);
        out.push(')');
    } else {
        infix(f, out);
    }
}

fn infix(f: &Formula, out: &mut String) {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => out.push_str(token(f)),
        Formula::Not(a) => {
            out.push('!');
            wrapped(a, level(a) < 4, out);
        }
        Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
            out.push_str(token(f));
            out.push(' ');
            wrapped(a, level(a) < 4, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => {
            // Right-associative: a same-level left operand needs parentheses.
            let own = level(f);
            wrapped(a, level(a) <= own, out);
            out.push(' ');
            out.push_str(token(f));
            out.push(' ');
            wrapped(b, level(b) < own, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    #[test]
    fn prefix_of_avoidance_example() {
        let f = Formula::until(
            Formula::not(Formula::p("r")),
            Formula::and(
                Formula::p("j"),
                Formula::until(Formula::not(Formula::p("p")), Formula::p("k")),
            ),
        );
        assert_eq!(render(&f, Notation::Prefix), "U ! r & j U ! p k");
        assert_eq!(render(&f, Notation::Infix), "!r U (j & !p U k)");
        assert_eq!(parse(&render(&f, Notation::Infix)).unwrap(), f);
    }

    #[test]
    fn leaf() {
        assert_eq!(render(&Formula::p("a"), Notation::Infix), "a");
        assert_eq!(render(&Formula::True, Notation::Prefix), "true");
    }

    #[test]
    fn parentheses_where_needed() {
        for text in [
            "F (R & F G)",
            "(a & b) & c",
            "(a U b) U c",
            "a U b U c",
            "!(a | b)",
            "(a | b) & c",
            "F G",
            "G U a",
            "X X",
            "!!a",
            "F (a U b)",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(render(&f, Notation::Infix), text);
        }
    }
}
