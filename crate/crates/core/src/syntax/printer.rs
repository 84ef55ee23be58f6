use std::fmt::{self, Write};

use super::{Connective, Formula};

const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) => PREC_ATOM,
        Formula::Not(_) | Formula::Modal(..) | Formula::Update(..) => PREC_UNARY,
        Formula::Binary(op, ..) => match op {
            Connective::Iff => PREC_IFF,
            Connective::Implies => PREC_IMP,
            Connective::Or => PREC_OR,
            Connective::And => PREC_AND,
        },
    }
}

pub(super) fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_at(f, 0, out)
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(f) < min {
        out.write_char('(')?;
        write_bare(f, out)?;
        out.write_char(')')
    } else {
        write_bare(f, out)
    }
}

fn write_bare(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Not(g) => {
            out.write_char('~')?;
            write_at(g, PREC_UNARY, out)
        }
        Formula::Modal(m, i, g) => {
            write!(out, "{}[{i}]", m.letter())?;
            write_operand(g, out)
        }
        Formula::Update(u, i, q, g) => {
            write!(out, "{}[{i}]{{", u.sign())?;
            for (k, a) in q.iter().enumerate() {
                if k > 0 {
                    out.write_char(',')?;
                }
                write!(out, "{a}")?;
            }
            out.write_char('}')?;
            write_operand(g, out)
        }
        Formula::Binary(op, l, r) => {
            let p = precedence(f);
            // `->` groups to the right, the others to the left.
            let (lmin, rmin) = match op {
                Connective::Implies => (p + 1, p),
                _ => (p, p + 1),
            };
            write_at(l, lmin, out)?;
            write!(out, " {} ", op.symbol())?;
            write_at(r, rmin, out)
        }
    }
}

fn write_operand(g: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(g) < PREC_UNARY {
        write_at(g, PREC_UNARY, out)
    } else {
        out.write_char(' ')?;
        write_bare(g, out)
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse, Agent, Formula, Modality};

    #[test]
    fn canonical_text() {
        let a = Agent::new("a").unwrap();
        let b = Agent::new("b").unwrap();
        assert_eq!(
            Formula::modal(Modality::Explicit, &a, Formula::atom("p4")).to_string(),
            "E[a] p4"
        );
        assert_eq!(
            Formula::implies(
                Formula::and(Formula::atom("p"), Formula::atom("q")),
                Formula::atom("r")
            )
            .to_string(),
            "p & q -> r"
        );
        assert_eq!(
            Formula::not(Formula::modal(Modality::Aware, &b, Formula::atom("p3"))).to_string(),
            "~A[b] p3"
        );
    }

    #[test]
    fn redundant_parentheses_dropped() {
        for (input, printed) in [
            ("I[b]((p2 & p3 & f3) -> p4)", "I[b](p2 & p3 & f3 -> p4)"),
            ("(p -> q) -> r", "(p -> q) -> r"),
            ("p -> (q -> r)", "p -> q -> r"),
            ("p <-> (q <-> r)", "p <-> (q <-> r)"),
            ("~(p | q)", "~(p | q)"),
            ("~~p", "~~p"),
            ("+[i]{q,p} E[i] -[i]{p}(p & q)", "+[i]{p,q} E[i] -[i]{p}(p & q)"),
            ("(p & q) & r", "p & q & r"),
            ("p & (q & r)", "p & (q & r)"),
        ] {
            assert_eq!(parse(input).unwrap().to_string(), printed, "{input}");
        }
    }
}
