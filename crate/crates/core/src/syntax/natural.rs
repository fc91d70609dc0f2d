use super::Formula;

/// Reads a formula as an English claim about verification.
///
/// Negation becomes "it is falsifiable that", the mutation operators read as
/// possibilities, and `claim Ci. φ` reads "it is possible to verify the claim
/// Ci which states that ...". Operands of binary connectives that are
/// themselves binary are parenthesized so the output stays unambiguous.
pub fn render_natural_language(formula: &Formula) -> String {
    let mut out = String::new();
    render(formula, &mut out);
    out
}

fn render(f: &Formula, out: &mut String) {
    match f {
        Formula::Rel(..) => out.push_str(&super::print_formula(f)),
        Formula::Eq(a, b) => {
            out.push_str(&format!("{a} equals {b}"));
        }
        Formula::ClaimAtom(i) => out.push_str(&format!("C{i}")),
        Formula::Not(a) => prefixed("it is falsifiable that ", a, out),
        Formula::WNot(a) => prefixed("it is not verifiable that ", a, out),
        Formula::Det(a) => prefixed("it is determined whether ", a, out),
        Formula::And(a, b) => binary(a, " and ", b, out),
        Formula::Or(a, b) => binary(a, " or ", b, out),
        Formula::Exists(v, a) => prefixed(&format!("there exists an {v} such that "), a, out),
        Formula::Forall(v, a) => prefixed(&format!("for every {v} it holds that "), a, out),
        Formula::InsertElem(v, a) => prefixed(
            &format!("it is possible to insert a new element {v} such that "),
            a,
            out,
        ),
        Formula::DeleteElem(v, a) => prefixed(
            &format!("it is possible to delete the element {v} such that "),
            a,
            out,
        ),
        Formula::InsertTuple(r, vs, a) => prefixed(
            &format!(
                "it is possible to insert a tuple ({}) into {r} such that ",
                vs.join(", ")
            ),
            a,
            out,
        ),
        Formula::DeleteTuple(r, vs, a) => prefixed(
            &format!(
                "it is possible to delete a tuple ({}) from {r} such that ",
                vs.join(", ")
            ),
            a,
            out,
        ),
        Formula::Claim(i, a) => prefixed(
            &format!("it is possible to verify the claim C{i} which states that "),
            a,
            out,
        ),
    }
}

fn prefixed(prefix: &str, body: &Formula, out: &mut String) {
    out.push_str(prefix);
    render(body, out);
}

fn binary(a: &Formula, word: &str, b: &Formula, out: &mut String) {
    operand(a, out);
    out.push_str(word);
    operand(b, out);
}

fn operand(f: &Formula, out: &mut String) {
    if matches!(f, Formula::And(..) | Formula::Or(..)) {
        out.push('(');
        render(f, out);
        out.push(')');
    } else {
        render(f, out);
    }
}
