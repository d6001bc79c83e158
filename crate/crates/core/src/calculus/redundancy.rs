use crate::logic::subst::match_literal_into;
use crate::logic::{Atom, Literal, Substitution};

/// Syntactic tautology: complementary literals with identical atoms, or a
/// positive equation `t = t`.
pub fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().enumerate().any(|(i, a)| {
        if let (true, Atom::Eq(l, r)) = (a.positive, &a.atom) {
            if l == r {
                return true;
            }
        }
        lits[i + 1..]
            .iter()
            .any(|b| a.positive != b.positive && a.atom.same_modulo_orientation(&b.atom))
    })
}

/// Multiset subsumption: some substitution maps the literals of `general`
/// injectively onto literals of `specific`.
pub fn subsumes(general: &[Literal], specific: &[Literal]) -> bool {
    if general.len() > specific.len() {
        return false;
    }
    // every general literal needs at least one compatible partner
    if !general
        .iter()
        .all(|g| specific.iter().any(|s| compatible(g, s)))
    {
        return false;
    }
    let mut used = vec![false; specific.len()];
    search(general, specific, &mut used, &Substitution::new())
}

fn compatible(g: &Literal, s: &Literal) -> bool {
    g.positive == s.positive && g.head() == s.head() && g.is_equation() == s.is_equation()
}

fn search(general: &[Literal], specific: &[Literal], used: &mut [bool], subst: &Substitution) -> bool {
    let Some((first, rest)) = general.split_first() else {
        return true;
    };
    for (j, target) in specific.iter().enumerate() {
        if used[j] || !compatible(first, target) {
            continue;
        }
        for next in match_literal_into(first, target, subst) {
            used[j] = true;
            if search(rest, specific, used, &next) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
