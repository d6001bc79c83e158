use super::abstraction::{AbstractClause, AbstractTerm};

pub const WALK_SEPARATOR: char = '▷';

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over the UTF-8 bytes of `s`, masked to the low `bits` bits.
pub fn hash_bucket(s: &str, bits: u32) -> u32 {
    let h = s
        .bytes()
        .fold(FNV_OFFSET, |h, b| (h ^ b as u64).wrapping_mul(FNV_PRIME));
    (h & ((1u64 << bits) - 1)) as u32
}

/// Top-down walks of length 1, 2 and 3 from each literal head, with
/// multiplicity.
pub fn vertical_walks(c: &AbstractClause) -> Vec<String> {
    let mut out = Vec::new();
    for lit in &c.literals {
        out.push(lit.head.clone());
        for arg in &lit.args {
            let two = format!("{}{WALK_SEPARATOR}{}", lit.head, arg.token);
            for AbstractTerm { token, .. } in &arg.args {
                out.push(format!("{two}{WALK_SEPARATOR}{token}"));
            }
            out.push(two);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walks(s: &str) -> Vec<String> {
        let mut w = vertical_walks(&s.parse().unwrap());
        w.sort();
        w
    }

    #[test]
    fn walk_examples() {
        assert_eq!(walks("+p(*VAR)"), vec!["+p", "+p▷*VAR"]);
        assert_eq!(walks("+p(f(a))"), vec!["+p", "+p▷f", "+p▷f▷a"]);
        assert!(walks("$false").is_empty());
        assert_eq!(walks("+p(g(a,a))"), vec!["+p", "+p▷g", "+p▷g▷a", "+p▷g▷a"]);
        // nothing below depth three
        assert_eq!(walks("-q(f(g(h)))"), vec!["-q", "-q▷f", "-q▷f▷g"]);
    }

    #[test]
    fn fnv1a_reference_values() {
        // reference values computed with the published FNV-1a 64-bit
        // offset basis and prime, independently of this implementation
        assert_eq!(hash_bucket("+p▷f▷a", 8), 151);
        assert_eq!(hash_bucket("+p▷f▷a", 15), 30615);
        assert_eq!(hash_bucket("+p▷f▷a", 5), 23);
        assert_eq!(hash_bucket("a", 16), (0xaf63_dc4c_8601_ec8cu64 & 0xffff) as u32);
        assert_eq!(hash_bucket("", 8), 0x25);
    }

    #[test]
    fn buckets_are_deterministic_and_masked() {
        for s in ["+p", "-eq▷*VAR", "+r▷*SKO▷b"] {
            for bits in 5..=16 {
                let h = hash_bucket(s, bits);
                assert_eq!(h, hash_bucket(s, bits));
                assert!(h < 1 << bits);
            }
        }
    }
}
