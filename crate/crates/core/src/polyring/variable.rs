use std::fmt;

/// A polynomial variable.
///
/// The derived order is the fixed total order used by every monomial order in
/// the crate: roots < elementary symmetric < coefficients < group entries, then
/// by index.
///
/// Coefficients are indexed by *position* in the leading-first listing of a
/// binary form, so `Coeff(0)` is the leading coefficient `a`, `Coeff(1)` is
/// `b`, and so on. For a form of degree `k` the coefficient of `x^i y^(k-i)` is
/// `Coeff(k - i)`; see [`VariableId::coeff_of_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    /// Root `l_i`, 1-based.
    Root(u32),
    /// Elementary symmetric polynomial `e_i`, 1-based.
    Elementary(u32),
    /// Coefficient at a position in the leading-first listing.
    Coeff(u32),
    /// Entry `G_rs` of a 2x2 matrix, with `r, s` in `{1, 2}`.
    Group(u8, u8),
}

impl VariableId {
    /// The coefficient of `x^power y^(degree - power)` in a form of the given degree.
    pub fn coeff_of_power(power: usize, degree: usize) -> Self {
        debug_assert!(power <= degree);
        VariableId::Coeff((degree - power) as u32)
    }

    pub fn is_root(&self) -> bool {
        matches!(self, VariableId::Root(_))
    }

    pub fn is_coeff(&self) -> bool {
        matches!(self, VariableId::Coeff(_))
    }

    pub fn is_group(&self) -> bool {
        matches!(self, VariableId::Group(..))
    }

    /// Parse a variable name as produced by `Display`.
    pub fn parse(name: &str) -> Option<Self> {
        let mut chars = name.chars();
        let head = chars.next()?;
        let rest = chars.as_str();
        if rest.is_empty() {
            return head
                .is_ascii_lowercase()
                .then(|| VariableId::Coeff(head as u32 - 'a' as u32));
        }
        if !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        match head {
            'l' => rest.parse().ok().filter(|&i| i > 0).map(VariableId::Root),
            'e' => rest.parse().ok().filter(|&i| i > 0).map(VariableId::Elementary),
            'c' => rest.parse().ok().map(VariableId::Coeff),
            'G' => {
                let b = rest.as_bytes();
                if b.len() != 2 {
                    return None;
                }
                let (r, s) = (b[0] - b'0', b[1] - b'0');
                ((1..=2).contains(&r) && (1..=2).contains(&s)).then_some(VariableId::Group(r, s))
            }
            _ => None,
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VariableId::Root(i) => write!(f, "l{i}"),
            VariableId::Elementary(i) => write!(f, "e{i}"),
            VariableId::Coeff(p) if p < 26 => write!(f, "{}", (b'a' + p as u8) as char),
            VariableId::Coeff(p) => write!(f, "c{p}"),
            VariableId::Group(r, s) => write!(f, "G{r}{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let vars = [
            VariableId::Root(1),
            VariableId::Root(12),
            VariableId::Elementary(3),
            VariableId::Coeff(0),
            VariableId::Coeff(4),
            VariableId::Coeff(11),
            VariableId::Coeff(30),
            VariableId::Group(2, 1),
        ];
        for v in vars {
            assert_eq!(VariableId::parse(&v.to_string()), Some(v), "{v}");
        }
        assert_eq!(VariableId::Coeff(4).to_string(), "e");
        assert_eq!(VariableId::parse("l0"), None);
        assert_eq!(VariableId::parse("G31"), None);
        assert_eq!(VariableId::parse("x1"), None);
    }

    #[test]
    fn kind_order_is_fixed() {
        assert!(VariableId::Root(9) < VariableId::Elementary(1));
        assert!(VariableId::Elementary(9) < VariableId::Coeff(0));
        assert!(VariableId::Coeff(99) < VariableId::Group(1, 1));
        assert!(VariableId::Coeff(0) < VariableId::Coeff(1));
    }

    #[test]
    fn power_to_position() {
        // a x^3 + b x^2 y + c x y^2 + d y^3
        assert_eq!(VariableId::coeff_of_power(3, 3), VariableId::Coeff(0));
        assert_eq!(VariableId::coeff_of_power(0, 3), VariableId::Coeff(3));
    }
}
