//! Text grammar for regions.
//!
//! ```text
//! union   := product ('+' product)*
//! product := atom ('x' atom)*
//! atom    := '(' union ')' | 'E(' sizes ')' | 'P(' sizes ')' | 'B<2n>(' q ')' | 'Z<2n>(' q ')'
//! sizes   := q (',' q)*
//! q       := 'inf' | p | p/q | decimal
//! ```
//!
//! `B4(1)` is the ball `E(1,1)` and `Z4(1)` the cylinder `E(1,inf)`.

use crate::error::{Error, Result};
use crate::exact::ExtRat;
use crate::region::{Ellipsoid, Region};

pub fn parse_region(input: &str) -> Result<Region> {
    let mut p = Parser { s: input.as_bytes(), pos: 0 };
    let r = p.union()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in region spec", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn union(&mut self) -> Result<Region> {
        let mut parts = vec![self.product()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            parts.push(self.product()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Region::disjoint_union(parts)
        }
    }

    fn product(&mut self) -> Result<Region> {
        let mut factors = vec![self.atom()?];
        while self.peek() == Some(b'x') {
            self.pos += 1;
            factors.push(self.atom()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Region::product(factors)
        }
    }

    fn atom(&mut self) -> Result<Region> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let r = self.union()?;
                self.expect(b')')?;
                Ok(r)
            }
            Some(b'E') => {
                self.pos += 1;
                Region::ellipsoid(self.sizes()?)
            }
            Some(b'P') => {
                self.pos += 1;
                Region::polydisc(self.sizes()?)
            }
            Some(tag @ (b'B' | b'Z')) => {
                self.pos += 1;
                let dim = self.digits()?;
                if dim == 0 || dim % 2 != 0 {
                    return Err(self.err("dimension must be a positive even number"));
                }
                let mut sizes = self.sizes()?;
                if sizes.len() != 1 {
                    return Err(self.err("balls and cylinders take one size"));
                }
                let r = sizes.pop().unwrap();
                let e = if tag == b'B' {
                    Ellipsoid::ball(dim / 2, r)?
                } else {
                    Ellipsoid::cylinder(dim / 2, r)?
                };
                Ok(Region::Ellipsoid(e))
            }
            _ => Err(self.err("expected a region")),
        }
    }

    fn digits(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected a dimension"))
    }

    fn sizes(&mut self) -> Result<Vec<ExtRat>> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.s.get(self.pos).is_some_and(|c| !matches!(c, b',' | b')')) {
                self.pos += 1;
            }
            let tok = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("bad utf-8"))?;
            out.push(tok.trim().parse()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("unterminated size list")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sugar() {
        assert_eq!(parse_region("B4(1)").unwrap(), parse_region("E(1,1)").unwrap());
        assert_eq!(parse_region("Z4(1/2)").unwrap(), parse_region("E(inf, 1/2)").unwrap());
        let chek = parse_region("B4(4)xE(3,8)").unwrap();
        assert!(matches!(chek, Region::Product(ref f) if f.len() == 2));
        assert_eq!(chek.half_dim(), 4);
        let xu = parse_region("Z4(1/2) + E(1,1)").unwrap();
        assert!(matches!(xu, Region::DisjointUnion(_)));
    }

    #[test]
    fn errors() {
        for bad in ["", "E()", "E(1", "B3(1)", "Q(1)", "E(1)xx", "E(1,-2)", "E(1)+E(1,1)", "B4(1,2)"] {
            assert!(matches!(parse_region(bad), Err(Error::Parse(_) | Error::InvalidRegion(_))), "{bad}");
        }
    }

    fn size() -> impl Strategy<Value = ExtRat> {
        prop_oneof![
            8 => (1u64..50, 1u64..50).prop_map(|(p, q)| ExtRat::ratio(p, q)),
            1 => Just(ExtRat::infinity()),
        ]
    }

    fn leaf(n: usize) -> impl Strategy<Value = Region> {
        let sizes = proptest::collection::vec(size(), n).prop_filter("one finite", |v| v.iter().any(ExtRat::is_finite));
        (any::<bool>(), sizes).prop_map(|(ell, s)| {
            if ell {
                Region::ellipsoid(s).unwrap()
            } else {
                Region::polydisc(s).unwrap()
            }
        })
    }

    fn region() -> impl Strategy<Value = Region> {
        (1usize..3).prop_flat_map(|n| {
            leaf(n).prop_recursive(3, 12, 3, move |inner| {
                prop_oneof![
                    proptest::collection::vec(inner.clone(), 2..4)
                        .prop_map(|fs| Region::product(fs).unwrap()),
                    (inner, 2usize..4).prop_flat_map(|(r, k)| {
                        let n = r.half_dim();
                        proptest::collection::vec(leaf(n), k - 1).prop_map(move |mut rest| {
                            rest.insert(0, r.clone());
                            Region::disjoint_union(rest).unwrap()
                        })
                    }),
                ]
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(r in region()) {
            let printed = r.to_string();
            prop_assert_eq!(parse_region(&printed).unwrap(), r);
        }
    }
}
