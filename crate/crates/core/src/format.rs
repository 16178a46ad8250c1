//! The `# tricensus points v1` text format.
//!
//! ```text
//! # tricensus points v1
//! 0 0
//! 4 0
//! 1/2 9/20   # rationals are p/q with q > 0
//! ```

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::geom::{Coord, Point};

pub const HEADER: &str = "# tricensus points v1";

fn parse_coord(tok: &str, line: usize) -> Result<Coord> {
    let bad = |msg: String| Error::Parse { line, msg };
    let int = |s: &str| BigInt::from_str(s).map_err(|_| bad(format!("invalid integer `{s}`")));
    match tok.split_once('/') {
        None => Ok(Coord::from_integer(int(tok)?)),
        Some((num, den)) => {
            let (num, den) = (int(num)?, int(den)?);
            if !den.is_positive() {
                return Err(bad(format!("denominator must be positive in `{tok}`")));
            }
            Ok(Coord::new(num, den))
        }
    }
}

/// Parses the v1 point format. Point indices follow line order.
pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim_end() == HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{HEADER}`"),
            })
        }
    }
    let mut points = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected two coordinates, found {}", toks.len()),
            });
        }
        points.push(Point::new(
            parse_coord(toks[0], line)?,
            parse_coord(toks[1], line)?,
        ));
    }
    Ok(points)
}

fn format_coord(c: &Coord) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn format_points(points: &[Point]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format_coord(&p.x));
        out.push(' ');
        out.push_str(&format_coord(&p.y));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_rationals_and_comments() {
        let text =
            "# tricensus points v1\n0 0\n# a comment\n\n-3 4  # trailing\n1/2 -9/20\n6/4 2\n";
        let pts = parse_points(text).unwrap();
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[1], Point::from_ints(-3, 4));
        assert_eq!(pts[2], Point::from_ratios(1, 2, -9, 20));
        // canonical form
        assert_eq!(pts[3], Point::from_ratios(3, 2, 2, 1));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_points("0 0\n1 1\n").is_err());
        assert!(matches!(
            parse_points("# tricensus points v1\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_points("# tricensus points v1\n1/0 2\n").is_err());
        assert!(parse_points("# tricensus points v1\n1/-2 2\n").is_err());
        assert!(parse_points("# tricensus points v1\nx 2\n").is_err());
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(
            raw in prop::collection::vec((-50i64..50, 1i64..9, -50i64..50, 1i64..9), 0..12)
        ) {
            let pts: Vec<Point> = raw.iter().map(|&(a, b, c, d)| Point::from_ratios(a, b, c, d)).collect();
            prop_assert_eq!(parse_points(&format_points(&pts)).unwrap(), pts);
        }
    }
}
