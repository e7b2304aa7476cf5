//! Function spec strings.
//!
//! ```text
//! spec   := name (":" field)*
//! field  := key "=" number | "odd" | "even"
//! ```
//!
//! | name       | role      | fields                                 |
//! |------------|-----------|----------------------------------------|
//! | `identity` | monotone  | `c=` offset                            |
//! | `brick`    | monotone  | `s=` (≥ 0), `c=`                       |
//! | `power`    | any       | `p=` in (0,1] monotone, (1,2] convex; `q=` plain |
//! | `log1p`    | monotone  | `c=`                                   |
//! | `bricks`   | monotone  | body `w@s+w@s+…`, `c=`                 |
//! | `const`    | monotone  | `c=`                                   |
//! | `linear`, `square`, `sqfrac` | convex |                          |
//! | `min1`, `abs`, `exp` | plain | `odd` / `even`                     |
//! | `step`     | plain     | `at=` (> 0)                            |
//!
//! `odd`/`even` apply to plain functions only.

use super::catalog::{ConvexFn, MonotoneFn, Parity, PlainFn, PlainKind};
use super::CatalogFn;
use crate::error::{Error, Result};

struct Parsed<'a> {
    name: &'a str,
    body: Option<&'a str>,
    fields: Vec<(&'a str, f64)>,
    parity: Parity,
}

fn split(spec: &str) -> Result<Parsed<'_>> {
    let spec = spec.trim();
    let mut parts = spec.split(':');
    let name = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| Error::Parse("empty function spec".into()))?;
    let mut parsed = Parsed {
        name,
        body: None,
        fields: Vec::new(),
        parity: Parity::None,
    };
    for part in parts {
        match part {
            "odd" | "even" if parsed.parity != Parity::None => {
                return Err(Error::Parse(format!("{spec}: parity given twice")))
            }
            "odd" => parsed.parity = Parity::Odd,
            "even" => parsed.parity = Parity::Even,
            _ => match part.split_once('=') {
                Some((k, v)) => {
                    let x: f64 = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("{spec}: bad number {v:?} for {k}")))?;
                    parsed.fields.push((k, x));
                }
                None if name == "bricks" && parsed.body.is_none() => parsed.body = Some(part),
                None => return Err(Error::Parse(format!("{spec}: unexpected field {part:?}"))),
            },
        }
    }
    Ok(parsed)
}

impl Parsed<'_> {
    fn take(&mut self, key: &str) -> Option<f64> {
        let pos = self.fields.iter().position(|(k, _)| *k == key)?;
        Some(self.fields.remove(pos).1)
    }

    fn finish(&self, spec: &str) -> Result<()> {
        match self.fields.first() {
            Some((k, _)) => Err(Error::Parse(format!("{spec}: unknown field {k:?}"))),
            None => Ok(()),
        }
    }
}

/// Parses any catalogue entry; `power` is routed by its parameter name and range.
pub fn parse_function(spec: &str) -> Result<CatalogFn> {
    let mut p = split(spec)?;
    let f = match p.name {
        "identity" | "brick" | "log1p" | "bricks" | "const" => CatalogFn::Monotone(monotone_from(&mut p, spec)?),
        "linear" | "square" | "sqfrac" => CatalogFn::Convex(convex_from(&mut p, spec)?),
        "min1" | "step" | "abs" | "exp" => CatalogFn::Plain(plain_from(&mut p, spec)?),
        "power" if p.fields.iter().any(|(k, _)| *k == "q") || p.parity != Parity::None => {
            CatalogFn::Plain(plain_from(&mut p, spec)?)
        }
        "power" => {
            let exponent = p
                .fields
                .iter()
                .find(|(k, _)| *k == "p")
                .map(|f| f.1)
                .ok_or_else(|| Error::Parse(format!("{spec}: power needs p= or q=")))?;
            if exponent > 1.0 {
                CatalogFn::Convex(convex_from(&mut p, spec)?)
            } else {
                CatalogFn::Monotone(monotone_from(&mut p, spec)?)
            }
        }
        other => return Err(Error::Parse(format!("unknown function {other:?}"))),
    };
    p.finish(spec)?;
    Ok(f)
}

pub fn parse_monotone(spec: &str) -> Result<MonotoneFn> {
    let mut p = split(spec)?;
    let f = monotone_from(&mut p, spec)?;
    p.finish(spec)?;
    Ok(f)
}

pub fn parse_convex(spec: &str) -> Result<ConvexFn> {
    let mut p = split(spec)?;
    let f = convex_from(&mut p, spec)?;
    p.finish(spec)?;
    Ok(f)
}

pub fn parse_plain(spec: &str) -> Result<PlainFn> {
    let mut p = split(spec)?;
    let f = plain_from(&mut p, spec)?;
    p.finish(spec)?;
    Ok(f)
}

fn monotone_from(p: &mut Parsed<'_>, spec: &str) -> Result<MonotoneFn> {
    if p.parity != Parity::None {
        return Err(Error::Parse(format!("{spec}: parity applies to plain functions only")));
    }
    let f = match p.name {
        "identity" => MonotoneFn::identity(),
        "brick" => MonotoneFn::brick(p.take("s").ok_or_else(|| Error::Parse(format!("{spec}: brick needs s=")))?)?,
        "power" => MonotoneFn::power(p.take("p").ok_or_else(|| Error::Parse(format!("{spec}: power needs p=")))?)?,
        "log1p" => MonotoneFn::log1p(),
        "const" => MonotoneFn::constant(0.0)?,
        "bricks" => {
            let body = p
                .body
                .ok_or_else(|| Error::Parse(format!("{spec}: bricks needs w@s+w@s terms")))?;
            let terms = body
                .split('+')
                .map(|term| {
                    let (w, s) = term
                        .split_once('@')
                        .ok_or_else(|| Error::Parse(format!("{spec}: term {term:?} is not w@s")))?;
                    let w: f64 = w.trim().parse().map_err(|_| Error::Parse(format!("{spec}: weight {w:?}")))?;
                    let s: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("{spec}: node {s:?}")))?;
                    Ok((w, s))
                })
                .collect::<Result<Vec<_>>>()?;
            MonotoneFn::bricks(terms)?
        }
        other => return Err(Error::Parse(format!("{other:?} is not operator monotone"))),
    };
    match p.take("c") {
        Some(c) => f.with_offset(c),
        None => Ok(f),
    }
}

fn convex_from(p: &mut Parsed<'_>, spec: &str) -> Result<ConvexFn> {
    if p.parity != Parity::None {
        return Err(Error::Parse(format!("{spec}: parity applies to plain functions only")));
    }
    match p.name {
        "linear" => Ok(ConvexFn::Linear),
        "square" => Ok(ConvexFn::Square),
        "sqfrac" => Ok(ConvexFn::SquareOverOnePlus),
        "power" => ConvexFn::power(p.take("p").ok_or_else(|| Error::Parse(format!("{spec}: power needs p=")))?),
        other => Err(Error::Parse(format!("{other:?} is not in the convex catalogue"))),
    }
}

fn plain_from(p: &mut Parsed<'_>, spec: &str) -> Result<PlainFn> {
    let kind = match p.name {
        "min1" => PlainKind::Min1,
        "abs" => PlainKind::Abs,
        "exp" => PlainKind::Exp,
        "identity" => PlainKind::Power { q: 1.0 },
        "step" => PlainKind::Step {
            at: p.take("at").ok_or_else(|| Error::Parse(format!("{spec}: step needs at=")))?,
        },
        "power" => PlainKind::Power {
            q: p.take("q")
                .or_else(|| p.take("p"))
                .ok_or_else(|| Error::Parse(format!("{spec}: power needs q=")))?,
        },
        other => return Err(Error::Parse(format!("{other:?} is not in the plain catalogue"))),
    };
    let mut f = PlainFn::new(kind)?;
    f.parity = p.parity;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_from_the_grammar() {
        assert_eq!(parse_function("brick:s=2").unwrap(), CatalogFn::Monotone(MonotoneFn::brick(2.0).unwrap()));
        assert_eq!(parse_function("power:p=0.5").unwrap(), CatalogFn::Monotone(MonotoneFn::power(0.5).unwrap()));
        assert_eq!(parse_function("power:p=1.5").unwrap(), CatalogFn::Convex(ConvexFn::Power { p: 1.5 }));
        assert_eq!(parse_function("log1p").unwrap(), CatalogFn::Monotone(MonotoneFn::log1p()));
        assert_eq!(parse_function("min1").unwrap(), CatalogFn::Plain(PlainFn::min1()));
        assert_eq!(
            parse_function("power:q=3:odd").unwrap(),
            CatalogFn::Plain(PlainFn::power(3.0).unwrap().odd())
        );
        assert_eq!(
            parse_monotone("bricks:0.5@0.2+2@5:c=0.1").unwrap(),
            MonotoneFn::bricks(vec![(0.5, 0.2), (2.0, 5.0)]).unwrap().with_offset(0.1).unwrap()
        );
    }

    #[test]
    fn display_roundtrips() {
        for f in MonotoneFn::catalogue() {
            assert_eq!(parse_monotone(&f.to_string()).unwrap(), f);
        }
        for f in ConvexFn::catalogue() {
            assert_eq!(parse_convex(&f.to_string()).unwrap(), f);
        }
        for f in PlainFn::catalogue().into_iter().chain(PlainFn::parity_catalogue()) {
            assert_eq!(parse_plain(&f.to_string()).unwrap(), f);
        }
        let c = MonotoneFn::constant(1.0).unwrap();
        assert_eq!(parse_monotone(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn rejections() {
        assert!(parse_function("").is_err());
        assert!(parse_function("sin").is_err());
        assert!(parse_function("brick").is_err());
        assert!(parse_function("brick:s=-1").is_err());
        assert!(parse_function("brick:s=1:odd").is_err());
        assert!(parse_function("power:p=3").is_err());
        assert!(parse_function("brick:s=1:z=2").is_err());
        assert!(parse_monotone("min1").is_err());
        assert!(parse_plain("step:at=0").is_err());
    }
}
