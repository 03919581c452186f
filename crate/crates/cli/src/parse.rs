//! Token syntax for manifolds, classes, insertions and loci.
//!
//! Classes and divisors are whitespace-free signed sums of basis letters,
//! e.g. `3f-1e`, `2l`, `-e`, `h-E`. A missing coefficient means 1.

use anyhow::{anyhow, bail, Context, Result};
use gw_core::lattice::{BlowupLocus, SurfaceShape};
use gw_core::{CurveClass, DivisorClass, Insertion, Manifold, ManifoldKind};

/// `P<n>`, `BlP<n>`, or `M<n>` for a manifold known only through one curve
/// generator `a` with `C_1(a) = ambient_c1`.
pub fn manifold(token: &str, ambient_c1: Option<i64>) -> Result<Manifold> {
    let dim = |rest: &str| -> Result<u32> {
        rest.parse::<u32>()
            .map_err(|_| anyhow!("bad manifold `{token}`: expected a dimension after the prefix"))
    };
    let m = if let Some(rest) = token.strip_prefix("BlP") {
        Manifold::blowup_point(dim(rest)?)
    } else if let Some(rest) = token.strip_prefix('P') {
        Manifold::proj_space(dim(rest)?)
    } else if let Some(rest) = token.strip_prefix('M') {
        let c1 = ambient_c1.ok_or_else(|| anyhow!("manifold `{token}` needs --ambient-c1"))?;
        Manifold::try_from(ManifoldKind::Opaque {
            n: dim(rest)?,
            name: token.to_string(),
            curve_basis: vec!["a".into()],
            c1: vec![c1],
        })
    } else {
        bail!("unknown manifold `{token}` (expected P<n>, BlP<n> or M<n>)");
    };
    m.with_context(|| format!("manifold `{token}`"))
}

/// Parses `[+-]?<digits>?<name>` terms against `basis`.
fn combination(token: &str, basis: &[String], what: &str) -> Result<Vec<i64>> {
    let mut out = vec![0; basis.len()];
    if token == "0" {
        return Ok(out);
    }
    let bytes = token.as_bytes();
    let mut i = 0;
    if token.is_empty() {
        bail!("empty {what}");
    }
    while i < bytes.len() {
        let start = i;
        let mut sign = 1;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let digits = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if i == digits {
            1
        } else {
            token[digits..i]
                .parse()
                .with_context(|| format!("coefficient in `{}`", &token[start..i]))?
        };
        let name_start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let name = &token[name_start..i];
        let term = &token[start..i];
        let idx = basis.iter().position(|b| b == name).ok_or_else(|| {
            anyhow!(
                "bad {what} term `{term}` in `{token}`: basis is {}",
                basis.join(", ")
            )
        })?;
        out[idx] += sign * coeff;
    }
    Ok(out)
}

pub fn class(token: &str, m: &Manifold) -> Result<CurveClass> {
    Ok(CurveClass(combination(token, m.curve_basis(), "class")?))
}

pub fn divisor(token: &str, m: &Manifold) -> Result<DivisorClass> {
    Ok(DivisorClass(combination(token, m.divisor_basis(), "divisor")?))
}

/// Insertion tokens: `1`, `pt`, `PD(E)`, `H^k`, a divisor such as `h` or
/// `2h-E`, a generic class `a<deg>` (`a2*` when supported away from the
/// blow-up centre), and `p*<token>` for pullbacks.
pub fn insertion(token: &str, m: &Manifold) -> Result<Insertion> {
    if let Some(rest) = token.strip_prefix("p*") {
        let base = base_of(m).ok_or_else(|| anyhow!("`{token}`: {} is not a blow-up", m.key()))?;
        return Ok(Insertion::pullback(insertion(rest, &base)?));
    }
    match token {
        "1" => return Ok(Insertion::Unit),
        "pt" => return Ok(Insertion::Point),
        "PD(E)" => return Ok(Insertion::ExcDual),
        _ => {}
    }
    if let Some((_, k)) = token.split_once('^') {
        let k: u32 = k.parse().map_err(|_| anyhow!("bad power in `{token}`"))?;
        return Ok(Insertion::HyperplanePower { k });
    }
    if let Some(rest) = token.strip_prefix('a') {
        let (digits, away) = match rest.strip_suffix('*') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if let Ok(degree) = digits.parse::<u32>() {
            if degree % 2 != 0 {
                bail!("`{token}`: insertion degrees are even");
            }
            return Ok(Insertion::Generic {
                label: format!("a{degree}"),
                degree,
                away_from_locus: away,
            });
        }
    }
    divisor(token, m)
        .map(Insertion::divisor)
        .map_err(|e| anyhow!("bad insertion `{token}`: {e}"))
}

fn base_of(m: &Manifold) -> Option<Manifold> {
    gw_core::oracle::base_manifold(m)
}

/// `point`, `curve:g0=<g>,c1=<c>`, or `surface:<product|k3|torus|other>`.
pub fn locus(token: &str, ambient_n: u32) -> Result<BlowupLocus> {
    if token == "point" {
        return Ok(BlowupLocus::point(ambient_n));
    }
    if let Some(rest) = token.strip_prefix("curve:") {
        let (mut g0, mut c1) = (None, None);
        for part in rest.split(',') {
            match part.split_once('=') {
                Some(("g0", v)) => g0 = Some(v.parse::<u32>().with_context(|| format!("g0 in `{token}`"))?),
                Some(("c1", v)) => c1 = Some(v.parse::<i64>().with_context(|| format!("c1 in `{token}`"))?),
                _ => bail!("bad locus field `{part}` in `{token}`"),
            }
        }
        let g0 = g0.ok_or_else(|| anyhow!("`{token}` lacks g0"))?;
        let c1 = c1.ok_or_else(|| anyhow!("`{token}` lacks c1"))?;
        return Ok(BlowupLocus::curve(ambient_n, g0, c1));
    }
    if let Some(rest) = token.strip_prefix("surface:") {
        let shape = match rest {
            "product" => SurfaceShape::ProductPositiveGenus,
            "k3" | "K3" => SurfaceShape::K3,
            "torus" => SurfaceShape::Torus,
            "other" => SurfaceShape::Other,
            _ => bail!("bad surface shape `{rest}` (product, k3, torus, other)"),
        };
        return Ok(BlowupLocus::surface(ambient_n, shape));
    }
    bail!("bad locus `{token}` (point, curve:g0=G,c1=C, surface:SHAPE)")
}

/// `a..b` (inclusive) or a single integer.
pub fn range(token: &str) -> Result<(i64, i64)> {
    let (lo, hi) = match token.split_once("..") {
        Some((lo, hi)) => (lo.parse::<i64>(), hi.trim_start_matches('=').parse::<i64>()),
        None => (token.parse(), token.parse()),
    };
    let (lo, hi) = (
        lo.map_err(|_| anyhow!("bad range `{token}`"))?,
        hi.map_err(|_| anyhow!("bad range `{token}`"))?,
    );
    if lo > hi || lo < 1 {
        bail!("bad range `{token}`: need 1 <= a <= b");
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        let bl = manifold("BlP2", None).unwrap();
        assert_eq!(class("3f-1e", &bl).unwrap(), CurveClass::new([3, -1]));
        assert_eq!(class("-e", &bl).unwrap(), CurveClass::new([0, -1]));
        assert_eq!(class("e+f", &bl).unwrap(), CurveClass::new([1, 1]));
        assert_eq!(class("0", &bl).unwrap(), CurveClass::new([0, 0]));
        let p2 = manifold("P2", None).unwrap();
        assert_eq!(class("2l", &p2).unwrap(), CurveClass::new([2]));
        let err = class("3x", &p2).unwrap_err().to_string();
        assert!(err.contains("`3x`"), "{err}");
    }

    #[test]
    fn manifolds() {
        assert!(manifold("P1", None).is_err());
        assert!(manifold("Q2", None).is_err());
        assert!(manifold("M3", None).is_err());
        assert_eq!(manifold("M3", Some(2)).unwrap().n(), 3);
    }

    #[test]
    fn insertions() {
        let bl = manifold("BlP2", None).unwrap();
        assert_eq!(insertion("pt", &bl).unwrap(), Insertion::Point);
        assert_eq!(insertion("PD(E)", &bl).unwrap(), Insertion::ExcDual);
        assert_eq!(
            insertion("p*pt", &bl).unwrap(),
            Insertion::pullback(Insertion::Point)
        );
        assert_eq!(
            insertion("p*H", &bl).unwrap(),
            Insertion::pullback(Insertion::divisor(DivisorClass::new([1])))
        );
        assert_eq!(
            insertion("h-E", &bl).unwrap(),
            Insertion::divisor(DivisorClass::new([1, -1]))
        );
        assert_eq!(
            insertion("H^2", &bl).unwrap(),
            Insertion::HyperplanePower { k: 2 }
        );
        assert!(matches!(
            insertion("a2*", &bl).unwrap(),
            Insertion::Generic {
                degree: 2,
                away_from_locus: true,
                ..
            }
        ));
        assert!(insertion("a3", &bl).is_err());
        assert!(insertion("p*pt", &manifold("P2", None).unwrap()).is_err());
    }

    #[test]
    fn loci_and_ranges() {
        assert_eq!(
            locus("curve:g0=1,c1=-2", 3).unwrap(),
            BlowupLocus::curve(3, 1, -2)
        );
        assert_eq!(
            locus("surface:k3", 4).unwrap(),
            BlowupLocus::surface(4, SurfaceShape::K3)
        );
        assert!(locus("curve:g0=1", 3).is_err());
        assert_eq!(range("1..5").unwrap(), (1, 5));
        assert_eq!(range("1..=5").unwrap(), (1, 5));
        assert_eq!(range("3").unwrap(), (3, 3));
        assert!(range("5..1").is_err());
    }
}
