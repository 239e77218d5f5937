//! Complex finite-dimensional `l^p` vectors, `l^r`-direct-sum norms, the
//! bilinear dual pairing, and supporting functionals at boundary points.
//!
//! The dual identification is complex linear, not conjugate linear: a
//! functional `f` acts on `x` via `sum_j x_j f_j` with no conjugation. All
//! dual objects in the crate follow this convention.

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance inside which a vector counts as a boundary (unit) point.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Shape of the ambient space: a single `l^p_n`, or a two-block direct sum
/// `l^{p1}_{n1} (+)_r l^{p2}_{n2}`. Exponents are stored as `f64` with
/// `f64::INFINITY` as the max-norm flag, allowed only in the `Lp` kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceSignature {
    Lp { dim: usize, p: f64 },
    DirectSum { p1: f64, n1: usize, p2: f64, n2: usize, r: f64 },
}

fn check_exponent(p: f64, allow_inf: bool, what: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::contract(format!("exponent {what} = {p} must be >= 1")));
    }
    if p.is_infinite() && !allow_inf {
        return Err(Error::contract(format!("exponent {what} may not be infinite")));
    }
    Ok(())
}

impl SpaceSignature {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::contract("dimension must be >= 1"));
        }
        check_exponent(p, true, "p")?;
        Ok(SpaceSignature::Lp { dim, p })
    }

    pub fn direct_sum(p1: f64, n1: usize, p2: f64, n2: usize, r: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::contract("block dimensions must be >= 1"));
        }
        check_exponent(p1, false, "p1")?;
        check_exponent(p2, false, "p2")?;
        check_exponent(r, false, "r")?;
        Ok(SpaceSignature::DirectSum { p1, n1, p2, n2, r })
    }

    pub fn dim(&self) -> usize {
        match *self {
            SpaceSignature::Lp { dim, .. } => dim,
            SpaceSignature::DirectSum { n1, n2, .. } => n1 + n2,
        }
    }

    /// The `l^p` exponent, if this is a plain `l^p` signature.
    pub fn lp_exponent(&self) -> Option<f64> {
        match *self {
            SpaceSignature::Lp { p, .. } => Some(p),
            SpaceSignature::DirectSum { .. } => None,
        }
    }

    pub fn is_polydisc(&self) -> bool {
        matches!(*self, SpaceSignature::Lp { p, .. } if p.is_infinite())
    }
}

/// Conjugate exponent: `1/p + 1/q = 1`, with `1 <-> inf`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p <= 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm(entries: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else if p == 1.0 {
        entries.iter().map(|z| z.norm()).sum()
    } else if p == 2.0 {
        entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    } else {
        entries
            .iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// A point of `C^n` carrying its space tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    space: SpaceSignature,
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(space: SpaceSignature, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != space.dim() {
            return Err(Error::contract(format!(
                "entry count {} does not match signature dimension {}",
                entries.len(),
                space.dim()
            )));
        }
        Ok(ComplexVector { space, entries })
    }

    pub fn zero(space: SpaceSignature) -> Self {
        let dim = space.dim();
        ComplexVector {
            space,
            entries: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    pub fn space(&self) -> SpaceSignature {
        self.space
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    /// Norm of the tagged space: `(sum |z_j|^p)^{1/p}` for `l^p` (max-norm for
    /// `p = inf`), `(|y|_{p1}^r + |z|_{p2}^r)^{1/r}` for direct sums.
    pub fn norm(&self) -> f64 {
        match self.space {
            SpaceSignature::Lp { p, .. } => lp_norm(&self.entries, p),
            SpaceSignature::DirectSum { p1, n1, p2, r, .. } => {
                let ny = lp_norm(&self.entries[..n1], p1);
                let nz = lp_norm(&self.entries[n1..], p2);
                if r == 1.0 {
                    ny + nz
                } else {
                    (ny.powf(r) + nz.powf(r)).powf(1.0 / r)
                }
            }
        }
    }

    /// Head projection: zero all entries past index `n`. Norm non-increasing.
    pub fn project_head(&self, n: usize) -> Result<ComplexVector> {
        if n > self.space.dim() {
            return Err(Error::contract(format!(
                "projection index {n} exceeds dimension {}",
                self.space.dim()
            )));
        }
        let mut out = self.clone();
        for e in out.entries.iter_mut().skip(n) {
            *e = Complex64::new(0.0, 0.0);
        }
        Ok(out)
    }

    fn block(&self, i: usize) -> &[Complex64] {
        match self.space {
            SpaceSignature::Lp { .. } => &self.entries,
            SpaceSignature::DirectSum { n1, .. } => {
                if i == 0 {
                    &self.entries[..n1]
                } else {
                    &self.entries[n1..]
                }
            }
        }
    }
}

/// A dual-space element acting bilinearly: `<x, f> = sum_j x_j f_j`.
/// The stored signature is that of the predual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFunctional {
    space: SpaceSignature,
    entries: Vec<Complex64>,
}

impl DualFunctional {
    pub fn new(space: SpaceSignature, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != space.dim() {
            return Err(Error::contract(format!(
                "entry count {} does not match predual dimension {}",
                entries.len(),
                space.dim()
            )));
        }
        Ok(DualFunctional { space, entries })
    }

    pub fn space(&self) -> SpaceSignature {
        self.space
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    /// Dual norm (the operator norm of the functional on the predual ball).
    pub fn dual_norm(&self) -> f64 {
        match self.space {
            SpaceSignature::Lp { p, .. } => lp_norm(&self.entries, conjugate_exponent(p)),
            SpaceSignature::DirectSum { p1, n1, p2, r, .. } => {
                let q1 = lp_norm(&self.entries[..n1], conjugate_exponent(p1));
                let q2 = lp_norm(&self.entries[n1..], conjugate_exponent(p2));
                lp_norm(
                    &[Complex64::new(q1, 0.0), Complex64::new(q2, 0.0)],
                    conjugate_exponent(r),
                )
            }
        }
    }

    /// Rescale to dual norm 1; no-op on the zero functional.
    pub fn normalize(&mut self) {
        let n = self.dual_norm();
        if n > 0.0 {
            for e in self.entries.iter_mut() {
                *e /= n;
            }
        }
    }
}

/// Bilinear pairing `<x, f> = sum_j x_j f_j` (no conjugation).
pub fn pairing(x: &ComplexVector, f: &DualFunctional) -> Result<Complex64> {
    if x.space.dim() != f.space.dim() {
        return Err(Error::contract(format!(
            "pairing dimension mismatch: {} vs {}",
            x.space.dim(),
            f.space.dim()
        )));
    }
    Ok(x.entries
        .iter()
        .zip(f.entries.iter())
        .map(|(a, b)| a * b)
        .sum())
}

fn lp_support_entries(unit: &[Complex64], p: f64) -> Vec<Complex64> {
    unit.iter()
        .map(|z| {
            let m = z.norm();
            if m == 0.0 {
                // convention: 0^{p-2} * conj(0) = 0 for every p
                Complex64::new(0.0, 0.0)
            } else if p == 2.0 {
                z.conj()
            } else {
                m.powf(p - 2.0) * z.conj()
            }
        })
        .collect()
}

/// Supporting functional at a boundary point `x` (`|x| = 1` within
/// [`BOUNDARY_TOL`]; the input is renormalized first). Coordinatewise
/// `N_x(j) = |x_j|^{p-2} conj(x_j)`; block form for direct sums. Satisfies
/// `<x, N_x> = 1` and `Re <y, N_x> < 1` strictly inside the ball.
pub fn support_functional(x: &ComplexVector) -> Result<DualFunctional> {
    let n = x.norm();
    if (n - 1.0).abs() > BOUNDARY_TOL {
        return Err(Error::contract(format!(
            "support functional requires a unit vector; got norm {n}"
        )));
    }
    match x.space {
        SpaceSignature::Lp { p, .. } => {
            if p.is_infinite() {
                return Err(Error::contract(
                    "support functionals are not defined for the max norm",
                ));
            }
            let unit: Vec<Complex64> = x.entries.iter().map(|z| z / n).collect();
            DualFunctional::new(x.space, lp_support_entries(&unit, p))
        }
        SpaceSignature::DirectSum { p1, p2, r, .. } => {
            let mut entries = Vec::with_capacity(x.space.dim());
            for (i, p_i) in [(0usize, p1), (1usize, p2)] {
                let block = x.block(i);
                let bn = lp_norm(block, p_i) / n;
                if bn == 0.0 {
                    entries.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(block.len()));
                } else {
                    let unit: Vec<Complex64> = block.iter().map(|z| z / (n * bn)).collect();
                    let weight = bn.powf(r - 1.0);
                    entries.extend(
                        lp_support_entries(&unit, p_i)
                            .into_iter()
                            .map(|e| weight * e),
                    );
                }
            }
            DualFunctional::new(x.space, entries)
        }
    }
}

// --- serialization -------------------------------------------------------
//
// Vectors serialize as {"space": ..., "re": [...], "im": [...]}. Exponents
// serialize as numbers, with the string "inf" for the max norm (JSON has no
// infinity literal).

pub(crate) fn exponent_to_json(p: f64) -> serde_json::Value {
    if p.is_infinite() {
        serde_json::Value::String("inf".to_string())
    } else {
        serde_json::json!(p)
    }
}

pub(crate) fn exponent_from_json(v: &serde_json::Value) -> Option<f64> {
    match v {
        serde_json::Value::String(s) if s == "inf" => Some(f64::INFINITY),
        serde_json::Value::Number(n) => n.as_f64(),
        _ => None,
    }
}

impl Serialize for SpaceSignature {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v = match *self {
            SpaceSignature::Lp { dim, p } => serde_json::json!({
                "kind": "lp",
                "n": dim,
                "p": exponent_to_json(p),
            }),
            SpaceSignature::DirectSum { p1, n1, p2, n2, r } => serde_json::json!({
                "kind": "direct_sum",
                "p1": p1, "n1": n1, "p2": p2, "n2": n2, "r": r,
            }),
        };
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SpaceSignature {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| D::Error::custom("space signature needs a \"kind\" field"))?;
        match kind {
            "lp" => {
                let dim = v
                    .get("n")
                    .and_then(|n| n.as_u64())
                    .ok_or_else(|| D::Error::custom("lp signature needs integer \"n\""))?;
                let p = v
                    .get("p")
                    .and_then(exponent_from_json)
                    .ok_or_else(|| D::Error::custom("lp signature needs \"p\""))?;
                SpaceSignature::lp(dim as usize, p).map_err(D::Error::custom)
            }
            "direct_sum" => {
                let get = |name: &str| {
                    v.get(name)
                        .and_then(|x| x.as_f64())
                        .ok_or_else(|| D::Error::custom(format!("direct_sum needs \"{name}\"")))
                };
                let n1 = get("n1")? as usize;
                let n2 = get("n2")? as usize;
                SpaceSignature::direct_sum(get("p1")?, n1, get("p2")?, n2, get("r")?)
                    .map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!("unknown space kind {other:?}"))),
        }
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let re: Vec<f64> = self.entries.iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.entries.iter().map(|z| z.im).collect();
        serde_json::json!({"space": self.space, "re": re, "im": im}).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            space: SpaceSignature,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        let raw = Raw::deserialize(de)?;
        if raw.re.len() != raw.im.len() {
            return Err(D::Error::custom("re/im length mismatch"));
        }
        let entries = raw
            .re
            .into_iter()
            .zip(raw.im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        ComplexVector::new(raw.space, entries).map_err(D::Error::custom)
    }
}
