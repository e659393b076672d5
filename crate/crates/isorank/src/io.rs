//! JSON schemas for polynomials, matrices, normal sequences, decompositions
//! and schemes, shared by the command-line interface.
//!
//! Polynomial schema:
//! `{"field": "QI"|"Q"|"Fp", "p": <prime>, "arity": n+1, "degree": d,
//!   "terms": [{"exp": [e0,...,en], "re": "num/den", "im": "num/den"}]}`
//! with "im" omitted for Q and Fp. Exponents must sum to "degree".

use crate::apolarity::LinearForm;
use crate::decompose::IsotropicDecomposition;
use crate::field::{Field, FpField, GaussQ, Rat, TowerElem, TowerField};
use crate::matrix::MatrixExact;
use crate::poly::MultiPoly;
use crate::quadrics::NormalSequence;
use num::{BigInt, Zero};
use serde_json::{json, Map, Value};
use std::str::FromStr;

#[derive(thiserror::Error, Debug)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported field tag {0}")]
    UnsupportedField(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Malformed(msg.into())
}

pub fn parse_rat(v: &Value) -> Result<Rat, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(BigInt::from(i)))
            } else {
                Err(bad(format!("non-integer numeric literal {}", n)))
            }
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let n = BigInt::from_str(num).map_err(|e| bad(format!("bad numerator: {}", e)))?;
            let d = BigInt::from_str(den).map_err(|e| bad(format!("bad denominator: {}", e)))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Rat::new(n, d))
        }
        _ => Err(bad("expected a rational as \"num/den\" or integer")),
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn gauss_to_json(g: &GaussQ) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), Value::String(rat_to_string(&g.re)));
    if !g.im.is_zero() {
        m.insert("im".into(), Value::String(rat_to_string(&g.im)));
    }
    Value::Object(m)
}

pub fn parse_gauss(v: &Value) -> Result<GaussQ, IoError> {
    let re = v
        .get("re")
        .map(parse_rat)
        .transpose()?
        .unwrap_or_else(Rat::zero);
    let im = v
        .get("im")
        .map(parse_rat)
        .transpose()?
        .unwrap_or_else(Rat::zero);
    Ok(GaussQ::new(re, im))
}

/// A polynomial over an exact field or a prime field, as parsed.
pub enum ParsedPoly {
    Exact(TowerField, MultiPoly<TowerField>),
    Fp(FpField, MultiPoly<FpField>),
}

pub fn parse_poly(v: &Value) -> Result<ParsedPoly, IoError> {
    let field = v
        .get("field")
        .and_then(Value::as_str)
        .unwrap_or("QI")
        .to_string();
    let arity = v
        .get("arity")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing arity"))? as usize;
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing degree"))? as usize;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing terms"))?;
    let exps = |t: &Value| -> Result<Vec<u8>, IoError> {
        let e = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("term missing exp"))?;
        if e.len() != arity {
            return Err(bad(format!(
                "exp length {} does not match arity {}",
                e.len(),
                arity
            )));
        }
        let out: Vec<u8> = e
            .iter()
            .map(|x| x.as_u64().map(|u| u as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("bad exponent"))?;
        let s: usize = out.iter().map(|&x| x as usize).sum();
        if s != degree {
            return Err(bad(format!(
                "exponents sum to {}, declared degree {}",
                s, degree
            )));
        }
        Ok(out)
    };
    match field.as_str() {
        "Q" | "QI" => {
            let fld = TowerField::qi();
            let mut parsed = Vec::new();
            for t in terms {
                let g = parse_gauss(t)?;
                if field == "Q" && !g.im.is_zero() {
                    return Err(bad("field Q cannot carry imaginary parts"));
                }
                parsed.push((exps(t)?, fld.from_gauss(g)));
            }
            let p = MultiPoly::from_terms(fld.clone(), arity, degree, parsed)
                .map_err(|e| bad(e.to_string()))?;
            Ok(ParsedPoly::Exact(fld, p))
        }
        "Fp" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("Fp requires p"))?;
            if !crate::field::fp_is_prime(p) {
                return Err(bad(format!("{} is not prime", p)));
            }
            let fld = FpField::new(p);
            let mut parsed = Vec::new();
            for t in terms {
                let r = t
                    .get("re")
                    .map(parse_rat)
                    .transpose()?
                    .unwrap_or_else(Rat::zero);
                if r.denom() != &BigInt::from(1) {
                    return Err(bad("Fp coefficients must be integers"));
                }
                let c = fld.reduce_i64(
                    i64::try_from(r.numer().clone()).map_err(|_| bad("coefficient too large"))?,
                );
                parsed.push((exps(t)?, c));
            }
            let poly = MultiPoly::from_terms(fld, arity, degree, parsed)
                .map_err(|e| bad(e.to_string()))?;
            Ok(ParsedPoly::Fp(fld, poly))
        }
        other => Err(IoError::UnsupportedField(other.to_string())),
    }
}

pub fn poly_to_json(fld: &TowerField, p: &MultiPoly<TowerField>) -> Value {
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|(e, c)| {
            let g = fld
                .lift_elem(c)
                .as_gauss()
                .expect("only Q(i) polynomials serialize to the plain schema");
            let mut m = Map::new();
            m.insert(
                "exp".into(),
                Value::Array(e.iter().map(|&x| json!(x)).collect()),
            );
            for (k, v) in gauss_to_json(&g).as_object().unwrap() {
                m.insert(k.clone(), v.clone());
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "field": "QI",
        "arity": p.arity,
        "degree": p.degree,
        "terms": terms,
    })
}

// ---------------------------------------------------------------------------
// Tower scalars: coordinates over the adjoined-root basis.
// ---------------------------------------------------------------------------

pub fn tower_field_to_json(fld: &TowerField) -> Value {
    let gens: Vec<Value> = (0..fld.depth())
        .map(|k| {
            let g = fld.generator(k);
            let disc = fld.mul(&g, &g);
            Value::Array(disc.coords().iter().map(gauss_to_json).collect())
        })
        .collect();
    json!({ "gens": gens })
}

pub fn parse_tower_field(v: &Value) -> Result<TowerField, IoError> {
    let mut fld = TowerField::qi();
    let Some(gens) = v.get("gens").and_then(Value::as_array) else {
        return Ok(fld);
    };
    for g in gens {
        let coords = g
            .as_array()
            .ok_or_else(|| bad("generator coords must be an array"))?;
        let mut elem = fld.zero();
        let mut cs = Vec::new();
        for c in coords {
            cs.push(parse_gauss(c)?);
        }
        // Rebuild the element from its coordinates over the current basis.
        for (idx, g) in cs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut t = fld.from_gauss(g.clone());
            for k in 0..fld.depth() {
                if idx & (1 << k) != 0 {
                    t = fld.mul(&t, &fld.generator(k));
                }
            }
            elem = fld.add(&elem, &t);
        }
        let (next, _) = fld
            .adjoin_sqrt(&elem)
            .map_err(|e| bad(format!("bad tower generator: {}", e)))?;
        fld = next;
    }
    Ok(fld)
}

pub fn tower_elem_to_json(fld: &TowerField, e: &TowerElem) -> Value {
    let e = fld.lift_elem(e);
    if let Some(g) = e.as_gauss() {
        gauss_to_json(&g)
    } else {
        json!({ "coords": e.coords().iter().map(gauss_to_json).collect::<Vec<_>>() })
    }
}

pub fn parse_tower_elem(fld: &TowerField, v: &Value) -> Result<TowerElem, IoError> {
    if let Some(coords) = v.get("coords").and_then(Value::as_array) {
        let mut elem = fld.zero();
        for (idx, c) in coords.iter().enumerate() {
            let g = parse_gauss(c)?;
            if g.is_zero() {
                continue;
            }
            let mut t = fld.from_gauss(g);
            for k in 0..fld.depth() {
                if idx & (1 << k) != 0 {
                    t = fld.mul(&t, &fld.generator(k));
                }
            }
            elem = fld.add(&elem, &t);
        }
        Ok(elem)
    } else {
        Ok(fld.from_gauss(parse_gauss(v)?))
    }
}

// ---------------------------------------------------------------------------
// Decompositions.
// ---------------------------------------------------------------------------

/// Decomposition JSON: degree, the form's Gram matrix, the tower (when
/// square roots were adjoined), and coefficient/point pairs.
pub fn decomposition_to_json(
    fld: &TowerField,
    dec: &IsotropicDecomposition<TowerField>,
) -> Value {
    let gram: Vec<Value> = (0..dec.form.arity())
        .map(|i| {
            Value::Array(
                (0..dec.form.arity())
                    .map(|j| tower_elem_to_json(fld, dec.form.gram.at(i, j)))
                    .collect(),
            )
        })
        .collect();
    let terms: Vec<Value> = dec
        .terms
        .iter()
        .map(|(c, l)| {
            json!({
                "coeff": tower_elem_to_json(fld, c),
                "point": l.0.iter().map(|x| tower_elem_to_json(fld, x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "degree": dec.degree,
        "arity": dec.arity,
        "form": gram,
        "tower": tower_field_to_json(fld),
        "terms": terms,
    })
}

pub fn parse_decomposition(
    v: &Value,
) -> Result<(TowerField, IsotropicDecomposition<TowerField>), IoError> {
    let fld = parse_tower_field(v.get("tower").unwrap_or(&Value::Null))?;
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing degree"))? as usize;
    let arity = v
        .get("arity")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing arity"))? as usize;
    let gram_rows = v
        .get("form")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing form"))?;
    if gram_rows.len() != arity {
        return Err(bad("form size does not match arity"));
    }
    let mut gram = MatrixExact::zeros(fld.clone(), arity, arity);
    for (i, row) in gram_rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad("bad gram row"))?;
        if row.len() != arity {
            return Err(bad("ragged gram"));
        }
        for (j, c) in row.iter().enumerate() {
            *gram.at_mut(i, j) = parse_tower_elem(&fld, c)?;
        }
    }
    let form = crate::apolarity::QuadraticFormSpec::from_gram(fld.clone(), gram);
    let terms_v = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing terms"))?;
    let mut terms = Vec::new();
    for t in terms_v {
        let c = parse_tower_elem(&fld, t.get("coeff").ok_or_else(|| bad("term missing coeff"))?)?;
        let pv = t
            .get("point")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("term missing point"))?;
        if pv.len() != arity {
            return Err(bad("point length does not match arity"));
        }
        let mut coords = Vec::new();
        for x in pv {
            coords.push(parse_tower_elem(&fld, x)?);
        }
        terms.push((c, LinearForm(coords)));
    }
    Ok((
        fld,
        IsotropicDecomposition {
            degree,
            arity,
            terms,
            form,
        },
    ))
}

// ---------------------------------------------------------------------------
// Matrices and normal sequences.
// ---------------------------------------------------------------------------

/// Matrix JSON: `{"size": n+1, "entries": [[{re,im},...],...]}`.
pub fn parse_matrix(v: &Value) -> Result<(TowerField, MatrixExact<TowerField>), IoError> {
    let fld = TowerField::qi();
    let size = v
        .get("size")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing size"))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing entries"))?;
    if entries.len() != size {
        return Err(bad("entries row count does not match size"));
    }
    let mut m = MatrixExact::zeros(fld.clone(), size, size);
    for (i, row) in entries.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad("bad matrix row"))?;
        if row.len() != size {
            return Err(bad("ragged matrix"));
        }
        for (j, c) in row.iter().enumerate() {
            *m.at_mut(i, j) = fld.from_gauss(parse_gauss(c)?);
        }
    }
    Ok((fld, m))
}

/// NormalSequence JSON: `{"blocks": [{"lambda": {re,im}, "size": s}, ...]}`.
pub fn parse_normal_sequence(v: &Value) -> Result<NormalSequence, IoError> {
    let fld = TowerField::qi();
    let blocks_v = v
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing blocks"))?;
    let mut blocks = Vec::new();
    for b in blocks_v {
        let lambda = fld.from_gauss(parse_gauss(
            b.get("lambda").ok_or_else(|| bad("block missing lambda"))?,
        )?);
        let size = b
            .get("size")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("block missing size"))? as usize;
        blocks.push((lambda, size));
    }
    NormalSequence::new(fld, blocks).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roundtrip() {
        let v: Value = serde_json::from_str(
            r#"{"field":"QI","arity":3,"degree":2,
                "terms":[{"exp":[1,0,1],"re":"1"},{"exp":[0,1,1],"re":"0","im":"-1"}]}"#,
        )
        .unwrap();
        let ParsedPoly::Exact(fld, p) = parse_poly(&v).unwrap() else {
            panic!("expected exact");
        };
        assert_eq!(p.num_terms(), 2);
        let back = poly_to_json(&fld, &p);
        let ParsedPoly::Exact(_, p2) = parse_poly(&back).unwrap() else {
            panic!()
        };
        assert_eq!(p, p2);
    }

    #[test]
    fn degree_mismatch_rejected() {
        let v: Value = serde_json::from_str(
            r#"{"field":"QI","arity":2,"degree":3,"terms":[{"exp":[1,1],"re":"1"}]}"#,
        )
        .unwrap();
        assert!(parse_poly(&v).is_err());
    }

    #[test]
    fn decomposition_roundtrip_with_tower() {
        let f = TowerField::qi();
        let (f2, s2) = f.adjoin_sqrt(&f.from_i64(2)).unwrap();
        let dec = IsotropicDecomposition {
            degree: 2,
            arity: 2,
            terms: vec![(
                s2.clone(),
                LinearForm(vec![f2.one(), f2.i()]),
            )],
            form: crate::apolarity::QuadraticFormSpec::standard(f2.clone(), 1),
        };
        let v = decomposition_to_json(&f2, &dec);
        let (f3, dec2) = parse_decomposition(&v).unwrap();
        assert_eq!(f3.depth(), 1);
        assert_eq!(dec2.terms.len(), 1);
        assert_eq!(f3.mul(&dec2.terms[0].0, &dec2.terms[0].0), f3.from_i64(2));
    }

    #[test]
    fn normal_sequence_parse() {
        let v: Value = serde_json::from_str(
            r#"{"blocks":[{"lambda":{"re":"0"},"size":3},{"lambda":{"re":"0"},"size":2}]}"#,
        )
        .unwrap();
        let seq = parse_normal_sequence(&v).unwrap();
        assert_eq!(seq.total_size(), 5);
    }
}
