use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::AutField;
use crate::series::{SkewRing, SkewSeries};
use crate::text::{parse_elem, TextError};

/// Which construction produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    InfiniteWitness,
    DegreeAtLeast5,
    Order4Split,
    Order4L,
    Order4Conjugated,
    ZeroInput,
}

/// A claimed factorization `input = [p₁,q₁]·[p₂,q₂]` below `check_prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<E> {
    pub field: String,
    pub sigma: String,
    pub method: Method,
    pub check_prec: i64,
    pub input: SkewSeries<E>,
    pub pairs: [(SkewSeries<E>, SkewSeries<E>); 2],
    /// Set for characteristic 2 with σ of order 4, where the sign arguments
    /// behind the order-4 construction degenerate. Still verified.
    pub experimental: bool,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad coefficient {text:?}: {source}")]
    Coefficient { text: String, source: TextError },
    #[error("series with val {val} and prec {prec} cannot hold {len} coefficients")]
    Shape { val: i64, prec: i64, len: usize },
}

/// Wire form of a series: `coeffs[j]` is the coefficient of `x^(val + j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub val: i64,
    pub prec: i64,
    pub coeffs: Vec<String>,
}

/// Wire form of a certificate, keys in schema order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub field: String,
    pub sigma: String,
    pub method: Method,
    pub prec: i64,
    pub input: SeriesJson,
    pub pairs: [[SeriesJson; 2]; 2],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub experimental: bool,
}

fn series_to_json<F: AutField>(field: &F, f: &SkewSeries<F::Elem>) -> SeriesJson {
    SeriesJson {
        val: f.start(),
        prec: f.prec(),
        coeffs: f.coeffs().iter().map(|c| field.format_elem(c)).collect(),
    }
}

fn series_from_json<F: AutField>(d: &SkewRing<F>, s: &SeriesJson) -> Result<SkewSeries<F::Elem>, CertificateError> {
    let len = s.coeffs.len();
    if s.val > s.prec || (s.prec - s.val) as u64 != len as u64 {
        return Err(CertificateError::Shape { val: s.val, prec: s.prec, len });
    }
    let coeffs = s
        .coeffs
        .iter()
        .map(|text| {
            parse_elem(d.field(), text).map_err(|source| CertificateError::Coefficient { text: text.clone(), source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(d.from_parts(s.val, coeffs, s.prec))
}

impl CertificateJson {
    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the certificate over `d`. Field agreement is checked by
    /// [`super::verify_certificate`], not here.
    pub fn to_certificate<F: AutField>(&self, d: &SkewRing<F>) -> Result<Certificate<F::Elem>, CertificateError> {
        let pair = |p: &[SeriesJson; 2]| -> Result<_, CertificateError> {
            Ok((series_from_json(d, &p[0])?, series_from_json(d, &p[1])?))
        };
        Ok(Certificate {
            field: self.field.clone(),
            sigma: self.sigma.clone(),
            method: self.method,
            check_prec: self.prec,
            input: series_from_json(d, &self.input)?,
            pairs: [pair(&self.pairs[0])?, pair(&self.pairs[1])?],
            experimental: self.experimental,
        })
    }
}

impl<E: Clone + PartialEq> Certificate<E> {
    pub fn to_json_value<F: AutField<Elem = E>>(&self, field: &F) -> CertificateJson {
        let pair = |(p, q): &(SkewSeries<E>, SkewSeries<E>)| [series_to_json(field, p), series_to_json(field, q)];
        CertificateJson {
            field: self.field.clone(),
            sigma: self.sigma.clone(),
            method: self.method,
            prec: self.check_prec,
            input: series_to_json(field, &self.input),
            pairs: [pair(&self.pairs[0]), pair(&self.pairs[1])],
            experimental: self.experimental,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json<F: AutField<Elem = E>>(&self, field: &F) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(field)).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json<F: AutField<Elem = E>>(d: &SkewRing<F>, text: &str) -> Result<Self, CertificateError> {
        CertificateJson::parse(text)?.to_certificate(d)
    }
}
