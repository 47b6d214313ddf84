use std::io::{Read, Write};

use nalgebra::Matrix2;

use crate::error::{domain, Error, Result};

/// Something that can be observed as a scenario and written as CSV columns.
pub trait Observation: Clone + Sized {
    /// Column names of the observation components.
    fn columns() -> &'static [&'static str];
    fn to_fields(&self) -> Vec<f64>;
    fn from_fields(fields: &[f64]) -> Result<Self>;
}

impl Observation for f64 {
    fn columns() -> &'static [&'static str] {
        &["eta"]
    }
    fn to_fields(&self) -> Vec<f64> {
        vec![*self]
    }
    fn from_fields(fields: &[f64]) -> Result<Self> {
        Ok(fields[0])
    }
}

impl Observation for Matrix2<f64> {
    fn columns() -> &'static [&'static str] {
        &["a11", "a12", "a21", "a22"]
    }
    fn to_fields(&self) -> Vec<f64> {
        vec![self[(0, 0)], self[(0, 1)], self[(1, 0)], self[(1, 1)]]
    }
    fn from_fields(f: &[f64]) -> Result<Self> {
        Ok(Matrix2::new(f[0], f[1], f[2], f[3]))
    }
}

/// Observed scenarios `η_1..η_N` with their tolerable observation radii.
///
/// A zero radius is accepted and marks the set as non-robust (plain
/// scenario constraints).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet<T> {
    observations: Vec<T>,
    radii: Vec<f64>,
}

impl<T> ScenarioSet<T> {
    pub fn new(observations: Vec<T>, radii: Vec<f64>) -> Result<Self> {
        if observations.len() != radii.len() {
            return Err(domain(format!(
                "{} observations but {} radii",
                observations.len(),
                radii.len()
            )));
        }
        if radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(domain("radii must be non-negative and finite"));
        }
        Ok(Self { observations, radii })
    }

    pub fn with_radius(observations: Vec<T>, radius: f64) -> Result<Self> {
        let n = observations.len();
        Self::new(observations, vec![radius; n])
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[T] {
        &self.observations
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Scenario `i` (1-based).
    pub fn get(&self, i: usize) -> (&T, f64) {
        (&self.observations[i - 1], self.radii[i - 1])
    }

    /// True when some radius is zero.
    pub fn is_non_robust(&self) -> bool {
        self.radii.contains(&0.0)
    }
}

impl<T: Observation> ScenarioSet<T> {
    /// Columnar CSV: `index,<observation columns>,radius`, 1-based index.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["index"];
        header.extend_from_slice(T::columns());
        header.push("radius");
        w.write_record(&header)?;
        for (i, (obs, r)) in self.observations.iter().zip(&self.radii).enumerate() {
            let mut row = vec![(i + 1).to_string()];
            row.extend(obs.to_fields().iter().map(|x| x.to_string()));
            row.push(r.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let width = T::columns().len() + 2;
        let headers = r.headers()?.clone();
        if headers.len() != width || &headers[0] != "index" || &headers[width - 1] != "radius" {
            return Err(Error::Config(format!("unexpected scenario header {headers:?}")));
        }
        let mut observations = Vec::new();
        let mut radii = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let parse = |k: usize| -> Result<f64> {
                rec[k]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("row {}: column {}: {e}", row + 1, k)))
            };
            let index: usize = rec[0]
                .trim()
                .parse()
                .map_err(|e| Error::Config(format!("row {}: bad index: {e}", row + 1)))?;
            if index != row + 1 {
                return Err(Error::Config(format!("row {} has index {index}", row + 1)));
            }
            let fields = (1..width - 1).map(parse).collect::<Result<Vec<_>>>()?;
            observations.push(T::from_fields(&fields)?);
            radii.push(parse(width - 1)?);
        }
        Self::new(observations, radii)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_mismatch_and_negative_radius() {
        assert!(ScenarioSet::new(vec![1.0, 2.0], vec![0.5]).is_err());
        assert!(ScenarioSet::new(vec![1.0], vec![-0.5]).is_err());
        let s = ScenarioSet::with_radius(vec![1.0, 2.0], 0.0).unwrap();
        assert!(s.is_non_robust());
    }

    #[test]
    fn csv_layout() {
        let s = ScenarioSet::new(vec![0.25, -1.5], vec![2.0, 1.8]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "index,eta,radius\n1,0.25,2\n2,-1.5,1.8\n");
        assert_eq!(ScenarioSet::<f64>::read_csv(&buf[..]).unwrap(), s);
    }

    #[test]
    fn matrix_csv_roundtrip() {
        let m = Matrix2::new(0.8, -1.0, 0.1 + 0.2, -0.9);
        let s = ScenarioSet::with_radius(vec![m, m * 2.0], 0.5).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("index,a11,a12,a21,a22,radius\n1,0.8,-1,0.30000000000000004,"));
        assert_eq!(ScenarioSet::<Matrix2<f64>>::read_csv(&buf[..]).unwrap(), s);
    }

    #[test]
    fn bad_csv_is_config_error() {
        assert!(matches!(ScenarioSet::<f64>::read_csv(&b"index,eta\n1,2\n"[..]), Err(Error::Config(_))));
        assert!(matches!(ScenarioSet::<f64>::read_csv(&b"index,eta,radius\n2,1,1\n"[..]), Err(Error::Config(_))));
    }
}
