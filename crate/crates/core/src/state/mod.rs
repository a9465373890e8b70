//! Multipartite states and their marginal spectra.

mod classical;
mod dense;
pub mod named;
mod pure;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use classical::{marginalize_classical, ClassicalState};
pub use dense::{partial_trace_dense, spectrum_dense, DensityMatrix, C64, DENSE_LIMIT, HERMITIAN_TOL};
pub use pure::{reduced_spectrum_pure, SparsePureState};

use crate::error::{Error, Result};
use crate::spectrum::WeightedSpectrum;
use crate::subset::SubsetMask;

/// Anything that can report the spectrum of each of its marginals.
pub trait Marginals {
    /// Number of parties.
    fn parties(&self) -> usize;

    /// Spectrum of the reduced state on `subset`.
    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum>;
}

impl Marginals for ClassicalState {
    fn parties(&self) -> usize {
        self.n()
    }

    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        ClassicalState::marginal_spectrum(self, subset)
    }
}

impl Marginals for SparsePureState {
    fn parties(&self) -> usize {
        self.n()
    }

    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        reduced_spectrum_pure(self, subset)
    }
}

impl Marginals for DensityMatrix {
    fn parties(&self) -> usize {
        self.n()
    }

    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        DensityMatrix::marginal_spectrum(self, subset)
    }
}

/// Any supported state representation.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Classical(ClassicalState),
    Pure(SparsePureState),
    Density(DensityMatrix),
}

impl State {
    pub fn is_classical(&self) -> bool {
        matches!(self, State::Classical(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            State::Classical(_) => "classical",
            State::Pure(_) => "pure",
            State::Density(_) => "density",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&StateJson::from(self))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

impl Serialize for State {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(serializer)
    }
}

impl Marginals for State {
    fn parties(&self) -> usize {
        match self {
            State::Classical(s) => s.n(),
            State::Pure(s) => s.n(),
            State::Density(s) => s.n(),
        }
    }

    fn marginal_spectrum(&self, subset: SubsetMask) -> Result<WeightedSpectrum> {
        match self {
            State::Classical(s) => Marginals::marginal_spectrum(s, subset),
            State::Pure(s) => Marginals::marginal_spectrum(s, subset),
            State::Density(s) => Marginals::marginal_spectrum(s, subset),
        }
    }
}

impl From<ClassicalState> for State {
    fn from(s: ClassicalState) -> Self {
        State::Classical(s)
    }
}

impl From<SparsePureState> for State {
    fn from(s: SparsePureState) -> Self {
        State::Pure(s)
    }
}

impl From<DensityMatrix> for State {
    fn from(s: DensityMatrix) -> Self {
        State::Density(s)
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    x: Vec<u64>,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct AmplitudeJson {
    index: Vec<u64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum StateJson {
    Classical { n: usize, alphabet_sizes: Vec<u64>, atoms: Vec<AtomJson> },
    Pure { n: usize, dims: Vec<u64>, amplitudes: Vec<AmplitudeJson> },
    Density { n: usize, dims: Vec<usize>, re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>> },
}

impl From<&State> for StateJson {
    fn from(state: &State) -> Self {
        match state {
            State::Classical(s) => StateJson::Classical {
                n: s.n(),
                alphabet_sizes: s.alphabet_sizes().to_vec(),
                atoms: s.atoms().iter().map(|(x, p)| AtomJson { x: x.clone(), p: *p }).collect(),
            },
            State::Pure(s) => StateJson::Pure {
                n: s.n(),
                dims: s.dims().to_vec(),
                amplitudes: s
                    .amplitudes()
                    .iter()
                    .map(|(x, a)| AmplitudeJson { index: x.clone(), re: a.re, im: a.im })
                    .collect(),
            },
            State::Density(s) => {
                let m = s.matrix();
                let rows = |f: fn(&C64) -> f64| {
                    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
                };
                StateJson::Density { n: s.n(), dims: s.dims().to_vec(), re: rows(|c| c.re), im: Some(rows(|c| c.im)) }
            }
        }
    }
}

fn check_party_count(n: usize, len: usize) -> Result<()> {
    if n != len {
        return Err(Error::DimensionMismatch(format!("n = {n} but {len} local dimensions given")));
    }
    Ok(())
}

impl TryFrom<StateJson> for State {
    type Error = Error;

    fn try_from(raw: StateJson) -> Result<Self> {
        match raw {
            StateJson::Classical { n, alphabet_sizes, atoms } => {
                check_party_count(n, alphabet_sizes.len())?;
                let atoms = atoms.into_iter().map(|a| (a.x, a.p)).collect();
                Ok(State::Classical(ClassicalState::new(alphabet_sizes, atoms)?))
            }
            StateJson::Pure { n, dims, amplitudes } => {
                check_party_count(n, dims.len())?;
                let amps = amplitudes.into_iter().map(|a| (a.index, C64::new(a.re, a.im))).collect();
                Ok(State::Pure(SparsePureState::new(dims, amps)?))
            }
            StateJson::Density { n, dims, re, im } => {
                check_party_count(n, dims.len())?;
                let d = re.len();
                if re.iter().any(|r| r.len() != d) {
                    return Err(Error::DimensionMismatch("real part is not square".into()));
                }
                if let Some(im) = &im {
                    if im.len() != d || im.iter().any(|r| r.len() != d) {
                        return Err(Error::DimensionMismatch("imaginary part shape differs from real part".into()));
                    }
                }
                let m = DMatrix::from_fn(d, d, |i, j| {
                    C64::new(re[i][j], im.as_ref().map_or(0.0, |im| im[i][j]))
                });
                Ok(State::Density(DensityMatrix::new(dims, m)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_json_round_trip() {
        let p = ClassicalState::new(vec![3, 3], vec![(vec![0, 0], 0.5), (vec![1, 2], 0.5)]).unwrap();
        let s = State::Classical(p).to_json().unwrap();
        assert_eq!(
            s,
            r#"{"type":"classical","n":2,"alphabet_sizes":[3,3],"atoms":[{"x":[0,0],"p":0.5},{"x":[1,2],"p":0.5}]}"#
        );
        assert_eq!(State::from_json(&s).unwrap().to_json().unwrap(), s);
    }

    #[test]
    fn pure_json_round_trip() {
        let s = State::Pure(named::bell()).to_json().unwrap();
        assert!(s.starts_with(r#"{"type":"pure","n":2,"dims":[2,2],"amplitudes":[{"index":[0,0],"re":0.70710678118654757,"im":0.0}"#));
        let back = State::from_json(&s).unwrap();
        assert_eq!(back, State::Pure(named::bell()));
    }

    #[test]
    fn density_json_round_trip() {
        let rho = DensityMatrix::from_pure(&named::bell()).unwrap();
        let s = State::Density(rho.clone()).to_json().unwrap();
        assert_eq!(State::from_json(&s).unwrap(), State::Density(rho));
    }

    #[test]
    fn json_validation() {
        assert!(State::from_json(r#"{"type":"classical","n":2,"alphabet_sizes":[2],"atoms":[]}"#).is_err());
        assert!(State::from_json(r#"{"type":"pure","n":1,"dims":[2],"amplitudes":[{"index":[0],"re":0.5}]}"#).is_err());
        assert!(State::from_json(r#"{"type":"mixed"}"#).is_err());
    }
}
