use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::GeometryError;
use crate::dkrelations::{BraidPresentation, IdealReducer};
use crate::freeseries::{AlgebraElement, Alphabet, Element, Substitution};
use crate::scalar::C64;
use crate::transport::{FieldPiece, PiecewisePath, PointMap, PulledBackField};

/// `coefficient · E_summand / (form·x − offset)` in component `component`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub component: usize,
    pub summand: usize,
    pub coefficient: C64,
    pub form: Vec<C64>,
    pub offset: C64,
}

impl PoleTerm {
    fn denominator(&self, x: &[C64]) -> C64 {
        self.form.iter().zip(x).map(|(w, x)| w * x).sum::<C64>() - self.offset
    }
}

/// Where a connection may be evaluated, on top of avoiding its poles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Real points of `]0, 1[`.
    UnitInterval,
    /// `ℂ ∖ {0, 1}`.
    PuncturedPlane,
    /// Points with pairwise distinct coordinates.
    Configuration,
    /// Real points with `0 < x₂ < x₃ < 1`.
    Triangle,
}

#[derive(Clone, Debug)]
enum Coefficients {
    Poles(Vec<PoleTerm>),
    Pullback { base: Arc<FormalConnection>, map: Arc<dyn PointMap> },
}

/// `Γ = Σ_i Γ_i(x) dx_i` with `Γ_i(x) = Σ_k g_ik(x) E_k`, rational in `x`.
#[derive(Clone, Debug)]
pub struct FormalConnection {
    dimension: usize,
    alphabet: Arc<Alphabet>,
    summands: Vec<Element>,
    coefficients: Coefficients,
    domain: Domain,
}

/// Flatness defect `∂Γ_i/∂x_j − ∂Γ_j/∂x_i + [Γ_i, Γ_j]` at a point; the bracket
/// carries the λ and sits in word length 2.
#[derive(Clone, Debug)]
pub struct CurvatureSample {
    pub point: Vec<C64>,
    pub i: usize,
    pub j: usize,
    pub value: Element,
}

impl FormalConnection {
    pub fn from_poles(
        dimension: usize,
        alphabet: Arc<Alphabet>,
        summands: Vec<Element>,
        poles: Vec<PoleTerm>,
        domain: Domain,
    ) -> Result<Self, GeometryError> {
        if poles.iter().any(|p| p.component >= dimension || p.summand >= summands.len() || p.form.len() != dimension) {
            return Err(GeometryError::DimensionMismatch);
        }
        Ok(FormalConnection { dimension, alphabet, summands, coefficients: Coefficients::Poles(poles), domain })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn summands(&self) -> &[Element] {
        &self.summands
    }

    pub fn is_admissible(&self, x: &[C64]) -> bool {
        if x.len() != self.dimension || x.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return false;
        }
        match &self.coefficients {
            Coefficients::Pullback { base, map } => base.is_admissible(&map.apply(x)),
            Coefficients::Poles(poles) => {
                let real = x.iter().all(|v| v.im == 0.0);
                let in_domain = match self.domain {
                    Domain::UnitInterval => real && x[0].re > 0.0 && x[0].re < 1.0,
                    Domain::Triangle => real && 0.0 < x[0].re && x[0].re < x[1].re && x[1].re < 1.0,
                    Domain::PuncturedPlane => x[0] != C64::new(0.0, 0.0) && x[0] != C64::new(1.0, 0.0),
                    Domain::Configuration => (0..x.len()).all(|i| (i + 1..x.len()).all(|j| x[i] != x[j])),
                };
                in_domain && poles.iter().all(|p| p.denominator(x) != C64::new(0.0, 0.0))
            }
        }
    }

    /// `g[i][k]`, the coefficient of `E_k` in `Γ_i(x)`.
    pub fn coefficient_matrix(&self, x: &[C64]) -> Vec<Vec<C64>> {
        let zero = C64::new(0.0, 0.0);
        match &self.coefficients {
            Coefficients::Poles(poles) => {
                let mut g = vec![vec![zero; self.summands.len()]; self.dimension];
                for p in poles {
                    g[p.component][p.summand] += p.coefficient / p.denominator(x);
                }
                g
            }
            Coefficients::Pullback { base, map } => {
                let y = map.apply(x);
                let b = base.coefficient_matrix(&y);
                let jac = map.jacobian(x);
                let mut g = vec![vec![zero; self.summands.len()]; self.dimension];
                for (j, gj) in g.iter_mut().enumerate() {
                    for (i, bi) in b.iter().enumerate() {
                        for (k, v) in gj.iter_mut().enumerate() {
                            *v += bi[k] * jac[i][j];
                        }
                    }
                }
                g
            }
        }
    }

    /// `p[i][j][k] = ∂g_ik/∂x_j`.
    pub fn partial_matrix(&self, x: &[C64]) -> Vec<Vec<Vec<C64>>> {
        let zero = C64::new(0.0, 0.0);
        let (m, n) = (self.dimension, self.summands.len());
        let mut out = vec![vec![vec![zero; n]; m]; m];
        match &self.coefficients {
            Coefficients::Poles(poles) => {
                for p in poles {
                    let d = p.denominator(x);
                    let base = -p.coefficient / (d * d);
                    for (j, w) in p.form.iter().enumerate() {
                        out[p.component][j][p.summand] += base * w;
                    }
                }
            }
            Coefficients::Pullback { base, map } => {
                let y = map.apply(x);
                let b = base.coefficient_matrix(&y);
                let pb = base.partial_matrix(&y);
                let jac = map.jacobian(x);
                let hess = map.hessian(x);
                let mb = base.dimension;
                for j in 0..m {
                    for l in 0..m {
                        for k in 0..n {
                            let mut acc = zero;
                            for i in 0..mb {
                                for (q, row) in jac.iter().enumerate() {
                                    acc += pb[i][q][k] * row[l] * jac[i][j];
                                }
                                acc += b[i][k] * hess[i][j][l];
                            }
                            out[j][l][k] = acc;
                        }
                    }
                }
            }
        }
        out
    }

    fn combine(&self, coeffs: &[C64]) -> Element {
        let mut out = AlgebraElement::zero();
        for (c, e) in coeffs.iter().zip(&self.summands) {
            out.add_scaled(e, c);
        }
        out
    }

    /// `Γ_i(x)` for every `i`.
    pub fn components(&self, x: &[C64]) -> Result<Vec<Element>, GeometryError> {
        self.require_admissible(x)?;
        Ok(self.coefficient_matrix(x).iter().map(|g| self.combine(g)).collect())
    }

    /// `∂Γ_i/∂x_j`.
    pub fn partial(&self, x: &[C64], i: usize, j: usize) -> Result<Element, GeometryError> {
        self.require_admissible(x)?;
        if i >= self.dimension || j >= self.dimension {
            return Err(GeometryError::DimensionMismatch);
        }
        Ok(self.combine(&self.partial_matrix(x)[i][j]))
    }

    fn require_admissible(&self, x: &[C64]) -> Result<(), GeometryError> {
        if self.is_admissible(x) {
            Ok(())
        } else {
            Err(GeometryError::Inadmissible(x.to_vec()))
        }
    }

    /// `Θ*Γ` for a map `Θ` into this connection's coordinates.
    pub fn pull_back(self: &Arc<Self>, map: Arc<dyn PointMap>) -> Result<FormalConnection, GeometryError> {
        if map.target_dimension() != self.dimension {
            return Err(GeometryError::DimensionMismatch);
        }
        Ok(FormalConnection {
            dimension: map.source_dimension(),
            alphabet: self.alphabet.clone(),
            summands: self.summands.clone(),
            coefficients: Coefficients::Pullback { base: self.clone(), map },
            domain: self.domain,
        })
    }

    /// Same coefficient functions with summands mapped by an algebra morphism.
    pub fn substitute(&self, images: &Substitution<C64>) -> Result<FormalConnection, GeometryError> {
        let summands = self.summands.iter().map(|e| images.apply(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(FormalConnection { summands, alphabet: images.target().clone(), ..self.clone() })
    }

    /// `f_k(s) = Σ_i g_ik(c(s)) c_i'(s)` on each smooth piece of `c`.
    pub fn pull_back_to_path(self: &Arc<Self>, c: &PiecewisePath) -> Result<PulledBackField, GeometryError> {
        if c.dimension() != self.dimension {
            return Err(GeometryError::DimensionMismatch);
        }
        let mut pieces = Vec::with_capacity(c.pieces().len());
        for piece in c.pieces() {
            for j in 0..=64 {
                let s = piece.s0 + (piece.s1 - piece.s0) * j as f64 / 64.0;
                let x = piece.value(s);
                if !self.is_admissible(&x) {
                    return Err(GeometryError::Inadmissible(x));
                }
            }
            let conn = self.clone();
            let (s0, s1) = (piece.s0, piece.s1);
            let piece = piece.clone();
            let sampler = move |s: f64, out: &mut [C64]| {
                let x = piece.value(s);
                let dx = piece.derivative(s);
                let g = conn.coefficient_matrix(&x);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = g.iter().zip(&dx).map(|(gi, d)| gi[k] * d).sum();
                }
            };
            pieces.push(FieldPiece { s0, s1, sampler: Arc::new(sampler) });
        }
        Ok(PulledBackField::new(self.alphabet.clone(), self.summands.clone(), pieces)?)
    }
}

pub fn curvature(conn: &FormalConnection, x: &[C64], i: usize, j: usize) -> Result<CurvatureSample, GeometryError> {
    let comps = conn.components(x)?;
    if i >= conn.dimension() || j >= conn.dimension() {
        return Err(GeometryError::DimensionMismatch);
    }
    let mut value = &conn.partial(x, i, j)? - &conn.partial(x, j, i)?;
    value.add_scaled(&comps[i].commutator(&comps[j]), &C64::new(1.0, 0.0));
    value.prune_relative(1e-15);
    Ok(CurvatureSample { point: x.to_vec(), i, j, value })
}

/// Largest residual modulo the reducer's ideal of all curvature components at the given points.
pub fn flatness_residual(
    conn: &FormalConnection,
    points: &[Vec<C64>],
    reducer: &mut IdealReducer,
) -> Result<f64, GeometryError> {
    let mut worst = 0.0f64;
    for x in points {
        for i in 0..conn.dimension() {
            for j in i + 1..conn.dimension() {
                let sample = curvature(conn, x, i, j)?;
                let reduced = reducer.reduce_element(&sample.value)?;
                worst = worst.max(reduced.sup_norm());
            }
        }
    }
    Ok(worst)
}

/// Images `A_ij` of the generators `t_ij`, keyed by canonical `(i, j)`, `i < j`.
#[derive(Clone, Debug)]
pub struct PairImages {
    n: usize,
    alphabet: Arc<Alphabet>,
    images: BTreeMap<(usize, usize), Element>,
}

impl PairImages {
    pub fn new(n: usize, alphabet: Arc<Alphabet>) -> Self {
        PairImages { n, alphabet, images: BTreeMap::new() }
    }

    /// `t_ij ↦ t_ij` in `𝒯_n` itself.
    pub fn generators(p: &BraidPresentation) -> Self {
        let mut out = Self::new(p.n(), p.alphabet().clone());
        for id in 0..p.alphabet().len() {
            let (i, j) = p.pair(id as u8);
            out.images.insert((i, j), AlgebraElement::generator(id as u8));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn set(&mut self, i: usize, j: usize, image: Element) -> Result<&mut Self, GeometryError> {
        let key = if i < j { (i, j) } else { (j, i) };
        if key.0 == key.1 || key.0 == 0 || key.1 > self.n {
            return Err(GeometryError::BadPair(i, j));
        }
        self.images.insert(key, image);
        Ok(self)
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&Element, GeometryError> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.images.get(&key).ok_or(GeometryError::BadPair(i, j))
    }

    /// The morphism `𝒯_n → 𝒜` these images define.
    pub fn substitution(&self, p: &BraidPresentation) -> Result<Substitution<C64>, GeometryError> {
        let mut out = Substitution::new(p.alphabet().clone(), self.alphabet.clone());
        for id in 0..p.alphabet().len() {
            let (i, j) = p.pair(id as u8);
            out.set(id as u8, self.get(i, j)?.clone());
        }
        Ok(out)
    }
}

/// `Γ(B,A) = (A/x + B/(x−1)) dx` on `]0, 1[`.
pub fn interval_connection(a: &Element, b: &Element, alphabet: Arc<Alphabet>) -> FormalConnection {
    two_pole(a, b, alphabet, Domain::UnitInterval)
}

/// `Γ(B,A) = (A/z + B/(z−1)) dz` on `ℂ ∖ {0, 1}`.
pub fn punctured_plane_connection(a: &Element, b: &Element, alphabet: Arc<Alphabet>) -> FormalConnection {
    two_pole(a, b, alphabet, Domain::PuncturedPlane)
}

fn two_pole(a: &Element, b: &Element, alphabet: Arc<Alphabet>, domain: Domain) -> FormalConnection {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let poles = vec![
        PoleTerm { component: 0, summand: 0, coefficient: one, form: vec![one], offset: zero },
        PoleTerm { component: 0, summand: 1, coefficient: one, form: vec![one], offset: one },
    ];
    FormalConnection::from_poles(1, alphabet, vec![a.clone(), b.clone()], poles, domain)
        .expect("consistent by construction")
}

/// `Σ_{i<j} A_ij (dz_i − dz_j)/(z_i − z_j)` on the configuration space of `n` points.
pub fn kz_connection(images: &PairImages) -> Result<FormalConnection, GeometryError> {
    let n = images.n();
    if n < 2 {
        return Err(GeometryError::TooFewStrands(n));
    }
    let zero = C64::new(0.0, 0.0);
    let mut summands = Vec::new();
    let mut poles = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let k = summands.len();
            summands.push(images.get(i, j)?.clone());
            let mut form = vec![zero; n];
            form[i - 1] = C64::new(1.0, 0.0);
            form[j - 1] = C64::new(-1.0, 0.0);
            for (component, sign) in [(i - 1, 1.0), (j - 1, -1.0)] {
                poles.push(PoleTerm {
                    component,
                    summand: k,
                    coefficient: C64::new(sign, 0.0),
                    form: form.clone(),
                    offset: zero,
                });
            }
        }
    }
    FormalConnection::from_poles(n, images.alphabet().clone(), summands, poles, Domain::Configuration)
}

/// KZ connection for four points restricted to `(0, x₂, x₃, 1)`; `A₁₄` does not enter.
pub fn pentagon_connection(images: &PairImages) -> Result<FormalConnection, GeometryError> {
    if images.n() != 4 {
        return Err(GeometryError::BadPair(images.n(), 4));
    }
    let c = |re: f64| C64::new(re, 0.0);
    let summands = vec![
        images.get(1, 2)?.clone(),
        images.get(2, 3)?.clone(),
        images.get(2, 4)?.clone(),
        images.get(1, 3)?.clone(),
        images.get(3, 4)?.clone(),
    ];
    let term = |component, summand, coefficient: f64, form: [f64; 2], offset: f64| PoleTerm {
        component,
        summand,
        coefficient: c(coefficient),
        form: vec![c(form[0]), c(form[1])],
        offset: c(offset),
    };
    let poles = vec![
        term(0, 0, 1.0, [1.0, 0.0], 0.0),
        term(0, 1, 1.0, [1.0, -1.0], 0.0),
        term(0, 2, 1.0, [1.0, 0.0], 1.0),
        term(1, 3, 1.0, [0.0, 1.0], 0.0),
        term(1, 1, -1.0, [1.0, -1.0], 0.0),
        term(1, 4, 1.0, [0.0, 1.0], 1.0),
    ];
    FormalConnection::from_poles(2, images.alphabet().clone(), summands, poles, Domain::Triangle)
}
