//! Dieudonné modules of BT₁ group schemes over `F_{p^m}`.
//!
//! `F` is stored as the matrix `Fmat` with `F(v) = Fmat · v^(p)` and `V` as
//! the matrix of the linear map into the Frobenius twist, so
//! `V(v) = (Vmat · v)^(1/p)`. Under these conventions the BT₁ axioms read
//! `Fmat·Vmat = Vmat·Fmat = 0`, `ker Fmat = col Vmat`, `ker Vmat = col Fmat`,
//! and a pairing `P` is compatible when `⟨Fx, y⟩ = ⟨x, Vy⟩^p`, i.e.
//! `Fmatᵀ · P = P^(p) · Vmat`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec, GaloisField};
use crate::linalg::{Matrix, Subspace};
use crate::parabolic::{max_admissible_j, sigma_of, weyl_from_sigma};
use crate::schubert::relpos_from_dims;
use crate::weyl::{SignedPermutation, SubsetJ};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DieudonneModule {
    field: Arc<GaloisField>,
    f: Matrix,
    v: Matrix,
    pairing: Option<Matrix>,
}

impl DieudonneModule {
    /// Checks shapes only; see [`check_bt1`] for the axioms.
    pub fn new(field: Arc<GaloisField>, f: Matrix, v: Matrix, pairing: Option<Matrix>) -> Result<Self> {
        let h = f.rows();
        let square = |m: &Matrix| m.rows() == h && m.cols() == h;
        if !square(&f) || !square(&v) || pairing.as_ref().is_some_and(|p| !square(p)) {
            return Err(Error::Dimension(format!("F, V and the pairing must all be {h}x{h}")));
        }
        let q = field.order();
        let in_field = |m: &Matrix| m.to_rows().iter().flatten().all(|&x| x < q);
        if !in_field(&f) || !in_field(&v) || pairing.as_ref().is_some_and(|p| !in_field(p)) {
            return Err(Error::Field("matrix entry outside the field".into()));
        }
        Ok(Self { field, f, v, pairing })
    }

    pub fn zero(field: Arc<GaloisField>) -> Self {
        Self {
            field,
            f: Matrix::zeros(0, 0),
            v: Matrix::zeros(0, 0),
            pairing: Some(Matrix::zeros(0, 0)),
        }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<GaloisField> {
        &self.field
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.f.rows()
    }

    pub fn f_matrix(&self) -> &Matrix {
        &self.f
    }

    pub fn v_matrix(&self) -> &Matrix {
        &self.v
    }

    pub fn pairing(&self) -> Option<&Matrix> {
        self.pairing.as_ref()
    }

    pub fn with_pairing(mut self, pairing: Option<Matrix>) -> Result<Self> {
        if let Some(p) = &pairing {
            if p.rows() != self.height() || p.cols() != self.height() {
                return Err(Error::Dimension("pairing has the wrong size".into()));
            }
        }
        self.pairing = pairing;
        Ok(self)
    }

    /// `F(U) = Fmat · U^(p)`.
    pub fn apply_f(&self, u: &Subspace) -> Subspace {
        u.frobenius(&self.field).image(&self.field, &self.f)
    }

    /// `V⁻¹(U) = { v : Vmat · v ∈ U^(p) }`.
    pub fn v_inverse(&self, u: &Subspace) -> Subspace {
        u.frobenius(&self.field).preimage(&self.field, &self.v)
    }

    pub fn image_f(&self) -> Subspace {
        Subspace::span(&self.field, self.f.transpose())
    }

    pub fn kernel_f(&self) -> Subspace {
        // ker F is the (1/p)-twist of ker Fmat
        Subspace::span(&self.field, self.f.nullspace(&self.field)).frobenius_inv(&self.field)
    }

    pub fn to_json(&self) -> ModuleFile {
        let m = self.field.degree();
        let entry = |x: Elem| {
            if m == 1 {
                Entry::Int(x as u64)
            } else {
                Entry::Poly(self.field.coefficients(x).into_iter().map(u64::from).collect())
            }
        };
        let conv = |mat: &Matrix| -> Vec<Vec<Entry>> {
            mat.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(entry).collect())
                .collect()
        };
        let spec = self.field.spec();
        ModuleFile {
            p: spec.p,
            m: spec.m,
            modulus: spec.modulus,
            h: self.height(),
            f: conv(&self.f),
            v: conv(&self.v),
            pairing: self.pairing.as_ref().map(conv),
        }
    }
}

/// A matrix entry in a module file: an integer mod `p` when `m = 1`, else the
/// coefficient vector of length `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(u64),
    Poly(Vec<u64>),
}

/// `{"p", "m", "modulus"?, "h", "F", "V", "pairing"?}`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub p: u64,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    pub h: usize,
    #[serde(rename = "F")]
    pub f: Vec<Vec<Entry>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<Vec<Entry>>>,
}

fn one() -> u32 {
    1
}

impl ModuleFile {
    pub fn into_module(&self) -> Result<DieudonneModule> {
        let spec = FieldSpec {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
        };
        let field = spec.build()?;
        let h = self.h;
        let conv = |name: &str, rows: &[Vec<Entry>]| -> Result<Matrix> {
            if rows.len() != h || rows.iter().any(|r| r.len() != h) {
                return Err(Error::Dimension(format!("{name} must be {h}x{h}")));
            }
            let data = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| match e {
                            Entry::Int(x) if field.degree() == 1 => field.from_coefficients(&[*x]),
                            Entry::Int(x) => Err(Error::Field(format!(
                                "entry {x} in {name} must be a coefficient vector of length {}",
                                field.degree()
                            ))),
                            Entry::Poly(c) => field.from_coefficients(c),
                        })
                        .collect::<Result<Vec<Elem>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_rows(h, &data))
        };
        let f = conv("F", &self.f)?;
        let v = conv("V", &self.v)?;
        let pairing = self.pairing.as_deref().map(|p| conv("pairing", p)).transpose()?;
        DieudonneModule::new(field, f, v, pairing)
    }
}

/// Checks the BT₁ axioms (and the pairing axioms when a pairing is present),
/// naming the first one that fails.
pub fn check_bt1(d: &DieudonneModule) -> Result<()> {
    let f = &*d.field;
    let fail = |msg: &str| Err(Error::NotBt1(msg.to_string()));
    if !d.f.mul(f, &d.v).is_zero() {
        return fail("F∘V ≠ 0");
    }
    if !d.v.mul(f, &d.f).is_zero() {
        return fail("V∘F ≠ 0");
    }
    let span_cols = |m: &Matrix| Subspace::span(f, m.transpose());
    let kernel = |m: &Matrix| Subspace::span(f, m.nullspace(f));
    if kernel(&d.f) != span_cols(&d.v) {
        return fail("ker F ≠ im V");
    }
    if kernel(&d.v) != span_cols(&d.f) {
        return fail("ker V ≠ im F");
    }
    if let Some(p) = &d.pairing {
        let h = d.height();
        let alternating = (0..h).all(|i| p[(i, i)] == 0 && (0..h).all(|j| p[(i, j)] == f.neg(p[(j, i)])));
        if !alternating {
            return fail("pairing is not alternating");
        }
        if p.rank(f) != h {
            return fail("pairing is degenerate");
        }
        if d.f.transpose().mul(f, p) != p.frobenius(f).mul(f, &d.v) {
            return fail("pairing is incompatible with F and V");
        }
    }
    Ok(())
}

pub fn validate_bt1(d: &DieudonneModule) -> bool {
    check_bt1(d).is_ok()
}

/// `0 = D_0 ⊂ D_1 ⊂ ... ⊂ D_{2c} = D` with `D_c = im F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalChain {
    pub subspaces: Vec<Subspace>,
    pub dims: Vec<usize>,
    /// `sigma(i)` at index `i - 1`.
    pub sigma: Vec<usize>,
    /// Rounds of the operator pair needed until the set stabilised.
    pub rounds: usize,
}

impl CanonicalChain {
    pub fn c(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn sigma(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// Whether `D_i^⊥ = D_{2c-i}` for the given pairing.
    pub fn is_self_dual(&self, field: &GaloisField, pairing: &Matrix) -> bool {
        let n = self.subspaces.len() - 1;
        (0..=n).all(|i| self.subspaces[i].perp(field, pairing) == self.subspaces[n - i])
    }

    /// `sigma(2c+1-i) = 2c+1-sigma(i)`.
    pub fn sigma_is_symmetric(&self) -> bool {
        let n = self.sigma.len();
        (1..=n).all(|i| self.sigma(n + 1 - i) == n + 1 - self.sigma(i))
    }
}

fn insert_comparable(chain: &mut Vec<Subspace>, f: &GaloisField, u: Subspace) -> Result<bool> {
    if chain.contains(&u) {
        return Ok(false);
    }
    for other in chain.iter() {
        if !(u.is_subspace_of(f, other) || other.is_subspace_of(f, &u)) {
            return Err(Error::Internal(format!(
                "canonical filtration produced incomparable subspaces of dims {} and {}",
                u.dim(),
                other.dim()
            )));
        }
    }
    let pos = chain.partition_point(|x| x.dim() < u.dim());
    chain.insert(pos, u);
    Ok(true)
}

/// The coarsest chain containing `im F` and stable under `U ↦ F(U^(p))` and
/// `U ↦ V⁻¹(U^(p))`, together with its block permutation.
pub fn canonical_filtration(d: &DieudonneModule) -> Result<CanonicalChain> {
    check_bt1(d)?;
    let f = &*d.field;
    let h = d.height();
    let mut chain = vec![Subspace::zero(h), Subspace::whole(h)];
    insert_comparable(&mut chain, f, d.image_f())?;
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for u in chain.clone() {
            changed |= insert_comparable(&mut chain, f, d.apply_f(&u))?;
            changed |= insert_comparable(&mut chain, f, d.v_inverse(&u))?;
        }
        if !changed {
            break;
        }
        rounds += 1;
        if rounds > h + 1 {
            return Err(Error::Internal("canonical filtration did not stabilise".into()));
        }
    }
    let dims: Vec<usize> = chain.iter().map(Subspace::dim).collect();
    let n = chain.len() - 1;
    let im_f = d.image_f();
    let c = chain
        .iter()
        .position(|u| *u == im_f)
        .ok_or_else(|| Error::Internal("im F missing from its own closure".into()))?;
    if n != 2 * c {
        return Err(Error::Internal(format!(
            "im F sits at position {c} of a chain of length {n}"
        )));
    }
    let mut sigma = Vec::with_capacity(n);
    for i in 1..=n {
        let matches = |j: usize| {
            if i <= c {
                d.apply_f(&chain[j]) == chain[i] && d.apply_f(&chain[j - 1]) == chain[i - 1]
            } else {
                d.v_inverse(&chain[j]) == chain[i] && d.v_inverse(&chain[j - 1]) == chain[i - 1]
            }
        };
        let j = (1..=n)
            .find(|&j| matches(j))
            .ok_or_else(|| Error::Internal(format!("no partner block for D_{i}/D_{}", i - 1)))?;
        sigma.push(j);
    }
    let mut seen = vec![false; n + 1];
    for (idx, &j) in sigma.iter().enumerate() {
        let i = idx + 1;
        if seen[j] || dims[j] - dims[j - 1] != dims[i] - dims[i - 1] {
            return Err(Error::Internal(format!("block map {sigma:?} is not size-preserving")));
        }
        seen[j] = true;
    }
    Ok(CanonicalChain {
        subspaces: chain,
        dims,
        sigma,
        rounds,
    })
}

/// `(w, J)` with `w ∈ W^I` the Ekedahl-Oort type of a quasi-polarized BT₁.
pub fn classify(d: &DieudonneModule) -> Result<(SignedPermutation, SubsetJ)> {
    check_bt1(d)?;
    let h = d.height();
    if h == 0 || !h.is_multiple_of(2) {
        return Err(Error::Dimension(format!("height {h} is not a positive even number")));
    }
    let pairing = d
        .pairing
        .as_ref()
        .ok_or_else(|| Error::NotBt1("classification needs a pairing".into()))?;
    let chain = canonical_filtration(d)?;
    if !chain.is_self_dual(&d.field, pairing) || !chain.sigma_is_symmetric() {
        return Err(Error::NotBt1("canonical filtration is not self-dual".into()));
    }
    let g = h / 2;
    let c = chain.c();
    if chain.dims[c] != g {
        return Err(Error::NotBt1(format!("rank of F is {}, expected {g}", chain.dims[c])));
    }
    let interior = &chain.dims[1..c];
    let members: Vec<usize> = (1..g).filter(|i| !interior.contains(i)).collect();
    let j = SubsetJ::new(g, &members)?;
    let w = weyl_from_sigma(g, &j, &chain.sigma)?;
    Ok((w, j))
}

/// The antidiagonal symplectic Gram matrix: `⟨e_a, e_{2g+1-a}⟩ = 1` for `a <= g`.
pub fn standard_pairing(field: &GaloisField, g: usize) -> Matrix {
    let n = 2 * g;
    let mut p = Matrix::zeros(n, n);
    for a in 0..g {
        p[(a, n - 1 - a)] = 1;
        p[(n - 1 - a, a)] = field.neg(1);
    }
    p
}

/// A module over `F_p` of type `w`: block `i` spans coordinates
/// `k_{i-1}+1 ..= k_i` for `J = J_w`; `F` carries block `σ(i)` identically onto
/// block `i` for `i <= c`, and `V` is the adjoint of `F` for the antidiagonal
/// pairing.
pub fn standard_module_for(w: &SignedPermutation, p: u64) -> Result<DieudonneModule> {
    let field = Arc::new(GaloisField::prime(p)?);
    let j = max_admissible_j(w)?;
    let pair = sigma_of(w, &j)?;
    let g = w.rank();
    let k = &pair.datum.k;
    let n = 2 * g;
    let mut fm = Matrix::zeros(n, n);
    for i in 1..=pair.c() {
        let src = pair.sigma(i);
        for t in 0..k[i] - k[i - 1] {
            fm[(k[i - 1] + t, k[src - 1] + t)] = 1;
        }
    }
    let pm = standard_pairing(&field, g);
    let pinv = pm.inverse(&field).expect("antidiagonal form is invertible");
    let vm = pinv.mul(&field, &fm.transpose()).mul(&field, &pm);
    DieudonneModule::new(field, fm, vm, Some(pm))
}

pub fn direct_sum(a: &DieudonneModule, b: &DieudonneModule) -> Result<DieudonneModule> {
    if a.field != b.field {
        return Err(Error::Field("summands live over different fields".into()));
    }
    let pairing = match (&a.pairing, &b.pairing) {
        (Some(x), Some(y)) => Some(Matrix::block_diagonal(x, y)),
        _ => None,
    };
    DieudonneModule::new(
        a.field.clone(),
        Matrix::block_diagonal(&a.f, &b.f),
        Matrix::block_diagonal(&a.v, &b.v),
        pairing,
    )
}

/// `μ_p^t`: `F = 0`, `V = id`.
pub fn module_multiplicative(field: Arc<GaloisField>, t: usize) -> DieudonneModule {
    DieudonneModule {
        field,
        f: Matrix::zeros(t, t),
        v: Matrix::identity(t),
        pairing: None,
    }
}

/// `(Z/p)^t`: `F = id`, `V = 0`.
pub fn module_etale(field: Arc<GaloisField>, t: usize) -> DieudonneModule {
    DieudonneModule {
        field,
        f: Matrix::identity(t),
        v: Matrix::zeros(t, t),
        pairing: None,
    }
}

/// `μ_p^t ⊕ (Z/p)^t` with the multiplicative and étale halves put in duality.
pub fn ordinary_dual_pair(field: Arc<GaloisField>, t: usize) -> DieudonneModule {
    let mut sum = direct_sum(&module_etale(field.clone(), t), &module_multiplicative(field.clone(), t))
        .expect("same field");
    let mut p = Matrix::zeros(2 * t, 2 * t);
    for a in 0..t {
        p[(a, t + a)] = 1;
        p[(t + a, a)] = field.neg(1);
    }
    sum.pairing = Some(p);
    sum
}

/// `ι_C(w′)`: the type of `standard_module_for(w′) ⊕ μ_p^t ⊕ (Z/p)^t`, with
/// `None` standing for the rank-zero abelian part.
pub fn iota_cusp(wprime: Option<&SignedPermutation>, t: usize) -> Result<SignedPermutation> {
    const P: u64 = 2;
    let field = Arc::new(GaloisField::prime(P)?);
    let torus = ordinary_dual_pair(field.clone(), t);
    let total = match wprime {
        Some(w) => direct_sum(&standard_module_for(w, P)?, &torus)?,
        None => torus,
    };
    Ok(classify(&total)?.0)
}

/// The same matrices viewed over `F_{p^{m l}}`, built from `modulus` or the
/// default modulus of that degree.
pub fn extend_scalars(d: &DieudonneModule, l: u32, modulus: Option<&[u32]>) -> Result<DieudonneModule> {
    if l == 0 {
        return Err(Error::Field("extension degree must be positive".into()));
    }
    if l == 1 && modulus.is_none() {
        return Ok(d.clone());
    }
    let target = GaloisField::new(d.field.characteristic() as u64, d.field.degree() * l, modulus)?;
    let emb = d.field.embedding_into(&target)?;
    let lift = |m: &Matrix| m.map(|x| emb[x as usize]);
    Ok(DieudonneModule {
        f: lift(&d.f),
        v: lift(&d.v),
        pairing: d.pairing.as_ref().map(lift),
        field: Arc::new(target),
    })
}

/// Relative position of the kernel flag `0 ⊂ ker F ⊂ D` (type `I`) with
/// respect to the canonical chain (type `J`): an element of `^J W^I`.
pub fn kernel_relpos(d: &DieudonneModule, chain: &CanonicalChain) -> Result<SignedPermutation> {
    let h = d.height();
    if !h.is_multiple_of(2) || h == 0 {
        return Err(Error::Dimension(format!("height {h} is not a positive even number")));
    }
    let g = h / 2;
    let f = &*d.field;
    let c = chain.c();
    let interior = &chain.dims[1..c];
    let members: Vec<usize> = (1..g).filter(|i| !interior.contains(i)).collect();
    let j = SubsetJ::new(g, &members)?;
    let rows = [Subspace::zero(h), d.kernel_f(), Subspace::whole(h)];
    let dims: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| chain.subspaces.iter().map(|s| r.intersection_dim(f, s)).collect())
        .collect();
    relpos_from_dims(g, &j, &SubsetJ::full(g), &dims)
}

/// `d_τ + d_{τ*} = h_{[τ]}` for every embedding `τ`, where the orbit `[τ]` is
/// keyed by `min(τ, τ*)`. Returns `false` if `star` is not an involution.
pub fn validate_modp_pel_datum(h: &BTreeMap<usize, i64>, d: &[i64], star: &[usize]) -> bool {
    if star.len() != d.len() || star.iter().any(|&s| s >= star.len()) {
        return false;
    }
    (0..star.len()).all(|t| {
        let ts = star[t];
        star[ts] == t && h.get(&t.min(ts)).is_some_and(|&ht| d[t] + d[ts] == ht)
    })
}
