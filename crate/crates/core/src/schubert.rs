//! Symplectic flags in `F_p^{2g}` and the Schubert cells `Y_w`, `Ȳ_w` of the
//! flag variety of type `J~`, cut out by intersection dimensions with the
//! standard flag `E_j = ⟨e_1, ..., e_{k_j}⟩`.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::linalg::{Matrix, Subspace};
use crate::parabolic::AdmissiblePair;
use crate::weyl::{double_coset, SignedPermutation, SubsetJ};

/// `V = F_p^{2g}` with `ψ(e_i, e_{2g+1-j}) = δ_ij` for `1 <= i, j <= g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    g: usize,
    field: Arc<GaloisField>,
    form: Matrix,
}

impl SymplecticSpace {
    pub fn new(g: usize, p: u64) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidFlag("rank must be positive".into()));
        }
        let field = Arc::new(GaloisField::prime(p)?);
        let n = 2 * g;
        let mut form = Matrix::zeros(n, n);
        let minus_one = field.neg(1);
        for i in 0..g {
            form[(i, n - 1 - i)] = 1;
            form[(n - 1 - i, i)] = minus_one;
        }
        Ok(Self { g, field, form })
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic() as u64
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn pairing(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &*self.field;
        let pv = self.form.apply(f, v);
        u.iter().zip(&pv).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub fn is_isotropic(&self, u: &Subspace) -> bool {
        u.is_subspace_of(&self.field, &self.perp(u))
    }

    pub fn perp(&self, u: &Subspace) -> Subspace {
        u.perp(&self.field, &self.form)
    }
}

/// `U^⊥` with respect to `ψ`.
pub fn perp(space: &SymplecticSpace, u: &Subspace) -> Subspace {
    space.perp(u)
}

/// An isotropic flag `F_1 ⊂ ... ⊂ F_c` with `dim F_i = k~_i` (the jumps of
/// its type); the upper half is `F_{2c-i} = F_i^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticFlag {
    space: SymplecticSpace,
    flag_type: SubsetJ,
    subspaces: Vec<Subspace>,
}

impl SymplecticFlag {
    pub fn new(space: &SymplecticSpace, flag_type: SubsetJ, subspaces: Vec<Subspace>) -> Result<Self> {
        if flag_type.rank() != space.rank() {
            return Err(Error::RankMismatch(space.rank(), flag_type.rank()));
        }
        let jumps = flag_type.jumps();
        let c = (jumps.len() - 1) / 2;
        if subspaces.len() != c {
            return Err(Error::InvalidFlag(format!(
                "expected {c} subspaces for type {flag_type:?}, found {}",
                subspaces.len()
            )));
        }
        let f = space.field();
        let mut prev = Subspace::zero(space.dim());
        for (i, u) in subspaces.iter().enumerate() {
            if u.ambient_dim() != space.dim() {
                return Err(Error::InvalidFlag(format!("F_{} has wrong ambient dimension", i + 1)));
            }
            if u.dim() != jumps[i + 1] {
                return Err(Error::InvalidFlag(format!(
                    "dim F_{} = {}, expected {}",
                    i + 1,
                    u.dim(),
                    jumps[i + 1]
                )));
            }
            if !prev.is_subspace_of(f, u) {
                return Err(Error::InvalidFlag(format!("F_{} does not contain F_{}", i + 1, i)));
            }
            prev = u.clone();
        }
        if !space.is_isotropic(&prev) {
            return Err(Error::InvalidFlag("F_c is not isotropic".into()));
        }
        Ok(Self {
            space: space.clone(),
            flag_type,
            subspaces,
        })
    }

    /// The standard flag `E_i = ⟨e_1, ..., e_{k_i}⟩` of type `J`.
    pub fn standard(space: &SymplecticSpace, j: &SubsetJ) -> Result<Self> {
        let n = space.dim();
        let jumps = j.jumps();
        let c = (jumps.len() - 1) / 2;
        let subs = (1..=c).map(|i| Subspace::coordinate(n, jumps[i])).collect();
        Self::new(space, *j, subs)
    }

    /// `w Ẽ`: `F_i = ⟨e_{w(1)}, ..., e_{w(k_i)}⟩` for the jumps of `flag_type`.
    pub fn translated(space: &SymplecticSpace, w: &SignedPermutation, flag_type: &SubsetJ) -> Result<Self> {
        if w.rank() != space.rank() {
            return Err(Error::RankMismatch(space.rank(), w.rank()));
        }
        let n = space.dim();
        let jumps = flag_type.jumps();
        let c = (jumps.len() - 1) / 2;
        let subs = (1..=c)
            .map(|i| {
                let rows: Vec<Vec<Elem>> = (1..=jumps[i])
                    .map(|a| {
                        let mut v = vec![0; n];
                        v[w.apply(a) - 1] = 1;
                        v
                    })
                    .collect();
                Subspace::from_rows(space.field(), n, &rows)
            })
            .collect();
        Self::new(space, *flag_type, subs)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn flag_type(&self) -> &SubsetJ {
        &self.flag_type
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// `F_0, ..., F_{2c}` with the upper half filled in by `⊥`.
    pub fn full_chain(&self) -> Vec<Subspace> {
        let c = self.subspaces.len();
        let n = self.space.dim();
        let mut chain = Vec::with_capacity(2 * c + 1);
        chain.push(Subspace::zero(n));
        chain.extend(self.subspaces.iter().cloned());
        for i in (0..c).rev() {
            chain.push(self.space.perp(&chain[i]));
        }
        chain
    }

    pub fn to_json(&self) -> FlagFile {
        FlagFile {
            p: self.space.p(),
            g: self.space.rank(),
            jtilde: self.flag_type.members(),
            subspaces: self
                .subspaces
                .iter()
                .map(|u| {
                    let b = u.basis();
                    (0..b.rows()).map(|r| b.row(r).iter().map(|&v| v as u64).collect()).collect()
                })
                .collect(),
        }
    }
}

/// Wire format: `{"p", "g", "Jtilde", "subspaces": [[rows of F_1], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagFile {
    pub p: u64,
    pub g: usize,
    #[serde(rename = "Jtilde")]
    pub jtilde: Vec<usize>,
    pub subspaces: Vec<Vec<Vec<u64>>>,
}

impl FlagFile {
    pub fn into_flag(&self) -> Result<SymplecticFlag> {
        let space = SymplecticSpace::new(self.g, self.p)?;
        let flag_type = SubsetJ::new(self.g, &self.jtilde)?;
        let n = space.dim();
        let subs = self
            .subspaces
            .iter()
            .map(|rows| {
                let rows = rows
                    .iter()
                    .map(|r| {
                        if r.len() != n {
                            return Err(Error::InvalidFlag(format!(
                                "row {r:?} does not have {n} entries"
                            )));
                        }
                        if let Some(&bad) = r.iter().find(|&&v| v >= self.p) {
                            return Err(Error::InvalidFlag(format!(
                                "entry {bad} is not in 0..{}",
                                self.p
                            )));
                        }
                        Ok(r.iter().map(|&v| v as Elem).collect())
                    })
                    .collect::<Result<Vec<Vec<Elem>>>>()?;
                Ok(Subspace::from_rows(space.field(), n, &rows))
            })
            .collect::<Result<Vec<_>>>()?;
        SymplecticFlag::new(&space, flag_type, subs)
    }
}

/// `#(w{1, ..., r_i} ∩ {1, ..., s_j})` for row jumps `r` and column jumps `s`.
pub fn position_counts(w: &SignedPermutation, rows: &[usize], cols: &[usize]) -> Vec<Vec<usize>> {
    rows.iter()
        .map(|&r| {
            cols.iter()
                .map(|&s| (1..=r).filter(|&a| w.apply(a) <= s).count())
                .collect()
        })
        .collect()
}

fn require_double_min(w: &SignedPermutation, j: &SubsetJ) -> Result<()> {
    if w.rank() != j.rank() {
        return Err(Error::RankMismatch(w.rank(), j.rank()));
    }
    if !(w.is_min_left(j) && w.is_min_right(&j.tilde())) {
        return Err(Error::NotMinimalRepresentative {
            w: w.images(),
            which: "^J W^J~",
        });
    }
    Ok(())
}

/// `d_w(i, j) = #(w{1..k~_i} ∩ {1..k_j})` for `0 <= i, j <= 2c`.
pub fn schubert_dims(w: &SignedPermutation, j: &SubsetJ) -> Result<Vec<Vec<usize>>> {
    require_double_min(w, j)?;
    Ok(position_counts(w, &j.tilde().jumps(), &j.jumps()))
}

/// `d_w^B(i, j) = #(w{1..k~_i} ∩ {1..j})` for `0 <= i <= 2c`, `0 <= j <= 2g`.
pub fn schubert_dims_borel(w: &SignedPermutation, j: &SubsetJ) -> Result<Vec<Vec<usize>>> {
    if !w.is_min_right(&j.tilde()) {
        return Err(Error::NotMinimalRepresentative {
            w: w.images(),
            which: "W^J~",
        });
    }
    let cols: Vec<usize> = (0..=w.degree()).collect();
    Ok(position_counts(w, &j.tilde().jumps(), &cols))
}

/// `dim(B_i ∩ A_j)` over the full chains of two flags.
pub fn intersection_matrix(rows: &SymplecticFlag, cols: &SymplecticFlag) -> Vec<Vec<usize>> {
    let f = rows.space.field();
    let (rc, cc) = (rows.full_chain(), cols.full_chain());
    rc.iter()
        .map(|b| cc.iter().map(|a| b.intersection_dim(f, a)).collect())
        .collect()
}

/// Rows indexed by the flag, columns by the reference flag.
pub type DimMatrix = Vec<Vec<usize>>;

fn cell_matrices(
    flag: &SymplecticFlag,
    w: &SignedPermutation,
    j: &SubsetJ,
) -> Result<(DimMatrix, DimMatrix)> {
    if flag.flag_type != j.tilde() {
        return Err(Error::InvalidFlag(format!(
            "flag has type {:?}, expected J~ = {:?}",
            flag.flag_type,
            j.tilde()
        )));
    }
    let expected = schubert_dims(w, j)?;
    let standard = SymplecticFlag::standard(&flag.space, j)?;
    Ok((intersection_matrix(flag, &standard), expected))
}

/// `(F_i) ∈ Y_w` iff `dim(F_i ∩ E_j) = d_w(i, j)` for all `0 <= i, j <= 2c`.
pub fn in_open_cell(flag: &SymplecticFlag, w: &SignedPermutation, j: &SubsetJ) -> Result<bool> {
    let (actual, expected) = cell_matrices(flag, w, j)?;
    Ok(actual == expected)
}

/// `(F_i) ∈ Ȳ_w` iff `dim(F_i ∩ E_j) >= d_w(i, j)` for all `i, j`.
pub fn in_closed_cell(flag: &SymplecticFlag, w: &SignedPermutation, j: &SubsetJ) -> Result<bool> {
    let (actual, expected) = cell_matrices(flag, w, j)?;
    Ok(actual
        .iter()
        .flatten()
        .zip(expected.iter().flatten())
        .all(|(a, e)| a >= e))
}

/// For admissible `(w, J)`: `F_i ⊆ E_{τ(i)}` for `i = 1..c`.
pub fn admissible_closed_test(flag: &SymplecticFlag, pair: &AdmissiblePair) -> Result<bool> {
    if flag.flag_type != pair.datum.jtilde {
        return Err(Error::InvalidFlag(format!(
            "flag has type {:?}, expected J~ = {:?}",
            flag.flag_type, pair.datum.jtilde
        )));
    }
    Ok(flag.subspaces.iter().enumerate().all(|(idx, u)| {
        let bound = pair.datum.k[pair.tau(idx + 1)];
        let b = u.basis();
        (0..b.rows()).all(|r| b.row(r)[bound..].iter().all(|&v| v == 0))
    }))
}

/// The unique `w ∈ ^J W^K` (`J` the type of `cols`, `K` of `rows`) whose
/// position counts equal `dims[i][j] = dim(row_i ∩ col_j)`.
pub fn relpos_from_dims(
    g: usize,
    col_type: &SubsetJ,
    row_type: &SubsetJ,
    dims: &[Vec<usize>],
) -> Result<SignedPermutation> {
    let (rows, cols) = (row_type.jumps(), col_type.jumps());
    let bad = || Error::InvalidFlag("dimension matrix matches no minimal representative".into());
    if dims.len() != rows.len() || dims.iter().any(|r| r.len() != cols.len()) {
        return Err(Error::Dimension(format!(
            "expected a {}x{} matrix",
            rows.len(),
            cols.len()
        )));
    }
    // block counts: how many values of column block j land in row block i
    let mut per_row: Vec<Vec<usize>> = vec![Vec::new(); rows.len()];
    for j in 1..cols.len() {
        let mut next = cols[j - 1] + 1;
        for i in 1..rows.len() {
            let n = (dims[i][j] + dims[i - 1][j - 1])
                .checked_sub(dims[i - 1][j] + dims[i][j - 1])
                .ok_or_else(bad)?;
            for _ in 0..n {
                if next > cols[j] {
                    return Err(bad());
                }
                per_row[i].push(next);
                next += 1;
            }
        }
        if next != cols[j] + 1 {
            return Err(bad());
        }
    }
    let mut images = vec![0usize; 2 * g];
    for i in 1..rows.len() {
        let vals = &mut per_row[i];
        if vals.len() != rows[i] - rows[i - 1] {
            return Err(bad());
        }
        vals.sort_unstable();
        for (offset, &v) in vals.iter().enumerate() {
            images[rows[i - 1] + offset] = v;
        }
    }
    let w = SignedPermutation::new(&images).map_err(|_| bad())?;
    if !(w.is_min_left(col_type) && w.is_min_right(row_type)) || position_counts(&w, &rows, &cols) != dims {
        return Err(bad());
    }
    Ok(w)
}

/// Relative position of `flag_b` (rows) with respect to `flag_a` (columns).
/// With `flag_a` of type `J` and `flag_b` of type `J~` this is the unique
/// `w ∈ ^J W^J~` with `dim(flag_b_i ∩ flag_a_j) = d_w(i, j)`.
pub fn relpos(flag_a: &SymplecticFlag, flag_b: &SymplecticFlag) -> Result<SignedPermutation> {
    if flag_a.space != flag_b.space {
        return Err(Error::InvalidFlag("flags live in different spaces".into()));
    }
    let dims = intersection_matrix(flag_b, flag_a);
    relpos_from_dims(flag_a.space.rank(), &flag_a.flag_type, &flag_b.flag_type, &dims)
}

/// The longest element of `(W_J w W_J~) ∩ W^J~`; `dim Ȳ_w = l(ẇ)`.
pub fn dot_w(w: &SignedPermutation, j: &SubsetJ) -> Result<SignedPermutation> {
    require_double_min(w, j)?;
    let jt = j.tilde();
    double_coset(j, w, &jt)
        .into_iter()
        .filter(|u| u.is_min_right(&jt))
        .max_by_key(|u| (u.length(), std::cmp::Reverse(*u)))
        .ok_or_else(|| Error::Internal("empty double coset".into()))
}

/// Every isotropic subspace of dimension `target` containing `base`.
fn isotropic_extensions(space: &SymplecticSpace, base: &Subspace, target: usize) -> Vec<Subspace> {
    let f = space.field();
    let n = space.dim();
    let q = f.order() as usize;
    let vectors: Vec<Vec<Elem>> = (0..q.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = (code % q) as Elem;
                    code /= q;
                    d
                })
                .collect()
        })
        .collect();
    let mut layer: HashSet<Subspace> = HashSet::from([base.clone()]);
    for _ in base.dim()..target {
        let mut next = HashSet::new();
        for u in &layer {
            let up = space.perp(u);
            for v in &vectors {
                if up.contains(f, v) && !u.contains(f, v) {
                    let grown = u.sum(f, &Subspace::from_rows(f, n, std::slice::from_ref(v)));
                    next.insert(grown);
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<Subspace> = layer.into_iter().collect();
    out.sort_by_key(|a| a.basis().to_rows());
    out
}

/// Every flag of the given type, in a deterministic order. Exponential in
/// `2g`; meant for `F_2`, `F_3` and `g <= 3`.
pub fn enumerate_flags(space: &SymplecticSpace, flag_type: &SubsetJ) -> Vec<SymplecticFlag> {
    let jumps = flag_type.jumps();
    let c = (jumps.len() - 1) / 2;
    let mut chains: Vec<Vec<Subspace>> = vec![Vec::new()];
    for i in 1..=c {
        let mut next = Vec::new();
        for chain in &chains {
            let base = chain.last().cloned().unwrap_or_else(|| Subspace::zero(space.dim()));
            for ext in isotropic_extensions(space, &base, jumps[i]) {
                let mut grown = chain.clone();
                grown.push(ext);
                next.push(grown);
            }
        }
        chains = next;
    }
    chains
        .into_iter()
        .map(|subs| SymplecticFlag::new(space, *flag_type, subs).expect("enumerated flags are valid"))
        .collect()
}

/// A random flag of the given type, grown one isotropic vector at a time.
pub fn random_flag<R: Rng + ?Sized>(space: &SymplecticSpace, flag_type: &SubsetJ, rng: &mut R) -> SymplecticFlag {
    let f = space.field();
    let n = space.dim();
    let q = f.order();
    let jumps = flag_type.jumps();
    let c = (jumps.len() - 1) / 2;
    let mut current = Subspace::zero(n);
    let mut subs = Vec::with_capacity(c);
    for i in 1..=c {
        while current.dim() < jumps[i] {
            let up = space.perp(&current);
            let b = up.basis();
            let mut v = vec![0; n];
            for r in 0..b.rows() {
                let coeff = rng.random_range(0..q);
                for (slot, &x) in v.iter_mut().zip(b.row(r)) {
                    *slot = f.add(*slot, f.mul(coeff, x));
                }
            }
            if !current.contains(f, &v) {
                current = current.sum(f, &Subspace::from_rows(f, n, &[v]));
            }
        }
        subs.push(current.clone());
    }
    SymplecticFlag::new(space, *flag_type, subs).expect("random flag is valid")
}
