//! Jump sequences of a parabolic type `J` and the block permutations `sigma`,
//! `tau` attached to an admissible pair `(w, J)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weyl::{SignedPermutation, SubsetJ};

/// Jump data for `J ⊆ {1, ..., g-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicDatum {
    pub g: usize,
    pub j: SubsetJ,
    pub c: usize,
    /// `k_0, ..., k_{2c}`.
    pub k: Vec<usize>,
    /// `k~_0, ..., k~_{2c}`, the jumps of `J~`.
    pub ktilde: Vec<usize>,
    pub jtilde: SubsetJ,
}

impl ParabolicDatum {
    pub fn new(j: &SubsetJ) -> Self {
        let k = j.jumps();
        let jtilde = j.tilde();
        let ktilde = jtilde.jumps();
        Self {
            g: j.rank(),
            j: *j,
            c: (k.len() - 1) / 2,
            k,
            ktilde,
            jtilde,
        }
    }

    /// Index `m` with `k_m = value`, if `value` is a jump.
    pub fn jump_index(&self, value: usize) -> Option<usize> {
        self.k.binary_search(&value).ok()
    }

    /// Size of block `i`, i.e. `k_i - k_{i-1}` for `1 <= i <= 2c`.
    pub fn block_size(&self, i: usize) -> usize {
        self.k[i] - self.k[i - 1]
    }
}

pub fn parabolic_datum(g: usize, j: &SubsetJ) -> Result<ParabolicDatum> {
    if j.rank() != g {
        return Err(Error::RankMismatch(g, j.rank()));
    }
    Ok(ParabolicDatum::new(j))
}

/// An admissible pair `(w, J)` with its block permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub w: SignedPermutation,
    pub datum: ParabolicDatum,
    /// `sigma(i)` at index `i - 1`: `wx(k_i) = k_{sigma(i)}`.
    pub sigma: Vec<usize>,
    /// `tau(i)` at index `i - 1`: `w(k~_i) = k_{tau(i)}`.
    pub tau: Vec<usize>,
}

impl AdmissiblePair {
    pub fn c(&self) -> usize {
        self.datum.c
    }

    pub fn g(&self) -> usize {
        self.datum.g
    }

    #[inline]
    pub fn sigma(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    #[inline]
    pub fn tau(&self, i: usize) -> usize {
        self.tau[i - 1]
    }

    /// Re-checks every structural invariant; used by the verification sweeps.
    pub fn check_invariants(&self) -> Result<()> {
        let d = &self.datum;
        let c = d.c;
        let x = SignedPermutation::longest_x(d.g);
        let wx = self.w.mul(&x);
        check_sigma_shape(d, &self.sigma)?;
        for i in 1..=2 * c {
            if wx.apply(d.k[i]) != d.k[self.sigma(i)] {
                return Err(Error::Internal(format!("wx(k_{i}) != k_sigma({i})")));
            }
            if self.w.apply(d.ktilde[i]) != d.k[self.tau(i)] {
                return Err(Error::Internal(format!("w(k~_{i}) != k_tau({i})")));
            }
        }
        if twisted_all_simple(&self.w, &d.jtilde) != Some(d.j) {
            return Err(Error::Internal("w does not twist J~ onto J".into()));
        }
        Ok(())
    }
}

impl Serialize for AdmissiblePair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            w: Vec<usize>,
            #[serde(rename = "J")]
            j: Vec<usize>,
            k: &'a [usize],
            ktilde: &'a [usize],
            sigma: &'a [usize],
            tau: &'a [usize],
        }
        Wire {
            w: self.w.images(),
            j: self.datum.j.members(),
            k: &self.datum.k,
            ktilde: &self.datum.ktilde,
            sigma: &self.sigma,
            tau: &self.tau,
        }
        .serialize(serializer)
    }
}

/// `^w K` when every conjugate `w s_j w^{-1}` (`j in K`) is some `s_i` with
/// `i < g`; `None` otherwise.
fn twisted_all_simple(w: &SignedPermutation, k: &SubsetJ) -> Option<SubsetJ> {
    let g = w.rank();
    let mut members = Vec::with_capacity(k.len());
    for j in k.iter() {
        match w.conjugate_simple(j) {
            Some(i) if i < g => members.push(i),
            _ => return None,
        }
    }
    SubsetJ::new(g, &members).ok()
}

/// `w in W^I` and `^w J~ = J`, with every conjugate simple.
pub fn is_admissible(w: &SignedPermutation, j: &SubsetJ) -> bool {
    let g = w.rank();
    if j.rank() != g || !w.is_min_right(&SubsetJ::full(g)) {
        return false;
    }
    twisted_all_simple(w, &j.tilde()) == Some(*j)
}

fn tau_from_sigma(sigma: &[usize]) -> Vec<usize> {
    let c = sigma.len() / 2;
    (1..=2 * c)
        .map(|i| if i <= c { sigma[i + c - 1] } else { sigma[i - c - 1] })
        .collect()
}

/// Computes `sigma` from `wx(k_i) = k_{sigma(i)}` and derives `tau`.
pub fn sigma_of(w: &SignedPermutation, j: &SubsetJ) -> Result<AdmissiblePair> {
    if !is_admissible(w, j) {
        return Err(Error::NotAdmissible {
            w: w.images(),
            j: j.members(),
        });
    }
    let datum = ParabolicDatum::new(j);
    let wx = w.mul(&SignedPermutation::longest_x(datum.g));
    let sigma = (1..=2 * datum.c)
        .map(|i| {
            let v = wx.apply(datum.k[i]);
            datum.jump_index(v).ok_or_else(|| {
                Error::InvalidSigma(format!("wx(k_{i}) = {v} is not a jump value"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tau = tau_from_sigma(&sigma);
    Ok(AdmissiblePair {
        w: *w,
        datum,
        sigma,
        tau,
    })
}

fn check_sigma_shape(d: &ParabolicDatum, sigma: &[usize]) -> Result<()> {
    let n = 2 * d.c;
    if sigma.len() != n {
        return Err(Error::InvalidSigma(format!(
            "expected {n} entries, found {}",
            sigma.len()
        )));
    }
    let mut seen = vec![false; n + 1];
    for &s in sigma {
        if s == 0 || s > n || seen[s] {
            return Err(Error::InvalidSigma(format!("{sigma:?} is not a permutation of 1..={n}")));
        }
        seen[s] = true;
    }
    for i in 1..=n {
        if sigma[n - i] != n + 1 - sigma[i - 1] {
            return Err(Error::InvalidSigma(format!(
                "{sigma:?} violates sigma(2c+1-i) = 2c+1-sigma(i)"
            )));
        }
        if d.block_size(i) != d.block_size(sigma[i - 1]) {
            return Err(Error::InvalidSigma(format!(
                "{sigma:?} does not preserve block sizes at {i}"
            )));
        }
    }
    if sigma[..d.c].windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidSigma(format!(
            "{sigma:?} is not increasing on 1..={}",
            d.c
        )));
    }
    Ok(())
}

/// The unique `w in W^I` with `w(a) = k_{tau(i)} - (k~_i - a)` on each block
/// `k~_{i-1} < a <= k~_i`.
pub fn weyl_from_sigma(g: usize, j: &SubsetJ, sigma: &[usize]) -> Result<SignedPermutation> {
    let d = parabolic_datum(g, j)?;
    check_sigma_shape(&d, sigma)?;
    let tau = tau_from_sigma(sigma);
    let mut images = vec![0usize; 2 * g];
    for i in 1..=2 * d.c {
        let top = d.k[tau[i - 1]];
        for a in d.ktilde[i - 1] + 1..=d.ktilde[i] {
            images[a - 1] = top + a - d.ktilde[i];
        }
    }
    let w = SignedPermutation::new(&images)
        .map_err(|e| Error::InvalidSigma(format!("{sigma:?} yields no Weyl element: {e}")))?;
    if !is_admissible(&w, j) {
        return Err(Error::InvalidSigma(format!(
            "{sigma:?} yields {w:?}, which is not admissible for {j:?}"
        )));
    }
    Ok(w)
}

/// `J_w`, the largest `J` with `(w, J)` admissible.
pub fn max_admissible_j(w: &SignedPermutation) -> Result<SubsetJ> {
    let g = w.rank();
    if !w.is_min_right(&SubsetJ::full(g)) {
        return Err(Error::NotMinimalRepresentative {
            w: w.images(),
            which: "W^I",
        });
    }
    let best = SubsetJ::all(g)
        .into_iter()
        .filter(|j| is_admissible(w, j))
        .fold(SubsetJ::empty(g), |acc, j| acc.union(&j));
    debug_assert!(is_admissible(w, &best));
    Ok(best)
}

/// Every admissible pair at rank `g`, ordered by `w` then by `J` bitmask.
pub fn admissible_pairs(g: usize) -> Vec<AdmissiblePair> {
    let subsets = SubsetJ::all(g);
    crate::weyl::w_i_reps(g)
        .iter()
        .flat_map(|w| subsets.iter().filter_map(move |j| sigma_of(w, j).ok()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{longest_x, simple_reflection};

    fn sp(images: &[usize]) -> SignedPermutation {
        SignedPermutation::new(images).unwrap()
    }

    fn subset(g: usize, m: &[usize]) -> SubsetJ {
        SubsetJ::new(g, m).unwrap()
    }

    #[test]
    fn datum_examples() {
        let d = parabolic_datum(2, &SubsetJ::empty(2)).unwrap();
        assert_eq!((d.c, &d.k[..], &d.ktilde[..]), (2, &[0, 1, 2, 3, 4][..], &[0, 1, 2, 3, 4][..]));
        let d = parabolic_datum(2, &subset(2, &[1])).unwrap();
        assert_eq!((d.c, &d.k[..], &d.ktilde[..]), (1, &[0, 2, 4][..], &[0, 2, 4][..]));
        assert_eq!(d.jtilde.members(), vec![1]);
        let d = parabolic_datum(3, &subset(3, &[2])).unwrap();
        assert_eq!(d.c, 2);
        assert_eq!(d.k, vec![0, 1, 3, 5, 6]);
        assert_eq!(d.ktilde, vec![0, 2, 3, 4, 6]);
        assert_eq!(d.jtilde.members(), vec![1]);
    }

    #[test]
    fn datum_formulas_hold() {
        for g in 1..=6 {
            for j in SubsetJ::all(g) {
                let d = ParabolicDatum::new(&j);
                let c = d.c;
                assert_eq!(d.k[c], g);
                for i in 0..=c {
                    assert_eq!(d.ktilde[i], g - d.k[c - i]);
                }
                for i in c..=2 * c {
                    assert_eq!(d.k[i], 2 * g - d.k[2 * c - i]);
                    assert_eq!(d.ktilde[i], 2 * g - d.ktilde[2 * c - i]);
                }
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        for w in crate::weyl::w_i_reps(3) {
            assert!(is_admissible(&w, &SubsetJ::empty(3)));
        }
        let j = subset(2, &[1]);
        assert!(is_admissible(&longest_x(2), &j));
        assert!(is_admissible(&SignedPermutation::identity(2), &j));
        assert!(!is_admissible(&sp(&[2, 4, 1, 3]), &j));
        // s_1 is not in W^I
        assert!(!is_admissible(&simple_reflection(2, 1).unwrap(), &SubsetJ::empty(2)));
    }

    #[test]
    fn sigma_examples() {
        let p = sigma_of(&simple_reflection(1, 1).unwrap(), &SubsetJ::empty(1)).unwrap();
        assert_eq!(p.sigma, vec![1, 2]);
        let p = sigma_of(&SignedPermutation::identity(1), &SubsetJ::empty(1)).unwrap();
        assert_eq!(p.sigma, vec![2, 1]);
        let p = sigma_of(&sp(&[2, 4, 1, 3]), &SubsetJ::empty(2)).unwrap();
        assert_eq!(p.sigma, vec![1, 3, 2, 4]);
        assert_eq!(p.tau, vec![2, 4, 1, 3]);
        assert!(matches!(
            sigma_of(&sp(&[2, 4, 1, 3]), &subset(2, &[1])),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn weyl_from_sigma_examples() {
        let e = SubsetJ::empty(1);
        assert_eq!(weyl_from_sigma(1, &e, &[1, 2]).unwrap(), simple_reflection(1, 1).unwrap());
        assert!(weyl_from_sigma(1, &e, &[2, 1]).unwrap().is_identity());
        assert_eq!(weyl_from_sigma(2, &subset(2, &[1]), &[1, 2]).unwrap(), longest_x(2));
        assert!(weyl_from_sigma(2, &SubsetJ::empty(2), &[2, 1, 4, 3]).is_err());
        assert!(weyl_from_sigma(2, &SubsetJ::empty(2), &[1, 2, 3]).is_err());
        // not increasing on 1..c
        assert!(weyl_from_sigma(2, &SubsetJ::empty(2), &[3, 1, 4, 2]).is_err());
    }

    #[test]
    fn max_j_examples() {
        assert!(max_admissible_j(&SignedPermutation::identity(1)).unwrap().is_empty());
        assert!(max_admissible_j(&longest_x(1)).unwrap().is_empty());
        assert_eq!(max_admissible_j(&longest_x(2)).unwrap().members(), vec![1]);
        assert!(max_admissible_j(&sp(&[2, 4, 1, 3])).unwrap().is_empty());
        assert!(max_admissible_j(&simple_reflection(2, 1).unwrap()).is_err());
    }

    #[test]
    fn round_trip_and_invariants_exhaustive() {
        for g in 1..=4 {
            for pair in admissible_pairs(g) {
                pair.check_invariants().unwrap();
                let back = weyl_from_sigma(g, &pair.datum.j, &pair.sigma).unwrap();
                assert_eq!(back, pair.w);
            }
        }
    }

    #[test]
    fn admissible_sets_closed_under_union() {
        for g in 1..=3 {
            for w in crate::weyl::w_i_reps(g) {
                let adm: Vec<_> = SubsetJ::all(g).into_iter().filter(|j| is_admissible(&w, j)).collect();
                for a in &adm {
                    for b in &adm {
                        assert!(is_admissible(&w, &a.union(b)), "{w:?} {a:?} {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let p = sigma_of(&longest_x(2), &subset(2, &[1])).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"w":[3,4,1,2],"J":[1],"k":[0,2,4],"ktilde":[0,2,4],"sigma":[1,2],"tau":[2,1]})
        );
    }
}
