//! Type `A_{n-1}` root datum, Weyl group combinatorics (as permutations),
//! dominance order, Bruhat order, and the wonderful-compactification
//! stratum dimension formulas.
//!
//! Everything here is pure combinatorics over immutable data.

use crate::{Error, Result};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// The `A_{n-1}` root datum for `SL_n`.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub n: usize,
}

impl RootDatum {
    pub fn new(n: usize) -> Result<RootDatum> {
        if n < 2 {
            return Err(Error::Validation("need n >= 2".into()));
        }
        Ok(RootDatum { n })
    }

    /// Rank `r = n - 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// `dim G = n^2 - 1`.
    pub fn dim_g(&self) -> i64 {
        (self.n * self.n - 1) as i64
    }

    /// Simple roots `alpha_i = e_i - e_{i+1}` as vectors in `Z^n`.
    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| {
                let mut v = vec![0i64; self.n];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect()
    }

    /// Positive roots `e_i - e_j`, `i < j`, ordered by height then position.
    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.n)
            .tuple_combinations()
            .map(|(i, j)| (i, j))
            .collect();
        out.sort_by_key(|&(i, j)| (j - i, i));
        out
    }

    /// `2 rho = sum of positive roots`, in `Z^n` coordinates:
    /// `(n-1, n-3, ..., -(n-1))`.
    pub fn two_rho(&self) -> Vec<i64> {
        (0..self.n).map(|i| (self.n - 1) as i64 - 2 * i as i64).collect()
    }

    /// The type-A Cartan matrix `< alpha_i, alpha_j^vee >`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Exponent of `alpha_j` in the simple-root expansion of
    /// `k * omega_1 - omega_k`; these are the monomial exponents relating
    /// the exterior powers of the standard matrix to the higher fundamental
    /// matrices: `max(k - j, 0)` for `1 <= j <= r` (1-based `k`, `j`).
    pub fn omega_monomial_exponent(&self, k: usize, j: usize) -> i64 {
        (k as i64 - j as i64).max(0)
    }
}

/// An integral or rational coweight of `SL_n`: coordinates summing to zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coweight {
    coords: Vec<BigRational>,
}

impl Coweight {
    pub fn new(coords: Vec<BigRational>) -> Result<Coweight> {
        let s: BigRational = coords.iter().sum();
        if !s.is_zero() {
            return Err(Error::Validation("coweight coordinates must sum to zero".into()));
        }
        Ok(Coweight { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Coweight> {
        Coweight::new(coords.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero(n: usize) -> Coweight {
        Coweight { coords: vec![BigRational::zero(); n] }
    }

    /// `(k, -k)` for `SL_2`.
    pub fn sl2(k: i64) -> Coweight {
        Coweight::from_ints(&[k, -k]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Coweight) -> Coweight {
        Coweight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Coweight) -> Coweight {
        Coweight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Coweight {
        Coweight { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// Dominant representative: coordinates sorted weakly decreasing.
    pub fn dominant_sort(&self) -> Coweight {
        let mut c = self.coords.clone();
        c.sort_by(|a, b| b.cmp(a));
        Coweight { coords: c }
    }

    /// `-w_0 lambda`: reverse and negate (again dominant when `self` is).
    pub fn minus_w0(&self) -> Coweight {
        let coords = self.coords.iter().rev().map(|c| -c).collect();
        Coweight { coords }
    }

    /// Integer coordinates, when integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl std::fmt::Display for Coweight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dominance order on dominant coweights: `mu <= nu` iff `nu - mu` is a
/// nonnegative rational combination of simple coroots; in type A this is
/// the partial-sum criterion.
pub fn dominance_leq(mu: &Coweight, nu: &Coweight) -> Result<bool> {
    if mu.n() != nu.n() {
        return Err(Error::Validation("coweight rank mismatch".into()));
    }
    if !mu.is_dominant() || !nu.is_dominant() {
        return Err(Error::Validation("dominance order compares dominant coweights".into()));
    }
    let mut partial = BigRational::zero();
    for (a, b) in nu.coords().iter().zip(mu.coords()) {
        partial += a - b;
        if partial.is_negative() {
            return Ok(false);
        }
    }
    Ok(partial.is_zero())
}

/// `< rho, lambda >`, exact: computed through the stored `2 rho` and halved.
pub fn pair_rho(rd: &RootDatum, lambda: &Coweight) -> BigRational {
    let two: BigRational = rd
        .two_rho()
        .iter()
        .zip(lambda.coords())
        .map(|(&a, b)| BigRational::from_integer(BigInt::from(a)) * b)
        .sum();
    two / BigRational::from_integer(BigInt::from(2))
}

/// Sorts a multiset of slopes (summing to zero) into the dominant
/// representative.
pub fn newton_sort(slopes: &[BigRational]) -> Result<Coweight> {
    let w = Coweight::new(slopes.to_vec())?;
    Ok(w.dominant_sort())
}

/// A Weyl group element of `S_n` in one-line notation (`perm[i]` is the
/// image of `i`, 0-based).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> WeylElement {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn from_one_line(perm: Vec<usize>) -> Result<WeylElement> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Validation("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(WeylElement { perm })
    }

    /// The simple reflection `s_i` (0-based `i`, swapping `i` and `i+1`).
    pub fn simple(n: usize, i: usize) -> WeylElement {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        WeylElement { perm }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Composition `self * other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let perm = (0..self.n()).map(|i| self.perm[other.perm[i]]).collect();
        WeylElement { perm }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = vec![0usize; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
        }
        WeylElement { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Coxeter length = inversion count.
    pub fn length(&self) -> usize {
        let mut inv = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.perm[i] > self.perm[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// Right descent at `i`: `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.perm[i] > self.perm[i + 1]
    }

    /// Left descent at `i`: `l(s_i w) < l(w)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.perm[i] > inv.perm[i + 1]
    }

    /// One reduced word (as 0-based simple-reflection indices), via right
    /// descents; its length equals the inversion count.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        'outer: while !w.is_identity() {
            for i in 0..w.n() - 1 {
                if w.has_right_descent(i) {
                    w = w.compose(&WeylElement::simple(w.n(), i));
                    word.push(i);
                    continue 'outer;
                }
            }
            unreachable!("non-identity permutation without descent");
        }
        word.reverse();
        word
    }

    /// Support: simple reflections occurring in any reduced word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.reduced_word();
        s.sort();
        s.dedup();
        s
    }

    /// Permutation action on a coweight: `(w . v)_{w(i)} = v_i`.
    pub fn act(&self, v: &Coweight) -> Coweight {
        let mut coords = vec![BigRational::zero(); v.n()];
        for i in 0..v.n() {
            coords[self.perm[i]] = v.coords()[i].clone();
        }
        Coweight::new(coords).expect("permutation preserves the sum")
    }
}

/// All elements of `S_n` (desk scale: `n <= 8`).
pub fn all_weyl_elements(n: usize) -> Vec<WeylElement> {
    (0..n)
        .permutations(n)
        .map(|perm| WeylElement { perm })
        .collect()
}

/// Bruhat order `u <= w`, by the lifting property: if `s` is a left descent
/// of `w`, then `u <= w` iff `(su <= sw)` when `s` is also a descent of
/// `u`, and `(u <= sw)` otherwise.
pub fn bruhat_leq(u: &WeylElement, w: &WeylElement) -> bool {
    if u.length() > w.length() {
        return false;
    }
    if u == w || u.is_identity() {
        return true;
    }
    let n = w.n();
    let s = (0..n - 1)
        .find(|&i| w.has_left_descent(i))
        .expect("non-identity element has a descent");
    let sref = WeylElement::simple(n, s);
    let sw = sref.compose(w);
    if u.has_left_descent(s) {
        bruhat_leq(&sref.compose(u), &sw)
    } else {
        bruhat_leq(u, &sw)
    }
}

/// Bruhat order by the Ehresmann rank criterion: `u <= w` iff for every
/// prefix length the sorted initial values of `u` are entrywise `<=` those
/// of `w`. Used as an independent check on [`bruhat_leq`].
pub fn bruhat_leq_rank_criterion(u: &WeylElement, w: &WeylElement) -> bool {
    let n = u.n();
    for i in 1..n {
        let mut a: Vec<usize> = u.perm[..i].to_vec();
        let mut b: Vec<usize> = w.perm[..i].to_vec();
        a.sort();
        b.sort();
        if a.iter().zip(&b).any(|(x, y)| x > y) {
            return false;
        }
    }
    true
}

/// All Coxeter elements: `w` with `l(w) = n - 1` and full support, i.e.
/// products of every simple reflection exactly once.
pub fn coxeter_elements(rd: &RootDatum) -> Vec<WeylElement> {
    let r = rd.rank();
    all_weyl_elements(rd.n)
        .into_iter()
        .filter(|w| w.length() == r && w.support().len() == r)
        .collect()
}

/// The standard Coxeter element `s_1 s_2 ... s_r`.
pub fn standard_coxeter(rd: &RootDatum) -> WeylElement {
    let mut w = WeylElement::identity(rd.n);
    for i in 0..rd.rank() {
        w = w.compose(&WeylElement::simple(rd.n, i));
    }
    w
}

/// The subgroup `W_I` generated by `{s_i : i in I}` (0-based indices),
/// enumerated by closure.
pub fn parabolic_subgroup(n: usize, subset: &[usize]) -> Vec<WeylElement> {
    let gens: Vec<WeylElement> = subset.iter().map(|&i| WeylElement::simple(n, i)).collect();
    let mut seen = vec![WeylElement::identity(n)];
    let mut frontier = seen.clone();
    while let Some(w) = frontier.pop() {
        for g in &gens {
            let next = w.compose(g);
            if !seen.contains(&next) {
                seen.push(next.clone());
                frontier.push(next);
            }
        }
    }
    seen
}

/// Is `w` the minimal-length representative of `w W_I`? Criterion: no right
/// descent inside `I`.
pub fn is_minimal_coset_rep(w: &WeylElement, subset: &[usize]) -> bool {
    subset.iter().all(|&i| !w.has_right_descent(i))
}

/// Dimension of the stratum `X_{I,w}` of the wonderful compactification:
/// `dim G - l(w) - |Delta - I|`, for `w` minimal in `w W_I`.
pub fn strata_dim(rd: &RootDatum, subset: &[usize], w: &WeylElement) -> Result<i64> {
    if !is_minimal_coset_rep(w, subset) {
        return Err(Error::Validation("w is not minimal in its coset w W_I".into()));
    }
    let complement = rd.rank() - subset.len();
    Ok(rd.dim_g() - w.length() as i64 - complement as i64)
}

/// Closure order on pairs `(I, x)`, `x in W^I`: `(I,x) <= (K,y)` iff
/// `I` is contained in `K` and `x >= z^{-1} y z` for some `z in W_K`.
pub fn pair_order_leq(
    rd: &RootDatum,
    ix: (&[usize], &WeylElement),
    ky: (&[usize], &WeylElement),
) -> Result<bool> {
    let (i_set, x) = ix;
    let (k_set, y) = ky;
    if !is_minimal_coset_rep(x, i_set) || !is_minimal_coset_rep(y, k_set) {
        return Err(Error::Validation("representatives must be minimal in their cosets".into()));
    }
    if !i_set.iter().all(|i| k_set.contains(i)) {
        return Ok(false);
    }
    for z in parabolic_subgroup(rd.n, k_set) {
        let conj = z.inverse().compose(y).compose(&z);
        if bruhat_leq(&conj, x) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn root_datum_basics() {
        let rd = RootDatum::new(3).unwrap();
        assert_eq!(rd.positive_roots().len(), 3);
        assert_eq!(rd.two_rho(), vec![2, 0, -2]);
        assert_eq!(rd.cartan_matrix(), vec![vec![2, -1], vec![-1, 2]]);
        // 2 rho = sum of positive roots
        let mut acc = vec![0i64; 3];
        for (i, j) in rd.positive_roots() {
            acc[i] += 1;
            acc[j] -= 1;
        }
        assert_eq!(acc, rd.two_rho());
    }

    #[test]
    fn dominance_examples() {
        let zero = Coweight::from_ints(&[0, 0]).unwrap();
        let one = Coweight::from_ints(&[1, -1]).unwrap();
        let two = Coweight::from_ints(&[2, -2]).unwrap();
        assert!(dominance_leq(&zero, &one).unwrap());
        assert!(dominance_leq(&one, &one).unwrap());
        assert!(!dominance_leq(&two, &one).unwrap());
        let nondom = Coweight::from_ints(&[-1, 1]).unwrap();
        assert!(dominance_leq(&nondom, &one).is_err());
    }

    #[test]
    fn dominance_is_a_partial_order_exhaustive() {
        // all dominant integral SL_2 and SL_3 coweights with coords in [-3,3]
        for n in [2usize, 3] {
            let rng: Vec<i64> = (-3..=3).collect();
            let mut doms: Vec<Coweight> = Vec::new();
            let combos: Vec<Vec<i64>> = match n {
                2 => rng.iter().map(|&a| vec![a, -a]).collect(),
                _ => rng
                    .iter()
                    .cartesian_product(rng.iter())
                    .map(|(&a, &b)| vec![a, b, -a - b])
                    .collect(),
            };
            for c in combos {
                if c.iter().all(|&x| x.abs() <= 3) {
                    if let Ok(w) = Coweight::from_ints(&c) {
                        if w.is_dominant() {
                            doms.push(w);
                        }
                    }
                }
            }
            for a in &doms {
                assert!(dominance_leq(a, a).unwrap());
                for b in &doms {
                    if dominance_leq(a, b).unwrap() && dominance_leq(b, a).unwrap() {
                        assert_eq!(a, b);
                    }
                    for c in &doms {
                        if dominance_leq(a, b).unwrap() && dominance_leq(b, c).unwrap() {
                            assert!(dominance_leq(a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pair_rho_examples() {
        let rd2 = RootDatum::new(2).unwrap();
        for k in 0..4 {
            assert_eq!(pair_rho(&rd2, &Coweight::sl2(k)), rat(k));
        }
        let rd3 = RootDatum::new(3).unwrap();
        assert_eq!(pair_rho(&rd3, &Coweight::from_ints(&[1, 0, -1]).unwrap()), rat(2));
        assert_eq!(pair_rho(&rd3, &Coweight::zero(3)), rat(0));
    }

    #[test]
    fn coxeter_counts() {
        // w with l(w) = r and full support; counted by brute force
        let expect = [(2usize, 1usize), (3, 2), (4, 4), (5, 8)];
        for (n, count) in expect {
            let rd = RootDatum::new(n).unwrap();
            assert_eq!(coxeter_elements(&rd).len(), count, "n = {n}");
        }
    }

    #[test]
    fn reduced_word_and_support() {
        let rd = RootDatum::new(4).unwrap();
        let w = standard_coxeter(&rd);
        assert_eq!(w.length(), 3);
        assert_eq!(w.support(), vec![0, 1, 2]);
        let word = w.reduced_word();
        assert_eq!(word.len(), 3);
        let mut rebuilt = WeylElement::identity(4);
        for i in word {
            rebuilt = rebuilt.compose(&WeylElement::simple(4, i));
        }
        assert_eq!(rebuilt, w);
    }

    #[test]
    fn bruhat_agrees_with_rank_criterion() {
        for n in [3usize, 4] {
            let all = all_weyl_elements(n);
            for u in &all {
                for w in &all {
                    assert_eq!(
                        bruhat_leq(u, w),
                        bruhat_leq_rank_criterion(u, w),
                        "u = {:?}, w = {:?}",
                        u.one_line(),
                        w.one_line()
                    );
                }
            }
        }
    }

    #[test]
    fn full_support_dominates_a_coxeter_element() {
        for n in [3usize, 4] {
            let rd = RootDatum::new(n).unwrap();
            let cox = coxeter_elements(&rd);
            for w in all_weyl_elements(n) {
                if w.support().len() == rd.rank() {
                    assert!(
                        cox.iter().any(|c| bruhat_leq(c, &w)),
                        "no coxeter below {:?}",
                        w.one_line()
                    );
                }
            }
        }
    }

    #[test]
    fn strata_dims() {
        let rd3 = RootDatum::new(3).unwrap();
        let cox = standard_coxeter(&rd3);
        assert_eq!(strata_dim(&rd3, &[], &cox).unwrap(), 4); // 8 - 2 - 2
        let rd2 = RootDatum::new(2).unwrap();
        let s1 = WeylElement::simple(2, 0);
        assert_eq!(strata_dim(&rd2, &[], &s1).unwrap(), 1); // 3 - 1 - 1
        let id = WeylElement::identity(3);
        assert_eq!(strata_dim(&rd3, &[0, 1], &id).unwrap(), 8); // open stratum
        // nilpotent-cone shift: strata at (empty, coxeter) + r = dim G - r
        for n in [2usize, 3, 4] {
            let rd = RootDatum::new(n).unwrap();
            let c = standard_coxeter(&rd);
            let r = rd.rank() as i64;
            assert_eq!(strata_dim(&rd, &[], &c).unwrap() + r, rd.dim_g() - r);
        }
    }

    #[test]
    fn pair_order_examples() {
        let rd = RootDatum::new(3).unwrap();
        let w = standard_coxeter(&rd);
        assert!(pair_order_leq(&rd, (&[], &w), (&[], &w)).unwrap());
        // s1 s2 s1 = w0 dominates a Coxeter element
        let w0 = WeylElement::from_one_line(vec![2, 1, 0]).unwrap();
        assert!(pair_order_leq(&rd, (&[], &w0), (&[], &w)).unwrap());
        // I not contained in K
        let s2 = WeylElement::simple(3, 1);
        assert!(!pair_order_leq(&rd, (&[0], &s2), (&[], &w)).unwrap());
    }

    #[test]
    fn newton_sort_examples() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let w = newton_sort(&[-half.clone(), half.clone()]).unwrap();
        assert_eq!(w.coords()[0], half);
        assert!(w.is_dominant());
        assert!(newton_sort(&[rat(0), rat(0), rat(0)]).unwrap().is_zero());
        assert_eq!(
            newton_sort(&[rat(1), rat(-1)]).unwrap(),
            Coweight::from_ints(&[1, -1]).unwrap()
        );
    }
}
