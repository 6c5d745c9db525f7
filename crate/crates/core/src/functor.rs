//! Concrete fibered biset functors on a seed: a based free module per group
//! and one action matrix per pair class, with optional Green data.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::burnside::{mackey_product, transitive_product, BurnsideElt, Coeff, Ring};
use crate::error::{Error, Result};
use crate::fiber::{FiberChar, FiberGroup};
use crate::group::{build_group, product_subgroup, trivial_group, GroupHandle, SubgroupRef};
use crate::pairs::{
    char_of_pair, diagonal_pair, identity_pair, iso_pair, pair_classes, pair_cross, pair_of_char, FiberedPair,
    PairKey,
};
use crate::plus::{plus_act, plus_basis, plus_cross, PlusBasis, PlusElt};
use crate::seed::{lift_plus, SeedData};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Coeff>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Coeff::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }
    pub fn from_rows(rows: &[Vec<Coeff>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged matrix".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }
    /// Matrix whose `j`th column is `cols[j]`.
    pub fn from_columns(nrows: usize, cols: &[Vec<Coeff>]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> Coeff {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }
    pub fn to_rows(&self) -> Vec<Vec<Coeff>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }
    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Invariant(format!("matrix shapes {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        Ok(m)
    }
    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Invariant("matrix shapes differ".into()));
        }
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }
    pub fn scale(&self, c: Coeff) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }
    pub fn apply(&self, v: &[Coeff]) -> Vec<Coeff> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }
    /// `Some(σ)` with column `j` equal to `e_{σ(j)}` when the matrix is a
    /// permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols {
            return None;
        }
        let mut sigma = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let nz: Vec<usize> = (0..self.rows).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 || self.get(nz[0], j) != Coeff::one() {
                return None;
            }
            sigma.push(nz[0]);
        }
        let mut seen = vec![false; self.rows];
        for &i in &sigma {
            if std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(sigma)
    }
    pub fn determinant(&self) -> Result<Coeff> {
        if self.rows != self.cols {
            return Err(Error::Invariant("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Coeff::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Coeff::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a[c][k];
                    a[r][k] -= f * v;
                }
            }
        }
        Ok(det)
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Coeff> {
    let mut v = vec![Coeff::zero(); n];
    v[i] = Coeff::one();
    v
}

/// User functor document: basis labels per group and one matrix per class.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDoc {
    pub groups: Vec<TableGroup>,
    pub actions: Vec<TableAction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableGroup {
    pub group: String,
    /// Subgroup of `group`; the whole group when absent.
    #[serde(default)]
    pub elements: Option<Vec<u32>>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableAction {
    pub left: usize,
    pub right: usize,
    /// `(g, h, a)` triples of any representative of the class.
    pub triples: Vec<[u32; 3]>,
    /// Rows indexed by the left group's basis.
    pub matrix: Vec<Vec<i64>>,
}

pub struct TableFunctor {
    groups: Vec<(SubgroupRef, Vec<String>)>,
    matrices: HashMap<(SubgroupRef, SubgroupRef, PairKey), Arc<Matrix>>,
}

pub enum FunctorKind {
    Trivial,
    Burnside,
    Table(TableFunctor),
    /// `F₊` of the inner functor, acting through `plus_act`.
    Plus(Arc<FunctorSpec>),
}

pub struct FunctorSpec {
    seed: Arc<SeedData>,
    kind: FunctorKind,
    name: String,
    cache: Mutex<HashMap<(SubgroupRef, SubgroupRef, PairKey), Arc<Matrix>>>,
    plus_seed: OnceLock<std::result::Result<Arc<SeedData>, String>>,
    pub(crate) plus_bases: Mutex<HashMap<SubgroupRef, Arc<PlusBasis>>>,
}

impl fmt::Debug for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functor({} on {:?})", self.name, self.seed)
    }
}

fn one() -> SubgroupRef {
    trivial_group().whole()
}

impl FunctorSpec {
    fn build(seed: &Arc<SeedData>, kind: FunctorKind, name: &str) -> Arc<Self> {
        Arc::new(FunctorSpec {
            seed: seed.clone(),
            kind,
            name: name.to_string(),
            cache: Mutex::new(HashMap::new()),
            plus_seed: OnceLock::new(),
            plus_bases: Mutex::new(HashMap::new()),
        })
    }

    /// The rank-one functor on which every class acts as the identity.
    /// Requires every class of the seed to have full left projection.
    /// The rank-one functor on which every class acts as the identity.
    pub fn trivial(seed: &Arc<SeedData>) -> Result<Arc<Self>> {
        for g in seed.family() {
            for h in seed.family() {
                if let Some(c) = seed.classes(g, h)?.into_iter().find(|c| c.pair.p1() != *g) {
                    return Err(Error::InvalidFunctor(format!("class {:?} has p1 smaller than {g:?}", c.pair)));
                }
            }
        }
        Ok(Self::build(seed, FunctorKind::Trivial, "trivial"))
    }

    /// `G ↦ B^A(G)` acting by the Mackey product.
    pub fn burnside(seed: &Arc<SeedData>) -> Arc<Self> {
        Self::build(seed, FunctorKind::Burnside, "burnside")
    }

    pub fn table(seed: &Arc<SeedData>, doc: &TableDoc) -> Result<Arc<Self>> {
        let mut groups = Vec::new();
        for tg in &doc.groups {
            let parent = build_group(&tg.group)?;
            let g = match &tg.elements {
                Some(e) => SubgroupRef::new(&parent, e.clone())?,
                None => parent.whole(),
            };
            groups.push((g, tg.labels.clone()));
        }
        let mut matrices = HashMap::new();
        for a in &doc.actions {
            let (gl, gr) = match (groups.get(a.left), groups.get(a.right)) {
                (Some(l), Some(r)) => (l, r),
                _ => return Err(Error::InvalidFunctor("action references unknown group".into())),
            };
            let p = FiberedPair::new(&gl.0, &gr.0, seed.fiber(), a.triples.iter().map(|t| (t[0], t[1], t[2])))?;
            let rows: Vec<Vec<Coeff>> =
                a.matrix.iter().map(|r| r.iter().map(|&v| Coeff::from_integer(v)).collect()).collect();
            let m = Matrix::from_rows(&rows)?;
            if m.rows != gl.1.len() || (m.cols != gr.1.len() && !rows.is_empty()) {
                return Err(Error::InvalidFunctor(format!("matrix shape for {p:?}")));
            }
            matrices.insert((gl.0.clone(), gr.0.clone(), p.canonical().key), Arc::new(m));
        }
        let f = Self::build(seed, FunctorKind::Table(TableFunctor { groups, matrices }), "table");
        let rep = check_functor(&f, 64, 0)?;
        if !rep.passed() {
            return Err(Error::InvalidFunctor(format!("table fails functor laws: {:?}", rep.witness)));
        }
        Ok(f)
    }

    pub fn from_json(seed: &Arc<SeedData>, text: &str) -> Result<Arc<Self>> {
        let doc: TableDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::table(seed, &doc)
    }

    /// `F₊` as a functor on `S₊`.
    pub fn plus(inner: &Arc<FunctorSpec>) -> Result<Arc<Self>> {
        let seed = inner.plus_seed()?;
        Ok(Self::build(&seed, FunctorKind::Plus(inner.clone()), &format!("{}+", inner.name)))
    }

    pub fn seed(&self) -> &Arc<SeedData> {
        &self.seed
    }
    pub fn fiber(&self) -> &FiberGroup {
        self.seed.fiber()
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn kind(&self) -> &FunctorKind {
        &self.kind
    }

    /// `S₊` of the underlying seed, computed once.
    pub fn plus_seed(&self) -> Result<Arc<SeedData>> {
        self.plus_seed
            .get_or_init(|| lift_plus(&self.seed).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::Precondition)
    }

    pub fn rank(&self, g: &SubgroupRef) -> Result<usize> {
        Ok(match &self.kind {
            FunctorKind::Trivial => 1,
            FunctorKind::Burnside => pair_classes(g, &one(), self.fiber())?.len(),
            FunctorKind::Table(t) => t
                .groups
                .iter()
                .find(|x| x.0 == *g)
                .map(|x| x.1.len())
                .ok_or_else(|| Error::InvalidFunctor(format!("no basis for {g:?}")))?,
            FunctorKind::Plus(f) => plus_basis(f, g)?.len(),
        })
    }

    pub fn labels(&self, g: &SubgroupRef) -> Result<Vec<String>> {
        Ok(match &self.kind {
            FunctorKind::Trivial => vec!["1".into()],
            FunctorKind::Burnside => {
                pair_classes(g, &one(), self.fiber())?.iter().map(|c| show_char(&char_of_pair(&c.pair))).collect()
            }
            FunctorKind::Table(t) => t
                .groups
                .iter()
                .find(|x| x.0 == *g)
                .map(|x| x.1.clone())
                .ok_or_else(|| Error::InvalidFunctor(format!("no basis for {g:?}")))?,
            FunctorKind::Plus(f) => plus_basis(f, g)?.keys.iter().map(|k| k.label()).collect(),
        })
    }

    /// `F([U, φ])` as a matrix from `F(H)` to `F(G)`.
    pub fn act(&self, p: &FiberedPair) -> Result<Arc<Matrix>> {
        if !self.seed.contains(p) {
            return Err(Error::NotInSeed(format!("{p:?}")));
        }
        let canon = p.canonical();
        let key = (p.left.clone(), p.right.clone(), canon.key.clone());
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.compute(&canon)?);
        self.cache.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    fn compute(&self, p: &FiberedPair) -> Result<Matrix> {
        match &self.kind {
            FunctorKind::Trivial => {
                if p.p1() != p.left {
                    return Err(Error::InvalidFunctor(format!("{p:?} outside the full-projection category")));
                }
                Ok(Matrix::identity(1))
            }
            FunctorKind::Burnside => {
                let one = one();
                let src = pair_classes(&p.right, &one, self.fiber())?;
                let dst = pair_classes(&p.left, &one, self.fiber())?;
                let index: HashMap<&PairKey, usize> = dst.iter().enumerate().map(|(i, c)| (&c.pair.key, i)).collect();
                let mut m = Matrix::zeros(dst.len(), src.len());
                for (j, b) in src.iter().enumerate() {
                    for k in transitive_product(p, &b.pair)?.iter() {
                        let i = index[k];
                        m.set(i, j, m.get(i, j) + Coeff::one());
                    }
                }
                Ok(m)
            }
            FunctorKind::Table(t) => t
                .matrices
                .get(&(p.left.clone(), p.right.clone(), p.key.clone()))
                .map(|m| (**m).clone())
                .ok_or_else(|| Error::InvalidFunctor(format!("no matrix for class {p:?}"))),
            FunctorKind::Plus(f) => {
                let src = plus_basis(f, &p.right)?;
                let dst = plus_basis(f, &p.left)?;
                let u = BurnsideElt::basis(p, Ring::Z);
                let mut cols = Vec::with_capacity(src.len());
                for k in &src.keys {
                    let x = PlusElt::single(&p.right, k.clone(), Coeff::one());
                    cols.push(dst.to_vector(&plus_act(f, &u, &x)?)?);
                }
                Ok(Matrix::from_columns(dst.len(), &cols))
            }
        }
    }

    pub fn act_on(&self, p: &FiberedPair, x: &[Coeff]) -> Result<Vec<Coeff>> {
        Ok(self.act(p)?.apply(x))
    }

    /// `F(u)` for a linear combination of classes.
    pub fn act_elt(&self, u: &BurnsideElt) -> Result<Matrix> {
        let mut m = Matrix::zeros(self.rank(&u.left)?, self.rank(&u.right)?);
        for (p, c) in u.terms() {
            m = m.add(&self.act(&p)?.scale(c))?;
        }
        Ok(m)
    }

    /// `^g x` for `x ∈ F(H)`, through the class of `^{(g,1)}(Δ(H), 1)`.
    pub fn conj(&self, g: u32, h: &SubgroupRef, x: &[Coeff]) -> Result<Vec<Coeff>> {
        if g == 0 {
            return Ok(x.to_vec());
        }
        self.act_on(&conj_pair(g, h, self.fiber())?, x)
    }

    /// `Res^K_L x` for `L ≤ K`.
    pub fn res(&self, l: &SubgroupRef, k: &SubgroupRef, x: &[Coeff]) -> Result<Vec<Coeff>> {
        if l == k {
            return Ok(x.to_vec());
        }
        self.act_on(&diagonal_pair(l, None, l, k, self.fiber())?, x)
    }

    pub fn has_green(&self) -> bool {
        match &self.kind {
            FunctorKind::Trivial | FunctorKind::Burnside => true,
            FunctorKind::Table(_) => false,
            FunctorKind::Plus(f) => f.has_green(),
        }
    }

    /// `E_F ∈ F(1)`.
    pub fn unit(&self) -> Result<Vec<Coeff>> {
        match &self.kind {
            FunctorKind::Trivial | FunctorKind::Burnside => Ok(vec![Coeff::one()]),
            FunctorKind::Table(_) => Err(Error::NoGreen),
            FunctorKind::Plus(f) => {
                let u = crate::plus::plus_unit(f)?;
                plus_basis(f, &one())?.to_vector(&u)
            }
        }
    }

    /// `x × y ∈ F(G×H)`.
    pub fn cross(&self, g: &SubgroupRef, x: &[Coeff], h: &SubgroupRef, y: &[Coeff]) -> Result<Vec<Coeff>> {
        match &self.kind {
            FunctorKind::Trivial => Ok(vec![x[0] * y[0]]),
            FunctorKind::Burnside => {
                let one = one();
                let a = self.fiber();
                let gh = product_subgroup(g, h);
                let bg = pair_classes(g, &one, a)?;
                let bh = pair_classes(h, &one, a)?;
                let dst = pair_classes(&gh, &one, a)?;
                let index: HashMap<&PairKey, usize> = dst.iter().enumerate().map(|(i, c)| (&c.pair.key, i)).collect();
                let mut out = vec![Coeff::zero(); dst.len()];
                for (i, &xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, &yj) in y.iter().enumerate() {
                        if yj.is_zero() {
                            continue;
                        }
                        let c = burnside_cross_pair(&bg[i].pair, &bh[j].pair, &gh)?;
                        out[index[&c.canonical().key]] += xi * yj;
                    }
                }
                Ok(out)
            }
            FunctorKind::Table(_) => Err(Error::NoGreen),
            FunctorKind::Plus(f) => {
                let bg = plus_basis(f, g)?;
                let bh = plus_basis(f, h)?;
                let r = plus_cross(f, &bg.from_vector(g, x), &bh.from_vector(h, y))?;
                plus_basis(f, &product_subgroup(g, h))?.to_vector(&r)
            }
        }
    }
}

/// `^{(g,1)}(Δ(H), 1)` over `(^gH, H)`.
pub fn conj_pair(g: u32, h: &SubgroupRef, fiber: &FiberGroup) -> Result<FiberedPair> {
    let gh = h.conjugate(g);
    let p = h.parent.clone();
    iso_pair(&gh, h, fiber, |x| p.conj(g, x))
}

/// `(K×L, κ×ℓ)` over `(G×H, 1)` from pairs over `(G,1)` and `(H,1)`.
pub fn burnside_cross_pair(p: &FiberedPair, q: &FiberedPair, gh: &SubgroupRef) -> Result<FiberedPair> {
    let (k, l) = (char_of_pair(p), char_of_pair(q));
    let n = l.domain.parent.order() as u32;
    let a = &p.fiber;
    let mut t = Vec::new();
    for (&x, &vx) in k.domain.elements.iter().zip(&k.values) {
        for (&y, &vy) in l.domain.elements.iter().zip(&l.values) {
            t.push((x * n + y, 0, a.add(vx, vy)));
        }
    }
    FiberedPair::new(gh, &one(), a, t)
}

pub fn show_char(c: &FiberChar) -> String {
    format!("{:?}:{:?}", c.domain.elements, c.values)
}

/// Same-group product `x·y = F(Δ_L)(x × y)` with `Δ_L` the diagonal class
/// over `(L, L×L)`.
pub fn dot_in(f: &FunctorSpec, l: &SubgroupRef, x: &[Coeff], y: &[Coeff]) -> Result<Vec<Coeff>> {
    let ll = product_subgroup(l, l);
    let c = f.cross(l, x, l, y)?;
    f.act_on(&diagonal_embedding(l, &ll, f.fiber())?, &c)
}

/// `{(l, (l,l))}` over `(L, L×L)` with trivial character.
pub fn diagonal_embedding(l: &SubgroupRef, ll: &SubgroupRef, fiber: &FiberGroup) -> Result<FiberedPair> {
    let n = l.parent.order() as u32;
    crate::pairs::graph_pair(l, ll, fiber, l.elements.iter().map(|&x| (x, x * n + x)))
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorReport {
    pub functor: String,
    pub identity: bool,
    pub composition: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.identity && self.composition
    }
}

/// Identity law on every family group and the composition law on up to
/// `samples` random composable class pairs whose product stays in the seed.
pub fn check_functor(f: &FunctorSpec, samples: usize, seed: u64) -> Result<FunctorReport> {
    let fam = f.seed.family().to_vec();
    let mut rep =
        FunctorReport { functor: f.name.clone(), identity: true, composition: true, checked: 0, witness: None };
    for g in &fam {
        let id = identity_pair(g, f.fiber());
        if f.act(&id)?.as_ref() != &Matrix::identity(f.rank(g)?) {
            rep.identity = false;
            rep.witness = Some(format!("identity of {g:?}"));
            return Ok(rep);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while rep.checked < samples && attempts < samples * 20 && !fam.is_empty() {
        attempts += 1;
        let (g, h, k) = (fam.choose(&mut rng).unwrap(), fam.choose(&mut rng).unwrap(), fam.choose(&mut rng).unwrap());
        let (cu, cv) = (f.seed.classes(g, h)?, f.seed.classes(h, k)?);
        if cu.is_empty() || cv.is_empty() {
            continue;
        }
        let p = &cu[rng.gen_range(0..cu.len())].pair;
        let q = &cv[rng.gen_range(0..cv.len())].pair;
        let prod = mackey_product(&BurnsideElt::basis(p, Ring::Z), &BurnsideElt::basis(q, Ring::Z))?;
        if prod.terms().any(|(r, _)| !f.seed.contains(&r)) {
            continue;
        }
        rep.checked += 1;
        let lhs = f.act_elt(&prod)?;
        let rhs = f.act(p)?.mul(&*f.act(q)?)?;
        if lhs != rhs {
            rep.composition = false;
            rep.witness = Some(format!("{p:?} then {q:?}"));
            return Ok(rep);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenReport {
    pub associativity: bool,
    pub unit: bool,
    pub functoriality: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl GreenReport {
    pub fn passed(&self) -> bool {
        self.associativity && self.unit && self.functoriality
    }
}

/// Largest `|G×H×K|` for which `check_green` tests associativity.
pub const ASSOC_ORDER_BOUND: usize = 32;

/// The Green clauses on basis elements: associativity over triples of
/// `groups` up to [`ASSOC_ORDER_BOUND`], both unit laws, and functoriality
/// of cross on `samples` random class pairs. The seed must contain the
/// product classes.
pub fn check_green(f: &FunctorSpec, groups: &[SubgroupRef], samples: usize, seed: u64) -> Result<GreenReport> {
    let a = f.fiber();
    let mut rep = GreenReport { associativity: true, unit: true, functoriality: true, checked: 0, witness: None };
    let e = f.unit()?;
    let one = one();
    for g in groups {
        let n = f.rank(g)?;
        let lg = product_subgroup(&one, g);
        let rg = product_subgroup(g, &one);
        let lam = iso_pair(g, &lg, a, |x| x % g.parent.order() as u32)?;
        let rho = iso_pair(g, &rg, a, |x| x)?;
        for i in 0..n {
            let x = unit_vector(n, i);
            let l = f.act_on(&lam, &f.cross(&one, &e, g, &x)?)?;
            let r = f.act_on(&rho, &f.cross(g, &x, &one, &e)?)?;
            rep.checked += 1;
            if l != x || r != x {
                rep.unit = false;
                rep.witness = Some(format!("unit law at basis {i} of {g:?}"));
                return Ok(rep);
            }
        }
    }
    for g in groups {
        for h in groups {
            for k in groups {
                if g.order() * h.order() * k.order() > ASSOC_ORDER_BOUND {
                    continue;
                }
                let hk = product_subgroup(h, k);
                let gh = product_subgroup(g, h);
                let left = product_subgroup(&gh, k);
                let right = product_subgroup(g, &hk);
                let (nh, nk) = (h.parent.order() as u32, k.parent.order() as u32);
                let alpha = iso_pair(&left, &right, a, |e| {
                    let (x, yz) = (e / (nh * nk), e % (nh * nk));
                    (x * nh + yz / nk) * nk + yz % nk
                })?;
                let (rg, rh, rk) = (f.rank(g)?, f.rank(h)?, f.rank(k)?);
                for i in 0..rg {
                    for j in 0..rh {
                        for l in 0..rk {
                            let (x, y, z) = (unit_vector(rg, i), unit_vector(rh, j), unit_vector(rk, l));
                            let lhs = f.cross(&gh, &f.cross(g, &x, h, &y)?, k, &z)?;
                            let mut rhs = f.cross(g, &x, &hk, &f.cross(h, &y, k, &z)?)?;
                            if left != right {
                                rhs = f.act_on(&alpha, &rhs)?;
                            }
                            rep.checked += 1;
                            if lhs != rhs {
                                rep.associativity = false;
                                rep.witness = Some(format!("associativity at ({i},{j},{l}) over {g:?},{h:?},{k:?}"));
                                return Ok(rep);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < samples && attempts < samples * 20 && !groups.is_empty() {
        attempts += 1;
        let pick = |rng: &mut ChaCha8Rng| groups.choose(rng).unwrap().clone();
        let (g1, g, h1, h) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let cu = pair_classes(&g1, &g, a)?;
        let cv = pair_classes(&h1, &h, a)?;
        let p = &cu[rng.gen_range(0..cu.len())].pair;
        let q = &cv[rng.gen_range(0..cv.len())].pair;
        if !f.seed.contains(p) || !f.seed.contains(q) {
            continue;
        }
        let pq = pair_cross(p, q)?;
        let (ng, nh) = (f.rank(&g)?, f.rank(&h)?);
        let x = unit_vector(ng, rng.gen_range(0..ng));
        let y = unit_vector(nh, rng.gen_range(0..nh));
        let lhs = f.act_on(&pq, &f.cross(&g, &x, &h, &y)?)?;
        let rhs = f.cross(&g1, &f.act_on(p, &x)?, &h1, &f.act_on(q, &y)?)?;
        done += 1;
        rep.checked += 1;
        if lhs != rhs {
            rep.functoriality = false;
            rep.witness = Some(format!("cross of {p:?} and {q:?}"));
            return Ok(rep);
        }
    }
    Ok(rep)
}

/// Per-group matrices `F(G) → F'(G)`.
pub struct NatTrans {
    pub source: Arc<FunctorSpec>,
    pub target: Arc<FunctorSpec>,
    pub maps: HashMap<SubgroupRef, Matrix>,
}

impl NatTrans {
    pub fn at(&self, g: &SubgroupRef) -> Result<&Matrix> {
        self.maps.get(g).ok_or_else(|| Error::Precondition(format!("no component at {g:?}")))
    }

    /// First class over the family where `τ_G F(U) ≠ F'(U) τ_H`.
    pub fn naturality_witness(&self) -> Result<Option<FiberedPair>> {
        let fam = self.source.seed.family();
        for g in fam {
            for h in fam {
                for c in self.source.seed.classes(g, h)? {
                    if !self.target.seed.contains(&c.pair) {
                        continue;
                    }
                    let l = self.at(g)?.mul(&*self.source.act(&c.pair)?)?;
                    let r = self.target.act(&c.pair)?.mul(self.at(h)?)?;
                    if l != r {
                        return Ok(Some(c.pair));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Convenience: `[K, κ]` over `(G, 1)` as a basis vector of `B^A(G)`.
pub fn burnside_basis_vector(g: &SubgroupRef, chi: &FiberChar, fiber: &FiberGroup) -> Result<Vec<Coeff>> {
    let one = one();
    let p = pair_of_char(chi, g, &one, fiber).canonical();
    let cl = pair_classes(g, &one, fiber)?;
    let i = cl.iter().position(|c| c.pair.key == p.key).ok_or_else(|| Error::Invariant("class missing".into()))?;
    Ok(unit_vector(cl.len(), i))
}

/// Basis of `{v : rows·v = 0}` over the rationals, one vector per free column.
pub fn nullspace(rows: &[Vec<Coeff>], n: usize) -> Vec<Vec<Coeff>> {
    let mut a: Vec<Vec<Coeff>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Coeff::one() / a[r][c];
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                for k in c..n {
                    let v = a[r][k];
                    a[i][k] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Coeff::zero(); n];
            v[fc] = Coeff::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][fc];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{make_seed, parse_family, restrict_minus, Selector};

    fn q(n: i64) -> Coeff {
        Coeff::from_integer(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn matrix_arithmetic() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.mul(&Matrix::identity(2)).unwrap(), a);
        assert_eq!(a.mul(&a).unwrap(), m(&[&[7, 10], &[15, 22]]));
        assert_eq!(a.determinant().unwrap(), q(-2));
        assert_eq!(a.apply(&[q(1), q(-1)]), vec![q(-1), q(-1)]);
        assert!(a.mul(&Matrix::zeros(3, 1)).is_err());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).as_permutation(), Some(vec![1, 0]));
        assert_eq!(a.as_permutation(), None);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let ns = nullspace(&[vec![q(1), q(1), q(0)]], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(v[0] + v[1], q(0));
        }
    }

    #[test]
    fn trivial_needs_full_left_projection() {
        let a = FiberGroup::parse("2").unwrap();
        let fam = parse_family("C2-closure").unwrap();
        let all = make_seed(fam, &a, Selector::All).unwrap();
        assert!(matches!(FunctorSpec::trivial(&all), Err(Error::InvalidFunctor(_))));
        assert!(FunctorSpec::trivial(&restrict_minus(&all).unwrap()).is_ok());
    }

    #[test]
    fn burnside_ranks_and_laws() {
        let a = FiberGroup::parse("2").unwrap();
        let f = FunctorSpec::burnside(&make_seed(parse_family("S3-closure").unwrap(), &a, Selector::All).unwrap());
        let s3 = build_group("S3").unwrap().whole();
        // (H, φ) classes of S3 with A = Z/2.
        assert_eq!(f.rank(&s3).unwrap(), 6);
        assert!(check_functor(&f, 40, 1).unwrap().passed());
    }

    #[test]
    fn table_functor_from_json() {
        let a = FiberGroup::parse("2").unwrap();
        let seed = make_seed(parse_family("C1").unwrap(), &a, Selector::All).unwrap();
        let good = r#"{"groups":[{"group":"C1","labels":["x"]}],
            "actions":[{"left":0,"right":0,"triples":[[0,0,0]],"matrix":[[1]]}]}"#;
        let f = FunctorSpec::from_json(&seed, good).unwrap();
        assert_eq!(f.labels(&build_group("C1").unwrap().whole()).unwrap(), vec!["x".to_string()]);
        let bad = good.replace("[[1]]", "[[2]]");
        assert!(matches!(FunctorSpec::from_json(&seed, &bad), Err(Error::InvalidFunctor(_))));
        assert!(matches!(FunctorSpec::from_json(&seed, "{"), Err(Error::Parse(_))));
    }

    #[test]
    fn burnside_green_unit() {
        let a = FiberGroup::parse("2").unwrap();
        let gs: Vec<SubgroupRef> = ["C1", "C2"].iter().map(|s| build_group(s).unwrap().whole()).collect();
        let f = FunctorSpec::burnside(&crate::seed::open_seed(gs.clone(), &a, crate::seed::Rule::All));
        let rep = check_green(&f, &gs, 10, 0).unwrap();
        assert!(rep.unit && rep.associativity && rep.functoriality, "{:?}", rep.witness);
    }
}
