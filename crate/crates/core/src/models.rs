//! Built-in instances: free graded-commutative Hopf algebras on a chain of
//! primitive generators with a shift action of `Z`, a two-dimensional swap
//! representation, and the rank-one telescope module.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::action::{GroupActionWindow, LengthFunction, Operator};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::hopf::{BasisElement, BasisIndex, BialgebraInstance, Element, ModuleWindow, TensorElement, Window, UNIT_ID};

/// Upper limit on the number of basis monomials a builder will enumerate.
pub const MAX_MODEL_BASIS: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind {
    /// `N` odd-degree generators `x_1..x_N` of degree `m`, `|x_i| = c·i`.
    Exterior {
        n: usize,
        m: u32,
        c: BigRational,
        lambda: BigRational,
    },
    /// `N` even-degree generators of degree `m`, `|x_i| = c·i`.
    Polynomial {
        n: usize,
        m: u32,
        c: BigRational,
        lambda: BigRational,
    },
    /// Odd generators `y_1..` of degree 1 next to even generators `x_1..` of
    /// degree 2. Products like `y_1 y_2` sit in degree 2 without being
    /// primitive, which makes this a natural extraction fixture.
    Mixed {
        odd: usize,
        even: usize,
        c: BigRational,
        lambda: BigRational,
    },
    Telescope { k_max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub field: FieldSpec,
    pub window: Window,
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ModelSpec {
    /// Exterior model with `m = 1`, `c = λ = 1` and a window holding every
    /// monomial.
    pub fn exterior(n: usize, field: FieldSpec) -> Self {
        ModelSpec {
            kind: ModelKind::Exterior {
                n,
                m: 1,
                c: BigRational::one(),
                lambda: BigRational::one(),
            },
            field,
            window: Window {
                max_degree: u32::try_from(n).unwrap_or(u32::MAX),
                max_value: int(n * (n + 1) / 2),
            },
        }
    }

    /// Polynomial model with `c = λ = 1`. The default window stops at degree
    /// `N·m`.
    pub fn polynomial(n: usize, m: u32, field: FieldSpec) -> Self {
        ModelSpec {
            kind: ModelKind::Polynomial {
                n,
                m,
                c: BigRational::one(),
                lambda: BigRational::one(),
            },
            field,
            window: Window {
                max_degree: u32::try_from(n).unwrap_or(u32::MAX).saturating_mul(m),
                max_value: int(n * n),
            },
        }
    }

    pub fn mixed(odd: usize, even: usize, field: FieldSpec) -> Self {
        ModelSpec {
            kind: ModelKind::Mixed {
                odd,
                even,
                c: BigRational::one(),
                lambda: BigRational::one(),
            },
            field,
            window: Window {
                max_degree: 2,
                max_value: int(2 * odd.max(even)),
            },
        }
    }

    pub fn telescope(k_max: u32, field: FieldSpec) -> Self {
        ModelSpec {
            kind: ModelKind::Telescope { k_max },
            field,
            window: Window {
                max_degree: 1,
                max_value: BigRational::zero(),
            },
        }
    }
}

/// Either a bialgebra with its action or a bare module with its action.
#[derive(Debug, Clone)]
pub enum BuiltModel {
    Bialgebra(BialgebraInstance, GroupActionWindow),
    Module(ModuleWindow, GroupActionWindow),
}

pub fn build_model(spec: &ModelSpec) -> Result<BuiltModel> {
    match &spec.kind {
        ModelKind::Exterior { .. } => {
            build_exterior_model(spec).map(|(i, a)| BuiltModel::Bialgebra(i, a))
        }
        ModelKind::Polynomial { .. } => {
            build_polynomial_model(spec).map(|(i, a)| BuiltModel::Bialgebra(i, a))
        }
        ModelKind::Mixed { .. } => build_mixed_model(spec).map(|(i, a)| BuiltModel::Bialgebra(i, a)),
        ModelKind::Telescope { k_max } => {
            build_telescope_model(spec.field, *k_max).map(|t| BuiltModel::Module(t.module, t.action))
        }
    }
}

#[derive(Debug, Clone)]
struct FreeGenerator {
    name: String,
    degree: u32,
    value: BigRational,
}

impl FreeGenerator {
    fn odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

fn check_slopes(c: &BigRational, lambda: &BigRational) -> Result<()> {
    if !c.is_positive() || !lambda.is_positive() {
        return Err(Error::InvalidModel("c and λ must be positive".into()));
    }
    if c > lambda {
        return Err(Error::InvalidModel(format!(
            "c = {c} exceeds λ = {lambda}; the shift would break |gv| <= |g| + |v|"
        )));
    }
    Ok(())
}

fn chain(prefix: &str, n: usize, degree: u32, c: &BigRational) -> Vec<FreeGenerator> {
    (1..=n)
        .map(|i| FreeGenerator {
            name: format!("{prefix}{i}"),
            degree,
            value: c * int(i),
        })
        .collect()
}

pub fn build_exterior_model(spec: &ModelSpec) -> Result<(BialgebraInstance, GroupActionWindow)> {
    let ModelKind::Exterior { n, m, c, lambda } = &spec.kind else {
        return Err(Error::InvalidModel("expected an exterior model spec".into()));
    };
    if m % 2 == 0 {
        return Err(Error::InvalidModel(format!("exterior generators need odd degree, got {m}")));
    }
    check_slopes(c, lambda)?;
    let gens = chain("x", *n, *m, c);
    build_free(spec.field, &gens, &spec.window, &[(0..*n).collect()], lambda)
}

pub fn build_polynomial_model(spec: &ModelSpec) -> Result<(BialgebraInstance, GroupActionWindow)> {
    let ModelKind::Polynomial { n, m, c, lambda } = &spec.kind else {
        return Err(Error::InvalidModel("expected a polynomial model spec".into()));
    };
    if *m == 0 || m % 2 == 1 {
        return Err(Error::InvalidModel(format!(
            "polynomial generators need positive even degree, got {m}"
        )));
    }
    check_slopes(c, lambda)?;
    let gens = chain("x", *n, *m, c);
    build_free(spec.field, &gens, &spec.window, &[(0..*n).collect()], lambda)
}

pub fn build_mixed_model(spec: &ModelSpec) -> Result<(BialgebraInstance, GroupActionWindow)> {
    let ModelKind::Mixed { odd, even, c, lambda } = &spec.kind else {
        return Err(Error::InvalidModel("expected a mixed model spec".into()));
    };
    check_slopes(c, lambda)?;
    let mut gens = chain("y", *odd, 1, c);
    gens.extend(chain("x", *even, 2, c));
    let chains = vec![(0..*odd).collect(), (*odd..odd + even).collect()];
    build_free(spec.field, &gens, &spec.window, &chains, lambda)
}

#[derive(Debug, Clone)]
struct Monomial {
    exps: Vec<u32>,
    degree: u64,
    value: BigRational,
    key: Vec<usize>,
}

fn enumerate_monomials(gens: &[FreeGenerator], window: &Window) -> Result<Vec<Monomial>> {
    fn go(
        gens: &[FreeGenerator],
        window: &Window,
        at: usize,
        current: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) -> Result<()> {
        if at == gens.len() {
            if out.len() >= MAX_MODEL_BASIS {
                return Err(Error::InvalidModel(format!(
                    "window holds more than {MAX_MODEL_BASIS} monomials"
                )));
            }
            out.push(current.clone());
            return Ok(());
        }
        go(gens, window, at + 1, current, out)?;
        let g = &gens[at];
        let cap = if g.odd() { 1 } else { u32::MAX };
        let mut pushed = 0;
        while pushed < cap {
            let degree = current.degree + u64::from(g.degree);
            let value = &current.value + &g.value;
            if !window.contains(degree, &value) || (g.degree == 0 && g.value.is_zero()) {
                break;
            }
            current.degree = degree;
            current.value = value;
            current.exps[at] += 1;
            current.key.push(at);
            pushed += 1;
            go(gens, window, at + 1, current, out)?;
        }
        for _ in 0..pushed {
            current.degree -= u64::from(g.degree);
            current.value = &current.value - &g.value;
            current.exps[at] -= 1;
            current.key.pop();
        }
        Ok(())
    }

    let mut out = Vec::new();
    let mut start = Monomial {
        exps: vec![0; gens.len()],
        degree: 0,
        value: BigRational::zero(),
        key: Vec::new(),
    };
    go(gens, window, 0, &mut start, &mut out)?;
    out.sort_by(|a, b| (a.degree, &a.key).cmp(&(b.degree, &b.key)));
    Ok(out)
}

fn monomial_id(gens: &[FreeGenerator], exps: &[u32]) -> String {
    let mut id = String::new();
    for (g, &e) in gens.iter().zip(exps) {
        match e {
            0 => {}
            1 => id.push_str(&g.name),
            _ => id.push_str(&format!("{}^{e}", g.name)),
        }
    }
    if id.is_empty() {
        UNIT_ID.to_string()
    } else {
        id
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Builds the free graded-commutative bialgebra on `gens` truncated to
/// `window`, with a shift `t` along each chain of generator indices.
fn build_free(
    field: FieldSpec,
    gens: &[FreeGenerator],
    window: &Window,
    chains: &[Vec<usize>],
    lambda: &BigRational,
) -> Result<(BialgebraInstance, GroupActionWindow)> {
    let min_degree = gens.iter().map(|g| g.degree).max().unwrap_or(0);
    let min_value = gens.iter().map(|g| g.value.clone()).max().unwrap_or_else(BigRational::zero);
    if !window.contains(u64::from(min_degree), &min_value) {
        return Err(Error::WindowTooSmall {
            min_degree: u64::from(min_degree),
            min_value,
        });
    }

    let monomials = enumerate_monomials(gens, window)?;
    let index: HashMap<&[u32], BasisIndex> = monomials
        .iter()
        .enumerate()
        .map(|(i, mono)| (mono.exps.as_slice(), i))
        .collect();
    let basis = monomials
        .iter()
        .map(|mono| BasisElement {
            id: monomial_id(gens, &mono.exps),
            degree: u32::try_from(mono.degree).expect("degree bounded by the window"),
            value: mono.value.clone(),
        })
        .collect();
    let module = ModuleWindow::new(field, basis, window.clone())?;
    let odd: Vec<bool> = gens.iter().map(FreeGenerator::odd).collect();

    // products, visiting pairs in value order so the scan stops at the window
    let mut by_value: Vec<BasisIndex> = (0..monomials.len()).collect();
    by_value.sort_by(|&a, &b| monomials[a].value.cmp(&monomials[b].value));
    let mut product = BTreeMap::new();
    for a in 0..monomials.len() {
        let ma = &monomials[a];
        if ma.key.is_empty() {
            continue;
        }
        for &b in &by_value {
            let mb = &monomials[b];
            if &ma.value + &mb.value > window.max_value {
                break;
            }
            if mb.key.is_empty() || ma.degree + mb.degree > u64::from(window.max_degree) {
                continue;
            }
            let exps: Vec<u32> = ma.exps.iter().zip(&mb.exps).map(|(x, y)| x + y).collect();
            if exps.iter().zip(&odd).any(|(&e, &o)| o && e > 1) {
                continue;
            }
            let mut inversions = 0usize;
            for &i in ma.key.iter().filter(|&&i| odd[i]) {
                inversions += mb.key.iter().filter(|&&j| odd[j] && i > j).count();
            }
            let target = index[exps.as_slice()];
            let sign = field.one().sign(inversions.is_multiple_of(2));
            product.insert((a, b), Element::monomial(target, sign));
        }
    }

    let mut coproduct = Vec::with_capacity(monomials.len());
    for mono in &monomials {
        let mut delta = TensorElement::zero();
        let mut left = vec![0u32; gens.len()];
        loop {
            let right: Vec<u32> = mono.exps.iter().zip(&left).map(|(a, b)| a - b).collect();
            let mut inversions = 0usize;
            for (i, &r) in right.iter().enumerate() {
                if odd[i] && r == 1 {
                    inversions += (i + 1..gens.len()).filter(|&j| odd[j] && left[j] == 1).count();
                }
            }
            let mut coefficient = BigInt::one();
            for (i, &b) in left.iter().enumerate() {
                coefficient *= binomial(mono.exps[i], b);
            }
            if inversions % 2 == 1 {
                coefficient = -coefficient;
            }
            delta.add_term(
                index[left.as_slice()],
                index[right.as_slice()],
                field.from_bigint(&coefficient),
            );
            // next sub-exponent vector in odometer order
            let mut i = 0;
            while i < left.len() && left[i] == mono.exps[i] {
                left[i] = 0;
                i += 1;
            }
            if i == left.len() {
                break;
            }
            left[i] += 1;
        }
        coproduct.push(delta);
    }

    let instance = BialgebraInstance::new(module, product, coproduct)?;
    let action = shift_action(&instance, gens, chains, lambda)?;
    Ok((instance, action))
}

fn shift_action(
    instance: &BialgebraInstance,
    gens: &[FreeGenerator],
    chains: &[Vec<usize>],
    lambda: &BigRational,
) -> Result<GroupActionWindow> {
    let field = instance.field();
    let module = instance.module();
    let unit = instance.unit_index();
    let mut forward = BTreeMap::from([(unit, Element::monomial(unit, field.one()))]);
    let mut inverse = forward.clone();
    for chain in chains {
        for pair in chain.windows(2) {
            let from = module.lookup(&gens[pair[0]].name)?;
            let to = module.lookup(&gens[pair[1]].name)?;
            forward.insert(from, Element::monomial(to, field.one()));
            inverse.insert(to, Element::monomial(from, field.one()));
        }
    }
    GroupActionWindow::new(
        field,
        BTreeMap::from([("t".to_string(), Operator::new(forward, inverse))]),
        LengthFunction::new(BTreeMap::from([("t".to_string(), lambda.clone())]))?,
    )
}

/// `Q²` with `g` the coordinate swap and `h = diag(1, -1)`, both of length 1.
pub fn build_swap_model(field: FieldSpec) -> (ModuleWindow, GroupActionWindow) {
    let basis = ["e1", "e2"]
        .iter()
        .map(|id| BasisElement {
            id: id.to_string(),
            degree: 1,
            value: BigRational::zero(),
        })
        .collect();
    let window = Window {
        max_degree: 1,
        max_value: BigRational::zero(),
    };
    let module = ModuleWindow::new(field, basis, window).expect("fixed basis is valid");
    let one = field.one();
    let e = |i: usize, c: &crate::field::Scalar| Element::monomial(i, c.clone());
    let swap = BTreeMap::from([(0, e(1, &one)), (1, e(0, &one))]);
    let flip = BTreeMap::from([(0, e(0, &one)), (1, e(1, &-&one))]);
    let generators = BTreeMap::from([
        ("g".to_string(), Operator::new(swap.clone(), swap)),
        ("h".to_string(), Operator::new(flip.clone(), flip)),
    ]);
    let lengths = LengthFunction::new(BTreeMap::from([
        ("g".to_string(), BigRational::one()),
        ("h".to_string(), BigRational::one()),
    ]))
    .expect("positive weights");
    let action = GroupActionWindow::new(field, generators, lengths).expect("named generators");
    (module, action)
}

/// Integer-lattice view of the telescope orbit: the subgroup of the rational
/// line generated by the orbit points seen so far is `2^exponent · Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct TelescopeState {
    pub exponent: i64,
}


impl TelescopeState {
    /// Adds the orbit point `t^i v = 2^i`.
    pub fn absorb(&mut self, i: i64) {
        self.exponent = self.exponent.min(i);
    }

    /// The positive generator `2^exponent` of the subgroup.
    pub fn generator(&self) -> BigRational {
        let two = BigInt::from(2);
        let magnitude = two.pow(u32::try_from(self.exponent.unsigned_abs()).unwrap_or(u32::MAX));
        if self.exponent >= 0 {
            BigRational::from_integer(magnitude)
        } else {
            BigRational::new(BigInt::one(), magnitude)
        }
    }
}

/// Exponent of the generator of the subgroup spanned by `t^i v`, `|i| <= k`.
pub fn orbit_subgroup_generator(k: u32) -> i64 {
    let mut state = TelescopeState::default();
    for i in -i64::from(k)..=i64::from(k) {
        state.absorb(i);
    }
    state.exponent
}

#[derive(Debug, Clone)]
pub struct TelescopeModel {
    pub module: ModuleWindow,
    pub action: GroupActionWindow,
    pub k_max: u32,
}

impl TelescopeModel {
    /// Lattice bookkeeping for the orbit `t^i v`, `|i| <= k_max`.
    pub fn lattice(&self) -> TelescopeState {
        TelescopeState {
            exponent: orbit_subgroup_generator(self.k_max),
        }
    }
}

/// A single vector `e` in degree 1 on which `t` acts by 2. In characteristic
/// 2 that line collapses and the module is zero.
pub fn build_telescope_model(field: FieldSpec, k_max: u32) -> Result<TelescopeModel> {
    if k_max == 0 {
        return Err(Error::InvalidModel("telescope needs k_max >= 1".into()));
    }
    let window = Window {
        max_degree: 1,
        max_value: BigRational::zero(),
    };
    let (basis, forward, inverse) = if field.characteristic() == 2 {
        (Vec::new(), BTreeMap::new(), BTreeMap::new())
    } else {
        let two = field.from_i64(2);
        let half = two.inv().expect("2 is invertible away from characteristic 2");
        (
            vec![BasisElement {
                id: "e".into(),
                degree: 1,
                value: BigRational::zero(),
            }],
            BTreeMap::from([(0, Element::monomial(0, two))]),
            BTreeMap::from([(0, Element::monomial(0, half))]),
        )
    };
    let module = ModuleWindow::new(field, basis, window)?;
    let action = GroupActionWindow::new(
        field,
        BTreeMap::from([("t".to_string(), Operator::new(forward, inverse))]),
        LengthFunction::new(BTreeMap::from([("t".to_string(), BigRational::one())]))?,
    )?;
    Ok(TelescopeModel {
        module,
        action,
        k_max,
    })
}
