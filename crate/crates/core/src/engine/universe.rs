//! Hash-consed finite universe of arrow terms, enumerated by size.

use std::collections::HashMap;

use super::{EngineError, Preset, TheoryConfig};
use crate::term::{ArrowTerm, Formula, TypeError};

pub type FId = u32;
pub type NId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FNode {
    Letter(u32),
    Top,
    Conj(FId, FId),
    Tensor(FId, FId),
}

/// Interned formulae.
#[derive(Clone, Debug, Default)]
pub struct Formulas {
    nodes: Vec<FNode>,
    depth: Vec<u32>,
    index: HashMap<FNode, FId>,
    letters: Vec<String>,
}

impl Formulas {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, f: FId) -> FNode {
        self.nodes[f as usize]
    }

    pub fn depth(&self, f: FId) -> u32 {
        self.depth[f as usize]
    }

    pub fn lookup(&self, n: FNode) -> Option<FId> {
        self.index.get(&n).copied()
    }

    fn letter_id(&mut self, p: &str) -> u32 {
        match self.letters.iter().position(|l| l == p) {
            Some(i) => i as u32,
            None => {
                self.letters.push(p.to_string());
                self.letters.len() as u32 - 1
            }
        }
    }

    pub fn intern_node(&mut self, n: FNode) -> FId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let d = match n {
            FNode::Letter(_) | FNode::Top => 0,
            FNode::Conj(a, b) | FNode::Tensor(a, b) => 1 + self.depth(a).max(self.depth(b)),
        };
        let id = self.nodes.len() as FId;
        self.nodes.push(n);
        self.depth.push(d);
        self.index.insert(n, id);
        id
    }

    pub fn intern(&mut self, a: &Formula) -> FId {
        let n = match a {
            Formula::Letter(p) => FNode::Letter(self.letter_id(p)),
            Formula::Top => FNode::Top,
            Formula::Conj(l, r) => FNode::Conj(self.intern(l), self.intern(r)),
            Formula::Tensor(l, r) => FNode::Tensor(self.intern(l), self.intern(r)),
        };
        self.intern_node(n)
    }

    /// Id of `a` if it was interned.
    pub fn find(&self, a: &Formula) -> Option<FId> {
        let n = match a {
            Formula::Letter(p) => FNode::Letter(self.letters.iter().position(|l| l == p)? as u32),
            Formula::Top => FNode::Top,
            Formula::Conj(l, r) => FNode::Conj(self.find(l)?, self.find(r)?),
            Formula::Tensor(l, r) => FNode::Tensor(self.find(l)?, self.find(r)?),
        };
        self.lookup(n)
    }

    pub fn formula(&self, f: FId) -> Formula {
        match self.get(f) {
            FNode::Letter(i) => Formula::letter(self.letters[i as usize].clone()),
            FNode::Top => Formula::Top,
            FNode::Conj(a, b) => Formula::conj(self.formula(a), self.formula(b)),
            FNode::Tensor(a, b) => Formula::tensor(self.formula(a), self.formula(b)),
        }
    }
}

/// One hash-consed arrow term. Children are node ids; `w{A}` is stored as
/// `Pair(id A, id A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Id(FId),
    P1(FId, FId),
    P2(FId, FId),
    Bang(FId),
    Sym(FId, FId),
    Assoc(FId, FId, FId),
    Gen(u32),
    Inv(u32),
    Comp(NId, NId),
    Pair(NId, NId),
    Tens(NId, NId),
}

impl Node {
    pub fn children(self) -> Option<(NId, NId)> {
        match self {
            Node::Comp(a, b) | Node::Pair(a, b) | Node::Tens(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Same constructor with children replaced by `f`.
    pub fn map_children(self, mut f: impl FnMut(NId) -> NId) -> Node {
        match self {
            Node::Comp(a, b) => Node::Comp(f(a), f(b)),
            Node::Pair(a, b) => Node::Pair(f(a), f(b)),
            Node::Tens(a, b) => Node::Tens(f(a), f(b)),
            leaf => leaf,
        }
    }
}

/// A named arrow of the universe: a signature generator or an inverse witness.
#[derive(Clone, Debug)]
pub struct Named {
    pub name: String,
    pub source: FId,
    pub target: FId,
}

/// All terms up to a size and depth bound, plus seeded terms.
#[derive(Clone, Debug)]
pub struct Universe {
    pub formulas: Formulas,
    pub preset: Preset,
    nodes: Vec<Node>,
    types: Vec<(FId, FId)>,
    sizes: Vec<u32>,
    gens: Vec<Box<[u32]>>,
    index: HashMap<Node, NId>,
    pub gen_table: Vec<Named>,
    pub inv_table: Vec<Named>,
    objects: Vec<FId>,
    cap: usize,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Formulae within the depth bound, in enumeration order.
    pub fn objects(&self) -> &[FId] {
        &self.objects
    }

    pub fn node(&self, n: NId) -> Node {
        self.nodes[n as usize]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn ty(&self, n: NId) -> (FId, FId) {
        self.types[n as usize]
    }

    pub fn size_of(&self, n: NId) -> u32 {
        self.sizes[n as usize]
    }

    /// Sorted generator indices occurring in the term; witnesses excluded.
    pub fn gens_of(&self, n: NId) -> &[u32] {
        &self.gens[n as usize]
    }

    pub fn gen_names(&self, n: NId) -> Vec<String> {
        self.gens_of(n)
            .iter()
            .map(|&g| self.gen_table[g as usize].name.clone())
            .collect()
    }

    pub fn is_structural(&self, n: NId) -> bool {
        match self.node(n) {
            Node::Gen(_) | Node::Inv(_) => false,
            other => match other.children() {
                Some((a, b)) => self.is_structural(a) && self.is_structural(b),
                None => true,
            },
        }
    }

    pub fn lookup(&self, n: &Node) -> Option<NId> {
        self.index.get(n).copied()
    }

    fn leaf_type(&self, n: Node) -> (FId, FId) {
        let f = &self.formulas;
        match n {
            Node::Id(a) => (a, a),
            Node::P1(a, b) => (f.lookup(FNode::Conj(a, b)).expect("interned"), a),
            Node::P2(a, b) => (f.lookup(FNode::Conj(a, b)).expect("interned"), b),
            Node::Bang(a) => (a, f.lookup(FNode::Top).expect("interned")),
            Node::Sym(a, b) => (
                f.lookup(FNode::Tensor(a, b)).expect("interned"),
                f.lookup(FNode::Tensor(b, a)).expect("interned"),
            ),
            Node::Assoc(a, b, c) => {
                let bc = f.lookup(FNode::Tensor(b, c)).expect("interned");
                let ab = f.lookup(FNode::Tensor(a, b)).expect("interned");
                (
                    f.lookup(FNode::Tensor(a, bc)).expect("interned"),
                    f.lookup(FNode::Tensor(ab, c)).expect("interned"),
                )
            }
            Node::Gen(i) => {
                let g = &self.gen_table[i as usize];
                (g.source, g.target)
            }
            Node::Inv(i) => {
                let g = &self.inv_table[i as usize];
                (g.source, g.target)
            }
            _ => unreachable!("binary node"),
        }
    }

    /// Adds `n` with the given type; callers guarantee well-typedness.
    fn push(&mut self, n: Node, ty: (FId, FId), size: u32) -> Result<(NId, bool), EngineError> {
        if let Some(&id) = self.index.get(&n) {
            return Ok((id, false));
        }
        if self.nodes.len() >= self.cap {
            return Err(EngineError::ResourceLimit {
                terms: self.nodes.len(),
                cap: self.cap,
            });
        }
        let gens: Box<[u32]> = match n {
            Node::Gen(i) => Box::new([i]),
            _ => match n.children() {
                Some((a, b)) => {
                    let mut v: Vec<u32> = self.gens_of(a).iter().chain(self.gens_of(b)).copied().collect();
                    v.sort_unstable();
                    v.into_boxed_slice()
                }
                None => Box::new([]),
            },
        };
        let id = self.nodes.len() as NId;
        self.nodes.push(n);
        self.types.push(ty);
        self.sizes.push(size);
        self.gens.push(gens);
        self.index.insert(n, id);
        Ok((id, true))
    }

    fn push_leaf(&mut self, n: Node) -> Result<(NId, bool), EngineError> {
        let ty = self.leaf_type(n);
        self.push(n, ty, 1)
    }

    /// Interns a formula and all its subformulae.
    pub fn intern_formula(&mut self, a: &Formula) -> FId {
        self.formulas.intern(a)
    }

    /// Interns `t` and its subterms, checking types on the way.
    pub fn intern_term(&mut self, t: &ArrowTerm) -> Result<NId, EngineError> {
        use ArrowTerm::*;
        let leaf = |u: &mut Self, n: Node| u.push_leaf(n).map(|r| r.0);
        match t {
            Id(a) => {
                let a = self.intern_formula(a);
                leaf(self, Node::Id(a))
            }
            Proj1(a, b) | Proj2(a, b) => {
                let (fa, fb) = (self.intern_formula(a), self.intern_formula(b));
                self.formulas.intern_node(FNode::Conj(fa, fb));
                let n = if matches!(t, Proj1(..)) {
                    Node::P1(fa, fb)
                } else {
                    Node::P2(fa, fb)
                };
                leaf(self, n)
            }
            Bang(a) => {
                let a = self.intern_formula(a);
                self.formulas.intern_node(FNode::Top);
                leaf(self, Node::Bang(a))
            }
            Sym(a, b) => {
                let (fa, fb) = (self.intern_formula(a), self.intern_formula(b));
                self.formulas.intern_node(FNode::Tensor(fa, fb));
                self.formulas.intern_node(FNode::Tensor(fb, fa));
                leaf(self, Node::Sym(fa, fb))
            }
            Assoc(a, b, c) => {
                let (fa, fb, fc) = (
                    self.intern_formula(a),
                    self.intern_formula(b),
                    self.intern_formula(c),
                );
                let bc = self.formulas.intern_node(FNode::Tensor(fb, fc));
                let ab = self.formulas.intern_node(FNode::Tensor(fa, fb));
                self.formulas.intern_node(FNode::Tensor(fa, bc));
                self.formulas.intern_node(FNode::Tensor(ab, fc));
                leaf(self, Node::Assoc(fa, fb, fc))
            }
            Diag(a) => self.intern_term(&ArrowTerm::pair(Id(a.clone()), Id(a.clone()))),
            Gen {
                name,
                source,
                target,
            } => {
                let i = self
                    .gen_table
                    .iter()
                    .position(|g| &g.name == name)
                    .ok_or_else(|| EngineError::Type(TypeError::UnknownGenerator(name.clone())))?;
                let g = &self.gen_table[i];
                if self.formulas.find(source) != Some(g.source) || self.formulas.find(target) != Some(g.target) {
                    return Err(EngineError::Type(TypeError::GeneratorTypeMismatch {
                        name: name.clone(),
                        declared: format!(
                            "{} -> {}",
                            self.formulas.formula(g.source),
                            self.formulas.formula(g.target)
                        ),
                        used: format!("{source} -> {target}"),
                    }));
                }
                leaf(self, Node::Gen(i as u32))
            }
            InvWitness {
                name,
                source,
                target,
            } => {
                let i = match self.inv_table.iter().position(|g| &g.name == name) {
                    Some(i) => i,
                    None => {
                        let (s, tg) = (self.intern_formula(source), self.intern_formula(target));
                        self.inv_table.push(Named {
                            name: name.clone(),
                            source: s,
                            target: tg,
                        });
                        self.inv_table.len() - 1
                    }
                };
                leaf(self, Node::Inv(i as u32))
            }
            Comp(g, f) => {
                let (g, f) = (self.intern_term(g)?, self.intern_term(f)?);
                let ((fs, ft), (gs, gt)) = (self.ty(f), self.ty(g));
                if ft != gs {
                    return Err(EngineError::Type(TypeError::CompositionMismatch {
                        inner_target: self.formulas.formula(ft),
                        outer_source: self.formulas.formula(gs),
                    }));
                }
                let size = self.size_of(f) + self.size_of(g) + 1;
                self.push(Node::Comp(g, f), (fs, gt), size).map(|r| r.0)
            }
            Pair(x, y) => {
                let (x, y) = (self.intern_term(x)?, self.intern_term(y)?);
                let ((xs, xt), (ys, yt)) = (self.ty(x), self.ty(y));
                if xs != ys {
                    return Err(EngineError::Type(TypeError::PairSourceMismatch {
                        left: self.formulas.formula(xs),
                        right: self.formulas.formula(ys),
                    }));
                }
                let tgt = self.formulas.intern_node(FNode::Conj(xt, yt));
                let size = if matches!((self.node(x), self.node(y)), (Node::Id(a), Node::Id(b)) if a == b) {
                    1
                } else {
                    self.size_of(x) + self.size_of(y) + 1
                };
                self.push(Node::Pair(x, y), (xs, tgt), size).map(|r| r.0)
            }
            TensorOf(x, y) => {
                let (x, y) = (self.intern_term(x)?, self.intern_term(y)?);
                let ((xs, xt), (ys, yt)) = (self.ty(x), self.ty(y));
                let src = self.formulas.intern_node(FNode::Tensor(xs, ys));
                let tgt = self.formulas.intern_node(FNode::Tensor(xt, yt));
                let size = self.size_of(x) + self.size_of(y) + 1;
                self.push(Node::Tens(x, y), (src, tgt), size).map(|r| r.0)
            }
        }
    }

    fn is_diag(&self, n: NId) -> Option<FId> {
        match self.node(n) {
            Node::Pair(a, b) if a == b => match self.node(a) {
                Node::Id(f) => Some(f),
                _ => None,
            },
            _ => None,
        }
    }

    /// Converts a node back to a term; `Pair(id A, id A)` becomes `w{A}`.
    pub fn term(&self, n: NId) -> ArrowTerm {
        let f = |x: FId| self.formulas.formula(x);
        if let Some(a) = self.is_diag(n) {
            return ArrowTerm::Diag(f(a));
        }
        match self.node(n) {
            Node::Id(a) => ArrowTerm::Id(f(a)),
            Node::P1(a, b) => ArrowTerm::Proj1(f(a), f(b)),
            Node::P2(a, b) => ArrowTerm::Proj2(f(a), f(b)),
            Node::Bang(a) => ArrowTerm::Bang(f(a)),
            Node::Sym(a, b) => ArrowTerm::Sym(f(a), f(b)),
            Node::Assoc(a, b, c) => ArrowTerm::Assoc(f(a), f(b), f(c)),
            Node::Gen(i) => {
                let g = &self.gen_table[i as usize];
                ArrowTerm::gen(g.name.clone(), f(g.source), f(g.target))
            }
            Node::Inv(i) => {
                let g = &self.inv_table[i as usize];
                ArrowTerm::InvWitness {
                    name: g.name.clone(),
                    source: f(g.source),
                    target: f(g.target),
                }
            }
            Node::Comp(g, h) => ArrowTerm::comp(self.term(g), self.term(h)),
            Node::Pair(x, y) => ArrowTerm::pair(self.term(x), self.term(y)),
            Node::Tens(x, y) => ArrowTerm::tensor_of(self.term(x), self.term(y)),
        }
    }
}

fn formulas_up_to(preset: Preset, letters: &[String], depth: usize, out: &mut Formulas) -> Vec<FId> {
    let mut all: Vec<FId> = letters.iter().map(|p| out.intern(&Formula::letter(p.clone()))).collect();
    if preset == Preset::CartesianWithTop {
        all.push(out.intern_node(FNode::Top));
    }
    for _ in 0..depth {
        let snapshot = all.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                let n = match preset {
                    Preset::SymmetricAssociative => FNode::Tensor(a, b),
                    _ => FNode::Conj(a, b),
                };
                if out.lookup(n).is_none() {
                    all.push(out.intern_node(n));
                }
            }
        }
    }
    all
}

/// Enumerates every term of size at most `size` over formulae of depth at
/// most `depth`, then interns the seed terms of `cfg`.
pub(crate) fn enumerate(
    cfg: &TheoryConfig,
    size: usize,
    depth: usize,
    cap: usize,
    extra: &[ArrowTerm],
) -> Result<Universe, EngineError> {
    let mut u = Universe {
        formulas: Formulas::default(),
        preset: cfg.preset,
        nodes: Vec::new(),
        types: Vec::new(),
        sizes: Vec::new(),
        gens: Vec::new(),
        index: HashMap::new(),
        gen_table: Vec::new(),
        inv_table: Vec::new(),
        objects: Vec::new(),
        cap,
    };
    let letters: Vec<String> = cfg.sig.letters.iter().cloned().collect();
    let fset = formulas_up_to(cfg.preset, &letters, depth, &mut u.formulas);
    u.objects = fset.clone();
    let in_bound = |u: &Universe, f: Option<FId>| f.filter(|&f| u.formulas.depth(f) as usize <= depth);
    for g in &cfg.sig.arrows {
        let (s, t) = (u.intern_formula(&g.source), u.intern_formula(&g.target));
        u.gen_table.push(Named {
            name: g.name.clone(),
            source: s,
            target: t,
        });
    }
    for w in &cfg.witnesses {
        let (s, t) = (u.intern_formula(&w.source), u.intern_formula(&w.target));
        u.inv_table.push(Named {
            name: w.name.clone(),
            source: s,
            target: t,
        });
    }

    let mut levels: Vec<Vec<NId>> = vec![Vec::new(); size + 1];
    if size >= 1 {
        let mut atoms = Vec::new();
        for &a in &fset {
            atoms.push(Node::Id(a));
        }
        for &a in &fset {
            for &b in &fset {
                match cfg.preset {
                    Preset::SymmetricAssociative => {
                        let ab = in_bound(&u, u.formulas.lookup(FNode::Tensor(a, b)));
                        let ba = in_bound(&u, u.formulas.lookup(FNode::Tensor(b, a)));
                        if ab.is_some() && ba.is_some() {
                            atoms.push(Node::Sym(a, b));
                        }
                        for &c in &fset {
                            let ok = (|| {
                                let bc = u.formulas.lookup(FNode::Tensor(b, c))?;
                                let ab = u.formulas.lookup(FNode::Tensor(a, b))?;
                                in_bound(&u, u.formulas.lookup(FNode::Tensor(a, bc)))?;
                                in_bound(&u, u.formulas.lookup(FNode::Tensor(ab, c)))
                            })();
                            if ok.is_some() {
                                atoms.push(Node::Assoc(a, b, c));
                            }
                        }
                    }
                    _ => {
                        if in_bound(&u, u.formulas.lookup(FNode::Conj(a, b))).is_some() {
                            atoms.push(Node::P1(a, b));
                            atoms.push(Node::P2(a, b));
                        }
                    }
                }
            }
        }
        if cfg.preset == Preset::CartesianWithTop {
            for &a in &fset {
                atoms.push(Node::Bang(a));
            }
        }
        for i in 0..u.gen_table.len() {
            atoms.push(Node::Gen(i as u32));
        }
        for i in 0..u.inv_table.len() {
            atoms.push(Node::Inv(i as u32));
        }
        for n in atoms {
            let (id, fresh) = u.push_leaf(n)?;
            if fresh {
                levels[1].push(id);
            }
        }
        if cfg.preset != Preset::SymmetricAssociative {
            for &a in &fset {
                if in_bound(&u, u.formulas.lookup(FNode::Conj(a, a))).is_some() {
                    let ida = u.lookup(&Node::Id(a)).expect("identity atoms come first");
                    let aa = u.formulas.lookup(FNode::Conj(a, a)).unwrap();
                    let (id, fresh) = u.push(Node::Pair(ida, ida), (a, aa), 1)?;
                    if fresh {
                        levels[1].push(id);
                    }
                }
            }
        }
    }

    for s in 2..=size {
        // by_src[level] maps a source formula to the terms of that level.
        let by_src: Vec<HashMap<FId, Vec<NId>>> = levels
            .iter()
            .map(|lvl| {
                let mut m: HashMap<FId, Vec<NId>> = HashMap::new();
                for &n in lvl {
                    m.entry(u.ty(n).0).or_default().push(n);
                }
                m
            })
            .collect();
        let mut fresh_level = Vec::new();
        for i in 1..=s - 2 {
            let j = s - 1 - i;
            // Comp(g, f) with |g| = i, |f| = j.
            for &f in &levels[j] {
                let (fs, ft) = u.ty(f);
                if let Some(gs) = by_src[i].get(&ft) {
                    for &g in gs {
                        let gt = u.ty(g).1;
                        let (id, fresh) = u.push(Node::Comp(g, f), (fs, gt), s as u32)?;
                        if fresh {
                            fresh_level.push(id);
                        }
                    }
                }
            }
            match cfg.preset {
                Preset::SymmetricAssociative => {
                    for &x in &levels[i] {
                        for &y in &levels[j] {
                            let ((xs, xt), (ys, yt)) = (u.ty(x), u.ty(y));
                            let src = in_bound(&u, u.formulas.lookup(FNode::Tensor(xs, ys)));
                            let tgt = in_bound(&u, u.formulas.lookup(FNode::Tensor(xt, yt)));
                            if let (Some(src), Some(tgt)) = (src, tgt) {
                                let (id, fresh) = u.push(Node::Tens(x, y), (src, tgt), s as u32)?;
                                if fresh {
                                    fresh_level.push(id);
                                }
                            }
                        }
                    }
                }
                _ => {
                    for &x in &levels[i] {
                        let (xs, xt) = u.ty(x);
                        if let Some(ys) = by_src[j].get(&xs) {
                            for &y in ys {
                                let yt = u.ty(y).1;
                                if let Some(tgt) = in_bound(&u, u.formulas.lookup(FNode::Conj(xt, yt))) {
                                    let (id, fresh) = u.push(Node::Pair(x, y), (xs, tgt), s as u32)?;
                                    if fresh {
                                        fresh_level.push(id);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        levels[s] = fresh_level;
    }

    for t in cfg.equations.iter().flat_map(|e| [&e.lhs, &e.rhs]).chain(extra) {
        u.intern_term(t)?;
    }
    Ok(u)
}
