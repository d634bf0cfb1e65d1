//! Congruence closure over a universe: a term pair is merged when an axiom
//! instance, an assumed equation or congruence relates the two classes.

use std::collections::HashMap;

use super::schema::{axiom_schemata, FPat, Pat, Schema};
use super::union_find::UnionFind;
use super::universe::{FId, FNode, NId, Node, Universe};
use super::Preset;

const NONE: u32 = u32::MAX;
const MAX_VARS: usize = 8;

#[derive(Clone, Copy, Debug)]
struct Subst {
    f: [u32; MAX_VARS],
    a: [u32; MAX_VARS],
}

impl Subst {
    fn empty() -> Self {
        Subst {
            f: [NONE; MAX_VARS],
            a: [NONE; MAX_VARS],
        }
    }
}

/// Partition of a universe into provably equal classes.
#[derive(Clone, Debug)]
pub struct Partition {
    /// Representative (smallest member) of every node's class.
    pub rep: Vec<NId>,
    /// First union joining classes with different generator multisets.
    pub balance_violation: Option<(NId, NId)>,
    pub rounds: usize,
}

impl Partition {
    pub fn same(&self, a: NId, b: NId) -> bool {
        self.rep[a as usize] == self.rep[b as usize]
    }

    pub fn class_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|(i, r)| *i as u32 == **r).count()
    }
}

struct State<'u> {
    u: &'u Universe,
    uf: UnionFind,
    canon: Vec<NId>,
    /// Distinct canonical nodes of each class, children already canonical.
    enodes: Vec<Vec<Node>>,
    memo: HashMap<Node, NId>,
    violation: Option<(NId, NId)>,
}

impl<'u> State<'u> {
    fn union(&mut self, a: NId, b: NId) -> bool {
        let (ra, rb) = (self.uf.find(a), self.uf.find(b));
        if ra == rb {
            return false;
        }
        if self.violation.is_none() && self.u.gens_of(ra) != self.u.gens_of(rb) {
            self.violation = Some((ra, rb));
        }
        self.uf.union(ra, rb)
    }

    /// Closes under congruence and refreshes the canonical snapshot.
    fn rebuild(&mut self) {
        let n = self.u.len();
        loop {
            let roots = self.uf.roots();
            self.memo.clear();
            let mut changed = false;
            for i in 0..n as NId {
                let key = self.u.node(i).map_children(|c| roots[c as usize]);
                match self.memo.get(&key) {
                    Some(&j) => changed |= self.union(j, i),
                    None => {
                        self.memo.insert(key, i);
                    }
                }
            }
            if !changed {
                self.canon = roots;
                break;
            }
        }
        for e in &mut self.enodes {
            e.clear();
        }
        for i in 0..n as NId {
            let key = self.u.node(i).map_children(|c| self.canon[c as usize]);
            if self.memo[&key] == i {
                self.enodes[self.canon[i as usize] as usize].push(key);
            }
        }
    }

    fn unify(&self, p: &FPat, f: FId, s: &mut Subst) -> bool {
        match p {
            FPat::Var(v) => {
                let slot = &mut s.f[*v as usize];
                if *slot == NONE {
                    *slot = f;
                    true
                } else {
                    *slot == f
                }
            }
            FPat::Top => self.u.formulas.get(f) == FNode::Top,
            FPat::Conj(a, b) => match self.u.formulas.get(f) {
                FNode::Conj(x, y) => self.unify(a, x, s) && self.unify(b, y, s),
                _ => false,
            },
            FPat::Tensor(a, b) => match self.u.formulas.get(f) {
                FNode::Tensor(x, y) => self.unify(a, x, s) && self.unify(b, y, s),
                _ => false,
            },
        }
    }

    fn resolve(&self, p: &FPat, s: &Subst) -> Option<FId> {
        match p {
            FPat::Var(v) => Some(s.f[*v as usize]).filter(|&f| f != NONE),
            FPat::Top => self.u.formulas.lookup(FNode::Top),
            FPat::Conj(a, b) => self
                .u
                .formulas
                .lookup(FNode::Conj(self.resolve(a, s)?, self.resolve(b, s)?)),
            FPat::Tensor(a, b) => self
                .u
                .formulas
                .lookup(FNode::Tensor(self.resolve(a, s)?, self.resolve(b, s)?)),
        }
    }

    /// All extensions of `s` under which `p` matches some member of `class`.
    fn ematch(&self, sch: &Schema, p: &Pat, class: NId, s: Subst, out: &mut Vec<Subst>) {
        let leaf = |fs: &[(&FPat, FId)], out: &mut Vec<Subst>| {
            let mut s2 = s;
            if fs.iter().all(|(p, f)| self.unify(p, *f, &mut s2)) {
                out.push(s2);
            }
        };
        if let Pat::Arrow(v) = p {
            let slot = s.a[*v as usize];
            if slot != NONE {
                if self.canon[slot as usize] == class {
                    out.push(s);
                }
                return;
            }
            let (src, tgt) = self.u.ty(class);
            let var = &sch.avars[*v as usize];
            let mut s2 = s;
            s2.a[*v as usize] = class;
            if self.unify(&var.source, src, &mut s2) && self.unify(&var.target, tgt, &mut s2) {
                out.push(s2);
            }
            return;
        }
        for &node in &self.enodes[class as usize] {
            match (p, node) {
                (Pat::Id(a), Node::Id(x)) | (Pat::Bang(a), Node::Bang(x)) => leaf(&[(a, x)], out),
                (Pat::P1(a, b), Node::P1(x, y))
                | (Pat::P2(a, b), Node::P2(x, y))
                | (Pat::Sym(a, b), Node::Sym(x, y)) => leaf(&[(a, x), (b, y)], out),
                (Pat::Assoc(a, b, c), Node::Assoc(x, y, z)) => leaf(&[(a, x), (b, y), (c, z)], out),
                (Pat::Comp(pl, pr), Node::Comp(l, r))
                | (Pat::Pair(pl, pr), Node::Pair(l, r))
                | (Pat::Tens(pl, pr), Node::Tens(l, r)) => {
                    let mut left = Vec::new();
                    self.ematch(sch, pl, l, s, &mut left);
                    for s1 in left {
                        self.ematch(sch, pr, r, s1, out);
                    }
                }
                _ => {}
            }
        }
    }

    /// Class of the instance of `p` under `s`, if that term is in the universe.
    fn build(&self, p: &Pat, s: &Subst) -> Option<NId> {
        let f = |q: &FPat| self.resolve(q, s);
        let key = match p {
            Pat::Arrow(v) => {
                let n = s.a[*v as usize];
                return (n != NONE).then(|| self.canon[n as usize]);
            }
            Pat::Id(a) => Node::Id(f(a)?),
            Pat::Bang(a) => Node::Bang(f(a)?),
            Pat::P1(a, b) => Node::P1(f(a)?, f(b)?),
            Pat::P2(a, b) => Node::P2(f(a)?, f(b)?),
            Pat::Sym(a, b) => Node::Sym(f(a)?, f(b)?),
            Pat::Assoc(a, b, c) => Node::Assoc(f(a)?, f(b)?, f(c)?),
            Pat::Comp(x, y) => Node::Comp(self.build(x, s)?, self.build(y, s)?),
            Pat::Pair(x, y) => Node::Pair(self.build(x, s)?, self.build(y, s)?),
            Pat::Tens(x, y) => Node::Tens(self.build(x, s)?, self.build(y, s)?),
        };
        self.memo.get(&key).map(|&n| self.canon[n as usize])
    }

    fn roots(&self) -> impl Iterator<Item = NId> + '_ {
        (0..self.u.len() as NId).filter(|&i| self.canon[i as usize] == i)
    }

    fn schema_unions(&self, schemas: &[Schema], pending: &mut Vec<(NId, NId)>) {
        for sch in schemas {
            for (from, to) in [(&sch.lhs, &sch.rhs), (&sch.rhs, &sch.lhs)] {
                for class in self.roots() {
                    let mut found = Vec::new();
                    self.ematch(sch, from, class, Subst::empty(), &mut found);
                    for s in found {
                        if let Some(other) = self.build(to, &s) {
                            if other != class {
                                pending.push((class, other));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Isomorphisms are monic and epic: `l . x = l . y` gives `x = y` and
    /// `x . r = y . r` gives `x = y` whenever `l` and `r` are in the class of
    /// an associator or symmetry.
    fn cancellation_unions(&self, pending: &mut Vec<(NId, NId)>) {
        let iso: Vec<bool> = (0..self.u.len())
            .map(|i| {
                self.enodes[i]
                    .iter()
                    .any(|n| matches!(n, Node::Sym(..) | Node::Assoc(..)))
            })
            .collect();
        for class in self.roots() {
            let mut by_left: HashMap<NId, NId> = HashMap::new();
            let mut by_right: HashMap<NId, NId> = HashMap::new();
            for &node in &self.enodes[class as usize] {
                if let Node::Comp(l, r) = node {
                    if iso[l as usize] {
                        let first = *by_left.entry(l).or_insert(r);
                        if first != r {
                            pending.push((first, r));
                        }
                    }
                    if iso[r as usize] {
                        let first = *by_right.entry(r).or_insert(l);
                        if first != l {
                            pending.push((first, l));
                        }
                    }
                }
            }
        }
    }
}

/// Saturates `u` under the axioms of its preset together with `equations`
/// (pairs of node ids assumed equal).
pub fn close(u: &Universe, equations: &[(NId, NId)]) -> Partition {
    let n = u.len();
    let mut st = State {
        u,
        uf: UnionFind::new(n),
        canon: Vec::new(),
        enodes: vec![Vec::new(); n],
        memo: HashMap::new(),
        violation: None,
    };
    for &(a, b) in equations {
        st.union(a, b);
    }
    let schemas = axiom_schemata(u.preset);
    let mut rounds = 0;
    loop {
        st.rebuild();
        rounds += 1;
        let mut pending = Vec::new();
        st.schema_unions(&schemas, &mut pending);
        if u.preset == Preset::SymmetricAssociative {
            st.cancellation_unions(&mut pending);
        }
        let mut changed = false;
        for (a, b) in pending {
            changed |= st.union(a, b);
        }
        if !changed {
            break;
        }
    }
    Partition {
        rep: st.canon,
        balance_violation: st.violation,
        rounds,
    }
}
