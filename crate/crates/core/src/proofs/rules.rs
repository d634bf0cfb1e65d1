//! One-step rewriting of script arrows by named laws and proven equations.

use std::collections::{HashMap, HashSet, VecDeque};

use super::syntax::{norm, Arr, Equation, Functor, Obj};

/// Typing context: declared arrow variables.
#[derive(Clone, Debug, Default)]
pub struct Ctx {
    pub vars: HashMap<String, (Obj, Obj)>,
}

impl Ctx {
    /// Source and target of `a`.
    pub fn ty(&self, a: &Arr) -> Result<(Obj, Obj), String> {
        let f = |o: Obj| Box::new(o);
        Ok(match a {
            Arr::Var(v) => self
                .vars
                .get(v)
                .cloned()
                .ok_or_else(|| format!("undeclared arrow `{v}`"))?,
            Arr::Id(o) => (o.clone(), o.clone()),
            Arr::Gamma(o) => (o.clone(), Obj::G(f(Obj::F(f(o.clone()))))),
            Arr::Phi(o) => (Obj::F(f(Obj::G(f(o.clone())))), o.clone()),
            Arr::Fun(k, x) => {
                let (s, t) = self.ty(x)?;
                let img = |o: &Obj| k.on_object(o).ok_or_else(|| format!("{k} applied to {x}, whose type is not a pair"));
                (img(&s)?, img(&t)?)
            }
            Arr::PairArr(x, y) => {
                let (s1, t1) = self.ty(x)?;
                let (s2, t2) = self.ty(y)?;
                (Obj::Pair(f(s1), f(s2)), Obj::Pair(f(t1), f(t2)))
            }
            Arr::Tuple(x, y) => {
                let (s1, t1) = self.ty(x)?;
                let (s2, t2) = self.ty(y)?;
                if s1 != s2 {
                    return Err(format!("components of {a} have sources {s1} and {s2}"));
                }
                (s1, Obj::prod(t1, t2))
            }
            Arr::Prod(x, y) => {
                let (s1, t1) = self.ty(x)?;
                let (s2, t2) = self.ty(y)?;
                (Obj::prod(s1, s2), Obj::prod(t1, t2))
            }
            Arr::K1(x, y) => (Obj::prod(x.clone(), y.clone()), x.clone()),
            Arr::K2(x, y) => (Obj::prod(x.clone(), y.clone()), y.clone()),
            Arr::W(o) => (o.clone(), Obj::prod(o.clone(), o.clone())),
            Arr::C(x, y) => (Obj::prod(x.clone(), y.clone()), Obj::prod(y.clone(), x.clone())),
            Arr::Comp(items) => {
                let mut it = items.iter().rev();
                let (s, mut t) = self.ty(it.next().ok_or("empty composite")?)?;
                for g in it {
                    let (gs, gt) = self.ty(g)?;
                    if gs != t {
                        return Err(format!("cannot compose {g} after an arrow into {t}"));
                    }
                    t = gt;
                }
                (s, t)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Beta1,
    Beta2,
    Eta,
    PairNat,
    WDef,
    CDef,
    ProdDef,
}

impl Axiom {
    pub const ALL: [(Axiom, &'static str); 7] = [
        (Axiom::Beta1, "beta1"),
        (Axiom::Beta2, "beta2"),
        (Axiom::Eta, "eta"),
        (Axiom::PairNat, "pair-nat"),
        (Axiom::WDef, "w-def"),
        (Axiom::CDef, "c-def"),
        (Axiom::ProdDef, "prod-def"),
    ];

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.iter().find(|(_, n)| *n == s).map(|(a, _)| *a)
    }
}

/// A named law, oriented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Axiom(Axiom),
    /// `G(F(f)) . gamma{A}  ->  gamma{B} . f`
    NatGamma,
    /// `phi{B} . F(G(f))  ->  f . phi{A}`
    NatPhi,
    /// `w{B} . f  ->  <f, f>`
    NatW,
    /// `phi{F(X)} . F(gamma{X})  ->  id{F(X)}`
    TriPhi,
    /// `G(phi{X}) . gamma{G(X)}  ->  id{G(X)}`
    TriGamma,
    /// Preservation of composites and identities; `D(a) -> (a, a)`;
    /// `P1((a, b)) -> a`.
    Functoriality(Functor),
}

/// A rewrite system used by one justification.
#[derive(Clone, Debug)]
pub enum Rules {
    Law(Law),
    /// A proven equation, usable both ways outside functor applications.
    Equation(Equation),
}

impl Rules {
    fn root(&self, t: &Arr, ctx: &Ctx) -> Vec<Arr> {
        match self {
            Rules::Equation(e) => {
                let mut out = Vec::new();
                if *t == e.lhs {
                    out.push(e.rhs.clone());
                }
                if *t == e.rhs {
                    out.push(e.lhs.clone());
                }
                out
            }
            Rules::Law(l) => law_root(*l, t, ctx).into_iter().collect(),
        }
    }
}

fn law_root(law: Law, t: &Arr, ctx: &Ctx) -> Option<Arr> {
    let pair2 = |t: &Arr| match t {
        Arr::Comp(v) if v.len() == 2 => Some((v[0].clone(), v[1].clone())),
        _ => None,
    };
    match law {
        Law::NatGamma => {
            let (l, r) = pair2(t)?;
            let (Arr::Fun(Functor::G, gf), Arr::Gamma(a)) = (&l, &r) else { return None };
            let Arr::Fun(Functor::F, f) = &**gf else { return None };
            let (s, tg) = ctx.ty(f).ok()?;
            (s == *a).then(|| Arr::Comp(vec![Arr::Gamma(tg), (**f).clone()]))
        }
        Law::NatPhi => {
            let (l, r) = pair2(t)?;
            let (Arr::Phi(b), Arr::Fun(Functor::F, fg)) = (&l, &r) else { return None };
            let Arr::Fun(Functor::G, f) = &**fg else { return None };
            let (s, tg) = ctx.ty(f).ok()?;
            (tg == *b).then(|| Arr::Comp(vec![(**f).clone(), Arr::Phi(s)]))
        }
        Law::NatW => {
            let (l, f) = pair2(t)?;
            let Arr::W(b) = l else { return None };
            let (_, tg) = ctx.ty(&f).ok()?;
            (tg == b).then(|| Arr::tuple(f.clone(), f))
        }
        Law::TriPhi => {
            let (l, r) = pair2(t)?;
            let (Arr::Phi(Obj::F(x)), Arr::Fun(Functor::F, g)) = (&l, &r) else { return None };
            (**g == Arr::Gamma((**x).clone())).then(|| Arr::Id(Obj::F(x.clone())))
        }
        Law::TriGamma => {
            let (l, r) = pair2(t)?;
            let (Arr::Fun(Functor::G, p), Arr::Gamma(Obj::G(x))) = (&l, &r) else { return None };
            (**p == Arr::Phi((**x).clone())).then(|| Arr::Id(Obj::G(x.clone())))
        }
        Law::Functoriality(k) => match t {
            Arr::Fun(k2, inner) if *k2 == k => match &**inner {
                Arr::Comp(items) => Some(Arr::Comp(items.iter().map(|a| Arr::fun(k, a.clone())).collect())),
                Arr::Id(o) => k.on_object(o).map(Arr::Id),
                Arr::PairArr(a, _) if k == Functor::P1 => Some((**a).clone()),
                Arr::PairArr(_, b) if k == Functor::P2 => Some((**b).clone()),
                a if k == Functor::D => Some(Arr::pair(a.clone(), a.clone())),
                _ => None,
            },
            _ => None,
        },
        Law::Axiom(ax) => axiom_root(ax, t, ctx),
    }
}

fn axiom_root(ax: Axiom, t: &Arr, ctx: &Ctx) -> Option<Arr> {
    match (ax, t) {
        (Axiom::Beta1 | Axiom::Beta2, Arr::Comp(v)) if v.len() == 2 => match (&v[0], &v[1]) {
            (Arr::K1(..), Arr::Tuple(a, _)) if ax == Axiom::Beta1 => Some((**a).clone()),
            (Arr::K2(..), Arr::Tuple(_, b)) if ax == Axiom::Beta2 => Some((**b).clone()),
            _ => None,
        },
        (Axiom::Eta, Arr::Tuple(a, b)) => {
            let (la, lb) = (a.elements(), b.elements());
            match (&la[0], &lb[0]) {
                (Arr::K1(x, y), Arr::K2(x2, y2)) if x == x2 && y == y2 && la[1..] == lb[1..] => Some(if la.len() == 1 {
                    Arr::Id(Obj::prod(x.clone(), y.clone()))
                } else {
                    Arr::chain(la[1..].to_vec())
                }),
                _ => None,
            }
        }
        (Axiom::PairNat, Arr::Comp(v)) if v.len() == 2 => match &v[0] {
            Arr::Tuple(a, b) => Some(Arr::tuple(
                Arr::chain(vec![(**a).clone(), v[1].clone()]),
                Arr::chain(vec![(**b).clone(), v[1].clone()]),
            )),
            _ => None,
        },
        (Axiom::WDef, Arr::W(x)) => Some(Arr::tuple(Arr::Id(x.clone()), Arr::Id(x.clone()))),
        (Axiom::CDef, Arr::C(x, y)) => Some(Arr::tuple(Arr::K2(x.clone(), y.clone()), Arr::K1(x.clone(), y.clone()))),
        (Axiom::ProdDef, Arr::Prod(a, b)) => {
            let (sa, _) = ctx.ty(a).ok()?;
            let (sb, _) = ctx.ty(b).ok()?;
            Some(Arr::tuple(
                Arr::chain(vec![(**a).clone(), Arr::K1(sa.clone(), sb.clone())]),
                Arr::chain(vec![(**b).clone(), Arr::K2(sa, sb)]),
            ))
        }
        _ => None,
    }
}

/// All results of rewriting `t` once, at any position.
pub fn one_step(t: &Arr, rules: &Rules, ctx: &Ctx) -> Vec<Arr> {
    let mut out = Vec::new();
    step(t, rules, ctx, false, &mut out);
    out
}

fn allowed(rules: &Rules, under_functor: bool) -> bool {
    !(under_functor && matches!(rules, Rules::Equation(_)))
}

fn step(t: &Arr, rules: &Rules, ctx: &Ctx, under: bool, out: &mut Vec<Arr>) {
    if let Arr::Comp(items) = t {
        let n = items.len();
        if allowed(rules, under) {
            for i in 0..n {
                for j in i + 1..=n {
                    let window = if j - i == 1 {
                        items[i].clone()
                    } else {
                        Arr::Comp(items[i..j].to_vec())
                    };
                    for rep in rules.root(&window, ctx) {
                        let mut v = items[..i].to_vec();
                        v.push(rep);
                        v.extend_from_slice(&items[j..]);
                        out.push(norm(&Arr::Comp(v)));
                    }
                }
            }
        }
        for (i, e) in items.iter().enumerate() {
            let mut inner = Vec::new();
            inside(e, rules, ctx, under, &mut inner);
            for rep in inner {
                let mut v = items.clone();
                v[i] = rep;
                out.push(norm(&Arr::Comp(v)));
            }
        }
    } else {
        if allowed(rules, under) {
            out.extend(rules.root(t, ctx).iter().map(norm));
        }
        inside(t, rules, ctx, under, out);
    }
}

/// Rewrites strictly below the root of a non-composite `t`.
fn inside(t: &Arr, rules: &Rules, ctx: &Ctx, under: bool, out: &mut Vec<Arr>) {
    let sub = |x: &Arr, u: bool| {
        let mut v = Vec::new();
        step(x, rules, ctx, u, &mut v);
        v
    };
    match t {
        Arr::Fun(k, a) => out.extend(sub(a, true).into_iter().map(|x| norm(&Arr::fun(*k, x)))),
        Arr::PairArr(a, b) | Arr::Tuple(a, b) | Arr::Prod(a, b) => {
            let rebuild = |x: Arr, y: Arr| {
                norm(&match t {
                    Arr::PairArr(..) => Arr::pair(x, y),
                    Arr::Tuple(..) => Arr::tuple(x, y),
                    _ => Arr::Prod(Box::new(x), Box::new(y)),
                })
            };
            for x in sub(a, under) {
                out.push(rebuild(x, (**b).clone()));
            }
            for y in sub(b, under) {
                out.push(rebuild((**a).clone(), y));
            }
        }
        _ => {}
    }
}

/// Terms reachable from `t` in at most `bound` steps.
pub fn reachable(t: &Arr, rules: &Rules, ctx: &Ctx, bound: usize) -> HashSet<Arr> {
    let mut seen: HashSet<Arr> = HashSet::from([t.clone()]);
    let mut queue = VecDeque::from([(t.clone(), 0)]);
    while let Some((x, d)) = queue.pop_front() {
        if d == bound {
            continue;
        }
        for y in one_step(&x, rules, ctx) {
            if seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    seen
}

/// Normal form under the functoriality laws of `k`.
pub fn functor_normal(k: Functor, t: &Arr, ctx: &Ctx) -> Arr {
    let rules = Rules::Law(Law::Functoriality(k));
    let mut t = norm(t);
    while let Some(next) = one_step(&t, &rules, ctx).into_iter().next() {
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::super::syntax::parse_arr;
    use super::*;

    fn a(s: &str) -> Arr {
        norm(&parse_arr(s).unwrap())
    }

    fn ctx() -> Ctx {
        let mut c = Ctx::default();
        let b = Obj::Var("B".into());
        let cc = Obj::Var("C".into());
        c.vars.insert("g".into(), (cc, b));
        c
    }

    #[test]
    fn naturality_of_unit_moves_gamma_left() {
        let out = one_step(&a("G(F(g)) . gamma{C}"), &Rules::Law(Law::NatGamma), &ctx());
        assert_eq!(out, vec![a("gamma{B} . g")]);
    }

    #[test]
    fn triangle_inside_chain() {
        let out = one_step(&a("phi{F(B)} . F(gamma{B}) . F(g)"), &Rules::Law(Law::TriPhi), &ctx());
        assert_eq!(out, vec![a("F(g)")]);
    }

    #[test]
    fn equations_stay_outside_functors() {
        let rules = Rules::Equation(Equation { lhs: a("F(g)"), rhs: a("gamma{B} . g") });
        assert!(one_step(&a("G(F(g))"), &rules, &ctx()).is_empty());
        assert_eq!(one_step(&a("<F(g), F(g)>"), &rules, &ctx()).len(), 2);
    }

    #[test]
    fn functor_normal_distributes() {
        let t = functor_normal(Functor::F, &a("F(gamma{B} . g . id{C})"), &ctx());
        assert_eq!(t, a("F(gamma{B}) . F(g)"));
        let d = functor_normal(Functor::D, &a("D(g)"), &ctx());
        assert_eq!(d, a("(g, g)"));
    }
}
