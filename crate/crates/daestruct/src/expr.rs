//! Symbolic expressions over time-dependent variables, their derivatives,
//! driving functions of `t`, and exact rational constants.
//!
//! Expressions are immutable trees built through the smart constructors on
//! [`Expr`]. The constructors apply only light normalization: zero/one
//! absorption, constant folding, flattening of nested sums and products, and
//! sign hoisting into leading constants. No like-term collection or other
//! canonicalization happens, so the syntactic occurrence of every symbol is
//! preserved — structural analysis depends on that.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Index of a dependent variable in its model's declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(pub usize);

/// Index of a driving function in its model's declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DriverId(pub usize);

/// A concrete evaluation symbol: one variable or driver at one derivative order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    Var { id: VarId, order: u32 },
    Driver { id: DriverId, order: u32 },
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Var { id, order } => write!(f, "variable #{} order {}", id.0, order),
            Symbol::Driver { id, order } => write!(f, "driver #{} order {}", id.0, order),
        }
    }
}

/// Elementary functions understood by the expression language.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }
}

/// Symbolic expression tree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    /// Exact rational constant.
    Const(Rational64),
    /// The independent variable `t`.
    Time,
    /// `order`-th time derivative of a dependent variable.
    Var { id: VarId, order: u32 },
    /// `order`-th formal time derivative of a driving function.
    Driver { id: DriverId, order: u32 },
    /// n-ary sum.
    Sum(Vec<Expr>),
    /// n-ary product.
    Prod(Vec<Expr>),
    /// Quotient of two expressions.
    Quot(Box<Expr>, Box<Expr>),
    /// Integer power of an expression.
    Pow(Box<Expr>, i32),
    /// Negation.
    Neg(Box<Expr>),
    /// Elementary function application.
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn int(value: i64) -> Expr {
        Expr::Const(Rational64::from_integer(value))
    }

    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::Const(Rational64::new(numer, denom))
    }

    pub fn var(id: VarId, order: u32) -> Expr {
        Expr::Var { id, order }
    }

    pub fn driver(id: DriverId, order: u32) -> Expr {
        Expr::Driver { id, order }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// Sum with zero dropping, constant folding, and flattening. The folded
    /// constant, when nonzero, goes last.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        let mut acc = Rational64::zero();
        for term in terms {
            match term {
                Expr::Const(c) => acc += c,
                Expr::Sum(inner) => {
                    for t in inner {
                        match t {
                            Expr::Const(c) => acc += c,
                            other => out.push(other),
                        }
                    }
                }
                other => out.push(other),
            }
        }
        if !acc.is_zero() {
            out.push(Expr::Const(acc));
        }
        match out.len() {
            0 => Expr::int(0),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    /// Product with zero/one absorption, constant folding, flattening, and
    /// hoisting of negations out of factors. The folded constant, when it is
    /// neither 1 nor -1, leads; a folded -1 becomes an outer negation.
    pub fn prod(factors: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        let mut acc = Rational64::from_integer(1);
        let mut stack: Vec<Expr> = factors;
        stack.reverse();
        while let Some(factor) = stack.pop() {
            match factor {
                Expr::Const(c) => {
                    if c.is_zero() {
                        return Expr::int(0);
                    }
                    acc *= c;
                }
                Expr::Prod(inner) => {
                    for f in inner.into_iter().rev() {
                        stack.push(f);
                    }
                }
                Expr::Neg(inner) => {
                    acc = -acc;
                    stack.push(*inner);
                }
                other => out.push(other),
            }
        }
        if out.is_empty() {
            return Expr::Const(acc);
        }
        let body = if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Prod(out)
        };
        if acc == Rational64::from_integer(1) {
            body
        } else if acc == Rational64::from_integer(-1) {
            Expr::Neg(Box::new(body))
        } else {
            match body {
                Expr::Prod(mut inner) => {
                    inner.insert(0, Expr::Const(acc));
                    Expr::Prod(inner)
                }
                single => Expr::Prod(vec![Expr::Const(acc), single]),
            }
        }
    }

    /// Quotient with zero absorption, unit denominators, constant folding,
    /// and sign hoisting from either side.
    pub fn quot(numer: Expr, denom: Expr) -> Expr {
        match (numer, denom) {
            (n, Expr::Const(d)) if d == Rational64::from_integer(1) => n,
            (n, Expr::Const(d)) if d == Rational64::from_integer(-1) => Expr::neg(n),
            (Expr::Const(n), Expr::Const(d)) if !d.is_zero() => Expr::Const(n / d),
            (n, d) if n.is_zero() && !matches!(d, Expr::Const(ref c) if c.is_zero()) => {
                Expr::int(0)
            }
            (Expr::Neg(n), Expr::Neg(d)) => Expr::quot(*n, *d),
            (Expr::Neg(n), d) => Expr::neg(Expr::quot(*n, d)),
            (n, Expr::Neg(d)) => Expr::neg(Expr::quot(n, *d)),
            (n, d) => Expr::Quot(Box::new(n), Box::new(d)),
        }
    }

    /// Integer power; folds small constant bases and merges nested powers.
    pub fn pow(base: Expr, exp: i32) -> Expr {
        match exp {
            0 => Expr::int(1),
            1 => base,
            _ => match base {
                Expr::Const(c) if exp.unsigned_abs() <= 12 && !(c.is_zero() && exp < 0) => {
                    let p = c.pow(exp);
                    Expr::Const(p)
                }
                Expr::Pow(inner, e0) if (e0 as i64 * exp as i64).unsigned_abs() < i32::MAX as u64 => {
                    let merged = (e0 as i64 * exp as i64) as i32;
                    Expr::pow(*inner, merged)
                }
                other => Expr::Pow(Box::new(other), exp),
            },
        }
    }

    /// Negation; folds constants, cancels double negation, and pushes signs
    /// into leading product constants.
    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            Expr::Prod(mut factors) => {
                if let Some(Expr::Const(c)) = factors.first() {
                    factors[0] = Expr::Const(-*c);
                    Expr::prod(factors)
                } else {
                    Expr::Neg(Box::new(Expr::Prod(factors)))
                }
            }
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    /// Total derivative with respect to `t` under the chain rule. Derivative
    /// orders of variables and drivers shift up by one, `t` maps to 1,
    /// constants to 0. Only the constructor-level normalization is applied.
    pub fn total_derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::int(0),
            Expr::Time => Expr::int(1),
            Expr::Var { id, order } => Expr::var(*id, order + 1),
            Expr::Driver { id, order } => Expr::driver(*id, order + 1),
            Expr::Sum(terms) => Expr::sum(terms.iter().map(Expr::total_derivative).collect()),
            Expr::Prod(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for (i, f) in factors.iter().enumerate() {
                    let df = f.total_derivative();
                    if df.is_zero() {
                        continue;
                    }
                    let mut parts: Vec<Expr> = Vec::with_capacity(factors.len());
                    for (j, g) in factors.iter().enumerate() {
                        parts.push(if i == j { df.clone() } else { g.clone() });
                    }
                    terms.push(Expr::prod(parts));
                }
                Expr::sum(terms)
            }
            Expr::Quot(n, d) => {
                let dn = n.total_derivative();
                let dd = d.total_derivative();
                Expr::sum(vec![
                    Expr::quot(dn, (**d).clone()),
                    Expr::neg(Expr::quot(
                        Expr::prod(vec![(**n).clone(), dd]),
                        Expr::pow((**d).clone(), 2),
                    )),
                ])
            }
            Expr::Pow(base, exp) => {
                let db = base.total_derivative();
                Expr::prod(vec![
                    Expr::int(*exp as i64),
                    Expr::pow((**base).clone(), exp - 1),
                    db,
                ])
            }
            Expr::Neg(inner) => Expr::neg(inner.total_derivative()),
            Expr::Call(func, arg) => {
                let da = arg.total_derivative();
                let outer = match func {
                    Func::Sin => Expr::call(Func::Cos, (**arg).clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, (**arg).clone())),
                    Func::Exp => Expr::call(Func::Exp, (**arg).clone()),
                    Func::Ln => return Expr::quot(da, (**arg).clone()),
                };
                Expr::prod(vec![outer, da])
            }
        }
    }

    /// Partial derivative treating each distinct (variable, order) pair as an
    /// independent symbol. Drivers and `t` differentiate to zero.
    pub fn partial_derivative(&self, var: VarId, order: u32) -> Expr {
        match self {
            Expr::Const(_) | Expr::Time | Expr::Driver { .. } => Expr::int(0),
            Expr::Var { id, order: o } => {
                if *id == var && *o == order {
                    Expr::int(1)
                } else {
                    Expr::int(0)
                }
            }
            Expr::Sum(terms) => {
                Expr::sum(terms.iter().map(|t| t.partial_derivative(var, order)).collect())
            }
            Expr::Prod(factors) => {
                let mut terms = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    let df = f.partial_derivative(var, order);
                    if df.is_zero() {
                        continue;
                    }
                    let mut parts: Vec<Expr> = Vec::with_capacity(factors.len());
                    for (j, g) in factors.iter().enumerate() {
                        parts.push(if i == j { df.clone() } else { g.clone() });
                    }
                    terms.push(Expr::prod(parts));
                }
                Expr::sum(terms)
            }
            Expr::Quot(n, d) => {
                let dn = n.partial_derivative(var, order);
                let dd = d.partial_derivative(var, order);
                Expr::sum(vec![
                    Expr::quot(dn, (**d).clone()),
                    Expr::neg(Expr::quot(
                        Expr::prod(vec![(**n).clone(), dd]),
                        Expr::pow((**d).clone(), 2),
                    )),
                ])
            }
            Expr::Pow(base, exp) => {
                let db = base.partial_derivative(var, order);
                Expr::prod(vec![
                    Expr::int(*exp as i64),
                    Expr::pow((**base).clone(), exp - 1),
                    db,
                ])
            }
            Expr::Neg(inner) => Expr::neg(inner.partial_derivative(var, order)),
            Expr::Call(func, arg) => {
                let da = arg.partial_derivative(var, order);
                let outer = match func {
                    Func::Sin => Expr::call(Func::Cos, (**arg).clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, (**arg).clone())),
                    Func::Exp => Expr::call(Func::Exp, (**arg).clone()),
                    Func::Ln => return Expr::quot(da, (**arg).clone()),
                };
                Expr::prod(vec![outer, da])
            }
        }
    }

    /// Standard recursive evaluation at a point.
    pub fn evaluate(&self, p: &Point) -> Result<f64> {
        match self {
            Expr::Const(c) => Ok(rational_to_f64(*c)),
            Expr::Time => Ok(p.time),
            Expr::Var { id, order } => {
                let sym = Symbol::Var { id: *id, order: *order };
                p.get(sym).ok_or(Error::MissingAssignment { symbol: sym })
            }
            Expr::Driver { id, order } => {
                let sym = Symbol::Driver { id: *id, order: *order };
                p.get(sym).ok_or(Error::MissingAssignment { symbol: sym })
            }
            Expr::Sum(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.evaluate(p)?;
                }
                Ok(acc)
            }
            Expr::Prod(factors) => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.evaluate(p)?;
                }
                Ok(acc)
            }
            Expr::Quot(n, d) => {
                let dv = d.evaluate(p)?;
                if dv == 0.0 {
                    return Err(Error::Domain { message: "division by zero" });
                }
                Ok(n.evaluate(p)? / dv)
            }
            Expr::Pow(base, exp) => {
                let b = base.evaluate(p)?;
                if b == 0.0 && *exp < 0 {
                    return Err(Error::Domain { message: "zero base with negative exponent" });
                }
                Ok(b.powi(*exp))
            }
            Expr::Neg(inner) => Ok(-inner.evaluate(p)?),
            Expr::Call(func, arg) => {
                let a = arg.evaluate(p)?;
                match func {
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Exp => Ok(a.exp()),
                    Func::Ln => {
                        if a <= 0.0 {
                            Err(Error::Domain { message: "ln of non-positive value" })
                        } else {
                            Ok(a.ln())
                        }
                    }
                }
            }
        }
    }

    /// Calls `f` for every variable or driver occurrence in the tree.
    pub fn visit_symbols(&self, f: &mut dyn FnMut(Symbol)) {
        match self {
            Expr::Const(_) | Expr::Time => {}
            Expr::Var { id, order } => f(Symbol::Var { id: *id, order: *order }),
            Expr::Driver { id, order } => f(Symbol::Driver { id: *id, order: *order }),
            Expr::Sum(xs) | Expr::Prod(xs) => {
                for x in xs {
                    x.visit_symbols(f);
                }
            }
            Expr::Quot(a, b) => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Call(_, a) => a.visit_symbols(f),
        }
    }

    /// Replaces order-0 occurrences of the mapped variables.
    pub fn substitute_vars(&self, map: &HashMap<VarId, Expr>) -> Expr {
        match self {
            Expr::Var { id, order: 0 } => {
                if let Some(replacement) = map.get(id) {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Const(_) | Expr::Time | Expr::Var { .. } | Expr::Driver { .. } => self.clone(),
            Expr::Sum(xs) => Expr::sum(xs.iter().map(|x| x.substitute_vars(map)).collect()),
            Expr::Prod(xs) => Expr::prod(xs.iter().map(|x| x.substitute_vars(map)).collect()),
            Expr::Quot(a, b) => Expr::quot(a.substitute_vars(map), b.substitute_vars(map)),
            Expr::Pow(a, e) => Expr::pow(a.substitute_vars(map), *e),
            Expr::Neg(a) => Expr::neg(a.substitute_vars(map)),
            Expr::Call(func, a) => Expr::call(*func, a.substitute_vars(map)),
        }
    }

    pub fn display<'a>(&'a self, names: &'a dyn SymbolNames) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, Expr::neg(rhs)])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::prod(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::quot(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

/// Resolves variable and driver indices to their declared names.
pub trait SymbolNames {
    fn var_name(&self, id: VarId) -> &str;
    fn driver_name(&self, id: DriverId) -> &str;
}

/// Precedence-aware textual rendering compatible with the model grammar.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a dyn SymbolNames,
}

// Precedence levels: 1 sum, 2 product/quotient, 3 tight factor position,
// 4 power base. An expression is parenthesized when its own level is below
// the level its context requires.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) => {
            if c.is_negative() || !c.is_integer() {
                1
            } else {
                4
            }
        }
        Expr::Time | Expr::Var { .. } | Expr::Driver { .. } | Expr::Call(..) => 4,
        Expr::Sum(_) | Expr::Neg(_) => 1,
        Expr::Prod(_) | Expr::Quot(..) => 2,
        Expr::Pow(..) => 3,
    }
}

fn write_expr(
    e: &Expr,
    names: &dyn SymbolNames,
    f: &mut fmt::Formatter<'_>,
    min_level: u8,
) -> fmt::Result {
    if level(e) < min_level {
        write!(f, "(")?;
        write_expr(e, names, f, 1)?;
        return write!(f, ")");
    }
    match e {
        Expr::Const(c) => {
            if c.is_integer() {
                write!(f, "{}", c.numer())
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())
            }
        }
        Expr::Time => write!(f, "t"),
        Expr::Var { id, order } => {
            let name = names.var_name(*id);
            if *order == 0 {
                write!(f, "{name}")
            } else {
                write!(f, "der({name},{order})")
            }
        }
        Expr::Driver { id, order } => {
            let name = names.driver_name(*id);
            if *order == 0 {
                write!(f, "{name}")
            } else {
                write!(f, "der({name},{order})")
            }
        }
        Expr::Sum(terms) => {
            for (i, term) in terms.iter().enumerate() {
                if i == 0 {
                    write_expr(term, names, f, 1)?;
                    continue;
                }
                match term {
                    Expr::Neg(inner) => {
                        write!(f, " - ")?;
                        write_expr(inner, names, f, 2)?;
                    }
                    Expr::Const(c) if c.is_negative() => {
                        write!(f, " - ")?;
                        write_expr(&Expr::Const(-*c), names, f, 2)?;
                    }
                    Expr::Prod(factors)
                        if matches!(factors.first(), Some(Expr::Const(c)) if c.is_negative()) =>
                    {
                        let mut flipped = factors.clone();
                        if let Expr::Const(c) = &flipped[0] {
                            flipped[0] = Expr::Const(-*c);
                        }
                        write!(f, " - ")?;
                        write_expr(&Expr::Prod(flipped), names, f, 2)?;
                    }
                    other => {
                        write!(f, " + ")?;
                        write_expr(other, names, f, 2)?;
                    }
                }
            }
            Ok(())
        }
        Expr::Prod(factors) => {
            for (i, factor) in factors.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                if i == 0 {
                    // A leading constant never needs parentheses: unary minus
                    // and the `a/b` constant fold re-parse to the same node.
                    match factor {
                        Expr::Const(_) => write_expr(factor, names, f, 1)?,
                        _ => write_expr(factor, names, f, 2)?,
                    }
                } else {
                    write_expr(factor, names, f, 3)?;
                }
            }
            Ok(())
        }
        Expr::Quot(n, d) => {
            write_expr(n, names, f, 2)?;
            write!(f, "/")?;
            write_expr(d, names, f, 3)
        }
        Expr::Pow(base, exp) => {
            write_expr(base, names, f, 4)?;
            if *exp < 0 {
                write!(f, "^({exp})")
            } else {
                write!(f, "^{exp}")
            }
        }
        Expr::Neg(inner) => {
            write!(f, "-")?;
            write_expr(inner, names, f, 2)
        }
        Expr::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_expr(arg, names, f, 1)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.names, f, 1)
    }
}

/// An assignment of `t` and of every (symbol, derivative order) pair needed
/// to evaluate some expression.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Point {
    pub time: f64,
    values: HashMap<Symbol, f64>,
}

impl Point {
    pub fn new(time: f64) -> Point {
        Point { time, values: HashMap::new() }
    }

    pub fn set(&mut self, symbol: Symbol, value: f64) -> &mut Self {
        self.values.insert(symbol, value);
        self
    }

    pub fn set_var(&mut self, id: VarId, order: u32, value: f64) -> &mut Self {
        self.set(Symbol::Var { id, order }, value)
    }

    pub fn set_driver(&mut self, id: DriverId, order: u32, value: f64) -> &mut Self {
        self.set(Symbol::Driver { id, order }, value)
    }

    pub fn get(&self, symbol: Symbol) -> Option<f64> {
        self.values.get(&symbol).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, f64)> + '_ {
        self.values.iter().map(|(s, v)| (*s, *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct PlainNames;
    impl SymbolNames for PlainNames {
        fn var_name(&self, id: VarId) -> &str {
            ["x", "y", "z"][id.0]
        }
        fn driver_name(&self, id: DriverId) -> &str {
            ["Q", "R"][id.0]
        }
    }

    fn x(order: u32) -> Expr {
        Expr::var(VarId(0), order)
    }

    fn q(order: u32) -> Expr {
        Expr::driver(DriverId(0), order)
    }

    fn text(e: &Expr) -> String {
        e.display(&PlainNames).to_string()
    }

    #[test]
    fn total_derivative_product_rule() {
        let e = x(0) * x(0);
        let d = e.total_derivative();
        assert_eq!(d, Expr::sum(vec![x(1) * x(0), x(0) * x(1)]));
    }

    #[test]
    fn total_derivative_shifts_drivers() {
        let e = x(0) - q(0);
        assert_eq!(e.total_derivative(), x(1) - q(1));
    }

    #[test]
    fn total_derivative_of_constant_is_zero() {
        assert!(Expr::int(5).total_derivative().is_zero());
        assert_eq!(Expr::Time.total_derivative(), Expr::int(1));
    }

    #[test]
    fn partial_derivative_distinguishes_orders() {
        assert!(x(1).partial_derivative(VarId(0), 2).is_zero());
        assert_eq!(x(1).partial_derivative(VarId(0), 1), Expr::int(1));
    }

    #[test]
    fn partial_of_quotient_matches_hand_result() {
        // d/dC0 of C1' - q*(C0 - C1)/V1 is -q/V1.
        let c0 = Expr::var(VarId(0), 0);
        let c1 = Expr::var(VarId(1), 0);
        let v1 = Expr::var(VarId(2), 0);
        let e = Expr::var(VarId(1), 1) - q(0) * (c0 - c1) / v1.clone();
        let d = e.partial_derivative(VarId(0), 0);
        assert_eq!(d, Expr::neg(Expr::quot(q(0), v1)));
        assert_eq!(e.partial_derivative(VarId(1), 1), Expr::int(1));
    }

    #[test]
    fn evaluate_basics() {
        let mut p = Point::new(0.0);
        p.set_var(VarId(0), 0, 2.0).set_var(VarId(0), 1, 2.0);
        let e = x(1) - x(0);
        assert_eq!(e.evaluate(&p).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_division_by_zero_is_domain_error() {
        let mut p = Point::new(0.0);
        p.set_var(VarId(0), 0, 0.0);
        let e = Expr::int(1) / x(0);
        assert!(matches!(e.evaluate(&p), Err(Error::Domain { .. })));
    }

    #[test]
    fn evaluate_missing_assignment() {
        let p = Point::new(0.0);
        assert!(matches!(
            x(0).evaluate(&p),
            Err(Error::MissingAssignment { .. })
        ));
    }

    #[test]
    fn constructors_fold_and_absorb() {
        assert_eq!(Expr::sum(vec![Expr::int(0), x(0)]), x(0));
        assert_eq!(Expr::prod(vec![Expr::int(1), x(0)]), x(0));
        assert!(Expr::prod(vec![Expr::int(0), x(0)]).is_zero());
        assert_eq!(Expr::prod(vec![x(0), Expr::int(-1)]), Expr::neg(x(0)));
        assert_eq!(Expr::quot(Expr::int(3), Expr::int(4)), Expr::rational(3, 4));
        assert_eq!(Expr::pow(x(0), 1), x(0));
        assert_eq!(Expr::neg(Expr::neg(x(0))), x(0));
    }

    #[test]
    fn display_uses_model_grammar() {
        let e = Expr::var(VarId(0), 1) - q(0) * (x(0) - Expr::var(VarId(1), 0)) / Expr::var(VarId(2), 0);
        assert_eq!(text(&e), "der(x,1) - Q*(x - y)/z");
        assert_eq!(text(&Expr::pow(x(0), -2)), "x^(-2)");
        assert_eq!(text(&Expr::call(Func::Sin, Expr::Time)), "sin(t)");
    }
}
