use std::fmt;
use std::sync::Arc;

/// Interned-ish symbol name. Cheap to clone and share across threads.
pub type Name = Arc<str>;

/// Simple types over built-in and user base types.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Type {
    /// `$i`, the type of individuals.
    Iota,
    /// `$o`, the type of formulas.
    O,
    /// A base type declared with `$tType`.
    Base(Name),
    Fun(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn fun(domain: Type, codomain: Type) -> Type {
        Type::Fun(Arc::new(domain), Arc::new(codomain))
    }

    /// `a1 > a2 > ... > result`
    pub fn curried<I>(args: I, result: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(result, |acc, a| Type::fun(a, acc))
    }

    /// `(ι→o)` for the given element type.
    pub fn predicate(elem: Type) -> Type {
        Type::fun(elem, Type::O)
    }

    /// The choice type `(α→o)→α`.
    pub fn choice(alpha: Type) -> Type {
        Type::fun(Type::predicate(alpha.clone()), alpha)
    }

    /// If this is a choice type `(α→o)→α`, returns `α`.
    pub fn choice_elem(&self) -> Option<&Type> {
        match self {
            Type::Fun(d, c) => match d.as_ref() {
                Type::Fun(a, o) if **o == Type::O && a.as_ref() == c.as_ref() => Some(c),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Type::Fun(..))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Iota | Type::Base(_))
    }

    pub fn domain(&self) -> Option<&Type> {
        match self {
            Type::Fun(d, _) => Some(d),
            _ => None,
        }
    }

    pub fn codomain(&self) -> Option<&Type> {
        match self {
            Type::Fun(_, c) => Some(c),
            _ => None,
        }
    }

    /// Splits `a1 > ... > an > r` (r not a function) into `([a1..an], r)`.
    pub fn split(&self) -> (Vec<Type>, Type) {
        let mut args = Vec::new();
        let mut t = self;
        while let Type::Fun(d, c) = t {
            args.push(d.as_ref().clone());
            t = c;
        }
        (args, t.clone())
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let Type::Fun(_, c) = t {
            n += 1;
            t = c;
        }
        n
    }

    /// Final result type after stripping all arrows.
    pub fn target(&self) -> &Type {
        let mut t = self;
        while let Type::Fun(_, c) = t {
            t = c;
        }
        t
    }

    /// Order: base types are 0, `a > b` is `max(order(a) + 1, order(b))`.
    pub fn order(&self) -> usize {
        match self {
            Type::Fun(d, c) => (d.order() + 1).max(c.order()),
            _ => 0,
        }
    }

    /// Collects the base types (including `$o`) occurring in this type.
    pub fn base_types(&self, out: &mut Vec<Type>) {
        match self {
            Type::Fun(d, c) => {
                d.base_types(out);
                c.base_types(out);
            }
            t => {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Iota => write!(f, "$i"),
            Type::O => write!(f, "$o"),
            Type::Base(n) => write!(f, "{n}"),
            Type::Fun(d, c) => {
                if d.is_fun() {
                    write!(f, "({d})>{c}")
                } else {
                    write!(f, "{d}>{c}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_type_shape() {
        let ct = Type::choice(Type::Iota);
        assert_eq!(ct.choice_elem(), Some(&Type::Iota));
        assert_eq!(Type::predicate(Type::Iota).choice_elem(), None);
        assert_eq!(ct.to_string(), "($i>$o)>$i");
        assert_eq!(ct.order(), 2);
    }

    #[test]
    fn split_and_curry() {
        let t = Type::curried([Type::Iota, Type::O], Type::Iota);
        assert_eq!(t.to_string(), "$i>$o>$i");
        assert_eq!(t.split(), (vec![Type::Iota, Type::O], Type::Iota));
        assert_eq!(t.arity(), 2);
    }
}
