//! Interned action and proposition names.
//!
//! Names are reference-counted strings: equal names compare, hash and order
//! identically, so interning is injective by construction. Cloning is cheap.

use std::fmt;
use std::sync::Arc;

macro_rules! symbol {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            /// Panics on an empty name.
            pub fn new(name: impl AsRef<str>) -> Self {
                let name = name.as_ref();
                assert!(!name.is_empty(), concat!(stringify!($name), " names must be non-empty"));
                Self(Arc::from(name))
            }

            pub fn name(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self::new(s)
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                if s.is_empty() {
                    return Err(serde::de::Error::custom("empty name"));
                }
                Ok(Self::new(s))
            }
        }
    };
}

symbol!(
    /// A transition label.
    ActionId
);
symbol!(
    /// A state proposition.
    PropId
);

/// Reserved name of the controller's yield action.
pub const YIELD_C: &str = "yieldC";
/// Reserved name of the environment's yield action.
pub const YIELD_E: &str = "yieldE";

pub fn yield_c() -> ActionId {
    ActionId::new(YIELD_C)
}

pub fn yield_e() -> ActionId {
    ActionId::new(YIELD_E)
}

pub fn is_yield(a: &ActionId) -> bool {
    a.name() == YIELD_C || a.name() == YIELD_E
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_names_are_identical_ids() {
        let a = ActionId::new("go.1.1");
        let b = ActionId::from(String::from("go.1.1"));
        assert_eq!(a, b);
        assert_ne!(a, ActionId::new("go.1.2"));
        assert_eq!(a.name(), "go.1.1");
    }

    #[test]
    #[should_panic]
    fn empty_names_rejected() {
        let _ = PropId::new("");
    }
}
