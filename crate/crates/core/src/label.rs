use std::fmt;

/// Name of a slot (input) of an operation. Labels at or above
/// [`Label::FRESH_BASE`] are reserved for internally generated symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    pub const FRESH_BASE: u32 = 1 << 31;

    pub fn fresh(k: u32) -> Label {
        Label(Self::FRESH_BASE + k)
    }

    pub fn is_fresh(self) -> bool {
        self.0 >= Self::FRESH_BASE
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_fresh() {
            write!(f, "#{}", self.0 - Self::FRESH_BASE)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl From<u32> for Label {
    fn from(v: u32) -> Self {
        Label(v)
    }
}
