use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A twist `O(k)` or `O(k,l)`: one integer per variable group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree {
    arity: u8,
    comps: [i64; 2],
}

impl MultiDegree {
    pub fn zero(arity: usize) -> Self {
        assert!((1..=2).contains(&arity), "arity must be 1 or 2");
        MultiDegree { arity: arity as u8, comps: [0; 2] }
    }

    pub fn new1(k: i64) -> Self {
        MultiDegree { arity: 1, comps: [k, 0] }
    }

    pub fn new2(k: i64, l: i64) -> Self {
        MultiDegree { arity: 2, comps: [k, l] }
    }

    pub fn from_slice(c: &[i64]) -> Self {
        match *c {
            [k] => Self::new1(k),
            [k, l] => Self::new2(k, l),
            _ => panic!("multidegree arity must be 1 or 2, got {}", c.len()),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.comps[..self.arity()]
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &Self) -> bool {
        self.arity == other.arity && self.as_slice().iter().zip(other.as_slice()).all(|(a, b)| a <= b)
    }

    pub fn any_negative(&self) -> bool {
        self.as_slice().iter().any(|&c| c < 0)
    }

    pub fn with(&self, idx: usize, value: i64) -> Self {
        let mut out = *self;
        assert!(idx < self.arity());
        out.comps[idx] = value;
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut out = *self;
        for c in out.comps.iter_mut() {
            *c *= s;
        }
        out
    }
}

impl Index<usize> for MultiDegree {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.as_slice()[i]
    }
}

impl Add for MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.arity, rhs.arity, "multidegree arity mismatch");
        MultiDegree { arity: self.arity, comps: [self.comps[0] + rhs.comps[0], self.comps[1] + rhs.comps[1]] }
    }
}

impl Sub for MultiDegree {
    type Output = MultiDegree;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for MultiDegree {
    type Output = MultiDegree;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl fmt::Debug for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_slice() {
            [k] => write!(f, "({k})"),
            [k, l] => write!(f, "({k},{l})"),
            _ => unreachable!(),
        }
    }
}

impl Serialize for MultiDegree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiDegree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(i64),
            Many(Vec<i64>),
        }
        match Raw::deserialize(d)? {
            Raw::One(k) => Ok(MultiDegree::new1(k)),
            Raw::Many(v) if (1..=2).contains(&v.len()) => Ok(MultiDegree::from_slice(&v)),
            Raw::Many(v) => Err(serde::de::Error::custom(format!("twist must have 1 or 2 entries, got {}", v.len()))),
        }
    }
}
