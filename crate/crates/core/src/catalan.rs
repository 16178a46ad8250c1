//! Catalan numbers and the `W_n` sequence (`W_n` = number of triangulations
//! of a convex n-gon, with `W_2 = 1`).

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |a, b| a + b)
    }
}

impl Product for BigCount {
    fn product<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::one(), |a, b| a * b)
    }
}

/// Counts leave this crate as decimal strings; they overflow `u64` quickly.
impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

fn table() -> &'static RwLock<Vec<BigUint>> {
    static TABLE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigUint::one()]))
}

/// The n-th Catalan number, via `c_n = c_{n-1} * 2(2n-1) / (n+1)`.
pub fn catalan(n: usize) -> BigCount {
    if let Some(v) = table().read().expect("catalan table poisoned").get(n) {
        return BigCount(v.clone());
    }
    let mut t = table().write().expect("catalan table poisoned");
    while t.len() <= n {
        let k = t.len();
        let (q, r) =
            (t[k - 1].clone() * BigUint::from(2 * (2 * k - 1))).div_rem(&BigUint::from(k + 1));
        assert!(r.is_zero(), "catalan recurrence not integral at k = {k}");
        t.push(q);
    }
    BigCount(t[n].clone())
}

/// `W_n`: triangulations of a convex n-gon, with `W_2 = 1`.
pub fn w(n: usize) -> Result<BigCount> {
    if n < 2 {
        return Err(Error::WOutOfDomain(n));
    }
    Ok(catalan(n - 2))
}

/// Checks `W_n = sum_{k=2}^{n-1} W_k W_{n-k+1}` exactly.
pub fn check_w_recurrence(n: usize) -> bool {
    if n < 3 {
        return false;
    }
    let rhs: BigCount = (2..n).map(|k| catalan(k - 2) * catalan(n - k - 1)).sum();
    catalan(n - 2) == rhs
}

/// A nonempty list of polygon sizes, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeList(Vec<usize>);

impl SizeList {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSizeList("empty".into()));
        }
        if let Some(k) = sizes.iter().find(|&&k| k < 2) {
            return Err(Error::InvalidSizeList(format!("entry {k} is below 2")));
        }
        Ok(SizeList(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    /// `k_1 + ... + k_m - 2(m - 1)`, the size of the merged polygon.
    pub fn merged_size(&self) -> usize {
        self.0.iter().sum::<usize>() - 2 * (self.0.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub lhs: BigCount,
    pub rhs: BigCount,
    pub holds: bool,
}

/// `prod W_{k_i}` against `W_{sum k_i - 2(m-1)}`.
pub fn check_product_inequality(ks: &SizeList) -> ProductCheck {
    let lhs: BigCount = ks.sizes().iter().map(|&k| catalan(k - 2)).product();
    let rhs = catalan(ks.merged_size() - 2);
    let holds = lhs <= rhs;
    ProductCheck { lhs, rhs, holds }
}

/// Visits every ordered size list (entries >= 2) whose entries sum to at
/// most `max_sum`. Returns the number of lists visited.
pub fn for_each_size_list(max_sum: usize, mut f: impl FnMut(&SizeList)) -> usize {
    fn rec(prefix: &mut Vec<usize>, room: usize, count: &mut usize, f: &mut dyn FnMut(&SizeList)) {
        if !prefix.is_empty() {
            *count += 1;
            f(&SizeList(prefix.clone()));
        }
        for k in 2..=room {
            prefix.push(k);
            rec(prefix, room - k, count, f);
            prefix.pop();
        }
    }
    let mut count = 0;
    rec(&mut Vec::new(), max_sum, &mut count, &mut f);
    count
}
