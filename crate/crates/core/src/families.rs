//! Constructors for the benchmark state families.
//!
//! Every family that is invariant under subsystem permutations (GHZ, Dicke,
//! maximally correlated classical, `|a_k⟩`) is flagged as such, which lets
//! the correlation search take the compact-partition fast path.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::error::{arg, Error, Result};
use crate::limits::checked_dim;
use crate::state::{DensityState, ProbTable, Repr, C64};

/// Pure state `(|0…0⟩ + |1…1⟩)/√2` on `n` subsystems of dimension `d`
/// (only levels 0 and 1 are populated).
pub fn make_ghz(n: usize, d: usize) -> Result<DensityState> {
    two_branch(n, d, std::f64::consts::FRAC_1_SQRT_2)
}

/// `|a_k⟩ = a|0⟩^{⊗k} + √(1−a²)|1⟩^{⊗k}` on `k` qubits, `0 < a < 1`.
pub fn make_a_family(k: usize, a: f64) -> Result<DensityState> {
    if !(a > 0.0 && a < 1.0) {
        return arg(format!("a-family amplitude must lie in (0, 1), got {a}"));
    }
    two_branch(k, 2, a)
}

fn two_branch(n: usize, d: usize, a: f64) -> Result<DensityState> {
    if n == 0 {
        return arg("need at least one subsystem");
    }
    if d < 2 {
        return arg(format!("local dimension must be at least 2, got {d}"));
    }
    let dims = vec![d; n];
    let dim = checked_dim(&dims)?;
    let ones = (0..n).fold(0, |acc, _| acc * d + 1);
    let mut v = DVector::zeros(dim);
    v[0] = C64::new(a, 0.0);
    v[ones] = C64::new((1.0 - a * a).sqrt(), 0.0);
    Ok(DensityState::from_amplitudes(dims, v)?.with_symmetric(true))
}

/// Classical state `Σ_i |i⟩⟨i|^{⊗n} / d`.
pub fn make_classical(n: usize, d: usize) -> Result<DensityState> {
    if n == 0 {
        return arg("need at least one subsystem");
    }
    if !(2..=256).contains(&d) {
        return arg(format!("classical local dimension must be in 2..=256, got {d}"));
    }
    let table: ProbTable = (0..d).map(|i| (vec![i as u8; n], 1.0 / d as f64)).collect();
    Ok(DensityState::from_probabilities(vec![d; n], table)?.with_symmetric(true))
}

/// Symmetric Dicke state on `n` qubits with `m` excitations.
pub fn make_dicke(n: usize, m: usize) -> Result<DensityState> {
    if n == 0 {
        return arg("need at least one subsystem");
    }
    if m > n {
        return arg(format!("Dicke excitation count {m} exceeds {n}"));
    }
    let dims = vec![2; n];
    let dim = checked_dim(&dims)?;
    let weight: Vec<usize> = (0..dim).filter(|i| i.count_ones() as usize == m).collect();
    let amp = C64::new(1.0 / (weight.len() as f64).sqrt(), 0.0);
    let mut v = DVector::zeros(dim);
    for i in weight {
        v[i] = amp;
    }
    Ok(DensityState::from_amplitudes(dims, v)?.with_symmetric(true))
}

/// `(Σ_i |ii⟩/√d)^{⊗n/2}` with pairs on subsystems (1,2), (3,4), ….
pub fn make_bell_product(n: usize, d: usize) -> Result<DensityState> {
    check_even(n)?;
    if d < 2 {
        return arg(format!("local dimension must be at least 2, got {d}"));
    }
    let dims = vec![d; n];
    checked_dim(&dims)?;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let pair = DVector::from_fn(d * d, |i, _| if i / d == i % d { amp } else { C64::new(0.0, 0.0) });
    let mut v = pair.clone();
    for _ in 1..n / 2 {
        v = v.kronecker(&pair);
    }
    Ok(DensityState::from_parts_unchecked(dims, Repr::Pure(v)))
}

/// `[(|00⟩⟨00| + |11⟩⟨11|)/2]^{⊗n/2}`.
pub fn make_classical_pair_product(n: usize) -> Result<DensityState> {
    check_even(n)?;
    let mut table = ProbTable::new();
    for bits in 0..(1usize << (n / 2)) {
        let key: Vec<u8> = (0..n / 2)
            .flat_map(|j| {
                let b = ((bits >> (n / 2 - 1 - j)) & 1) as u8;
                [b, b]
            })
            .collect();
        table.insert(key, 1.0 / (1u64 << (n / 2)) as f64);
    }
    DensityState::from_probabilities(vec![2; n], table)
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return arg(format!("pair-product families need a positive even N, got {n}"));
    }
    Ok(())
}

/// A named state family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily {
    Ghz { n: usize, d: usize },
    Classical { n: usize, d: usize },
    BellProduct { n: usize, d: usize },
    ClassicalPairProduct { n: usize },
    Dicke { n: usize, m: usize },
    AFamily { n: usize, a: f64 },
    QuditClassical { n: usize, d: usize },
    QuditBellProduct { n: usize, d: usize },
}

impl StateFamily {
    pub fn build(&self) -> Result<DensityState> {
        match *self {
            StateFamily::Ghz { n, d } => make_ghz(n, d),
            StateFamily::Classical { n, d } | StateFamily::QuditClassical { n, d } => {
                make_classical(n, d)
            }
            StateFamily::BellProduct { n, d } | StateFamily::QuditBellProduct { n, d } => {
                make_bell_product(n, d)
            }
            StateFamily::ClassicalPairProduct { n } => make_classical_pair_product(n),
            StateFamily::Dicke { n, m } => make_dicke(n, m),
            StateFamily::AFamily { n, a } => make_a_family(n, a),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            StateFamily::Ghz { .. } => "ghz",
            StateFamily::Classical { .. } => "classical",
            StateFamily::BellProduct { .. } => "bell-product",
            StateFamily::ClassicalPairProduct { .. } => "classical-pair-product",
            StateFamily::Dicke { .. } => "dicke",
            StateFamily::AFamily { .. } => "a-family",
            StateFamily::QuditClassical { .. } => "qudit-classical",
            StateFamily::QuditBellProduct { .. } => "qudit-bell-product",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            StateFamily::Ghz { n, .. }
            | StateFamily::Classical { n, .. }
            | StateFamily::BellProduct { n, .. }
            | StateFamily::ClassicalPairProduct { n }
            | StateFamily::Dicke { n, .. }
            | StateFamily::AFamily { n, .. }
            | StateFamily::QuditClassical { n, .. }
            | StateFamily::QuditBellProduct { n, .. } => n,
        }
    }

    /// Local dimension.
    pub fn d(&self) -> usize {
        match *self {
            StateFamily::Ghz { d, .. }
            | StateFamily::Classical { d, .. }
            | StateFamily::BellProduct { d, .. }
            | StateFamily::QuditClassical { d, .. }
            | StateFamily::QuditBellProduct { d, .. } => d,
            _ => 2,
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateFamily::ClassicalPairProduct { n } => write!(f, "{}:{n}", self.id()),
            StateFamily::Dicke { n, m } => write!(f, "dicke:{n}:{m}"),
            StateFamily::AFamily { n, a } => write!(f, "a-family:{n}:{a}"),
            _ => write!(f, "{}:{}:{}", self.id(), self.n(), self.d()),
        }
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    /// `name:N[:param]`, e.g. `ghz:4`, `classical:5:3`, `dicke:4:2`,
    /// `a-family:3:0.6`, `bell-product:4`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Argument(format!("cannot parse state family '{s}'"));
        let int = |i: usize| -> Result<usize> {
            parts.get(i).ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())
        };
        let opt_d = || -> Result<usize> { if parts.len() > 2 { int(2) } else { Ok(2) } };
        if parts.len() < 2 || parts.len() > 3 {
            return Err(bad());
        }
        let n = int(1)?;
        let family = match parts[0] {
            "ghz" => StateFamily::Ghz { n, d: opt_d()? },
            "classical" => StateFamily::Classical { n, d: opt_d()? },
            "bell-product" => StateFamily::BellProduct { n, d: opt_d()? },
            "classical-pair-product" if parts.len() == 2 => StateFamily::ClassicalPairProduct { n },
            "dicke" => StateFamily::Dicke { n, m: int(2)? },
            "a-family" => StateFamily::AFamily {
                n,
                a: parts.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?,
            },
            "qudit-classical" => StateFamily::QuditClassical { n, d: int(2)? },
            "qudit-bell-product" => StateFamily::QuditBellProduct { n, d: int(2)? },
            _ => return Err(bad()),
        };
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_single_site() {
        let s = make_ghz(1, 2).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.entropy().unwrap(), 0.0);
    }

    #[test]
    fn ghz_qudit_populates_two_levels() {
        let s = make_ghz(2, 3).unwrap();
        let Repr::Pure(v) = s.repr() else { panic!() };
        let nonzero: Vec<usize> = (0..9).filter(|&i| v[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![0, 4]);
    }

    #[test]
    fn a_family_rejects_endpoints() {
        assert!(make_a_family(3, 0.0).is_err());
        assert!(make_a_family(3, 1.0).is_err());
        let sym = make_a_family(3, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!(sym.max_abs_diff(&make_ghz(3, 2).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn dicke_zero_excitations_is_product() {
        let s = make_dicke(3, 0).unwrap();
        let Repr::Pure(v) = s.repr() else { panic!() };
        assert_eq!(v[0], C64::new(1.0, 0.0));
        assert!(make_dicke(3, 4).is_err());
    }

    #[test]
    fn odd_pair_products_rejected() {
        assert!(matches!(make_bell_product(3, 2), Err(Error::Argument(_))));
        assert!(matches!(make_classical_pair_product(5), Err(Error::Argument(_))));
    }

    #[test]
    fn pair_product_table() {
        let s = make_classical_pair_product(4).unwrap();
        let Repr::Classical(t) = s.repr() else { panic!() };
        assert_eq!(t.len(), 4);
        assert!(t.contains_key(&vec![1u8, 1, 0, 0]));
    }

    #[test]
    fn bell_product_is_fold_of_pairs() {
        let pair = make_bell_product(2, 3).unwrap();
        let folded = pair.tensor(&pair).unwrap();
        assert_eq!(folded.repr(), make_bell_product(4, 3).unwrap().repr());
    }

    #[test]
    fn constructor_outputs_validate() {
        for s in [
            make_ghz(4, 2),
            make_ghz(3, 3),
            make_classical(5, 3),
            make_dicke(6, 3),
            make_bell_product(6, 2),
            make_classical_pair_product(6),
            make_a_family(4, 0.3),
        ] {
            s.unwrap().validate().unwrap();
        }
    }

    #[test]
    fn symmetric_families_are_permutation_invariant() {
        for s in [make_ghz(4, 2), make_dicke(5, 2), make_classical(4, 3)] {
            let s = s.unwrap();
            let mut perm: Vec<usize> = (0..s.n()).rev().collect();
            perm.swap(0, 2);
            let p = s.permute(&perm).unwrap();
            assert_eq!(p.repr(), s.repr());
        }
    }

    #[test]
    fn parse_family_strings() {
        assert_eq!("ghz:4".parse::<StateFamily>().unwrap(), StateFamily::Ghz { n: 4, d: 2 });
        assert_eq!("dicke:4:2".parse::<StateFamily>().unwrap(), StateFamily::Dicke { n: 4, m: 2 });
        assert_eq!(
            "classical:5:3".parse::<StateFamily>().unwrap(),
            StateFamily::Classical { n: 5, d: 3 }
        );
        assert!("dicke:4".parse::<StateFamily>().is_err());
        assert!("nonsense:4".parse::<StateFamily>().is_err());
        let f = StateFamily::AFamily { n: 3, a: 0.6 };
        assert_eq!(f.to_string().parse::<StateFamily>().unwrap(), f);
    }
}
