use std::fmt;

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::logic::atoms::{AtomTable, MAX_LEVEL};

/// A state description of `L_q` for the constants `a_1..a_n`: one atom per
/// constant.
///
/// Atom indices are stored 0-based. The public constructors, `Display` and
/// the JSON form use the 1-based numbering `α_1..α_{2^q}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateDescription {
    q: u32,
    atoms: Vec<usize>,
}

impl StateDescription {
    /// Builds a state description from 1-based atom indices `h_1..h_n`.
    pub fn new(q: u32, h: &[usize]) -> Result<Self> {
        let count = atom_count(q)?;
        let atoms = h
            .iter()
            .map(|&i| {
                if i == 0 || i > count {
                    Err(Error::AtomOutOfRange { index: i, count })
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { q, atoms })
    }

    /// Builds a state description from 0-based atom indices.
    pub fn from_indices(q: u32, atoms: Vec<usize>) -> Result<Self> {
        let count = atom_count(q)?;
        if let Some(&bad) = atoms.iter().find(|&&i| i >= count) {
            return Err(Error::AtomOutOfRange { index: bad + 1, count });
        }
        Ok(Self { q, atoms })
    }

    pub(crate) fn from_indices_unchecked(q: u32, atoms: Vec<usize>) -> Self {
        Self { q, atoms }
    }

    pub fn empty(q: u32) -> Self {
        Self { q, atoms: Vec::new() }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// 0-based atom indices, one per constant.
    pub fn indices(&self) -> &[usize] {
        &self.atoms
    }

    /// 1-based atom indices `h_1..h_n`.
    pub fn one_based(&self) -> Vec<usize> {
        self.atoms.iter().map(|i| i + 1).collect()
    }

    /// `n_i = |{j : h_j = i}|` for every atom.
    pub fn counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; 1 << self.q];
        for &i in &self.atoms {
            counts[i] += 1;
        }
        counts
    }

    /// `Θ(a_1..a_m) ∧ Θ'(a_{m+1}..a_{m+n})`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::LevelMismatch { expected: self.q, found: other.q });
        }
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        Ok(Self { q: self.q, atoms })
    }

    /// `Θ ∧ α(a_{n+1})` for a 0-based atom index.
    pub fn extended(&self, atom: usize) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        Self { q: self.q, atoms }
    }

    /// Every state description of `L_q` on `n` constants, lexicographic.
    pub fn all(q: u32, n: usize) -> Result<impl Iterator<Item = StateDescription>> {
        let count = atom_count(q)?;
        Ok(combinatorics::tuples(count, n).map(move |atoms| Self { q, atoms }))
    }
}

impl fmt::Display for StateDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, h) in self.one_based().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, "]")
    }
}

fn atom_count(q: u32) -> Result<usize> {
    if q == 0 || q > MAX_LEVEL {
        return Err(Error::LevelOutOfRange { q, max: MAX_LEVEL });
    }
    Ok(1usize << q)
}

/// A permutation σ of the predicates of `L_q`, acting on atoms by
/// `σα = ⋀ σ(P_i)^{ε_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredPermutation {
    q: u32,
    /// 0-based images: `mapping[i] = σ(i+1) - 1`.
    mapping: Vec<u32>,
    /// Induced action on 0-based atom indices.
    atom_map: Vec<usize>,
}

impl PredPermutation {
    /// `images[i]` is `σ(i+1)`, 1-based.
    pub fn new(q: u32, images: &[u32]) -> Result<Self> {
        let mapping = check_permutation(images.iter().map(|&i| i as usize), q as usize)?;
        let mapping: Vec<u32> = mapping.into_iter().map(|i| i as u32).collect();
        if mapping.len() != q as usize {
            return Err(Error::NotAPermutation {
                size: q as usize,
                detail: format!("expected {q} images, found {}", images.len()),
            });
        }
        let table = AtomTable::new(q)?;
        let atom_map = (0..table.len())
            .map(|i| {
                let source = table.mask(i);
                let mut image = 0u32;
                for p in 0..q {
                    if (source >> (q - 1 - p)) & 1 == 1 {
                        image |= 1 << (q - 1 - mapping[p as usize]);
                    }
                }
                table.index_of_mask(image)
            })
            .collect();
        Ok(Self { q, mapping, atom_map })
    }

    pub fn identity(q: u32) -> Result<Self> {
        Self::new(q, &(1..=q).collect::<Vec<_>>())
    }

    /// All `q!` permutations in lexicographic one-line order.
    pub fn all(q: u32) -> Result<Vec<Self>> {
        combinatorics::permutations(q as usize)
            .into_iter()
            .map(|p| Self::new(q, &p.iter().map(|&i| i as u32 + 1).collect::<Vec<_>>()))
            .collect()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// One-line notation, 1-based.
    pub fn images(&self) -> Vec<u32> {
        self.mapping.iter().map(|i| i + 1).collect()
    }

    /// Image of a 0-based atom index.
    pub fn apply_atom(&self, atom: usize) -> usize {
        self.atom_map[atom]
    }

    /// The permutation `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.q != other.q {
            return Err(Error::LevelMismatch { expected: self.q, found: other.q });
        }
        let images: Vec<u32> =
            other.mapping.iter().map(|&i| self.mapping[i as usize] + 1).collect();
        Self::new(self.q, &images)
    }

    /// Image of an atom-indexed vector: `(σx)_{σ(i)} = x_i`.
    pub fn apply_vector<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        for (i, v) in x.iter().enumerate() {
            out[self.atom_map[i]] = v.clone();
        }
        out
    }
}

pub fn apply_pred_perm(sigma: &PredPermutation, target: &StateDescription) -> Result<StateDescription> {
    if sigma.q != target.q {
        return Err(Error::LevelMismatch { expected: sigma.q, found: target.q });
    }
    Ok(StateDescription {
        q: target.q,
        atoms: target.atoms.iter().map(|&a| sigma.apply_atom(a)).collect(),
    })
}

/// Renames constants: `τ` (1-based one-line notation) sends `a_j` to
/// `a_{τ(j)}`, so the atom of `a_j` in the input becomes the atom of
/// `a_{τ(j)}` in the output.
pub fn apply_const_perm(tau: &[usize], target: &StateDescription) -> Result<StateDescription> {
    let tau = check_permutation(tau.iter().copied(), target.n())?;
    if tau.len() != target.n() {
        return Err(Error::NotAPermutation {
            size: target.n(),
            detail: format!("expected {} images, found {}", target.n(), tau.len()),
        });
    }
    let mut atoms = target.atoms.clone();
    for (j, &image) in tau.iter().enumerate() {
        atoms[image] = target.atoms[j];
    }
    Ok(StateDescription { q: target.q, atoms })
}

/// Validates 1-based one-line notation, returning 0-based images.
fn check_permutation(images: impl Iterator<Item = usize>, size: usize) -> Result<Vec<usize>> {
    let mut seen = vec![false; size];
    let mut out = Vec::with_capacity(size);
    for image in images {
        if image == 0 || image > size {
            return Err(Error::NotAPermutation {
                size,
                detail: format!("image {image} out of range"),
            });
        }
        if std::mem::replace(&mut seen[image - 1], true) {
            return Err(Error::NotAPermutation { size, detail: format!("image {image} repeated") });
        }
        out.push(image - 1);
    }
    Ok(out)
}
