use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("cycle {cycle}: index {index} out of range for {d} tiles")]
    OutOfRange { cycle: String, index: usize, d: usize },
    #[error("cycle {cycle}: index {index} repeated")]
    Repeated { cycle: String, index: usize },
    #[error("cycle {cycle}: not a transposition")]
    NotTransposition { cycle: String },
    #[error("malformed cycle notation near {0:?}")]
    Syntax(String),
    #[error("image list is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("permutations act on different sets ({0} vs {1} points)")]
    SizeMismatch(usize, usize),
}

/// A bijection of `0..d`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(PermError::NotBijection(d));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint cycles such as `(0 3 4)(1 2)`; unnamed points are fixed.
    pub fn from_cycles(text: &str, d: usize) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut used = vec![false; d];
        for cycle in parse_cycles(text)? {
            let label = cycle_label(&cycle);
            for &x in &cycle {
                if x >= d {
                    return Err(PermError::OutOfRange {
                        cycle: label,
                        index: x,
                        d,
                    });
                }
                if used[x] {
                    return Err(PermError::Repeated {
                        cycle: label,
                        index: x,
                    });
                }
                used[x] = true;
            }
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self.then(other)` applies `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| self.images[x] == i)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.images[i] == i).collect()
    }

    pub fn fixed_count(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, x)| i == *x).count()
    }

    pub fn moved_count(&self) -> usize {
        self.len() - self.fixed_count()
    }

    /// Non-trivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Renders as `(a b)(c d)`; the identity renders as the empty string.
    pub fn to_cycle_string(&self) -> String {
        self.cycles().iter().map(|c| cycle_label(c)).collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "()")
        } else {
            write!(f, "{}", self.to_cycle_string())
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn cycle_label(cycle: &[usize]) -> String {
    let body: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(" "))
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(PermError::Syntax(rest.to_string()));
        };
        let close = body
            .find(')')
            .ok_or_else(|| PermError::Syntax(rest.to_string()))?;
        let inner = &body[..close];
        let cycle = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| PermError::Syntax(inner.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if !cycle.is_empty() {
            out.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// Parses a product of disjoint transpositions, the form every unfolding
/// generator takes. The empty string yields the identity; callers that need a
/// genuine reflection must reject it themselves.
pub fn involution_from_cycles(text: &str, d: usize) -> Result<Permutation, PermError> {
    let cycles = parse_cycles(text)?;
    let mut used = vec![false; d];
    for cycle in &cycles {
        let label = cycle_label(cycle);
        if cycle.len() != 2 {
            return Err(PermError::NotTransposition { cycle: label });
        }
        for &x in cycle {
            if x >= d {
                return Err(PermError::OutOfRange {
                    cycle: label,
                    index: x,
                    d,
                });
            }
            if used[x] {
                return Err(PermError::Repeated {
                    cycle: label,
                    index: x,
                });
            }
            used[x] = true;
        }
        if cycle[0] == cycle[1] {
            return Err(PermError::Repeated {
                cycle: label,
                index: cycle[0],
            });
        }
    }
    Permutation::from_cycles(text, d)
}

/// Converts cycle text written with 1-based indices to 0-based text.
pub fn one_based_to_zero_based(text: &str) -> Result<String, PermError> {
    let cycles = parse_cycles(text)?;
    let mut out = String::new();
    for c in cycles {
        let shifted = c
            .iter()
            .map(|&x| x.checked_sub(1).ok_or_else(|| PermError::Syntax(text.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        out.push_str(&cycle_label(&shifted));
    }
    Ok(out)
}
