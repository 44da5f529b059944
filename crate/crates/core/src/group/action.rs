use std::collections::BTreeSet;

use thiserror::Error;

use super::{Elem, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action table has {got} rows, group order is {expected}")]
    Rows { got: usize, expected: usize },
    #[error("row {row} of the action table has {got} entries, fiber size is {expected}")]
    Width { row: usize, got: usize, expected: usize },
    #[error("action of {elem} sends point {point} outside the fiber")]
    OutOfRange { elem: Elem, point: usize },
    #[error("identity moves point {0}")]
    Identity(usize),
    #[error("({g} * {h}) . {point} differs from {g} . ({h} . {point})")]
    Compatibility { g: Elem, h: Elem, point: usize },
}

/// Left action of a finite group on the points `0..fiber_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupAction {
    group: FiniteGroup,
    fiber_size: usize,
    table: Vec<usize>,
}

impl GroupAction {
    pub fn new(group: FiniteGroup, rows: Vec<Vec<usize>>) -> Result<Self, ActionError> {
        if rows.len() != group.order() {
            return Err(ActionError::Rows { got: rows.len(), expected: group.order() });
        }
        let fiber_size = rows[0].len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != fiber_size {
                return Err(ActionError::Width { row, got: r.len(), expected: fiber_size });
            }
            if let Some(point) = r.iter().position(|&p| p >= fiber_size) {
                return Err(ActionError::OutOfRange { elem: row, point });
            }
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let act = |g: Elem, f: usize| table[g * fiber_size + f];
        if let Some(f) = (0..fiber_size).find(|&f| act(0, f) != f) {
            return Err(ActionError::Identity(f));
        }
        for g in group.elements() {
            for h in group.elements() {
                for point in 0..fiber_size {
                    if act(group.mul(g, h), point) != act(g, act(h, point)) {
                        return Err(ActionError::Compatibility { g, h, point });
                    }
                }
            }
        }
        Ok(GroupAction { group, fiber_size, table })
    }

    /// The group acting on itself by left multiplication.
    pub fn regular(group: &FiniteGroup) -> Self {
        let rows = group.elements().map(|g| group.elements().map(|f| group.mul(g, f)).collect()).collect();
        Self::new(group.clone(), rows).expect("left multiplication is an action")
    }

    pub fn trivial(group: &FiniteGroup, fiber_size: usize) -> Self {
        let rows = group.elements().map(|_| (0..fiber_size).collect()).collect();
        Self::new(group.clone(), rows).expect("trivial action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber_size
    }

    #[inline]
    pub fn act(&self, g: Elem, point: usize) -> usize {
        self.table[g * self.fiber_size + point]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.fiber_size.max(1)).map(<[usize]>::to_vec).collect()
    }

    /// Orbits of the subgroup generated by `gens`, each sorted, ordered by
    /// least point.
    pub fn orbits_under(&self, gens: &[Elem]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.fiber_size];
        let mut orbits = Vec::new();
        for start in 0..self.fiber_size {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = BTreeSet::from([start]);
            let mut frontier = vec![start];
            while let Some(p) = frontier.pop() {
                for &g in gens {
                    for q in [self.act(g, p), self.act(self.group.inv(g), p)] {
                        if !seen[q] {
                            seen[q] = true;
                            orbit.insert(q);
                            frontier.push(q);
                        }
                    }
                }
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let all: Vec<Elem> = self.group.elements().collect();
        self.orbits_under(&all)
    }

    pub fn stabilizer(&self, point: usize) -> Vec<Elem> {
        self.group.elements().filter(|&g| self.act(g, point) == point).collect()
    }
}
