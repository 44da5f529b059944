use thiserror::Error;

use super::{Elem, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossedModuleError {
    #[error("boundary has {got} entries, fiber group order is {expected}")]
    BoundaryLength { got: usize, expected: usize },
    #[error("boundary sends {0} outside the base group")]
    BoundaryRange(Elem),
    #[error("action table is not {rows}x{cols}")]
    ActionShape { rows: usize, cols: usize },
    #[error("boundary is not a homomorphism: d({0} * {1}) != d({0}) d({1})")]
    BoundaryNotHomomorphism(Elem, Elem),
    #[error("action of {g} is not an automorphism (fails on {h}, {k})")]
    NotAutomorphism { g: Elem, h: Elem, k: Elem },
    #[error("action of {0} is not a bijection")]
    NotBijective(Elem),
    #[error("action is not compatible with the base group at ({g}, {g2}) on {h}")]
    ActionNotCompatible { g: Elem, g2: Elem, h: Elem },
    #[error("equivariance fails: d({g} . {h}) != {g} d({h}) {g}^-1")]
    Equivariance { g: Elem, h: Elem },
    #[error("Peiffer identity fails: d({h}) . {h2} != {h} {h2} {h}^-1")]
    Peiffer { h: Elem, h2: Elem },
}

/// A crossed module `boundary: H -> G` with `G` acting on `H`; the strict
/// 2-group whose 2-cells carry the triangle witnesses of a gerbe cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    base: FiniteGroup,
    fiber: FiniteGroup,
    boundary: Vec<Elem>,
    action: Vec<Elem>,
}

impl CrossedModule {
    /// `action[g][h]` is `g . h`. Every axiom is checked exhaustively.
    pub fn new(
        base: FiniteGroup,
        fiber: FiniteGroup,
        boundary: Vec<Elem>,
        action: Vec<Vec<Elem>>,
    ) -> Result<Self, CrossedModuleError> {
        let (n, m) = (base.order(), fiber.order());
        if boundary.len() != m {
            return Err(CrossedModuleError::BoundaryLength { got: boundary.len(), expected: m });
        }
        if let Some(h) = boundary.iter().position(|&g| g >= n) {
            return Err(CrossedModuleError::BoundaryRange(h));
        }
        if action.len() != n || action.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(CrossedModuleError::ActionShape { rows: n, cols: m });
        }
        let xm = CrossedModule { base, fiber, boundary, action: action.into_iter().flatten().collect() };
        let (g_, h_) = (&xm.base, &xm.fiber);

        for a in h_.elements() {
            for b in h_.elements() {
                if xm.boundary[h_.mul(a, b)] != g_.mul(xm.boundary[a], xm.boundary[b]) {
                    return Err(CrossedModuleError::BoundaryNotHomomorphism(a, b));
                }
            }
        }
        for g in g_.elements() {
            let mut hit = vec![false; m];
            for h in h_.elements() {
                hit[xm.act(g, h)] = true;
            }
            if hit.iter().any(|&x| !x) {
                return Err(CrossedModuleError::NotBijective(g));
            }
            for h in h_.elements() {
                for k in h_.elements() {
                    if xm.act(g, h_.mul(h, k)) != h_.mul(xm.act(g, h), xm.act(g, k)) {
                        return Err(CrossedModuleError::NotAutomorphism { g, h, k });
                    }
                }
            }
        }
        for h in h_.elements() {
            if xm.act(0, h) != h {
                return Err(CrossedModuleError::ActionNotCompatible { g: 0, g2: 0, h });
            }
            for g in g_.elements() {
                for g2 in g_.elements() {
                    if xm.act(g_.mul(g, g2), h) != xm.act(g, xm.act(g2, h)) {
                        return Err(CrossedModuleError::ActionNotCompatible { g, g2, h });
                    }
                }
            }
        }
        for g in g_.elements() {
            for h in h_.elements() {
                if xm.boundary[xm.act(g, h)] != g_.conjugate(g, xm.boundary[h]) {
                    return Err(CrossedModuleError::Equivariance { g, h });
                }
            }
        }
        for h in h_.elements() {
            for h2 in h_.elements() {
                if xm.act(xm.boundary[h], h2) != h_.conjugate(h, h2) {
                    return Err(CrossedModuleError::Peiffer { h, h2 });
                }
            }
        }
        Ok(xm)
    }

    /// `G = H`, identity boundary, conjugation action.
    pub fn adjoint(group: &FiniteGroup) -> Self {
        let action = group.elements().map(|g| group.elements().map(|h| group.conjugate(g, h)).collect()).collect();
        Self::new(group.clone(), group.clone(), group.elements().collect(), action).expect("adjoint crossed module")
    }

    /// Trivial base group, so witnesses form plain abelian Cech data.
    pub fn abelian(fiber: &FiniteGroup) -> Result<Self, CrossedModuleError> {
        let action = vec![fiber.elements().collect()];
        Self::new(FiniteGroup::trivial(), fiber.clone(), vec![0; fiber.order()], action)
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn fiber(&self) -> &FiniteGroup {
        &self.fiber
    }

    #[inline]
    pub fn boundary(&self, h: Elem) -> Elem {
        self.boundary[h]
    }

    pub fn boundary_map(&self) -> &[Elem] {
        &self.boundary
    }

    /// `g . h`
    #[inline]
    pub fn act(&self, g: Elem, h: Elem) -> Elem {
        self.action[g * self.fiber.order() + h]
    }

    pub fn action_rows(&self) -> Vec<Vec<Elem>> {
        self.action.chunks(self.fiber.order()).map(<[Elem]>::to_vec).collect()
    }
}
