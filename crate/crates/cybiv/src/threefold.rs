//! The threefold `W_{k1,k2} = Tot(O(-k1) ⊕ O(-k2))` over `P^1`: two-chart
//! atlas, canonical coordinate transition, the transition matrix of
//! `Λ²T`, and the ring of global holomorphic functions.
//!
//! Charts are `U = C³_{z,u1,u2}` and `V = C³_{ξ,v1,v2}`, glued over
//! `z ≠ 0` by `(ξ, v1, v2) = (z^-1, z^k1 u1, z^k2 u2)`.

use crate::exactpoly::{scalar, Monomial, Poly};
use serde::Serialize;
use std::fmt;

/// The pair of twists `(k1, k2)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct ThreefoldSpec {
    pub k1: i64,
    pub k2: i64,
}

/// Chart tag; exactly two charts exist.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Chart {
    U,
    V,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::U => Chart::V,
            Chart::V => Chart::U,
        }
    }

    /// Variable names used for parsing and rendering in this chart.
    pub fn names(self) -> [&'static str; 3] {
        match self {
            Chart::U => ["z", "u1", "u2"],
            Chart::V => ["xi", "v1", "v2"],
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::U => write!(f, "U"),
            Chart::V => write!(f, "V"),
        }
    }
}

/// Direction of a coordinate change or matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Direction {
    UToV,
    VToU,
}

impl ThreefoldSpec {
    pub fn new(k1: i64, k2: i64) -> Self {
        ThreefoldSpec { k1, k2 }
    }

    /// The Calabi-Yau family member `W_k = W_{k,2-k}`.
    pub fn w(k: i64) -> Self {
        ThreefoldSpec { k1: k, k2: 2 - k }
    }

    /// The canonical bundle is trivial exactly when `k1 + k2 = 2`.
    pub fn is_calabi_yau(&self) -> bool {
        self.k1 + self.k2 == 2
    }

    /// Substitution rules for the requested direction, expressed in the
    /// *target* chart's variable slots: U→V returns the images of
    /// `(z, u1, u2)` as polynomials in `(ξ, v1, v2)`, so that applying
    /// them to a U-chart polynomial rewrites it in V-coordinates.
    pub fn coordinate_transition(&self, dir: Direction) -> [Poly; 3] {
        let (e1, e2) = (self.k1, self.k2);
        // Both directions have the same shape: base inverts, fiber
        // coordinates pick up the (signed) twist.
        let _ = dir;
        [
            Poly::from_monomial(Monomial::new(-1, 0, 0), scalar(1)),
            Poly::from_monomial(Monomial::new(e1, 1, 0), scalar(1)),
            Poly::from_monomial(Monomial::new(e2, 0, 1), scalar(1)),
        ]
    }

    /// Rewrites a chart polynomial in the opposite chart's coordinates.
    /// The result is Laurent in the new base variable.
    pub fn to_other_chart(&self, p: &Poly) -> Poly {
        let rules = self.coordinate_transition(Direction::UToV);
        p.substitute([&rules[0], &rules[1], &rules[2]])
            .expect("transition images are invertible monomials")
    }

    /// Jacobian of the transition, as the matrix `P` with
    /// `∂_{x^j} = Σ_i P[i][j] ∂_{y^i}` (entries in source-chart
    /// coordinates, Laurent in the base variable).
    pub fn jacobian(&self) -> [[Poly; 3]; 3] {
        let (k1, k2) = (self.k1, self.k2);
        let zero = Poly::zero;
        [
            // Row of ξ = z^-1.
            [Poly::term(-1, -2, 0, 0), zero(), zero()],
            // Row of v1 = z^k1 u1.
            [
                Poly::from_monomial(Monomial::new(k1 - 1, 1, 0), scalar(k1)),
                Poly::from_monomial(Monomial::new(k1, 0, 0), scalar(1)),
                zero(),
            ],
            // Row of v2 = z^k2 u2.
            [
                Poly::from_monomial(Monomial::new(k2 - 1, 0, 1), scalar(k2)),
                zero(),
                Poly::from_monomial(Monomial::new(k2, 0, 0), scalar(1)),
            ],
        ]
    }

    /// Transition matrix of `Λ²T` in the bivector basis
    /// `b0 = ∂1∧∂2, b1 = ∂2∧∂0, b2 = ∂0∧∂1`: U-chart coefficient triples
    /// map to V-chart triples by `q̃ = M q` followed by rewriting in
    /// `(ξ, v1, v2)`. Computed as the second exterior power (the cofactor
    /// matrix) of the Jacobian.
    pub fn lambda2_transition(&self) -> TransitionMatrix {
        let p = self.jacobian();
        let mut entries: [[Poly; 3]; 3] = Default::default();
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
                let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
                *e = &(&p[i1][j1] * &p[i2][j2]) - &(&p[i1][j2] * &p[i2][j1]);
            }
        }
        TransitionMatrix {
            entries,
            direction: Direction::UToV,
        }
    }

    /// Determinant factor of the trivector basis: `∂0∧∂1∧∂2 =
    /// det(J) ∂̃0∧∂̃1∧∂̃2` with `det(J) = -z^{k1+k2-2}`.
    pub fn trivector_transition_factor(&self) -> Poly {
        Poly::from_monomial(Monomial::new(self.k1 + self.k2 - 2, 0, 0), scalar(-1))
    }

    /// Whether a single monomial extends holomorphically to the V chart:
    /// `z^r u1^s u2^t` maps to `ξ^{k1 s + k2 t - r} v1^s v2^t`.
    pub fn monomial_is_global(&self, m: &Monomial) -> bool {
        m.z >= 0 && m.z <= self.k1 * m.u1 as i64 + self.k2 * m.u2 as i64
    }

    /// Membership in the image of the global function ring: every term
    /// must satisfy `0 ≤ r ≤ k1·s + k2·t`.
    pub fn is_global_function(&self, p: &Poly) -> bool {
        p.terms().all(|(m, _)| self.monomial_is_global(m))
    }

    /// All global monomials `z^r u1^s u2^t` with `s + t ≤ max_fiber_degree`,
    /// in the canonical monomial order.
    pub fn global_function_monomials(&self, max_fiber_degree: u64) -> Vec<Monomial> {
        let mut out = Vec::new();
        for s in 0..=max_fiber_degree {
            for t in 0..=(max_fiber_degree - s) {
                let top = self.k1 * s as i64 + self.k2 * t as i64;
                for r in 0..=top.max(-1) {
                    out.push(Monomial::new(r, s, t));
                }
            }
        }
        out.sort();
        out
    }

    /// Global monomials of fiber degree exactly `d`.
    pub fn global_monomials_of_degree(&self, d: u64) -> Vec<Monomial> {
        self.global_function_monomials(d)
            .into_iter()
            .filter(|m| m.fiber_degree() == d)
            .collect()
    }

    /// Multiplicative generators of the global function ring up to the
    /// fiber-degree bound: global monomials that are not products of two
    /// smaller global monomials.
    pub fn global_ring_generators(&self, max_fiber_degree: u64) -> Vec<Monomial> {
        let all = self.global_function_monomials(max_fiber_degree);
        all.iter()
            .copied()
            .filter(|m| {
                if *m == Monomial::ONE {
                    return true;
                }
                !all.iter().any(|a| {
                    if *a == Monomial::ONE || a == m {
                        return false;
                    }
                    let r = m.z - a.z;
                    let (Some(s), Some(t)) = (m.u1.checked_sub(a.u1), m.u2.checked_sub(a.u2))
                    else {
                        return false;
                    };
                    r >= 0 && self.monomial_is_global(&Monomial::new(r, s, t))
                })
            })
            .collect()
    }
}

impl fmt::Display for ThreefoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({},{})", self.k1, self.k2)
    }
}

/// 3×3 transition matrix for `Λ²T`, entries Laurent in the source chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransitionMatrix {
    pub entries: [[Poly; 3]; 3],
    pub direction: Direction,
}

impl TransitionMatrix {
    /// Applies the matrix to a coefficient triple (result still in source
    /// coordinates; use [`ThreefoldSpec::to_other_chart`] to rewrite).
    pub fn apply(&self, q: &[Poly; 3]) -> [Poly; 3] {
        let mut out = [Poly::zero(), Poly::zero(), Poly::zero()];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out[i] = out[i].add(&e.mul(&q[j]));
            }
        }
        out
    }

    /// Renders as a 3×3 array of polynomial strings in the given chart.
    pub fn render(&self, chart: Chart) -> [[String; 3]; 3] {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.render(chart.names()))
                    .collect::<Vec<_>>()
                    .try_into()
                    .unwrap()
            })
            .collect::<Vec<[String; 3]>>()
            .try_into()
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_u;

    fn p(s: &str) -> Poly {
        parse_u(s).unwrap()
    }

    #[test]
    fn calabi_yau_iff_twists_sum_to_two() {
        assert!(ThreefoldSpec::new(1, 1).is_calabi_yau());
        assert!(ThreefoldSpec::new(2, 0).is_calabi_yau());
        assert!(ThreefoldSpec::new(3, -1).is_calabi_yau());
        assert!(!ThreefoldSpec::new(1, 2).is_calabi_yau());
        assert_eq!(ThreefoldSpec::w(3), ThreefoldSpec::new(3, -1));
    }

    #[test]
    fn coordinate_transitions_match_the_three_specs() {
        let rules = ThreefoldSpec::new(1, 1).coordinate_transition(Direction::UToV);
        assert_eq!(rules[0], Poly::term(1, -1, 0, 0));
        assert_eq!(rules[1], p("z*u1"));
        assert_eq!(rules[2], p("z*u2"));

        let rules = ThreefoldSpec::new(2, 0).coordinate_transition(Direction::UToV);
        assert_eq!(rules[1], p("z^2*u1"));
        assert_eq!(rules[2], p("u2"));

        let rules = ThreefoldSpec::new(3, -1).coordinate_transition(Direction::UToV);
        assert_eq!(rules[1], p("z^3*u1"));
        assert_eq!(rules[2], Poly::term(1, -1, 0, 1));
    }

    #[test]
    fn lambda2_matrix_closed_form() {
        // Rows [z², -k1 z u1, -k2 z u2], [0, -z^{k2-2}, 0], [0, 0, -z^{k1-2}].
        for (k1, k2) in [(1i64, 1i64), (2, 0), (3, -1)] {
            let m = ThreefoldSpec::new(k1, k2).lambda2_transition().entries;
            assert_eq!(m[0][0], p("z^2"));
            assert_eq!(m[0][1], Poly::term(-k1, 1, 1, 0));
            assert_eq!(m[0][2], Poly::term(-k2, 1, 0, 1));
            assert_eq!(m[1][0], Poly::zero());
            assert_eq!(m[1][1], Poly::term(-1, k2 - 2, 0, 0));
            assert_eq!(m[1][2], Poly::zero());
            assert_eq!(m[2][2], Poly::term(-1, k1 - 2, 0, 0));
        }
    }

    #[test]
    fn lambda2_transition_round_trips() {
        // Apply U→V, rewrite in V, apply the V-side matrix (same closed
        // form with ξ slots), rewrite back: identity on coefficients.
        for spec in [
            ThreefoldSpec::new(1, 1),
            ThreefoldSpec::new(2, 0),
            ThreefoldSpec::new(3, -1),
        ] {
            let m = spec.lambda2_transition();
            let q = [p("z*u2 + u1"), p("z^2"), p("1 - u1*u2")];
            let forward = m.apply(&q).map(|c| spec.to_other_chart(&c));
            let back = m.apply(&forward).map(|c| spec.to_other_chart(&c));
            assert_eq!(back, q);
        }
    }

    #[test]
    fn global_function_lists_for_the_three_specs() {
        let w1 = ThreefoldSpec::new(1, 1);
        let names: Vec<String> = w1
            .global_function_monomials(1)
            .iter()
            .map(|m| Poly::from_monomial(*m, scalar(1)).to_string())
            .collect();
        assert_eq!(names, ["1", "u1", "u2", "z*u1", "z*u2"]);

        let w2 = ThreefoldSpec::new(2, 0);
        let names: Vec<String> = w2
            .global_function_monomials(1)
            .iter()
            .map(|m| Poly::from_monomial(*m, scalar(1)).to_string())
            .collect();
        assert_eq!(names, ["1", "u1", "u2", "z*u1", "z^2*u1"]);

        // Degree 2 on W3 contains the z^l u1^2 monomials as well; the
        // multiplicative generator list is the displayed 8.
        let w3 = ThreefoldSpec::new(3, -1);
        assert_eq!(w3.global_function_monomials(2).len(), 15);
        let gens: Vec<String> = w3
            .global_ring_generators(2)
            .iter()
            .map(|m| Poly::from_monomial(*m, scalar(1)).to_string())
            .collect();
        assert_eq!(
            gens,
            [
                "1", "u1", "z*u1", "u1*u2", "z^2*u1", "z*u1*u2", "z^3*u1", "z^2*u1*u2"
            ]
        );
    }

    #[test]
    fn globality_tests() {
        let w3 = ThreefoldSpec::new(3, -1);
        assert!(!w3.is_global_function(&p("u2")));
        assert!(w3.is_global_function(&p("z^3*u1 + u1*u2")));
        let w1 = ThreefoldSpec::new(1, 1);
        assert!(w1.is_global_function(&p("z*u2")));
        let w2 = ThreefoldSpec::new(2, 0);
        assert!(!w2.is_global_function(&p("z^3*u1")));
        assert!(!w2.is_global_function(&p("z*u2")));
    }

    #[test]
    fn global_monomial_products_stay_global() {
        for spec in [
            ThreefoldSpec::new(1, 1),
            ThreefoldSpec::new(2, 0),
            ThreefoldSpec::new(3, -1),
        ] {
            let list = spec.global_function_monomials(3);
            for a in &list {
                for b in &list {
                    if a.fiber_degree() + b.fiber_degree() <= 3 {
                        assert!(list.contains(&a.mul(b)));
                    }
                }
            }
        }
    }
}
