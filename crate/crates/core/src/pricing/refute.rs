//! Certificates that no invariant, additive, normalized map `r(., u)` exists
//! on signed vectors: invariance forces two different values on one vector.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Action, Element, GroupHandle};
use crate::order::{PeriodicZ, Space, Vector};
use crate::rational::{format_rational, serde_str, Rational};

/// Why a step's value is forced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Justification {
    /// `r(u, u) = 1`.
    Normalization,
    /// `r(g x, u) = r(x, u)` with `x` from step `from`.
    Invariance { from: usize, g: String },
    /// `r(sum x_i, u) = sum r(x_i, u)`.
    Sum { parts: Vec<usize> },
    /// `r(a - b, u) = r(a, u) - r(b, u)`, from additivity on `a = b + (a - b)`.
    Difference { whole: usize, part: usize },
}

/// One forced equation `r(vector, u) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub vector: Vector,
    #[serde(with = "serde_str")]
    pub value: Rational,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub group: GroupHandle,
    pub g: String,
    /// The second argument `u` shared by every step.
    pub base: Vector,
    pub steps: Vec<Step>,
    /// Two steps with the same vector and different values.
    pub contradiction: (usize, usize),
    /// `"a = b"` for the two conflicting values.
    pub statement: String,
}

fn action_for(group: &GroupHandle) -> Result<Action> {
    if group.is_integers() {
        Ok(Action::shift_z())
    } else {
        Ok(Action::translation(group.clone()))
    }
}

/// Builds the refutation for `g`: if `g` has finite order `q`, with
/// `u = delta_e - delta_g` the orbit sum of `u` vanishes and forces `q = 0`;
/// on `Z`, an alternating `u` with `g u = -u` forces `1 = -1`.
pub fn refute_signed_invariant(group: &GroupHandle, g: &Element) -> Result<RefutationCertificate> {
    if !group.contains(g) {
        return Err(Error::InvalidInput(format!("{g:?} is not an element of {group}")));
    }
    if *g == group.identity() {
        return Err(Error::InvalidInput("g must not be the identity".into()));
    }
    let action = action_for(group)?;
    let gs = group.format_element(g);
    let order = group.element_order(g, 1 << 16);
    let base = match (order, g.as_z()) {
        (Some(_), _) => {
            let space = Space::GroupFinSupp { group: group.clone() };
            Vector::delta(&space, group.identity())?.try_sub(&Vector::delta(&space, g.clone())?)?
        }
        (None, Some(k)) if group.is_integers() => {
            let k = k.unsigned_abs() as usize;
            let pattern: Vec<Rational> =
                (0..2 * k).map(|i| if i < k { Rational::one() } else { -Rational::one() }).collect();
            Vector::periodic(PeriodicZ::periodic(pattern))
        }
        _ => {
            return Err(Error::UnsupportedSpace(format!(
                "infinite-order refutation is implemented on Z only, not {group}"
            )))
        }
    };
    let zero = Vector::zero(base.space());
    let mut steps = vec![
        Step { vector: base.clone(), value: Rational::one(), justification: Justification::Normalization },
        Step {
            vector: zero.clone(),
            value: Rational::zero(),
            justification: Justification::Difference { whole: 0, part: 0 },
        },
        Step {
            vector: -&base,
            value: -Rational::one(),
            justification: Justification::Difference { whole: 1, part: 0 },
        },
    ];
    let contradiction = match order {
        Some(q) => {
            // r(g^n u, u) = 1 for 0 <= n < q, and the orbit sums to 0.
            let mut parts = vec![0];
            for n in 1..q {
                let prev = steps.len() - 1;
                let from = if n == 1 { 0 } else { prev };
                let x = action.act(g, &steps[from].vector)?;
                steps.push(Step {
                    vector: x,
                    value: Rational::one(),
                    justification: Justification::Invariance { from, g: gs.clone() },
                });
                parts.push(steps.len() - 1);
            }
            let total = parts.iter().fold(zero.clone(), |acc, &i| &acc + &steps[i].vector);
            let value = parts.iter().fold(Rational::zero(), |acc, &i| acc + &steps[i].value);
            steps.push(Step { vector: total, value, justification: Justification::Sum { parts } });
            (steps.len() - 1, 1)
        }
        None => {
            let x = action.act(g, &base)?;
            steps.push(Step {
                vector: x,
                value: Rational::one(),
                justification: Justification::Invariance { from: 0, g: gs.clone() },
            });
            (steps.len() - 1, 2)
        }
    };
    let (a, b) = contradiction;
    let statement = format!("{} = {}", format_rational(&steps[a].value), format_rational(&steps[b].value));
    Ok(RefutationCertificate { group: group.clone(), g: gs, base, steps, contradiction, statement })
}

impl RefutationCertificate {
    /// Re-derives every step from earlier ones with exact arithmetic.
    /// Returns the index of the first step that does not follow, or a
    /// description of a bad contradiction.
    pub fn replay(&self) -> std::result::Result<(), String> {
        let action = action_for(&self.group).map_err(|e| e.to_string())?;
        let g = self.group.parse_element(&self.g).map_err(|e| e.to_string())?;
        if g == self.group.identity() {
            return Err("g is the identity".into());
        }
        for (i, s) in self.steps.iter().enumerate() {
            let earlier = |j: usize| -> std::result::Result<&Step, String> {
                if j < i {
                    Ok(&self.steps[j])
                } else {
                    Err(format!("step {i} refers forward to step {j}"))
                }
            };
            let (vector, value) = match &s.justification {
                Justification::Normalization => (self.base.clone(), Rational::one()),
                Justification::Invariance { from, g: h } => {
                    let h = self.group.parse_element(h).map_err(|e| e.to_string())?;
                    let src = earlier(*from)?;
                    (action.act(&h, &src.vector).map_err(|e| e.to_string())?, src.value.clone())
                }
                Justification::Sum { parts } => {
                    let mut v = Vector::zero(self.base.space());
                    let mut x = Rational::zero();
                    for &j in parts {
                        let p = earlier(j)?;
                        v = v.try_add(&p.vector).map_err(|e| e.to_string())?;
                        x += &p.value;
                    }
                    (v, x)
                }
                Justification::Difference { whole, part } => {
                    let (w, p) = (earlier(*whole)?, earlier(*part)?);
                    (w.vector.try_sub(&p.vector).map_err(|e| e.to_string())?, &w.value - &p.value)
                }
            };
            if vector != s.vector || value != s.value {
                return Err(format!("step {i} does not follow from its justification"));
            }
        }
        let (a, b) = self.contradiction;
        let (sa, sb) = match (self.steps.get(a), self.steps.get(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err("contradiction refers to missing steps".into()),
        };
        if sa.vector != sb.vector || sa.value == sb.value {
            return Err("contradiction steps do not conflict".into());
        }
        let expected = format!("{} = {}", format_rational(&sa.value), format_rational(&sb.value));
        if expected != self.statement {
            return Err(format!("statement {:?} does not match {expected:?}", self.statement));
        }
        Ok(())
    }
}
