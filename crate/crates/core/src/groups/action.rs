//! Group actions by positive linear maps on the concrete spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{Element, GroupHandle};
use crate::order::{Data, Space, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// `(gv)(x) = v(g^-1 x)` on functions on the group itself.
    Translation,
    /// Left-regular action of a finite group on `Q^G`, coordinates indexed by
    /// the group's element list.
    Regular(Arc<Vec<Element>>),
    /// `S_n` permuting the coordinates of `Q^n`.
    Permutation,
}

/// A representation of a group on one of the concrete spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    group: GroupHandle,
    space: Space,
    kind: Kind,
}

impl Action {
    /// Left translation on finitely supported functions on `group`.
    pub fn translation(group: GroupHandle) -> Action {
        Action { space: Space::GroupFinSupp { group: group.clone() }, group, kind: Kind::Translation }
    }

    /// Shifts on eventually periodic functions on `Z`.
    pub fn shift_z() -> Action {
        Action { group: GroupHandle::integers(), space: Space::PeriodicZ, kind: Kind::Translation }
    }

    /// Left-regular action of a finite group on `Q^|G|`.
    pub fn regular(group: GroupHandle) -> Result<Action> {
        let elements = group
            .elements()
            .ok_or_else(|| Error::UnsupportedSpace(format!("regular action of infinite group {group}")))?;
        let space = Space::finite(elements.len())?;
        Ok(Action { group, space, kind: Kind::Regular(Arc::new(elements)) })
    }

    /// `S_n` acting on `Q^n` by permuting coordinates.
    pub fn permutation(n: usize) -> Result<Action> {
        Ok(Action { group: GroupHandle::Symmetric(n), space: Space::finite(n)?, kind: Kind::Permutation })
    }

    /// The natural action of `group` on `space`, when there is one.
    pub fn natural(group: &GroupHandle, space: &Space) -> Result<Action> {
        match space {
            Space::GroupFinSupp { group: g } if g == group => Ok(Action::translation(group.clone())),
            Space::PeriodicZ if group.is_integers() => Ok(Action::shift_z()),
            Space::FiniteCoord { size } if group.order() == Some(*size) => Action::regular(group.clone()),
            _ => Err(Error::UnsupportedSpace(format!("no natural action of {group} on {space}"))),
        }
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Coordinate of `g` under the regular action's indexing.
    pub fn coordinate_of(&self, g: &Element) -> Option<usize> {
        match &self.kind {
            Kind::Regular(els) => els.iter().position(|x| x == g),
            _ => None,
        }
    }

    /// Group element at a coordinate of the regular action.
    pub fn element_at(&self, i: usize) -> Option<&Element> {
        match &self.kind {
            Kind::Regular(els) => els.get(i),
            _ => None,
        }
    }

    /// Moves the point `x` to `g . x`.
    fn move_point(&self, g: &Element, x: &Element) -> Element {
        match &self.kind {
            Kind::Translation => self.group.mul(g, x),
            Kind::Regular(els) => {
                let Element::Index(i) = x else { unreachable!("finite coordinates") };
                let y = self.group.mul(g, &els[*i]);
                Element::Index(els.iter().position(|e| *e == y).expect("closed under mul"))
            }
            Kind::Permutation => {
                let (Element::Perm(p), Element::Index(i)) = (g, x) else { unreachable!("permutation action") };
                Element::Index(p[*i] as usize)
            }
        }
    }

    /// `g v`.
    pub fn act(&self, g: &Element, v: &Vector) -> Result<Vector> {
        self.space.check_same(v.space())?;
        if !self.group.contains(g) {
            return Err(Error::InvalidInput(format!("{g:?} is not an element of {}", self.group)));
        }
        match v.data() {
            Data::Sparse(m) => {
                let moved: BTreeMap<Element, Rational> =
                    m.iter().map(|(x, c)| (self.move_point(g, x), c.clone())).collect();
                Vector::from_entries(&self.space, moved)
            }
            Data::Periodic(p) => {
                let k = g.as_z().expect("Z acts on ep(Z)");
                Ok(Vector::periodic(p.shift(k)))
            }
            Data::Dense(_) => Err(Error::UnsupportedSpace("actions on cone spaces".into())),
        }
    }

    /// Probe elements: the whole group when finite, else a word-length ball.
    pub fn probe_elements(&self, radius: usize) -> Vec<Element> {
        self.group.elements().unwrap_or_else(|| self.group.ball(radius))
    }

    /// `sum_g mu(g) g v` for a finitely supported weight map.
    pub fn average(&self, weights: &BTreeMap<Element, Rational>, v: &Vector) -> Result<Vector> {
        let mut acc = Vector::zero(&self.space);
        for (g, w) in weights {
            if w.is_zero() {
                continue;
            }
            acc = acc.try_add(&self.act(g, v)?.scale(w))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::PeriodicZ;
    use crate::rational::int;

    #[test]
    fn shift_action() {
        let a = Action::shift_z();
        let d0 = Vector::delta(&Space::PeriodicZ, Element::z(0)).unwrap();
        let d3 = a.act(&Element::z(3), &d0).unwrap();
        assert_eq!(d3.value_at(&Element::z(3)), int(1));
        let ones = Vector::periodic(PeriodicZ::constant(int(1)));
        assert_eq!(a.act(&Element::z(-7), &ones).unwrap(), ones);
    }

    #[test]
    fn regular_action_is_a_representation() {
        let g = GroupHandle::Symmetric(3);
        let a = Action::regular(g.clone()).unwrap();
        let els = g.elements().unwrap();
        let v = Vector::from_coords(a.space(), &(0..6).map(int).collect::<Vec<_>>()).unwrap();
        for x in &els {
            for y in &els {
                let lhs = a.act(&g.mul(x, y), &v).unwrap();
                let rhs = a.act(x, &a.act(y, &v).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn permutation_action_is_a_representation() {
        let a = Action::permutation(4).unwrap();
        let g = a.group().clone();
        let els = g.elements().unwrap();
        let v = Vector::from_coords(a.space(), &[int(1), int(2), int(0), int(5)]).unwrap();
        for x in els.iter().step_by(5) {
            for y in els.iter().step_by(3) {
                assert_eq!(a.act(&g.mul(x, y), &v).unwrap(), a.act(x, &a.act(y, &v).unwrap()).unwrap());
            }
        }
    }
}
