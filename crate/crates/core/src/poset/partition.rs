use crate::error::{Error, Result};

use super::{PlayerSet, Poset};

/// Layers `(B_1, ..., B_m)` of players; every player of an earlier layer
/// strictly precedes every player of a later one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    n: usize,
    layers: Vec<PlayerSet>,
}

impl OrderedPartition {
    pub fn new(n: usize, layers: Vec<PlayerSet>) -> Result<Self> {
        let mut seen = PlayerSet::new();
        for (r, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidPartition(format!("layer {r} is empty")));
            }
            layer.check_within(n)?;
            if seen.intersects(layer) {
                return Err(Error::InvalidPartition(format!(
                    "layer {r} overlaps an earlier layer"
                )));
            }
            seen.union_with(layer);
        }
        if seen != PlayerSet::full(n) {
            return Err(Error::InvalidPartition(
                "layers do not cover every player".into(),
            ));
        }
        Ok(Self { n, layers })
    }

    pub fn from_layers<L, I>(n: usize, layers: L) -> Result<Self>
    where
        L: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        Self::new(
            n,
            layers.into_iter().map(PlayerSet::from_indices).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[PlayerSet] {
        &self.layers
    }

    pub fn layer_of(&self, player: usize) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(player))
    }

    /// Index of the layer that contains all of `group`, if any.
    pub fn layer_containing(&self, group: &PlayerSet) -> Option<usize> {
        self.layers.iter().position(|l| group.is_subset(l))
    }

    pub fn to_poset(&self) -> Poset {
        let mut edges = Vec::new();
        for pair in self.layers.windows(2) {
            for i in pair[0].iter() {
                for j in pair[1].iter() {
                    edges.push((i, j));
                }
            }
        }
        Poset::new(self.n, &edges).expect("layered edges are acyclic and in range")
    }

    /// Split layer `layer` into the consecutive layers `(B \ group, group)`.
    pub fn refine(&self, layer: usize, group: &PlayerSet) -> Result<OrderedPartition> {
        if group.is_empty() {
            return Err(Error::EmptySubset);
        }
        let block = self
            .layers
            .get(layer)
            .ok_or(Error::SubsetNotInLayer { layer })?;
        if !group.is_subset(block) {
            return Err(Error::SubsetNotInLayer { layer });
        }
        if group == block {
            return Ok(self.clone());
        }
        let mut layers = self.layers.clone();
        layers[layer] = block.difference(group);
        layers.insert(layer + 1, group.clone());
        Ok(Self { n: self.n, layers })
    }
}

/// Poset of the ordered partition obtained by moving `group` to a new layer
/// directly after the rest of its block.
pub fn limit_poset_refine(
    partition: &OrderedPartition,
    layer: usize,
    group: &PlayerSet,
) -> Result<Poset> {
    Ok(partition.refine(layer, group)?.to_poset())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[usize]) -> PlayerSet {
        PlayerSet::from_indices(v.iter().copied())
    }

    #[test]
    fn validation() {
        assert!(OrderedPartition::from_layers(3, [vec![0, 1], vec![2]]).is_ok());
        assert!(OrderedPartition::from_layers(3, [vec![0, 1], vec![1, 2]]).is_err());
        assert!(OrderedPartition::from_layers(3, [vec![0], vec![2]]).is_err());
        assert!(OrderedPartition::new(2, vec![ps(&[0, 1]), PlayerSet::new()]).is_err());
    }

    #[test]
    fn induced_poset_is_layer_order() {
        let op = OrderedPartition::from_layers(5, [vec![0, 1], vec![2], vec![3, 4]]).unwrap();
        let p = op.to_poset();
        for i in 0..5 {
            for j in 0..5 {
                let expected = op.layer_of(i).unwrap() < op.layer_of(j).unwrap();
                assert_eq!(p.precedes(i, j), expected, "{i} {j}");
            }
        }
    }

    #[test]
    fn refine_middle_layer() {
        // Players 1..=6 as indices 0..=5: ({1,2},{3,4},{5,6}) with G = {3}.
        let op = OrderedPartition::from_layers(6, [vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let refined = op.refine(1, &ps(&[2])).unwrap();
        assert_eq!(
            refined.layers(),
            &[ps(&[0, 1]), ps(&[3]), ps(&[2]), ps(&[4, 5])]
        );
    }

    #[test]
    fn refine_whole_block_is_identity() {
        let op = OrderedPartition::from_layers(4, [vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(op.refine(1, &ps(&[2, 3])).unwrap(), op);
        assert_eq!(
            limit_poset_refine(&op, 1, &ps(&[2, 3])).unwrap(),
            op.to_poset()
        );
    }

    #[test]
    fn refine_single_layer() {
        let op = OrderedPartition::from_layers(3, [vec![0, 1, 2]]).unwrap();
        let p = limit_poset_refine(&op, 0, &ps(&[2])).unwrap();
        assert_eq!(p.strict_pairs(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn refine_errors() {
        let op = OrderedPartition::from_layers(4, [vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(
            op.refine(0, &PlayerSet::new()),
            Err(Error::EmptySubset)
        ));
        assert!(matches!(
            op.refine(0, &ps(&[2])),
            Err(Error::SubsetNotInLayer { layer: 0 })
        ));
        assert!(matches!(
            op.refine(5, &ps(&[2])),
            Err(Error::SubsetNotInLayer { layer: 5 })
        ));
    }
}
