//! Multi-view observations.

use serde::{Deserialize, Serialize};

/// One observation: a feature vector per sensor view, plus an availability
/// mask. `mask[v] == false` means view `v` dropped out this step and its
/// contents are meaningless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obs {
    pub views: Vec<Vec<f64>>,
    pub mask: Vec<bool>,
}

impl Obs {
    /// An observation with every view present and zeroed.
    pub fn zeros(num_views: usize, view_dim: usize) -> Self {
        Self {
            views: vec![vec![0.0; view_dim]; num_views],
            mask: vec![true; num_views],
        }
    }

    pub fn num_views(&self) -> usize {
        self.views.len()
    }

    /// Number of views currently available.
    pub fn active_views(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// The mask as an `Option`: `None` when every view is active, which lets
    /// fusion skip mask checks on the common path.
    pub fn mask_opt(&self) -> Option<&[bool]> {
        if self.mask.iter().all(|&m| m) {
            None
        } else {
            Some(&self.mask)
        }
    }

    /// Panics unless shapes are internally consistent and match `view_dim`.
    pub fn assert_shape(&self, num_views: usize, view_dim: usize) {
        assert_eq!(self.views.len(), num_views, "obs view count");
        assert_eq!(self.mask.len(), num_views, "obs mask length");
        for (v, view) in self.views.iter().enumerate() {
            assert_eq!(view.len(), view_dim, "obs view {v} dim");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_has_all_views_active() {
        let obs = Obs::zeros(3, 4);
        assert_eq!(obs.num_views(), 3);
        assert_eq!(obs.active_views(), 3);
        assert_eq!(obs.mask_opt(), None);
    }

    #[test]
    fn mask_opt_surfaces_dropouts() {
        let mut obs = Obs::zeros(3, 2);
        obs.mask[1] = false;
        assert_eq!(obs.active_views(), 2);
        assert_eq!(obs.mask_opt(), Some(&[true, false, true][..]));
    }

    #[test]
    #[should_panic(expected = "obs view 1 dim")]
    fn assert_shape_catches_ragged_views() {
        let mut obs = Obs::zeros(2, 3);
        obs.views[1].pop();
        obs.assert_shape(2, 3);
    }
}
