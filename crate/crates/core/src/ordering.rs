//! Machine preference order consumed by every solver.
//!
//! Identical speeds: machines ascend by `mu - gamma`.
//!
//! Different speeds: position 1 holds the machine minimizing
//! `(mu - gamma + Γ) / upsilon` (the cheapest machine to run alone), and the
//! remaining machines ascend by `(mu - gamma) / upsilon`.
//!
//! Sorts are stable, so ties keep input order. Keys are compared exactly
//! (`f64::total_cmp`) to keep the order a strict weak ordering.

use crate::model::{Fleet, Regime};

/// A fleet permuted into preference order, with prefix sums over that order.
#[derive(Debug, Clone)]
pub struct IndexedFleet {
    fleet: Fleet,
    permutation: Vec<usize>,
    keys: Vec<f64>,
    ordering: Regime,
    prefix_net: Vec<f64>,
    prefix_mu: Vec<f64>,
    prefix_speed: Vec<f64>,
    suffix_gamma: Vec<f64>,
}

/// Orders machines by `mu - gamma` ascending.
pub fn index_identical(fleet: &Fleet) -> IndexedFleet {
    let keys: Vec<f64> = fleet.machines().iter().map(|m| m.net_power()).collect();
    let mut order: Vec<usize> = (0..fleet.len()).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]));
    IndexedFleet::build(fleet, order, Regime::IdenticalSpeed)
}

/// Orders machines for the different-speed regime.
pub fn index_different(fleet: &Fleet) -> IndexedFleet {
    let gamma_total = fleet.gamma_total();
    let machines = fleet.machines();
    // min_by keeps the first of equal elements, i.e. the lowest input position
    let first = (0..machines.len())
        .min_by(|&a, &b| {
            let ka = (machines[a].net_power() + gamma_total) / machines[a].upsilon;
            let kb = (machines[b].net_power() + gamma_total) / machines[b].upsilon;
            ka.total_cmp(&kb)
        })
        .expect("validated fleets are non-empty");
    let ratios: Vec<f64> = machines.iter().map(|m| m.net_power_per_speed()).collect();
    let mut rest: Vec<usize> = (0..machines.len()).filter(|&i| i != first).collect();
    rest.sort_by(|&a, &b| ratios[a].total_cmp(&ratios[b]));
    let mut order = Vec::with_capacity(machines.len());
    order.push(first);
    order.extend(rest);
    IndexedFleet::build(fleet, order, Regime::DifferentSpeed)
}

/// Indexes with the ordering matching the fleet's (possibly forced) regime.
pub fn index_for_regime(fleet: &Fleet) -> IndexedFleet {
    match fleet.regime() {
        Regime::IdenticalSpeed => index_identical(fleet),
        Regime::DifferentSpeed => index_different(fleet),
    }
}

impl IndexedFleet {
    /// Treats the fleet's current order as the preference order, for callers
    /// that have already arranged the machines.
    pub fn as_given(fleet: &Fleet, ordering: Regime) -> IndexedFleet {
        IndexedFleet::build(fleet, (0..fleet.len()).collect(), ordering)
    }

    fn build(fleet: &Fleet, order: Vec<usize>, ordering: Regime) -> IndexedFleet {
        let is_identity = order.iter().enumerate().all(|(i, &o)| i == o);
        let fleet = if is_identity {
            fleet.clone()
        } else {
            fleet.permuted(&order)
        };
        let m = fleet.len();
        let gamma_total = fleet.gamma_total();
        let keys = fleet
            .machines()
            .iter()
            .enumerate()
            .map(|(i, mc)| match ordering {
                Regime::IdenticalSpeed => mc.net_power(),
                Regime::DifferentSpeed if i == 0 => (mc.net_power() + gamma_total) / mc.upsilon,
                Regime::DifferentSpeed => mc.net_power_per_speed(),
            })
            .collect();

        let mut prefix_net = Vec::with_capacity(m + 1);
        let mut prefix_mu = Vec::with_capacity(m + 1);
        let mut prefix_speed = Vec::with_capacity(m + 1);
        let (mut net, mut mu, mut speed) = (0.0, 0.0, 0.0);
        prefix_net.push(0.0);
        prefix_mu.push(0.0);
        prefix_speed.push(0.0);
        for mc in fleet.machines() {
            net += mc.net_power();
            mu += mc.mu;
            speed += mc.upsilon;
            prefix_net.push(net);
            prefix_mu.push(mu);
            prefix_speed.push(speed);
        }
        let mut suffix_gamma = vec![0.0; m + 1];
        for i in (0..m).rev() {
            suffix_gamma[i] = suffix_gamma[i + 1] + fleet.machines()[i].gamma;
        }

        IndexedFleet {
            fleet,
            permutation: order,
            keys,
            ordering,
            prefix_net,
            prefix_mu,
            prefix_speed,
            suffix_gamma,
        }
    }

    /// The permuted fleet.
    pub fn fleet(&self) -> &Fleet {
        &self.fleet
    }

    pub fn len(&self) -> usize {
        self.fleet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fleet.is_empty()
    }

    /// `permutation()[new] = original position`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Sort key of each machine in indexed order.
    pub fn keys(&self) -> &[f64] {
        &self.keys
    }

    /// Regime whose order was applied.
    pub fn ordering(&self) -> Regime {
        self.ordering
    }

    /// `Σ_{i<=r} (mu - gamma)`.
    pub fn net_prefix(&self, r: usize) -> f64 {
        self.prefix_net[r]
    }

    /// `Σ_{i<=r} mu`.
    pub fn mu_prefix(&self, r: usize) -> f64 {
        self.prefix_mu[r]
    }

    /// `Σ_{i<=r} upsilon`.
    pub fn speed_prefix(&self, r: usize) -> f64 {
        self.prefix_speed[r]
    }

    /// `Σ_{i>r} gamma`.
    pub fn gamma_suffix(&self, r: usize) -> f64 {
        self.suffix_gamma[r]
    }

    /// Closed-form energy of the first `r` machines sharing `work` for equal
    /// time, from prefix sums. `r` must be in `1..=m`.
    pub fn prefix_energy(&self, r: usize, work: f64) -> f64 {
        work * ((self.prefix_net[r] + self.fleet.gamma_total()) / self.prefix_speed[r])
    }

    pub fn ids(&self, r: usize) -> Vec<String> {
        self.fleet.machines()[..r]
            .iter()
            .map(|m| m.id.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_fleet, Machine};

    fn fleet(spec: &[(&str, f64, f64, f64)]) -> Fleet {
        validate_fleet(
            spec.iter()
                .map(|&(id, mu, gamma, ups)| Machine::new(id, mu, gamma, ups))
                .collect(),
        )
        .unwrap()
    }

    fn order(ix: &IndexedFleet) -> Vec<&str> {
        ix.fleet()
            .machines()
            .iter()
            .map(|m| m.id.as_str())
            .collect()
    }

    #[test]
    fn identical_sorts_by_net_power() {
        let f = fleet(&[
            ("m1", 5.0, 0.0, 1.0),
            ("m2", 2.0, 0.0, 1.0),
            ("m3", 9.0, 0.0, 1.0),
        ]);
        let ix = index_identical(&f);
        assert_eq!(order(&ix), vec!["m2", "m1", "m3"]);
        assert_eq!(ix.permutation(), &[1, 0, 2]);
        assert_eq!(ix.keys(), &[2.0, 5.0, 9.0]);
    }

    #[test]
    fn identical_ties_keep_input_order() {
        let f = fleet(&[
            ("a", 5.0, 1.0, 1.0),
            ("b", 6.0, 2.0, 1.0),
            ("c", 4.0, 0.0, 1.0),
        ]);
        assert_eq!(order(&index_identical(&f)), vec!["a", "b", "c"]);
    }

    #[test]
    fn identical_negative_key() {
        let f = fleet(&[("m1", 3.0, 0.0, 1.0), ("m2", 1.0, 2.0, 1.0)]);
        assert_eq!(f.warnings().len(), 1);
        assert_eq!(order(&index_identical(&f)), vec!["m2", "m1"]);
    }

    #[test]
    fn different_first_by_standalone_cost() {
        let f = fleet(&[("A", 10.0, 0.0, 1.0), ("B", 10.0, 0.0, 2.0)]);
        let ix = index_different(&f);
        assert_eq!(order(&ix), vec!["B", "A"]);
        assert_eq!(ix.keys(), &[5.0, 10.0]);

        let f = fleet(&[("A", 4.0, 2.0, 1.0), ("B", 6.0, 2.0, 2.0)]);
        assert_eq!(f.gamma_total(), 4.0);
        let ix = index_different(&f);
        assert_eq!(order(&ix), vec!["B", "A"]);
        assert_eq!(ix.keys()[0], 4.0);
        // the remainder carries the ratio key, without Γ
        assert_eq!(ix.keys()[1], 2.0);
    }

    #[test]
    fn different_single_machine() {
        let f = fleet(&[("solo", 3.0, 1.0, 2.0)]);
        let ix = index_different(&f);
        assert_eq!(order(&ix), vec!["solo"]);
        assert_eq!(ix.keys(), &[1.5]);
    }

    #[test]
    fn first_position_can_break_ratio_order() {
        // fast machine with the worse ratio is cheapest to run alone once Γ is large
        let f = fleet(&[("slow", 0.5, 0.0, 1.0), ("fast", 20.0, 10.0, 10.0)]);
        let ix = index_different(&f);
        assert_eq!(order(&ix), vec!["fast", "slow"]);
        assert!(ix.keys()[1] < ix.fleet().machines()[0].net_power_per_speed());
    }

    #[test]
    fn prefix_sums() {
        let f = fleet(&[("a", 3.0, 1.0, 1.0), ("b", 5.0, 2.0, 2.0)]);
        let ix = IndexedFleet::as_given(&f, Regime::DifferentSpeed);
        assert_eq!(ix.net_prefix(2), 5.0);
        assert_eq!(ix.mu_prefix(1), 3.0);
        assert_eq!(ix.speed_prefix(2), 3.0);
        assert_eq!(ix.gamma_suffix(1), 2.0);
        assert_eq!(ix.gamma_suffix(2), 0.0);
        assert_eq!(ix.prefix_energy(2, 6.0), 6.0 * (5.0 + 3.0) / 3.0);
    }
}
