use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::model::{cmp_key, Packet, PacketId};

/// Which timestamp orders the waiting room.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueueOrder {
    Generation,
    Arrival,
}

impl QueueOrder {
    pub fn key(self, p: &Packet) -> f64 {
        match self {
            QueueOrder::Generation => p.s,
            QueueOrder::Arrival => p.a,
        }
    }

    /// `Greater` when `x` is more recent than `y` in this order.
    pub fn cmp(self, x: &Packet, y: &Packet) -> Ordering {
        cmp_key(self.key(x), x.id, self.key(y), y.id)
    }
}

#[derive(Clone, Copy, Debug)]
struct Key(f64, PacketId);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_key(self.0, self.1, other.0, other.1)
    }
}

/// Waiting packets kept sorted by `(key, id)`, so both ends are O(log n).
#[derive(Clone, Debug)]
pub struct PacketQueue {
    order: QueueOrder,
    items: BTreeMap<Key, Packet>,
}

impl PacketQueue {
    pub fn new(order: QueueOrder) -> Self {
        PacketQueue { order, items: BTreeMap::new() }
    }

    pub fn order(&self) -> QueueOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn key(&self, p: &Packet) -> Key {
        Key(self.order.key(p), p.id)
    }

    pub fn contains(&self, p: &Packet) -> bool {
        self.items.contains_key(&self.key(p))
    }

    pub fn insert(&mut self, p: Packet) {
        self.items.insert(self.key(&p), p);
    }

    pub fn remove(&mut self, p: &Packet) -> bool {
        let k = self.key(p);
        self.items.remove(&k).is_some()
    }

    /// Most recent packet in queue order.
    pub fn newest(&self) -> Option<&Packet> {
        self.items.values().next_back()
    }

    /// Least recent packet in queue order.
    pub fn oldest(&self) -> Option<&Packet> {
        self.items.values().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Packet> {
        self.items.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pkt(id: PacketId, s: f64, a: f64) -> Packet {
        Packet { id, s, a }
    }

    #[test]
    fn ends_follow_order_with_id_ties() {
        let mut q = PacketQueue::new(QueueOrder::Generation);
        q.insert(pkt(1, 1.0, 9.0));
        q.insert(pkt(2, 4.0, 1.0));
        q.insert(pkt(3, 2.0, 5.0));
        assert_eq!(q.newest().unwrap().id, 2);
        assert_eq!(q.oldest().unwrap().id, 1);

        let mut by_arrival = PacketQueue::new(QueueOrder::Arrival);
        for p in q.iter() {
            by_arrival.insert(*p);
        }
        assert_eq!(by_arrival.newest().unwrap().id, 1);
        assert_eq!(by_arrival.oldest().unwrap().id, 2);

        let mut tie = PacketQueue::new(QueueOrder::Generation);
        tie.insert(pkt(5, 3.0, 3.0));
        tie.insert(pkt(4, 3.0, 3.0));
        assert_eq!(tie.newest().unwrap().id, 5);
        assert!(tie.remove(&pkt(5, 3.0, 3.0)));
        assert!(!tie.remove(&pkt(5, 3.0, 3.0)));
        assert_eq!(tie.len(), 1);
    }
}
