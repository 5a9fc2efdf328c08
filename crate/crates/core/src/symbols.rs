//! Byte symbols and packets for the 0/1-coefficient linear scheme.
//!
//! Symbols live in the field of order 256, but the retrieval scheme only ever
//! forms sums of packets, so addition (XOR) is all that is needed.

use std::ops::{Add, AddAssign};

/// One field element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Symbol(pub u8);

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Symbol {
    type Output = Symbol;

    fn add(self, rhs: Symbol) -> Symbol {
        Symbol(self.0 ^ rhs.0)
    }
}

/// An ordered run of symbols. The empty packet is the dummy packet and acts
/// as the additive identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Packet(Vec<u8>);

impl Packet {
    pub fn new(bytes: Vec<u8>) -> Self {
        Packet(bytes)
    }

    pub fn dummy() -> Self {
        Packet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn symbol(&self, i: usize) -> Option<Symbol> {
        self.0.get(i).copied().map(Symbol)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

impl From<Vec<u8>> for Packet {
    fn from(bytes: Vec<u8>) -> Self {
        Packet(bytes)
    }
}

impl From<&[u8]> for Packet {
    fn from(bytes: &[u8]) -> Self {
        Packet(bytes.to_vec())
    }
}

impl AddAssign<&Packet> for Packet {
    fn add_assign(&mut self, rhs: &Packet) {
        if rhs.0.len() > self.0.len() {
            self.0.resize(rhs.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a ^= b;
        }
    }
}

impl Add<&Packet> for &Packet {
    type Output = Packet;

    fn add(self, rhs: &Packet) -> Packet {
        add_packets(self, rhs)
    }
}

/// Position-wise sum, zero-extending the shorter operand.
pub fn add_packets(a: &Packet, b: &Packet) -> Packet {
    let mut out = a.clone();
    out += b;
    out
}

/// Left fold of [`add_packets`]; the empty sum is the dummy packet.
pub fn sum_packets<'a, I>(packets: I) -> Packet
where
    I: IntoIterator<Item = &'a Packet>,
{
    packets.into_iter().fold(Packet::dummy(), |mut acc, p| {
        acc += p;
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(bytes: &[u8]) -> Packet {
        Packet::from(bytes)
    }

    #[test]
    fn self_cancels() {
        assert_eq!(add_packets(&p(&[0x0A, 0x0B]), &p(&[0x0A, 0x0B])), p(&[0, 0]));
    }

    #[test]
    fn dummy_is_identity() {
        assert_eq!(add_packets(&p(&[0x01]), &Packet::dummy()), p(&[0x01]));
        assert_eq!(add_packets(&Packet::dummy(), &p(&[0x01])), p(&[0x01]));
    }

    #[test]
    fn pads_shorter_operand() {
        assert_eq!(add_packets(&p(&[0x12, 0x34]), &p(&[0xFF])), p(&[0xED, 0x34]));
    }

    #[test]
    fn sums() {
        assert_eq!(sum_packets(std::iter::empty()), Packet::dummy());
        let x = p(&[9, 8, 7]);
        assert_eq!(sum_packets([&x, &x, &x]), x);
        assert_eq!(sum_packets(&[p(&[1]), p(&[2]), p(&[4])]), p(&[7]));
    }

    #[test]
    fn symbol_addition() {
        let x = Symbol(0x5A);
        assert_eq!(x + x, Symbol(0));
        assert_eq!(Symbol(1) + Symbol(2), Symbol(3));
    }

    fn packet() -> impl Strategy<Value = Packet> {
        prop::collection::vec(any::<u8>(), 0..=8).prop_map(Packet::new)
    }

    proptest! {
        #[test]
        fn addition_laws(a in packet(), b in packet(), c in packet()) {
            prop_assert_eq!(add_packets(&a, &b), add_packets(&b, &a));
            prop_assert_eq!(
                add_packets(&add_packets(&a, &b), &c),
                add_packets(&a, &add_packets(&b, &c))
            );
            let z = add_packets(&a, &a);
            prop_assert_eq!(z.len(), a.len());
            prop_assert!(z.is_zero());
            prop_assert_eq!(add_packets(&a, &b).len(), a.len().max(b.len()));
        }
    }
}
