//! Replicated PIR over `M` servers that each hold all `K` files, with each
//! file cut into `M - 1` packets.
//!
//! The user draws a uniform base vector `q` in `[0, M-1]^K`. Server `m`
//! receives `q` with the desired coordinate shifted by `m` (mod `M`) and
//! returns the sum of the packets its query names, where index `M - 1` is an
//! all-zero dummy that is never stored. A query of all `M - 1` names only
//! dummies and the server stays silent. Exactly one server's shift lands the
//! desired coordinate on the dummy, so its answer is the interference sum;
//! subtracting it from the other answers yields the `M - 1` desired packets.
//!
//! Files are numbered from 1 at this interface; servers within the group
//! from 0.

use rand::Rng;

use crate::symbols::{add_packets, sum_packets, Packet};
use crate::{Error, Result};

/// Largest realization space [`enumerate_realizations`] will walk.
pub const MAX_REALIZATIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseVector(Vec<usize>);

impl BaseVector {
    pub fn new(entries: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e >= m) {
            return Err(Error::InvalidParameters(format!(
                "base vector entry {bad} outside 0..{m}"
            )));
        }
        Ok(BaseVector(entries))
    }

    pub fn random<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> Self {
        BaseVector((0..k).map(|_| rng.gen_range(0..m)).collect())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

/// The vector a single server receives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ServerQuery(pub Vec<usize>);

impl ServerQuery {
    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Silent iff every entry names the dummy packet.
    pub fn is_silent(&self, m: usize) -> bool {
        self.0.iter().all(|&e| e == m - 1)
    }

    /// `(file, packet)` pairs (both zero-based) whose sum forms the answer.
    /// Entries naming the dummy contribute nothing.
    pub fn touched(&self, m: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |&(_, &i)| i < m - 1)
            .map(|(k, &i)| (k, i))
    }
}

/// Packets `W[k][i]` for `k < K`, `i < M - 1`, all of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStorage {
    m: usize,
    packets: Vec<Vec<Packet>>,
}

impl GroupStorage {
    pub fn new(m: usize, packets: Vec<Vec<Packet>>) -> Result<Self> {
        if m < 2 {
            return Err(Error::DegenerateRetrieval);
        }
        let len = packets.first().and_then(|f| f.first()).map(Packet::len);
        for (k, file) in packets.iter().enumerate() {
            if file.len() != m - 1 {
                return Err(Error::InvalidParameters(format!(
                    "file {} has {} packets, expected {}",
                    k + 1,
                    file.len(),
                    m - 1
                )));
            }
            if file.iter().any(|p| Some(p.len()) != len) {
                return Err(Error::InvalidParameters("packets differ in length".into()));
            }
        }
        Ok(GroupStorage { m, packets })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.packets.len()
    }

    pub fn packet_len(&self) -> usize {
        self.packets.first().and_then(|f| f.first()).map_or(0, Packet::len)
    }

    /// Zero-based access; `None` for the dummy index and beyond.
    pub fn packet(&self, file: usize, index: usize) -> Option<&Packet> {
        self.packets.get(file).and_then(|f| f.get(index))
    }

    pub fn file_packets(&self, file: usize) -> &[Packet] {
        &self.packets[file]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Answer {
    Silent,
    Payload(Packet),
}

impl Answer {
    pub fn is_silent(&self) -> bool {
        matches!(self, Answer::Silent)
    }

    /// Symbols transmitted.
    pub fn len(&self) -> usize {
        match self {
            Answer::Silent => 0,
            Answer::Payload(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn payload(&self) -> Option<&Packet> {
        match self {
            Answer::Silent => None,
            Answer::Payload(p) => Some(p),
        }
    }
}

fn check_theta(theta: usize, k: usize) -> Result<usize> {
    if theta == 0 || theta > k {
        return Err(Error::IndexOutOfRange {
            what: "file",
            index: theta,
            bound: k,
        });
    }
    Ok(theta - 1)
}

/// One query per server: server `s` gets `base` with the desired entry
/// replaced by `(q_theta + s) mod M`.
pub fn make_queries(theta: usize, base: &BaseVector, m: usize) -> Result<Vec<ServerQuery>> {
    let t = check_theta(theta, base.k())?;
    if let Some(&bad) = base.entries().iter().find(|&&e| e >= m) {
        return Err(Error::IndexOutOfRange {
            what: "base vector entry",
            index: bad,
            bound: m - 1,
        });
    }
    Ok((0..m)
        .map(|s| {
            let mut v = base.entries().to_vec();
            v[t] = (v[t] + s) % m;
            ServerQuery(v)
        })
        .collect())
}

/// The server-side rule. It sees only the query and its own storage.
pub fn answer(query: &ServerQuery, storage: &GroupStorage) -> Answer {
    let m = storage.m();
    if query.is_silent(m) {
        return Answer::Silent;
    }
    Answer::Payload(sum_packets(
        query.touched(m).filter_map(|(k, i)| storage.packet(k, i)),
    ))
}

/// Recovers `W[theta][0..M-1]` from the `M` answers.
pub fn decode(theta: usize, base: &BaseVector, answers: &[Answer]) -> Result<Vec<Packet>> {
    let m = answers.len();
    if m < 2 {
        return Err(Error::ProtocolViolation(format!("expected at least 2 answers, got {m}")));
    }
    let t = check_theta(theta, base.k())?;
    let q = base.entries();
    if q.iter().any(|&e| e >= m) {
        return Err(Error::ProtocolViolation(
            "base vector does not match the number of answers".into(),
        ));
    }
    // the server whose shifted desired index is the dummy
    let anchor = (m - 1 + m - q[t]) % m;
    let residual_silent = q.iter().enumerate().all(|(k, &e)| k == t || e == m - 1);

    let delta = match (&answers[anchor], residual_silent) {
        (Answer::Silent, true) => Packet::dummy(),
        (Answer::Payload(p), false) => p.clone(),
        (Answer::Silent, false) => {
            return Err(Error::ProtocolViolation(format!(
                "server {anchor} was silent on a non-dummy query"
            )))
        }
        (Answer::Payload(_), true) => {
            return Err(Error::ProtocolViolation(format!(
                "server {anchor} answered an all-dummy query"
            )))
        }
    };

    let mut out = vec![Packet::dummy(); m - 1];
    let mut len = None;
    for (s, a) in answers.iter().enumerate() {
        if s == anchor {
            continue;
        }
        let Answer::Payload(p) = a else {
            return Err(Error::ProtocolViolation(format!("server {s} was silent")));
        };
        if *len.get_or_insert(p.len()) != p.len() || (!delta.is_empty() && delta.len() != p.len()) {
            return Err(Error::ProtocolViolation("answer lengths disagree".into()));
        }
        out[(q[t] + s) % m] = add_packets(p, &delta);
    }
    Ok(out)
}

/// Every base vector of `[0, M-1]^K` in lexicographic order, each with
/// probability `1 / M^K`.
pub fn enumerate_realizations(m: usize, k: usize) -> Result<Realizations> {
    let count = realization_count(m, k)?;
    Ok(Realizations {
        m,
        next: Some(vec![0; k]),
        remaining: count,
    })
}

/// `M^K`, refusing spaces larger than [`MAX_REALIZATIONS`].
pub fn realization_count(m: usize, k: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameters("M must be positive".into()));
    }
    let mut count = 1u64;
    for _ in 0..k {
        count = count.saturating_mul(m as u64);
        if count > MAX_REALIZATIONS {
            return Err(Error::BudgetExceeded(format!(
                "{m}^{k} realizations exceeds {MAX_REALIZATIONS}"
            )));
        }
    }
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct Realizations {
    m: usize,
    next: Option<Vec<usize>>,
    remaining: u64,
}

impl Iterator for Realizations {
    type Item = BaseVector;

    fn next(&mut self) -> Option<BaseVector> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carried = true;
        for e in succ.iter_mut().rev() {
            *e += 1;
            if *e < self.m {
                carried = false;
                break;
            }
            *e = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        self.remaining -= 1;
        Some(BaseVector(cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for Realizations {}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(b: &[u8]) -> Packet {
        Packet::from(b)
    }

    fn storage_2x2() -> GroupStorage {
        // W1 = (w10), W2 = (w20)
        GroupStorage::new(2, vec![vec![pk(&[0x11, 0x12])], vec![pk(&[0x21, 0x22])]]).unwrap()
    }

    fn base(v: &[usize], m: usize) -> BaseVector {
        BaseVector::new(v.to_vec(), m).unwrap()
    }

    #[test]
    fn queries_shift_desired_coordinate() {
        let qs = make_queries(1, &base(&[0, 1], 2), 2).unwrap();
        assert_eq!(qs, vec![ServerQuery(vec![0, 1]), ServerQuery(vec![1, 1])]);
        let qs = make_queries(1, &base(&[2], 3), 3).unwrap();
        assert_eq!(
            qs,
            vec![ServerQuery(vec![2]), ServerQuery(vec![0]), ServerQuery(vec![1])]
        );
        for theta in 1..=3 {
            let b = base(&[1, 0, 2], 3);
            assert_eq!(make_queries(theta, &b, 3).unwrap()[0].entries(), b.entries());
        }
        assert!(make_queries(0, &base(&[0], 2), 2).is_err());
        assert!(make_queries(2, &base(&[0], 2), 2).is_err());
    }

    #[test]
    fn answers_by_hand() {
        let st = storage_2x2();
        assert_eq!(answer(&ServerQuery(vec![1, 1]), &st), Answer::Silent);
        assert_eq!(answer(&ServerQuery(vec![0, 1]), &st), Answer::Payload(pk(&[0x11, 0x12])));
        assert_eq!(
            answer(&ServerQuery(vec![0, 0]), &st),
            Answer::Payload(pk(&[0x11 ^ 0x21, 0x12 ^ 0x22]))
        );
    }

    #[test]
    fn decodes_by_hand() {
        let st = storage_2x2();
        let w10 = pk(&[0x11, 0x12]);
        let w20 = pk(&[0x21, 0x22]);

        let answers = vec![Answer::Payload(w10.clone()), Answer::Silent];
        assert_eq!(decode(1, &base(&[0, 1], 2), &answers).unwrap(), vec![w10.clone()]);

        let answers = vec![Answer::Payload(add_packets(&w10, &w20)), Answer::Payload(w20.clone())];
        assert_eq!(decode(1, &base(&[0, 0], 2), &answers).unwrap(), vec![w10.clone()]);

        for theta in 1..=2 {
            for b in enumerate_realizations(2, 2).unwrap() {
                let answers: Vec<Answer> = make_queries(theta, &b, 2)
                    .unwrap()
                    .iter()
                    .map(|q| answer(q, &st))
                    .collect();
                let want = st.file_packets(theta - 1).to_vec();
                assert_eq!(decode(theta, &b, &answers).unwrap(), want);
            }
        }
    }

    #[test]
    fn single_file_has_one_silent_server() {
        let st = GroupStorage::new(3, vec![vec![pk(&[1]), pk(&[2])]]).unwrap();
        for b in enumerate_realizations(3, 1).unwrap() {
            let answers: Vec<Answer> = make_queries(1, &b, 3)
                .unwrap()
                .iter()
                .map(|q| answer(q, &st))
                .collect();
            assert_eq!(answers.iter().filter(|a| a.is_silent()).count(), 1);
            assert_eq!(decode(1, &b, &answers).unwrap(), vec![pk(&[1]), pk(&[2])]);
        }
    }

    #[test]
    fn decode_rejects_inconsistent_answers() {
        let b = base(&[0, 0], 2);
        let bad = vec![Answer::Payload(pk(&[1])), Answer::Silent];
        assert!(matches!(decode(1, &b, &bad), Err(Error::ProtocolViolation(_))));
        let bad = vec![Answer::Payload(pk(&[1])), Answer::Payload(pk(&[1, 2]))];
        assert!(matches!(decode(1, &b, &bad), Err(Error::ProtocolViolation(_))));
        let b = base(&[0, 1], 2);
        let bad = vec![Answer::Payload(pk(&[1])), Answer::Payload(pk(&[2]))];
        assert!(matches!(decode(1, &b, &bad), Err(Error::ProtocolViolation(_))));
    }

    #[test]
    fn enumeration_order_and_guard() {
        let all: Vec<Vec<usize>> = enumerate_realizations(2, 2)
            .unwrap()
            .map(|b| b.entries().to_vec())
            .collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_realizations(3, 1).unwrap().len(), 3);
        assert_eq!(enumerate_realizations(4, 0).unwrap().count(), 1);
        assert!(enumerate_realizations(10, 7).is_err());
    }

    #[test]
    fn storage_shape_checks() {
        assert!(GroupStorage::new(3, vec![vec![pk(&[1])]]).is_err());
        assert!(GroupStorage::new(2, vec![vec![pk(&[1])], vec![pk(&[1, 2])]]).is_err());
        assert_eq!(GroupStorage::new(1, vec![]), Err(Error::DegenerateRetrieval));
    }
}
