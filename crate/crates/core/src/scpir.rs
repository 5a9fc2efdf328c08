//! Storage-constrained PIR built from replicated PIR instances.
//!
//! Each file is cut into one contiguous segment per storage group (a distinct
//! array column), sized by that group's fraction; each segment is cut into
//! `M - 1` equal packets and stored on exactly the group's `M` servers.
//! Retrieval runs one independent replicated-PIR instance per group and
//! concatenates the decoded segments.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sda::{self, AlphaAssignment, ServerSet, StorageDesignArray};
use crate::sfpir::{self, Answer, BaseVector, GroupStorage, ServerQuery};
use crate::symbols::Packet;
use crate::{download_factor, Error, Result};

/// Joint exhaustive enumeration is used only below this many realizations.
pub const JOINT_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileLibrary {
    file_len: usize,
    files: Vec<Vec<u8>>,
}

impl FileLibrary {
    pub fn new(files: Vec<Vec<u8>>) -> Result<Self> {
        let Some(first) = files.first() else {
            return Err(Error::InvalidParameters("library needs at least one file".into()));
        };
        let file_len = first.len();
        if files.iter().any(|f| f.len() != file_len) {
            return Err(Error::InvalidParameters("files differ in length".into()));
        }
        Ok(FileLibrary { file_len, files })
    }

    /// `k` files of `len` pseudo-random bytes drawn from `rng`.
    pub fn random<R: RngCore + ?Sized>(k: usize, len: usize, rng: &mut R) -> Result<Self> {
        let files = (0..k)
            .map(|_| {
                let mut f = vec![0u8; len];
                rng.fill_bytes(&mut f);
                f
            })
            .collect();
        FileLibrary::new(files)
    }

    pub fn k(&self) -> usize {
        self.files.len()
    }

    pub fn file_len(&self) -> usize {
        self.file_len
    }

    /// 1-based file access.
    pub fn file(&self, theta: usize) -> Result<&[u8]> {
        theta
            .checked_sub(1)
            .and_then(|t| self.files.get(t))
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                what: "file",
                index: theta,
                bound: self.files.len(),
            })
    }
}

/// Smallest file length `N(M-1)/gcd(N,M)` for which every array built here
/// gives integral packet sizes.
pub fn min_file_len(n: usize, m: usize) -> Result<usize> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameters(format!("need 1 <= M <= N, got N={n} M={m}")));
    }
    if m == 1 {
        return Err(Error::DegenerateRetrieval);
    }
    Ok(n * (m - 1) / n.gcd(&m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupLayout {
    pub servers: ServerSet,
    pub multiplicity: usize,
    pub group_bytes: usize,
    pub packet_bytes: usize,
    pub file_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PacketLayout {
    pub n: usize,
    pub m: usize,
    pub file_len: usize,
    pub groups: Vec<GroupLayout>,
}

impl PacketLayout {
    /// Byte range of packet `index` of group `group` inside every file.
    pub fn packet_range(&self, group: usize, index: usize) -> std::ops::Range<usize> {
        let g = &self.groups[group];
        let start = g.file_offset + index * g.packet_bytes;
        start..start + g.packet_bytes
    }
}

/// Zero-based group, file and packet-within-segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PacketId {
    pub group: usize,
    pub file: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoragePlan {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `per_server[s]` lists what server `s + 1` stores.
    pub per_server: Vec<Vec<PacketId>>,
}

impl StoragePlan {
    /// Symbols held by a 1-based server.
    pub fn stored_symbols(&self, layout: &PacketLayout, server: usize) -> usize {
        self.per_server[server - 1]
            .iter()
            .map(|p| layout.groups[p.group].packet_bytes)
            .sum()
    }
}

/// Lays every file out by `alpha` and assigns each packet to the servers of
/// its group.
pub fn plan_storage(alpha: &AlphaAssignment, k: usize, l: usize) -> Result<(PacketLayout, StoragePlan)> {
    let (n, m) = (alpha.n, alpha.m);
    let granularity = min_file_len(n, m)?;
    if k == 0 {
        return Err(Error::InvalidParameters("need at least one file".into()));
    }
    if l == 0 || !l.is_multiple_of(granularity) {
        return Err(Error::Divisibility {
            len: l,
            granularity,
        });
    }
    alpha.check()?;

    let len = BigRational::from_integer(BigInt::from(l));
    let mut groups = Vec::with_capacity(alpha.entries.len());
    let mut offset = 0;
    for (set, a) in &alpha.entries {
        let bytes = a * &len;
        let packet = &bytes / BigRational::from_integer(BigInt::from(m - 1));
        if !packet.is_integer() || packet.is_zero() {
            return Err(Error::Divisibility {
                len: l,
                granularity,
            });
        }
        let group_bytes = bytes.to_integer().to_usize().expect("group size fits usize");
        let packet_bytes = packet.to_integer().to_usize().expect("packet size fits usize");
        // multiplicity only has meaning for array-derived fractions
        let g = n.gcd(&m);
        let col = BigRational::new(BigInt::from(g), BigInt::from(n));
        let multiplicity = (a / col).to_integer().to_usize().unwrap_or(0);
        groups.push(GroupLayout {
            servers: set.clone(),
            multiplicity,
            group_bytes,
            packet_bytes,
            file_offset: offset,
        });
        offset += group_bytes;
    }
    if offset != l {
        return Err(Error::InvalidAlpha(format!("segments cover {offset} of {l} symbols")));
    }

    let mut per_server = vec![Vec::new(); n];
    for (gi, g) in groups.iter().enumerate() {
        for server in g.servers.iter() {
            for file in 0..k {
                for index in 0..m - 1 {
                    per_server[server - 1].push(PacketId {
                        group: gi,
                        file,
                        index,
                    });
                }
            }
        }
    }
    let layout = PacketLayout {
        n,
        m,
        file_len: l,
        groups,
    };
    Ok((layout, StoragePlan { n, m, k, per_server }))
}

/// `(number of groups) * (M - 1)`.
pub fn subpacketization(layout: &PacketLayout) -> usize {
    layout.groups.len() * (layout.m - 1)
}

/// Expected symbols downloaded per retrieval:
/// `sum over groups of (1 + 1/M + ... + 1/M^(K-1)) * group_bytes`.
pub fn average_download(layout: &PacketLayout, k: usize) -> BigRational {
    let factor = download_factor(layout.m, k);
    layout.groups.iter().fold(BigRational::zero(), |acc, g| {
        acc + &factor * BigRational::from_integer(BigInt::from(g.group_bytes))
    })
}

/// The packets each server actually holds, arranged per group in the shape
/// the replicated-PIR answer rule expects.
#[derive(Debug, Clone)]
pub struct ServerViews {
    /// `views[group][pos]` is the storage of the `pos`-th server of `group`.
    views: Vec<Vec<GroupStorage>>,
}

impl ServerViews {
    pub fn build(plan: &StoragePlan, layout: &PacketLayout, library: &FileLibrary) -> Result<Self> {
        if library.file_len() != layout.file_len || library.k() != plan.k {
            return Err(Error::InvalidParameters("library does not match the plan".into()));
        }
        let m = layout.m;
        let held: Vec<HashSet<PacketId>> = plan
            .per_server
            .iter()
            .map(|list| list.iter().copied().collect())
            .collect();
        let mut views = Vec::with_capacity(layout.groups.len());
        for (gi, g) in layout.groups.iter().enumerate() {
            let mut group_views = Vec::with_capacity(g.servers.len());
            for server in g.servers.iter() {
                let mut files = Vec::with_capacity(plan.k);
                for file in 0..plan.k {
                    let data = library.file(file + 1)?;
                    let mut packets = Vec::with_capacity(m - 1);
                    for index in 0..m - 1 {
                        let id = PacketId {
                            group: gi,
                            file,
                            index,
                        };
                        if !held[server - 1].contains(&id) {
                            return Err(Error::ProtocolViolation(format!(
                                "server {server} lacks packet {index} of file {} in group {gi}",
                                file + 1
                            )));
                        }
                        packets.push(Packet::from(&data[layout.packet_range(gi, index)]));
                    }
                    files.push(packets);
                }
                group_views.push(GroupStorage::new(m, files)?);
            }
            views.push(group_views);
        }
        Ok(ServerViews { views })
    }

    pub fn group(&self, group: usize) -> &[GroupStorage] {
        &self.views[group]
    }
}

/// Deliberate protocol deviations used to test that the audits catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Desired entry is `q_theta + s` without reducing mod `M`.
    UnreducedShift,
    /// The last server receives the same query as server 0.
    DuplicatedShift,
    /// The low bit of the first symbol of server 0's answer is flipped.
    FlipAnswerBit,
}

/// Queries, answers and decoded packets of one group for one base vector.
#[derive(Debug, Clone)]
pub struct GroupRun {
    pub queries: Vec<ServerQuery>,
    pub answers: Vec<Answer>,
    pub decoded: Result<Vec<Packet>>,
}

pub fn run_group(
    views: &ServerViews,
    group: usize,
    theta: usize,
    base: &BaseVector,
    fault: Fault,
) -> Result<GroupRun> {
    let storages = views.group(group);
    let m = storages.len();
    let mut queries = sfpir::make_queries(theta, base, m)?;
    match fault {
        Fault::UnreducedShift => {
            for (s, q) in queries.iter_mut().enumerate() {
                q.0[theta - 1] = base.entries()[theta - 1] + s;
            }
        }
        Fault::DuplicatedShift => queries[m - 1] = queries[0].clone(),
        Fault::None | Fault::FlipAnswerBit => {}
    }
    let mut answers: Vec<Answer> = queries
        .iter()
        .zip(storages)
        .map(|(q, st)| sfpir::answer(q, st))
        .collect();
    if fault == Fault::FlipAnswerBit {
        if let Answer::Payload(p) = &answers[0] {
            let mut bytes = p.as_bytes().to_vec();
            if let Some(b) = bytes.first_mut() {
                *b ^= 1;
            }
            answers[0] = Answer::Payload(Packet::new(bytes));
        }
    }
    let decoded = sfpir::decode(theta, base, &answers);
    Ok(GroupRun {
        queries,
        answers,
        decoded,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ServerExchange {
    pub server: usize,
    pub query: Vec<usize>,
    pub silent: bool,
    pub payload_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupTranscript {
    pub group: usize,
    pub servers: ServerSet,
    pub base: Vec<usize>,
    pub packet_bytes: usize,
    pub exchanges: Vec<ServerExchange>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetrievalTranscript {
    pub theta: usize,
    pub groups: Vec<GroupTranscript>,
    pub downloaded_symbols: u64,
    #[serde(skip)]
    pub decoded_file: Vec<u8>,
}

/// One independent replicated-PIR run per group, reassembled in layout
/// order.
pub fn retrieve(
    theta: usize,
    plan: &StoragePlan,
    layout: &PacketLayout,
    library: &FileLibrary,
    bases: &[BaseVector],
) -> Result<RetrievalTranscript> {
    let views = ServerViews::build(plan, layout, library)?;
    retrieve_with(&views, theta, layout, bases, Fault::None)
}

pub fn retrieve_with(
    views: &ServerViews,
    theta: usize,
    layout: &PacketLayout,
    bases: &[BaseVector],
    fault: Fault,
) -> Result<RetrievalTranscript> {
    if bases.len() != layout.groups.len() {
        return Err(Error::InvalidParameters(format!(
            "{} base vectors for {} groups",
            bases.len(),
            layout.groups.len()
        )));
    }
    let runs: Vec<(GroupTranscript, Vec<Packet>)> = layout
        .groups
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let run = run_group(views, gi, theta, &bases[gi], fault)?;
            let exchanges = g
                .servers
                .iter()
                .zip(run.queries.iter().zip(&run.answers))
                .map(|(server, (q, a))| ServerExchange {
                    server,
                    query: q.entries().to_vec(),
                    silent: a.is_silent(),
                    payload_len: a.len(),
                })
                .collect();
            let transcript = GroupTranscript {
                group: gi + 1,
                servers: g.servers.clone(),
                base: bases[gi].entries().to_vec(),
                packet_bytes: g.packet_bytes,
                exchanges,
            };
            Ok((transcript, run.decoded?))
        })
        .collect::<Result<_>>()?;

    let mut groups = Vec::with_capacity(runs.len());
    let mut decoded_file = Vec::with_capacity(layout.file_len);
    let mut downloaded = 0u64;
    for (t, packets) in runs {
        downloaded += t.exchanges.iter().map(|e| e.payload_len as u64).sum::<u64>();
        for p in packets {
            decoded_file.extend_from_slice(p.as_bytes());
        }
        groups.push(t);
    }
    Ok(RetrievalTranscript {
        theta,
        groups,
        downloaded_symbols: downloaded,
        decoded_file,
    })
}

/// Independent uniform base vectors, one per group.
pub fn random_bases<R: Rng + ?Sized>(layout: &PacketLayout, k: usize, rng: &mut R) -> Vec<BaseVector> {
    layout
        .groups
        .iter()
        .map(|_| BaseVector::random(layout.m, k, rng))
        .collect()
}

/// Which array construction backs a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Equal,
    Greedy,
    Improved,
}

impl Method {
    pub fn build(self, n: usize, m: usize) -> Result<StorageDesignArray> {
        match self {
            Method::Equal => sda::build_equal_size(n, m),
            Method::Greedy => sda::build_greedy(n, m),
            Method::Improved => sda::build_improved(n, m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Equal => "equal",
            Method::Greedy => "greedy",
            Method::Improved => "improved",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(Method::Equal),
            "greedy" => Ok(Method::Greedy),
            "improved" => Ok(Method::Improved),
            other => Err(Error::InvalidParameters(format!("unknown method {other:?}"))),
        }
    }
}

/// A complete deployment: array, fractions, layout, placement and a seeded
/// library.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub sda: StorageDesignArray,
    pub alpha: AlphaAssignment,
    pub layout: PacketLayout,
    pub plan: StoragePlan,
    pub library: FileLibrary,
}

impl Scheme {
    /// Files of `l_mult * N(M-1)/gcd(N,M)` symbols with contents drawn from
    /// `seed`.
    pub fn build(n: usize, m: usize, k: usize, l_mult: usize, method: Method, seed: u64) -> Result<Self> {
        if m == 1 {
            return Err(Error::DegenerateRetrieval);
        }
        let sda = method.build(n, m)?;
        let alpha = sda.column_profile().alpha();
        let l = min_file_len(n, m)? * l_mult;
        let (layout, plan) = plan_storage(&alpha, k, l)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let library = FileLibrary::random(k, l, &mut rng)?;
        Ok(Scheme {
            sda,
            alpha,
            layout,
            plan,
            library,
        })
    }

    pub fn k(&self) -> usize {
        self.library.k()
    }

    pub fn views(&self) -> Result<ServerViews> {
        ServerViews::build(&self.plan, &self.layout, &self.library)
    }
}
