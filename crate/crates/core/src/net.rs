// Copyright 2026 The mbgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! IPv4 helpers shared by the pipeline stages.

use std::collections::HashMap;
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;

/// Parses `a.b.c.d/len` and truncates any host bits.
pub fn parse_prefix(s: &str) -> Result<Ipv4Net, ipnet::AddrParseError> {
    s.trim().parse::<Ipv4Net>().map(|n| n.trunc())
}

/// Host addresses of a prefix in ascending order.
///
/// Network and broadcast addresses are excluded whenever the prefix has more
/// than two addresses (so a /24 yields `.1` through `.254`); /31 and /32 yield
/// every address.
pub fn host_addresses(prefix: &Ipv4Net) -> impl Iterator<Item = Ipv4Addr> {
    let net = u32::from(prefix.network());
    let size: u64 = 1u64 << (32 - prefix.prefix_len());
    let (lo, hi) = if size > 2 {
        (net as u64 + 1, net as u64 + size - 1)
    } else {
        (net as u64, net as u64 + size)
    };
    (lo..hi).map(|v| Ipv4Addr::from(v as u32))
}

/// The `x.x.x.1` address of a prefix.
pub fn first_host(prefix: &Ipv4Net) -> Ipv4Addr {
    Ipv4Addr::from(u32::from(prefix.network()).wrapping_add(1))
}

/// The /24 covering `addr`.
pub fn slash24_of(addr: Ipv4Addr) -> Ipv4Net {
    Ipv4Net::new(addr, 24).expect("24 is a valid length").trunc()
}

/// Longest-prefix-match table.
#[derive(Debug, Clone)]
pub struct PrefixMap<V> {
    by_len: Vec<HashMap<u32, V>>,
}

impl<V> Default for PrefixMap<V> {
    fn default() -> Self {
        PrefixMap {
            by_len: (0..=32).map(|_| HashMap::new()).collect(),
        }
    }
}

impl<V> PrefixMap<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a prefix, replacing and returning any previous value.
    pub fn insert(&mut self, prefix: Ipv4Net, value: V) -> Option<V> {
        let p = prefix.trunc();
        self.by_len[p.prefix_len() as usize].insert(u32::from(p.network()), value)
    }

    pub fn get_exact(&self, prefix: &Ipv4Net) -> Option<&V> {
        let p = prefix.trunc();
        self.by_len[p.prefix_len() as usize].get(&u32::from(p.network()))
    }

    /// The value of the most specific prefix containing `addr`.
    pub fn longest_match(&self, addr: Ipv4Addr) -> Option<(Ipv4Net, &V)> {
        let a = u32::from(addr);
        for len in (0..=32u8).rev() {
            let table = &self.by_len[len as usize];
            if table.is_empty() {
                continue;
            }
            let mask = if len == 0 { 0 } else { u32::MAX << (32 - len) };
            if let Some(v) = table.get(&(a & mask)) {
                let net = Ipv4Net::new(Ipv4Addr::from(a & mask), len).expect("valid length");
                return Some((net, v));
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.by_len.iter().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
