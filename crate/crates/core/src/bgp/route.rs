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

use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};

use crate::Asn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Origin {
    Igp,
    Egp,
    Incomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    Ebgp,
    Ibgp,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RouteError {
    #[error("AS path must not be empty")]
    EmptyAsPath,
}

/// One BGP path towards a prefix together with the attributes the decision
/// process ranks on.
///
/// The peering AS is not stored separately: it is always the first AS of the
/// path, see [`RouteCandidate::neighbor_as`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RouteCandidate {
    pub next_hop: Ipv4Addr,
    as_path: Vec<Asn>,
    pub loc_pref: u32,
    pub weight: u32,
    pub origin: Origin,
    pub med: u32,
    pub protocol: Protocol,
    pub igp_metric: u32,
    pub router_id: Ipv4Addr,
}

impl RouteCandidate {
    /// An eBGP route with default attributes (LocPref 100, everything else
    /// zero / IGP). The router ID defaults to the next hop.
    pub fn new(next_hop: Ipv4Addr, as_path: Vec<Asn>) -> Result<Self, RouteError> {
        if as_path.is_empty() {
            return Err(RouteError::EmptyAsPath);
        }
        Ok(RouteCandidate {
            next_hop,
            as_path,
            loc_pref: 100,
            weight: 0,
            origin: Origin::Igp,
            med: 0,
            protocol: Protocol::Ebgp,
            igp_metric: 0,
            router_id: next_hop,
        })
    }

    pub fn neighbor_as(&self) -> Asn {
        self.as_path[0]
    }

    pub fn as_path(&self) -> &[Asn] {
        &self.as_path
    }

    pub fn as_path_len(&self) -> usize {
        self.as_path.len()
    }

    pub fn set_as_path(&mut self, as_path: Vec<Asn>) -> Result<(), RouteError> {
        if as_path.is_empty() {
            return Err(RouteError::EmptyAsPath);
        }
        self.as_path = as_path;
        Ok(())
    }

    pub fn with_loc_pref(mut self, v: u32) -> Self {
        self.loc_pref = v;
        self
    }

    pub fn with_weight(mut self, v: u32) -> Self {
        self.weight = v;
        self
    }

    pub fn with_origin(mut self, v: Origin) -> Self {
        self.origin = v;
        self
    }

    pub fn with_med(mut self, v: u32) -> Self {
        self.med = v;
        self
    }

    pub fn with_protocol(mut self, v: Protocol) -> Self {
        self.protocol = v;
        self
    }

    pub fn with_igp_metric(mut self, v: u32) -> Self {
        self.igp_metric = v;
        self
    }

    pub fn with_router_id(mut self, v: Ipv4Addr) -> Self {
        self.router_id = v;
        self
    }

    /// The seven ranked attributes; equal tuples rank as a tie.
    pub(crate) fn ranked_attributes(&self) -> (u32, u32, usize, Origin, u32, Protocol, u32) {
        (
            self.weight,
            self.loc_pref,
            self.as_path.len(),
            self.origin,
            self.med,
            self.protocol,
            self.igp_metric,
        )
    }
}
