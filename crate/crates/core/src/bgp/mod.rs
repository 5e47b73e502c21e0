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

//! BGP best-path selection with the multipath (M-BGP) extension and
//! deterministic per-destination load sharing.

mod decision;
mod hash;
mod route;

pub use decision::{compare_routes, select_installed, InstalledRouteSet, Preferred, SelectError};
pub use hash::{
    egress_next_hop, egress_next_hop_with, expected_shares, expected_shares_with, fnv1a_64, hasher_registry,
    FlowHasher, FlowKey, Fnv1aDst, Fnv1aSrcDst, ShareError, DEFAULT_HASHER,
};
pub use route::{Origin, Protocol, RouteCandidate, RouteError};

/// Default number of paths a router may install for one prefix.
pub const DEFAULT_MAX_PATHS: usize = 4;
