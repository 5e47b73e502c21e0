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

//! Detection and characterization of multipath BGP (M-BGP) deployments.
//!
//! The crate is split along the measurement pipeline:
//!
//! * [`bgp`]: the best-path decision process with the multipath extension and
//!   per-destination load sharing.
//! * [`lg`]: parsers for looking-glass responses (`show ip bgp summary` and
//!   `show ip bgp detail <addr>`) and extraction of M-BGP evidence.
//! * [`campaign`]: the query campaign over a pluggable looking-glass transport
//!   and the aggregation of its results.
//! * [`trace`]: traceroute ingestion, two-oracle IP-to-AS mapping, border
//!   crossing extraction and deployment profiling.
//! * [`sim`]: a deterministic scenario generator producing looking-glass
//!   responses and traceroutes together with their ground truth.
//!
//! Interchangeable strategies (transports, flow hashers, clocks) are looked up
//! by name through [`registry::Registry`].

pub mod bgp;
pub mod campaign;
pub mod lg;
pub mod net;
pub mod registry;
pub mod sim;
pub mod trace;
mod types;

pub use types::{Asn, ParseAsnError, RouterName};
