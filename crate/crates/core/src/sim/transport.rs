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

use std::sync::Arc;

use crate::campaign::{LgCommand, LgTransport, TransportError};
use crate::RouterName;

use super::scenario::Scenario;
use super::synth::{synth_route_detail, synth_summary};

/// Looking-glass transport answering from a scenario.
#[derive(Debug, Clone)]
pub struct SimTransport {
    scenario: Arc<Scenario>,
}

impl SimTransport {
    pub fn new(scenario: Scenario) -> Self {
        SimTransport {
            scenario: Arc::new(scenario),
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }
}

impl LgTransport for SimTransport {
    fn routers(&self) -> Vec<RouterName> {
        self.scenario.routers.iter().map(|r| r.name.clone()).collect()
    }

    fn query(&self, router: &RouterName, command: &str) -> Result<String, TransportError> {
        let res = match LgCommand::parse(command) {
            Some(LgCommand::Summary) => synth_summary(&self.scenario, router),
            Some(LgCommand::Detail(addr)) => synth_route_detail(&self.scenario, router, addr),
            None => return Err(TransportError::UnsupportedCommand(command.to_string())),
        };
        res.map_err(|_| TransportError::UnknownRouter(router.to_string()))
    }
}
