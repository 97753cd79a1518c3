// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("no perfect matching: {0}")]
    Infeasible(String),
    #[error("invariant violation: {0}")]
    Violation(String),
}

pub type SolveResult<T> = Result<T, SolveError>;

pub(crate) fn violation<T>(msg: impl Into<String>) -> SolveResult<T> {
    Err(SolveError::Violation(msg.into()))
}
