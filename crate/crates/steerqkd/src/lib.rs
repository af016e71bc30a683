// Copyright 2026 The steerqkd Developers
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

//! File formats, parameter scans and report types for the `steerqkd`
//! command-line tool. All numerics live in `steerqkd-core`.

pub mod analyze;
pub mod error;
pub mod scan;
pub mod simulate;
pub mod statefile;
pub mod table1;

pub use error::{CliError, CliResult};
pub use statefile::{FamilyName, StateSpec};
