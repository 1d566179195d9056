// Copyright 2026 The PSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef PSI_CONFORMANCE_HPP
#define PSI_CONFORMANCE_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "psi/transport.hpp"
#include "psi/value.hpp"

namespace psi {

struct ConformanceStep {
  std::string name;
  std::string request;   // "GET <uri>" and the like
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct ConformanceReport {
  std::vector<ConformanceStep> steps;

  std::size_t passed() const;
  std::size_t failed() const;
  bool ok() const { return !steps.empty() && failed() == 0; }
  const ConformanceStep* find(const std::string& name) const;

  /// One "PASS name" / "FAIL name: ..." line per step plus a summary line.
  std::string to_text() const;
  Value to_json() const;
};

struct ConformanceOptions {
  /// Reaches the service under test; plain HTTP when null.
  std::shared_ptr<Transport> transport;
  /// Origin of the emulated retailer service used for the cross-service join.
  std::string retailer_origin = "http://flowers.com";
  double tolerance = 1e-9;
};

/// Replays the iris walkthrough against the service at `entry`, discovering
/// every other URI from responses. Never throws; failures become steps.
ConformanceReport run_conformance(const std::string& entry, ConformanceOptions options = {});

}  // namespace psi

#endif  // PSI_CONFORMANCE_HPP
