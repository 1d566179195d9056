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


#ifndef PSI_CSV_HPP
#define PSI_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace psi {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader. Accepts LF or CRLF line ends and an optional final line
/// break. Throws Error(kSyntax) with a 1-based line number on an unterminated
/// quote or a stray quote inside an unquoted field.
std::vector<CsvRow> parse_csv(std::string_view text);

}  // namespace psi

#endif  // PSI_CSV_HPP
