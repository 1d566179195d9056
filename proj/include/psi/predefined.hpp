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

#ifndef PSI_PREDEFINED_HPP
#define PSI_PREDEFINED_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psi/uri.hpp"
#include "psi/value.hpp"

namespace psi {

/// The predefined value and resource schema templates, in publication order.
const std::vector<std::pair<std::string, Value>>& predefined_templates();

/// Template for `name` (without the '$'), if predefined.
const Value* find_predefined(std::string_view name);

/// "%ARG" -> "ARG"; nullopt for anything else.
std::optional<std::string> placeholder_name(const Value& v);

/// Names of all placeholders in a template.
std::set<std::string> template_arguments(const Value& tmpl);

/// Fills a schema template:
///  - a placeholder with a supplied argument is replaced by the argument;
///  - a placeholder without one removes its enclosing property (or array
///    element);
///  - an argument naming an existing root key replaces that key's value;
///  - any other argument becomes a new root property.
/// Throws Error(kMalformedSchema) when a placeholder is used as a key.
Value instantiate_template(const Value& tmpl, const Value& args);

/// Query-string argument coercion: text that parses as a JSON number,
/// boolean, array or object becomes that value; everything else stays text.
Value coerce_argument(std::string_view text);

/// Builds an argument object from decoded query pairs, skipping `skip`.
Value arguments_from_query(const QueryPairs& pairs, const std::set<std::string>& skip = {});

}  // namespace psi

#endif  // PSI_PREDEFINED_HPP
