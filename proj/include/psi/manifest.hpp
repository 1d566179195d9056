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


#ifndef PSI_MANIFEST_HPP
#define PSI_MANIFEST_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psi/value.hpp"

namespace psi {

struct ColumnSpec {
  std::string name;
  std::string type;  // number, integer, string or boolean
  std::optional<std::vector<std::string>> enum_values;
};

/// A column whose values are rich-value URIs built from a pattern such as
/// "images/{species}.jpg". Relative results name local files and are
/// inlined as data URIs.
struct RichColumnSpec {
  std::string name;
  std::string media_type;
  std::string source;
  bool inline_data = false;
};

/// A top-level attribute. `tree` is a column name, or an array or object
/// whose leaves are column names.
struct AttributeSpec {
  std::string name;
  std::string description;
  bool is_default = false;
  Value tree;
};

struct Manifest {
  std::string name;
  std::string description;
  std::filesystem::path base_dir;
  std::filesystem::path csv_path;  // empty when rows are embedded
  std::string csv_text;            // embedded rows, used when csv_path is empty
  std::vector<ColumnSpec> columns;
  std::vector<RichColumnSpec> rich_columns;
  std::vector<AttributeSpec> attributes;
};

/// Parses and checks a manifest document. Relative paths resolve against
/// `base_dir`. Throws Error(kBadRequest) on an inconsistent manifest.
Manifest parse_manifest(const Value& doc, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

/// Typed rows of a relation. Rich columns follow the plain ones.
struct Table {
  std::vector<std::string> columns;
  std::vector<Value> emits;  // per column, in PSI schema form
  std::vector<std::vector<Value>> rows;

  /// Throws Error(kBadRequest) for an unknown column.
  std::size_t index_of(const std::string& column) const;
};

/// Reads the CSV and materialises rich columns. `force_data_uri` inlines
/// every rich value. Throws Error(kSyntax) with row and column on bad data.
Table ingest(const Manifest& manifest, bool force_data_uri = false);

}  // namespace psi

#endif  // PSI_MANIFEST_HPP
