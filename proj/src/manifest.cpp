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


#include "psi/manifest.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "psi/csv.hpp"
#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kResolutionIo, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const std::string& text_field(const Value& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
    throw Error(ErrorCode::kBadRequest, where + ": missing string \"" + key + "\"");
  }
  return obj[key].get_ref<const std::string&>();
}

void check_tree(const Value& tree, const std::set<std::string>& columns, const std::string& where) {
  if (tree.is_string()) {
    if (!columns.count(tree.get<std::string>())) {
      throw Error(ErrorCode::kBadRequest, where + ": unknown column \"" + tree.get<std::string>() + "\"");
    }
  } else if (tree.is_array() || tree.is_object()) {
    if (tree.empty()) throw Error(ErrorCode::kBadRequest, where + ": empty attribute tree");
    for (const auto& [key, sub] : tree.items()) check_tree(sub, columns, where + "/" + key);
  } else {
    throw Error(ErrorCode::kBadRequest, where + ": attribute tree leaves must be column names");
  }
}

Value parse_cell(const std::string& text, const ColumnSpec& spec, std::size_t row, const std::string& column) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::kSyntax, "row " + std::to_string(row) + ", column " + column + ": " + why);
  };
  if (spec.type == "string") {
    if (spec.enum_values) {
      bool ok = false;
      for (const auto& e : *spec.enum_values) ok = ok || e == text;
      if (!ok) throw fail("\"" + text + "\" is not one of the declared values");
    }
    return text;
  }
  if (spec.type == "boolean") {
    if (text == "true") return true;
    if (text == "false") return false;
    throw fail("expected true or false, got \"" + text + "\"");
  }
  if (spec.type == "integer") {
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
      throw fail("expected an integer, got \"" + text + "\"");
    }
    return v;
  }
  double v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw fail("expected a number, got \"" + text + "\"");
  }
  return v;
}

Value column_emits(const ColumnSpec& spec) {
  if (spec.enum_values) {
    Value e = Value::array();
    for (const auto& v : *spec.enum_values) e.push_back(v);
    return Value{{"$" + spec.type, Value{{"enum", e}}}};
  }
  return "$" + spec.type;
}

// Replaces {column} with the row's text for that column.
std::string expand_pattern(const std::string& pattern, const std::map<std::string, std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close == std::string::npos) throw Error(ErrorCode::kBadRequest, "unbalanced { in " + pattern);
      auto it = cells.find(pattern.substr(i + 1, close - i - 1));
      if (it == cells.end()) throw Error(ErrorCode::kBadRequest, "unknown column in pattern " + pattern);
      out += it->second;
      i = close;
    } else {
      out += pattern[i];
    }
  }
  return out;
}

}  // namespace

Manifest parse_manifest(const Value& doc, const fs::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  m.name = text_field(doc, "name", "manifest");
  if (m.name.empty() || m.name.find('/') != std::string::npos) {
    throw Error(ErrorCode::kBadRequest, "manifest: relation name must be a non-empty path segment");
  }
  if (doc.contains("description")) m.description = text_field(doc, "description", "manifest");
  if (doc.contains("csv")) {
    m.csv_path = base_dir / text_field(doc, "csv", "manifest");
  } else if (doc.contains("rows")) {
    m.csv_text = text_field(doc, "rows", "manifest");
  } else {
    throw Error(ErrorCode::kBadRequest, "manifest: needs \"csv\" or embedded \"rows\"");
  }

  std::set<std::string> names;
  if (!doc.contains("columns") || !doc["columns"].is_array()) {
    throw Error(ErrorCode::kBadRequest, "manifest: missing \"columns\" array");
  }
  for (const auto& c : doc["columns"]) {
    ColumnSpec spec;
    spec.name = text_field(c, "name", "column");
    spec.type = text_field(c, "type", "column " + spec.name);
    if (spec.type != "number" && spec.type != "integer" && spec.type != "string" && spec.type != "boolean") {
      throw Error(ErrorCode::kBadRequest, "column " + spec.name + ": unsupported type " + spec.type);
    }
    if (c.contains("enum")) {
      if (spec.type != "string" || !c["enum"].is_array()) {
        throw Error(ErrorCode::kBadRequest, "column " + spec.name + ": enum needs a string column and an array");
      }
      spec.enum_values.emplace();
      for (const auto& e : c["enum"]) spec.enum_values->push_back(e.get<std::string>());
    }
    if (!names.insert(spec.name).second) throw Error(ErrorCode::kBadRequest, "duplicate column " + spec.name);
    m.columns.push_back(std::move(spec));
  }
  if (doc.contains("rich_columns")) {
    for (const auto& c : doc["rich_columns"]) {
      RichColumnSpec spec;
      spec.name = text_field(c, "name", "rich column");
      spec.media_type = text_field(c, "media_type", "rich column " + spec.name);
      spec.source = text_field(c, "source", "rich column " + spec.name);
      spec.inline_data = c.contains("inline") && c["inline"].is_boolean() && c["inline"].get<bool>();
      if (!names.insert(spec.name).second) throw Error(ErrorCode::kBadRequest, "duplicate column " + spec.name);
      m.rich_columns.push_back(std::move(spec));
    }
  }
  if (!doc.contains("attributes") || !doc["attributes"].is_array() || doc["attributes"].empty()) {
    throw Error(ErrorCode::kBadRequest, "manifest: needs a non-empty \"attributes\" array");
  }
  std::set<std::string> attribute_names;
  std::size_t defaults = 0;
  for (const auto& a : doc["attributes"]) {
    AttributeSpec spec;
    spec.name = text_field(a, "name", "attribute");
    if (spec.name.empty() || spec.name.find_first_of("/?#") != std::string::npos || spec.name == "derived") {
      throw Error(ErrorCode::kBadRequest, "attribute name \"" + spec.name + "\" is not a usable path segment");
    }
    if (a.contains("description")) spec.description = text_field(a, "description", "attribute " + spec.name);
    spec.is_default = a.contains("default") && a["default"].is_boolean() && a["default"].get<bool>();
    if (!a.contains("tree")) throw Error(ErrorCode::kBadRequest, "attribute " + spec.name + ": missing tree");
    spec.tree = a["tree"];
    check_tree(spec.tree, names, "attribute " + spec.name);
    if (!attribute_names.insert(spec.name).second) {
      throw Error(ErrorCode::kBadRequest, "duplicate attribute " + spec.name);
    }
    defaults += spec.is_default ? 1 : 0;
    m.attributes.push_back(std::move(spec));
  }
  if (defaults > 1) throw Error(ErrorCode::kBadRequest, "manifest: more than one default attribute");
  if (defaults == 0) m.attributes.front().is_default = true;
  return m;
}

Manifest load_manifest(const fs::path& path) {
  Value doc;
  try {
    doc = parse_json(read_file(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

std::size_t Table::index_of(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) return i;
  }
  throw Error(ErrorCode::kBadRequest, "unknown column " + column);
}

Table ingest(const Manifest& manifest, bool force_data_uri) {
  std::string text = manifest.csv_path.empty() ? manifest.csv_text : read_file(manifest.csv_path);
  std::vector<CsvRow> records = parse_csv(text);
  if (records.empty()) throw Error(ErrorCode::kSyntax, "CSV has no header row");

  const CsvRow& header = records.front();
  std::vector<std::size_t> source_index;
  for (const auto& spec : manifest.columns) {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == spec.name) found = i;
    }
    if (found == header.size()) throw Error(ErrorCode::kSyntax, "CSV header lacks column " + spec.name);
    source_index.push_back(found);
  }

  Table table;
  for (const auto& spec : manifest.columns) {
    table.columns.push_back(spec.name);
    table.emits.push_back(column_emits(spec));
  }
  for (const auto& spec : manifest.rich_columns) {
    table.columns.push_back(spec.name);
    table.emits.push_back("@" + spec.media_type);
  }

  std::map<std::string, std::string> inlined;  // file path -> data URI
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRow& record = records[r];
    if (record.size() == 1 && record[0].empty()) continue;  // blank line
    if (record.size() != header.size()) {
      throw Error(ErrorCode::kSyntax, "row " + std::to_string(r) + ": expected " + std::to_string(header.size()) +
                                          " fields, got " + std::to_string(record.size()));
    }
    std::vector<Value> row;
    std::map<std::string, std::string> cells;
    for (std::size_t c = 0; c < manifest.columns.size(); ++c) {
      const std::string& cell = record[source_index[c]];
      row.push_back(parse_cell(cell, manifest.columns[c], r, manifest.columns[c].name));
      cells[manifest.columns[c].name] = cell;
    }
    for (const auto& spec : manifest.rich_columns) {
      std::string target = expand_pattern(spec.source, cells);
      if (has_uri_scheme(target) && !spec.inline_data && !force_data_uri) {
        row.push_back(target);
        continue;
      }
      if (has_uri_scheme(target)) {
        throw Error(ErrorCode::kBadRequest, "rich column " + spec.name + ": cannot inline remote " + target);
      }
      fs::path file = manifest.base_dir / target;
      auto it = inlined.find(file.string());
      if (it == inlined.end()) {
        DataUri uri;
        uri.media_type = spec.media_type;
        uri.is_base64 = true;
        uri.payload = base64_encode(read_file(file));
        it = inlined.emplace(file.string(), uri.to_string()).first;
      }
      row.push_back(it->second);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace psi
