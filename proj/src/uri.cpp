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

#include "psi/uri.hpp"

#include <algorithm>
#include <cctype>

#include "psi/error.hpp"

namespace psi {
namespace {

bool is_unreserved(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// RFC 7230 token characters, used for type and subtype.
bool is_token(std::string_view s) {
  if (s.empty()) return false;
  static constexpr std::string_view kSpecials = "()<>@,;:\\\"/[]?={} \t";
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c > 0x20 && c < 0x7f && kSpecials.find(static_cast<char>(c)) == std::string_view::npos;
  });
}

bool is_uri_char(unsigned char c) {
  static constexpr std::string_view kAllowed = "-._~:/?#[]@!$&'()*+,;=";
  return std::isalnum(c) || kAllowed.find(static_cast<char>(c)) != std::string_view::npos;
}

constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (is_unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size()) {
      throw Error(ErrorCode::kMalformedUri, "truncated percent escape");
    }
    int hi = hex_value(text[i + 1]);
    int lo = hex_value(text[i + 2]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kMalformedUri,
                  "invalid percent escape \"" + std::string(text.substr(i, 3)) + "\"");
    }
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

std::string encode_query(const QueryPairs& pairs) {
  std::string out;
  for (const auto& [key, value] : pairs) {
    if (!out.empty()) out.push_back('&');
    out += percent_encode(key);
    out.push_back('=');
    out += percent_encode(value);
  }
  return out;
}

QueryPairs decode_query(std::string_view query) {
  QueryPairs pairs;
  while (!query.empty()) {
    std::size_t amp = query.find('&');
    std::string_view part = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    if (part.empty()) continue;
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) {
      pairs.emplace_back(percent_decode(part), std::string{});
    } else {
      pairs.emplace_back(percent_decode(part.substr(0, eq)), percent_decode(part.substr(eq + 1)));
    }
  }
  return pairs;
}

std::optional<std::string> query_value(const QueryPairs& pairs, std::string_view key) {
  std::optional<std::string> found;
  for (const auto& [k, v] : pairs) {
    if (k == key) found = v;
  }
  return found;
}

std::string UriParts::origin() const {
  return authority.empty() ? scheme + ":" : scheme + "://" + authority;
}

std::string UriParts::target() const {
  std::string out = path.empty() ? "/" : path;
  if (!query.empty()) out += "?" + query;
  return out;
}

bool has_uri_scheme(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  for (std::size_t i = 1; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

bool is_valid_uri(std::string_view text) {
  if (!has_uri_scheme(text)) return false;
  std::string_view rest = text.substr(text.find(':') + 1);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(rest[i]);
    if (c == '%') {
      if (i + 2 >= rest.size()) return false;
      if (hex_value(rest[i + 1]) < 0 || hex_value(rest[i + 2]) < 0) return false;
      i += 2;
      continue;
    }
    if (!is_uri_char(c)) return false;
  }
  return true;
}

UriParts split_uri(std::string_view uri) {
  if (!has_uri_scheme(uri)) {
    throw Error(ErrorCode::kMalformedUri, "URI has no scheme: " + std::string(uri));
  }
  UriParts parts;
  std::size_t colon = uri.find(':');
  parts.scheme = to_lower(uri.substr(0, colon));
  std::string_view rest = uri.substr(colon + 1);

  if (std::size_t hash = rest.find('#'); hash != std::string_view::npos) {
    parts.fragment = rest.substr(hash + 1);
    rest = rest.substr(0, hash);
  }
  if (std::size_t q = rest.find('?'); q != std::string_view::npos) {
    parts.query = rest.substr(q + 1);
    rest = rest.substr(0, q);
  }
  if (rest.substr(0, 2) == "//") {
    rest.remove_prefix(2);
    std::size_t slash = rest.find('/');
    parts.authority = rest.substr(0, slash);
    rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  }
  parts.path = rest;
  return parts;
}

std::string append_query(std::string_view uri, std::string_view query) {
  std::string out(uri);
  if (query.empty()) return out;
  out.push_back(out.find('?') == std::string::npos ? '?' : '&');
  out += query;
  return out;
}

std::pair<std::string, std::string> split_target(std::string_view target) {
  std::size_t q = target.find('?');
  if (q == std::string_view::npos) return {std::string(target), {}};
  return {std::string(target.substr(0, q)), std::string(target.substr(q + 1))};
}

std::string DataUri::to_string() const {
  std::string out = "data:" + media_type;
  for (const auto& p : parameters) out += ";" + p;
  if (is_base64) out += ";base64";
  out += ",";
  out += payload;
  return out;
}

DataUri parse_data_uri(std::string_view text) {
  if (text.size() < 5 || to_lower(text.substr(0, 5)) != "data:") {
    throw Error(ErrorCode::kMalformedUri, "not a data URI");
  }
  std::string_view rest = text.substr(5);
  if (rest.substr(0, 2) == "//") rest.remove_prefix(2);

  std::size_t comma = rest.find(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedUri, "data URI is missing the ',' separator");
  }
  DataUri uri;
  uri.payload = rest.substr(comma + 1);
  std::string_view header = rest.substr(0, comma);

  std::vector<std::string_view> segments;
  while (true) {
    std::size_t semi = header.find(';');
    segments.push_back(trim(header.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    header = header.substr(semi + 1);
  }
  if (segments.size() > 1 && to_lower(segments.back()) == "base64") {
    uri.is_base64 = true;
    segments.pop_back();
  }

  std::string_view type = segments.front();
  std::size_t slash = type.find('/');
  if (slash != std::string_view::npos && is_token(type.substr(0, slash)) &&
      is_token(type.substr(slash + 1))) {
    uri.media_type = to_lower(type);
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (!segments[i].empty()) uri.parameters.emplace_back(segments[i]);
  }
  return uri;
}

std::string normalize_media_type(std::string_view content_type) {
  std::size_t semi = content_type.find(';');
  return to_lower(trim(content_type.substr(0, semi)));
}

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    unsigned n = (static_cast<unsigned char>(bytes[i]) << 16) |
                 (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                 static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kBase64Alphabet[(n >> 18) & 63]);
    out.push_back(kBase64Alphabet[(n >> 12) & 63]);
    out.push_back(kBase64Alphabet[(n >> 6) & 63]);
    out.push_back(kBase64Alphabet[n & 63]);
  }
  if (std::size_t left = bytes.size() - i; left > 0) {
    unsigned n = static_cast<unsigned char>(bytes[i]) << 16;
    if (left == 2) n |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out.push_back(kBase64Alphabet[(n >> 18) & 63]);
    out.push_back(kBase64Alphabet[(n >> 12) & 63]);
    out.push_back(left == 2 ? kBase64Alphabet[(n >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

std::string base64url_encode(std::string_view bytes) {
  std::string out = base64_encode(bytes);
  while (!out.empty() && out.back() == '=') out.pop_back();
  for (char& c : out) {
    if (c == '+') c = '-';
    if (c == '/') c = '_';
  }
  return out;
}

}  // namespace psi
