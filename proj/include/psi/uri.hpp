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

#ifndef PSI_URI_HPP
#define PSI_URI_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psi {

using QueryPairs = std::vector<std::pair<std::string, std::string>>;

/// Percent-encodes every octet outside the RFC 3986 unreserved set.
std::string percent_encode(std::string_view text);

/// Inverse of percent_encode. '+' is left alone (RFC 3986, not form
/// encoding). Throws Error(kMalformedUri) on a truncated or non-hex escape.
std::string percent_decode(std::string_view text);

/// `k1=v1&k2=v2`, both sides percent-encoded, pair order preserved.
std::string encode_query(const QueryPairs& pairs);

/// Splits on '&' and the first '='; a bare key yields an empty value.
/// Accepts unencoded reserved characters such as `[`, `,` and `:`.
QueryPairs decode_query(std::string_view query);

/// Last value for `key`, if present.
std::optional<std::string> query_value(const QueryPairs& pairs, std::string_view key);

struct UriParts {
  std::string scheme;     // lower-cased, without ':'
  std::string authority;  // host[:port], empty when absent
  std::string path;
  std::string query;      // without '?'
  std::string fragment;   // without '#'

  /// scheme://authority
  std::string origin() const;
  /// path[?query], never empty ("/" at minimum)
  std::string target() const;
};

/// Generic RFC 3986 decomposition. Throws Error(kMalformedUri) when there is
/// no scheme.
UriParts split_uri(std::string_view uri);

/// True when `text` starts with `scheme:` per RFC 3986 section 3.1.
bool has_uri_scheme(std::string_view text);

/// Syntactic URI check: scheme present and only URI characters (including
/// valid percent escapes) in the remainder.
bool is_valid_uri(std::string_view text);

/// Appends `query` using '?' or '&' as appropriate. Empty query is a no-op.
std::string append_query(std::string_view uri, std::string_view query);

/// Splits `path?query` at the first '?'.
std::pair<std::string, std::string> split_target(std::string_view target);

/// An RFC 2397 data URI. The payload is kept as written; it is never decoded.
struct DataUri {
  std::string media_type = "text/plain";
  std::vector<std::string> parameters;  // "key=value", in order
  bool is_base64 = false;
  std::string payload;

  std::string to_string() const;
};

/// Parses `data:[<mediatype>][;params][;base64],<payload>`. `data://` is
/// tolerated as an alias. A missing or unparseable media type falls back to
/// text/plain. Throws Error(kMalformedUri) without the `data:` prefix or
/// without the ',' separator.
DataUri parse_data_uri(std::string_view text);

/// Media type with parameters stripped, lower-cased and trimmed:
/// "Image/JPEG; q=1" -> "image/jpeg".
std::string normalize_media_type(std::string_view content_type);

/// Standard and URL-safe (unpadded) base64.
std::string base64_encode(std::string_view bytes);
std::string base64url_encode(std::string_view bytes);

}  // namespace psi

#endif  // PSI_URI_HPP
