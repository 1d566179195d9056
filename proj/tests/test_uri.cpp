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


#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "psi/error.hpp"
#include "psi/uri.hpp"

namespace psi {
namespace {

TEST(Query, EncodesReservedCharacters) {
  EXPECT_EQ(encode_query({{"value", "[6.1,2.1,4.1,1.7]"}}), "value=%5B6.1%2C2.1%2C4.1%2C1.7%5D");
  EXPECT_EQ(encode_query({}), "");
  EXPECT_EQ(encode_query({{"fold", "2"}, {"numfolds", "5"}}), "fold=2&numfolds=5");
}

TEST(Query, DecodeIsLeftInverseOfEncode) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> printable(0x20, 0x7e), len(0, 12);
  for (int i = 0; i < 500; ++i) {
    QueryPairs pairs;
    for (int n = len(rng) % 4; n > 0; --n) {
      std::string k, v;
      for (int j = len(rng) + 1; j > 0; --j) k.push_back(static_cast<char>(printable(rng)));
      for (int j = len(rng); j > 0; --j) v.push_back(static_cast<char>(printable(rng)));
      pairs.emplace_back(k, v);
    }
    EXPECT_EQ(decode_query(encode_query(pairs)), pairs);
  }
}

TEST(Query, DecodeRejectsBadEscapes) {
  EXPECT_THROW(decode_query("a=%zz"), Error);
  EXPECT_THROW(decode_query("a=%4"), Error);
  EXPECT_EQ(percent_decode("%41%62"), "Ab");
}

TEST(Query, LookupAndAppend) {
  QueryPairs q = decode_query("instance=all&fold=2");
  EXPECT_EQ(query_value(q, "fold"), "2");
  EXPECT_FALSE(query_value(q, "numfolds").has_value());
  EXPECT_EQ(append_query("http://e.org/a", "x=1"), "http://e.org/a?x=1");
  EXPECT_EQ(append_query("http://e.org/a?t=1", "x=1"), "http://e.org/a?t=1&x=1");
}

TEST(SplitUri, Components) {
  UriParts p = split_uri("HTTP://example.org:8080/data/iris?fold=2#top");
  EXPECT_EQ(p.scheme, "http");
  EXPECT_EQ(p.authority, "example.org:8080");
  EXPECT_EQ(p.path, "/data/iris");
  EXPECT_EQ(p.query, "fold=2");
  EXPECT_EQ(p.fragment, "top");
  EXPECT_EQ(p.origin(), "http://example.org:8080");
  EXPECT_EQ(split_uri("http://example.org").target(), "/");
  EXPECT_THROW(split_uri("no scheme here"), Error);
}

TEST(SplitUri, Validity) {
  EXPECT_TRUE(is_valid_uri("http://example.org/data/iris"));
  EXPECT_TRUE(is_valid_uri("data:,hello"));
  EXPECT_FALSE(is_valid_uri("not a uri"));
  EXPECT_FALSE(is_valid_uri("http://exa mple.org"));
  EXPECT_TRUE(has_uri_scheme("https://x"));
  EXPECT_FALSE(has_uri_scheme("integer"));
}

TEST(DataUri, JpegFromTheImageAttribute) {
  DataUri d = parse_data_uri("data:image/jpeg;base64,/9j/4AAQSkZJRgABAQEA");
  EXPECT_EQ(d.media_type, "image/jpeg");
  EXPECT_TRUE(d.is_base64);
  EXPECT_EQ(d.payload, "/9j/4AAQSkZJRgABAQEA");
}

TEST(DataUri, DefaultsToTextPlain) {
  DataUri d = parse_data_uri("data:,hello");
  EXPECT_EQ(d.media_type, "text/plain");
  EXPECT_FALSE(d.is_base64);
  EXPECT_EQ(d.payload, "hello");
}

TEST(DataUri, ParametersAndSerialization) {
  DataUri d = parse_data_uri("data:text/csv;charset=utf-8,a%2Cb");
  EXPECT_EQ(d.media_type, "text/csv");
  ASSERT_EQ(d.parameters.size(), 1u);
  EXPECT_EQ(d.parameters[0], "charset=utf-8");
  EXPECT_EQ(d.to_string(), "data:text/csv;charset=utf-8,a%2Cb");
}

TEST(DataUri, MissingCommaIsMalformed) {
  try {
    parse_data_uri("data:image/png;base64");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedUri);
  }
}

TEST(DataUri, SlashSlashAliasTolerated) {
  EXPECT_EQ(parse_data_uri("data://image/png;base64,AAAA").media_type, "image/png");
}

TEST(DataUri, AgreesWithIndependentParserOnCorpus) {
  const std::vector<std::string> corpus = {
      "data:,",
      "data:,hello",
      "data:text/csv,a%2Cb",
      "data:image/jpeg;base64,/9j/4AAQ",
      "data:image/png;base64,iVBORw0KGgo=",
      "data:IMAGE/JPEG;base64,AAAA",
      "data:text/plain;charset=US-ASCII,hi",
      "data:text/html;charset=utf-8;base64,PGI+",
      "data:application/json,%7B%7D",
      "data:;base64,SGVsbG8=",
      "data:;charset=utf-8,x",
      "data:image/svg+xml,%3Csvg%3E",
      "data:audio/ogg;base64,T2dnUw==",
      "data:video/mp4;base64,AAAA",
      "data:application/octet-stream;base64,AA==",
      "data:text/plain;foo=bar;base64,aGk=",
      "data:image/gif;base64,R0lGODlh",
      "data:image/webp;base64,UklGRg==",
      "data:application/pdf;base64,JVBERi0=",
      "data:text/css,body%7B%7D",
      "data:text/javascript,alert(1)",
      "data:image/jpeg,rawbytes",
      "data:image/x-icon;base64,AAAB",
      "data:font/woff2;base64,d09GMg==",
      "data:application/xml,%3Ca%2F%3E",
      "data:text/plain,a,b,c",
      "data:message/rfc822,Subject",
      "data:model/gltf+json,%7B%7D",
      "data:application/vnd.ms-excel;base64,0M8=",
      "data:text/markdown;charset=utf-8,%23",
      "data:image/bmp;base64,Qk0=",
      "data:image/tiff;base64,SUkq",
      "data:image/avif;base64,AAAA",
      "data:text/xml,%3Cx%2F%3E",
      "data:application/zip;base64,UEsDBA==",
      "data:application/x-www-form-urlencoded,a%3D1",
      "data:multipart/mixed,--b",
      "data:text/tab-separated-values,a%09b",
      "data:text/calendar,BEGIN",
      "data:image/heic;base64,AAAA",
      "data://image/jpeg;base64,/9j/",
      "data://,x",
      "data:text,plain",
      "data:image/jpeg;name=iris.jpg;base64,/9j/",
      "data:application/ld+json,%7B%7D",
      "data:Text/Plain,x",
      "data:image/jpeg;base64,",
      "data:application/javascript;charset=utf-8,1",
      "data:text/vcard,BEGIN",
      "data:application/wasm;base64,AGFzbQ==",
  };
  ASSERT_EQ(corpus.size(), 50u);
  for (const auto& uri : corpus) {
    EXPECT_EQ(normalize_media_type(parse_data_uri(uri).media_type), oracle::rfc2397_media_type(uri)) << uri;
  }
}

TEST(MediaType, NormalizationStripsParametersAndCase) {
  EXPECT_EQ(normalize_media_type("Image/JPEG; charset=binary"), "image/jpeg");
  EXPECT_EQ(normalize_media_type(" text/plain "), "text/plain");
}

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode(""), "");
  EXPECT_EQ(base64_encode("f"), "Zg==");
  EXPECT_EQ(base64_encode("fo"), "Zm8=");
  EXPECT_EQ(base64_encode("foo"), "Zm9v");
  EXPECT_EQ(base64_encode("foobar"), "Zm9vYmFy");
  EXPECT_EQ(base64url_encode("\xfb\xff"), "-_8");
}

}  // namespace
}  // namespace psi
