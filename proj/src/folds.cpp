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

#include "psi/folds.hpp"

#include "psi/compiler.hpp"
#include "psi/error.hpp"
#include "psi/predefined.hpp"
#include "psi/validator.hpp"

namespace psi {

std::string FoldQuery::to_query() const {
  std::string q = "fold=" + std::to_string(fold) + "&numfolds=" + std::to_string(numfolds);
  if (invert) q += "&invert=true";
  return q;
}

std::string FoldQuery::describe() const {
  return std::string(invert ? " (all but fold " : " (fold ") + std::to_string(fold) + " of " +
         std::to_string(numfolds) + ")";
}

std::vector<std::size_t> select_fold(std::size_t n, const FoldQuery& q) {
  if (q.fold < 1 || q.numfolds < 1 || q.fold > q.numfolds) {
    throw Error(ErrorCode::kBadRequest, "fold must lie between 1 and numfolds");
  }
  if (q.numfolds > n) {
    throw Error(ErrorCode::kBadRequest, "numfolds " + std::to_string(q.numfolds) +
                                            " exceeds the relation size " + std::to_string(n));
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= n; ++i) {
    bool member = (i - 1) % q.numfolds == q.fold - 1;
    if (member != q.invert) out.push_back(i);
  }
  return out;
}

const Value& fold_query_schema() {
  static const Value schema = parse_json(R"json({
    "description": "Select subset 'fold' of 'numfolds' total subsets of instances. Use 'invert=true' to select every other fold.",
    "/fold": { "$integer": { "min": 1, "title": "Fold number", "description": "≤ number of folds" } },
    "/numfolds": { "$integer": { "min": 1, "title": "Total folds" } },
    "?invert": { "$boolean": { "title": "Invert selection" } }
  })json");
  return schema;
}

std::optional<FoldQuery> parse_fold_query(const QueryPairs& pairs) {
  Value args = Value::object();
  for (const auto& [key, value] : pairs) {
    if (key == "fold" || key == "numfolds" || key == "invert") {
      args[key] = coerce_argument(value);
    } else if (key == "numFolds") {
      args["numfolds"] = coerce_argument(value);
    }
  }
  if (args.empty()) return std::nullopt;

  static const Value compiled = compile(fold_query_schema(), ResolutionContext());
  if (auto outcome = validate(args, compiled); !outcome.valid()) {
    throw Error(ErrorCode::kBadRequest, "invalid fold query", outcome.describe());
  }
  FoldQuery q;
  q.fold = static_cast<std::size_t>(args["fold"].get<double>());
  q.numfolds = static_cast<std::size_t>(args["numfolds"].get<double>());
  q.invert = args.contains("invert") && args["invert"].get<bool>();
  if (q.fold > q.numfolds) throw Error(ErrorCode::kBadRequest, "fold exceeds numfolds");
  return q;
}

}  // namespace psi
