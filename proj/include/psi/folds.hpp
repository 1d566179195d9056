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

#ifndef PSI_FOLDS_HPP
#define PSI_FOLDS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "psi/uri.hpp"
#include "psi/value.hpp"

namespace psi {

struct FoldQuery {
  std::size_t fold = 1;
  std::size_t numfolds = 1;
  bool invert = false;

  /// "fold=2&numfolds=5" plus "&invert=true" when inverted.
  std::string to_query() const;
  /// " (fold 2 of 5)" / " (all but fold 2 of 5)"
  std::string describe() const;
};

/// 1-based indices of fold `q.fold` out of `q.numfolds` over n instances:
/// {fold, fold + numfolds, fold + 2 numfolds, ...}, or the complement when
/// inverted. Throws Error(kBadRequest) unless 1 <= fold <= numfolds <= n.
std::vector<std::size_t> select_fold(std::size_t n, const FoldQuery& q);

/// The query schema relations advertise for fold selection.
const Value& fold_query_schema();

/// Extracts fold/numfolds/invert from decoded query pairs. Returns nullopt
/// when none of them is present. Throws Error(kBadRequest) on bad values or
/// when only some of the mandatory ones are present.
std::optional<FoldQuery> parse_fold_query(const QueryPairs& pairs);

}  // namespace psi

#endif  // PSI_FOLDS_HPP
