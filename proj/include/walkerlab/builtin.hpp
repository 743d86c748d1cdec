/* Copyright 2026 The walkerlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include "walkerlab/builtin_catalog_text.hpp"
#include "walkerlab/catalog.hpp"

namespace walkerlab {

/// The catalog shipped with the library, parsed once.
inline const Catalog& builtin_catalog() {
  static const Catalog catalog = parse_catalog(detail::kBuiltinCatalogText);
  return catalog;
}

inline std::string_view builtin_catalog_text() { return detail::kBuiltinCatalogText; }

}  // namespace walkerlab
