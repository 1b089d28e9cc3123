#pragma once

#include <json.hpp>

#include "lcc/vector_list.hpp"

namespace lcc {

/// Reports keep insertion order so that identical runs serialize identically.
using Json = nlohmann::ordered_json;

/// 1-based index list for reports.
Json index_list(const std::vector<Index>& items);

}  // namespace lcc
