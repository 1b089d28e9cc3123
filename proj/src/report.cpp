#include "lcc/report.hpp"

namespace lcc {

Json index_list(const std::vector<Index>& items) {
  Json a = Json::array();
  for (Index i : items) a.push_back(i + 1);
  return a;
}

}  // namespace lcc
