#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace pdd {

using TaxonId = int;
using VertexId = int;
inline constexpr TaxonId kNoTaxon = -1;
inline constexpr VertexId kNoVertex = -1;

using TaxonSet = boost::dynamic_bitset<std::uint64_t>;

inline TaxonSet make_set(std::size_t n, std::initializer_list<TaxonId> ids) {
  TaxonSet s(n);
  for (TaxonId x : ids) s.set(static_cast<std::size_t>(x));
  return s;
}

inline TaxonSet make_set(std::size_t n, const std::vector<TaxonId>& ids) {
  TaxonSet s(n);
  for (TaxonId x : ids) s.set(static_cast<std::size_t>(x));
  return s;
}

template <class F>
void for_each_member(const TaxonSet& s, F&& f) {
  for (auto i = s.find_first(); i != TaxonSet::npos; i = s.find_next(i)) f(static_cast<TaxonId>(i));
}

inline std::vector<TaxonId> members(const TaxonSet& s) {
  std::vector<TaxonId> out;
  out.reserve(s.count());
  for_each_member(s, [&](TaxonId x) { out.push_back(x); });
  return out;
}

}  // namespace pdd
