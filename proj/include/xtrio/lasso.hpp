#pragma once

#include <cstddef>
#include <vector>

namespace xtrio {

/// Brings an ultimately periodic word `prefix . loop^omega` to its unique
/// shortest form: the loop is reduced to its primitive root and the prefix is
/// folded into the loop for as long as its last letter equals the loop's.
template <class T>
void canonicalize_lasso(std::vector<T>& prefix, std::vector<T>& loop) {
  const std::size_t n = loop.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = loop[i] == loop[i - d];
    if (periodic) {
      loop.resize(d);
      break;
    }
  }
  while (!prefix.empty() && !loop.empty() && prefix.back() == loop.back()) {
    T last = std::move(loop.back());
    loop.pop_back();
    loop.insert(loop.begin(), std::move(last));
    prefix.pop_back();
  }
}

/// Letter at index i of `prefix . loop^omega`.
template <class T>
const T& lasso_at(const std::vector<T>& prefix, const std::vector<T>& loop, std::size_t i) {
  if (i < prefix.size()) return prefix[i];
  return loop[(i - prefix.size()) % loop.size()];
}

}  // namespace xtrio
