#include "taubethe/grasskp.hpp"

#include <functional>

namespace taubethe::grasskp {

Subset partition_to_subset(const Partition& lambda, int n_rows) {
  if (lambda.length() > n_rows) throw Error(ErrorKind::InvalidInput, "partition " + lambda.to_string() + " has too many rows");
  Subset s(static_cast<std::size_t>(n_rows));
  for (int i = 1; i <= n_rows; ++i) s[static_cast<std::size_t>(i - 1)] = lambda[n_rows - i] + i;
  return s;
}

Partition subset_to_partition(const Subset& subset) {
  const int n = static_cast<int>(subset.size());
  std::vector<int> parts(subset.size());
  for (int i = 1; i <= n; ++i) {
    if (i > 1 && subset[static_cast<std::size_t>(i - 1)] <= subset[static_cast<std::size_t>(i - 2)])
      throw Error(ErrorKind::InvalidInput, "subset must be strictly increasing");
    if (subset[static_cast<std::size_t>(i - 1)] < i) throw Error(ErrorKind::InvalidInput, "subset entries must be >= 1");
    parts[static_cast<std::size_t>(n - i)] = subset[static_cast<std::size_t>(i - 1)] - i;
  }
  return Partition(std::move(parts));
}

std::vector<Subset> k_subsets(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  Subset cur;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = next; v <= n - (k - static_cast<int>(cur.size())) + 1; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

std::string subset_to_string(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

}  // namespace taubethe::grasskp
