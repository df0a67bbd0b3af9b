#include "taubethe/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "taubethe/error.hpp"

namespace taubethe {

Partition::Partition(std::vector<int> parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw Error(ErrorKind::InvalidInput, "negative partition part");
    if (i > 0 && parts[i] > parts[i - 1]) throw Error(ErrorKind::InvalidInput, "partition parts must be weakly decreasing");
  }
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  parts_ = std::move(parts);
}

Partition Partition::hook(int arm, int leg) {
  if (arm < 0 || leg < 0) throw Error(ErrorKind::InvalidInput, "hook arm/leg must be nonnegative");
  std::vector<int> p(static_cast<std::size_t>(leg) + 1, 1);
  p[0] = arm + 1;
  return Partition(std::move(p));
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

bool Partition::fits_in_box(int rows, int cols) const {
  return length() <= rows && (parts_.empty() || parts_.front() <= cols);
}

Partition Partition::conjugate() const {
  std::vector<int> c;
  if (parts_.empty()) return Partition();
  c.reserve(static_cast<std::size_t>(parts_.front()));
  for (int j = 1; j <= parts_.front(); ++j) {
    int count = 0;
    for (int p : parts_)
      if (p >= j) ++count;
    c.push_back(count);
  }
  return Partition(std::move(c));
}

std::string Partition::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + "]";
}

std::vector<Partition> partitions_in_box(int rows, int cols) {
  std::vector<Partition> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int row, int bound) {
    if (row == rows) {
      out.emplace_back(current);
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      current.push_back(v);
      rec(row + 1, v);
      current.pop_back();
    }
  };
  if (rows <= 0) return {Partition()};
  rec(0, cols);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  std::vector<int> current;
  std::function<void(int, int)> rec = [&](int remaining, int bound) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int v = std::min(remaining, bound); v >= 1; --v) {
      current.push_back(v);
      rec(remaining - v, v);
      current.pop_back();
    }
  };
  rec(n, n);
  return out;
}

}  // namespace taubethe
