#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace taubethe {

/// Integer partition (Young diagram). Stores only the nonzero parts; parts
/// beyond length() read as zero.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidInput unless `parts` is weakly decreasing and nonnegative.
  explicit Partition(std::vector<int> parts);

  /// Hook [arm+1, 1^(leg)].
  static Partition hook(int arm, int leg);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int size() const;
  bool empty() const { return parts_.empty(); }

  /// 0-based part access with implicit trailing zeros.
  int operator[](int i) const { return i >= 0 && i < length() ? parts_[static_cast<std::size_t>(i)] : 0; }

  bool fits_in_box(int rows, int cols) const;
  Partition conjugate() const;
  std::string to_string() const;

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// All partitions with at most `rows` parts, each at most `cols`, in lexicographic order.
std::vector<Partition> partitions_in_box(int rows, int cols);

/// All partitions of n.
std::vector<Partition> partitions_of(int n);

}  // namespace taubethe
