#include "taubethe/fockvev.hpp"

#include <algorithm>

namespace taubethe::fock {

MayaState::MayaState(std::set<int> added, std::set<int> removed) : added_(std::move(added)), removed_(std::move(removed)) {
  if (!added_.empty() && *added_.begin() < 0) throw Error(ErrorKind::InvalidInput, "added modes must be >= 0");
  if (!removed_.empty() && *removed_.rbegin() >= 0) throw Error(ErrorKind::InvalidInput, "removed modes must be < 0");
}

MayaState MayaState::from_partition(const Partition& lambda) {
  std::set<int> added, occupied_negative;
  const int rows = lambda.length();
  for (int i = 1; i <= rows; ++i) {
    const int s = lambda[i - 1] - i;
    if (s >= 0) added.insert(s);
    else occupied_negative.insert(s);
  }
  std::set<int> removed;
  for (int m = -1; m >= -rows; --m)
    if (!occupied_negative.count(m)) removed.insert(m);
  return MayaState(std::move(added), std::move(removed));
}

bool MayaState::occupied(int mode) const { return mode >= 0 ? added_.count(mode) > 0 : removed_.count(mode) == 0; }

int MayaState::occupied_above(int mode) const {
  const int above_added = static_cast<int>(std::distance(added_.upper_bound(mode), added_.end()));
  if (mode >= 0) return above_added;
  const int holes_above = static_cast<int>(std::distance(removed_.upper_bound(mode), removed_.end()));
  return above_added + (-mode - 1) - holes_above;
}

int MayaState::energy() const {
  int e = 0;
  for (int a : added_) e += a;
  for (int r : removed_) e -= r;
  return e;
}

Partition MayaState::to_partition() const {
  if (charge() != 0) throw Error(ErrorKind::InvalidInput, "only neutral states correspond to partitions");
  std::vector<int> occ(added_.rbegin(), added_.rend());
  const int low = removed_.empty() ? 0 : *removed_.begin();
  for (int m = -1; m >= low; --m)
    if (!removed_.count(m)) occ.push_back(m);
  std::vector<int> parts;
  for (std::size_t i = 0; i < occ.size(); ++i) parts.push_back(occ[i] + static_cast<int>(i) + 1);
  return Partition(std::move(parts));
}

std::string MayaState::to_string() const {
  std::string s = "{+";
  for (int a : added_) s += " " + std::to_string(a);
  s += "; -";
  for (int r : removed_) s += " " + std::to_string(r);
  return s + "}";
}

MayaState MayaState::with(int mode) const {
  MayaState out = *this;
  if (mode >= 0) out.added_.insert(mode);
  else out.removed_.erase(mode);
  return out;
}

MayaState MayaState::without(int mode) const {
  MayaState out = *this;
  if (mode >= 0) out.added_.erase(mode);
  else out.removed_.insert(mode);
  return out;
}

std::optional<SignedState> apply_psi(const MayaState& s, int mode) {
  if (s.occupied(mode)) return std::nullopt;
  return SignedState{s.occupied_above(mode) % 2 == 0 ? 1 : -1, s.with(mode)};
}

std::optional<SignedState> apply_psi_star(const MayaState& s, int mode) {
  if (!s.occupied(mode)) return std::nullopt;
  return SignedState{s.occupied_above(mode) % 2 == 0 ? 1 : -1, s.without(mode)};
}

std::vector<SignedState> apply_heisenberg(const MayaState& s, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "apply_heisenberg needs m >= 1");
  std::vector<int> sources;
  for (int a : s.added())
    if (!s.occupied(a - m)) sources.push_back(a);
  for (int r : s.removed())
    if (r + m < 0 && s.occupied(r + m)) sources.push_back(r + m);
  std::vector<SignedState> out;
  for (int from : sources) {
    // psi_{from-m} psi*_{from}
    auto a = apply_psi_star(s, from);
    auto b = apply_psi(a->state, from - m);
    out.push_back({a->sign * b->sign, b->state});
  }
  return out;
}

}  // namespace taubethe::fock
