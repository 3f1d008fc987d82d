#pragma once

#include <cstdint>
#include <vector>

#include "bsgal/cartan.hpp"

namespace bsgal {

/// The signs n(i, beta) in s_i p_beta(t) s_i^{-1} = p_{s_i(beta)}(n t) for a
/// fixed matrix realization of the group.  Filled by the matrix oracle;
/// consumed by the symbolic slide that resolves relation coefficients.
class SignTable {
 public:
  SignTable() = default;
  SignTable(const CartanDatum& d)
      : datum_(&d),
        signs_(static_cast<std::size_t>(d.rank()) * d.roots().size(), 0) {}

  const CartanDatum& datum() const { return *datum_; }
  bool empty() const { return signs_.empty(); }

  void set(int i, const Root& beta, int sign) {
    signs_[slot(i, beta)] = static_cast<int8_t>(sign);
  }

  /// +1 or -1; throws if the entry was never populated.
  int sign(int i, const Root& beta) const {
    int8_t s = signs_[slot(i, beta)];
    if (s == 0)
      throw Error("sign table has no entry for (s" + std::to_string(i) +
                  ", " + beta.to_string() + ")");
    return s;
  }

 private:
  std::size_t slot(int i, const Root& beta) const {
    return static_cast<std::size_t>(i - 1) * datum_->roots().size() +
           static_cast<std::size_t>(datum_->root_id(beta));
  }

  const CartanDatum* datum_ = nullptr;
  std::vector<int8_t> signs_;
};

}  // namespace bsgal
