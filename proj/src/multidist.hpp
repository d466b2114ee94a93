#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace ptast {

struct distribution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite multiset of (probability, payload) pairs with total mass 1.
// Duplicates are allowed and significant, so entries live in a list.
template <typename T>
class MultiDistribution {
 public:
  using Entry = std::pair<Rational, T>;

  MultiDistribution() = default;
  explicit MultiDistribution(std::vector<Entry> entries) : entries_(std::move(entries)) {
    Rational mass = 0;
    for (const Entry& e : entries_) {
      if (e.first <= 0 || e.first > 1)
        throw distribution_error("probability outside (0, 1]: " + rat_str(e.first));
      mass += e.first;
    }
    if (mass != 1) throw distribution_error("probabilities sum to " + rat_str(mass));
  }

  static MultiDistribution singleton(T payload) {
    return MultiDistribution({{Rational(1), std::move(payload)}});
  }

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  std::vector<T> support() const {
    std::vector<T> s;
    s.reserve(entries_.size());
    for (const Entry& e : entries_) s.push_back(e.second);
    return s;
  }

  template <typename F>
  auto map(F&& f) const {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<std::pair<Rational, U>> out;
    out.reserve(entries_.size());
    for (const Entry& e : entries_) out.emplace_back(e.first, f(e.second));
    return MultiDistribution<U>(std::move(out));
  }

 private:
  std::vector<Entry> entries_;
};

}  // namespace ptast
