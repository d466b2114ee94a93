#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ptrs.hpp"

namespace ptast::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PTRS load_corpus(const std::string& name) {
  std::string path = std::string(PTAST_CORPUS_DIR) + "/" + name + ".ptrs";
  return parse_ptrs(read_file(path), name);
}

inline Term pt(const PTRS& sys, const std::string& text) {
  return parse_term_over(text, sys.sig_mut());
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// deterministic generator for property tests
struct XorShift {
  uint64_t s;
  explicit XorShift(uint64_t seed) : s(seed ? seed : 1) {}
  uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  size_t below(size_t n) { return static_cast<size_t>(next() % n); }
};

}  // namespace ptast::test
