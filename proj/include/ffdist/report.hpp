#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "ffdist/error.hpp"

namespace ffdist {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorKind::kParseError, "not a rational: '" + s + "'");
  } catch (...) {
    throw Error(ErrorKind::kParseError, "not a rational: '" + s + "'");
  }
}

/// One asserted inequality with both sides kept exact (as decimal or "num/den" text).
struct Check {
  std::string name;
  std::string lhs;
  std::string relation;  // "<=", "=", ">="
  std::string rhs;
  bool holds = false;

  [[nodiscard]] std::string describe() const {
    return name + ": " + lhs + " " + relation + " " + rhs + (holds ? " [ok]" : " [FAILED]");
  }
};

/// Throws AssertionFailed if the check does not hold. Every asserted
/// inequality always holds, so a throw here means a bug.
inline const Check& enforce(const Check& c) {
  if (!c.holds) throw Error(ErrorKind::kAssertionFailed, c.describe());
  return c;
}

/// Flat, key-sorted record of the exact quantities and checks for one instance.
class ChainReport {
 public:
  template <typename T>
  ChainReport& set(const std::string& key, T&& value) {
    doc_[key] = std::forward<T>(value);
    return *this;
  }

  ChainReport& set(const std::string& key, const Rational& r) {
    doc_[key] = to_string(r);
    return *this;
  }

  ChainReport& add(const Check& c) {
    checks_.push_back(c);
    doc_[c.name + "_lhs"] = c.lhs;
    doc_[c.name + "_rhs"] = c.rhs;
    doc_[c.name + "_holds"] = c.holds;
    return *this;
  }

  ChainReport& merge(const ChainReport& other) {
    for (const auto& [k, v] : other.doc_.items()) doc_[k] = v;
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
    return *this;
  }

  [[nodiscard]] const nlohmann::json& json() const noexcept { return doc_; }
  [[nodiscard]] const std::vector<Check>& checks() const noexcept { return checks_; }

  [[nodiscard]] bool all_hold() const {
    for (const auto& c : checks_) {
      if (!c.holds) return false;
    }
    return true;
  }

 private:
  nlohmann::json doc_ = nlohmann::json::object();
  std::vector<Check> checks_;
};

}  // namespace ffdist
