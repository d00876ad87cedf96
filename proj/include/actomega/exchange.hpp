#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "actomega/derivation.hpp"

namespace actomega {

// Text form of derivations: one parenthesized prefix term per node,
//   (<rule-name> (<params>) "<conclusion>" <premise>*)
//   (star-l-omega (<pos>) "<conclusion>" (template n <schema>) (explicit <derivation>*))
// Schemas omit conclusions; unary repetition is (iter <rule> (<a> <b>) (<params>) <schema>)
// for a*n+b stacked steps, and star-r inside a schema is (star-r ((rep <count> <len>)...) <schema>...).
class ExchangeError : public std::runtime_error {
 public:
  ExchangeError(const std::string& msg, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

std::string write_derivation(const Derivation& d);
Derivation read_derivation(std::string_view text);

}  // namespace actomega
