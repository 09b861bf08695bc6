#pragma once

#include <stdexcept>
#include <string>

namespace rtb {

enum class ErrorCode {
  parameter_domain,       // distribution/diffusion parameters outside their domain
  domain,                 // function argument outside its domain
  empty_sample,
  degenerate_sample,      // dispersion underflow on an (almost) constant sample
  design_deficiency,      // a declared level has no trials
  evaluation,             // non-finite density/likelihood during evaluation
  excess_truncation,      // too many diffusion replicates hit the step budget
  not_converged,          // operation refused on a non-converged model
  empty_partition,
  undefined_probability,  // level with zero non-dropped trials
  schema,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) throw Error(code, message);
}

}  // namespace rtb
