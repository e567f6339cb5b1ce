#pragma once
// Error taxonomy shared across modules. The CLI maps categories to exit
// codes (input 2, numeric 3, infeasible 4).

#include <stdexcept>
#include <string>

namespace icin {

enum class errc {
  invalid_argument,       // bad arguments, malformed files, schema violations
  positivity,             // zero or negative observed mass where positivity is required
  numeric,                // overflow / non-finite intermediate
  unsupported_size,       // table or decomposition caps exceeded
  undefined_conditional,  // both sibling patterns absent from the pattern set
  degenerate,             // degenerate sample or singular system
  infeasible,             // feasibility check failed
  io                      // filesystem problems
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace icin
