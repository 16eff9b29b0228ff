#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snipfit/frontend/library.hpp"
#include "snipfit/runtime/value.hpp"

namespace snipfit::runtime::detail {

/// A Java exception in flight; `exc` is an Object of a Throwable class.
struct JavaThrow {
  Value exc;
};

/// Step, wall-clock or cancellation budget exhausted. Not catchable by
/// interpreted code.
struct BudgetExceeded {};

/// The program used something the interpreter cannot execute.
struct Fault {
  std::string message;
};

/// Services the interpreter provides to library builtins.
class BuiltinContext {
 public:
  virtual ~BuiltinContext() = default;
  [[noreturn]] virtual void raise(std::string_view cls, std::string message) = 0;
  virtual void charge(std::uint64_t steps) = 0;
  virtual void write(std::string_view text) = 0;
  virtual ObjectRef new_object(std::string cls) = 0;
  virtual ArrayRef new_array(frontend::Type elem, std::size_t n) = 0;
  virtual std::uint64_t& random_state() = 0;
  virtual std::int64_t millis() = 0;
};

/// Largest array or string the sandbox allocates before OutOfMemoryError.
inline constexpr std::size_t kMaxAllocation = 16u << 20;

/// java.util.Random's 48-bit linear congruential generator.
std::uint64_t random_seed(std::int64_t seed);
std::int32_t random_next(std::uint64_t& state, int bits);
double random_next_double(std::uint64_t& state);

Value call_builtin(BuiltinContext& ctx, const frontend::LibMethod& m, const std::string& owner, Value* recv,
                   std::vector<Value>& args);

}  // namespace snipfit::runtime::detail
