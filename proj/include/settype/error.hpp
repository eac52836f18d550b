#pragma once

#include <stdexcept>
#include <string>

namespace settype {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A type index or token offset outside its valid range.
class index_error : public error {
 public:
  using error::error;
};

/// A caller broke an operation's precondition.
class contract_error : public error {
 public:
  using error::error;
};

/// An input is too large for an exhaustive routine.
class capacity_error : public error {
 public:
  using error::error;
};

/// A name is not present in a lexicon or dictionary.
class lookup_error : public error {
 public:
  using error::error;
};

/// Malformed file contents.
class format_error : public error {
 public:
  using error::error;
};

/// A corpus or type-system build stage produced nothing usable.
class pipeline_error : public error {
 public:
  using error::error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw contract_error(message);
}

}  // namespace detail
}  // namespace settype
